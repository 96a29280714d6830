//! Finitely generated groups with a symmetric generating set, and word
//! balls enumerated by breadth-first search in the Cayley graph.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use serde::Deserialize;

use crate::error::{limit, Error, Result};
use crate::metric::{int, FiniteMetricSpace};

/// A group given by an exact multiplication oracle. Element values must be
/// canonical: two values are equal iff they denote the same group element.
pub trait MarkedGroup {
    type Element: Clone + Eq + Hash + Ord + Debug;

    fn identity(&self) -> Self::Element;
    fn multiply(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn invert(&self, a: &Self::Element) -> Self::Element;
    /// Symmetric generating set.
    fn generators(&self) -> Vec<Self::Element>;

    /// Word length from a closed form, when the group has one.
    fn exact_length(&self, _g: &Self::Element) -> Option<u64> {
        None
    }

    fn label(&self, g: &Self::Element) -> String {
        format!("{g:?}")
    }
}

/// Z with generators ±1.
#[derive(Debug, Clone, Copy, Default)]
pub struct Integers;

impl MarkedGroup for Integers {
    type Element = i64;
    fn identity(&self) -> i64 {
        0
    }
    fn multiply(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }
    fn invert(&self, a: &i64) -> i64 {
        -a
    }
    fn generators(&self) -> Vec<i64> {
        vec![1, -1]
    }
    fn exact_length(&self, g: &i64) -> Option<u64> {
        Some(g.unsigned_abs())
    }
}

/// Z^n with the standard basis and its negatives.
#[derive(Debug, Clone, Copy)]
pub struct IntegerLattice {
    pub rank: usize,
}

impl MarkedGroup for IntegerLattice {
    type Element = Vec<i64>;
    fn identity(&self) -> Vec<i64> {
        vec![0; self.rank]
    }
    fn multiply(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn invert(&self, a: &Vec<i64>) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }
    fn generators(&self) -> Vec<Vec<i64>> {
        let mut gens = Vec::with_capacity(2 * self.rank);
        for i in 0..self.rank {
            for s in [1, -1] {
                let mut e = vec![0; self.rank];
                e[i] = s;
                gens.push(e);
            }
        }
        gens
    }
    fn exact_length(&self, g: &Vec<i64>) -> Option<u64> {
        Some(g.iter().map(|x| x.unsigned_abs()).sum())
    }
}

/// Z/m with generators ±1 (a single generator when m <= 2).
#[derive(Debug, Clone, Copy)]
pub struct Cyclic {
    pub order: u64,
}

impl MarkedGroup for Cyclic {
    type Element = u64;
    fn identity(&self) -> u64 {
        0
    }
    fn multiply(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.order
    }
    fn invert(&self, a: &u64) -> u64 {
        (self.order - a) % self.order
    }
    fn generators(&self) -> Vec<u64> {
        match self.order {
            1 => vec![],
            2 => vec![1],
            m => vec![1, m - 1],
        }
    }
    fn exact_length(&self, g: &u64) -> Option<u64> {
        Some((*g).min(self.order - g))
    }
}

/// Free group of the given rank; letters are ±1..=±rank, words are reduced.
#[derive(Debug, Clone, Copy)]
pub struct FreeGroup {
    pub rank: i32,
}

impl MarkedGroup for FreeGroup {
    type Element = Vec<i32>;
    fn identity(&self) -> Vec<i32> {
        Vec::new()
    }
    fn multiply(&self, a: &Vec<i32>, b: &Vec<i32>) -> Vec<i32> {
        let mut out = a.clone();
        for &l in b {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        out
    }
    fn invert(&self, a: &Vec<i32>) -> Vec<i32> {
        a.iter().rev().map(|l| -l).collect()
    }
    fn generators(&self) -> Vec<Vec<i32>> {
        (1..=self.rank).flat_map(|l| [vec![l], vec![-l]]).collect()
    }
    fn exact_length(&self, g: &Vec<i32>) -> Option<u64> {
        Some(g.len() as u64)
    }
}

#[derive(Debug, Deserialize)]
struct TableDoc {
    elements: Vec<String>,
    mul: Vec<Vec<usize>>,
    gens: Vec<String>,
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone)]
pub struct TableGroup {
    names: Vec<String>,
    mul: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    gens: Vec<usize>,
}

impl TableGroup {
    /// Parses `{"elements": [...], "mul": [[...]], "gens": [...]}` where
    /// `mul[i][j]` is the index of `elements[i] * elements[j]` and `gens`
    /// names elements.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TableDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let n = doc.elements.len();
        if n == 0 || doc.mul.len() != n || doc.mul.iter().any(|r| r.len() != n) {
            return Err(Error::Parse(format!("multiplication table is not {n}x{n}")));
        }
        if doc.mul.iter().flatten().any(|&v| v >= n) {
            return Err(Error::Parse("table entry out of range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| doc.mul[e][g] == g && doc.mul[g][e] == g))
            .ok_or_else(|| Error::Parse("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| doc.mul[g][h] == identity && doc.mul[h][g] == identity)
                .ok_or_else(|| Error::Parse(format!("{} has no inverse", doc.elements[g])))?;
            inverse.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if doc.mul[doc.mul[a][b]][c] != doc.mul[a][doc.mul[b][c]] {
                        return Err(Error::Parse("table is not associative".into()));
                    }
                }
            }
        }
        let mut gens = Vec::new();
        for name in &doc.gens {
            let g = doc
                .elements
                .iter()
                .position(|e| e == name)
                .ok_or_else(|| Error::Parse(format!("unknown generator {name}")))?;
            gens.push(g);
        }
        if gens.iter().any(|g| !gens.contains(&inverse[*g])) {
            return Err(Error::Parse("generators are not closed under inverse".into()));
        }
        Ok(TableGroup {
            names: doc.elements,
            mul: doc.mul,
            identity,
            inverse,
            gens,
        })
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }
}

impl MarkedGroup for TableGroup {
    type Element = usize;
    fn identity(&self) -> usize {
        self.identity
    }
    fn multiply(&self, a: &usize, b: &usize) -> usize {
        self.mul[*a][*b]
    }
    fn invert(&self, a: &usize) -> usize {
        self.inverse[*a]
    }
    fn generators(&self) -> Vec<usize> {
        self.gens.clone()
    }
    fn label(&self, g: &usize) -> String {
        self.names[*g].clone()
    }
}

/// Elements of a word ball in BFS order with their word lengths.
#[derive(Debug, Clone)]
pub struct WordBall<E> {
    pub elements: Vec<E>,
    pub lengths: Vec<u32>,
    index: HashMap<E, usize>,
}

impl<E: Clone + Eq + Hash> WordBall<E> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, g: &E) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn length_of(&self, g: &E) -> Option<u32> {
        self.position(g).map(|i| self.lengths[i])
    }

    /// Number of elements of length exactly `r`.
    pub fn sphere_size(&self, r: u32) -> usize {
        self.lengths.iter().filter(|&&l| l == r).count()
    }

    pub fn ball_size(&self, r: u32) -> usize {
        self.lengths.iter().filter(|&&l| l <= r).count()
    }
}

/// Breadth-first enumeration of all elements of word length at most `radius`.
pub fn bfs_ball<G: MarkedGroup>(
    group: &G,
    radius: u32,
    cap: usize,
) -> Result<WordBall<G::Element>> {
    let gens = group.generators();
    let id = group.identity();
    let mut ball = WordBall {
        elements: vec![id.clone()],
        lengths: vec![0],
        index: HashMap::from([(id, 0)]),
    };
    let mut frontier = 0..1;
    for layer in 1..=radius {
        let start = ball.elements.len();
        for i in frontier.clone() {
            for s in &gens {
                let g = group.multiply(&ball.elements[i], s);
                if let Entry::Vacant(slot) = ball.index.entry(g.clone()) {
                    if ball.elements.len() >= cap {
                        return Err(limit("word ball", cap as u128 + 1, cap as u128));
                    }
                    slot.insert(ball.elements.len());
                    ball.elements.push(g);
                    ball.lengths.push(layer);
                }
            }
        }
        frontier = start..ball.elements.len();
        if frontier.is_empty() {
            break;
        }
    }
    Ok(ball)
}

/// The word ball as a metric space with `d(g, h) = |g^{-1} h|`. Distances come
/// from the group's closed form when available, otherwise from the ball
/// itself; they are absent when `g^{-1} h` lies outside the ball.
pub fn word_ball<G>(group: G, radius: u32, cap: usize) -> Result<FiniteMetricSpace>
where
    G: MarkedGroup + Send + Sync + 'static,
    G::Element: Send + Sync,
{
    let ball = bfs_ball(&group, radius, cap)?;
    let labels = ball.elements.iter().map(|g| group.label(g)).collect();
    Ok(FiniteMetricSpace::from_oracle(labels, move |i, j| {
        let diff = group.multiply(&group.invert(&ball.elements[i]), &ball.elements[j]);
        group
            .exact_length(&diff)
            .map(|l| l as i64)
            .or_else(|| ball.length_of(&diff).map(i64::from))
            .map(int)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::DEFAULT_POINT_CAP;

    #[test]
    fn integer_ball() {
        let b = word_ball(Integers, 3, DEFAULT_POINT_CAP).unwrap();
        assert_eq!(b.len(), 7);
        let lo = b.index_of("-3").unwrap();
        let hi = b.index_of("3").unwrap();
        assert_eq!(b.dist(lo, hi), Some(int(6)));
        assert!(b.check_axioms().is_ok());
    }

    #[test]
    fn lattice_ball() {
        let b = bfs_ball(&IntegerLattice { rank: 2 }, 1, 100).unwrap();
        assert_eq!(b.len(), 5);
        let b = bfs_ball(&IntegerLattice { rank: 2 }, 3, 100).unwrap();
        assert_eq!(b.len(), 25);
    }

    #[test]
    fn free_group_spheres() {
        let b = bfs_ball(&FreeGroup { rank: 2 }, 3, 1000).unwrap();
        assert_eq!(b.sphere_size(1), 4);
        assert_eq!(b.sphere_size(2), 12);
        assert_eq!(b.sphere_size(3), 36);
        for (g, &l) in b.elements.iter().zip(&b.lengths) {
            assert_eq!(FreeGroup { rank: 2 }.exact_length(g), Some(l as u64));
        }
    }

    #[test]
    fn ball_cap_is_enforced() {
        assert!(matches!(
            bfs_ball(&FreeGroup { rank: 2 }, 5, 50),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn truncated_distances_are_absent() {
        // No closed form: go through a table group (Z/8, generator ±1).
        let n = 8;
        let names: Vec<String> = (0..n).map(|i| format!("\"{i}\"")).collect();
        let mul: Vec<String> = (0..n)
            .map(|a| {
                let row: Vec<String> = (0..n).map(|b| ((a + b) % n).to_string()).collect();
                format!("[{}]", row.join(","))
            })
            .collect();
        let text = format!(
            "{{\"elements\":[{}],\"mul\":[{}],\"gens\":[\"1\",\"7\"]}}",
            names.join(","),
            mul.join(",")
        );
        let g = TableGroup::from_json(&text).unwrap();
        let space = word_ball(g, 2, 100).unwrap();
        assert_eq!(space.len(), 5);
        let a = space.index_of("2").unwrap();
        let b = space.index_of("6").unwrap();
        // 6 - 2 = 4 has length 4 in Z/8, outside the radius-2 ball.
        assert_eq!(space.dist(a, b), None);
        let c = space.index_of("1").unwrap();
        assert_eq!(space.dist(a, c), Some(int(1)));
    }

    #[test]
    fn table_validation() {
        let bad = r#"{"elements":["e","a"],"mul":[[0,1],[1,1]],"gens":["a"]}"#;
        assert!(TableGroup::from_json(bad).is_err());
        let z2 = r#"{"elements":["e","a"],"mul":[[0,1],[1,0]],"gens":["a"]}"#;
        let g = TableGroup::from_json(z2).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(bfs_ball(&g, 4, 10).unwrap().len(), 2);
    }
}
