//! Restricted wreath products `B wr A`: finitely supported functions
//! `A -> B` (lamps) together with a cursor in `A`, and their exact word
//! length for the generating set made of the generators of `A` and the
//! generators of `B` placed at the identity.

mod bounds;
mod iterated;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde_json::{json, Value};

use crate::error::{limit, Error, Result};
use crate::groups::{Cyclic, FreeGroup, IntegerLattice, Integers, MarkedGroup, TableGroup};

pub use bounds::{ball_sizes, bk_lower_bound, zwg_lower_bound, BkBoundReport, ZwgBoundReport};
pub use iterated::{
    bilipschitz_check, dk_distance, dk_norm, BilipschitzReport, DkVector, IterElem,
    IteratedWreath,
};

/// Largest number of sites for the general visiting-walk search.
pub const MAX_WALK_SITES: usize = 15;

/// A group in which shortest walks through a set of sites can be measured.
pub trait WalkBase: MarkedGroup {
    /// Word distance `|x^{-1} y|`.
    fn word_distance(&self, x: &Self::Element, y: &Self::Element) -> Option<u64> {
        self.exact_length(&self.multiply(&self.invert(x), y))
    }

    /// Length of a shortest walk from the identity through every site,
    /// ending at `end`.
    fn visiting_walk(&self, sites: &[Self::Element], end: &Self::Element) -> Result<u64> {
        held_karp(self, sites, end)
    }
}

/// Exact shortest visiting walk by dynamic programming over site subsets.
pub fn held_karp<G: WalkBase + ?Sized>(group: &G, sites: &[G::Element], end: &G::Element) -> Result<u64> {
    let id = group.identity();
    let sites: Vec<G::Element> = sites
        .iter()
        .filter(|s| **s != id)
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let n = sites.len();
    if n > MAX_WALK_SITES {
        return Err(limit("visiting-walk sites", n as u128, MAX_WALK_SITES as u128));
    }
    let dist = |x: &G::Element, y: &G::Element| {
        group
            .word_distance(x, y)
            .ok_or_else(|| Error::Domain("word length unavailable for the acting group".into()))
    };
    if n == 0 {
        return dist(&id, end);
    }
    let mut between = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in 0..n {
            between[i][j] = dist(&sites[i], &sites[j])?;
        }
    }
    let full = 1usize << n;
    let mut dp = vec![vec![u64::MAX; n]; full];
    for i in 0..n {
        dp[1 << i][i] = dist(&id, &sites[i])?;
    }
    for mask in 1..full {
        for last in 0..n {
            let cur = dp[mask][last];
            if cur == u64::MAX || mask >> last & 1 == 0 {
                continue;
            }
            for next in 0..n {
                if mask >> next & 1 == 0 {
                    let slot = &mut dp[mask | 1 << next][next];
                    *slot = (*slot).min(cur + between[last][next]);
                }
            }
        }
    }
    let mut best = u64::MAX;
    for last in 0..n {
        best = best.min(dp[full - 1][last] + dist(&sites[last], end)?);
    }
    Ok(best)
}

impl WalkBase for Integers {
    /// The walk sweeps the hull of the sites, the origin and the endpoint,
    /// turning once at one end.
    fn visiting_walk(&self, sites: &[i64], end: &i64) -> Result<u64> {
        let lo = sites.iter().copied().chain([0, *end]).min().expect("nonempty");
        let hi = sites.iter().copied().chain([0, *end]).max().expect("nonempty");
        let left_first = -lo + (hi - lo) + (hi - end);
        let right_first = hi + (hi - lo) + (end - lo);
        Ok(left_first.min(right_first) as u64)
    }
}

impl WalkBase for IntegerLattice {}
impl WalkBase for Cyclic {}
impl WalkBase for FreeGroup {}

impl WalkBase for TableGroup {
    fn word_distance(&self, x: &usize, y: &usize) -> Option<u64> {
        let target = self.multiply(&self.invert(x), y);
        let mut seen: HashMap<usize, u64> = HashMap::from([(self.identity(), 0)]);
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(g) = queue.pop_front() {
            if g == target {
                return seen.get(&g).copied();
            }
            for s in self.generators() {
                let h = self.multiply(&g, &s);
                if !seen.contains_key(&h) {
                    seen.insert(h, seen[&g] + 1);
                    queue.push_back(h);
                }
            }
        }
        None
    }
}

/// Lamp configuration and cursor. Lamps holding the identity are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathElement<BE, AE> {
    pub support: BTreeMap<AE, BE>,
    pub cursor: AE,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct WreathProduct<B, A> {
    pub lamps: B,
    pub walk: A,
}

/// `Z/2 wr Z`.
pub type Lamplighter = WreathProduct<Cyclic, Integers>;

pub fn lamplighter() -> Lamplighter {
    WreathProduct {
        lamps: Cyclic { order: 2 },
        walk: Integers,
    }
}

/// `Z wr Z`.
pub fn integer_wreath() -> WreathProduct<Integers, Integers> {
    WreathProduct {
        lamps: Integers,
        walk: Integers,
    }
}

impl<B: MarkedGroup, A: WalkBase> WreathProduct<B, A> {
    pub fn new(lamps: B, walk: A) -> Self {
        WreathProduct { lamps, walk }
    }

    /// Element with the given lamps and cursor; identity lamps are dropped.
    pub fn element(
        &self,
        lamps: impl IntoIterator<Item = (A::Element, B::Element)>,
        cursor: A::Element,
    ) -> WreathElement<B::Element, A::Element> {
        let e = self.lamps.identity();
        WreathElement {
            support: lamps.into_iter().filter(|(_, v)| *v != e).collect(),
            cursor,
        }
    }

    /// The lamp `x` at the identity of `A`.
    pub fn lamp(&self, x: B::Element) -> WreathElement<B::Element, A::Element> {
        self.element([(self.walk.identity(), x)], self.walk.identity())
    }

    pub fn shift(&self, a: A::Element) -> WreathElement<B::Element, A::Element> {
        self.element([], a)
    }

    /// Lamp-group length plus the shortest walk through the support ending
    /// at the cursor.
    pub fn parry_length(&self, x: &WreathElement<B::Element, A::Element>) -> Result<u64> {
        let mut lamps = 0;
        for v in x.support.values() {
            lamps += self
                .lamps
                .exact_length(v)
                .ok_or_else(|| Error::Domain("lamp group has no exact length".into()))?;
        }
        let sites: Vec<A::Element> = x.support.keys().cloned().collect();
        Ok(lamps + self.walk.visiting_walk(&sites, &x.cursor)?)
    }

    /// `sum_a d_B(f(a), g(a))`, ignoring cursors.
    pub fn l1_distance(
        &self,
        f: &WreathElement<B::Element, A::Element>,
        g: &WreathElement<B::Element, A::Element>,
    ) -> Result<u64> {
        let e = self.lamps.identity();
        let keys: BTreeSet<&A::Element> = f.support.keys().chain(g.support.keys()).collect();
        let mut total = 0;
        for k in keys {
            let a = f.support.get(k).unwrap_or(&e);
            let b = g.support.get(k).unwrap_or(&e);
            total += self
                .lamps
                .exact_length(&self.lamps.multiply(&self.lamps.invert(a), b))
                .ok_or_else(|| Error::Domain("lamp group has no exact length".into()))?;
        }
        Ok(total)
    }

    pub fn distance(
        &self,
        x: &WreathElement<B::Element, A::Element>,
        y: &WreathElement<B::Element, A::Element>,
    ) -> Result<u64> {
        self.parry_length(&self.multiply(&self.invert(x), y))
    }

    pub fn to_json(&self, x: &WreathElement<B::Element, A::Element>) -> Value {
        let support: serde_json::Map<String, Value> = x
            .support
            .iter()
            .map(|(k, v)| (self.walk.label(k), Value::String(self.lamps.label(v))))
            .collect();
        json!({ "cursor": self.walk.label(&x.cursor), "support": support })
    }
}

impl<B: MarkedGroup, A: WalkBase> MarkedGroup for WreathProduct<B, A> {
    type Element = WreathElement<B::Element, A::Element>;

    fn identity(&self) -> Self::Element {
        WreathElement {
            support: BTreeMap::new(),
            cursor: self.walk.identity(),
        }
    }

    /// `(f, a)(g, b) = (f + a.g, ab)` with `(a.g)(x) = g(a^{-1} x)`.
    fn multiply(&self, x: &Self::Element, y: &Self::Element) -> Self::Element {
        let e = self.lamps.identity();
        let mut support = x.support.clone();
        for (k, v) in &y.support {
            let key = self.walk.multiply(&x.cursor, k);
            let old = support.remove(&key).unwrap_or_else(|| e.clone());
            let new = self.lamps.multiply(&old, v);
            if new != e {
                support.insert(key, new);
            }
        }
        WreathElement {
            support,
            cursor: self.walk.multiply(&x.cursor, &y.cursor),
        }
    }

    fn invert(&self, x: &Self::Element) -> Self::Element {
        let back = self.walk.invert(&x.cursor);
        WreathElement {
            support: x
                .support
                .iter()
                .map(|(k, v)| (self.walk.multiply(&back, k), self.lamps.invert(v)))
                .collect(),
            cursor: back,
        }
    }

    fn generators(&self) -> Vec<Self::Element> {
        let mut gens: Vec<Self::Element> =
            self.walk.generators().into_iter().map(|t| self.shift(t)).collect();
        gens.extend(self.lamps.generators().into_iter().map(|s| self.lamp(s)));
        gens
    }

    fn exact_length(&self, x: &Self::Element) -> Option<u64> {
        self.parry_length(x).ok()
    }

    fn label(&self, x: &Self::Element) -> String {
        self.to_json(x).to_string()
    }
}

impl<B: MarkedGroup, A: WalkBase> WalkBase for WreathProduct<B, A> {}

/// Both sides of the conjugation identity `d(x^a, y^a) = d_B(x, y) + 2|a|`
/// and the l1 lower bound, for lamps `x != y` conjugated by `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedMetricReport {
    pub distance: u64,
    pub expected: u64,
    pub l1: u64,
}

impl InducedMetricReport {
    pub fn identity_holds(&self) -> bool {
        self.distance == self.expected
    }

    pub fn l1_bound_holds(&self) -> bool {
        self.distance >= self.l1
    }
}

pub fn induced_metric_check<B: MarkedGroup, A: WalkBase>(
    w: &WreathProduct<B, A>,
    a: &A::Element,
    x: &B::Element,
    y: &B::Element,
) -> Result<InducedMetricReport> {
    if x == y {
        return Err(Error::Precondition("the two lamps must differ".into()));
    }
    // x^a = a^{-1} x a puts the lamp x at a^{-1}.
    let conj = |v: &B::Element| {
        let t = w.shift(a.clone());
        w.multiply(&w.multiply(&w.invert(&t), &w.lamp(v.clone())), &t)
    };
    let (cx, cy) = (conj(x), conj(y));
    let lamp_distance = w
        .lamps
        .exact_length(&w.lamps.multiply(&w.lamps.invert(x), y))
        .ok_or_else(|| Error::Domain("lamp group has no exact length".into()))?;
    let shift = w
        .walk
        .word_distance(&w.walk.identity(), a)
        .ok_or_else(|| Error::Domain("acting group has no exact length".into()))?;
    Ok(InducedMetricReport {
        distance: w.distance(&cx, &cy)?,
        expected: lamp_distance + 2 * shift,
        l1: w.l1_distance(&cx, &cy)?,
    })
}

/// `|ba| <= |b| + |a| <= 3 |ba|` where `b` is the lamp part and `a` the cursor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QiProductRow {
    pub length: u64,
    pub lamp_part: u64,
    pub cursor_part: u64,
}

impl QiProductRow {
    pub fn holds(&self) -> bool {
        self.length <= self.lamp_part + self.cursor_part
            && self.lamp_part + self.cursor_part <= 3 * self.length
    }
}

pub fn qi_product_check<B: MarkedGroup, A: WalkBase>(
    w: &WreathProduct<B, A>,
    samples: &[WreathElement<B::Element, A::Element>],
) -> Result<Vec<QiProductRow>> {
    samples
        .iter()
        .map(|x| {
            let lamps = WreathElement {
                support: x.support.clone(),
                cursor: w.walk.identity(),
            };
            Ok(QiProductRow {
                length: w.parry_length(x)?,
                lamp_part: w.parry_length(&lamps)?,
                cursor_part: w
                    .walk
                    .word_distance(&w.walk.identity(), &x.cursor)
                    .ok_or_else(|| Error::Domain("acting group has no exact length".into()))?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::bfs_ball;
    use proptest::prelude::*;

    fn z_element(lamps: Vec<(i64, i64)>, cursor: i64) -> WreathElement<i64, i64> {
        integer_wreath().element(lamps, cursor)
    }

    #[test]
    fn inverse_and_identity() {
        let w = integer_wreath();
        let x = z_element(vec![(0, 2), (3, -1)], 5);
        assert_eq!(w.multiply(&x, &w.invert(&x)), w.identity());
        assert_eq!(w.multiply(&w.invert(&x), &x), w.identity());
    }

    #[test]
    fn lamplighter_does_not_commute() {
        let w = lamplighter();
        let lamp = w.lamp(1);
        let step = w.shift(1);
        let a = w.multiply(&w.multiply(&lamp, &step), &w.multiply(&lamp, &step));
        let b = w.multiply(&w.multiply(&step, &lamp), &w.multiply(&step, &lamp));
        assert_ne!(a, b);
        assert_eq!(a.support.keys().copied().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(b.support.keys().copied().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn worked_lengths() {
        let w = lamplighter();
        assert_eq!(w.parry_length(&w.identity()).unwrap(), 0);
        assert_eq!(w.parry_length(&w.element([(2, 1)], 0)).unwrap(), 5);
        let z = integer_wreath();
        assert_eq!(z.parry_length(&z_element(vec![(0, 3)], 0)).unwrap(), 3);
    }

    #[test]
    fn lamplighter_lengths_match_bfs() {
        let w = lamplighter();
        let ball = bfs_ball(&w, 8, 1 << 20).unwrap();
        for (g, &len) in ball.elements.iter().zip(&ball.lengths) {
            assert_eq!(w.parry_length(g).unwrap(), len as u64, "{}", w.label(g));
        }
    }

    #[test]
    fn integer_wreath_lengths_match_bfs() {
        let w = integer_wreath();
        let ball = bfs_ball(&w, 6, 1 << 20).unwrap();
        for (g, &len) in ball.elements.iter().zip(&ball.lengths) {
            assert_eq!(w.parry_length(g).unwrap(), len as u64, "{}", w.label(g));
        }
    }

    #[test]
    fn lattice_base_lengths_match_bfs() {
        let w = WreathProduct::new(Cyclic { order: 2 }, IntegerLattice { rank: 2 });
        let ball = bfs_ball(&w, 6, 1 << 20).unwrap();
        for (g, &len) in ball.elements.iter().zip(&ball.lengths) {
            assert_eq!(w.parry_length(g).unwrap(), len as u64);
        }
    }

    #[test]
    fn conjugated_lamps() {
        let w = integer_wreath();
        let r = induced_metric_check(&w, &3, &1, &2).unwrap();
        assert_eq!((r.distance, r.expected), (7, 7));
        let r = induced_metric_check(&w, &0, &1, &4).unwrap();
        assert_eq!((r.distance, r.expected), (3, 3));
        assert!(induced_metric_check(&w, &1, &2, &2).is_err());
        let free = WreathProduct::new(FreeGroup { rank: 2 }, FreeGroup { rank: 2 });
        let r = induced_metric_check(&free, &vec![1, 2], &vec![1], &vec![-2]).unwrap();
        assert!(r.identity_holds());
    }

    #[test]
    fn table_group_walks() {
        let doc = serde_json::json!({
            "elements": ["0", "1", "2", "3", "4"],
            "mul": (0..5).map(|a| (0..5).map(|b| (a + b) % 5).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "gens": ["1", "4"],
        });
        let t = TableGroup::from_json(&doc.to_string()).unwrap();
        let c = Cyclic { order: 5 };
        for sites in [vec![1usize, 3], vec![2], vec![1, 2, 3, 4]] {
            for end in 0..5usize {
                let s64: Vec<u64> = sites.iter().map(|&v| v as u64).collect();
                assert_eq!(
                    t.visiting_walk(&sites, &end).unwrap(),
                    c.visiting_walk(&s64, &(end as u64)).unwrap()
                );
            }
        }
    }

    #[test]
    fn oversized_support_is_refused() {
        let sites: Vec<Vec<i32>> = (1..=16).map(|i| vec![1; i]).collect();
        assert!(matches!(
            FreeGroup { rank: 1 }.visiting_walk(&sites, &vec![]),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn json_shape() {
        let w = lamplighter();
        let v = w.to_json(&w.element([(2, 1)], -1));
        assert_eq!(v, json!({"cursor": "-1", "support": {"2": "1"}}));
    }

    fn arb_z_element() -> impl Strategy<Value = WreathElement<i64, i64>> {
        (proptest::collection::btree_map(-6i64..6, -3i64..4, 0..6), -6i64..6)
            .prop_map(|(m, c)| z_element(m.into_iter().collect(), c))
    }

    proptest! {
        #[test]
        fn group_axioms(x in arb_z_element(), y in arb_z_element(), z in arb_z_element()) {
            let w = integer_wreath();
            prop_assert_eq!(
                w.multiply(&w.multiply(&x, &y), &z),
                w.multiply(&x, &w.multiply(&y, &z))
            );
            prop_assert_eq!(w.multiply(&x, &w.identity()), x.clone());
            prop_assert_eq!(w.multiply(&w.identity(), &x), x.clone());
            prop_assert_eq!(w.multiply(&x, &w.invert(&x)), w.identity());
        }

        #[test]
        fn closed_form_walk_matches_dynamic_programming(
            sites in proptest::collection::btree_set(-10i64..10, 0..9),
            end in -10i64..10,
        ) {
            let sites: Vec<i64> = sites.into_iter().collect();
            prop_assert_eq!(
                Integers.visiting_walk(&sites, &end).unwrap(),
                held_karp(&Integers, &sites, &end).unwrap()
            );
        }

        #[test]
        fn l1_lower_bound(x in arb_z_element(), y in arb_z_element()) {
            let w = integer_wreath();
            prop_assert!(w.distance(&x, &y).unwrap() >= w.l1_distance(&x, &y).unwrap());
        }

        #[test]
        fn cursor_splitting_bounds(x in arb_z_element()) {
            let w = integer_wreath();
            let rows = qi_product_check(&w, &[x]).unwrap();
            prop_assert!(rows[0].holds());
        }

        #[test]
        fn lamplighter_cursor_splitting(
            lamps in proptest::collection::btree_set(-8i64..8, 0..=6),
            cursor in -8i64..8,
        ) {
            let w = lamplighter();
            let x = w.element(lamps.into_iter().map(|k| (k, 1u64)), cursor);
            prop_assert!(qi_product_check(&w, &[x]).unwrap()[0].holds());
        }

        #[test]
        fn conjugation_identity(a in -8i64..8, x in -5i64..5, y in -5i64..5) {
            prop_assume!(x != y);
            let r = induced_metric_check(&integer_wreath(), &a, &x, &y).unwrap();
            prop_assert!(r.identity_holds());
            prop_assert!(r.l1_bound_holds());
        }
    }
}
