//! Diagrams over the presentation `<x | x = x^2>` stored as pairs of ordered
//! binary forests. The top forest holds the cells `x -> x^2` read downward
//! from the top path, the bottom forest the cells read upward from the
//! bottom path; both end on the same middle path of leaves. Every caret is a
//! cell, and a dipole is a caret over the same two adjacent leaves in both
//! forests. Spherical diagrams over `x` form Thompson's group F.

mod embed;

use std::fmt;

use crate::error::{Error, Result};
use crate::groups::MarkedGroup;

pub use embed::{
    burillo_check, commuting_family, conjugate_normal_form, distortion_report, xi_embed,
    xi_embed_unchecked, BurilloReport, DistortionReport, EmbedCheck,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf,
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn node(l: Tree, r: Tree) -> Tree {
        Tree::Node(Box::new(l), Box::new(r))
    }

    /// The single caret.
    pub fn caret() -> Tree {
        Tree::node(Tree::Leaf, Tree::Leaf)
    }

    pub fn leaves(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    pub fn carets(&self) -> usize {
        match self {
            Tree::Leaf => 0,
            Tree::Node(l, r) => 1 + l.carets() + r.carets(),
        }
    }

    /// Complete tree with `2^depth` leaves.
    pub fn balanced(depth: u32) -> Tree {
        if depth == 0 {
            Tree::Leaf
        } else {
            Tree::node(Tree::balanced(depth - 1), Tree::balanced(depth - 1))
        }
    }

    /// Smallest tree containing both as rooted subtrees.
    fn union(&self, other: &Tree) -> Tree {
        match (self, other) {
            (Tree::Leaf, t) | (t, Tree::Leaf) => t.clone(),
            (Tree::Node(a, b), Tree::Node(c, d)) => Tree::node(a.union(c), b.union(d)),
        }
    }

    /// Subtrees of `big` hanging below each leaf of `self`, in leaf order.
    fn residuals(&self, big: &Tree, out: &mut Vec<Tree>) {
        match (self, big) {
            (Tree::Leaf, t) => out.push(t.clone()),
            (Tree::Node(a, b), Tree::Node(c, d)) => {
                a.residuals(c, out);
                b.residuals(d, out);
            }
            (Tree::Node(..), Tree::Leaf) => unreachable!("residual of a larger tree"),
        }
    }

    /// Replaces leaves in order by the next trees of `subs`.
    fn graft(&self, subs: &mut std::slice::Iter<'_, Tree>) -> Tree {
        match self {
            Tree::Leaf => subs.next().expect("one subtree per leaf").clone(),
            Tree::Node(l, r) => {
                let l = l.graft(subs);
                Tree::node(l, r.graft(subs))
            }
        }
    }

    /// Leaf positions `j` (counted from `offset`) of carets over leaves `j, j+1`.
    fn exposed(&self, offset: usize, out: &mut Vec<usize>) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(l, r) => {
                if **l == Tree::Leaf && **r == Tree::Leaf {
                    out.push(offset);
                    return 2;
                }
                let a = l.exposed(offset, out);
                a + r.exposed(offset + a, out)
            }
        }
    }

    /// Removes the exposed caret whose left leaf is at `target - offset`.
    fn collapse(&mut self, offset: usize, target: usize) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(l, r) => {
                if offset == target && **l == Tree::Leaf && **r == Tree::Leaf {
                    *self = Tree::Leaf;
                    return 2;
                }
                let a = l.collapse(offset, target);
                a + r.collapse(offset + a, target)
            }
        }
    }

    fn encode(&self, out: &mut String) {
        if let Tree::Node(l, r) = self {
            out.push('(');
            l.encode(out);
            out.push(')');
            r.encode(out);
        }
    }

    fn decode(chars: &[u8], pos: &mut usize) -> Result<Tree> {
        if *pos < chars.len() && chars[*pos] == b'(' {
            *pos += 1;
            let l = Tree::decode(chars, pos)?;
            if *pos >= chars.len() || chars[*pos] != b')' {
                return Err(Error::Parse("unbalanced parentheses".into()));
            }
            *pos += 1;
            let r = Tree::decode(chars, pos)?;
            Ok(Tree::node(l, r))
        } else {
            Ok(Tree::Leaf)
        }
    }
}

fn forest_leaves(f: &[Tree]) -> usize {
    f.iter().map(Tree::leaves).sum()
}

fn forest_carets(f: &[Tree]) -> usize {
    f.iter().map(Tree::carets).sum()
}

fn forest_exposed(f: &[Tree]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut offset = 0;
    for t in f {
        offset += t.exposed(offset, &mut out);
    }
    out
}

fn forest_collapse(f: &mut [Tree], target: usize) {
    let mut offset = 0;
    for t in f {
        offset += t.collapse(offset, target);
    }
}

fn forest_graft(f: &[Tree], subs: &[Tree]) -> Vec<Tree> {
    let mut it = subs.iter();
    f.iter().map(|t| t.graft(&mut it)).collect()
}

/// An `(x^p, x^q)`-diagram with `p = top.len()` and `q = bottom.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagram {
    top: Vec<Tree>,
    bottom: Vec<Tree>,
}

impl Diagram {
    /// Validates leaf counts and reduces.
    pub fn new(top: Vec<Tree>, bottom: Vec<Tree>) -> Result<Self> {
        let d = Diagram::unreduced(top, bottom)?;
        Ok(d.reduced())
    }

    /// Keeps any dipoles.
    pub fn unreduced(top: Vec<Tree>, bottom: Vec<Tree>) -> Result<Self> {
        if top.is_empty() || bottom.is_empty() {
            return Err(Error::Precondition("forests need at least one root".into()));
        }
        if forest_leaves(&top) != forest_leaves(&bottom) {
            return Err(Error::Precondition("forests have different leaf counts".into()));
        }
        Ok(Diagram { top, bottom })
    }

    /// The trivial diagram on `x^p`.
    pub fn trivial(p: usize) -> Self {
        Diagram {
            top: vec![Tree::Leaf; p],
            bottom: vec![Tree::Leaf; p],
        }
    }

    /// The single cell `x -> x^2`.
    pub fn split() -> Self {
        Diagram {
            top: vec![Tree::caret()],
            bottom: vec![Tree::Leaf, Tree::Leaf],
        }
    }

    pub fn top(&self) -> &[Tree] {
        &self.top
    }

    pub fn bottom(&self) -> &[Tree] {
        &self.bottom
    }

    /// Number of roots of the top and bottom forests.
    pub fn shape(&self) -> (usize, usize) {
        (self.top.len(), self.bottom.len())
    }

    pub fn cells(&self) -> usize {
        forest_carets(&self.top) + forest_carets(&self.bottom)
    }

    pub fn is_spherical(&self) -> bool {
        self.top.len() == 1 && self.bottom.len() == 1
    }

    pub fn is_trivial(&self) -> bool {
        self.cells() == 0
    }

    /// Leaf positions of every dipole.
    pub fn dipoles(&self) -> Vec<usize> {
        let bottom = forest_exposed(&self.bottom);
        forest_exposed(&self.top)
            .into_iter()
            .filter(|j| bottom.contains(j))
            .collect()
    }

    /// Eliminates dipoles, picking each next one with `choose` among the
    /// current candidates.
    pub fn reduce_with<F: FnMut(&[usize]) -> usize>(&self, mut choose: F) -> Diagram {
        let mut d = self.clone();
        loop {
            let candidates = d.dipoles();
            if candidates.is_empty() {
                return d;
            }
            let j = candidates[choose(&candidates) % candidates.len()];
            forest_collapse(&mut d.top, j);
            forest_collapse(&mut d.bottom, j);
        }
    }

    pub fn reduced(&self) -> Diagram {
        self.reduce_with(|_| 0)
    }

    /// Concatenation side by side.
    pub fn add(&self, other: &Diagram) -> Diagram {
        let mut top = self.top.clone();
        top.extend(other.top.iter().cloned());
        let mut bottom = self.bottom.clone();
        bottom.extend(other.bottom.iter().cloned());
        Diagram { top, bottom }
    }

    /// Flip about a horizontal line.
    pub fn inv(&self) -> Diagram {
        Diagram {
            top: self.bottom.clone(),
            bottom: self.top.clone(),
        }
    }

    /// `self` stacked over `other`, without reduction.
    pub fn stack(&self, other: &Diagram) -> Result<Diagram> {
        if self.bottom.len() != other.top.len() {
            return Err(Error::ShapeMismatch {
                bottom: self.bottom.len(),
                top: other.top.len(),
            });
        }
        let joint: Vec<Tree> = self
            .bottom
            .iter()
            .zip(&other.top)
            .map(|(a, b)| a.union(b))
            .collect();
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        for ((a, b), u) in self.bottom.iter().zip(&other.top).zip(&joint) {
            a.residuals(u, &mut upper);
            b.residuals(u, &mut lower);
        }
        Ok(Diagram {
            top: forest_graft(&self.top, &upper),
            bottom: forest_graft(&other.bottom, &lower),
        })
    }

    /// The reduced diagram of `self` stacked over `other`.
    pub fn mul(&self, other: &Diagram) -> Result<Diagram> {
        Ok(self.stack(other)?.reduced())
    }

    pub fn pow(&self, k: i64) -> Result<Diagram> {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = Diagram::trivial(self.top.len());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// Balanced-parenthesis forests, trees separated by `,`, top and bottom
    /// by `|`.
    pub fn encode(&self) -> String {
        let side = |f: &[Tree]| {
            f.iter()
                .map(|t| {
                    let mut s = String::new();
                    t.encode(&mut s);
                    s
                })
                .collect::<Vec<_>>()
                .join(",")
        };
        format!("{}|{}", side(&self.top), side(&self.bottom))
    }

    /// Parses [`Diagram::encode`] output; the result is reduced.
    pub fn decode(text: &str) -> Result<Diagram> {
        let (t, b) = text
            .trim()
            .split_once('|')
            .ok_or_else(|| Error::Parse("expected `top|bottom`".into()))?;
        let side = |s: &str| -> Result<Vec<Tree>> {
            s.split(',')
                .map(|part| {
                    let bytes = part.as_bytes();
                    if bytes.iter().any(|c| *c != b'(' && *c != b')') {
                        return Err(Error::Parse(format!("unexpected character in {part:?}")));
                    }
                    let mut pos = 0;
                    let tree = Tree::decode(bytes, &mut pos)?;
                    if pos != bytes.len() {
                        return Err(Error::Parse(format!("trailing input in {part:?}")));
                    }
                    Ok(tree)
                })
                .collect()
        };
        Diagram::new(side(t)?, side(b)?)
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

/// `x_0 = pi (e + pi) (pi^{-1} + e) pi^{-1}` with `pi` the single cell.
pub fn gen_x0() -> Diagram {
    let pi = Diagram::split();
    let e = Diagram::trivial(1);
    pi.mul(&e.add(&pi))
        .and_then(|d| d.mul(&pi.inv().add(&e)))
        .and_then(|d| d.mul(&pi.inv()))
        .expect("shapes agree")
}

/// `x_1 = pi (e + x_0) pi^{-1}`.
pub fn gen_x1() -> Diagram {
    let pi = Diagram::split();
    pi.mul(&Diagram::trivial(1).add(&gen_x0()))
        .and_then(|d| d.mul(&pi.inv()))
        .expect("shapes agree")
}

/// Number of cells of `d1^{-1} d2`.
pub fn diagram_dist(d1: &Diagram, d2: &Diagram) -> Result<usize> {
    Ok(d1.inv().mul(d2)?.cells())
}

/// Thompson's group F generated by `x_0, x_1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ThompsonF;

impl MarkedGroup for ThompsonF {
    type Element = Diagram;

    fn identity(&self) -> Diagram {
        Diagram::trivial(1)
    }

    fn multiply(&self, a: &Diagram, b: &Diagram) -> Diagram {
        a.mul(b).expect("spherical diagrams")
    }

    fn invert(&self, a: &Diagram) -> Diagram {
        a.inv()
    }

    fn generators(&self) -> Vec<Diagram> {
        let (x0, x1) = (gen_x0(), gen_x1());
        vec![x0.inv(), x0, x1.inv(), x1]
    }

    fn label(&self, g: &Diagram) -> String {
        g.encode()
    }
}
