//! Exact minimum number of colors by branch and bound.

use super::{greedy_rips_coloring, ColoringSpec, Coloring};
use crate::error::{limit, Error, Result};
use crate::metric::FiniteMetricSpace;

pub const DEFAULT_EXACT_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactColoring {
    pub colors: usize,
    pub certificate: Coloring,
    /// Search nodes visited.
    pub nodes: u64,
}

struct Search {
    n: usize,
    /// Points at distance <= lambda.
    near: Vec<u64>,
    /// Points at distance > D.
    far: Vec<u64>,
    order: Vec<usize>,
    classes: Vec<u64>,
    assignment: Vec<u32>,
    nodes: u64,
}

impl Search {
    fn cluster_of(&self, p: usize, class: u64) -> u64 {
        let mut seen = 1u64 << p;
        let mut frontier = seen;
        while frontier != 0 {
            let q = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.near[q] & class & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen
    }

    fn admissible(&self, p: usize, class: u64) -> bool {
        let cluster = self.cluster_of(p, class);
        let mut rest = cluster;
        while rest != 0 {
            let q = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.far[q] & cluster != 0 {
                return false;
            }
        }
        true
    }

    fn assign(&mut self, pos: usize, k: usize, used: usize) -> bool {
        self.nodes += 1;
        if pos == self.n {
            return true;
        }
        let p = self.order[pos];
        // Colors are interchangeable: a fresh color is only ever the next index.
        for c in 0..k.min(used + 1) {
            let class = self.classes[c] | 1u64 << p;
            if !self.admissible(p, class) {
                continue;
            }
            self.classes[c] = class;
            self.assignment[p] = c as u32;
            if self.assign(pos + 1, k, used.max(c + 1)) {
                return true;
            }
            self.classes[c] &= !(1u64 << p);
        }
        false
    }
}

/// Fewest colors of a one-color-per-point assignment whose monochromatic
/// lambda-clusters all have diameter at most D, with a certificate.
pub fn min_colors_exact(
    space: &FiniteMetricSpace,
    spec: ColoringSpec,
    cap: usize,
) -> Result<ExactColoring> {
    let n = space.len();
    let cap = cap.min(64);
    if n > cap {
        return Err(limit("points for exact coloring", n as u128, cap as u128));
    }
    if n == 0 {
        return Ok(ExactColoring {
            colors: 0,
            certificate: Coloring::single(Vec::new()),
            nodes: 0,
        });
    }
    let mut near = vec![0u64; n];
    let mut far = vec![0u64; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = space.dist(i, j).ok_or_else(|| {
                Error::Domain(format!(
                    "distance between {} and {} is unknown",
                    space.label(i),
                    space.label(j)
                ))
            })?;
            if d <= spec.lambda {
                near[i] |= 1 << j;
            }
            if d > spec.d {
                far[i] |= 1 << j;
            }
        }
    }
    // Breadth-first order over the proximity graph keeps partial clusters local.
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u64;
    for s in 0..n {
        if placed >> s & 1 == 1 {
            continue;
        }
        placed |= 1 << s;
        let start = order.len();
        order.push(s);
        let mut head = start;
        while head < order.len() {
            let q = order[head];
            head += 1;
            let mut fresh = near[q] & !placed;
            placed |= fresh;
            while fresh != 0 {
                order.push(fresh.trailing_zeros() as usize);
                fresh &= fresh - 1;
            }
        }
    }
    // A proper coloring of the Rips graph is valid for every D >= 0.
    let upper = greedy_rips_coloring(space, spec.lambda).used_colors().len();
    let mut search = Search {
        n,
        near,
        far,
        order,
        classes: vec![0; upper],
        assignment: vec![0; n],
        nodes: 0,
    };
    for k in 1..=upper {
        search.classes.iter_mut().for_each(|c| *c = 0);
        if search.assign(0, k, 0) {
            return Ok(ExactColoring {
                colors: k,
                certificate: Coloring::single(search.assignment.clone()),
                nodes: search.nodes,
            });
        }
    }
    Err(Error::Unsound(
        "no coloring found within the greedy upper bound".into(),
    ))
}
