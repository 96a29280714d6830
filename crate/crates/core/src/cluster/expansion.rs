//! Boundary expansion of subsets of bounded diameter, and the color-count
//! lower bound it forces.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{limit, Error, Result};
use crate::metric::{int, Rational};

/// Outcome of a universally quantified check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    /// No tested set violated the inequality.
    Pass { checked: u64 },
    /// `witness` violates the inequality.
    Fail {
        witness: W,
        size: usize,
        boundary: usize,
        checked: u64,
    },
    /// The budget ran out before the search finished.
    Indeterminate { checked: u64 },
}

impl<W> Verdict<W> {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    pub fn checked(&self) -> u64 {
        match self {
            Verdict::Pass { checked }
            | Verdict::Fail { checked, .. }
            | Verdict::Indeterminate { checked } => *checked,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Pass { .. } => "PASS",
            Verdict::Fail { .. } => "FAIL",
            Verdict::Indeterminate { .. } => "INDETERMINATE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

/// Parameters of the expansion property: every set of diameter at most `r`
/// has at least `epsilon` times as many boundary vertices as members.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpansionSpec {
    pub epsilon: Rational,
    pub r: Rational,
}

impl ExpansionSpec {
    pub fn new(epsilon: Rational, r: Rational) -> Result<Self> {
        if epsilon <= int(0) {
            return Err(Error::Precondition("epsilon must be positive".into()));
        }
        if r < int(0) {
            return Err(Error::Precondition("r must be nonnegative".into()));
        }
        Ok(ExpansionSpec { epsilon, r })
    }

    /// `boundary >= epsilon * size`, exactly.
    pub fn holds(&self, size: usize, boundary: usize) -> bool {
        boundary as i128 * *self.epsilon.denom() as i128
            >= *self.epsilon.numer() as i128 * size as i128
    }
}

/// Simple undirected graph with labelled vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Precondition(format!("edge ({u},{v}) leaves the graph")));
            }
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { labels, adj })
    }

    /// One `u v` pair per line; a line with a single token adds an isolated vertex.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut labels = Vec::new();
        let mut edges = Vec::new();
        let mut id = |name: &str, labels: &mut Vec<String>| {
            *index.entry(name.to_string()).or_insert_with(|| {
                labels.push(name.to_string());
                labels.len() - 1
            })
        };
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                [a] => {
                    id(a, &mut labels);
                }
                [a, b] => {
                    let u = id(a, &mut labels);
                    let v = id(b, &mut labels);
                    edges.push((u, v));
                }
                _ => return Err(Error::Parse(format!("line {}: expected `u v`", no + 1))),
            }
        }
        Graph::new(labels, &edges)
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new((0..n).map(|i| i.to_string()).collect(), &edges).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Graph::new((0..n).map(|i| i.to_string()).collect(), &edges).expect("valid clique")
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    /// All-pairs hop distances; `u32::MAX` marks unreachable pairs.
    pub fn distances(&self) -> Vec<Vec<u32>> {
        (0..self.len())
            .map(|s| {
                let mut d = vec![u32::MAX; self.len()];
                d[s] = 0;
                let mut queue = VecDeque::from([s]);
                while let Some(u) = queue.pop_front() {
                    for &v in &self.adj[u] {
                        if d[v] == u32::MAX {
                            d[v] = d[u] + 1;
                            queue.push_back(v);
                        }
                    }
                }
                d
            })
            .collect()
    }

    /// Vertices outside `set` adjacent to it.
    pub fn boundary(&self, set: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.len()];
        for &v in set {
            inside[v] = true;
        }
        let mut mark = vec![false; self.len()];
        let mut out = Vec::new();
        for &v in set {
            for &w in &self.adj[v] {
                if !inside[w] && !mark[w] {
                    mark[w] = true;
                    out.push(w);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

struct Tracker {
    spec: ExpansionSpec,
    checked: u64,
    /// Most violating set so far, by boundary-to-size ratio.
    worst: Option<(Vec<usize>, usize)>,
}

impl Tracker {
    fn record(&mut self, graph: &Graph, set: &[usize]) {
        if set.len() == graph.len() {
            return;
        }
        self.checked += 1;
        let b = graph.boundary(set).len();
        if self.spec.holds(set.len(), b) {
            return;
        }
        let better = match &self.worst {
            None => true,
            Some((w, wb)) => (b as u128) * (w.len() as u128) < (*wb as u128) * (set.len() as u128),
        };
        if better {
            let mut s = set.to_vec();
            s.sort_unstable();
            self.worst = Some((s, b));
        }
    }

    fn finish(self, complete: bool) -> Verdict<Vec<usize>> {
        match self.worst {
            Some((witness, boundary)) => Verdict::Fail {
                size: witness.len(),
                witness,
                boundary,
                checked: self.checked,
            },
            None if complete => Verdict::Pass { checked: self.checked },
            None => Verdict::Indeterminate { checked: self.checked },
        }
    }
}

fn within(dist: &[Vec<u32>], set: &[usize], v: usize, r: u32) -> bool {
    set.iter().all(|&u| dist[u][v] <= r)
}

/// Checks `|boundary(A)| >= epsilon |A|` for proper subsets `A` of diameter
/// at most `r`.
///
/// Exhaustive mode enumerates every such set through its smallest vertex
/// and gives up with an indeterminate verdict when the enumeration would
/// exceed `budget` sets. Sampled mode grows random connected sets and pushes
/// each one greedily toward a smaller boundary ratio.
pub fn check_property_p(
    graph: &Graph,
    spec: ExpansionSpec,
    mode: SearchMode,
    budget: u64,
) -> Verdict<Vec<usize>> {
    let r = spec.r.floor().to_integer().min(u32::MAX as i64 - 1) as u32;
    let dist = graph.distances();
    let mut tracker = Tracker {
        spec,
        checked: 0,
        worst: None,
    };
    match mode {
        SearchMode::Exhaustive => {
            let mut spent: u64 = 0;
            for v in 0..graph.len() {
                let cand: Vec<usize> = (v + 1..graph.len()).filter(|&u| dist[v][u] <= r).collect();
                let count = if cand.len() >= 63 { u64::MAX } else { 1u64 << cand.len() };
                if spent.saturating_add(count) > budget {
                    return tracker.finish(false);
                }
                spent += count;
                let mut set = Vec::with_capacity(cand.len() + 1);
                for mask in 0..count {
                    set.clear();
                    set.push(v);
                    let mut ok = true;
                    for (bit, &u) in cand.iter().enumerate() {
                        if mask >> bit & 1 == 1 {
                            if !within(&dist, &set, u, r) {
                                ok = false;
                                break;
                            }
                            set.push(u);
                        }
                    }
                    if ok {
                        tracker.record(graph, &set);
                    }
                }
            }
            tracker.finish(true)
        }
        SearchMode::Sampled { samples, seed } => {
            if graph.is_empty() {
                return tracker.finish(true);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                if tracker.checked >= budget {
                    return tracker.finish(false);
                }
                let start = rng.random_range(0..graph.len());
                let target = rng.random_range(1..=graph.len());
                let mut set = vec![start];
                while set.len() < target {
                    let options: Vec<usize> = graph
                        .boundary(&set)
                        .into_iter()
                        .filter(|&w| within(&dist, &set, w, r))
                        .collect();
                    if options.is_empty() {
                        break;
                    }
                    set.push(options[rng.random_range(0..options.len())]);
                }
                tracker.record(graph, &set);
                // Greedy descent on the boundary ratio.
                loop {
                    let current = graph.boundary(&set).len();
                    let mut best: Option<(usize, usize)> = None;
                    for w in graph.boundary(&set) {
                        if !within(&dist, &set, w, r) || set.len() + 1 == graph.len() {
                            continue;
                        }
                        set.push(w);
                        let b = graph.boundary(&set).len();
                        set.pop();
                        let improves = (b as u128) * (set.len() as u128)
                            < (current as u128) * (set.len() as u128 + 1);
                        if improves && best.is_none_or(|(_, bb)| b < bb) {
                            best = Some((w, b));
                        }
                    }
                    match best {
                        Some((w, _)) => {
                            set.push(w);
                            tracker.record(graph, &set);
                        }
                        None => break,
                    }
                }
            }
            tracker.finish(true)
        }
    }
}

/// `(k - 2) / (2k)`, the expansion constant of a graph of minimum degree `k`
/// and large girth.
pub fn girth_epsilon(k: u32) -> Result<Rational> {
    if k < 3 {
        return Err(Error::Precondition("minimum degree must be at least 3".into()));
    }
    Ok(Rational::new(k as i64 - 2, 2 * k as i64))
}

/// `ceil((1 + epsilon)^(lambda / 2))`, computed exactly.
pub fn expansion_color_bound(epsilon: Rational, lambda: Rational) -> Result<BigUint> {
    if epsilon < int(0) || lambda <= int(0) {
        return Err(Error::Precondition(
            "epsilon must be nonnegative and lambda positive".into(),
        ));
    }
    // With lambda = a/b and 1 + epsilon = p/q, the answer is the least k
    // with k^(2b) q^a >= p^a.
    let (a, b) = (*lambda.numer() as u64, *lambda.denom() as u64);
    let base = int(1) + epsilon;
    let (p, q) = (*base.numer() as u64, *base.denom() as u64);
    if a > 1 << 16 || b > 1 << 16 {
        return Err(limit("exponent of the color bound", a.max(b) as u128, 1u128 << 16));
    }
    let lhs_q = BigUint::from(q).pow(a as u32);
    let rhs = BigUint::from(p).pow(a as u32);
    let fits = |k: &BigUint| k.pow(2 * b as u32) * &lhs_q >= rhs;
    // Upper bound: p^(a/2b) <= p^a.
    let mut lo = BigUint::one();
    let mut hi = BigUint::from(p).pow(a.div_ceil(2 * b).max(1) as u32).max(BigUint::one());
    if fits(&lo) {
        return Ok(lo);
    }
    while &lo + 1u32 < hi {
        let mid: BigUint = (&lo + &hi) >> 1;
        if fits(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    debug_assert!(!hi.is_zero() && fits(&hi));
    Ok(hi)
}
