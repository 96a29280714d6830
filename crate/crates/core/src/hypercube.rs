//! The binary cube {0,1}^n with the Hamming metric.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cluster::{min_colors_exact, ColoringSpec, Coloring, ExactColoring, SearchMode, Verdict};
use crate::error::{limit, Error, Result};
use crate::lattice::LatticeBox;
use crate::metric::{int, Rational};

pub const MAX_DIM: u32 = 30;
const MAX_SERIALIZED_DIM: u32 = 24;

pub fn hamming(x: u32, y: u32) -> u32 {
    (x ^ y).count_ones()
}

/// A set of cube vertices, kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubeSubset {
    n: u32,
    members: Vec<u32>,
}

impl CubeSubset {
    pub fn new(n: u32, members: impl IntoIterator<Item = u32>) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::Precondition(format!("cube dimension {n} outside 1..={MAX_DIM}")));
        }
        let mut members: Vec<u32> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&m) = members.last() {
            if u64::from(m) >= 1u64 << n {
                return Err(Error::Precondition(format!("vertex {m} outside the {n}-cube")));
            }
        }
        Ok(CubeSubset { n, members })
    }

    pub fn whole(n: u32) -> Result<Self> {
        if n > MAX_SERIALIZED_DIM {
            return Err(limit("cube vertices", 1u128 << n, 1u128 << MAX_SERIALIZED_DIM));
        }
        CubeSubset::new(n, 0..1u32 << n)
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn diameter(&self) -> u32 {
        pairwise_diameter(&self.members)
    }

    pub fn union(&self, other: &CubeSubset) -> CubeSubset {
        let mut m = self.members.clone();
        m.extend_from_slice(&other.members);
        CubeSubset::new(self.n, m).expect("same cube")
    }

    /// `"n:hex"` with bit `v` of the little-endian bitset set for member `v`.
    pub fn to_hex(&self) -> Result<String> {
        if self.n > MAX_SERIALIZED_DIM {
            return Err(limit("serialized cube dimension", self.n as u128, MAX_SERIALIZED_DIM as u128));
        }
        let mut bytes = vec![0u8; (1usize << self.n).div_ceil(8)];
        for &v in &self.members {
            bytes[v as usize / 8] |= 1 << (v % 8);
        }
        Ok(format!("{}:{}", self.n, hex::encode(bytes)))
    }

    pub fn from_hex(text: &str) -> Result<Self> {
        let (n, body) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse("expected `n:hex`".into()))?;
        let n: u32 = n.trim().parse().map_err(|_| Error::Parse(format!("bad dimension {n}")))?;
        if n == 0 || n > MAX_SERIALIZED_DIM {
            return Err(Error::Parse(format!("dimension {n} outside 1..={MAX_SERIALIZED_DIM}")));
        }
        let bytes = hex::decode(body.trim()).map_err(|e| Error::Parse(e.to_string()))?;
        if bytes.len() != (1usize << n).div_ceil(8) {
            return Err(Error::Parse("bitset length does not match the dimension".into()));
        }
        let members = (0..1u32 << n).filter(|&v| bytes[v as usize / 8] >> (v % 8) & 1 == 1);
        CubeSubset::new(n, members)
    }
}

fn pairwise_diameter(set: &[u32]) -> u32 {
    let mut best = 0;
    for (a, &x) in set.iter().enumerate() {
        for &y in &set[a + 1..] {
            best = best.max(hamming(x, y));
        }
    }
    best
}

fn fits_diameter(set: &[u32], v: u32, r: u32) -> bool {
    set.iter().all(|&u| hamming(u, v) <= r)
}

/// Hamming distance to `set` for every vertex within `r` of it, excluding `set`.
fn layered_boundary(n: u32, set: &[u32], r: u32) -> HashMap<u32, u32> {
    let inside: HashSet<u32> = set.iter().copied().collect();
    let mut seen: HashMap<u32, u32> = HashMap::new();
    let mut frontier: Vec<u32> = set.to_vec();
    for layer in 1..=r {
        let mut next = Vec::new();
        for &v in &frontier {
            for bit in 0..n {
                let w = v ^ (1 << bit);
                if !inside.contains(&w) && !seen.contains_key(&w) {
                    seen.insert(w, layer);
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    seen
}

/// Vertices at distance between 1 and `r` from `a`.
pub fn r_boundary(a: &CubeSubset, r: u32) -> Result<CubeSubset> {
    if a.is_empty() {
        return Err(Error::Precondition("boundary of the empty set".into()));
    }
    CubeSubset::new(a.n, layered_boundary(a.n, &a.members, r).into_keys())
}

fn boundary_size(n: u32, set: &[u32], r: u32) -> usize {
    layered_boundary(n, set, r).len()
}

/// Coverage of a sampled search.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SampleStats {
    pub sets: u64,
    pub mean_size: f64,
    pub max_size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubeCheck {
    pub verdict: Verdict<CubeSubset>,
    /// Expansion constant in the tested inequality.
    pub epsilon: Rational,
    pub stats: SampleStats,
}

/// Enumerates or samples nonempty proper subsets of diameter at most `r`.
/// `holds(set)` returns whether the inequality holds and the boundary size.
fn search_sets<F>(n: u32, r: u32, mode: SearchMode, budget: u64, mut holds: F) -> (Verdict<CubeSubset>, SampleStats)
where
    F: FnMut(&[u32]) -> (bool, usize),
{
    let mut stats = SampleStats::default();
    let mut total_size: u64 = 0;
    let mut fail: Option<(Vec<u32>, usize)> = None;
    let full = 1u64 << n;
    let mut visit = |set: &[u32], stats: &mut SampleStats, fail: &mut Option<(Vec<u32>, usize)>| {
        if set.len() as u64 == full {
            return;
        }
        stats.sets += 1;
        total_size += set.len() as u64;
        stats.max_size = stats.max_size.max(set.len());
        let (ok, b) = holds(set);
        if !ok && fail.is_none() {
            *fail = Some((set.to_vec(), b));
        }
    };
    let mut complete = true;
    match mode {
        SearchMode::Exhaustive if n <= 4 => {
            let count = 1u64 << full;
            if count > budget {
                complete = false;
            } else {
                for mask in 1..count {
                    let set: Vec<u32> = (0..full as u32).filter(|v| mask >> v & 1 == 1).collect();
                    if pairwise_diameter(&set) <= r {
                        visit(&set, &mut stats, &mut fail);
                    }
                }
            }
        }
        SearchMode::Exhaustive => {
            // Translations act transitively and preserve boundaries, so every
            // set has a translate containing 0, inside the ball of radius r.
            let ball: Vec<u32> = (1..full as u32).filter(|&v| v.count_ones() <= r).collect();
            let count = if ball.len() >= 63 { u64::MAX } else { 1u64 << ball.len() };
            if count > budget {
                complete = false;
            } else {
                let mut set = Vec::new();
                for mask in 0..count {
                    set.clear();
                    set.push(0);
                    let mut ok = true;
                    for (bit, &v) in ball.iter().enumerate() {
                        if mask >> bit & 1 == 1 {
                            if !fits_diameter(&set, v, r) {
                                ok = false;
                                break;
                            }
                            set.push(v);
                        }
                    }
                    if ok {
                        visit(&set, &mut stats, &mut fail);
                    }
                }
            }
        }
        SearchMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ball: u64 = (0..=r.min(n)).map(|i| binomial(n, i)).sum();
            let max_target = ball.min(256).min(full - 1).max(1);
            for _ in 0..samples.min(budget) {
                let target = rng.random_range(1..=max_target) as usize;
                let start = rng.random_range(0..full) as u32;
                let mut set = vec![start];
                let mut cur = start;
                let mut misses = 0;
                // Random walk; steps leaving the diameter bound are rejected.
                while set.len() < target && misses < 64 * target {
                    let step = cur ^ (1 << rng.random_range(0..n));
                    if set.contains(&step) {
                        cur = step;
                        continue;
                    }
                    if fits_diameter(&set, step, r) {
                        set.push(step);
                        cur = step;
                    } else {
                        misses += 1;
                    }
                }
                set.sort_unstable();
                visit(&set, &mut stats, &mut fail);
            }
            complete = samples <= budget;
        }
    }
    if stats.sets > 0 {
        stats.mean_size = total_size as f64 / stats.sets as f64;
    }
    let verdict = match fail {
        Some((set, boundary)) => Verdict::Fail {
            size: set.len(),
            witness: CubeSubset::new(n, set).expect("vertices in range"),
            boundary,
            checked: stats.sets,
        },
        None if complete => Verdict::Pass { checked: stats.sets },
        None => Verdict::Indeterminate { checked: stats.sets },
    };
    (verdict, stats)
}

pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n as u64 - i) / (i + 1);
    }
    acc
}

/// `|boundary(A)| >= (n/(r+1) - 2) |A|` over subsets of diameter at most `r`.
///
/// The constant must be positive unless `exploratory` is set.
pub fn verify_cube_expansion(
    n: u32,
    r: u32,
    mode: SearchMode,
    budget: u64,
    exploratory: bool,
) -> Result<CubeCheck> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::Precondition(format!("cube dimension {n} outside 1..={MAX_DIM}")));
    }
    let epsilon = Rational::new(n as i64, r as i64 + 1) - int(2);
    if epsilon <= int(0) && !exploratory {
        return Err(Error::Precondition(format!(
            "expansion constant {epsilon} is not positive"
        )));
    }
    let (verdict, stats) = search_sets(n, r, mode, budget, |set| {
        let b = boundary_size(n, set, 1);
        (expansion_inequality(n, r, set.len(), b), b)
    });
    Ok(CubeCheck { verdict, epsilon, stats })
}

/// `|dA| (r+1) >= (n - 2(r+1)) |A|`.
fn expansion_inequality(n: u32, r: u32, size: usize, boundary: usize) -> bool {
    boundary as i64 * (r as i64 + 1) >= (n as i64 - 2 * (r as i64 + 1)) * size as i64
}

/// The expansion inequality for one set, with its boundary size.
pub fn expansion_holds(a: &CubeSubset, r: u32) -> Result<(bool, usize)> {
    if a.is_empty() {
        return Err(Error::Precondition("the set must be nonempty".into()));
    }
    let b = boundary_size(a.n, &a.members, 1);
    Ok((expansion_inequality(a.n, r, a.len(), b), b))
}

/// Strict `|d2 A| 4 (r+2)^2 > n^2 |A|` for one set.
pub fn boundary2_holds(a: &CubeSubset, r: u32) -> Result<(bool, usize)> {
    if a.is_empty() {
        return Err(Error::Precondition("the set must be nonempty".into()));
    }
    let b = boundary_size(a.n, &a.members, 2);
    Ok((boundary2_inequality(a.n, r, a.len(), b), b))
}

/// `d2 A` is the disjoint union of `dA` and `d(A u dA)`.
pub fn second_boundary_splits(a: &CubeSubset) -> Result<bool> {
    let d1 = r_boundary(a, 1)?;
    let d2 = r_boundary(a, 2)?;
    let grown = a.union(&d1);
    if grown.len() as u64 == 1u64 << a.n {
        return Ok(d1 == d2);
    }
    let outer = r_boundary(&grown, 1)?;
    let disjoint = outer.members().iter().all(|v| !d1.contains(*v));
    Ok(disjoint && d1.union(&outer) == d2)
}

fn boundary2_inequality(n: u32, r: u32, size: usize, b: usize) -> bool {
    let lhs = b as u128 * 4 * (r as u128 + 2).pow(2);
    lhs > (n as u128).pow(2) * size as u128
}

/// The 2-boundary bound over subsets of diameter at most `r`, required in
/// the regime `r <= n/4`, `n > 16` unless `exploratory` is set.
pub fn verify_boundary2(
    n: u32,
    r: u32,
    mode: SearchMode,
    budget: u64,
    exploratory: bool,
) -> Result<CubeCheck> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::Precondition(format!("cube dimension {n} outside 1..={MAX_DIM}")));
    }
    if !exploratory && (4 * r > n || n <= 16) {
        return Err(Error::Precondition(format!(
            "n={n}, r={r} lies outside r <= n/4, n > 16"
        )));
    }
    let (verdict, stats) = search_sets(n, r, mode, budget, |set| {
        let b = boundary_size(n, set, 2);
        (boundary2_inequality(n, r, set.len(), b), b)
    });
    Ok(CubeCheck {
        verdict,
        epsilon: Rational::new((n * n) as i64, 4 * (r as i64 + 2).pow(2)),
        stats,
    })
}

/// Result of checking a coloring of the cube at scale 4 against the
/// diameter bound `sqrt(n)/4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CubeColoringVerdict {
    /// Every monochromatic 4-cluster has diameter at most `sqrt(n)/4`.
    Satisfied,
    Witness {
        color: u32,
        cluster: Vec<u32>,
        diameter: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeColoringReport {
    pub n: u32,
    pub colors_used: usize,
    pub verdict: CubeColoringVerdict,
}

pub const CUBE_COLORING_DIM: u32 = 24;
pub const CUBE_COLORING_WORK: u128 = 1 << 33;

fn xor_masks(n: u32, max_weight: u32) -> Vec<u32> {
    (1..1u64 << n)
        .map(|m| m as u32)
        .filter(|m| m.count_ones() <= max_weight)
        .collect()
}

/// 4-clusters of one color class, as sorted vertex lists.
pub fn cube_clusters(n: u32, class: &[u32], lambda: u32) -> Vec<Vec<u32>> {
    let members: HashSet<u32> = class.iter().copied().collect();
    let masks = if n <= 20 {
        xor_masks(n, lambda)
    } else {
        let mut m = Vec::new();
        fn rec(n: u32, from: u32, left: u32, cur: u32, out: &mut Vec<u32>) {
            if cur != 0 {
                out.push(cur);
            }
            if left == 0 {
                return;
            }
            for b in from..n {
                rec(n, b + 1, left - 1, cur | 1 << b, out);
            }
        }
        rec(n, 0, lambda, 0, &mut m);
        m
    };
    let mut seen: HashSet<u32> = HashSet::new();
    let mut out = Vec::new();
    let mut sorted = class.to_vec();
    sorted.sort_unstable();
    for &s in &sorted {
        if !seen.insert(s) {
            continue;
        }
        let mut part = vec![s];
        let mut head = 0;
        while head < part.len() {
            let v = part[head];
            head += 1;
            for &m in &masks {
                let w = v ^ m;
                if members.contains(&w) && seen.insert(w) {
                    part.push(w);
                }
            }
        }
        part.sort_unstable();
        out.push(part);
    }
    out
}

/// Diameter of a vertex set via distances from the set to antipodes:
/// the farthest member from `y` is at distance `n - d(!y, set)`.
pub fn antipodal_diameter(n: u32, set: &[u32]) -> u32 {
    let full = 1usize << n;
    let mut dist = vec![u32::MAX; full];
    let mut queue = VecDeque::new();
    for &v in set {
        if dist[v as usize] == u32::MAX {
            dist[v as usize] = 0;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for bit in 0..n {
            let w = v ^ (1 << bit);
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = dist[v as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    let mask = (full - 1) as u32;
    set.iter().map(|&y| n - dist[(!y & mask) as usize]).max().unwrap_or(0)
}

fn cluster_diameter(n: u32, set: &[u32]) -> u32 {
    if set.len() <= 2048 {
        pairwise_diameter(set)
    } else {
        antipodal_diameter(n, set)
    }
}

/// Searches a coloring of {0,1}^n (vertex `v` is point `v`) for a
/// monochromatic 4-cluster of diameter greater than `sqrt(n)/4`.
pub fn cube_coloring_check(n: u32, coloring: &Coloring) -> Result<CubeColoringReport> {
    if n == 0 || n > CUBE_COLORING_DIM {
        return Err(Error::Precondition(format!(
            "cube dimension {n} outside 1..={CUBE_COLORING_DIM}"
        )));
    }
    if coloring.len() != 1usize << n {
        return Err(Error::Precondition("coloring must cover every vertex".into()));
    }
    let masks: u128 = (1..=4).map(|i| binomial(n, i) as u128).sum();
    let work = masks << n;
    if work > CUBE_COLORING_WORK {
        return Err(limit("cluster enumeration steps", work, CUBE_COLORING_WORK));
    }
    let classes = coloring.classes();
    for (&color, members) in &classes {
        let class: Vec<u32> = members.iter().map(|&i| i as u32).collect();
        for cluster in cube_clusters(n, &class, 4) {
            let d = cluster_diameter(n, &cluster);
            // d > sqrt(n)/4 exactly when 16 d^2 > n.
            if 16 * (d as u64).pow(2) > n as u64 {
                return Ok(CubeColoringReport {
                    n,
                    colors_used: classes.len(),
                    verdict: CubeColoringVerdict::Witness {
                        color,
                        cluster,
                        diameter: d,
                    },
                });
            }
        }
    }
    Ok(CubeColoringReport {
        n,
        colors_used: classes.len(),
        verdict: CubeColoringVerdict::Satisfied,
    })
}

/// Parity of the coordinate sum.
pub fn checker_coloring(b: &LatticeBox) -> Result<Coloring> {
    if b.cell_side() != 1 {
        return Err(Error::Precondition("checker coloring needs a point box".into()));
    }
    Ok(Coloring::single(
        (0..b.len())
            .map(|i| b.cell_coords(i).iter().sum::<i64>().rem_euclid(2) as u32)
            .collect(),
    ))
}

/// Fewest colors of a (2, D)-coloring of the box `{0..s-1}^k`.
pub fn hex1_min_colors(k: usize, s: i64, d: Rational, cap: usize) -> Result<(LatticeBox, ExactColoring)> {
    if k == 0 || s < 1 {
        return Err(Error::Precondition("board needs k >= 1 and s >= 1".into()));
    }
    let points = (s as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if points > cap as u128 {
        return Err(limit("board points", points, cap as u128));
    }
    let board = LatticeBox::cube(k, s)?;
    let space = board.to_metric_space()?;
    let exact = min_colors_exact(&space, ColoringSpec::new(int(2), d)?, cap)?;
    Ok((board, exact))
}

/// Nested arrays indexed by the board coordinates, first axis outermost.
pub fn board_json(board: &LatticeBox, coloring: &Coloring) -> Value {
    fn nest(board: &LatticeBox, coloring: &Coloring, axis: usize, offset: usize, stride: usize) -> Value {
        let side = (board.hi()[axis] - board.lo()[axis] + 1) as usize;
        let inner = stride / side;
        if axis + 1 == board.dim() {
            json!((0..side).map(|i| coloring.colors_of(offset + i)[0]).collect::<Vec<_>>())
        } else {
            Value::Array(
                (0..side)
                    .map(|i| nest(board, coloring, axis + 1, offset + i * inner, inner))
                    .collect(),
            )
        }
    }
    nest(board, coloring, 0, 0, board.len())
}
