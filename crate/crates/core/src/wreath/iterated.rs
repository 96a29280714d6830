//! Iterated wreath products `B_0 = Z`, `B_{k+1} = B_k wr Z`, and the free
//! abelian subgroup `D_k` of lamps indexed by `Z^k`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{WreathElement, WreathProduct};
use crate::error::{Error, Result};
use crate::groups::{Integers, MarkedGroup};
use crate::metric::Rational;

/// Element of `B_k`; nesting depth equals the level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IterElem {
    Base(i64),
    Wreath(Box<WreathElement<IterElem, i64>>),
}

/// `B_level` with generators `b_0, ..., b_level` and their inverses; `b_0`
/// generates the innermost `Z` and `b_j` moves the cursor of level `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IteratedWreath {
    pub level: usize,
}

impl IteratedWreath {
    fn inner(&self) -> WreathProduct<IteratedWreath, Integers> {
        WreathProduct::new(IteratedWreath { level: self.level - 1 }, Integers)
    }

    fn unwrap<'a>(&self, x: &'a IterElem) -> &'a WreathElement<IterElem, i64> {
        match x {
            IterElem::Wreath(w) => w,
            IterElem::Base(_) => panic!("element of level 0 used at level {}", self.level),
        }
    }

    fn base(x: &IterElem) -> i64 {
        match x {
            IterElem::Base(v) => *v,
            IterElem::Wreath(_) => panic!("nested element used at level 0"),
        }
    }

    /// Exact word length through nested visiting walks.
    pub fn length(&self, x: &IterElem) -> Result<u64> {
        if self.level == 0 {
            return Ok(Self::base(x).unsigned_abs());
        }
        self.inner().parry_length(self.unwrap(x))
    }

    /// Generator `b_j`.
    pub fn generator(&self, j: usize) -> Result<IterElem> {
        if j > self.level {
            return Err(Error::Precondition(format!("b_{j} does not exist at level {}", self.level)));
        }
        if self.level == 0 {
            return Ok(IterElem::Base(1));
        }
        let inner = self.inner();
        Ok(IterElem::Wreath(Box::new(if j == self.level {
            inner.shift(1)
        } else {
            inner.lamp(IteratedWreath { level: self.level - 1 }.generator(j)?)
        })))
    }
}

impl MarkedGroup for IteratedWreath {
    type Element = IterElem;

    fn identity(&self) -> IterElem {
        if self.level == 0 {
            IterElem::Base(0)
        } else {
            IterElem::Wreath(Box::new(self.inner().identity()))
        }
    }

    fn multiply(&self, a: &IterElem, b: &IterElem) -> IterElem {
        if self.level == 0 {
            IterElem::Base(Self::base(a) + Self::base(b))
        } else {
            IterElem::Wreath(Box::new(self.inner().multiply(self.unwrap(a), self.unwrap(b))))
        }
    }

    fn invert(&self, a: &IterElem) -> IterElem {
        if self.level == 0 {
            IterElem::Base(-Self::base(a))
        } else {
            IterElem::Wreath(Box::new(self.inner().invert(self.unwrap(a))))
        }
    }

    fn generators(&self) -> Vec<IterElem> {
        (0..=self.level)
            .flat_map(|j| {
                let g = self.generator(j).expect("index in range");
                [self.invert(&g), g]
            })
            .collect()
    }

    fn exact_length(&self, g: &IterElem) -> Option<u64> {
        self.length(g).ok()
    }

    fn label(&self, g: &IterElem) -> String {
        match g {
            IterElem::Base(v) => v.to_string(),
            IterElem::Wreath(w) => {
                let inner = IteratedWreath { level: self.level.saturating_sub(1) };
                let lamps: Vec<String> = w
                    .support
                    .iter()
                    .map(|(k, v)| format!("{k}:{}", inner.label(v)))
                    .collect();
                format!("[{}|{}]", w.cursor, lamps.join(","))
            }
        }
    }
}

/// Finitely supported integer vector indexed by `Z^k`, viewed inside `B_k`:
/// the entry at `(i_1, ..., i_k)` is a lamp at position `i_k` of the top
/// level whose value is the vector of `D_{k-1}` holding it at
/// `(i_1, ..., i_{k-1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DkVector {
    k: usize,
    entries: BTreeMap<Vec<i64>, i64>,
}

impl DkVector {
    pub fn new(k: usize, entries: impl IntoIterator<Item = (Vec<i64>, i64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, v) in entries {
            if idx.len() != k {
                return Err(Error::Precondition(format!(
                    "index {idx:?} does not have {k} coordinates"
                )));
            }
            *map.entry(idx).or_insert(0) += v;
        }
        map.retain(|_, v| *v != 0);
        Ok(DkVector { k, entries: map })
    }

    pub fn zero(k: usize) -> Self {
        DkVector { k, entries: BTreeMap::new() }
    }

    pub fn level(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &BTreeMap<Vec<i64>, i64> {
        &self.entries
    }

    pub fn sub(&self, other: &DkVector) -> DkVector {
        let neg = other.entries.iter().map(|(i, v)| (i.clone(), -v));
        DkVector::new(self.k, self.entries.clone().into_iter().chain(neg)).expect("same level")
    }

    /// Sum of absolute values of the entries.
    pub fn l1_norm(&self) -> u64 {
        self.entries.values().map(|v| v.unsigned_abs()).sum()
    }

    /// The vector as an element of `B_k` with every cursor at the origin.
    pub fn embed(&self) -> IterElem {
        if self.k == 0 {
            return IterElem::Base(self.entries.get(&Vec::new()).copied().unwrap_or(0));
        }
        let mut slices: BTreeMap<i64, Vec<(Vec<i64>, i64)>> = BTreeMap::new();
        for (idx, &v) in &self.entries {
            slices
                .entry(idx[self.k - 1])
                .or_default()
                .push((idx[..self.k - 1].to_vec(), v));
        }
        let support = slices
            .into_iter()
            .map(|(pos, items)| {
                let lower = DkVector::new(self.k - 1, items).expect("consistent level");
                (pos, lower.embed())
            })
            .collect();
        IterElem::Wreath(Box::new(WreathElement { support, cursor: 0 }))
    }
}

/// Word length in `B_k` of the embedded vector.
pub fn dk_norm(v: &DkVector) -> Result<u64> {
    IteratedWreath { level: v.k }.length(&v.embed())
}

pub fn dk_distance(x: &DkVector, y: &DkVector) -> Result<u64> {
    if x.k != y.k {
        return Err(Error::Precondition("vectors of different levels".into()));
    }
    dk_norm(&y.sub(x))
}

/// Measured constants of `|x - y|_1 <= d_k(x, y) <= C |x - y|_1` over
/// vectors indexed inside the l1 ball of radius `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilipschitzReport {
    pub k: usize,
    pub r: u64,
    pub pairs: u64,
    pub lower_bound_holds: bool,
    /// Largest `d_k / l1` observed.
    pub max_ratio: Rational,
    pub worst_pair: Option<(DkVector, DkVector)>,
}

impl BilipschitzReport {
    /// Whether the observed ratio exceeds the constant `r`.
    pub fn exceeds_r(&self) -> bool {
        self.max_ratio > Rational::from_integer(self.r as i64)
    }
}

fn random_index(rng: &mut ChaCha8Rng, k: usize, r: u64) -> Vec<i64> {
    let r = r as i64;
    loop {
        let idx: Vec<i64> = (0..k).map(|_| rng.random_range(-r..=r)).collect();
        if idx.iter().map(|v| v.abs()).sum::<i64>() <= r {
            return idx;
        }
    }
}

fn random_vector(rng: &mut ChaCha8Rng, k: usize, r: u64) -> DkVector {
    let n = rng.random_range(0..=3);
    let items: Vec<(Vec<i64>, i64)> = (0..n)
        .map(|_| {
            let v = rng.random_range(1..=3) * if rng.random_bool(0.5) { 1 } else { -1 };
            (random_index(rng, k, r), v)
        })
        .collect();
    DkVector::new(k, items).expect("consistent level")
}

pub fn measure_pairs(k: usize, r: u64, pairs: &[(DkVector, DkVector)]) -> Result<BilipschitzReport> {
    let mut report = BilipschitzReport {
        k,
        r,
        pairs: 0,
        lower_bound_holds: true,
        max_ratio: Rational::from_integer(0),
        worst_pair: None,
    };
    for (x, y) in pairs {
        let d = dk_distance(x, y)?;
        let l1 = y.sub(x).l1_norm();
        report.pairs += 1;
        if d < l1 {
            report.lower_bound_holds = false;
        }
        if l1 > 0 {
            let ratio = Rational::new(d as i64, l1 as i64);
            if ratio > report.max_ratio {
                report.max_ratio = ratio;
                report.worst_pair = Some((x.clone(), y.clone()));
            }
        } else if d != 0 {
            report.lower_bound_holds = false;
        }
    }
    Ok(report)
}

/// Random pairs of vectors with entries indexed in the l1 ball of radius `r`.
pub fn bilipschitz_check(k: usize, r: u64, samples: u64, seed: u64) -> Result<BilipschitzReport> {
    if k == 0 {
        return Err(Error::Precondition("level must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(DkVector, DkVector)> = (0..samples)
        .map(|_| (random_vector(&mut rng, k, r), random_vector(&mut rng, k, r)))
        .collect();
    measure_pairs(k, r, &pairs)
}
