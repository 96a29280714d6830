//! Pairwise commuting families in F, the embeddings of `Z^{2^n}` they
//! generate, and word-metric comparisons.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{diagram_dist, gen_x0, Diagram, ThompsonF, Tree};
use crate::error::{limit, Error, Result};
use crate::groups::bfs_ball;
use crate::metric::{int, Rational};

pub const MAX_FAMILY_LEVEL: u32 = 6;
pub const MAX_EXPONENT_MASS: u64 = 4096;

/// `2^n` commuting elements: `x_0` at level 0, then each element `d` of
/// level `n - 1` yields `pi (e + d) pi^{-1}` and `pi (d + e) pi^{-1}`, in
/// that order.
pub fn commuting_family(n: u32) -> Result<Vec<Diagram>> {
    if n > MAX_FAMILY_LEVEL {
        return Err(limit("family level", n as u128, MAX_FAMILY_LEVEL as u128));
    }
    let pi = Diagram::split();
    let e = Diagram::trivial(1);
    let mut family = vec![gen_x0()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(2 * family.len());
        for d in &family {
            for padded in [e.add(d), d.add(&e)] {
                next.push(pi.mul(&padded)?.mul(&pi.inv())?);
            }
        }
        family = next;
    }
    Ok(family)
}

/// `u^{-1} (e(x^j) + x_0 + e(x^{2^n - j - 1})) u` for `j = 0..2^n`, where `u`
/// is the `(x^{2^n}, x)`-diagram of the complete binary tree of depth `n`.
pub fn conjugate_normal_form(n: u32) -> Result<Vec<Diagram>> {
    if n > MAX_FAMILY_LEVEL {
        return Err(limit("family level", n as u128, MAX_FAMILY_LEVEL as u128));
    }
    let width = 1usize << n;
    let u = Diagram::unreduced(vec![Tree::Leaf; width], vec![Tree::balanced(n)])?;
    (0..width)
        .map(|j| {
            let v = Diagram::trivial(j)
                .add(&gen_x0())
                .add(&Diagram::trivial(width - j - 1));
            u.inv().mul(&v)?.mul(&u)
        })
        .collect()
}

/// `g_1^{k_1} ... g_{2^n}^{k_{2^n}}`, reduced.
pub fn xi_embed_unchecked(n: u32, kvec: &[i64]) -> Result<Diagram> {
    let family = commuting_family(n)?;
    if kvec.len() != family.len() {
        return Err(Error::Precondition(format!(
            "exponent vector has {} entries, expected {}",
            kvec.len(),
            family.len()
        )));
    }
    let mass: u64 = kvec.iter().map(|k| k.unsigned_abs()).sum();
    if mass > MAX_EXPONENT_MASS {
        return Err(limit("exponent mass", mass as u128, MAX_EXPONENT_MASS as u128));
    }
    let mut acc = Diagram::trivial(1);
    for (g, &k) in family.iter().zip(kvec) {
        acc = acc.mul(&g.pow(k)?)?;
    }
    Ok(acc)
}

/// The embedded diagram together with the claimed cell bracket
/// `[4 sum|k_i|, 2n + 4 sum|k_i|]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedCheck {
    pub diagram: Diagram,
    pub cells: usize,
    pub lower: u64,
    pub upper: u64,
}

impl EmbedCheck {
    pub fn within(&self) -> bool {
        self.lower <= self.cells as u64 && self.cells as u64 <= self.upper
    }
}

pub fn xi_embed(n: u32, kvec: &[i64]) -> Result<EmbedCheck> {
    let diagram = xi_embed_unchecked(n, kvec)?;
    let mass: u64 = kvec.iter().map(|k| k.unsigned_abs()).sum();
    Ok(EmbedCheck {
        cells: diagram.cells(),
        diagram,
        lower: 4 * mass,
        upper: 2 * n as u64 + 4 * mass,
    })
}

/// Cells versus word length over a word ball of F.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurilloReport {
    pub radius: u32,
    pub elements: usize,
    /// Elements breaking one of the four inequalities, with word length and cells.
    pub violations: Vec<(Diagram, u32, usize)>,
    /// Largest `cells / word` over nontrivial elements.
    pub max_cells_per_word: Rational,
    /// Largest `word / cells` over nontrivial elements.
    pub max_word_per_cells: Rational,
}

/// Checks `c/6 - 2 <= w <= 6c + 2` and `w/6 - 2 <= c <= 6w + 2` for every
/// element of the word ball, with `c` the cell count and `w` the word length.
pub fn burillo_check(radius: u32, cap: usize) -> Result<BurilloReport> {
    let ball = bfs_ball(&ThompsonF, radius, cap)?;
    let mut report = BurilloReport {
        radius,
        elements: ball.len(),
        violations: Vec::new(),
        max_cells_per_word: int(0),
        max_word_per_cells: int(0),
    };
    for (g, &w) in ball.elements.iter().zip(&ball.lengths) {
        let c = g.cells() as i64;
        let wi = w as i64;
        let ok = c - 12 <= 6 * wi && wi <= 6 * c + 2 && wi - 12 <= 6 * c && c <= 6 * wi + 2;
        if !ok {
            report.violations.push((g.clone(), w, c as usize));
        }
        if wi > 0 && c > 0 {
            report.max_cells_per_word = report.max_cells_per_word.max(Rational::new(c, wi));
            report.max_word_per_cells = report.max_word_per_cells.max(Rational::new(wi, c));
        }
    }
    Ok(report)
}

/// Distortion of `xi_n` measured through the cell metric. Word distances are
/// only known to lie in `[c/6 - 2, 6c + 2]`; the constants below are the
/// smallest ones valid for every word distance in that bracket.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionReport {
    pub n: u32,
    pub samples: u64,
    /// Smallest `C1 >= 1` making both inequalities hold with `C2 = 25`.
    pub c1: Rational,
    /// Smallest `C2 >= 0` making both inequalities hold with `C1 = 25`.
    pub c2: Rational,
    /// Extreme ratios `cells / l1` over pairs with distinct points.
    pub cell_ratio_min: Rational,
    pub cell_ratio_max: Rational,
    pub worst_pair: Option<(Vec<i64>, Vec<i64>)>,
    /// Scale from which the chain `(lambda - C2)/(C1 n) >= 5` holds.
    pub lambda_min: Rational,
    /// Colors certified on `Z^{2^n}`.
    pub chain_bound: u64,
    /// Controls below `2^{n/2 - 2}/(C1 n) - C2` are admissible in the chain.
    pub control_ceiling: f64,
}

impl DistortionReport {
    pub fn within_25(&self) -> bool {
        self.c1 <= int(25) && self.c2 <= int(25)
    }
}

fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Measures the constants on given pairs of exponent vectors.
pub fn measure_distortion(n: u32, pairs: &[(Vec<i64>, Vec<i64>)]) -> Result<DistortionReport> {
    if n == 0 {
        return Err(Error::Precondition("level must be at least 1".into()));
    }
    let nn = int(n as i64);
    let (c2_fixed, c1_fixed) = (int(25), int(25));
    let mut c1 = int(1);
    let mut c2 = int(0);
    let mut ratio_min: Option<Rational> = None;
    let mut ratio_max = int(0);
    let mut worst = None;
    for (x, y) in pairs {
        let l1: i64 = x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum();
        let c = diagram_dist(&xi_embed_unchecked(n, x)?, &xi_embed_unchecked(n, y)?)? as i64;
        if l1 == 0 {
            if c != 0 {
                return Err(Error::Unsound("equal vectors with distinct images".into()));
            }
            continue;
        }
        let w_hi = int(6 * c + 2);
        let w_lo = (Rational::new(c, 6) - int(2)).max(int(0));
        let l = int(l1);
        let need_c1 = ((w_hi - c2_fixed) / (nn * l)).max(l / (nn * (w_lo + c2_fixed)));
        if need_c1 > c1 {
            c1 = need_c1;
            worst = Some((x.clone(), y.clone()));
        }
        c2 = c2.max(w_hi - c1_fixed * nn * l).max(l / (c1_fixed * nn) - w_lo);
        let ratio = Rational::new(c, l1);
        ratio_max = ratio_max.max(ratio);
        ratio_min = Some(ratio_min.map_or(ratio, |m: Rational| m.min(ratio)));
    }
    let lambda_min = int(5) * c1 * nn + c2;
    let ceiling = 2f64.powf(n as f64 / 2.0 - 2.0) / (ratio_f64(c1) * n as f64) - ratio_f64(c2);
    Ok(DistortionReport {
        n,
        samples: pairs.len() as u64,
        c1,
        c2,
        cell_ratio_min: ratio_min.unwrap_or(int(0)),
        cell_ratio_max: ratio_max,
        worst_pair: worst,
        lambda_min,
        chain_bound: 1 << (1u64 << n).min(63),
        control_ceiling: ceiling,
    })
}

/// Random pairs with entries in `[-spread, spread]`.
pub fn distortion_report(n: u32, samples: u64, spread: i64, seed: u64) -> Result<DistortionReport> {
    if !(1..=4).contains(&n) {
        return Err(Error::Precondition("level must lie in 1..=4".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = 1usize << n;
    let mut draw = || -> Vec<i64> { (0..width).map(|_| rng.random_range(-spread..=spread)).collect() };
    let pairs: Vec<(Vec<i64>, Vec<i64>)> = (0..samples).map(|_| (draw(), draw())).collect();
    measure_distortion(n, &pairs)
}
