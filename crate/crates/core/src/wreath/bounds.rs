//! Color-count lower bounds for iterated wreath products and for
//! `(sum_G Z) wr`-type lamp groups.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::crosspoly::{ehrhart_corrected, EhrhartQuery};
use crate::error::{Error, Result};
use crate::groups::{bfs_ball, MarkedGroup};
use crate::metric::{int, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct BkBoundReport {
    pub k: u32,
    pub lambda: Rational,
    /// Largest `r >= 1` with `lambda / (2r + 1) >= 5`.
    pub r: u64,
    /// Lattice points of the k-dimensional cross-polytope of radius `r`.
    pub l: BigUint,
    /// Certified lower bound on the number of colors.
    pub bound: BigUint,
    /// `sqrt(L) / 4`; admissible controls lie strictly below.
    pub r_max: f64,
    /// `r_max / lambda^(k/2)`.
    pub alpha: f64,
    /// `L / lambda^k`.
    pub beta: f64,
}

impl BkBoundReport {
    /// `R < sqrt(L)/4`, exactly.
    pub fn admits_control(&self, control: Rational) -> bool {
        if control < int(0) {
            return true;
        }
        let (n, d) = (control.numer().unsigned_abs(), control.denom().unsigned_abs());
        BigUint::from(16u32) * BigUint::from(n).pow(2) < &self.l * BigUint::from(d).pow(2)
    }
}

/// Lower bound on colors of `B_k` at scale `lambda` from the largest cube
/// of lamps that fits.
pub fn bk_lower_bound(k: u32, lambda: Rational) -> Result<BkBoundReport> {
    if k == 0 {
        return Err(Error::Precondition("level must be at least 1".into()));
    }
    let r = ((lambda / int(5) - int(1)) / int(2)).floor().to_integer();
    if r < 1 {
        return Err(Error::Precondition(format!(
            "lambda too small: {lambda} admits no r >= 1 with lambda/(2r+1) >= 5"
        )));
    }
    let r = r as u64;
    let l = ehrhart_corrected(EhrhartQuery::new(k, r)?);
    let lf = l.to_f64().unwrap_or(f64::INFINITY);
    let lam = lambda.numer().to_f64().unwrap_or(0.0) / lambda.denom().to_f64().unwrap_or(1.0);
    let r_max = lf.sqrt() / 4.0;
    Ok(BkBoundReport {
        k,
        lambda,
        r,
        bound: l.clone(),
        l,
        r_max,
        alpha: r_max / lam.powf(k as f64 / 2.0),
        beta: lf / lam.powi(k as i32),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZwgBoundReport {
    pub lambda: Rational,
    /// `floor(lambda / 5)`.
    pub r: u64,
    /// `|B_r|`, the certified lower bound.
    pub bound: u64,
    /// `sqrt(|B_r|) / (4r)`; admissible controls are at most this.
    pub ceiling: f64,
}

impl ZwgBoundReport {
    /// `R <= sqrt(|B_r|) / (4r)`, exactly.
    pub fn admits_control(&self, control: Rational) -> bool {
        if control < int(0) {
            return true;
        }
        let (n, d) = (control.numer().unsigned_abs() as u128, control.denom().unsigned_abs() as u128);
        16 * (self.r as u128).pow(2) * n * n <= self.bound as u128 * d * d
    }
}

/// Lower bound for lamp groups over `G` from the ball sizes of `G`.
pub fn zwg_lower_bound(ball_sizes: &BTreeMap<u64, u64>, lambda: Rational) -> Result<ZwgBoundReport> {
    if lambda <= int(0) {
        return Err(Error::Precondition("lambda must be positive".into()));
    }
    let r = (lambda / int(5)).floor().to_integer();
    if r < 1 {
        return Err(Error::Precondition(format!("lambda too small: floor({lambda}/5) = 0")));
    }
    let r = r as u64;
    let bound = *ball_sizes
        .get(&r)
        .ok_or_else(|| Error::Precondition(format!("no ball size for radius {r}")))?;
    Ok(ZwgBoundReport {
        lambda,
        r,
        bound,
        ceiling: (bound as f64).sqrt() / (4.0 * r as f64),
    })
}

/// `|B_r|` for `r = 0..=max_r` by breadth-first search.
pub fn ball_sizes<G: MarkedGroup>(group: &G, max_r: u32, cap: usize) -> Result<BTreeMap<u64, u64>> {
    let ball = bfs_ball(group, max_r, cap)?;
    Ok((0..=max_r).map(|r| (r as u64, ball.ball_size(r) as u64)).collect())
}
