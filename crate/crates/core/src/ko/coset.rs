//! Extension of a window coloring of `Z^[-lambda, lambda]` to the lamp group
//! `Z^(Z)` of `Z wr Z` by coset translation.
//!
//! `H = Z^[-lambda, lambda]` contains the rho-ball of radius lambda, so distinct
//! cosets of `H` are more than lambda apart and a coloring of `H` copied to
//! every coset keeps its clusters. An element is colored by its restriction
//! to the window.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{factor_surplus, ko_color_line, ko_power, ko_report, line_control, KoColoring, KoReport};
use crate::error::{Error, Result};
use crate::metric::{int, FiniteMetricSpace, Rational};
use crate::wreath::integer_wreath;

/// Finitely supported `Z -> Z`; zero entries are not stored.
pub type LampVector = BTreeMap<i64, i64>;

/// `(2 lambda + 1) D(m + 2 lambda n, lambda) + 4 lambda + 1` with the line
/// coloring as `D` and `n = 2`.
pub fn coset_control(lambda: i64, m: usize) -> Rational {
    int(2 * lambda + 1) * line_control(lambda, m + 4 * lambda as usize) + int(4 * lambda + 1)
}

/// KO coloring of `[-spread, spread]^(2 lambda + 1)`: the `(2 lambda + 1)`-th
/// power of the line coloring, with surplus `m`.
pub fn coset_window(lambda: i64, m: usize, spread: i64) -> Result<KoColoring> {
    if lambda < 1 {
        return Err(Error::Precondition("lambda must be at least 1".into()));
    }
    let k = 2 * lambda as usize + 1;
    let line = ko_color_line(lambda, factor_surplus(m, 2, k), -spread, spread)?;
    ko_power(&line, k)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetReport {
    pub lambda: i64,
    pub m: usize,
    pub samples: usize,
    pub cosets: usize,
    /// Sampled pairs lying in different cosets.
    pub cross_pairs: usize,
    pub min_cross_distance: Option<u64>,
    /// Window control plus `4 lambda + 1`; the sampled clusters are held to it.
    pub extended_control: Rational,
    /// The control of the general construction, never below `extended_control`.
    pub formula_control: Rational,
    /// Color mask of each sample.
    pub colors: Vec<u64>,
    /// Colors and clusters of the sample under the restricted word metric.
    pub ko: KoReport,
}

impl CosetReport {
    pub fn valid(&self) -> bool {
        self.ko.valid && self.extended_control <= self.formula_control
    }
}

fn coset_key(lambda: i64, f: &LampVector) -> Vec<(i64, i64)> {
    f.iter()
        .filter(|(p, _)| p.abs() > lambda)
        .map(|(&p, &v)| (p, v))
        .collect()
}

/// Colors each sample by the window coloring of its restriction to
/// `[-lambda, lambda]` and validates the KO conditions on the sample under
/// the word metric of `Z wr Z` restricted to `Z^(Z)`.
///
/// Two samples in different cosets at distance at most lambda would make
/// the construction unsound; that is reported as [`Error::Unsound`].
pub fn coset_extend(window: &KoColoring, samples: &[LampVector]) -> Result<CosetReport> {
    let lambda = window.lambda();
    let width = 2 * lambda as usize + 1;
    let domain = window.domain();
    if domain.dim() != width {
        return Err(Error::Precondition(format!(
            "window has dimension {}, expected {width}",
            domain.dim()
        )));
    }
    let mut masks = Vec::with_capacity(samples.len());
    for f in samples {
        if f.values().any(|&v| v == 0) {
            return Err(Error::Precondition("lamp vectors must not store zeros".into()));
        }
        let point: Vec<i64> = (-lambda..=lambda)
            .map(|p| f.get(&p).copied().unwrap_or(0))
            .collect();
        let idx = domain.index_of_point(&point).ok_or_else(|| {
            Error::Precondition(format!("window part {point:?} lies outside the window box"))
        })?;
        masks.push(window.mask(idx));
    }

    let w = integer_wreath();
    let elems: Vec<_> = samples
        .iter()
        .map(|f| w.element(f.iter().map(|(&p, &v)| (p, v)), 0))
        .collect();
    let keys: Vec<_> = samples.iter().map(|f| coset_key(lambda, f)).collect();
    let n = samples.len();
    let mut matrix = vec![vec![int(0); n]; n];
    let mut cross_pairs = 0;
    let mut min_cross: Option<u64> = None;
    for i in 0..n {
        for j in i + 1..n {
            let d = w.distance(&elems[i], &elems[j])?;
            if keys[i] != keys[j] {
                cross_pairs += 1;
                min_cross = Some(min_cross.map_or(d, |c| c.min(d)));
                if d as i64 <= lambda {
                    return Err(Error::Unsound(format!(
                        "samples {i} and {j} lie in different cosets at distance {d} <= {lambda}"
                    )));
                }
            }
            matrix[i][j] = int(d as i64);
            matrix[j][i] = int(d as i64);
        }
    }
    let labels = (0..n).map(|i| format!("s{i}")).collect();
    let space = FiniteMetricSpace::from_matrix(labels, matrix)?;
    let extended_control = window.control() + int(4 * lambda + 1);
    let ko = ko_report(&space, window.m(), window.n(), lambda, extended_control, &masks)?;
    let cosets: BTreeSet<_> = keys.into_iter().collect();
    Ok(CosetReport {
        lambda,
        m: window.m(),
        samples: n,
        cosets: cosets.len(),
        cross_pairs,
        min_cross_distance: min_cross,
        extended_control,
        formula_control: coset_control(lambda, window.m()),
        colors: masks,
        ko,
    })
}

/// `cosets` random coset representatives with lamps at `lambda < |p| <= lambda + reach`,
/// each combined with `per_coset` random window parts in `[-spread, spread]`.
/// Window parts are drawn near a per-coset center so that clusters form.
pub fn sample_coset_elements(
    lambda: i64,
    cosets: usize,
    per_coset: usize,
    spread: i64,
    reach: i64,
    seed: u64,
) -> Vec<LampVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(cosets * per_coset);
    for c in 0..cosets {
        let mut rep = LampVector::new();
        if c > 0 {
            while rep.is_empty() {
                for p in lambda + 1..=lambda + reach {
                    for pos in [p, -p] {
                        if rng.random_bool(0.3) {
                            let v = rng.random_range(1..=spread.max(1));
                            rep.insert(pos, if rng.random_bool(0.5) { v } else { -v });
                        }
                    }
                }
            }
        }
        let center: Vec<i64> = (-lambda..=lambda)
            .map(|_| rng.random_range(-spread / 2..=spread / 2))
            .collect();
        for _ in 0..per_coset {
            let mut f = rep.clone();
            for (j, p) in (-lambda..=lambda).enumerate() {
                let v = (center[j] + rng.random_range(-1..=1)).clamp(-spread, spread);
                if v != 0 {
                    f.insert(p, v);
                }
            }
            out.push(f);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ko::validate_ko;

    #[test]
    fn identity_coset_reproduces_window() {
        let window = coset_window(1, 0, 2).unwrap();
        let fine = window.refine().unwrap();
        let samples: Vec<LampVector> = (0..fine.len())
            .map(|i| {
                (-1..=1)
                    .zip(fine.domain().cell_coords(i))
                    .filter(|(_, v)| *v != 0)
                    .collect()
            })
            .collect();
        let report = coset_extend(&window, &samples).unwrap();
        assert_eq!((report.cosets, report.cross_pairs), (1, 0));
        assert_eq!(report.colors, fine.masks());
        assert!(report.valid());
        assert!(validate_ko(&window).unwrap().valid);
    }

    #[test]
    fn distinct_cosets_are_separated() {
        let w = integer_wreath();
        let f = w.element([(0, 3)], 0);
        let g = w.element([(0, 3), (2, 1)], 0);
        let d = w.distance(&f, &g).unwrap();
        assert!(d > 1);
        assert_eq!(d, 5);
    }

    #[test]
    fn sampled_lambda2_passes() {
        let (lambda, m, spread) = (2, 0, 4);
        let window = coset_window(lambda, m, spread).unwrap();
        assert_eq!(window.palette_size(), (2 * lambda as usize + 1) + 1 + m);
        let samples = sample_coset_elements(lambda, 5, 100, spread, 3, 7);
        assert_eq!(samples.len(), 500);
        let report = coset_extend(&window, &samples).unwrap();
        assert!(report.valid(), "{report:?}");
        assert!(report.cosets > 1 && report.cross_pairs > 0);
        assert!(report.min_cross_distance.unwrap() > lambda as u64);
        assert!(report.ko.clusters.rows.iter().any(|r| r.clusters < r.points));
        assert_eq!(report.formula_control, coset_control(2, 0));
    }

    #[test]
    fn control_formula_values() {
        // (2*1+1) * 2(0 + 4 + 1)(1 + 1) + 5
        assert_eq!(coset_control(1, 0), int(65));
    }

    #[test]
    fn window_mismatch_is_rejected() {
        let window = coset_window(1, 0, 2).unwrap();
        let far: LampVector = [(0, 50)].into_iter().collect();
        assert!(coset_extend(&window, &[far]).is_err());
    }
}
