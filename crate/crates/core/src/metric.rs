//! Finite metric spaces with exact rational distances.
//!
//! A [`FiniteMetricSpace`] is a list of labelled points plus a distance
//! oracle. The oracle is evaluated lazily so that word balls with a million
//! points never materialise a distance matrix. A distance may be reported as
//! absent (`None`) when the space cannot certify it, e.g. for two points of a
//! truncated word ball whose difference lies outside the enumerated ball.

use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{limit, Error, Result};

pub type Rational = Ratio<i64>;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v)
}

type Oracle = dyn Fn(usize, usize) -> Option<Rational> + Send + Sync;

/// Default cap on the number of points of enumerated spaces.
pub const DEFAULT_POINT_CAP: usize = 1_000_000;

#[derive(Clone)]
pub struct FiniteMetricSpace {
    labels: Arc<Vec<String>>,
    oracle: Arc<Oracle>,
}

impl fmt::Debug for FiniteMetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteMetricSpace")
            .field("points", &self.labels.len())
            .finish()
    }
}

impl FiniteMetricSpace {
    /// Builds a space from labels and a distance oracle. The oracle is only
    /// consulted for `i != j`.
    pub fn from_oracle<F>(labels: Vec<String>, oracle: F) -> Self
    where
        F: Fn(usize, usize) -> Option<Rational> + Send + Sync + 'static,
    {
        FiniteMetricSpace {
            labels: Arc::new(labels),
            oracle: Arc::new(oracle),
        }
    }

    pub fn from_matrix(labels: Vec<String>, matrix: Vec<Vec<Rational>>) -> Result<Self> {
        let n = labels.len();
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::Parse(format!("distance matrix is not {n}x{n}")));
        }
        Ok(Self::from_oracle(labels, move |i, j| Some(matrix[i][j])))
    }

    /// Integer points on the line with the metric |x - y|.
    pub fn integer_points(points: &[i64]) -> Self {
        let pts = points.to_vec();
        let labels = pts.iter().map(|p| p.to_string()).collect();
        Self::from_oracle(labels, move |i, j| Some(int((pts[i] - pts[j]).abs())))
    }

    /// The path {0, 1, ..., n-1} inside Z.
    pub fn path(n: usize) -> Self {
        let pts: Vec<i64> = (0..n as i64).collect();
        Self::integer_points(&pts)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn dist(&self, i: usize, j: usize) -> Option<Rational> {
        if i == j {
            Some(Rational::zero())
        } else {
            (self.oracle)(i, j)
        }
    }

    /// Maximum pairwise distance; `None` if some distance is absent.
    pub fn diameter(&self) -> Option<Rational> {
        let idx: Vec<usize> = (0..self.len()).collect();
        self.subset_diameter(&idx)
    }

    pub fn subset_diameter(&self, subset: &[usize]) -> Option<Rational> {
        let mut best = Rational::zero();
        for (a, &i) in subset.iter().enumerate() {
            for &j in &subset[a + 1..] {
                best = best.max(self.dist(i, j)?);
            }
        }
        Some(best)
    }

    /// Exhaustive check of the metric axioms; returns the first violation.
    pub fn check_axioms(&self) -> std::result::Result<(), AxiomViolation> {
        let n = self.len();
        let mut d = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                d[i * n + j] = self.dist(i, j);
            }
        }
        for i in 0..n {
            for j in 0..n {
                let Some(dij) = d[i * n + j] else { continue };
                if i != j && !dij.is_positive() {
                    return Err(AxiomViolation::NotPositive(i, j));
                }
                if d[j * n + i] != Some(dij) {
                    return Err(AxiomViolation::Asymmetric(i, j));
                }
                for k in 0..n {
                    if let (Some(djk), Some(dik)) = (d[j * n + k], d[i * n + k]) {
                        if dik > dij + djk {
                            return Err(AxiomViolation::Triangle(i, j, k));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomViolation {
    NotPositive(usize, usize),
    Asymmetric(usize, usize),
    Triangle(usize, usize, usize),
}

/// The metric `d + r` on distinct points.
pub fn shift_metric(space: &FiniteMetricSpace, r: Rational) -> Result<FiniteMetricSpace> {
    if r.is_negative() {
        return Err(Error::Precondition(format!("shift {r} is negative")));
    }
    let inner = space.clone();
    Ok(FiniteMetricSpace::from_oracle(
        space.labels.to_vec(),
        move |i, j| inner.dist(i, j).map(|d| d + r),
    ))
}

/// The l1 product. Point `(i, j)` has index `i * |Y| + j`.
pub fn product_l1(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    cap: usize,
) -> Result<FiniteMetricSpace> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::Precondition("product of an empty space".into()));
    }
    let size = (x.len() as u128) * (y.len() as u128);
    if size > cap as u128 {
        return Err(limit("product size", size, cap as u128));
    }
    let ny = y.len();
    let mut labels = Vec::with_capacity(size as usize);
    for a in x.labels.iter() {
        for b in y.labels.iter() {
            labels.push(format!("({a},{b})"));
        }
    }
    let (xs, ys) = (x.clone(), y.clone());
    Ok(FiniteMetricSpace::from_oracle(labels, move |p, q| {
        Some(xs.dist(p / ny, q / ny)? + ys.dist(p % ny, q % ny)?)
    }))
}

/// A strictly monotone map of the half line together with its inverse.
#[derive(Clone)]
pub struct MonotoneMap {
    forward: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    inverse: Arc<dyn Fn(f64) -> Option<f64> + Send + Sync>,
}

impl MonotoneMap {
    pub fn new<F, G>(forward: F, inverse: G) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> Option<f64> + Send + Sync + 'static,
    {
        MonotoneMap {
            forward: Arc::new(forward),
            inverse: Arc::new(inverse),
        }
    }

    pub fn identity() -> Self {
        Self::new(|t| t, Some)
    }

    /// `t -> slope * t + offset`, with slope > 0.
    pub fn affine(slope: f64, offset: f64) -> Self {
        Self::new(
            move |t| slope * t + offset,
            move |s| {
                let t = (s - offset) / slope;
                (t >= 0.0).then_some(t)
            },
        )
    }

    /// `t -> t^p` for p >= 1.
    pub fn power(p: i32) -> Self {
        Self::new(
            move |t| t.powi(p),
            move |s| (s >= 0.0).then(|| s.powf(1.0 / p as f64)),
        )
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.forward)(t)
    }

    pub fn invert(&self, s: f64) -> Option<f64> {
        (self.inverse)(s)
    }
}

/// Control functions of a coarse embedding `rho1(d) <= d' <= rho2(d)` for `d >= r`.
#[derive(Clone)]
pub struct TransferSpec {
    pub rho1: MonotoneMap,
    pub rho2: MonotoneMap,
    pub r: Rational,
}

fn to_f64(q: Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// Parameters `(rho2^{-1}(lambda), rho1^{-1}(D))` at which a coloring of the
/// target pulls back to a coloring of the source.
pub fn transfer_bound(spec: &TransferSpec, lambda: Rational, d: Rational) -> Result<(f64, f64)> {
    if lambda <= spec.r || d <= spec.r {
        return Err(Error::Precondition(format!(
            "lambda={lambda} and D={d} must exceed r={}",
            spec.r
        )));
    }
    let lam = spec
        .rho2
        .invert(to_f64(lambda))
        .ok_or_else(|| Error::Domain(format!("rho2 has no inverse at {lambda}")))?;
    let dd = spec
        .rho1
        .invert(to_f64(d))
        .ok_or_else(|| Error::Domain(format!("rho1 has no inverse at {d}")))?;
    for t in [lam, dd] {
        if t >= to_f64(spec.r) && spec.rho1.eval(t) > spec.rho2.eval(t) {
            return Err(Error::Domain(format!("rho1({t}) exceeds rho2({t})")));
        }
    }
    Ok((lam, dd))
}

/// Constants of a quasi-isometric embedding
/// `d/c1 - r1 <= d'(phi x, phi x') <= c d + r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QiConstants {
    pub c: Rational,
    pub r: Rational,
    pub c1: Rational,
    pub r1: Rational,
}

impl QiConstants {
    pub fn new(c: Rational, r: Rational, c1: Rational, r1: Rational) -> Self {
        QiConstants { c, r, c1, r1 }
    }

    pub fn isometry() -> Self {
        Self::new(int(1), int(0), int(1), int(0))
    }
}

/// Exact transfer `((lambda - r)/c, c1 (D + r1))` for quasi-isometric embeddings.
pub fn transfer_qi(qi: &QiConstants, lambda: Rational, d: Rational) -> Result<(Rational, Rational)> {
    if lambda <= qi.r {
        return Err(Error::Precondition(format!(
            "lambda={lambda} must exceed r={}",
            qi.r
        )));
    }
    if qi.c <= Rational::zero() || qi.c1 <= Rational::zero() {
        return Err(Error::Domain("multiplicative constants must be positive".into()));
    }
    Ok(((lambda - qi.r) / qi.c, qi.c1 * (d + qi.r1)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QiViolation {
    pub sample: usize,
    pub source: Rational,
    pub image: Rational,
    pub lower_side: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QiReport {
    pub pairs: usize,
    pub violations: Vec<QiViolation>,
    /// Smallest `c` making the upper inequality hold with the given `r`.
    pub tightest_c: Option<Rational>,
    /// Smallest `c1` making the lower inequality hold with the given `r1`;
    /// `None` with a violation present means no finite constant works.
    pub tightest_c1: Option<Rational>,
}

impl QiReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the quasi-isometry inequalities on `(d_X, d_Y)` distance samples.
pub fn check_qi_samples<I>(samples: I, qi: &QiConstants) -> QiReport
where
    I: IntoIterator<Item = (Rational, Rational)>,
{
    let mut report = QiReport::default();
    let mut c1_unbounded = false;
    for (k, (dx, dy)) in samples.into_iter().enumerate() {
        report.pairs += 1;
        if dy > qi.c * dx + qi.r {
            report.violations.push(QiViolation {
                sample: k,
                source: dx,
                image: dy,
                lower_side: false,
            });
        }
        if dx / qi.c1 - qi.r1 > dy {
            report.violations.push(QiViolation {
                sample: k,
                source: dx,
                image: dy,
                lower_side: true,
            });
        }
        if dx.is_positive() {
            let c = ((dy - qi.r) / dx).max(Rational::zero());
            report.tightest_c = Some(report.tightest_c.map_or(c, |b| b.max(c)));
            let denom = dy + qi.r1;
            if denom.is_positive() {
                let c1 = dx / denom;
                report.tightest_c1 = Some(report.tightest_c1.map_or(c1, |b| b.max(c1)));
            } else {
                c1_unbounded = true;
            }
        }
    }
    if c1_unbounded {
        report.tightest_c1 = None;
    }
    report
}

/// Checks a sampled map `phi: X -> Y` (as an index table) on the given pairs.
/// Pairs with an absent distance on either side are skipped.
pub fn check_quasi_isometry(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    phi: &[usize],
    pairs: &[(usize, usize)],
    qi: &QiConstants,
) -> QiReport {
    let samples = pairs
        .iter()
        .filter_map(|&(a, b)| Some((x.dist(a, b)?, y.dist(phi[a], phi[b])?)));
    check_qi_samples(samples, qi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn shift_by_zero_keeps_distances() {
        let p = FiniteMetricSpace::path(5);
        let s = shift_metric(&p, int(0)).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(p.dist(i, j), s.dist(i, j));
            }
        }
    }

    #[test]
    fn shift_two_point_space() {
        let x = FiniteMetricSpace::integer_points(&[0, 3]);
        let s = shift_metric(&x, int(2)).unwrap();
        assert_eq!(s.dist(0, 1), Some(int(5)));
        assert_eq!(s.dist(1, 1), Some(int(0)));
        assert!(shift_metric(&x, int(-1)).is_err());
        assert!(shift_metric(&x, q(1, 3)).unwrap().check_axioms().is_ok());
    }

    #[test]
    fn product_of_two_edges_is_a_square() {
        let e = FiniteMetricSpace::path(2);
        let sq = product_l1(&e, &e, DEFAULT_POINT_CAP).unwrap();
        assert_eq!(sq.len(), 4);
        assert_eq!(sq.dist(0, 3), Some(int(2)));
        assert_eq!(sq.label(3), "(1,1)");
        assert!(sq.check_axioms().is_ok());
    }

    #[test]
    fn product_with_singleton_is_isometric() {
        let one = FiniteMetricSpace::path(1);
        let y = FiniteMetricSpace::integer_points(&[0, 2, 7]);
        let p = product_l1(&one, &y, DEFAULT_POINT_CAP).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(p.dist(i, j), y.dist(i, j));
            }
        }
        assert!(product_l1(&one, &y, 2).is_err());
    }

    #[test]
    fn transfer_identity_and_square() {
        let id = TransferSpec {
            rho1: MonotoneMap::identity(),
            rho2: MonotoneMap::identity(),
            r: int(0),
        };
        assert_eq!(transfer_bound(&id, int(7), int(3)).unwrap(), (7.0, 3.0));
        let sq = TransferSpec {
            rho1: MonotoneMap::identity(),
            rho2: MonotoneMap::power(2),
            r: int(0),
        };
        assert_eq!(transfer_bound(&sq, int(16), int(5)).unwrap().0, 4.0);
        assert!(transfer_bound(&sq, int(0), int(5)).is_err());
    }

    #[test]
    fn transfer_affine_quasi_isometry() {
        let qi = QiConstants::new(int(6), int(2), int(6), int(2));
        assert_eq!(transfer_qi(&qi, int(14), int(10)).unwrap(), (int(2), int(72)));
        assert!(transfer_qi(&qi, int(2), int(10)).is_err());
    }

    #[test]
    fn identity_and_doubling_maps_are_qi() {
        let x = FiniteMetricSpace::path(6);
        let pairs: Vec<_> = (0..6).flat_map(|a| (0..6).map(move |b| (a, b))).collect();
        let id: Vec<usize> = (0..6).collect();
        let rep = check_quasi_isometry(&x, &x, &id, &pairs, &QiConstants::isometry());
        assert!(rep.passed());
        assert_eq!(rep.tightest_c, Some(int(1)));

        let y = FiniteMetricSpace::integer_points(&(0..12).step_by(2).collect::<Vec<_>>());
        let qi = QiConstants::new(int(2), int(0), int(2), int(0));
        let rep = check_quasi_isometry(&x, &y, &id, &pairs, &qi);
        assert!(rep.passed());
        let tight = QiConstants::new(int(1), int(0), int(1), int(0));
        assert!(!check_quasi_isometry(&x, &y, &id, &pairs, &tight).passed());
    }
}
