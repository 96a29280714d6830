//! Kolmogorov-Ostrand colorings.
//!
//! A KO coloring with surplus `m` and dimension bound `n` paints every point
//! in at least `m + 1` colors out of a palette of `m + n`, and keeps every
//! monochromatic lambda-cluster within a diameter control. Colorings are
//! stored as color bitmasks over a [`LatticeBox`]; all constructions here are
//! constant on cells of side `lambda + 1`, so they are built on cell boxes and
//! validated cell by cell.

mod bounds;
mod coset;

use std::collections::{BTreeSet, HashMap};

use serde::Deserialize;
use serde_json::{json, Value};

use crate::cluster::{validate_coloring, ClusterSpace, Coloring, ColoringSpec, ValidationReport};
use crate::error::{limit, Error, Result};
use crate::lattice::LatticeBox;
use crate::metric::{int, Rational};

pub use bounds::{bk_ko_bound, BkKoStep, KoBoundReport, BASE_COLORS, BASE_CONTROL};
pub use coset::{
    coset_control, coset_extend, coset_window, sample_coset_elements, CosetReport, LampVector,
};

/// Colors are bits of a `u64`.
pub const MAX_KO_PALETTE: usize = 64;

/// Cap on the cells of a materialized product coloring.
pub const MAX_KO_CELLS: usize = 1 << 26;

/// Residue rule of the line coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LineRule {
    /// Block `b` omits color `b mod (m + 2)`; every point keeps `m + 1` colors.
    #[default]
    Staggered,
    /// Color `i` is present iff `b != 2i + 1 (mod 2m + 2)`. Colors `0` and
    /// `m + 1` share a residue, so blocks `b = 1 (mod 2m + 2)` keep only `m`.
    Literal,
}

fn full_mask(colors: usize) -> u64 {
    if colors >= 64 {
        u64::MAX
    } else {
        (1u64 << colors) - 1
    }
}

/// Colors of the point `x` in the line coloring with surplus `m`.
pub fn line_colors(lambda: i64, m: usize, rule: LineRule, x: i64) -> u64 {
    let block = x.div_euclid(lambda + 1);
    match rule {
        LineRule::Staggered => {
            let skip = block.rem_euclid(m as i64 + 2) as u32;
            full_mask(m + 2) & !(1u64 << skip)
        }
        LineRule::Literal => {
            let modulus = 2 * m as i64 + 2;
            let r = block.rem_euclid(modulus);
            (0..m + 2)
                .filter(|&i| (2 * i as i64 + 1).rem_euclid(modulus) != r)
                .fold(0, |acc, i| acc | 1u64 << i)
        }
    }
}

/// `2(m + 1)(lambda + 1)`, the control of the line coloring.
pub fn line_control(lambda: i64, m: usize) -> Rational {
    int(2 * (m as i64 + 1) * (lambda + 1))
}

/// `(m + 2)(lambda + 1)`; the staggered line coloring is invariant under this shift.
pub fn line_period(lambda: i64, m: usize) -> i64 {
    (m as i64 + 2) * (lambda + 1)
}

/// `(4n^2 - 2n)(lambda + 1)`, the control of the grid coloring of `Z^n`.
pub fn grid_control(n: usize, lambda: i64) -> Rational {
    let n = n as i64;
    int((4 * n * n - 2 * n) * (lambda + 1))
}

/// A multi-color coloring of a lattice box with its KO parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoColoring {
    m: usize,
    n: usize,
    lambda: i64,
    control: Rational,
    domain: LatticeBox,
    colors: Vec<u64>,
}

impl KoColoring {
    /// Palette is `0..m + n`; every mask must lie inside it.
    pub fn new(
        m: usize,
        n: usize,
        lambda: i64,
        control: Rational,
        domain: LatticeBox,
        colors: Vec<u64>,
    ) -> Result<Self> {
        if lambda < 1 {
            return Err(Error::Precondition("lambda must be at least 1".into()));
        }
        if n == 0 || m + n > MAX_KO_PALETTE {
            return Err(Error::Precondition(format!(
                "palette m + n = {} must lie in 1..={MAX_KO_PALETTE}",
                m + n
            )));
        }
        if colors.len() != domain.len() {
            return Err(Error::Precondition(format!(
                "{} color sets for {} points",
                colors.len(),
                domain.len()
            )));
        }
        let palette = full_mask(m + n);
        if let Some(i) = colors.iter().position(|&c| c & !palette != 0) {
            return Err(Error::Precondition(format!(
                "point {i} uses a color outside the palette"
            )));
        }
        Ok(KoColoring {
            m,
            n,
            lambda,
            control,
            domain,
            colors,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn palette_size(&self) -> usize {
        self.m + self.n
    }

    pub fn lambda(&self) -> i64 {
        self.lambda
    }

    pub fn control(&self) -> Rational {
        self.control
    }

    pub fn domain(&self) -> &LatticeBox {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn mask(&self, i: usize) -> u64 {
        self.colors[i]
    }

    pub fn masks(&self) -> &[u64] {
        &self.colors
    }

    pub fn colors_of(&self, i: usize) -> Vec<u32> {
        mask_colors(self.colors[i])
    }

    /// The same coloring with `colors` replaced (for fixtures and tampering tests).
    pub fn with_masks(&self, colors: Vec<u64>) -> Result<Self> {
        KoColoring::new(
            self.m,
            self.n,
            self.lambda,
            self.control,
            self.domain.clone(),
            colors,
        )
    }

    /// The multi-color [`Coloring`] over [`Self::domain`].
    pub fn to_coloring(&self) -> Result<Coloring> {
        let palette: BTreeSet<u32> = (0..self.palette_size() as u32).collect();
        Coloring::new(palette, self.colors.iter().map(|&c| mask_colors(c)).collect())
    }

    /// The same coloring on the point box underneath a cell box.
    pub fn refine(&self) -> Result<KoColoring> {
        let (fine, map) = self.domain.refine()?;
        let colors = map.iter().map(|&c| self.colors[c]).collect();
        KoColoring::new(self.m, self.n, self.lambda, self.control, fine, colors)
    }

    /// Whether translating by `shift` preserves colors wherever both ends lie
    /// in the box. `shift` must be a multiple of the cell side.
    pub fn has_period(&self, shift: &[i64]) -> Result<bool> {
        let s = self.domain.cell_side();
        if shift.len() != self.domain.dim() || shift.iter().any(|v| v % s != 0) {
            return Err(Error::Precondition(
                "shift must match the dimension and be a multiple of the cell side".into(),
            ));
        }
        for i in 0..self.len() {
            let c: Vec<i64> = self
                .domain
                .cell_coords(i)
                .iter()
                .zip(shift)
                .map(|(a, v)| a + v / s)
                .collect();
            if let Some(j) = self.domain.index_of_cell(&c) {
                if self.colors[j] != self.colors[i] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `{m, n, lambda, control, points: {label: [colors]}}`.
    pub fn to_json(&self) -> Value {
        let points: serde_json::Map<String, Value> = (0..self.len())
            .map(|i| (self.domain.label(i), json!(self.colors_of(i))))
            .collect();
        json!({
            "m": self.m,
            "n": self.n,
            "lambda": self.lambda,
            "control": self.control.to_string(),
            "points": points,
        })
    }

    /// Inverse of [`Self::to_json`] over a known domain.
    pub fn from_json(text: &str, domain: &LatticeBox) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            m: usize,
            n: usize,
            lambda: i64,
            control: String,
            points: HashMap<String, Vec<u32>>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let control: Rational = raw
            .control
            .parse()
            .map_err(|_| Error::Parse(format!("bad control {:?}", raw.control)))?;
        if raw.points.len() != domain.len() {
            return Err(Error::Parse(format!(
                "{} points listed, domain has {}",
                raw.points.len(),
                domain.len()
            )));
        }
        let mut colors = Vec::with_capacity(domain.len());
        for i in 0..domain.len() {
            let list = raw
                .points
                .get(&domain.label(i))
                .ok_or_else(|| Error::Parse(format!("point {} missing", domain.label(i))))?;
            let mut mask = 0u64;
            for &c in list {
                if c as usize >= MAX_KO_PALETTE {
                    return Err(Error::Parse(format!("color {c} out of range")));
                }
                mask |= 1 << c;
            }
            colors.push(mask);
        }
        KoColoring::new(raw.m, raw.n, raw.lambda, control, domain.clone(), colors)
    }
}

fn mask_colors(mask: u64) -> Vec<u32> {
    (0..64).filter(|&c| mask >> c & 1 == 1).collect()
}

/// The line coloring with the staggered rule on `[lo, hi]`.
pub fn ko_color_line(lambda: i64, m: usize, lo: i64, hi: i64) -> Result<KoColoring> {
    ko_color_line_with(lambda, m, lo, hi, LineRule::Staggered)
}

/// The line coloring on `[lo, hi]`, built on cells of side `lambda + 1`.
pub fn ko_color_line_with(
    lambda: i64,
    m: usize,
    lo: i64,
    hi: i64,
    rule: LineRule,
) -> Result<KoColoring> {
    if lambda < 1 {
        return Err(Error::Precondition("lambda must be at least 1".into()));
    }
    let domain = LatticeBox::with_cells(vec![lo], vec![hi], lambda + 1)?;
    let colors = (0..domain.len())
        .map(|i| line_colors(lambda, m, rule, domain.extent(i, 0).0))
        .collect();
    KoColoring::new(m, 2, lambda, line_control(lambda, m), domain, colors)
}

/// The product coloring `U_i x V_i` of the l1 product.
///
/// Both factors must share the palette `P`. A point of the product keeps at
/// least `(m_X + 1) + (m_Y + 1) - P` colors, which is the new surplus plus one;
/// `n` becomes `n_X + n_Y - 1` when the factors were drawn at surpluses
/// `m + n_Y - 1` and `m + n_X - 1`. Controls add.
pub fn ko_product(cx: &KoColoring, cy: &KoColoring) -> Result<KoColoring> {
    let p = cx.palette_size();
    if p != cy.palette_size() {
        return Err(Error::PaletteMismatch {
            left: p,
            right: cy.palette_size(),
        });
    }
    if cx.lambda != cy.lambda {
        return Err(Error::Precondition("factors use different lambda".into()));
    }
    let kept = cx.m + cy.m + 2;
    if kept < p + 1 {
        return Err(Error::Precondition(format!(
            "surpluses {} and {} leave no guaranteed color in a palette of {p}",
            cx.m, cy.m
        )));
    }
    let m = kept - p - 1;
    let cells = cx.len() as u128 * cy.len() as u128;
    if cells > MAX_KO_CELLS as u128 {
        return Err(limit("product coloring cells", cells, MAX_KO_CELLS as u128));
    }
    let domain = cx.domain.product(&cy.domain)?;
    let mut colors = Vec::with_capacity(cells as usize);
    for &a in &cx.colors {
        for &b in &cy.colors {
            colors.push(a & b);
        }
    }
    KoColoring::new(m, p - m, cx.lambda, cx.control + cy.control, domain, colors)
}

/// Left fold of [`ko_product`] over the factors.
pub fn ko_product_all(factors: &[KoColoring]) -> Result<KoColoring> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::Precondition("no factors".into()))?;
    rest.iter().try_fold(first.clone(), |acc, c| ko_product(&acc, c))
}

/// `c^k`; requires `m >= (k - 1)(n - 1)` so the result keeps surplus
/// `m - (k - 1)(n - 1)` and dimension bound `k n - k + 1`.
pub fn ko_power(c: &KoColoring, k: usize) -> Result<KoColoring> {
    if k == 0 {
        return Err(Error::Precondition("power must be at least 1".into()));
    }
    ko_product_all(&vec![c.clone(); k])
}

/// Surplus at which each of `k` factors of dimension bound `n` must be drawn
/// for their product to have surplus `m`.
pub fn factor_surplus(m: usize, n: usize, k: usize) -> usize {
    m + (k - 1) * (n - 1)
}

/// Deterministic choice of one color per point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColorSelector {
    #[default]
    Smallest,
    Largest,
}

/// One color per point. Each single-color class is a subset of the
/// multi-color class of the same color, so clusters can only shrink.
pub fn ko_to_single(c: &KoColoring, selector: ColorSelector) -> Result<Coloring> {
    let mut out = Vec::with_capacity(c.len());
    for (i, &mask) in c.colors.iter().enumerate() {
        if mask == 0 {
            return Err(Error::Precondition(format!("point {i} has no color")));
        }
        out.push(match selector {
            ColorSelector::Smallest => mask.trailing_zeros(),
            ColorSelector::Largest => 63 - mask.leading_zeros(),
        });
    }
    let palette: BTreeSet<u32> = (0..c.palette_size() as u32).collect();
    Coloring::new(palette, out.into_iter().map(|x| vec![x]).collect())
}

/// A plain coloring of a box in `Z^n` with `n + 1` colors.
#[derive(Debug, Clone)]
pub struct GridColoring {
    /// The requested box partitioned into cells of side `lambda + 1`.
    pub space: LatticeBox,
    pub coloring: Coloring,
    /// The KO coloring with surplus 0 the plain coloring was read from.
    pub ko: KoColoring,
    /// `(4n^2 - 2n)(lambda + 1)`.
    pub control: Rational,
}

/// Product of `n` line colorings at surplus `n - 1`, reduced to one color per point.
pub fn ko_color_grid(lambda: i64, region: &LatticeBox) -> Result<GridColoring> {
    if region.cell_side() != 1 {
        return Err(Error::Precondition("region must be a point box".into()));
    }
    let n = region.dim();
    let surplus = factor_surplus(0, 2, n);
    let lines = (0..n)
        .map(|j| ko_color_line(lambda, surplus, region.lo()[j], region.hi()[j]))
        .collect::<Result<Vec<_>>>()?;
    let ko = ko_product_all(&lines)?;
    debug_assert_eq!((ko.m(), ko.n()), (0, n + 1));
    let coloring = ko_to_single(&ko, ColorSelector::Smallest)?;
    Ok(GridColoring {
        space: ko.domain.clone(),
        coloring,
        control: grid_control(n, lambda),
        ko,
    })
}

/// Outcome of checking both KO conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoReport {
    pub m: usize,
    pub n: usize,
    pub lambda: i64,
    pub control: Rational,
    pub min_colors: usize,
    pub max_colors: usize,
    /// Points with fewer than `m + 1` colors.
    pub short_points: usize,
    pub first_short: Option<usize>,
    pub clusters: ValidationReport,
    pub valid: bool,
}

impl KoReport {
    pub fn worst_diameter(&self) -> Option<Rational> {
        self.clusters
            .rows
            .iter()
            .map(|r| r.worst_diameter)
            .try_fold(int(0), |acc, d| d.map(|d| acc.max(d)))
    }

    pub fn csv_header() -> &'static str {
        "m,n,palette,lambda,control,min_colors,max_colors,short_points,worst_diameter,valid"
    }

    pub fn csv_row(&self) -> String {
        let worst = self
            .worst_diameter()
            .map(|d| d.to_string())
            .unwrap_or_else(|| "unknown".into());
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.m,
            self.n,
            self.m + self.n,
            self.lambda,
            self.control,
            self.min_colors,
            self.max_colors,
            self.short_points,
            worst,
            self.valid
        )
    }
}

/// Checks the color count and the cluster control of a KO coloring on its domain.
pub fn validate_ko(c: &KoColoring) -> Result<KoReport> {
    ko_report(&c.domain, c.m, c.n, c.lambda, c.control, &c.colors)
}

pub(crate) fn ko_report<S: ClusterSpace + ?Sized>(
    space: &S,
    m: usize,
    n: usize,
    lambda: i64,
    control: Rational,
    masks: &[u64],
) -> Result<KoReport> {
    let counts: Vec<usize> = masks.iter().map(|c| c.count_ones() as usize).collect();
    let first_short = counts.iter().position(|&k| k < m + 1);
    let short_points = counts.iter().filter(|&&k| k < m + 1).count();
    // Points without colors cannot enter a Coloring; they are already counted short.
    let palette: BTreeSet<u32> = (0..(m + n) as u32).collect();
    let sets: Vec<Vec<u32>> = masks
        .iter()
        .map(|&c| if c == 0 { vec![u32::MAX] } else { mask_colors(c) })
        .collect();
    let mut palette_with_blank = palette;
    if masks.contains(&0) {
        palette_with_blank.insert(u32::MAX);
    }
    let coloring = Coloring::new(palette_with_blank, sets)?;
    let mut clusters = validate_coloring(space, &coloring, ColoringSpec::new(int(lambda), control)?)?;
    clusters.rows.retain(|r| r.color != u32::MAX);
    clusters.valid = clusters.rows.iter().all(|r| r.ok);
    clusters.colors_used = clusters.rows.len();
    Ok(KoReport {
        m,
        n,
        lambda,
        control,
        min_colors: counts.iter().copied().min().unwrap_or(0),
        max_colors: counts.iter().copied().max().unwrap_or(0),
        short_points,
        first_short,
        valid: short_points == 0 && clusters.valid,
        clusters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FiniteMetricSpace;
    use proptest::prelude::*;

    fn line_window(lambda: i64, m: usize, periods: i64) -> KoColoring {
        ko_color_line(lambda, m, 0, periods * line_period(lambda, m) - 1).unwrap()
    }

    /// Clusters of the points of `Z` in `[lo, hi]` carrying `color`, by direct scan.
    fn line_cluster_oracle(lambda: i64, m: usize, lo: i64, hi: i64, color: u32) -> i64 {
        let pts: Vec<i64> = (lo..=hi)
            .filter(|&x| line_colors(lambda, m, LineRule::Staggered, x) >> color & 1 == 1)
            .collect();
        let mut best = 0;
        let mut start = 0;
        for w in 1..=pts.len() {
            if w == pts.len() || pts[w] - pts[w - 1] > lambda {
                if start < pts.len() {
                    best = best.max(pts[w - 1] - pts[start]);
                }
                start = w;
            }
        }
        best
    }

    #[test]
    fn line_m0_lambda1_alternates_blocks_of_two() {
        let c = line_window(1, 0, 10);
        assert_eq!(c.palette_size(), 2);
        let fine = c.refine().unwrap();
        let got: Vec<u64> = fine.masks()[..8].to_vec();
        assert_eq!(got, vec![0b10, 0b10, 0b01, 0b01, 0b10, 0b10, 0b01, 0b01]);
        let report = validate_ko(&c).unwrap();
        assert!(report.valid);
        assert_eq!(report.worst_diameter(), Some(int(1)));
        assert!(report.worst_diameter().unwrap() <= int(2));
        assert_eq!(c.control(), int(4));
    }

    #[test]
    fn line_m2_lambda3_clusters_stay_below_twelve() {
        let c = line_window(3, 2, 10);
        let report = validate_ko(&c).unwrap();
        assert!(report.valid);
        assert_eq!((report.min_colors, report.max_colors), (3, 3));
        let worst = report.worst_diameter().unwrap();
        assert!(worst <= int(12) && int(12) < c.control());
        assert_eq!(c.control(), int(24));
        let oracle = (0..4)
            .map(|col| line_cluster_oracle(3, 2, 0, 10 * line_period(3, 2) - 1, col))
            .max()
            .unwrap();
        assert_eq!(worst, int(oracle));
    }

    #[test]
    fn literal_rule_starves_odd_blocks() {
        for m in 0..4usize {
            let c = ko_color_line_with(2, m, 0, 20 * line_period(2, m) - 1, LineRule::Literal).unwrap();
            let report = validate_ko(&c).unwrap();
            assert!(!report.valid, "literal rule at m={m}");
            assert!(report.short_points > 0);
            assert_eq!(report.min_colors, m);
        }
        let c = ko_color_line_with(1, 0, 0, 15, LineRule::Literal).unwrap();
        let fine = c.refine().unwrap();
        assert_eq!(fine.mask(2), 0);
    }

    #[test]
    fn cell_and_point_validation_agree() {
        let c = ko_color_line(2, 1, -7, 40).unwrap();
        let coarse = validate_ko(&c).unwrap();
        let fine = validate_ko(&c.refine().unwrap()).unwrap();
        assert_eq!(coarse.worst_diameter(), fine.worst_diameter());
        assert_eq!(coarse.valid, fine.valid);
        let space = FiniteMetricSpace::integer_points(&(-7..=40).collect::<Vec<_>>());
        let explicit = ko_report(&space, 1, 2, 2, c.control(), c.refine().unwrap().masks()).unwrap();
        assert_eq!(explicit.worst_diameter(), fine.worst_diameter());
    }

    #[test]
    fn product_with_full_point_is_identity() {
        let cx = line_window(2, 1, 4);
        let point = LatticeBox::with_cells(vec![0], vec![0], 3).unwrap();
        let cy = KoColoring::new(2, 1, 2, int(0), point, vec![0b111]).unwrap();
        let p = ko_product(&cx, &cy).unwrap();
        assert_eq!((p.m(), p.n(), p.control()), (cx.m(), cx.n(), cx.control()));
        assert_eq!(p.masks(), cx.masks());
    }

    #[test]
    fn plane_from_two_lines_uses_three_colors() {
        let lambda = 1;
        let s = factor_surplus(0, 2, 2);
        let span = 6 * line_period(lambda, s) - 1;
        let cx = ko_color_line(lambda, s, 0, span).unwrap();
        let p = ko_product(&cx, &cx).unwrap();
        assert_eq!((p.m(), p.n(), p.palette_size()), (0, 3, 3));
        assert_eq!(p.control(), cx.control() * int(2));
        let report = validate_ko(&p).unwrap();
        assert!(report.valid);
        assert!(report.min_colors >= 1);
    }

    #[test]
    fn product_diameters_add_per_color() {
        let lambda = 2;
        let s = 1;
        let cx = ko_color_line(lambda, s, 0, 5 * line_period(lambda, s) - 1).unwrap();
        let cy = ko_color_line(lambda, s, 3, 4 * line_period(lambda, s) + 2).unwrap();
        let p = ko_product(&cx, &cy).unwrap();
        let (rx, ry, rp) = (
            validate_ko(&cx).unwrap(),
            validate_ko(&cy).unwrap(),
            validate_ko(&p).unwrap(),
        );
        for row in &rp.clusters.rows {
            let find = |r: &KoReport| {
                r.clusters
                    .rows
                    .iter()
                    .find(|x| x.color == row.color)
                    .unwrap()
                    .worst_diameter
                    .unwrap()
            };
            assert_eq!(row.worst_diameter.unwrap(), find(&rx) + find(&ry));
        }
    }

    #[test]
    fn palette_mismatch_is_reported() {
        let a = line_window(1, 0, 2);
        let b = line_window(1, 1, 2);
        assert_eq!(
            ko_product(&a, &b).unwrap_err(),
            Error::PaletteMismatch { left: 2, right: 3 }
        );
    }

    #[test]
    fn square_of_line_has_three_plus_m_colors() {
        for m in 0..3 {
            let c = line_window(1, factor_surplus(m, 2, 2), 3);
            let sq = ko_power(&c, 2).unwrap();
            assert_eq!((sq.m(), sq.palette_size()), (m, 3 + m));
        }
        let c = line_window(1, 0, 2);
        assert_eq!(ko_power(&c, 1).unwrap(), c);
        assert!(ko_power(&c, 2).is_err());
    }

    #[test]
    fn cube_power_lambda2_passes_under_three_d4() {
        let lambda = 2;
        let s = factor_surplus(0, 2, 3);
        let c = ko_color_line(lambda, s, 0, 3 * line_period(lambda, s) - 1).unwrap();
        let cube = ko_power(&c, 3).unwrap();
        assert_eq!((cube.m(), cube.n()), (0, 4));
        assert!(cube.control() <= line_control(lambda, 4) * int(3));
        let report = validate_ko(&cube).unwrap();
        assert!(report.valid);
        assert!(cube.has_period(&[line_period(lambda, s), 0, 0]).unwrap());
    }

    #[test]
    fn to_single_keeps_singles_and_shrinks_clusters() {
        let c = line_window(1, 0, 3);
        let single = ko_to_single(&c, ColorSelector::Smallest).unwrap();
        let already = c.with_masks(single.classes().iter().fold(vec![0; c.len()], |mut v, (col, pts)| {
            for &p in pts {
                v[p] |= 1 << col;
            }
            v
        }));
        let again = ko_to_single(&already.unwrap(), ColorSelector::Smallest).unwrap();
        assert_eq!(again, single);
        let spec = ColoringSpec::new(int(1), int(4)).unwrap();
        assert!(validate_coloring(c.domain(), &single, spec).unwrap().valid);
    }

    #[test]
    fn grid_examples() {
        for (n, lambda, control) in [(1usize, 1i64, 4i64), (2, 2, 36), (3, 1, 60)] {
            let side = 3 * control;
            let region = LatticeBox::cube(n, side).unwrap();
            let g = ko_color_grid(lambda, &region).unwrap();
            assert_eq!(g.control, int(control));
            assert!(g.coloring.used_colors().len() <= n + 1);
            let report = validate_coloring(&g.space, &g.coloring, ColoringSpec::new(int(lambda), g.control).unwrap()).unwrap();
            assert!(report.valid, "n={n} lambda={lambda}");
        }
    }

    #[test]
    fn grid_plane_pointwise_on_200_box() {
        let region = LatticeBox::cube(2, 200).unwrap();
        let g = ko_color_grid(2, &region).unwrap();
        let spec = ColoringSpec::new(int(2), int(36)).unwrap();
        let coarse = validate_coloring(&g.space, &g.coloring, spec).unwrap();
        let (fine, map) = g.space.refine().unwrap();
        let pointwise = Coloring::single(map.iter().map(|&c| g.coloring.colors_of(c)[0]).collect());
        let fine_report = validate_coloring(&fine, &pointwise, spec).unwrap();
        assert!(coarse.valid && fine_report.valid);
        let worst = |r: &ValidationReport| r.rows.iter().filter_map(|x| x.worst_diameter).max();
        assert_eq!(worst(&coarse), worst(&fine_report));
        assert_eq!(pointwise.used_colors().len(), 3);
    }

    #[test]
    fn json_round_trip() {
        let c = ko_color_line(2, 1, -4, 20).unwrap();
        let text = c.to_json().to_string();
        assert_eq!(KoColoring::from_json(&text, c.domain()).unwrap(), c);
        assert!(KoColoring::from_json("{}", c.domain()).is_err());
    }

    #[test]
    fn tampered_coloring_fails_validation() {
        let c = line_window(1, 1, 4);
        let mut masks = c.masks().to_vec();
        masks[3] = 1;
        let report = validate_ko(&c.with_masks(masks).unwrap()).unwrap();
        assert!(!report.valid);
        assert_eq!(report.first_short, Some(3));
        let all = c.with_masks(vec![0b111; c.len()]).unwrap();
        assert!(!validate_ko(&all).unwrap().clusters.valid);
    }

    proptest! {
        #[test]
        fn line_has_exactly_m_plus_one_colors(lambda in 1i64..=8, m in 0usize..=5, offset in -50i64..50) {
            let period = line_period(lambda, m);
            let c = ko_color_line(lambda, m, offset, offset + 10 * period - 1).unwrap();
            let report = validate_ko(&c).unwrap();
            prop_assert!(report.valid);
            prop_assert_eq!((report.min_colors, report.max_colors), (m + 1, m + 1));
            prop_assert!(report.worst_diameter().unwrap() < int((m as i64 + 1) * (lambda + 1)));
            prop_assert!(c.has_period(&[period]).unwrap());
        }

        #[test]
        fn product_intersections_keep_surplus(
            lambda in 1i64..=4,
            m in 0usize..=3,
            a in -20i64..20,
            b in -20i64..20,
        ) {
            let s = factor_surplus(m, 2, 2);
            let cx = ko_color_line(lambda, s, a, a + 2 * line_period(lambda, s)).unwrap();
            let cy = ko_color_line(lambda, s, b, b + 3 * line_period(lambda, s)).unwrap();
            let p = ko_product(&cx, &cy).unwrap();
            prop_assert_eq!(p.palette_size(), m + 3);
            for i in 0..cx.len() {
                for j in 0..cy.len() {
                    let both = cx.mask(i) & cy.mask(j);
                    prop_assert!(both.count_ones() as usize > m);
                    prop_assert_eq!(p.mask(i * cy.len() + j), both);
                }
            }
        }

        #[test]
        fn single_classes_are_subsets(lambda in 1i64..=3, m in 0usize..=3, largest in any::<bool>()) {
            let c = line_window(lambda, m, 4);
            let sel = if largest { ColorSelector::Largest } else { ColorSelector::Smallest };
            let single = ko_to_single(&c, sel).unwrap();
            let multi = c.to_coloring().unwrap();
            let multi_classes = multi.classes();
            for (col, pts) in single.classes() {
                let sup = &multi_classes[&col];
                prop_assert!(pts.iter().all(|p| sup.binary_search(p).is_ok()));
            }
            prop_assert!(single.used_colors().len() <= c.palette_size());
            let spec = ColoringSpec::new(int(lambda), c.control()).unwrap();
            let before = validate_coloring(c.domain(), &multi, spec).unwrap();
            let after = validate_coloring(c.domain(), &single, spec).unwrap();
            for row in &after.rows {
                let sup = before.rows.iter().find(|r| r.color == row.color).unwrap();
                prop_assert!(row.worst_diameter.unwrap() <= sup.worst_diameter.unwrap());
            }
        }
    }
}
