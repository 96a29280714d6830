//! lambda-clusters, (lambda, D)-colorings and their validation.

mod exact;
mod expansion;

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::LatticeBox;
use crate::metric::{int, FiniteMetricSpace, Rational};

pub use exact::{min_colors_exact, ExactColoring, DEFAULT_EXACT_CAP};
pub use expansion::{
    check_property_p, expansion_color_bound, girth_epsilon, ExpansionSpec, Graph, SearchMode,
    Verdict,
};

/// A finite space whose lambda-clusters and subset diameters can be computed.
pub trait ClusterSpace {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn point_label(&self, i: usize) -> String;

    /// Maximal lambda-connected parts of `subset`, each sorted ascending,
    /// listed by smallest member.
    fn clusters(&self, subset: &[usize], lambda: Rational) -> Vec<Vec<usize>>;

    /// `None` when some pairwise distance is unknown.
    fn set_diameter(&self, set: &[usize]) -> Option<Rational>;

    /// Points other than `i` within distance `lambda` of `i`.
    fn neighbors_within(&self, i: usize, lambda: Rational) -> Vec<usize>;
}

impl ClusterSpace for FiniteMetricSpace {
    fn len(&self) -> usize {
        FiniteMetricSpace::len(self)
    }

    fn point_label(&self, i: usize) -> String {
        self.label(i).to_string()
    }

    fn clusters(&self, subset: &[usize], lambda: Rational) -> Vec<Vec<usize>> {
        let mut pts = subset.to_vec();
        pts.sort_unstable();
        pts.dedup();
        let mut uf = UnionFind::<usize>::new(pts.len());
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                if self.dist(pts[a], pts[b]).is_some_and(|d| d <= lambda) {
                    uf.union(a, b);
                }
            }
        }
        let mut parts: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (a, &p) in pts.iter().enumerate() {
            parts.entry(uf.find(a)).or_default().push(p);
        }
        let mut out: Vec<Vec<usize>> = parts.into_values().collect();
        out.sort_by_key(|part| part[0]);
        out
    }

    fn set_diameter(&self, set: &[usize]) -> Option<Rational> {
        self.subset_diameter(set)
    }

    fn neighbors_within(&self, i: usize, lambda: Rational) -> Vec<usize> {
        (0..FiniteMetricSpace::len(self))
            .filter(|&j| j != i && self.dist(i, j).is_some_and(|d| d <= lambda))
            .collect()
    }
}

impl ClusterSpace for LatticeBox {
    fn len(&self) -> usize {
        LatticeBox::len(self)
    }

    fn point_label(&self, i: usize) -> String {
        self.label(i)
    }

    fn clusters(&self, subset: &[usize], lambda: Rational) -> Vec<Vec<usize>> {
        let mut out = LatticeBox::clusters(self, subset, lambda);
        out.sort_by_key(|part| part[0]);
        out
    }

    fn set_diameter(&self, set: &[usize]) -> Option<Rational> {
        Some(int(self.diameter(set)))
    }

    fn neighbors_within(&self, i: usize, lambda: Rational) -> Vec<usize> {
        LatticeBox::neighbors_within(self, i, lambda)
    }
}

/// lambda-clusters of `subset`; parts are pairwise more than `lambda` apart.
pub fn lambda_clusters<S: ClusterSpace + ?Sized>(
    space: &S,
    subset: &[usize],
    lambda: Rational,
) -> Vec<Vec<usize>> {
    space.clusters(subset, lambda)
}

/// Scale and diameter control of a (lambda, D)-coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColoringSpec {
    pub lambda: Rational,
    pub d: Rational,
}

impl ColoringSpec {
    pub fn new(lambda: Rational, d: Rational) -> Result<Self> {
        if lambda <= int(0) {
            return Err(Error::Precondition("lambda must be positive".into()));
        }
        if d < int(0) {
            return Err(Error::Precondition("D must be nonnegative".into()));
        }
        Ok(ColoringSpec { lambda, d })
    }
}

/// Every point carries a nonempty subset of the palette.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    palette: BTreeSet<u32>,
    colors: Vec<Vec<u32>>,
}

impl Coloring {
    pub fn new(palette: BTreeSet<u32>, colors: Vec<Vec<u32>>) -> Result<Self> {
        let mut colors = colors;
        for (i, set) in colors.iter_mut().enumerate() {
            set.sort_unstable();
            set.dedup();
            if set.is_empty() {
                return Err(Error::Precondition(format!("point {i} has no color")));
            }
            if let Some(c) = set.iter().find(|c| !palette.contains(c)) {
                return Err(Error::Precondition(format!(
                    "point {i} uses color {c} outside the palette"
                )));
            }
        }
        Ok(Coloring { palette, colors })
    }

    /// One color per point; the palette is the set of colors used.
    pub fn single(colors: Vec<u32>) -> Self {
        let palette = colors.iter().copied().collect();
        Coloring {
            palette,
            colors: colors.into_iter().map(|c| vec![c]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn palette(&self) -> &BTreeSet<u32> {
        &self.palette
    }

    pub fn colors_of(&self, i: usize) -> &[u32] {
        &self.colors[i]
    }

    pub fn is_single(&self) -> bool {
        self.colors.iter().all(|c| c.len() == 1)
    }

    pub fn used_colors(&self) -> BTreeSet<u32> {
        self.colors.iter().flatten().copied().collect()
    }

    /// Point set of every used color.
    pub fn classes(&self) -> BTreeMap<u32, Vec<usize>> {
        let mut out: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, set) in self.colors.iter().enumerate() {
            for &c in set {
                out.entry(c).or_default().push(i);
            }
        }
        out
    }

    /// Keeps the smallest color of every point.
    pub fn to_single(&self) -> Coloring {
        Coloring::single(self.colors.iter().map(|s| s[0]).collect())
    }

    pub fn to_json<S: ClusterSpace + ?Sized>(&self, space: &S) -> Value {
        let points: serde_json::Map<String, Value> = self
            .colors
            .iter()
            .enumerate()
            .map(|(i, set)| (space.point_label(i), json!(set)))
            .collect();
        json!({ "palette": self.palette, "points": points })
    }

    pub fn from_json<S: ClusterSpace + ?Sized>(text: &str, space: &S) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct Raw {
            palette: BTreeSet<u32>,
            points: BTreeMap<String, Vec<u32>>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut colors = Vec::with_capacity(space.len());
        for i in 0..space.len() {
            let label = space.point_label(i);
            let set = raw
                .points
                .get(&label)
                .ok_or_else(|| Error::Parse(format!("point {label} is not colored")))?;
            colors.push(set.clone());
        }
        if raw.points.len() != space.len() {
            return Err(Error::Parse("coloring names points outside the space".into()));
        }
        Coloring::new(raw.palette, colors)
    }
}

/// Worst cluster of one color class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorRow {
    pub color: u32,
    pub points: usize,
    pub clusters: usize,
    /// `None` when a cluster diameter is unknown.
    pub worst_diameter: Option<Rational>,
    pub worst_cluster: Vec<usize>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub spec: ColoringSpec,
    pub valid: bool,
    pub colors_used: usize,
    pub rows: Vec<ColorRow>,
}

impl ValidationReport {
    /// The first offending cluster, if any.
    pub fn witness(&self) -> Option<&ColorRow> {
        self.rows.iter().find(|r| !r.ok)
    }

    pub fn to_json<S: ClusterSpace + ?Sized>(&self, space: &S) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "color": r.color,
                    "points": r.points,
                    "clusters": r.clusters,
                    "worst_diameter": r.worst_diameter.map(|d| d.to_string()),
                    "worst_cluster": r.worst_cluster.iter().map(|&i| space.point_label(i)).collect::<Vec<_>>(),
                    "ok": r.ok,
                })
            })
            .collect();
        json!({
            "lambda": self.spec.lambda.to_string(),
            "D": self.spec.d.to_string(),
            "valid": self.valid,
            "colors_used": self.colors_used,
            "colors": rows,
        })
    }

    /// CSV with one row per color.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("color,points,clusters,worst_diameter,ok\n");
        for r in &self.rows {
            let diam = r.worst_diameter.map(|d| d.to_string()).unwrap_or_else(|| "unknown".into());
            out.push_str(&format!("{},{},{},{},{}\n", r.color, r.points, r.clusters, diam, r.ok));
        }
        out
    }
}

/// Checks that every monochromatic lambda-cluster has diameter at most D.
pub fn validate_coloring<S: ClusterSpace + ?Sized>(
    space: &S,
    coloring: &Coloring,
    spec: ColoringSpec,
) -> Result<ValidationReport> {
    if coloring.len() != space.len() {
        return Err(Error::Precondition(format!(
            "coloring covers {} points, space has {}",
            coloring.len(),
            space.len()
        )));
    }
    let mut rows = Vec::new();
    for (color, members) in coloring.classes() {
        let parts = space.clusters(&members, spec.lambda);
        let mut worst: Option<(Option<Rational>, Vec<usize>)> = None;
        for part in &parts {
            let diam = space.set_diameter(part);
            let worse = match &worst {
                None => true,
                Some((w, _)) => match (diam, w) {
                    (None, Some(_)) => true,
                    (Some(a), Some(b)) => a > *b,
                    _ => false,
                },
            };
            if worse {
                worst = Some((diam, part.clone()));
            }
        }
        let (worst_diameter, worst_cluster) = worst.unwrap_or((Some(int(0)), Vec::new()));
        rows.push(ColorRow {
            color,
            points: members.len(),
            clusters: parts.len(),
            worst_diameter,
            ok: worst_diameter.is_some_and(|d| d <= spec.d),
            worst_cluster,
        });
    }
    Ok(ValidationReport {
        spec,
        valid: rows.iter().all(|r| r.ok),
        colors_used: rows.len(),
        rows,
    })
}

/// Greedy proper coloring of the lambda-Rips graph in index order.
///
/// Every monochromatic lambda-cluster is a single point.
pub fn greedy_rips_coloring<S: ClusterSpace + ?Sized>(space: &S, lambda: Rational) -> Coloring {
    let n = space.len();
    let mut colors: Vec<Option<u32>> = vec![None; n];
    for i in 0..n {
        let taken: BTreeSet<u32> = space
            .neighbors_within(i, lambda)
            .into_iter()
            .filter_map(|j| colors[j])
            .collect();
        colors[i] = Some((0..).find(|c| !taken.contains(c)).expect("unbounded range"));
    }
    Coloring::single(colors.into_iter().map(|c| c.expect("every point colored")).collect())
}
