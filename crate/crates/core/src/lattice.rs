//! Boxes in Z^n under the l1 metric, optionally partitioned into aligned
//! cubical cells.
//!
//! With `cell == 1` the points of a [`LatticeBox`] are the lattice points of
//! the box. With `cell == s > 1` the points are the cells `[c s, c s + s - 1]^n`
//! clipped to the box, and a coloring of the box that is constant on cells is
//! stored once per cell. Clustering works on cells directly: every cell is
//! 1-connected, and two cells are lambda-adjacent iff the l1 distance between
//! them is at most lambda, so the lambda-clusters of a cell-constant point set
//! are exactly the unions of lambda-clustered cells.


use crate::error::{limit, Error, Result};
use crate::metric::{int, FiniteMetricSpace, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBox {
    lo: Vec<i64>,
    hi: Vec<i64>,
    cell: i64,
    cell_lo: Vec<i64>,
    counts: Vec<usize>,
}

impl LatticeBox {
    /// The box `[lo_j, hi_j]` (inclusive) in every coordinate, point by point.
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        Self::with_cells(lo, hi, 1)
    }

    pub fn cube(dim: usize, side: i64) -> Result<Self> {
        Self::new(vec![0; dim], vec![side - 1; dim])
    }

    pub fn with_cells(lo: Vec<i64>, hi: Vec<i64>, cell: i64) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::Precondition("box corners differ in dimension".into()));
        }
        if cell < 1 {
            return Err(Error::Precondition("cell side must be positive".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::Precondition("box is empty".into()));
        }
        let cell_lo: Vec<i64> = lo.iter().map(|&a| a.div_euclid(cell)).collect();
        let counts: Vec<usize> = hi
            .iter()
            .zip(&cell_lo)
            .map(|(&b, &c)| (b.div_euclid(cell) - c + 1) as usize)
            .collect();
        let total: u128 = counts.iter().map(|&c| c as u128).product();
        if total > u32::MAX as u128 {
            return Err(limit("lattice box cells", total, u32::MAX as u128));
        }
        Ok(LatticeBox {
            lo,
            hi,
            cell,
            cell_lo,
            counts,
        })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn cell_side(&self) -> i64 {
        self.cell
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    /// Number of points (cells) of the box.
    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of lattice points covered, regardless of cell size.
    pub fn lattice_points(&self) -> u128 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| (b - a + 1) as u128)
            .product()
    }

    /// Cell index vector (absolute, i.e. `floor(x / cell)`) of point `i`.
    pub fn cell_coords(&self, mut i: usize) -> Vec<i64> {
        let mut out = vec![0; self.dim()];
        for j in (0..self.dim()).rev() {
            out[j] = self.cell_lo[j] + (i % self.counts[j]) as i64;
            i /= self.counts[j];
        }
        out
    }

    pub fn index_of_cell(&self, coords: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for ((&c, &base), &count) in coords.iter().zip(&self.cell_lo).zip(&self.counts) {
            let off = c - base;
            if off < 0 || off as usize >= count {
                return None;
            }
            idx = idx * count + off as usize;
        }
        Some(idx)
    }

    /// Index of the cell containing the lattice point `x`.
    pub fn index_of_point(&self, x: &[i64]) -> Option<usize> {
        if x
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .any(|(v, (a, b))| v < a || v > b)
        {
            return None;
        }
        let cells: Vec<i64> = x.iter().map(|v| v.div_euclid(self.cell)).collect();
        self.index_of_cell(&cells)
    }

    /// Inclusive extent of cell `i` along axis `j`.
    pub fn extent(&self, i: usize, j: usize) -> (i64, i64) {
        let c = self.cell_coords(i)[j];
        self.axis_extent(c, j)
    }

    fn axis_extent(&self, c: i64, j: usize) -> (i64, i64) {
        (
            (c * self.cell).max(self.lo[j]),
            (c * self.cell + self.cell - 1).min(self.hi[j]),
        )
    }

    pub fn label(&self, i: usize) -> String {
        let c = self.cell_coords(i);
        if self.cell == 1 {
            if c.len() == 1 {
                c[0].to_string()
            } else {
                let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                format!("({})", parts.join(","))
            }
        } else {
            let parts: Vec<String> = (0..self.dim())
                .map(|j| {
                    let (a, b) = self.axis_extent(c[j], j);
                    format!("[{a}..{b}]")
                })
                .collect();
            parts.join("x")
        }
    }

    /// The l1 product box; point `(i, j)` has index `i * |other| + j`.
    pub fn product(&self, other: &LatticeBox) -> Result<LatticeBox> {
        if self.cell != other.cell {
            return Err(Error::Precondition("cell sides differ".into()));
        }
        let mut lo = self.lo.clone();
        lo.extend_from_slice(&other.lo);
        let mut hi = self.hi.clone();
        hi.extend_from_slice(&other.hi);
        LatticeBox::with_cells(lo, hi, self.cell)
    }

    /// Minimum l1 distance between the lattice points of two cells.
    pub fn cell_distance(&self, i: usize, k: usize) -> i64 {
        let (a, b) = (self.cell_coords(i), self.cell_coords(k));
        (0..self.dim())
            .map(|j| {
                let (alo, ahi) = self.axis_extent(a[j], j);
                let (blo, bhi) = self.axis_extent(b[j], j);
                (blo - ahi).max(alo - bhi).max(0)
            })
            .sum()
    }

    /// Offsets between cells whose l1 gap is at most `lambda`, excluding zero.
    fn offsets(&self, lambda: i64) -> Vec<Vec<i64>> {
        let gap = |d: i64| if d == 0 { 0 } else { (d.abs() - 1) * self.cell + 1 };
        let reach = if lambda < 1 { 0 } else { (lambda - 1) / self.cell + 1 };
        let mut out = Vec::new();
        let mut cur = vec![0i64; self.dim()];
        fn rec(
            j: usize,
            budget: i64,
            reach: i64,
            cur: &mut Vec<i64>,
            out: &mut Vec<Vec<i64>>,
            gap: &dyn Fn(i64) -> i64,
        ) {
            if j == cur.len() {
                if cur.iter().any(|&v| v != 0) {
                    out.push(cur.clone());
                }
                return;
            }
            for d in -reach..=reach {
                let g = gap(d);
                if g <= budget {
                    cur[j] = d;
                    rec(j + 1, budget - g, reach, cur, out, gap);
                }
            }
            cur[j] = 0;
        }
        rec(0, lambda, reach, &mut cur, &mut out, &gap);
        out
    }

    /// lambda-clusters of a set of cells.
    pub fn clusters(&self, subset: &[usize], lambda: Rational) -> Vec<Vec<usize>> {
        let lam = lambda.floor().to_integer();
        let mut member = vec![false; self.len()];
        for &i in subset {
            member[i] = true;
        }
        let offsets = if lam >= 0 { self.offsets(lam) } else { Vec::new() };
        let mut seen = vec![false; self.len()];
        let mut parts = Vec::new();
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &s in &sorted {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut part = vec![s];
            let mut head = 0;
            while head < part.len() {
                let c = self.cell_coords(part[head]);
                head += 1;
                for off in &offsets {
                    let nb: Vec<i64> = c.iter().zip(off).map(|(a, b)| a + b).collect();
                    if let Some(k) = self.index_of_cell(&nb) {
                        if member[k] && !seen[k] {
                            seen[k] = true;
                            part.push(k);
                        }
                    }
                }
            }
            part.sort_unstable();
            parts.push(part);
        }
        parts
    }

    /// Exact l1 diameter of the union of the given cells.
    pub fn diameter(&self, set: &[usize]) -> i64 {
        if set.is_empty() {
            return 0;
        }
        let d = self.dim();
        let extents: Vec<Vec<(i64, i64)>> = set
            .iter()
            .map(|&i| {
                let c = self.cell_coords(i);
                (0..d).map(|j| self.axis_extent(c[j], j)).collect()
            })
            .collect();
        let mut best = 0;
        // Fix the sign of the first axis; the opposite pattern gives the same range.
        for mask in 0..(1u64 << (d - 1)) {
            let mut max_v = i64::MIN;
            let mut min_v = i64::MAX;
            for ext in &extents {
                let (mut top, mut bottom) = (0, 0);
                for (j, &(a, b)) in ext.iter().enumerate() {
                    let negative = j > 0 && mask >> (j - 1) & 1 == 1;
                    if negative {
                        top -= a;
                        bottom -= b;
                    } else {
                        top += b;
                        bottom += a;
                    }
                }
                max_v = max_v.max(top);
                min_v = min_v.min(bottom);
            }
            best = best.max(max_v - min_v);
        }
        best
    }

    /// Cells within distance `lambda` of cell `i`.
    pub fn neighbors_within(&self, i: usize, lambda: Rational) -> Vec<usize> {
        let lam = lambda.floor().to_integer();
        if lam < 0 {
            return Vec::new();
        }
        let c = self.cell_coords(i);
        self.offsets(lam)
            .iter()
            .filter_map(|off| {
                let nb: Vec<i64> = c.iter().zip(off).map(|(a, b)| a + b).collect();
                self.index_of_cell(&nb)
            })
            .collect()
    }

    /// The same box as an explicit metric space of lattice points.
    pub fn to_metric_space(&self) -> Result<FiniteMetricSpace> {
        if self.cell != 1 {
            return Err(Error::Precondition(
                "only point boxes convert to metric spaces".into(),
            ));
        }
        let pts: Vec<Vec<i64>> = (0..self.len()).map(|i| self.cell_coords(i)).collect();
        let labels = (0..self.len()).map(|i| self.label(i)).collect();
        Ok(FiniteMetricSpace::from_oracle(labels, move |i, j| {
            Some(int(pts[i]
                .iter()
                .zip(&pts[j])
                .map(|(a, b)| (a - b).abs())
                .sum()))
        }))
    }

    /// The point box refining this cell box, with the cell of each point.
    pub fn refine(&self) -> Result<(LatticeBox, Vec<usize>)> {
        let fine = LatticeBox::new(self.lo.clone(), self.hi.clone())?;
        let map = (0..fine.len())
            .map(|p| {
                self.index_of_point(&fine.cell_coords(p))
                    .expect("refined point lies in the box")
            })
            .collect();
        Ok((fine, map))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_round_trips() {
        let b = LatticeBox::new(vec![-2, 3], vec![1, 5]).unwrap();
        assert_eq!(b.len(), 12);
        for i in 0..b.len() {
            assert_eq!(b.index_of_cell(&b.cell_coords(i)), Some(i));
        }
        assert_eq!(b.label(0), "(-2,3)");
    }

    #[test]
    fn cell_extents_clip_to_the_box() {
        let b = LatticeBox::with_cells(vec![1], vec![10], 4).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b.extent(0, 0), (1, 3));
        assert_eq!(b.extent(1, 0), (4, 7));
        assert_eq!(b.extent(2, 0), (8, 10));
        assert_eq!(b.cell_distance(0, 2), 5);
        assert_eq!(b.diameter(&[0, 2]), 9);
    }

    #[test]
    fn cell_clusters_match_point_clusters() {
        // A cell-constant set on a 2-D box with side-3 cells.
        let coarse = LatticeBox::with_cells(vec![-1, 0], vec![12, 10], 3).unwrap();
        let chosen: Vec<usize> = (0..coarse.len()).filter(|i| i % 3 != 1).collect();
        let (fine, map) = coarse.refine().unwrap();
        let fine_set: Vec<usize> = (0..fine.len()).filter(|p| chosen.contains(&map[*p])).collect();
        let space = fine.to_metric_space().unwrap();
        for lambda in 1..5 {
            let lam = int(lambda);
            let mut coarse_parts: Vec<Vec<usize>> = coarse
                .clusters(&chosen, lam)
                .into_iter()
                .map(|part| {
                    let mut pts: Vec<usize> =
                        (0..fine.len()).filter(|p| part.contains(&map[*p])).collect();
                    pts.sort_unstable();
                    pts
                })
                .collect();
            coarse_parts.sort();
            let mut fine_parts = fine.clusters(&fine_set, lam);
            fine_parts.sort();
            assert_eq!(coarse_parts, fine_parts, "lambda={lambda}");
            for part in &fine_parts {
                let cells: Vec<usize> = {
                    let mut c: Vec<usize> = part.iter().map(|p| map[*p]).collect();
                    c.sort_unstable();
                    c.dedup();
                    c
                };
                assert_eq!(
                    Some(int(coarse.diameter(&cells))),
                    space.subset_diameter(part)
                );
            }
        }
    }

    #[test]
    fn product_indexing_is_row_major() {
        let x = LatticeBox::new(vec![0], vec![2]).unwrap();
        let y = LatticeBox::new(vec![5], vec![6]).unwrap();
        let p = x.product(&y).unwrap();
        assert_eq!(p.len(), 6);
        assert_eq!(p.cell_coords(3), vec![1, 6]);
    }

    #[test]
    fn offsets_respect_the_gap() {
        let b = LatticeBox::cube(2, 9).unwrap();
        // l1 ball of radius 2 in Z^2 minus the centre.
        assert_eq!(b.offsets(2).len(), 12);
        let c = LatticeBox::with_cells(vec![0, 0], vec![20, 20], 3).unwrap();
        // Cells at offset +-1 per axis are at gap 1 each.
        assert_eq!(c.offsets(1).len(), 4);
        assert_eq!(c.offsets(2).len(), 8);
        assert_eq!(c.offsets(4).len(), 12);
    }
}
