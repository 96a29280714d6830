//! One function per subcommand; each returns a report and leaves rendering
//! and exit codes to the caller.

use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use dimgrowth::cluster::{
    check_property_p, min_colors_exact, validate_coloring, Coloring, ColoringSpec, ExpansionSpec, Graph,
    SearchMode, ValidationReport, Verdict,
};
use dimgrowth::crosspoly::{ehrhart_row, EhrhartQuery};
use dimgrowth::groups::{bfs_ball, MarkedGroup};
use dimgrowth::hypercube::{
    board_json, boundary2_holds, expansion_holds, hex1_min_colors, verify_boundary2, verify_cube_expansion,
    CubeSubset,
};
use dimgrowth::ko::{
    bk_ko_bound, factor_surplus, grid_control, ko_color_grid, ko_color_line_with, line_period,
    validate_ko, KoReport, LineRule,
};
use dimgrowth::lattice::LatticeBox;
use dimgrowth::metric::int;
use dimgrowth::thompson::{burillo_check, distortion_report, xi_embed, ThompsonF};
use dimgrowth::wreath::{bk_lower_bound, integer_wreath, lamplighter, zwg_lower_bound, IteratedWreath};
use dimgrowth::Rational;

use crate::cells;
use crate::registry::{GroupDesc, SpaceDesc};
use crate::report::{Report, Status};
use crate::{CubeArgs, RunConfig};

/// Entries listed in a report's detail before truncation.
const DETAIL_LIMIT: usize = 20;

/// Independent seed for the `stream`-th random consumer of a run, so that
/// adding or reordering consumers leaves the others unchanged.
pub fn subseed(seed: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.next_u64()
}

fn cap(cfg: &RunConfig) -> usize {
    usize::try_from(cfg.budget).unwrap_or(usize::MAX)
}

fn fixed(x: f64) -> String {
    format!("{x:.6}")
}

fn verdict_status<W>(v: &Verdict<W>) -> Status {
    match v {
        Verdict::Pass { .. } => Status::Pass,
        Verdict::Fail { .. } => Status::Witness,
        Verdict::Indeterminate { .. } => Status::Indeterminate,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubeCheckKind {
    Expansion,
    Boundary2,
}

const CUBE_HEADER: &[&str] = &["n", "r", "epsilon", "mode", "checked", "verdict", "size", "boundary", "witness"];

pub fn cube(args: &CubeArgs, cfg: &RunConfig, kind: CubeCheckKind) -> Result<Report> {
    let name = match kind {
        CubeCheckKind::Expansion => "cube-expansion",
        CubeCheckKind::Boundary2 => "boundary2",
    };
    let (n, r) = (args.n, args.r);
    let mut report = Report::new(name, CUBE_HEADER);
    if let Some(hex) = &args.subset {
        let a = CubeSubset::from_hex(hex).context("--subset")?;
        if a.dim() != n {
            bail!("--subset has dimension {}, but --n is {n}", a.dim());
        }
        if a.diameter() > r {
            bail!("--subset has diameter {} > --r {r}", a.diameter());
        }
        let (ok, boundary, epsilon) = match kind {
            CubeCheckKind::Expansion => {
                let (ok, b) = expansion_holds(&a, r)?;
                (ok, b, Rational::new(n as i64, r as i64 + 1) - int(2))
            }
            CubeCheckKind::Boundary2 => {
                let (ok, b) = boundary2_holds(&a, r)?;
                (ok, b, Rational::new((n * n) as i64, 4 * (r as i64 + 2).pow(2)))
            }
        };
        report.worsen(Status::from_pass(ok));
        let verdict = if ok { "PASS" } else { "FAIL" };
        report.row(cells![n, r, epsilon, "single", 1, verdict, a.len(), boundary, hex]);
        return Ok(report);
    }
    let (mode, mode_name) = match args.samples {
        Some(samples) => (SearchMode::Sampled { samples, seed: subseed(cfg.seed, 0) }, "sampled"),
        None => (SearchMode::Exhaustive, "exhaustive"),
    };
    let check = match kind {
        CubeCheckKind::Expansion => verify_cube_expansion(n, r, mode, cfg.budget, args.exploratory),
        CubeCheckKind::Boundary2 => verify_boundary2(n, r, mode, cfg.budget, args.exploratory),
    }
    .context("--n/--r")?;
    report.worsen(verdict_status(&check.verdict));
    let (size, boundary, witness) = match &check.verdict {
        Verdict::Fail { witness, size, boundary, .. } => {
            let hex = witness.to_hex().unwrap_or_else(|_| format!("{:?}", witness.members()));
            (size.to_string(), boundary.to_string(), hex)
        }
        _ => ("-".into(), "-".into(), "-".into()),
    };
    report.row(cells![
        n,
        r,
        check.epsilon,
        mode_name,
        check.verdict.checked(),
        check.verdict.name(),
        size,
        boundary,
        witness
    ]);
    report.detail = json!({
        "sets": check.stats.sets,
        "mean_size": fixed(check.stats.mean_size),
        "max_size": check.stats.max_size,
    });
    Ok(report)
}

pub fn min_colors(space: &SpaceDesc, lambda: Rational, d: Rational, max_colors: usize, cfg: &RunConfig) -> Result<Report> {
    let x = space.build(cap(cfg)).context("--space")?;
    let spec = ColoringSpec::new(lambda, d).context("--lambda/--D")?;
    let exact = min_colors_exact(&x, spec, max_colors)?;
    let mut report = Report::new("min-colors", &["space", "lambda", "D", "points", "colors", "nodes"]);
    report.row(cells![space, lambda, d, x.len(), exact.colors, exact.nodes]);
    report.detail = json!({ "certificate": exact.certificate.to_json(&x) });
    Ok(report)
}

pub fn hex1(k: usize, s: i64, d: Rational, max_colors: usize, cfg: &RunConfig) -> Result<Report> {
    let (board, exact) = hex1_min_colors(k, s, d, cap(cfg)).context("--k/--s")?;
    if exact.colors > max_colors {
        bail!("--cap {max_colors} is below the {} colors needed", exact.colors);
    }
    let mut report = Report::new("hex1", &["k", "s", "D", "colors", "nodes"]);
    report.row(cells![k, s, d, exact.colors, exact.nodes]);
    report.detail = json!({
        "board": board_json(&board, &exact.certificate),
        "certificate": exact.certificate.to_json(&board),
    });
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Oracle {
    /// Word lengths from breadth-first search of the Cayley graph.
    Bfs,
}

/// Compares a closed-form length against BFS over the whole ball.
fn length_mismatches<G: MarkedGroup>(
    group: &G,
    radius: u32,
    cap: usize,
    length: impl Fn(&G::Element) -> dimgrowth::Result<u64>,
) -> Result<(usize, u32, Vec<Value>)> {
    let ball = bfs_ball(group, radius, cap)?;
    let mut mismatches = Vec::new();
    for (e, &bfs) in ball.elements.iter().zip(&ball.lengths) {
        let formula = length(e)?;
        if formula != bfs as u64 {
            mismatches.push(json!({ "element": group.label(e), "formula": formula, "bfs": bfs }));
        }
    }
    let max = ball.lengths.iter().copied().max().unwrap_or(0);
    Ok((ball.len(), max, mismatches))
}

pub fn parry(instance: &GroupDesc, radius: u32, oracle: Oracle, cfg: &RunConfig) -> Result<Report> {
    let Oracle::Bfs = oracle;
    let (elements, max, mismatches) = match instance {
        GroupDesc::Lamplighter => {
            let w = lamplighter();
            length_mismatches(&w, radius, cap(cfg), |e| w.parry_length(e))?
        }
        GroupDesc::IntegerWreath => {
            let w = integer_wreath();
            length_mismatches(&w, radius, cap(cfg), |e| w.parry_length(e))?
        }
        GroupDesc::Iterated(k) => {
            let w = IteratedWreath { level: *k };
            length_mismatches(&w, radius, cap(cfg), |e| w.length(e))?
        }
        other => bail!("--instance must be lamplighter, z2wrz, zwrz or bk:k, not `{other}`"),
    };
    let mut report = Report::new("parry", &["instance", "radius", "elements", "max_length", "mismatches"]);
    report.worsen(Status::from_pass(mismatches.is_empty()));
    report.row(cells![instance, radius, elements, max, mismatches.len()]);
    report.detail = json!({ "mismatches": &mismatches[..mismatches.len().min(DETAIL_LIMIT)] });
    Ok(report)
}

fn admits(control: Option<Rational>, f: impl Fn(Rational) -> bool) -> String {
    control.map(|c| f(c).to_string()).unwrap_or_else(|| "-".into())
}

pub fn bk_lower(k: u32, lambda: Rational, control: Option<Rational>) -> Result<Report> {
    let b = bk_lower_bound(k, lambda).context("--k/--lambda")?;
    let mut report = Report::new(
        "bk-lower",
        &["k", "lambda", "r", "lattice_points", "bound", "r_max", "alpha", "beta", "control", "admits"],
    );
    report.row(cells![
        k,
        lambda,
        b.r,
        b.l,
        b.bound,
        fixed(b.r_max),
        fixed(b.alpha),
        fixed(b.beta),
        control.map(|c| c.to_string()).unwrap_or_else(|| "-".into()),
        admits(control, |c| b.admits_control(c))
    ]);
    Ok(report)
}

pub fn zwg_lower(group: &GroupDesc, lambda: Rational, control: Option<Rational>, cfg: &RunConfig) -> Result<Report> {
    if lambda <= int(0) {
        bail!("--lambda must be positive");
    }
    let max_r = u32::try_from((lambda / int(5)).floor().to_integer()).context("--lambda is too large")?;
    let sizes = group.ball_sizes(max_r, cap(cfg)).context("--group")?;
    let z = zwg_lower_bound(&sizes, lambda).context("--lambda")?;
    let mut report = Report::new("zwg-lower", &["group", "lambda", "r", "bound", "ceiling", "control", "admits"]);
    report.row(cells![
        group,
        lambda,
        z.r,
        z.bound,
        fixed(z.ceiling),
        control.map(|c| c.to_string()).unwrap_or_else(|| "-".into()),
        admits(control, |c| z.admits_control(c))
    ]);
    report.detail = json!({ "ball_sizes": sizes.values().collect::<Vec<_>>() });
    Ok(report)
}

pub fn ehrhart(k: u32, r: u64, cfg: &RunConfig) -> Result<Report> {
    let q = EhrhartQuery::new(k, r).context("--k")?;
    let row = ehrhart_row(q, cfg.budget);
    let mut report = Report::new("ehrhart", &["k", "r", "oracle", "paper_formula", "corrected", "status"]);
    report.worsen(match row.status() {
        "match" | "mismatch-paper-formula" => Status::Pass,
        "mismatch-corrected-formula" => Status::Witness,
        _ => Status::Indeterminate,
    });
    report.row(row.csv().split(',').map(str::to_string).collect());
    Ok(report)
}

pub fn thompson_burillo(radius: u32, cfg: &RunConfig) -> Result<Report> {
    let b = burillo_check(radius, cap(cfg)).context("--radius")?;
    let mut report = Report::new(
        "thompson-burillo",
        &["radius", "elements", "violations", "max_cells_per_word", "max_word_per_cells"],
    );
    report.worsen(Status::from_pass(b.violations.is_empty()));
    report.row(cells![radius, b.elements, b.violations.len(), b.max_cells_per_word, b.max_word_per_cells]);
    let violations: Vec<Value> = b
        .violations
        .iter()
        .take(DETAIL_LIMIT)
        .map(|(d, word, cells)| json!({ "element": ThompsonF.label(d), "word": word, "cells": cells }))
        .collect();
    report.detail = json!({ "violations": violations });
    Ok(report)
}

pub fn thompson_embed(n: u32, samples: u64, spread: i64, kvec: Option<Vec<i64>>, cfg: &RunConfig) -> Result<Report> {
    if !(1..=4).contains(&n) {
        bail!("--n must lie in 1..=4");
    }
    if spread < 0 {
        bail!("--spread must be nonnegative");
    }
    let width = 1usize << n;
    let vectors: Vec<Vec<i64>> = match &kvec {
        Some(k) => vec![k.clone()],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(subseed(cfg.seed, 0));
            (0..samples)
                .map(|_| (0..width).map(|_| rng.random_range(-spread..=spread)).collect())
                .collect()
        }
    };
    let mut report = Report::new("thompson-embed", &["n", "kvec", "cells", "lower", "upper", "within"]);
    for k in &vectors {
        let e = xi_embed(n, k).context("--kvec")?;
        report.worsen(Status::from_pass(e.within()));
        let joined: Vec<String> = k.iter().map(i64::to_string).collect();
        report.row(cells![n, joined.join(" "), e.cells, e.lower, e.upper, e.within()]);
    }
    if kvec.is_none() {
        let d = distortion_report(n, samples, spread, subseed(cfg.seed, 1))?;
        report.worsen(Status::from_pass(d.within_25()));
        report.detail = json!({
            "distortion": {
                "c1": d.c1.to_string(),
                "c2": d.c2.to_string(),
                "cell_ratio_min": d.cell_ratio_min.to_string(),
                "cell_ratio_max": d.cell_ratio_max.to_string(),
                "lambda_min": d.lambda_min.to_string(),
                "chain_bound": d.chain_bound,
                "within_25": d.within_25(),
            }
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Rule {
    /// Block b omits color b mod (m+2).
    Staggered,
    /// Color i is present unless b = 2i+1 mod (2m+2).
    Literal,
}

fn ko_header(lead: &[&'static str]) -> Vec<&'static str> {
    lead.iter().copied().chain(KoReport::csv_header().split(',')).collect()
}

fn ko_cells(lead: Vec<String>, r: &KoReport) -> Vec<String> {
    lead.into_iter().chain(r.csv_row().split(',').map(str::to_string)).collect()
}

fn ko_detail(r: &KoReport, label: impl Fn(usize) -> String) -> Value {
    let worst = r.clusters.witness().map(|row| {
        json!({
            "color": row.color,
            "diameter": row.worst_diameter.map(|d| d.to_string()),
            "cluster": row.worst_cluster.iter().take(DETAIL_LIMIT).map(|&i| label(i)).collect::<Vec<_>>(),
        })
    });
    json!({ "first_short_point": r.first_short.map(&label), "oversized_cluster": worst })
}

fn check_cells(cells: u128, cfg: &RunConfig) -> Result<()> {
    if cells > cfg.budget as u128 {
        return Err(dimgrowth::Error::ResourceLimit { what: "cells", needed: cells, cap: cfg.budget as u128 }.into());
    }
    Ok(())
}

pub fn ko_line(lambda: i64, m: usize, periods: i64, rule: Rule) -> Result<Report> {
    if periods < 1 {
        bail!("--periods must be positive");
    }
    let rule = match rule {
        Rule::Staggered => LineRule::Staggered,
        Rule::Literal => LineRule::Literal,
    };
    let hi = periods
        .checked_mul(line_period(lambda, m))
        .context("--periods is too large")?
        - 1;
    let c = ko_color_line_with(lambda, m, 0, hi, rule).context("--lambda/--m")?;
    let r = validate_ko(&c)?;
    let rule_name = format!("{rule:?}").to_lowercase();
    let mut report = Report::new("ko-line", &ko_header(&["rule", "points"]));
    report.worsen(Status::from_pass(r.valid));
    report.row(ko_cells(cells![rule_name, hi + 1], &r));
    report.detail = ko_detail(&r, |i| c.domain().label(i));
    Ok(report)
}

pub fn ko_grid(n: usize, lambda: i64, side: Option<i64>, cfg: &RunConfig) -> Result<Report> {
    if n == 0 || lambda < 1 {
        bail!("--n and --lambda must be positive");
    }
    let control = grid_control(n, lambda);
    let side = side.unwrap_or(3 * control.to_integer());
    if side < 1 {
        bail!("--side must be positive");
    }
    check_cells(((side as u128).div_ceil(lambda as u128 + 1)).saturating_pow(n as u32), cfg)?;
    let region = LatticeBox::cube(n, side)?;
    let g = ko_color_grid(lambda, &region)?;
    let spec = ColoringSpec::new(int(lambda), g.control)?;
    let v = validate_coloring(&g.space, &g.coloring, spec)?;
    let mut report = Report::new(
        "ko-grid",
        &["n", "lambda", "side", "control", "colors_used", "worst_diameter", "valid"],
    );
    report.worsen(Status::from_pass(v.valid && v.colors_used <= n + 1));
    let worst = v.rows.iter().filter_map(|r| r.worst_diameter).max().unwrap_or(int(0));
    report.row(cells![n, lambda, side, g.control, v.colors_used, worst, v.valid]);
    report.detail = validation_detail(&v, |i| g.space.label(i));
    Ok(report)
}

fn validation_detail(v: &ValidationReport, label: impl Fn(usize) -> String) -> Value {
    let rows: Vec<Value> = v
        .rows
        .iter()
        .map(|r| {
            json!({
                "color": r.color,
                "points": r.points,
                "clusters": r.clusters,
                "worst_diameter": r.worst_diameter.map(|d| d.to_string()),
                "ok": r.ok,
            })
        })
        .collect();
    let witness = v.witness().map(|r| r.worst_cluster.iter().take(DETAIL_LIMIT).map(|&i| label(i)).collect::<Vec<_>>());
    json!({ "colors": rows, "witness_cluster": witness })
}

pub fn ko_power(lambda: i64, m: usize, k: usize, periods: i64, cfg: &RunConfig) -> Result<Report> {
    if k == 0 || periods < 1 {
        bail!("--k and --periods must be positive");
    }
    let surplus = factor_surplus(m, 2, k);
    let side = periods.checked_mul(line_period(lambda.max(1), surplus)).context("--periods is too large")?;
    check_cells((side as u128 / (lambda.max(1) as u128 + 1)).saturating_pow(k as u32), cfg)?;
    let line = ko_color_line_with(lambda, surplus, 0, side - 1, LineRule::Staggered).context("--lambda/--m")?;
    let c = dimgrowth::ko::ko_power(&line, k)?;
    let r = validate_ko(&c)?;
    let mut report = Report::new("ko-power", &ko_header(&["k", "line_surplus", "side"]));
    report.worsen(Status::from_pass(r.valid && r.m == m && r.n == k + 1));
    report.row(ko_cells(cells![k, surplus, side], &r));
    report.detail = ko_detail(&r, |i| c.domain().label(i));
    Ok(report)
}

pub fn ko_bk(k: u32, lambda: u64, m: u64) -> Result<Report> {
    let b = bk_ko_bound(k, lambda, m).context("--lambda")?;
    let mut report = Report::new(
        "ko-bk",
        &["level", "a", "b", "palette", "palette_bound", "palette_holds", "control", "control_bound", "control_holds"],
    );
    for j in 0..=k as usize {
        let step = b.steps.get(j);
        let show = |f: &dyn Fn(&dimgrowth::ko::BkKoStep) -> String| step.map(f).unwrap_or_else(|| "-".into());
        report.row(cells![
            j,
            b.a[j],
            b.b[j],
            show(&|s| s.palette.to_string()),
            show(&|s| s.palette_bound.to_string()),
            show(&|s| s.palette_holds().to_string()),
            show(&|s| s.control.to_string()),
            show(&|s| s.control_bound.to_string()),
            show(&|s| s.control_holds().to_string())
        ]);
    }
    report.worsen(Status::from_pass(b.palette_chain_holds() && b.control_chain_holds()));
    report.detail = json!({
        "colors": b.colors.to_string(),
        "control": b.control.to_string(),
        "line_control": b.line_control.to_string(),
        "base_dominates_line": b.base_dominates_line(),
    });
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphDesc {
    Cycle(usize),
    Complete(usize),
    File(String),
}

impl FromStr for GraphDesc {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = s.split_once(':').with_context(|| format!("graph `{s}` needs a parameter"))?;
        let size = || -> Result<usize> {
            arg.parse::<usize>().ok().filter(|&n| n >= 1).with_context(|| format!("bad size in `{s}`"))
        };
        Ok(match head {
            "cycle" => GraphDesc::Cycle(size()?),
            "complete" => GraphDesc::Complete(size()?),
            "file" if !arg.is_empty() => GraphDesc::File(arg.to_string()),
            _ => bail!("unknown graph `{s}`; use cycle:n, complete:n or file:<path>"),
        })
    }
}

impl std::fmt::Display for GraphDesc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphDesc::Cycle(n) => write!(f, "cycle:{n}"),
            GraphDesc::Complete(n) => write!(f, "complete:{n}"),
            GraphDesc::File(p) => write!(f, "file:{p}"),
        }
    }
}

impl GraphDesc {
    fn build(&self) -> Result<Graph> {
        Ok(match self {
            GraphDesc::Cycle(n) => Graph::cycle(*n),
            GraphDesc::Complete(n) => Graph::complete(*n),
            GraphDesc::File(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("--graph: cannot read {p}"))?;
                Graph::from_edge_list(&text).context("--graph")?
            }
        })
    }
}

pub fn property_p(graph: &GraphDesc, epsilon: Rational, r: Rational, samples: Option<u64>, cfg: &RunConfig) -> Result<Report> {
    let g = graph.build()?;
    let spec = ExpansionSpec::new(epsilon, r).context("--epsilon/--r")?;
    let (mode, mode_name) = match samples {
        Some(samples) => (SearchMode::Sampled { samples, seed: subseed(cfg.seed, 0) }, "sampled"),
        None => (SearchMode::Exhaustive, "exhaustive"),
    };
    let v = check_property_p(&g, spec, mode, cfg.budget);
    let mut report = Report::new(
        "property-p",
        &["graph", "epsilon", "r", "mode", "checked", "verdict", "size", "boundary", "witness"],
    );
    report.worsen(verdict_status(&v));
    let (size, boundary, witness) = match &v {
        Verdict::Fail { witness, size, boundary, .. } => {
            let labels: Vec<&str> = witness.iter().map(|&i| g.label(i)).collect();
            (size.to_string(), boundary.to_string(), labels.join(" "))
        }
        _ => ("-".into(), "-".into(), "-".into()),
    };
    report.row(cells![graph, epsilon, r, mode_name, v.checked(), v.name(), size, boundary, witness]);
    Ok(report)
}

/// Accepts a bare coloring or a report whose detail carries a certificate.
fn coloring_document(text: &str) -> Result<String> {
    let v: Value = serde_json::from_str(text).context("--coloring is not JSON")?;
    let doc = match v.get("detail").and_then(|d| d.get("certificate")) {
        Some(c) => c.clone(),
        None => v,
    };
    Ok(doc.to_string())
}

pub fn validate(space: &SpaceDesc, lambda: Rational, d: Rational, path: &Path, cfg: &RunConfig) -> Result<Report> {
    let x = space.build(cap(cfg)).context("--space")?;
    let text = std::fs::read_to_string(path).with_context(|| format!("--coloring: cannot read {}", path.display()))?;
    let coloring = Coloring::from_json(&coloring_document(&text)?, &x).context("--coloring")?;
    let spec = ColoringSpec::new(lambda, d).context("--lambda/--D")?;
    let v = validate_coloring(&x, &coloring, spec)?;
    let mut report = Report::new("validate", &["space", "lambda", "D", "colors_used", "valid"]);
    report.worsen(Status::from_pass(v.valid));
    report.row(cells![space, lambda, d, v.colors_used, v.valid]);
    report.detail = validation_detail(&v, |i| x.label(i).to_string());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subseeds_differ_by_stream_and_repeat_by_seed() {
        assert_eq!(subseed(7, 0), subseed(7, 0));
        assert_ne!(subseed(7, 0), subseed(7, 1));
        assert_ne!(subseed(7, 0), subseed(8, 0));
    }

    #[test]
    fn graph_descriptors_parse() {
        assert_eq!("cycle:5".parse::<GraphDesc>().unwrap(), GraphDesc::Cycle(5));
        assert_eq!("complete:4".parse::<GraphDesc>().unwrap().to_string(), "complete:4");
        assert!("cycle:0".parse::<GraphDesc>().is_err());
        assert!("file:".parse::<GraphDesc>().is_err());
        assert!("torus:3".parse::<GraphDesc>().is_err());
    }

    #[test]
    fn coloring_document_unwraps_reports() {
        let bare = r#"{"palette":[0],"points":{"0":[0]}}"#;
        let wrapped = format!(r#"{{"detail":{{"certificate":{bare}}}}}"#);
        assert_eq!(coloring_document(bare).unwrap(), coloring_document(&wrapped).unwrap());
    }
}
