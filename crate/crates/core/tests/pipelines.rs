//! Cross-module runs through the public API: serialized colorings and
//! witnesses re-check standalone, and independent routes to the same
//! quantity agree.

use dimgrowth::cluster::{
    greedy_rips_coloring, validate_coloring, Coloring, ColoringSpec, SearchMode, Verdict,
};
use dimgrowth::groups::{word_ball, Cyclic, TableGroup};
use dimgrowth::hypercube::{hex1_min_colors, verify_cube_expansion, CubeSubset};
use dimgrowth::ko::{
    coset_extend, coset_window, ko_color_grid, ko_color_line, ko_product, ko_to_single,
    sample_coset_elements, validate_ko, ColorSelector, KoColoring,
};
use dimgrowth::lattice::LatticeBox;
use dimgrowth::metric::{int, product_l1, FiniteMetricSpace};
use dimgrowth::wreath::lamplighter;

#[test]
fn grid_coloring_survives_a_json_round_trip() {
    let region = LatticeBox::new(vec![-5, 3], vec![30, 40]).unwrap();
    let g = ko_color_grid(1, &region).unwrap();
    let text = g.coloring.to_json(&g.space).to_string();
    let back = Coloring::from_json(&text, &g.space).unwrap();
    assert_eq!(back, g.coloring);
    let spec = ColoringSpec::new(int(1), g.control).unwrap();
    assert!(validate_coloring(&g.space, &back, spec).unwrap().valid);
}

#[test]
fn ko_json_revalidates_standalone() {
    let c = ko_color_line(2, 1, 0, 59).unwrap();
    let sq = ko_product(&c, &c).unwrap();
    let text = sq.to_json().to_string();
    let back = KoColoring::from_json(&text, sq.domain()).unwrap();
    assert_eq!(validate_ko(&back).unwrap(), validate_ko(&sq).unwrap());
}

#[test]
fn cube_subsets_round_trip_through_hex() {
    // A negative constant makes the inequality vacuous, so the exploratory run passes.
    let check = verify_cube_expansion(3, 1, SearchMode::Exhaustive, 1 << 20, true).unwrap();
    assert!(matches!(check.verdict, Verdict::Pass { .. }));
    assert!(verify_cube_expansion(3, 1, SearchMode::Exhaustive, 1 << 20, false).is_err());
    for n in [1u32, 5, 9, 13] {
        let a = CubeSubset::new(n, (0..1u32 << n).filter(|v| v % 3 == 0)).unwrap();
        assert_eq!(CubeSubset::from_hex(&a.to_hex().unwrap()).unwrap(), a);
    }
}

#[test]
fn lattice_box_and_explicit_product_agree() {
    let path = FiniteMetricSpace::integer_points(&(0..7).collect::<Vec<_>>());
    let explicit = product_l1(&path, &path, 1000).unwrap();
    let boxed = LatticeBox::cube(2, 7).unwrap();
    let coloring = Coloring::single((0..49).map(|i| ((i / 7 / 3 + i % 7 / 3) % 2) as u32).collect());
    for lambda in 1..=3 {
        let spec = ColoringSpec::new(int(lambda), int(100)).unwrap();
        let a = validate_coloring(&explicit, &coloring, spec).unwrap();
        let b = validate_coloring(&boxed, &coloring, spec).unwrap();
        let worst = |r: &dimgrowth::cluster::ValidationReport| {
            r.rows.iter().map(|x| (x.color, x.clusters, x.worst_diameter)).collect::<Vec<_>>()
        };
        assert_eq!(worst(&a), worst(&b), "lambda={lambda}");
    }
}

#[test]
fn greedy_coloring_of_a_lamplighter_ball_is_valid() {
    let ball = word_ball(lamplighter(), 4, 1 << 16).unwrap();
    let c = greedy_rips_coloring(&ball, int(1));
    let spec = ColoringSpec::new(int(1), int(0)).unwrap();
    assert!(validate_coloring(&ball, &c, spec).unwrap().valid);
}

#[test]
fn table_group_matches_cyclic_group() {
    let n = 6;
    let elements: Vec<String> = (0..n).map(|i| format!("g{i}")).collect();
    let mul: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    let doc = serde_json::json!({"elements": elements, "mul": mul, "gens": ["g1", "g5"]});
    let table = TableGroup::from_json(&doc.to_string()).unwrap();
    let a = word_ball(table, 3, 100).unwrap();
    let b = word_ball(Cyclic { order: n as u64 }, 3, 100).unwrap();
    assert_eq!(a.len(), b.len());
    let mut da: Vec<_> = (0..a.len()).flat_map(|i| (0..a.len()).map(move |j| (i, j))).map(|(i, j)| a.dist(i, j)).collect();
    let mut db: Vec<_> = (0..b.len()).flat_map(|i| (0..b.len()).map(move |j| (i, j))).map(|(i, j)| b.dist(i, j)).collect();
    da.sort();
    db.sort();
    assert_eq!(da, db);
}

#[test]
fn hex_board_certificate_validates() {
    let (board, exact) = hex1_min_colors(2, 4, int(1), 64).unwrap();
    let spec = ColoringSpec::new(int(2), int(1)).unwrap();
    assert!(validate_coloring(&board, &exact.certificate, spec).unwrap().valid);
}

#[test]
fn coset_extension_at_lambda_one() {
    let window = coset_window(1, 1, 3).unwrap();
    let samples = sample_coset_elements(1, 4, 60, 3, 4, 99);
    let report = coset_extend(&window, &samples).unwrap();
    assert!(report.valid());
    assert!(report.min_cross_distance.unwrap() > 1);
    assert!(report.ko.min_colors >= 2);
}

#[test]
fn single_color_reduction_matches_validation() {
    let c = ko_color_line(3, 2, -20, 100).unwrap();
    for sel in [ColorSelector::Smallest, ColorSelector::Largest] {
        let single = ko_to_single(&c, sel).unwrap();
        let spec = ColoringSpec::new(int(3), c.control()).unwrap();
        assert!(validate_coloring(c.domain(), &single, spec).unwrap().valid);
    }
}
