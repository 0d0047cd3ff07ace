use gapratio::coreset::{approx_sample, CORESET_GUARD};
use gapratio::fpi::{farthest_point_insertion, fpi_ratio_bound};
use gapratio::geometry::{delaunay, gap_report_unit_square};
use gapratio::io::{parse_graph, parse_points};
use gapratio::oracle::optimal_gap_ratio;
use gapratio::stream::run_stream;
use gapratio::subsets::DEFAULT_GUARD;
use gapratio::{gap_ratio, FiniteMetric, Graph, PointCloud, Sample};
use proptest::prelude::*;

fn brute_optimum(m: &FiniteMetric, k: usize) -> f64 {
    let n = m.n();
    let mut best = f64::INFINITY;
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != k {
            continue;
        }
        let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let mut closest = f64::INFINITY;
        for (a, &i) in s.iter().enumerate() {
            for &j in &s[a + 1..] {
                closest = closest.min(m.dist(i, j));
            }
        }
        let cover = (0..n)
            .map(|v| {
                s.iter()
                    .map(|&t| m.dist(v, t))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        best = best.min(2.0 * cover / closest);
    }
    best
}

#[test]
fn parsed_graph_through_oracle_and_fpi() {
    let g = parse_graph("# petersen outer and inner\n10 15\n0 1\n1 2\n2 3\n3 4\n4 0\n0 5\n1 6\n2 7\n3 8\n4 9\n5 7\n7 9\n9 6\n6 8\n8 5\n", "petersen").unwrap();
    let m = FiniteMetric::from_graph(&g).unwrap();
    for k in 2..=4 {
        let opt = optimal_gap_ratio(&m, k, DEFAULT_GUARD).unwrap();
        assert_eq!(opt.gap_ratio, brute_optimum(&m, k));
        assert!(opt.report.exact);
        let (s, _) = farthest_point_insertion(&m, k).unwrap();
        let fpi = gap_ratio(&m, &s).unwrap().gap_ratio;
        assert!(fpi <= fpi_ratio_bound(opt.gap_ratio).unwrap() * opt.gap_ratio + 1e-12);
    }
}

#[test]
fn weighted_graph_without_exact_path() {
    let g = Graph::weighted(4, &[(0, 1, 0.3), (1, 2, 1.1), (2, 3, 0.7), (3, 0, 2.0)]).unwrap();
    let m = FiniteMetric::from_graph(&g).unwrap();
    assert!(!m.has_exact());
    let opt = optimal_gap_ratio(&m, 2, DEFAULT_GUARD).unwrap();
    assert!(!opt.report.exact);
    assert!((opt.gap_ratio - brute_optimum(&m, 2)).abs() < 1e-12);
}

#[test]
fn square_lattice_is_well_spread() {
    let mut text = String::new();
    for i in 0..5 {
        for j in 0..5 {
            text.push_str(&format!(
                "{} {}\n",
                0.1 + 0.2 * i as f64,
                0.1 + 0.2 * j as f64
            ));
        }
    }
    let cloud = parse_points(&text, "lattice").unwrap();
    let rep = gap_report_unit_square(&cloud).unwrap();
    assert!((rep.r - 0.1).abs() < 1e-12);
    assert!((rep.big_r - 0.1 * 2f64.sqrt()).abs() < 1e-12);
    let t = delaunay(&cloud).unwrap();
    assert_eq!(t.triangles.len(), 32);
}

#[test]
fn coreset_and_stream_agree_with_oracle_on_a_small_cloud() {
    let rows: Vec<Vec<f64>> = (0..18)
        .map(|i| {
            vec![
                (i as f64 * 0.618_034).fract(),
                (i as f64 * 0.414_214).fract(),
            ]
        })
        .collect();
    let cloud = PointCloud::new(2, rows.clone()).unwrap();
    let m = FiniteMetric::from_cloud(&cloud).unwrap();
    let opt = brute_optimum(&m, 3);
    for eps in [0.05, 0.1] {
        let a = approx_sample(&cloud, 3, eps, None, CORESET_GUARD).unwrap();
        assert!(a.report.gap_ratio <= (1.0 + eps) * opt + 1e-9);
        let s = run_stream(&rows, 3, eps, CORESET_GUARD).unwrap();
        let over_m = gap_ratio(&m, &s.sample).unwrap().gap_ratio;
        assert!(over_m <= (1.0 + eps) * opt + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_matches_brute_force(
        rows in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 2), 3..10),
        k in 2usize..4,
    ) {
        let cloud = PointCloud::new(2, rows).unwrap();
        prop_assume!(cloud.len() > k);
        let m = FiniteMetric::from_cloud(&cloud).unwrap();
        let opt = optimal_gap_ratio(&m, k, DEFAULT_GUARD).unwrap();
        prop_assert_eq!(opt.gap_ratio, brute_optimum(&m, k));
        let best = Sample::new(opt.best_sample.indices().to_vec(), m.n()).unwrap();
        prop_assert_eq!(gap_ratio(&m, &best).unwrap().gap_ratio, opt.gap_ratio);
    }

    #[test]
    fn fpi_never_worse_than_three_times_optimal(
        mask in 0u64..1 << 15,
        k in 2usize..4,
    ) {
        let g = Graph::from_edge_mask(6, mask).unwrap();
        prop_assume!(g.is_connected());
        let m = FiniteMetric::from_graph(&g).unwrap();
        let opt = brute_optimum(&m, k);
        let (_, trace) = farthest_point_insertion(&m, k).unwrap();
        prop_assert!(trace.final_report.gap_ratio <= 3.0 * opt + 1e-12);
    }
}
