mod common;

use gasket::gasket::{build_gasket, curve_count, vertex_count};
use gasket::metric::hausdorff;
use gasket::spectrum::{count, zeta_partial};
use gasket::{Dyadic, EdgePoint, FiniteMetricSpace, GasketGraph, PrefractalComplex, SpectrumSpec};
use proptest::prelude::*;

#[test]
fn complex_json_round_trips_at_every_small_level() {
    for n in 0..=5 {
        let c = build_gasket(n).unwrap();
        assert_eq!(c.vertices().len(), vertex_count(n));
        assert_eq!(c.curves().len(), curve_count(n));
        let text = serde_json::to_string(&c.to_json()).unwrap();
        let back = PrefractalComplex::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text);
    }
}

#[test]
fn restricting_level_metrics_to_coarse_vertices() {
    // The d_4 matrix on V_4 restricted to V_2 equals the d_2 matrix, and V_2 is
    // within 1/8 of every point of V_4.
    let c = build_gasket(4).unwrap();
    let g2 = GasketGraph::<Dyadic>::euclidean(&c, 2).unwrap();
    let g4 = GasketGraph::<Dyadic>::euclidean(&c, 4).unwrap();
    let v2: Vec<usize> = (0..g2.graph.vertex_count()).collect();
    let v4: Vec<usize> = (0..g4.graph.vertex_count()).collect();
    let s2 = FiniteMetricSpace::from_graph(&g2.graph, &v2, Vec::new()).unwrap();
    let s4 = FiniteMetricSpace::from_graph(&g4.graph, &v4, Vec::new()).unwrap();
    for &i in &v2 {
        for &j in &v2 {
            assert_eq!(s2.dist(i, j), s4.dist(i, j));
        }
    }
    assert_eq!(hausdorff(&s4, &v2, &v4).unwrap(), Dyadic::new(1, 3));
}

#[test]
fn zeta_closed_forms() {
    // A single interval of length λ has Σ|μ|^{-2} = 2(λ/π)² · π²/2 = λ².
    for l in [0.25, 1.0, 2.5] {
        let z = zeta_partial(&SpectrumSpec::single(l).unwrap(), 2.0, None).unwrap();
        assert!((z - l * l).abs() < 1e-10);
    }
    // SG_n: Σ_m 3^{m+1} 4^{-m}.
    let z = zeta_partial(&SpectrumSpec::sierpinski(4), 2.0, None).unwrap();
    let expected: f64 = (0..=4).map(|m| 3f64.powi(m + 1) * 4f64.powi(-m)).sum();
    assert!((z - expected).abs() < 1e-9);
}

fn edge_point(curves: usize) -> impl Strategy<Value = EdgePoint> {
    (0..curves, 0i64..=8).prop_map(|(c, k)| EdgePoint::new(c, Dyadic::new(k, 3)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn point_distance_matches_subdivided_graph(x in edge_point(curve_count(2)), y in edge_point(curve_count(2))) {
        let c = build_gasket(2).unwrap();
        let g = GasketGraph::<Dyadic>::euclidean(&c, 2).unwrap();
        let sub = g.subdivide(&g.linear(), 4).unwrap();
        let (i, j) = (sub.index_of(&g, x).unwrap(), sub.index_of(&g, y).unwrap());
        let via_graph = sub.graph.distances_from(&[i]).unwrap()[j];
        let d = g.point_distance(x, y).unwrap();
        prop_assert_eq!(d, via_graph);
        prop_assert_eq!(d, g.point_distance(y, x).unwrap());
    }

    #[test]
    fn counting_is_even_and_monotone(a in 0.5f64..500.0, b in 0.5f64..500.0, level in 0u32..6) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let spec = SpectrumSpec::sierpinski(level);
        let (nl, nh) = (count(&spec, lo).unwrap(), count(&spec, hi).unwrap());
        prop_assert!(nl <= nh);
        prop_assert_eq!(nl % 2, 0);
        // SG_n counts never exceed the full gasket's.
        prop_assert!(nh <= count(&SpectrumSpec::SierpinskiInfinite, hi).unwrap());
    }
}
