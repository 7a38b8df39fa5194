//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances are pinned here.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use common::lp_oracle::difference_program;
use common::{floyd_warshall, random_coupled};
use gasket::gasket::{build_gasket, curve_count};
use gasket::harmonic::{build_harmonic_gasket, HarmonicValues};
use gasket::hilbert::{covariant_reach_witness, random_mode_vector, CovariantConfig, CurveLengths};
use gasket::metric::{
    certify_vertex_agreement, geodesic_vertex_distances, gh_upper_bound_with, sample_hausdorff, GasketGraph,
};
use gasket::spectrum::{count, dimension_fit, enumerate, LengthClass};
use gasket::transport::{certify_extent, kantorovich, tunnel_dirac_distance, ExtentConfig};
use gasket::{DiscreteMeasure, Dyadic, FiniteMetricSpace, Rational, SpectrumSpec};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;
const SLOPE_SG: (f64, f64) = (1.53, 1.63);
const SLOPE_INTERVAL: (f64, f64) = (0.97, 1.03);
const REACH_TOLERANCE: f64 = 1e-10;
const HARMONIC_TOL: f64 = 1e-6;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn vertex_agreement() -> Outcome {
    let complex = build_gasket(7).map_err(err)?;
    let graphs: Vec<_> =
        (0..=7).map(|k| GasketGraph::<Dyadic>::euclidean(&complex, k)).collect::<Result<_, _>>().map_err(err)?;
    let mut pairs = 0;
    for n in 0..=4u32 {
        for m in n..=7u32 {
            let r = certify_vertex_agreement(n, m, &graphs[n as usize], &graphs[m as usize]).map_err(err)?;
            ensure(r.max_discrepancy == Dyadic::ZERO, || {
                format!("n={n}, m={m}: discrepancy {}", r.max_discrepancy)
            })?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} level pairs, all discrepancies exactly 0"))
}

fn hausdorff_premise() -> Outcome {
    let complex = build_gasket(8).map_err(err)?;
    let mut values = Vec::new();
    for n in 0..=8u32 {
        let g = GasketGraph::<Dyadic>::euclidean(&complex, n).map_err(err)?;
        let h = sample_hausdorff(&g, &g.linear(), 1).map_err(err)?;
        // Edge parameters not sampled lie within a quarter edge of a sample.
        let slack = Dyadic::pow2_neg(n + 2);
        ensure(h <= Dyadic::pow2_neg(n), || format!("n={n}: {h} > 2^-{n}"))?;
        ensure(h <= Dyadic::pow2_neg(n + 1) + slack, || format!("n={n}: {h} above 2^-(n+1) + {slack}"))?;
        values.push(h.to_string());
    }
    Ok(format!("Haus(V_n, S_n) for n=0..8: {}", values.join(", ")))
}

fn gh_chain() -> Outcome {
    let m = 9;
    let complex = build_gasket(m).map_err(err)?;
    let mut worst = 0.0f64;
    for n in 0..=6u32 {
        let b = gh_upper_bound_with(&complex, n, m, 1).map_err(err)?;
        let limit = Dyadic::pow2_neg(n).checked_add(Dyadic::pow2_neg(n)).unwrap() + Dyadic::pow2_neg(m);
        ensure(b.bound <= limit, || format!("n={n}: bound {} > {limit}", b.bound))?;
        worst = worst.max(b.bound.to_f64() / limit.to_f64());
    }
    Ok(format!("n=0..6, m=9: max bound/limit ratio {worst:.6}"))
}

fn kantorovich_isometry() -> Outcome {
    let complex = build_gasket(4).map_err(err)?;
    let mut pairs = 0usize;
    for n in 0..=4u32 {
        let g = GasketGraph::<Dyadic>::euclidean(&complex, n).map_err(err)?;
        let fw = floyd_warshall(&g.graph);
        let vertices: Vec<usize> = (0..g.graph.vertex_count()).collect();
        let space: FiniteMetricSpace<Rational> =
            FiniteMetricSpace::from_graph(&g.graph, &vertices, Vec::new()).map_err(err)?.map(|d| d.to_ratio());
        for x in 0..vertices.len() {
            for y in 0..x {
                let k = kantorovich(&space, &DiscreteMeasure::dirac(x), &DiscreteMeasure::dirac(y)).map_err(err)?;
                let d = fw[x][y].ok_or("disconnected level graph")?.to_ratio();
                ensure(k.value == d, || format!("n={n} ({x},{y}): W = {} but d = {d}", k.value))?;
                ensure(k.gap == Ratio::from_integer(0), || format!("n={n} ({x},{y}): gap {}", k.gap))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} Dirac pairs on V_0..V_4, W = d and gap 0 exactly"))
}

fn tunnel_extent() -> Outcome {
    let complex = build_gasket(8).map_err(err)?;
    let mut notes = Vec::new();
    for n in 2..=4u32 {
        let r = certify_extent(&complex, &ExtentConfig::new(n, n + 4)).map_err(err)?;
        ensure(r.premises.iter().all(|p| p.holds), || format!("n={n}: premise failed"))?;
        ensure(r.alpha.checked_mul(Dyadic::from_int(4)) == Some(r.epsilon), || format!("n={n}: alpha != eps/4"))?;
        let worst = r.dirac_table.iter().map(|row| row.distance).max().ok_or("empty Dirac table")?;
        ensure(worst <= r.dirac_bound, || format!("n={n}: Dirac distance {worst} > {}", r.dirac_bound))?;
        ensure(r.empirical_max <= r.bound, || format!("n={n}: empirical {} > bound {}", r.empirical_max, r.bound))?;
        ensure(r.mixture_violations == 0, || format!("n={n}: {} mixture violations", r.mixture_violations))?;
        notes.push(format!("n={n}: max {} <= 2a+e = {}", r.empirical_max, r.bound));
    }
    Ok(notes.join("; "))
}

fn spectral_dimension() -> Outcome {
    let start = Instant::now();
    let sg = dimension_fit(&SpectrumSpec::SierpinskiInfinite, 10.0, 1e5, 40).map_err(err)?;
    let interval = dimension_fit(&SpectrumSpec::single(1.0).map_err(err)?, 10.0, 1e5, 40).map_err(err)?;
    let secs = start.elapsed().as_secs_f64();
    ensure((SLOPE_SG.0..=SLOPE_SG.1).contains(&sg.slope), || format!("SG slope {}", sg.slope))?;
    ensure((SLOPE_INTERVAL.0..=SLOPE_INTERVAL.1).contains(&interval.slope), || {
        format!("interval slope {}", interval.slope)
    })?;
    ensure(secs < 30.0, || format!("took {secs:.1}s"))?;
    Ok(format!(
        "SG slope {:.5} (log2 3 = {:.5}), interval slope {:.5}, {secs:.2}s",
        sg.slope,
        3f64.log2(),
        interval.slope
    ))
}

fn zero_mode_and_symmetry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut total = 0u128;
    for i in 0..100 {
        let classes: Vec<LengthClass> = (0..rng.gen_range(1..=6))
            .map(|_| LengthClass { length: rng.gen_range(0.01..3.0), multiplicity: rng.gen_range(1..=5) })
            .collect();
        let spec = SpectrumSpec::finite(classes.clone()).map_err(err)?;
        let cutoff = rng.gen_range(1.0..200.0);
        let e = enumerate(&spec, cutoff).map_err(err)?;
        ensure(!e.contains_zero(), || format!("spec {i}: zero eigenvalue"))?;
        ensure(e.is_symmetric(), || format!("spec {i}: not symmetric"))?;
        // Direct count of k with |π(k+½)/λ| ≤ Λ, per class.
        let direct: u128 = classes
            .iter()
            .map(|c| {
                let kmax = (cutoff * c.length / PI).ceil() as i64 + 1;
                let per = (-kmax..=kmax).filter(|&k| (PI * (k as f64 + 0.5) / c.length).abs() <= cutoff).count();
                per as u128 * c.multiplicity
            })
            .sum();
        ensure(e.total() == direct, || format!("spec {i}: enumerated {} vs direct {direct}", e.total()))?;
        ensure(count(&spec, cutoff).map_err(err)? == direct, || format!("spec {i}: count mismatch"))?;
        total += direct;
    }
    Ok(format!("100 random specs, {total} eigenvalues, none zero, all symmetric"))
}

fn modular_tail() -> Outcome {
    let lengths = CurveLengths::Sierpinski;
    let mut notes = Vec::new();
    for eps in [0.1, 0.01] {
        let n = lengths.level_for(eps).map_err(err)?;
        ensure(lengths.longest_dropped(n) < PI * eps / 2.0, || format!("eps={eps}: level {n} too coarse"))?;
        // Tail norm recomputed from the entries, independent of the projection.
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut worst = 0.0f64;
        let b_n = curve_count(n);
        for _ in 0..1000 {
            let v = random_mode_vector(&mut rng, &lengths, n + 3, 8, 12).map_err(err)?;
            let tail: f64 = v.entries().filter(|e| e.0 >= b_n).map(|e| e.2.norm_sqr()).sum::<f64>().sqrt();
            ensure(tail < eps, || format!("eps={eps}: tail {tail}"))?;
            worst = worst.max(tail);
        }
        let r = covariant_reach_witness(&CovariantConfig::new(n, eps, 1000, SEED), &lengths).map_err(err)?;
        ensure(r.tail_violations == 0, || format!("eps={eps}: {} violations", r.tail_violations))?;
        ensure(r.max_tail < eps, || format!("eps={eps}: max tail {}", r.max_tail))?;
        notes.push(format!("eps={eps}: n={n}, max tail {:.3e}", worst.max(r.max_tail)));
    }
    Ok(notes.join("; "))
}

fn covariant_reach() -> Outcome {
    let lengths = CurveLengths::Sierpinski;
    let mut notes = Vec::new();
    for eps in [0.1, 0.01] {
        let n = lengths.level_for(eps).map_err(err)?;
        let r = covariant_reach_witness(&CovariantConfig::new(n, eps, 1000, SEED), &lengths).map_err(err)?;
        ensure(r.max_reach_deviation <= REACH_TOLERANCE, || {
            format!("eps={eps}: reach deviates by {}", r.max_reach_deviation)
        })?;
        ensure(r.max_reach < eps, || format!("eps={eps}: reach {}", r.max_reach))?;
        notes.push(format!("eps={eps}: reach {:.3e}, deviation {:.1e}", r.max_reach, r.max_reach_deviation));
    }
    Ok(notes.join("; "))
}

fn harmonic_invariants() -> Outcome {
    let complex = build_gasket(8).map_err(err)?;
    let values = HarmonicValues::compute(&complex, 8).map_err(err)?;
    let den = values.denominator();
    for (v, u) in values.numerators.iter().enumerate() {
        ensure(u.iter().sum::<i128>() == den, || format!("vertex {v}: coordinates do not sum to 1"))?;
        ensure(u.iter().all(|&x| (0..=den).contains(&x)), || format!("vertex {v}: outside [0, 1]"))?;
    }

    let gaskets: Vec<_> =
        (0..=5).map(|k| build_harmonic_gasket(k, HARMONIC_TOL)).collect::<Result<_, _>>().map_err(err)?;
    let mut worst = 0.0f64;
    for n in 0..=3usize {
        let sources: Vec<usize> = (0..gaskets[n].graph.points.len()).collect();
        let coarse = geodesic_vertex_distances(&gaskets[n].graph.graph, &sources).map_err(err)?;
        let fine = geodesic_vertex_distances(&gaskets[n + 2].graph.graph, &sources).map_err(err)?;
        for (rc, rf) in coarse.iter().zip(&fine) {
            for &v in &sources {
                worst = worst.max((rc[v] - rf[v]).abs());
            }
        }
    }
    ensure(worst <= 10.0 * HARMONIC_TOL, || format!("d_n vs d_(n+2) differ by {worst:e}"))?;

    let g6 = build_harmonic_gasket(6, HARMONIC_TOL).map_err(err)?;
    ensure(g6.converged(), || "level-6 quadrature did not converge".into())?;
    let maxima: Vec<f64> = (0..=6).map(|k| g6.max_length_at(k)).collect();
    ensure(maxima.windows(2).all(|w| w[1] < w[0]), || format!("max lengths not decreasing: {maxima:?}"))?;
    Ok(format!(
        "{} vertices exact; agreement {worst:.2e}; max lengths {}",
        values.len(),
        maxima.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(" > ")
    ))
}

fn lp_duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checks = 0;
    for i in 0..200 {
        let cg = random_coupled(&mut rng, 8);
        let edges: Vec<(usize, usize, Rational)> =
            cg.graph.edges().iter().map(|&(u, v, w)| (u, v, w.to_ratio())).collect();
        for x in 0..cg.a_count {
            for y in 0..cg.b_count {
                let d = tunnel_dirac_distance(&cg, x, y).map_err(err)?;
                let lp = difference_program(cg.graph.vertex_count(), &edges, cg.b_index(y), x);
                ensure(lp == Some(d.to_ratio()), || format!("instance {i} ({x},{y}): path {d}, LP {lp:?}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("200 instances, {checks} (x, y) pairs, LP optimum = shortest path exactly"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("vertex-metric agreement", vertex_agreement),
        ("Hausdorff premise", hausdorff_premise),
        ("GH bound chain", gh_chain),
        ("Kantorovich isometry on Dirac pairs", kantorovich_isometry),
        ("tunnel extent", tunnel_extent),
        ("spectral dimension", spectral_dimension),
        ("no zero mode and symmetry", zero_mode_and_symmetry),
        ("modular tail bound", modular_tail),
        ("covariant reach", covariant_reach),
        ("harmonic invariants", harmonic_invariants),
        ("difference-constraint duality", lp_duality),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
