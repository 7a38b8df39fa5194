mod common;

use common::lp_oracle::lipschitz_program;
use common::random_connected;
use gasket::transport::{kantorovich, lipschitz_seminorm, mcshane_extend};
use gasket::{DiscreteMeasure, Dyadic, FiniteMetricSpace, Rational};
use num_rational::Ratio;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_space(rng: &mut ChaCha8Rng, n: usize) -> FiniteMetricSpace<Rational> {
    let g = random_connected(rng, n);
    let vertices: Vec<usize> = (0..n).collect();
    FiniteMetricSpace::<Dyadic>::from_graph(&g, &vertices, Vec::new()).unwrap().map(|d| d.to_ratio())
}

fn random_measure(rng: &mut ChaCha8Rng, n: usize) -> DiscreteMeasure<Rational> {
    let mut support: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    if support.is_empty() {
        support.push(rng.gen_range(0..n));
    }
    let raw: Vec<i128> = support.iter().map(|_| rng.gen_range(1..=6)).collect();
    let total: i128 = raw.iter().sum();
    DiscreteMeasure::new(support, raw.iter().map(|&w| Ratio::new(w, total)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn exact_cost_matches_lipschitz_lp(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=7);
        let space = random_space(&mut rng, n);
        let mu = random_measure(&mut rng, n);
        let nu = random_measure(&mut rng, n);
        let k = kantorovich(&space, &mu, &nu).unwrap();

        let mut objective = vec![Rational::zero(); n];
        for (&p, &w) in mu.support.iter().zip(&mu.weights) {
            objective[p] += w;
        }
        for (&p, &w) in nu.support.iter().zip(&nu.weights) {
            objective[p] -= w;
        }
        let pairs: Vec<(usize, usize, Rational)> =
            (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| (i, j, space.dist(i, j))).collect();
        prop_assert_eq!(lipschitz_program(n, &pairs, &objective), Some(k.value));
        prop_assert_eq!(k.gap, Rational::zero());
        prop_assert!(lipschitz_seminorm(&space, &k.dual).unwrap().value <= Ratio::from_integer(1));

        // The plan has the right marginals and cost.
        let mut out = vec![Rational::zero(); n];
        let mut inn = vec![Rational::zero(); n];
        let mut cost = Rational::zero();
        for &(i, j, m) in &k.plan {
            prop_assert!(m > Rational::zero());
            out[i] += m;
            inn[j] += m;
            cost += m * space.dist(i, j);
        }
        for (&p, &w) in mu.support.iter().zip(&mu.weights) {
            prop_assert_eq!(out[p], w);
        }
        for (&p, &w) in nu.support.iter().zip(&nu.weights) {
            prop_assert_eq!(inn[p], w);
        }
        prop_assert_eq!(cost, k.value);

        // Float mode agrees.
        let fspace = space.map(|r| *r.numer() as f64 / *r.denom() as f64);
        let to_f = |m: &DiscreteMeasure<Rational>| {
            DiscreteMeasure::new(m.support.clone(), m.weights.iter().map(|r| *r.numer() as f64 / *r.denom() as f64).collect())
                .unwrap()
        };
        let kf = kantorovich(&fspace, &to_f(&mu), &to_f(&nu)).unwrap();
        let exact = *k.value.numer() as f64 / *k.value.denom() as f64;
        prop_assert!((kf.value - exact).abs() < 1e-9);
    }

    #[test]
    fn mcshane_extension_keeps_constant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=7);
        let space = random_space(&mut rng, n);
        let base = rng.gen_range(0..n);
        // Restrictions of a distance function are 1-Lipschitz.
        let subset: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
        prop_assume!(!subset.is_empty());
        let values: Vec<Rational> = subset.iter().map(|&s| space.dist(base, s)).collect();
        let one = Ratio::from_integer(1);
        let f = mcshane_extend(&space, &subset, &values, one).unwrap();
        for (&s, &v) in subset.iter().zip(&values) {
            prop_assert_eq!(f[s], v);
        }
        prop_assert!(lipschitz_seminorm(&space, &f).unwrap().value <= one);
    }
}
