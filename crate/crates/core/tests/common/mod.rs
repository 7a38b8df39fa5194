#![allow(dead_code)]

pub mod lp_oracle;

use gasket::metric::Provenance;
use gasket::{CoupledGraph, Dyadic, MetricGraph};
use rand::seq::SliceRandom;
use rand::Rng;

/// Connected graph on `n` vertices: a random spanning tree plus a few extra
/// edges, weights `k/8` with `1 ≤ k ≤ 16`.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize) -> MetricGraph<Dyadic> {
    let mut edges = Vec::new();
    let weight = |rng: &mut R| Dyadic::new(rng.gen_range(1..=16), 3);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push((u, v, weight(rng)));
    }
    for _ in 0..rng.gen_range(0..=n) {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            edges.push((u, v, weight(rng)));
        }
    }
    MetricGraph::new(n, edges, Provenance::Generic).unwrap()
}

/// Two random copies with at most `max_points` vertices each, joined at a
/// random nonempty set of matched pairs by cross edges of random length.
pub fn random_coupled<R: Rng>(rng: &mut R, max_points: usize) -> CoupledGraph<Dyadic> {
    let na = rng.gen_range(1..=max_points);
    let nb = rng.gen_range(1..=max_points);
    let a = random_connected(rng, na);
    let b = random_connected(rng, nb);
    let mut pairs: Vec<(usize, usize)> = (0..na).flat_map(|x| (0..nb).map(move |y| (x, y))).collect();
    pairs.shuffle(rng);
    pairs.truncate(rng.gen_range(1..=na.min(nb)));
    let alpha = Dyadic::new(rng.gen_range(1..=8), 4);
    CoupledGraph::new(&a, &b, &pairs, alpha).unwrap()
}

/// Floyd–Warshall over exact dyadics; `None` marks unreachable pairs.
pub fn floyd_warshall(g: &MetricGraph<Dyadic>) -> Vec<Vec<Option<Dyadic>>> {
    let n = g.vertex_count();
    let mut d = vec![vec![None; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some(Dyadic::ZERO);
    }
    for &(u, v, w) in g.edges() {
        for (p, q) in [(u, v), (v, u)] {
            if d[p][q].is_none_or(|x| w < x) {
                d[p][q] = Some(w);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(dik) = d[i][k] else { continue };
            for j in 0..n {
                if let Some(dkj) = d[k][j] {
                    let via = dik + dkj;
                    if d[i][j].is_none_or(|x| via < x) {
                        d[i][j] = Some(via);
                    }
                }
            }
        }
    }
    d
}
