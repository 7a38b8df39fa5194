//! Monge–Kantorovich distances, Lipschitz seminorms, and the coupled graph
//! that realizes the tunnel seminorm `M_{n,α}`.
//!
//! Transport is solved as a minimum-cost flow on the bipartite support with
//! successive shortest paths; the final potentials give a 1-Lipschitz dual
//! function whose value equals the transport cost.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::gasket::PrefractalComplex;
use crate::metric::{
    hausdorff_to_subset, sample_hausdorff, EdgePoint, FiniteMetricSpace, GasketGraph, MetricError, MetricGraph,
    Provenance,
};
use crate::scalar::{Field, Rational, Weight};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransportError {
    #[error("negative weight {weight} at support point {point}")]
    NegativeWeight { point: usize, weight: f64 },
    #[error("measure weights sum to {0}, not 1")]
    NotProbability(f64),
    #[error("measures have different total mass ({0} vs {1})")]
    MassMismatch(f64, f64),
    #[error("support point {point} outside the space of {size} points")]
    SupportIndex { point: usize, size: usize },
    #[error("support point {0} listed twice")]
    DuplicateSupport(usize),
    #[error("support and weights have different lengths")]
    Shape,
    #[error("function has {got} values, the space has {expected} points")]
    FunctionLength { got: usize, expected: usize },
    #[error("values are not {bound}-Lipschitz: pair ({i}, {j}) has ratio {ratio}")]
    NotLipschitz { i: usize, j: usize, ratio: f64, bound: f64 },
    #[error("alpha must be positive")]
    Alpha,
    #[error("Hausdorff premise failed: {name} = {value} exceeds {limit}")]
    Premise { name: String, value: Dyadic, limit: Dyadic },
    #[error("transport did not converge")]
    Infeasible,
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Probability measure on the points of a finite metric space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure<F> {
    pub support: Vec<usize>,
    pub weights: Vec<F>,
}

impl<F: Field> DiscreteMeasure<F> {
    pub fn new(support: Vec<usize>, weights: Vec<F>) -> Result<Self, TransportError> {
        if support.len() != weights.len() {
            return Err(TransportError::Shape);
        }
        let mut seen = support.clone();
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(TransportError::DuplicateSupport(w[0]));
        }
        let mut total = F::zero();
        for (&p, &w) in support.iter().zip(&weights) {
            if w.total_cmp(&F::zero()) == Ordering::Less {
                return Err(TransportError::NegativeWeight { point: p, weight: w.to_f64() });
            }
            total = total + w;
        }
        let off = (total - F::one()).abs();
        let ok = if F::EXACT { off.total_cmp(&F::zero()) == Ordering::Equal } else { off.to_f64() <= 1e-12 };
        if !ok {
            return Err(TransportError::NotProbability(total.to_f64()));
        }
        Ok(DiscreteMeasure { support, weights })
    }

    pub fn dirac(point: usize) -> Self {
        DiscreteMeasure { support: vec![point], weights: vec![F::one()] }
    }

    fn check_space(&self, size: usize) -> Result<(), TransportError> {
        match self.support.iter().find(|&&p| p >= size) {
            Some(&point) => Err(TransportError::SupportIndex { point, size }),
            None => Ok(()),
        }
    }

    fn mass(&self) -> F {
        self.weights.iter().fold(F::zero(), |a, &b| a + b)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KantorovichResult<F> {
    pub value: F,
    /// `(i, j, mass)` with `i, j` point indices of the space.
    pub plan: Vec<(usize, usize, F)>,
    /// 1-Lipschitz function on the whole space certifying optimality.
    pub dual: Vec<F>,
    /// `Σ f dμ − Σ f dν` for the dual function.
    pub dual_value: F,
    pub gap: F,
}

/// Exact minimum transport cost between `mu` and `nu` over `space`.
pub fn kantorovich<F: Field>(
    space: &FiniteMetricSpace<F>,
    mu: &DiscreteMeasure<F>,
    nu: &DiscreteMeasure<F>,
) -> Result<KantorovichResult<F>, TransportError> {
    let size = space.len();
    mu.check_space(size)?;
    nu.check_space(size)?;
    let (mm, nm) = (mu.mass(), nu.mass());
    let mass_off = (mm - nm).abs();
    if if F::EXACT { mass_off.is_positive() } else { mass_off.to_f64() > 1e-12 } {
        return Err(TransportError::MassMismatch(mm.to_f64(), nm.to_f64()));
    }
    let p = mu.support.len();
    let q = nu.support.len();
    let cost = |i: usize, j: usize| space.dist(mu.support[i], nu.support[j]);
    let mut flow = vec![vec![F::zero(); q]; p];
    let mut supply = mu.weights.clone();
    let mut demand = nu.weights.clone();
    // Nodes: 0..p sources, p..p+q sinks.
    let nodes = p + q;
    loop {
        if !demand.iter().any(|d| d.significant()) || !supply.iter().any(|s| s.significant()) {
            break;
        }
        let mut dist: Vec<Option<F>> = vec![None; nodes];
        let mut pred: Vec<Option<usize>> = vec![None; nodes];
        for i in 0..p {
            if supply[i].significant() {
                dist[i] = Some(F::zero());
            }
        }
        // Bellman–Ford on the residual graph: forward arcs always, backward arcs where flow is positive.
        for _ in 0..nodes {
            let mut changed = false;
            for i in 0..p {
                if let Some(di) = dist[i] {
                    for j in 0..q {
                        let nd = di + cost(i, j);
                        if better(nd, dist[p + j]) {
                            dist[p + j] = Some(nd);
                            pred[p + j] = Some(i);
                            changed = true;
                        }
                    }
                }
            }
            for j in 0..q {
                if let Some(dj) = dist[p + j] {
                    for i in 0..p {
                        if flow[i][j].significant() {
                            let nd = dj - cost(i, j);
                            if better(nd, dist[i]) {
                                dist[i] = Some(nd);
                                pred[i] = Some(p + j);
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let target = (0..q)
            .filter(|&j| demand[j].significant() && dist[p + j].is_some())
            .min_by(|&a, &b| dist[p + a].unwrap().total_cmp(&dist[p + b].unwrap()).then(a.cmp(&b)))
            .ok_or(TransportError::Infeasible)?;
        // Walk back to a source with supply, collecting the path.
        let mut path = vec![p + target];
        let mut v = p + target;
        while let Some(u) = pred[v] {
            path.push(u);
            v = u;
            if path.len() > 2 * nodes {
                return Err(TransportError::Infeasible);
            }
        }
        path.reverse();
        let start = path[0];
        let mut push = supply[start].min_of(demand[target]);
        for w in path.windows(2) {
            if w[0] >= p {
                // Backward arc sink → source cancels flow.
                push = push.min_of(flow[w[1]][w[0] - p]);
            }
        }
        for w in path.windows(2) {
            if w[0] < p {
                flow[w[0]][w[1] - p] = flow[w[0]][w[1] - p] + push;
            } else {
                flow[w[1]][w[0] - p] = flow[w[1]][w[0] - p] - push;
            }
        }
        supply[start] = supply[start] - push;
        demand[target] = demand[target] - push;
    }
    let mut value = F::zero();
    let mut plan = Vec::new();
    for i in 0..p {
        for j in 0..q {
            if flow[i][j].significant() {
                value = value + flow[i][j] * cost(i, j);
                plan.push((mu.support[i], nu.support[j], flow[i][j]));
            }
        }
    }
    // Potentials: shortest distances from a virtual root joined to every node at cost 0.
    let mut pot = vec![F::zero(); nodes];
    for _ in 0..=nodes {
        let mut changed = false;
        for i in 0..p {
            for j in 0..q {
                let nd = pot[i] + cost(i, j);
                if better(nd, Some(pot[p + j])) {
                    pot[p + j] = nd;
                    changed = true;
                }
                if flow[i][j].significant() {
                    let nd = pot[p + j] - cost(i, j);
                    if better(nd, Some(pot[i])) {
                        pot[i] = nd;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    // c-transform of the sink potentials: f(x) = min_j d(x, y_j) − π(y_j).
    let dual: Vec<F> = (0..size)
        .map(|x| (0..q).map(|j| space.dist(x, nu.support[j]) - pot[p + j]).reduce(F::min_of).unwrap_or(F::zero()))
        .collect();
    let mut dual_value = F::zero();
    for (&x, &w) in mu.support.iter().zip(&mu.weights) {
        dual_value = dual_value + w * dual[x];
    }
    for (&y, &w) in nu.support.iter().zip(&nu.weights) {
        dual_value = dual_value - w * dual[y];
    }
    let gap = (value - dual_value).abs();
    Ok(KantorovichResult { value, plan, dual, dual_value, gap })
}

/// Strict improvement; floats must improve by more than the noise floor.
fn better<F: Field>(candidate: F, current: Option<F>) -> bool {
    match current {
        None => true,
        Some(c) if F::EXACT => candidate.total_cmp(&c) == Ordering::Less,
        Some(c) => (c - candidate).significant(),
    }
}

/// `max |f(x) − f(y)| / d(x, y)` with the maximizing pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzWitness<F> {
    pub value: F,
    pub pair: Option<(usize, usize)>,
}

pub fn lipschitz_seminorm<F: Field>(
    space: &FiniteMetricSpace<F>,
    f: &[F],
) -> Result<LipschitzWitness<F>, TransportError> {
    if f.len() != space.len() {
        return Err(TransportError::FunctionLength { got: f.len(), expected: space.len() });
    }
    let mut best = LipschitzWitness { value: F::zero(), pair: None };
    for i in 0..f.len() {
        for j in (i + 1)..f.len() {
            let r = (f[i] - f[j]).abs() / space.dist(i, j);
            if r.total_cmp(&best.value) == Ordering::Greater {
                best = LipschitzWitness { value: r, pair: Some((i, j)) };
            }
        }
    }
    Ok(best)
}

/// `g(x) = min_s f(s) + L·d(s, x)`, after checking that `f` is `L`-Lipschitz
/// on the subset.
pub fn mcshane_extend<F: Field>(
    space: &FiniteMetricSpace<F>,
    subset: &[usize],
    values: &[F],
    bound: F,
) -> Result<Vec<F>, TransportError> {
    if subset.len() != values.len() {
        return Err(TransportError::Shape);
    }
    for &s in subset {
        if s >= space.len() {
            return Err(TransportError::SupportIndex { point: s, size: space.len() });
        }
    }
    for a in 0..subset.len() {
        for b in (a + 1)..subset.len() {
            let d = space.dist(subset[a], subset[b]);
            if (values[a] - values[b]).abs().total_cmp(&(bound * d)) == Ordering::Greater {
                return Err(TransportError::NotLipschitz {
                    i: subset[a],
                    j: subset[b],
                    ratio: ((values[a] - values[b]).abs() / d).to_f64(),
                    bound: bound.to_f64(),
                });
            }
        }
    }
    Ok((0..space.len())
        .map(|x| {
            subset
                .iter()
                .zip(values)
                .map(|(&s, &v)| v + bound * space.dist(s, x))
                .reduce(F::min_of)
                .unwrap_or(F::zero())
        })
        .collect())
}

/// Two metric graphs joined by cross edges of weight `α` at matched vertices.
/// Copy A occupies indices `0..a_count`, copy B follows.
#[derive(Clone, Debug)]
pub struct CoupledGraph<W> {
    pub graph: MetricGraph<W>,
    pub a_count: usize,
    pub b_count: usize,
    pub alpha: W,
    pub matches: Vec<(usize, usize)>,
}

impl<W: Weight> CoupledGraph<W> {
    pub fn new(
        a: &MetricGraph<W>,
        b: &MetricGraph<W>,
        matches: &[(usize, usize)],
        alpha: W,
    ) -> Result<Self, TransportError> {
        if !alpha.is_positive() {
            return Err(TransportError::Alpha);
        }
        let na = a.vertex_count();
        let mut edges: Vec<(usize, usize, W)> = a.edges().to_vec();
        edges.extend(b.edges().iter().map(|&(u, v, w)| (na + u, na + v, w)));
        edges.extend(matches.iter().map(|&(x, y)| (x, na + y, alpha)));
        let graph = MetricGraph::new(na + b.vertex_count(), edges, Provenance::Generic)?;
        graph.check_connected()?;
        Ok(CoupledGraph { graph, a_count: na, b_count: b.vertex_count(), alpha, matches: matches.to_vec() })
    }

    pub fn b_index(&self, y: usize) -> usize {
        self.a_count + y
    }

    /// Distances from a copy-A vertex to every vertex of both copies.
    pub fn distances_from_a(&self, x: usize) -> Result<Vec<W>, TransportError> {
        Ok(self.graph.distances_from(&[x])?)
    }
}

/// `sup{f(x) − g(y) : M_{n,α}(f, g) ≤ 1}`, which by difference-constraint
/// duality is the coupled-graph shortest path from `x` (copy A) to `y` (copy B).
pub fn tunnel_dirac_distance<W: Weight>(cg: &CoupledGraph<W>, x: usize, y: usize) -> Result<W, TransportError> {
    if x >= cg.a_count {
        return Err(TransportError::SupportIndex { point: x, size: cg.a_count });
    }
    if y >= cg.b_count {
        return Err(TransportError::SupportIndex { point: y, size: cg.b_count });
    }
    Ok(cg.distances_from_a(x)?[cg.b_index(y)])
}

/// Copy A = `(V_m, d_m)`, copy B = `SG_n` sampled at `2^depth + 1` points per
/// finest curve, joined at `V_n`.
#[derive(Clone, Debug)]
pub struct CoupledGasket {
    pub n: u32,
    pub m: u32,
    pub sample_depth: u32,
    pub coupled: CoupledGraph<Dyadic>,
    pub level_n: GasketGraph<Dyadic>,
    pub level_m: GasketGraph<Dyadic>,
}

pub fn coupled_gasket(
    complex: &PrefractalComplex,
    n: u32,
    m: u32,
    sample_depth: u32,
    alpha: Dyadic,
) -> Result<CoupledGasket, TransportError> {
    if m < n {
        return Err(MetricError::IndexMismatch(format!("sample level {m} below level {n}")).into());
    }
    let level_n = GasketGraph::euclidean(complex, n)?;
    let level_m = GasketGraph::euclidean(complex, m)?;
    let sub = level_n.subdivide(&level_n.linear(), sample_depth)?;
    let matches: Vec<(usize, usize)> = (0..level_n.points.len()).map(|v| (v, v)).collect();
    let coupled = CoupledGraph::new(&level_m.graph, &sub.graph, &matches, alpha)?;
    Ok(CoupledGasket { n, m, sample_depth, coupled, level_n, level_m })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PremiseCheck {
    pub name: String,
    pub value: Dyadic,
    pub limit: Dyadic,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiracRow {
    /// `"A"` for the `V_m` copy, `"B"` for the sampled `SG_n` copy.
    pub copy: String,
    pub point: usize,
    pub distance: Dyadic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtentReport {
    pub n: u32,
    pub m: u32,
    pub sample_depth: u32,
    pub alpha: Dyadic,
    /// `Haus_{d_n}(V_n, S_n)`.
    pub sample_term: Dyadic,
    /// `Haus_{d_m}(V_n, V_m) + 2^{-m}`.
    pub vertex_term: Dyadic,
    pub epsilon: Dyadic,
    /// `α + ε`, the per-Dirac target.
    pub dirac_bound: Dyadic,
    /// `2α + ε`.
    pub bound: Dyadic,
    pub max_a_to_b: Dyadic,
    pub max_b_to_a: Dyadic,
    pub empirical_max: Dyadic,
    pub premises: Vec<PremiseCheck>,
    pub mixture_checks: usize,
    pub mixture_max: Option<Rational>,
    pub mixture_violations: usize,
    pub dirac_table: Vec<DiracRow>,
}

#[derive(Clone, Debug)]
pub struct ExtentConfig {
    pub n: u32,
    pub m: u32,
    /// `None` picks `ε/4`.
    pub alpha: Option<Dyadic>,
    pub sample_depth: u32,
    /// Optional target both Hausdorff terms must meet.
    pub epsilon_target: Option<Dyadic>,
    pub mixtures: usize,
    pub seed: u64,
}

impl ExtentConfig {
    pub fn new(n: u32, m: u32) -> Self {
        ExtentConfig { n, m, alpha: None, sample_depth: 1, epsilon_target: None, mixtures: 16, seed: 0 }
    }
}

/// Bounds the extent of the tunnel joining `(V_m, d_m)` and sampled `SG_n`:
/// every Dirac state of one copy has a Dirac state of the other within
/// `α + ε`, so the extent is at most `2α + ε`. Random four-point mixtures are
/// transported to their matched mixtures as a spot check of the convexity step.
pub fn certify_extent(complex: &PrefractalComplex, config: &ExtentConfig) -> Result<ExtentReport, TransportError> {
    let (n, m) = (config.n, config.m);
    if m < n {
        return Err(MetricError::IndexMismatch(format!("sample level {m} below level {n}")).into());
    }
    let level_n = GasketGraph::euclidean(complex, n)?;
    let level_m = GasketGraph::euclidean(complex, m)?;
    let sample_term = sample_hausdorff(&level_n, &level_n.linear(), config.sample_depth)?;
    let v_n: Vec<usize> = (0..level_n.points.len()).collect();
    let haus_m = hausdorff_to_subset(&level_m.graph, &v_n)?;
    let vertex_term = haus_m + Dyadic::pow2_neg(m);
    let epsilon = sample_term.max(vertex_term);

    let premise_limit = Dyadic::pow2_neg(n);
    let mut premises = vec![
        PremiseCheck {
            name: format!("Haus_d{n}(V_{n}, S_{n})"),
            value: sample_term,
            limit: premise_limit,
            holds: sample_term <= premise_limit,
        },
        PremiseCheck {
            name: format!("Haus_d{m}(V_{n}, V_{m})"),
            value: haus_m,
            limit: premise_limit,
            holds: haus_m <= premise_limit,
        },
    ];
    if let Some(t) = config.epsilon_target {
        premises.push(PremiseCheck { name: "epsilon".into(), value: epsilon, limit: t, holds: epsilon <= t });
    }
    if let Some(p) = premises.iter().find(|p| !p.holds) {
        return Err(TransportError::Premise { name: p.name.clone(), value: p.value, limit: p.limit });
    }

    let alpha = config.alpha.unwrap_or(Dyadic::new(epsilon.numerator(), epsilon.exponent() + 2));
    if !alpha.is_positive() {
        return Err(TransportError::Alpha);
    }
    let cg = coupled_gasket(complex, n, m, config.sample_depth, alpha)?.coupled;
    let a_nodes: Vec<usize> = (0..cg.a_count).collect();
    let b_nodes: Vec<usize> = (0..cg.b_count).map(|y| cg.b_index(y)).collect();
    let from_b = cg.graph.distances_from(&b_nodes)?;
    let from_a = cg.graph.distances_from(&a_nodes)?;
    let mut dirac_table = Vec::with_capacity(cg.a_count + cg.b_count);
    dirac_table.extend((0..cg.a_count).map(|x| DiracRow { copy: "A".into(), point: x, distance: from_b[x] }));
    dirac_table.extend((0..cg.b_count).map(|y| DiracRow {
        copy: "B".into(),
        point: y,
        distance: from_a[cg.b_index(y)],
    }));
    let max_a_to_b = from_b[..cg.a_count].iter().copied().max().unwrap_or(Dyadic::ZERO);
    let max_b_to_a = b_nodes.iter().map(|&i| from_a[i]).max().unwrap_or(Dyadic::ZERO);
    let dirac_bound = alpha + epsilon;

    let (mixture_max, mixture_violations) = mixture_spot_checks(&cg, config, dirac_bound)?;
    Ok(ExtentReport {
        n,
        m,
        sample_depth: config.sample_depth,
        alpha,
        sample_term,
        vertex_term,
        epsilon,
        dirac_bound,
        bound: alpha + alpha + epsilon,
        max_a_to_b,
        max_b_to_a,
        empirical_max: max_a_to_b.max(max_b_to_a),
        premises,
        mixture_checks: config.mixtures,
        mixture_max,
        mixture_violations,
        dirac_table,
    })
}

/// Nearest vertex of the opposite copy (smallest index on ties) by a
/// multi-source search seeded from that copy.
fn nearest_opposite(cg: &CoupledGraph<Dyadic>, from: usize) -> Result<usize, TransportError> {
    let d = cg.graph.distances_from(&[from])?;
    let range = if from < cg.a_count { cg.a_count..cg.a_count + cg.b_count } else { 0..cg.a_count };
    Ok(range.min_by(|&x, &y| d[x].cmp(&d[y]).then(x.cmp(&y))).expect("nonempty copy"))
}

fn mixture_spot_checks(
    cg: &CoupledGraph<Dyadic>,
    config: &ExtentConfig,
    limit: Dyadic,
) -> Result<(Option<Rational>, usize), TransportError> {
    let results: Vec<Rational> = (0..config.mixtures)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(t as u64);
            let from_a = t % 2 == 0;
            let pool: Vec<usize> =
                if from_a { (0..cg.a_count).collect() } else { (0..cg.b_count).map(|y| cg.b_index(y)).collect() };
            let picks: Vec<usize> = pool.choose_multiple(&mut rng, 4.min(pool.len())).copied().collect();
            let raw: Vec<i128> = picks.iter().map(|_| rng.gen_range(1..=16)).collect();
            let total: i128 = raw.iter().sum();
            let targets: Vec<usize> = picks.iter().map(|&p| nearest_opposite(cg, p)).collect::<Result<_, _>>()?;
            // Points of both measures, deduplicated, as a finite metric space.
            let mut pts: Vec<usize> = picks.iter().chain(&targets).copied().collect();
            pts.sort_unstable();
            pts.dedup();
            let space = FiniteMetricSpace::from_graph(&cg.graph, &pts, vec![])?.map(|d| d.to_ratio());
            let pos = |v: usize| pts.iter().position(|&p| p == v).unwrap();
            let mu = DiscreteMeasure::new(
                picks.iter().map(|&p| pos(p)).collect(),
                raw.iter().map(|&r| Rational::new(r, total)).collect(),
            )?;
            let mut nu_w: Vec<(usize, Rational)> = Vec::new();
            for (&tgt, &r) in targets.iter().zip(&raw) {
                match nu_w.iter_mut().find(|(p, _)| *p == pos(tgt)) {
                    Some(e) => e.1 += Rational::new(r, total),
                    None => nu_w.push((pos(tgt), Rational::new(r, total))),
                }
            }
            let nu = DiscreteMeasure::new(nu_w.iter().map(|e| e.0).collect(), nu_w.iter().map(|e| e.1).collect())?;
            Ok(kantorovich(&space, &mu, &nu)?.value)
        })
        .collect::<Result<_, TransportError>>()?;
    let limit = limit.to_ratio();
    let violations = results.iter().filter(|v| **v > limit).count();
    Ok((results.into_iter().max(), violations))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiracIdentityRow {
    pub x: EdgePoint,
    pub y: EdgePoint,
    pub geodesic: Dyadic,
    pub dual: Dyadic,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiracIdentityReport {
    pub n: u32,
    pub sample_depth: u32,
    pub rows: Vec<DiracIdentityRow>,
    pub all_equal: bool,
}

/// For each pair, compares the endpoint-routing geodesic distance with the
/// Lipschitz dual `sup{f(x) − f(y) : L(f) ≤ 1}` on the sampled space. The dual
/// is attained by `f = d(x, ·)`, which is checked to be 1-Lipschitz edge by
/// edge (equivalent to the pair condition for a path metric).
pub fn verify_lipschitz_dirac_identity(
    complex: &PrefractalComplex,
    n: u32,
    pairs: &[(EdgePoint, EdgePoint)],
    sample_depth: u32,
) -> Result<DiracIdentityReport, TransportError> {
    let g = GasketGraph::euclidean(complex, n)?;
    let mut depth = sample_depth;
    for &(x, y) in pairs {
        depth = depth.max(g.canonical(x)?.t.exponent()).max(g.canonical(y)?.t.exponent());
    }
    let sub = g.subdivide(&g.linear(), depth)?;
    let rows = pairs
        .par_iter()
        .map(|&(x, y)| {
            let geodesic = g.point_distance(x, y)?;
            let (ix, iy) = (sub.index_of(&g, x)?, sub.index_of(&g, y)?);
            let f = sub.graph.distances_from(&[ix])?;
            let lipschitz = sub.graph.edges().iter().all(|&(u, v, w)| f[u].abs_diff(f[v]) <= w);
            if !lipschitz {
                return Err(TransportError::NotLipschitz { i: ix, j: iy, ratio: f64::NAN, bound: 1.0 });
            }
            let dual = f[iy] - f[ix];
            Ok(DiracIdentityRow { x, y, geodesic, dual, equal: geodesic == dual })
        })
        .collect::<Result<Vec<_>, TransportError>>()?;
    let all_equal = rows.iter().all(|r| r.equal);
    Ok(DiracIdentityReport { n, sample_depth: depth, rows, all_equal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gasket::build_gasket;
    use num_rational::Ratio;

    fn r(a: i128, b: i128) -> Rational {
        Ratio::new(a, b)
    }

    fn line3() -> FiniteMetricSpace<Rational> {
        let d = |a: i128| r(a, 1);
        FiniteMetricSpace::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec![vec![d(0), d(1), d(2)], vec![d(1), d(0), d(1)], vec![d(2), d(1), d(0)]],
        )
        .unwrap()
    }

    #[test]
    fn three_point_example() {
        let s = line3();
        let mu = DiscreteMeasure::new(vec![0, 2], vec![r(1, 2), r(1, 2)]).unwrap();
        let nu = DiscreteMeasure::dirac(1);
        let k = kantorovich(&s, &mu, &nu).unwrap();
        assert_eq!(k.value, r(1, 1));
        assert_eq!(k.gap, r(0, 1));
        assert!(lipschitz_seminorm(&s, &k.dual).unwrap().value <= r(1, 1));
    }

    #[test]
    fn identity_plan_and_diracs() {
        let s = line3();
        let mu = DiscreteMeasure::new(vec![0, 1, 2], vec![r(1, 3), r(1, 6), r(1, 2)]).unwrap();
        let k = kantorovich(&s, &mu, &mu).unwrap();
        assert_eq!(k.value, r(0, 1));
        assert!(k.plan.iter().all(|&(i, j, _)| i == j));
        for x in 0..3 {
            for y in 0..3 {
                let k = kantorovich(&s, &DiscreteMeasure::dirac(x), &DiscreteMeasure::dirac(y)).unwrap();
                assert_eq!(k.value, s.dist(x, y));
            }
        }
    }

    #[test]
    fn rejects_bad_measures() {
        assert!(matches!(DiscreteMeasure::new(vec![0, 1], vec![r(1, 2), r(1, 3)]), Err(TransportError::NotProbability(_))));
        assert!(matches!(DiscreteMeasure::new(vec![0, 1], vec![r(3, 2), r(-1, 2)]), Err(TransportError::NegativeWeight { .. })));
        assert!(DiscreteMeasure::new(vec![0, 0], vec![r(1, 2), r(1, 2)]).is_err());
        let bad = DiscreteMeasure { support: vec![0], weights: vec![r(1, 2)] };
        assert!(matches!(kantorovich(&line3(), &bad, &DiscreteMeasure::dirac(1)), Err(TransportError::MassMismatch(..))));
    }

    #[test]
    fn float_mode_matches_rational() {
        let s = line3();
        let sf = s.map(|x| x.to_f64());
        let mu = DiscreteMeasure::new(vec![0, 2], vec![0.25, 0.75]).unwrap();
        let nu = DiscreteMeasure::new(vec![1, 2], vec![0.5, 0.5]).unwrap();
        let kf = kantorovich(&sf, &mu, &nu).unwrap();
        let mur = DiscreteMeasure::new(vec![0, 2], vec![r(1, 4), r(3, 4)]).unwrap();
        let nur = DiscreteMeasure::new(vec![1, 2], vec![r(1, 2), r(1, 2)]).unwrap();
        let kr = kantorovich(&s, &mur, &nur).unwrap();
        assert!((kf.value - kr.value.to_f64()).abs() < 1e-12);
        assert!(kf.gap <= 1e-9);
    }

    #[test]
    fn lipschitz_examples() {
        let c = build_gasket(1).unwrap();
        let g = GasketGraph::euclidean(&c, 1).unwrap();
        let all: Vec<usize> = (0..6).collect();
        let s = FiniteMetricSpace::from_graph(&g.graph, &all, vec![]).unwrap().map(|d| d.to_ratio());
        let mut ind = vec![r(0, 1); 6];
        ind[0] = r(1, 1);
        assert_eq!(lipschitz_seminorm(&s, &ind).unwrap().value, r(2, 1));
        assert_eq!(lipschitz_seminorm(&s, &[r(3, 1); 6]).unwrap().value, r(0, 1));
        let dist0: Vec<Rational> = (0..6).map(|x| s.dist(0, x)).collect();
        assert_eq!(lipschitz_seminorm(&s, &dist0).unwrap().value, r(1, 1));
        assert!(lipschitz_seminorm(&s, &[r(0, 1)]).is_err());
    }

    #[test]
    fn mcshane_examples() {
        let s = line3();
        let f = vec![r(0, 1), r(1, 2), r(1, 1)];
        assert_eq!(mcshane_extend(&s, &[0, 1, 2], &f, r(1, 1)).unwrap(), f);
        assert_eq!(mcshane_extend(&s, &[1], &[r(5, 1)], r(0, 1)).unwrap(), vec![r(5, 1); 3]);
        let err = mcshane_extend(&s, &[0, 1], &[r(0, 1), r(2, 1)], r(1, 1)).unwrap_err();
        assert!(matches!(err, TransportError::NotLipschitz { i: 0, j: 1, .. }));
    }

    #[test]
    fn coupled_same_vertex_is_alpha() {
        let c = build_gasket(2).unwrap();
        let alpha = Dyadic::new(3, 5);
        let cg = coupled_gasket(&c, 2, 2, 0, alpha).unwrap().coupled;
        for v in 0..15 {
            assert_eq!(tunnel_dirac_distance(&cg, v, v).unwrap(), alpha);
        }
        let g2 = GasketGraph::euclidean(&c, 2).unwrap();
        let within = g2.graph.distances_from(&[0]).unwrap();
        let coupled = cg.distances_from_a(0).unwrap();
        assert_eq!(&coupled[..15], &within[..]);
    }

    #[test]
    fn tunnel_distance_nonincreasing_in_alpha() {
        let c = build_gasket(3).unwrap();
        let mut prev: Option<Vec<Dyadic>> = None;
        for k in (1..8).rev() {
            let cg = coupled_gasket(&c, 1, 3, 1, Dyadic::pow2_neg(k)).unwrap().coupled;
            let row: Vec<Dyadic> = (0..cg.b_count).map(|y| tunnel_dirac_distance(&cg, 10, y).unwrap()).collect();
            if let Some(p) = &prev {
                assert!(row.iter().zip(p).all(|(a, b)| a >= b));
            }
            prev = Some(row);
        }
    }

    #[test]
    fn extent_example() {
        let c = build_gasket(7).unwrap();
        let mut cfg = ExtentConfig::new(3, 7);
        cfg.alpha = Some(Dyadic::pow2_neg(4));
        cfg.mixtures = 6;
        let rep = certify_extent(&c, &cfg).unwrap();
        assert!(rep.bound.to_f64() <= 2.0 / 16.0 + 0.125 + 1.0 / 128.0 + 1e-15);
        assert!(rep.empirical_max <= rep.dirac_bound);
        assert_eq!(rep.mixture_violations, 0);
        assert!(rep.premises.iter().all(|p| p.holds));
    }

    #[test]
    fn extent_at_equal_levels_matches_alpha() {
        let c = build_gasket(2).unwrap();
        let mut cfg = ExtentConfig::new(2, 2);
        cfg.sample_depth = 0;
        cfg.alpha = Some(Dyadic::new(5, 3));
        cfg.mixtures = 2;
        let rep = certify_extent(&c, &cfg).unwrap();
        assert_eq!(rep.empirical_max, Dyadic::new(5, 3));
    }

    #[test]
    fn premise_failure_is_reported() {
        let c = build_gasket(3).unwrap();
        let mut cfg = ExtentConfig::new(1, 3);
        cfg.epsilon_target = Some(Dyadic::pow2_neg(6));
        assert!(matches!(certify_extent(&c, &cfg), Err(TransportError::Premise { .. })));
    }

    #[test]
    fn lipschitz_dirac_identity_examples() {
        let c = build_gasket(2).unwrap();
        let v2 = EdgePoint { curve: 1, t: Dyadic::ONE };
        let mid = EdgePoint { curve: 0, t: Dyadic::HALF };
        let r0 = verify_lipschitz_dirac_identity(&c, 0, &[(v2, mid), (mid, mid)], 1).unwrap();
        assert!(r0.all_equal);
        assert_eq!(r0.rows[0].dual, Dyadic::new(3, 1));
        assert_eq!(r0.rows[1].dual, Dyadic::ZERO);
        let r1 = verify_lipschitz_dirac_identity(&c, 1, &[(v2, mid)], 1).unwrap();
        assert_eq!(r1.rows[0].geodesic, Dyadic::ONE);
        assert!(r1.all_equal);
    }
}
