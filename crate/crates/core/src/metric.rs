//! Intrinsic geodesic metrics on prefractal graphs.
//!
//! A [`MetricGraph`] is a weighted undirected graph whose shortest-path metric
//! plays the role of `d_n`. [`GasketGraph`] adds the curve table of a gasket so
//! that points in the interior of edges ([`EdgePoint`]) can be measured too.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::gasket::{curve_count, GasketError, LatticePoint, PrefractalComplex};
use crate::scalar::Weight;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("graph is disconnected: vertex {vertex} is unreachable from vertex {from}")]
    Disconnected { vertex: usize, from: usize },
    #[error("edge {edge} ({u}, {v}) has non-positive weight")]
    NonPositiveWeight { edge: usize, u: usize, v: usize },
    #[error("vertex index {index} out of range ({count} vertices)")]
    VertexIndex { index: usize, count: usize },
    #[error("curve id {id} out of range ({count} curves)")]
    CurveId { id: usize, count: usize },
    #[error("edge parameter {0} outside [0, 1]")]
    Parameter(Dyadic),
    #[error("Hausdorff distance needs nonempty subsets")]
    EmptySubset,
    #[error("vertex indexing mismatch: {0}")]
    IndexMismatch(String),
    #[error("not a metric: {0}")]
    NotAMetric(String),
    #[error(transparent)]
    Gasket(#[from] GasketError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind", content = "level")]
pub enum Provenance {
    EuclideanGasket(u32),
    HarmonicGasket(u32),
    Generic,
}

#[derive(Clone, Debug)]
pub struct MetricGraph<W> {
    vertex_count: usize,
    edges: Vec<(usize, usize, W)>,
    adjacency: Vec<Vec<(usize, W)>>,
    provenance: Provenance,
}

struct HeapItem<W> {
    dist: W,
    vertex: usize,
}

impl<W: Weight> PartialEq for HeapItem<W> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<W: Weight> Eq for HeapItem<W> {}

impl<W: Weight> PartialOrd for HeapItem<W> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<W: Weight> Ord for HeapItem<W> {
    // Reversed: the max-heap pops the smallest distance, ties to the smallest index.
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl<W: Weight> MetricGraph<W> {
    pub fn new(
        vertex_count: usize,
        edges: Vec<(usize, usize, W)>,
        provenance: Provenance,
    ) -> Result<Self, MetricError> {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (i, &(u, v, w)) in edges.iter().enumerate() {
            for x in [u, v] {
                if x >= vertex_count {
                    return Err(MetricError::VertexIndex { index: x, count: vertex_count });
                }
            }
            if !w.is_positive() {
                return Err(MetricError::NonPositiveWeight { edge: i, u, v });
            }
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }
        Ok(MetricGraph { vertex_count, edges, adjacency, provenance })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize, W)] {
        &self.edges
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, W)] {
        &self.adjacency[v]
    }

    /// Multi-source label-setting shortest paths; `None` marks unreachable vertices.
    pub fn distances_from_set(&self, sources: &[usize]) -> Vec<Option<W>> {
        let mut dist: Vec<Option<W>> = vec![None; self.vertex_count];
        let mut done = vec![false; self.vertex_count];
        let mut heap = BinaryHeap::new();
        for &s in sources {
            dist[s] = Some(W::zero());
            heap.push(HeapItem { dist: W::zero(), vertex: s });
        }
        while let Some(HeapItem { dist: d, vertex: u }) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for &(v, w) in &self.adjacency[u] {
                let nd = d + w;
                let better = match dist[v] {
                    None => true,
                    Some(old) => nd.total_cmp(&old) == Ordering::Less,
                };
                if better && !done[v] {
                    dist[v] = Some(nd);
                    heap.push(HeapItem { dist: nd, vertex: v });
                }
            }
        }
        dist
    }

    /// Distances from a nonempty source set, failing on the first unreachable vertex.
    pub fn distances_from(&self, sources: &[usize]) -> Result<Vec<W>, MetricError> {
        for &s in sources {
            if s >= self.vertex_count {
                return Err(MetricError::VertexIndex { index: s, count: self.vertex_count });
            }
        }
        let from = sources.first().copied().unwrap_or(0);
        self.distances_from_set(sources)
            .into_iter()
            .enumerate()
            .map(|(v, d)| d.ok_or(MetricError::Disconnected { vertex: v, from }))
            .collect()
    }

    pub fn check_connected(&self) -> Result<(), MetricError> {
        if self.vertex_count == 0 {
            return Ok(());
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(v) => Err(MetricError::Disconnected { vertex: v, from: 0 }),
            None => Ok(()),
        }
    }
}

/// Shortest-path distances from each source to every vertex (row per source).
/// Rows are computed independently and in parallel.
pub fn geodesic_vertex_distances<W: Weight>(
    g: &MetricGraph<W>,
    sources: &[usize],
) -> Result<Vec<Vec<W>>, MetricError> {
    g.check_connected()?;
    sources.par_iter().map(|&s| g.distances_from(&[s])).collect()
}

/// One curve of a gasket graph: endpoints, length, and (below the finest
/// level) the two finer curves it is the union of.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphCurve<W> {
    pub ends: [usize; 2],
    pub length: W,
    pub halves: Option<[usize; 2]>,
}

/// A point `C_j(t)` on curve `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgePoint {
    pub curve: usize,
    pub t: Dyadic,
}

impl EdgePoint {
    pub fn new(curve: usize, t: Dyadic) -> Result<Self, MetricError> {
        if t < Dyadic::ZERO || t > Dyadic::ONE {
            return Err(MetricError::Parameter(t));
        }
        Ok(EdgePoint { curve, t })
    }
}

/// Partial arclength along a curve between two parameters.
pub trait Arclength<W> {
    fn along(&self, curve: usize, from: Dyadic, to: Dyadic) -> W;
}

/// Constant-speed curves: arclength is `|to − from| · λ_j`.
pub struct LinearArclength<'a, W>(pub &'a [GraphCurve<W>]);

impl<W: Weight> Arclength<W> for LinearArclength<'_, W> {
    fn along(&self, curve: usize, from: Dyadic, to: Dyadic) -> W {
        self.0[curve].length.scale((to - from).abs())
    }
}

/// The metric graph of `SG_n` (or `HG_n`) together with its curve table.
#[derive(Clone, Debug)]
pub struct GasketGraph<W> {
    pub level: u32,
    pub graph: MetricGraph<W>,
    /// `V_level`, indexed like the graph vertices.
    pub points: Vec<LatticePoint>,
    /// Every curve of level at most `level`, indexed by id.
    pub curves: Vec<GraphCurve<W>>,
}

impl GasketGraph<Dyadic> {
    /// The exact Euclidean `(V_level, d_level)` graph: vertices `V_level`,
    /// edges the level-`level` curves with weight `2^{-level}`.
    pub fn euclidean(complex: &PrefractalComplex, level: u32) -> Result<Self, MetricError> {
        let lengths: Vec<Dyadic> =
            complex.curves()[..curve_count(level.min(complex.max_level()))].iter().map(|c| c.length).collect();
        GasketGraph::from_complex(complex, level, &lengths, Provenance::EuclideanGasket(level))
    }
}

impl<W: Weight> GasketGraph<W> {
    /// Builds the level-`level` graph with the given per-curve lengths
    /// (`lengths[id]` for every id `< B_level`).
    pub fn from_complex(
        complex: &PrefractalComplex,
        level: u32,
        lengths: &[W],
        provenance: Provenance,
    ) -> Result<Self, MetricError> {
        if level > complex.max_level() {
            return Err(GasketError::LevelCap { level, cap: complex.max_level() }.into());
        }
        let count = curve_count(level);
        if lengths.len() < count {
            return Err(MetricError::CurveId { id: lengths.len(), count });
        }
        let curves: Vec<GraphCurve<W>> = complex.curves()[..count]
            .iter()
            .map(|c| GraphCurve {
                ends: c.endpoints,
                length: lengths[c.id],
                halves: if c.level < level { complex.curve_halves(c.id) } else { None },
            })
            .collect();
        let edges = complex
            .curves_at_level(level)
            .iter()
            .map(|c| (c.endpoints[0], c.endpoints[1], lengths[c.id]))
            .collect();
        let graph = MetricGraph::new(complex.vertex_count_at(level), edges, provenance)?;
        Ok(GasketGraph { level, graph, points: complex.vertices_at(level).to_vec(), curves })
    }

    pub fn linear(&self) -> LinearArclength<'_, W> {
        LinearArclength(&self.curves)
    }

    /// Rewrites a point onto the finest curve containing it.
    pub fn canonical(&self, x: EdgePoint) -> Result<EdgePoint, MetricError> {
        if x.curve >= self.curves.len() {
            return Err(MetricError::CurveId { id: x.curve, count: self.curves.len() });
        }
        let mut x = EdgePoint::new(x.curve, x.t)?;
        while let Some([h0, h1]) = self.curves[x.curve].halves {
            let two_t = x.t + x.t;
            x = if x.t <= Dyadic::HALF {
                EdgePoint { curve: h0, t: two_t }
            } else {
                EdgePoint { curve: h1, t: two_t - Dyadic::ONE }
            };
        }
        Ok(x)
    }

    /// `d(x, y)` for points on edges, with constant-speed arclength.
    pub fn point_distance(&self, x: EdgePoint, y: EdgePoint) -> Result<W, MetricError> {
        self.point_distance_with(&self.linear(), x, y)
    }

    /// Minimum over the four endpoint routings, plus the direct route when
    /// both points sit on the same finest curve.
    pub fn point_distance_with(
        &self,
        arc: &impl Arclength<W>,
        x: EdgePoint,
        y: EdgePoint,
    ) -> Result<W, MetricError> {
        let x = self.canonical(x)?;
        let y = self.canonical(y)?;
        let (cx, cy) = (&self.curves[x.curve], &self.curves[y.curve]);
        let rows: Vec<Vec<W>> = cx
            .ends
            .iter()
            .map(|&e| self.graph.distances_from(&[e]))
            .collect::<Result<_, _>>()?;
        let end_param = [Dyadic::ZERO, Dyadic::ONE];
        let mut best: Option<W> = None;
        if x.curve == y.curve {
            let (lo, hi) = if x.t <= y.t { (x.t, y.t) } else { (y.t, x.t) };
            best = Some(arc.along(x.curve, lo, hi));
        }
        for (ex, row) in rows.iter().enumerate() {
            let to_end = along_unordered(arc, x.curve, x.t, end_param[ex]);
            for ey in 0..2 {
                let from_end = along_unordered(arc, y.curve, end_param[ey], y.t);
                let d = to_end + row[cy.ends[ey]] + from_end;
                best = Some(match best {
                    None => d,
                    Some(b) => b.min_of(d),
                });
            }
        }
        Ok(best.expect("at least one routing"))
    }

    /// Points `C_j(i / 2^depth)` for every finest curve, listed curve by curve.
    pub fn edge_samples(&self, depth: u32) -> Vec<EdgePoint> {
        let steps = 1i64 << depth;
        let lo = if self.level == 0 { 0 } else { curve_count(self.level - 1) };
        (lo..self.curves.len())
            .flat_map(|c| (0..=steps).map(move |i| EdgePoint { curve: c, t: Dyadic::new(i, depth) }))
            .collect()
    }

    /// Refines every finest curve into `2^depth` pieces so that the sample
    /// points become graph vertices. Original vertices keep their indices.
    pub fn subdivide(&self, arc: &impl Arclength<W>, depth: u32) -> Result<Subdivision<W>, MetricError> {
        let nv = self.graph.vertex_count();
        let steps = 1usize << depth;
        let first = if self.level == 0 { 0 } else { curve_count(self.level - 1) };
        let finest = self.curves.len() - first;
        let mut edges = Vec::with_capacity(finest * steps);
        for (k, c) in self.curves[first..].iter().enumerate() {
            let id = first + k;
            let node = |i: usize| -> usize {
                match i {
                    0 => c.ends[0],
                    i if i == steps => c.ends[1],
                    i => nv + k * (steps - 1) + (i - 1),
                }
            };
            for i in 0..steps {
                let w = arc.along(id, Dyadic::new(i as i64, depth), Dyadic::new(i as i64 + 1, depth));
                edges.push((node(i), node(i + 1), w));
            }
        }
        let graph = MetricGraph::new(nv + finest * (steps - 1), edges, self.graph.provenance())?;
        Ok(Subdivision { graph, depth, first_curve: first, base_vertices: nv })
    }
}

fn along_unordered<W: Weight>(arc: &impl Arclength<W>, c: usize, a: Dyadic, b: Dyadic) -> W {
    if a <= b {
        arc.along(c, a, b)
    } else {
        arc.along(c, b, a)
    }
}

/// A gasket graph whose finest edges are cut into `2^depth` pieces.
#[derive(Clone, Debug)]
pub struct Subdivision<W> {
    pub graph: MetricGraph<W>,
    pub depth: u32,
    first_curve: usize,
    base_vertices: usize,
}

impl<W: Weight> Subdivision<W> {
    /// Vertex index of a canonical (finest-curve) point whose parameter lies
    /// on the subdivision grid.
    pub fn index_of(&self, gg: &GasketGraph<W>, x: EdgePoint) -> Result<usize, MetricError> {
        let x = gg.canonical(x)?;
        let scaled = x.t * Dyadic::from_int(1i64 << self.depth);
        if scaled.exponent() != 0 {
            return Err(MetricError::Parameter(x.t));
        }
        let i = scaled.numerator() as usize;
        let steps = 1usize << self.depth;
        let c = &gg.curves[x.curve];
        Ok(match i {
            0 => c.ends[0],
            i if i == steps => c.ends[1],
            i => self.base_vertices + (x.curve - self.first_curve) * (steps - 1) + (i - 1),
        })
    }
}

/// Finite metric space with labelled points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FiniteMetricSpace<W> {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub labels: Vec<String>,
    pub d: Vec<Vec<W>>,
}

fn schema_version() -> u32 {
    crate::gasket::SCHEMA_VERSION
}

impl<W: Weight> FiniteMetricSpace<W> {
    pub fn new(labels: Vec<String>, d: Vec<Vec<W>>) -> Result<Self, MetricError> {
        let space = FiniteMetricSpace { schema_version: schema_version(), labels, d };
        space.validate()?;
        Ok(space)
    }

    /// Restriction of the graph metric to the given vertices.
    pub fn from_graph(g: &MetricGraph<W>, vertices: &[usize], labels: Vec<String>) -> Result<Self, MetricError> {
        let rows = geodesic_vertex_distances(g, vertices)?;
        let d = rows.iter().map(|row| vertices.iter().map(|&v| row[v]).collect()).collect();
        let labels = if labels.is_empty() { vertices.iter().map(|v| v.to_string()).collect() } else { labels };
        FiniteMetricSpace::new(labels, d)
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn dist(&self, i: usize, j: usize) -> W {
        self.d[i][j]
    }

    pub fn map<V: Weight>(&self, f: impl Fn(W) -> V) -> FiniteMetricSpace<V> {
        FiniteMetricSpace {
            schema_version: self.schema_version,
            labels: self.labels.clone(),
            d: self.d.iter().map(|row| row.iter().map(|&x| f(x)).collect()).collect(),
        }
    }

    /// Zero diagonal, symmetry, positivity and the triangle inequality:
    /// every triple when there are at most 64 points, 20 000 seeded triples above.
    pub fn validate(&self) -> Result<(), MetricError> {
        let n = self.d.len();
        if self.labels.len() != n || self.d.iter().any(|row| row.len() != n) {
            return Err(MetricError::NotAMetric("matrix is not square or labels mismatch".into()));
        }
        for i in 0..n {
            if self.d[i][i].total_cmp(&W::zero()) != Ordering::Equal {
                return Err(MetricError::NotAMetric(format!("nonzero diagonal at {i}")));
            }
            for j in 0..i {
                if self.d[i][j].total_cmp(&self.d[j][i]) != Ordering::Equal {
                    return Err(MetricError::NotAMetric(format!("asymmetric at ({i}, {j})")));
                }
                if !self.d[i][j].is_positive() {
                    return Err(MetricError::NotAMetric(format!("non-positive distance at ({i}, {j})")));
                }
            }
        }
        let check = |i: usize, j: usize, k: usize| -> Result<(), MetricError> {
            if (self.d[i][k] + self.d[k][j]).total_cmp(&self.d[i][j]) == Ordering::Less {
                return Err(MetricError::NotAMetric(format!("triangle inequality fails for ({i}, {k}, {j})")));
            }
            Ok(())
        };
        if n <= 64 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        check(i, j, k)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5167_a5e7);
            for _ in 0..20_000 {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("label");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.d) {
            out.push_str(l);
            for x in row {
                out.push(',');
                out.push_str(&format!("{x:?}"));
            }
            out.push('\n');
        }
        out
    }
}

/// `max(sup_a inf_b d, sup_b inf_a d)` over index subsets of the space.
pub fn hausdorff<W: Weight>(space: &FiniteMetricSpace<W>, a: &[usize], b: &[usize]) -> Result<W, MetricError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricError::EmptySubset);
    }
    for &i in a.iter().chain(b) {
        if i >= space.len() {
            return Err(MetricError::VertexIndex { index: i, count: space.len() });
        }
    }
    let directed = |from: &[usize], to: &[usize]| {
        from.iter()
            .map(|&x| to.iter().map(|&y| space.dist(x, y)).reduce(W::min_of).unwrap())
            .reduce(W::max_of)
            .unwrap()
    };
    Ok(directed(a, b).max_of(directed(b, a)))
}

/// Largest vertex-to-set distance, i.e. `Haus_d(S, V)` when `S ⊆ V`.
pub fn hausdorff_to_subset<W: Weight>(g: &MetricGraph<W>, subset: &[usize]) -> Result<W, MetricError> {
    if subset.is_empty() {
        return Err(MetricError::EmptySubset);
    }
    Ok(g.distances_from(subset)?.into_iter().reduce(W::max_of).unwrap())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AgreementReport<W> {
    pub n: u32,
    pub m: u32,
    pub pairs: usize,
    pub max_discrepancy: W,
}

/// `max_{v,w ∈ V_n} |d_n(v,w) − d_m(v,w)|`.
pub fn certify_vertex_agreement<W: Weight>(
    n: u32,
    m: u32,
    g_n: &GasketGraph<W>,
    g_m: &GasketGraph<W>,
) -> Result<AgreementReport<W>, MetricError> {
    if g_n.level != n || g_m.level != m || m < n {
        return Err(MetricError::IndexMismatch(format!(
            "expected levels ({n}, {m}), got ({}, {})",
            g_n.level, g_m.level
        )));
    }
    let k = g_n.points.len();
    if g_m.points.len() < k || g_m.points[..k] != g_n.points[..] {
        return Err(MetricError::IndexMismatch(format!("V_{n} is not a prefix of the level-{m} vertex list")));
    }
    let sources: Vec<usize> = (0..k).collect();
    let rows_n = geodesic_vertex_distances(&g_n.graph, &sources)?;
    let rows_m = geodesic_vertex_distances(&g_m.graph, &sources)?;
    let mut worst = W::zero();
    for (rn, rm) in rows_n.iter().zip(&rows_m) {
        for v in 0..k {
            worst = worst.max_of(rn[v].abs_diff(rm[v]));
        }
    }
    Ok(AgreementReport { n, m, pairs: k * k, max_discrepancy: worst })
}

/// `Haus_{d_n}(V_n, S_n)` for the on-edge sample `S_n` of the finest curves
/// at parameters `i / 2^depth`. Since `V_n ⊆ S_n`, only the direction from the
/// samples to `V_n` contributes.
pub fn sample_hausdorff<W: Weight>(
    g: &GasketGraph<W>,
    arc: &impl Arclength<W>,
    depth: u32,
) -> Result<W, MetricError> {
    let all: Vec<usize> = (0..g.graph.vertex_count()).collect();
    let to_v = g.graph.distances_from(&all)?;
    let mut worst = W::zero();
    for x in g.edge_samples(depth) {
        let c = &g.curves[x.curve];
        let via0 = arc.along(x.curve, Dyadic::ZERO, x.t) + to_v[c.ends[0]];
        let via1 = arc.along(x.curve, x.t, Dyadic::ONE) + to_v[c.ends[1]];
        worst = worst.max_of(via0.min_of(via1));
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GhBound {
    pub n: u32,
    pub m: u32,
    pub sample_depth: u32,
    pub samples_per_curve: usize,
    /// `Haus_{d_n}(V_n, S_n)`.
    pub sample_term: Dyadic,
    /// Worst-case gap between `S_n` and the full edges: `2^{-n} / 2^{depth+1}`.
    pub edge_sampling_slack: Dyadic,
    /// `Haus_{d_m}(V_n, V_m)`.
    pub vertex_term: Dyadic,
    /// `2^{-m}`, standing in for `Haus(V_m, SG_∞)`.
    pub sampling_slack: Dyadic,
    pub bound: Dyadic,
    /// `2^{-n+1}`.
    pub reference_bound: Dyadic,
}

pub fn gh_upper_bound(n: u32, m: u32) -> Result<GhBound, MetricError> {
    let complex = crate::gasket::build_gasket(m.max(n))?;
    gh_upper_bound_with(&complex, n, m, 1)
}

/// Certified chain `Haus_{d_n}(V_n, S_n) + 0 + Haus_{d_m}(V_n, V_m) + 2^{-m}`
/// bounding `GH((SG_n, d_n), (SG_∞, d_∞))` up to the reported slacks.
pub fn gh_upper_bound_with(
    complex: &PrefractalComplex,
    n: u32,
    m: u32,
    sample_depth: u32,
) -> Result<GhBound, MetricError> {
    if m < n {
        return Err(MetricError::IndexMismatch(format!("sample level {m} below level {n}")));
    }
    let g_n = GasketGraph::euclidean(complex, n)?;
    let g_m = GasketGraph::euclidean(complex, m)?;
    let sample_term = sample_hausdorff(&g_n, &g_n.linear(), sample_depth)?;
    let v_n: Vec<usize> = (0..g_n.points.len()).collect();
    let vertex_term = hausdorff_to_subset(&g_m.graph, &v_n)?;
    let sampling_slack = Dyadic::pow2_neg(m);
    Ok(GhBound {
        n,
        m,
        sample_depth,
        samples_per_curve: (1usize << sample_depth) + 1,
        sample_term,
        edge_sampling_slack: Dyadic::pow2_neg(n + sample_depth + 1),
        vertex_term,
        sampling_slack,
        bound: sample_term + vertex_term + sampling_slack,
        reference_bound: Dyadic::from_int(2) * Dyadic::pow2_neg(n),
    })
}
