//! Harmonic coordinates on the gasket and the harmonic embedding `Φ`.
//!
//! The one-level midpoint rule is obtained by minimizing the level-1 graph
//! energy on a single triangle, then applied triangle by triangle. Vertex
//! values are kept exact as integer numerators over `D^depth`, where `D` is
//! the common denominator of the derived rule.

use std::f64::consts::FRAC_1_SQRT_2;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::gasket::{
    build_gasket, curve_count, locate_curve, CurveLength, GasketError, HarmonicVerticesJson, PrefractalComplex,
    QuadratureMeta,
};
use crate::metric::{Arclength, GasketGraph, MetricError, Provenance};
use crate::scalar::{CompensatedSum, Rational};

/// Deepest level at which the global vertex table is kept exact.
pub const DEFAULT_RATIONAL_CAP: u32 = 12;
/// Deepest polyline refinement tried for a single curve.
pub const DEFAULT_QUADRATURE_CAP: u32 = 24;
/// Combined curve level + refinement depth representable with `i128` numerators.
const I128_DEPTH_LIMIT: u32 = 50;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarmonicError {
    #[error("harmonic depth {depth} exceeds the rational cap {cap}")]
    RationalCap { depth: u32, cap: u32 },
    #[error("harmonic values computed to depth {have}, level {needed} requested")]
    MissingDepth { needed: u32, have: u32 },
    #[error("midpoint rule could not be derived: {0}")]
    Derivation(String),
    #[error("tolerance must be positive and finite, got {0}")]
    Tolerance(f64),
    #[error(transparent)]
    Gasket(#[from] GasketError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Value at the midpoint of edge `(p, q)` of a triangle with opposite corner
/// `o`: `adjacent · (u(p) + u(q)) + opposite · u(o)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MidpointRule {
    pub adjacent: Rational,
    pub opposite: Rational,
}

impl MidpointRule {
    /// Minimizes the level-1 energy over the three midpoint values for each
    /// unit boundary vector and reads off the resulting weights.
    pub fn derive() -> Result<Self, HarmonicError> {
        let complex = build_gasket(1)?;
        let n = complex.vertex_count_at(1);
        let interior: Vec<usize> = (3..n).collect();
        // Graph Laplacian of the level-1 edges; the (5/3) factor does not move the minimizer.
        let mut lap = vec![vec![Rational::zero(); n]; n];
        for c in complex.curves_at_level(1) {
            let [u, v] = c.endpoints;
            lap[u][u] += Rational::one();
            lap[v][v] += Rational::one();
            lap[u][v] -= Rational::one();
            lap[v][u] -= Rational::one();
        }
        let mids = complex
            .edge_midpoints(0, 0)
            .ok_or_else(|| HarmonicError::Derivation("level-1 midpoints missing".into()))?;
        // weights[k][e]: value at midpoint of edge e for boundary data e_k.
        let mut weights = [[Rational::zero(); 3]; 3];
        for k in 0..3 {
            let a: Vec<Vec<Rational>> =
                interior.iter().map(|&i| interior.iter().map(|&j| lap[i][j]).collect()).collect();
            let b: Vec<Rational> = interior.iter().map(|&i| -lap[i][k]).collect();
            let x = solve_exact(a, b).ok_or_else(|| HarmonicError::Derivation("singular energy system".into()))?;
            for (e, &m) in mids.iter().enumerate() {
                weights[k][e] = x[interior.iter().position(|&i| i == m).expect("midpoint is interior")];
            }
        }
        // Edge e joins corners (e, e+1) and is opposite corner e+2.
        let adjacent = weights[0][0];
        let opposite = weights[2][0];
        for e in 0..3 {
            let (p, q, o) = (e, (e + 1) % 3, (e + 2) % 3);
            if weights[p][e] != adjacent || weights[q][e] != adjacent || weights[o][e] != opposite {
                return Err(HarmonicError::Derivation("rule is not symmetric".into()));
            }
        }
        Ok(MidpointRule { adjacent, opposite })
    }

    /// Common denominator `D` and integer weights `(D·adjacent, D·opposite)`.
    pub fn integer_form(&self) -> (i128, i128, i128) {
        let d = num_integer::lcm(*self.adjacent.denom(), *self.opposite.denom());
        (d, (self.adjacent * d).to_integer(), (self.opposite * d).to_integer())
    }

    pub fn apply(&self, p: Rational, q: Rational, o: Rational) -> Rational {
        self.adjacent * (p + q) + self.opposite * o
    }
}

/// Gaussian elimination over exact rationals.
fn solve_exact(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col] / a[col][col];
                for c in col..n {
                    let t = a[col][c];
                    a[r][c] -= f * t;
                }
                let t = b[col];
                b[r] -= f * t;
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Harmonic extension of arbitrary rational boundary data to `V_depth`.
pub fn harmonic_extend(
    complex: &PrefractalComplex,
    boundary: [Rational; 3],
    depth: u32,
) -> Result<Vec<Rational>, HarmonicError> {
    harmonic_extend_capped(complex, boundary, depth, DEFAULT_RATIONAL_CAP)
}

pub fn harmonic_extend_capped(
    complex: &PrefractalComplex,
    boundary: [Rational; 3],
    depth: u32,
    cap: u32,
) -> Result<Vec<Rational>, HarmonicError> {
    if depth > cap {
        return Err(HarmonicError::RationalCap { depth, cap });
    }
    if depth > complex.max_level() {
        return Err(GasketError::LevelCap { level: depth, cap: complex.max_level() }.into());
    }
    let rule = MidpointRule::derive()?;
    let mut u = vec![Rational::zero(); complex.vertex_count_at(depth)];
    u[..3].copy_from_slice(&boundary);
    for k in 0..depth {
        let updates: Vec<(usize, Rational)> = (0..complex.triangle_count(k))
            .into_par_iter()
            .flat_map_iter(|r| {
                let t = complex.triangle_indices(k)[r];
                let mids = complex.edge_midpoints(k, r).expect("depth below max level");
                let u = &u;
                (0..3).map(move |e| (mids[e], rule.apply(u[t[e]], u[t[(e + 1) % 3]], u[t[(e + 2) % 3]])))
            })
            .collect();
        for (i, v) in updates {
            u[i] = v;
        }
    }
    Ok(u)
}

/// Exact `(u₁, u₂, u₃)` on `V_depth`: `u_j(v) = numerators[v][j] / base^depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicValues {
    pub depth: u32,
    pub base: i128,
    pub numerators: Vec<[i128; 3]>,
}

impl HarmonicValues {
    pub fn compute(complex: &PrefractalComplex, depth: u32) -> Result<Self, HarmonicError> {
        Self::compute_capped(complex, depth, DEFAULT_RATIONAL_CAP)
    }

    pub fn compute_capped(complex: &PrefractalComplex, depth: u32, cap: u32) -> Result<Self, HarmonicError> {
        if depth > cap {
            return Err(HarmonicError::RationalCap { depth, cap });
        }
        if depth > complex.max_level() {
            return Err(GasketError::LevelCap { level: depth, cap: complex.max_level() }.into());
        }
        let rule = MidpointRule::derive()?;
        let (base, wa, wo) = rule.integer_form();
        let mut num = vec![[0i128; 3]; complex.vertex_count_at(depth)];
        for (j, row) in num.iter_mut().take(3).enumerate() {
            row[j] = 1;
        }
        for k in 0..depth {
            // Rescale existing values to the new denominator, then fill the new midpoints.
            let known = complex.vertex_count_at(k);
            for row in num[..known].iter_mut() {
                for x in row.iter_mut() {
                    *x *= base;
                }
            }
            let updates: Vec<(usize, [i128; 3])> = (0..complex.triangle_count(k))
                .into_par_iter()
                .flat_map_iter(|r| {
                    let t = complex.triangle_indices(k)[r];
                    let mids = complex.edge_midpoints(k, r).expect("depth below max level");
                    let num = &num;
                    (0..3).map(move |e| {
                        let (p, q, o) = (num[t[e]], num[t[(e + 1) % 3]], num[t[(e + 2) % 3]]);
                        // p, q, o are already over base^{k+1}; undo one factor before weighting.
                        let v = std::array::from_fn(|j| (wa * (p[j] + q[j]) + wo * o[j]) / base);
                        (mids[e], v)
                    })
                })
                .collect();
            for (i, v) in updates {
                num[i] = v;
            }
        }
        Ok(HarmonicValues { depth, base, numerators: num })
    }

    pub fn denominator(&self) -> i128 {
        self.base.pow(self.depth)
    }

    pub fn value(&self, v: usize, j: usize) -> Rational {
        Rational::new(self.numerators[v][j], self.denominator())
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn phi(&self, v: usize) -> [f64; 3] {
        phi_of(&self.numerators[v], self.denominator())
    }

    /// Restriction to `V_k` for `k ≤ depth`, rescaled to denominator `base^k`.
    pub fn restrict(&self, k: u32, complex: &PrefractalComplex) -> Option<HarmonicValues> {
        if k > self.depth {
            return None;
        }
        let f = self.base.pow(self.depth - k);
        let numerators = self.numerators[..complex.vertex_count_at(k)]
            .iter()
            .map(|row| {
                if row.iter().all(|x| x % f == 0) {
                    Some(row.map(|x| x / f))
                } else {
                    None
                }
            })
            .collect::<Option<Vec<_>>>()?;
        Some(HarmonicValues { depth: k, base: self.base, numerators })
    }

    /// Distinct coordinate triples; `Φ` is affine and invertible so this is
    /// exactly injectivity of `Φ` on the vertex set.
    pub fn is_injective(&self) -> bool {
        let mut rows = self.numerators.clone();
        rows.sort_unstable();
        rows.windows(2).all(|w| w[0] != w[1])
    }

    pub fn to_json(&self, tolerance: f64) -> HarmonicVerticesJson {
        HarmonicVerticesJson {
            denominator: self.denominator().to_string(),
            numerators: self.numerators.iter().map(|r| r.map(|x| x.to_string())).collect(),
            tolerance,
        }
    }

    pub fn from_json(json: &HarmonicVerticesJson, depth: u32, base: i128) -> Option<HarmonicValues> {
        let den: i128 = json.denominator.parse().ok()?;
        if den != base.checked_pow(depth)? {
            return None;
        }
        let numerators = json
            .numerators
            .iter()
            .map(|r| Some([r[0].parse().ok()?, r[1].parse().ok()?, r[2].parse().ok()?]))
            .collect::<Option<Vec<_>>>()?;
        Some(HarmonicValues { depth, base, numerators })
    }
}

fn phi_of(u: &[i128; 3], den: i128) -> [f64; 3] {
    u.map(|x| FRAC_1_SQRT_2 * ((x - den) as f64 / den as f64))
}

/// `Φ(u) = (√2/2)(u − (1,1,1))` for a coordinate triple.
pub fn phi(u: [f64; 3]) -> [f64; 3] {
    u.map(|x| FRAC_1_SQRT_2 * (x - 1.0))
}

/// Orthonormal coordinates in the plane `x + y + z = const` containing the image.
pub fn project_to_plane(p: [f64; 3]) -> [f64; 2] {
    let s2 = std::f64::consts::SQRT_2;
    let s6 = 6f64.sqrt();
    [(p[0] - p[1]) / s2, (p[0] + p[1] - 2.0 * p[2]) / s6]
}

fn chord(p: &[i128; 3], q: &[i128; 3], den: f64) -> f64 {
    let s: f64 = (0..3).map(|j| ((q[j] - p[j]) as f64 / den).powi(2)).sum();
    FRAC_1_SQRT_2 * s.sqrt()
}

/// Exact local data for one curve: its endpoint triples and the opposite
/// corner of the triangle it bounds, all over `base^level`.
#[derive(Clone, Copy, Debug)]
struct CurveSeed {
    level: u32,
    a: [i128; 3],
    b: [i128; 3],
    c: [i128; 3],
}

#[derive(Clone, Copy)]
struct Weights {
    base: i128,
    adjacent: i128,
    opposite: i128,
}

impl Weights {
    fn mid(&self, p: &[i128; 3], q: &[i128; 3], o: &[i128; 3]) -> [i128; 3] {
        std::array::from_fn(|j| self.adjacent * (p[j] + q[j]) + self.opposite * o[j])
    }
}

fn seed_for(complex: &PrefractalComplex, values: &HarmonicValues, id: usize) -> Result<CurveSeed, HarmonicError> {
    let curve = complex.curve(id)?;
    if curve.level > values.depth {
        return Err(HarmonicError::MissingDepth { needed: curve.level, have: values.depth });
    }
    let (_, r, kind) = locate_curve(id);
    let tri = complex.triangle_indices(curve.level)[r];
    let [c0, c1] = kind.corners();
    let f = values.base.pow(values.depth - curve.level);
    let at = |v: usize| values.numerators[v].map(|x| x / f);
    Ok(CurveSeed { level: curve.level, a: at(tri[c0]), b: at(tri[c1]), c: at(tri[kind.opposite()]) })
}

/// Lengths of the `2^depth` polyline pieces, in parameter order.
fn segment_lengths(seed: &CurveSeed, w: Weights, depth: u32) -> Vec<f64> {
    let den = (w.base as f64).powi((seed.level + depth) as i32);
    let mut out = Vec::with_capacity(1 << depth);
    // Depth-first, left child first, so pieces come out in parameter order.
    let mut stack = vec![(seed.a, seed.b, seed.c, 0u32)];
    while let Some((a, b, c, k)) = stack.pop() {
        if k == depth {
            out.push(chord(&a, &b, den));
            continue;
        }
        let m_ab = w.mid(&a, &b, &c);
        let m_ac = w.mid(&a, &c, &b);
        let m_bc = w.mid(&b, &c, &a);
        let sa = a.map(|x| x * w.base);
        let sb = b.map(|x| x * w.base);
        stack.push((m_ab, sb, m_bc, k + 1));
        stack.push((sa, m_ab, m_ac, k + 1));
    }
    out
}

/// Polyline length estimate for one curve together with its refinement history.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CurveQuadrature {
    pub curve: usize,
    pub length: f64,
    pub depth: u32,
    pub last_increment: f64,
    pub converged: bool,
    /// Estimate at each depth `0..=depth`.
    pub estimates: Vec<f64>,
}

impl CurveQuadrature {
    pub fn meta(&self) -> QuadratureMeta {
        QuadratureMeta { depth: self.depth, last_increment: self.last_increment, converged: self.converged }
    }
}

fn check_tol(tol: f64) -> Result<(), HarmonicError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(HarmonicError::Tolerance(tol))
    }
}

/// Refines the inscribed polyline of `Φ∘R_j` until the relative increment
/// drops below `tol` or `max_depth` is reached.
pub fn harmonic_curve_length(
    complex: &PrefractalComplex,
    values: &HarmonicValues,
    curve: usize,
    tol: f64,
    max_depth: u32,
) -> Result<CurveQuadrature, HarmonicError> {
    check_tol(tol)?;
    let rule = MidpointRule::derive()?;
    let (base, adjacent, opposite) = rule.integer_form();
    quadrature(complex, values, Weights { base, adjacent, opposite }, curve, tol, max_depth)
}

fn quadrature(
    complex: &PrefractalComplex,
    values: &HarmonicValues,
    w: Weights,
    curve: usize,
    tol: f64,
    max_depth: u32,
) -> Result<CurveQuadrature, HarmonicError> {
    let seed = seed_for(complex, values, curve)?;
    let max_depth = max_depth.min(I128_DEPTH_LIMIT.saturating_sub(seed.level));
    let mut estimates = Vec::new();
    let mut last_increment = f64::INFINITY;
    let mut converged = false;
    for depth in 0..=max_depth {
        let len = segment_lengths(&seed, w, depth).into_iter().collect::<CompensatedSum>().value();
        if let Some(&prev) = estimates.last() {
            last_increment = (len - prev) / len;
            estimates.push(len);
            if last_increment.abs() < tol {
                converged = true;
                break;
            }
        } else {
            estimates.push(len);
        }
    }
    Ok(CurveQuadrature {
        curve,
        length: *estimates.last().expect("depth 0 always runs"),
        depth: estimates.len() as u32 - 1,
        last_increment,
        converged,
        estimates,
    })
}

/// `HG_n`: the gasket combinatorics with harmonic curve lengths.
#[derive(Clone, Debug)]
pub struct HarmonicGasket {
    pub complex: PrefractalComplex,
    pub values: HarmonicValues,
    pub tolerance: f64,
    /// Quadrature for every curve id `< B_level`.
    pub curves: Vec<CurveQuadrature>,
    pub graph: GasketGraph<f64>,
}

pub fn build_harmonic_gasket(level: u32, tol: f64) -> Result<HarmonicGasket, HarmonicError> {
    build_harmonic_gasket_with(level, tol, DEFAULT_QUADRATURE_CAP)
}

pub fn build_harmonic_gasket_with(level: u32, tol: f64, max_depth: u32) -> Result<HarmonicGasket, HarmonicError> {
    check_tol(tol)?;
    if level > DEFAULT_RATIONAL_CAP {
        return Err(HarmonicError::RationalCap { depth: level, cap: DEFAULT_RATIONAL_CAP });
    }
    let complex = build_gasket(level)?;
    let values = HarmonicValues::compute(&complex, level)?;
    let rule = MidpointRule::derive()?;
    let (base, adjacent, opposite) = rule.integer_form();
    let w = Weights { base, adjacent, opposite };
    let curves: Vec<CurveQuadrature> = (0..curve_count(level))
        .into_par_iter()
        .map(|id| quadrature(&complex, &values, w, id, tol, max_depth))
        .collect::<Result<_, _>>()?;
    let lengths: Vec<f64> = curves.iter().map(|q| q.length).collect();
    let graph = GasketGraph::from_complex(&complex, level, &lengths, Provenance::HarmonicGasket(level))?;
    Ok(HarmonicGasket { complex, values, tolerance: tol, curves, graph })
}

impl HarmonicGasket {
    pub fn level(&self) -> u32 {
        self.graph.level
    }

    pub fn converged(&self) -> bool {
        self.curves.iter().all(|q| q.converged)
    }

    /// Longest harmonic curve of the given level.
    pub fn max_length_at(&self, level: u32) -> f64 {
        self.complex.curves_at_level(level).iter().map(|c| self.curves[c.id].length).fold(0.0, f64::max)
    }

    /// Within-curve arclength along the sampled polyline.
    pub fn arclength(&self) -> Result<HarmonicArclength<'_>, HarmonicError> {
        let rule = MidpointRule::derive()?;
        let (base, adjacent, opposite) = rule.integer_form();
        Ok(HarmonicArclength { gasket: self, weights: Weights { base, adjacent, opposite } })
    }

    pub fn points(&self) -> Vec<[f64; 3]> {
        (0..self.values.len()).map(|v| self.values.phi(v)).collect()
    }

    pub fn to_json(&self) -> crate::gasket::ComplexJson {
        let mut json = self.complex.to_json();
        json.geometry = "harmonic".into();
        for (c, q) in json.curves.iter_mut().zip(&self.curves) {
            c.length = CurveLength::Float(q.length);
            c.quadrature = Some(q.meta());
        }
        json.harmonic = Some(self.values.to_json(self.tolerance));
        json
    }

    /// `index,a,b,u1,u2,u3,x,y,z` with exact coordinates as fractions.
    pub fn vertices_csv(&self) -> String {
        let den = self.values.denominator();
        let mut out = String::from("index,a,b,u1,u2,u3,x,y,z\n");
        for (i, p) in self.complex.vertices().iter().enumerate() {
            let u = self.values.numerators[i];
            let x = self.values.phi(i);
            out.push_str(&format!(
                "{i},{},{},{}/{den},{}/{den},{}/{den},{:?},{:?},{:?}\n",
                p.a, p.b, u[0], u[1], u[2], x[0], x[1], x[2]
            ));
        }
        out
    }

    /// `id,level,kind,length,depth,lastIncrement,converged`.
    pub fn curves_csv(&self) -> String {
        let mut out = String::from("id,level,kind,length,depth,lastIncrement,converged\n");
        for (c, q) in self.complex.curves().iter().zip(&self.curves) {
            out.push_str(&format!(
                "{},{},{:?},{:?},{},{:?},{}\n",
                c.id, c.level, c.kind, q.length, q.depth, q.last_increment, q.converged
            ));
        }
        out
    }
}

/// Arclength along harmonic curves: sum of the polyline pieces between the
/// two parameters, at the curve's own quadrature depth (or finer when the
/// parameters require it).
pub struct HarmonicArclength<'a> {
    gasket: &'a HarmonicGasket,
    weights: Weights,
}

impl Arclength<f64> for HarmonicArclength<'_> {
    fn along(&self, curve: usize, from: Dyadic, to: Dyadic) -> f64 {
        let (from, to) = if from <= to { (from, to) } else { (to, from) };
        if from == Dyadic::ZERO && to == Dyadic::ONE {
            return self.gasket.curves[curve].length;
        }
        if from == to {
            return 0.0;
        }
        let depth = self.gasket.curves[curve].depth.max(from.exponent()).max(to.exponent());
        let seed = seed_for(&self.gasket.complex, &self.gasket.values, curve).expect("curve inside the gasket");
        let pieces = segment_lengths(&seed, self.weights, depth);
        let scale = Dyadic::from_int(1i64 << depth);
        let lo = (from * scale).floor() as usize;
        let hi = (to * scale).floor() as usize;
        pieces[lo..hi].iter().copied().collect::<CompensatedSum>().value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn r(n: i128, d: i128) -> Rational {
        Ratio::new(n, d)
    }

    #[test]
    fn derived_rule_weights() {
        let rule = MidpointRule::derive().unwrap();
        assert_eq!(rule.adjacent, r(2, 5));
        assert_eq!(rule.opposite, r(1, 5));
        assert_eq!(rule.integer_form(), (5, 2, 1));
    }

    #[test]
    fn unit_boundary_depth_one() {
        let c = build_gasket(1).unwrap();
        let u = harmonic_extend(&c, [r(1, 1), r(0, 1), r(0, 1)], 1).unwrap();
        let mids = c.edge_midpoints(0, 0).unwrap();
        // Bottom (v0 v1) and left (v2 v0) edges touch v0; the right edge is opposite.
        assert_eq!(u[mids[0]], r(2, 5));
        assert_eq!(u[mids[2]], r(2, 5));
        assert_eq!(u[mids[1]], r(1, 5));
    }

    #[test]
    fn constants_and_linearity() {
        let c = build_gasket(4).unwrap();
        let k = r(7, 3);
        assert!(harmonic_extend(&c, [k, k, k], 4).unwrap().iter().all(|&x| x == k));
        let e: Vec<Vec<Rational>> = (0..3)
            .map(|j| {
                let mut b = [r(0, 1); 3];
                b[j] = r(1, 1);
                harmonic_extend(&c, b, 4).unwrap()
            })
            .collect();
        let f = harmonic_extend(&c, [r(2, 1), r(-1, 3), r(5, 7)], 4).unwrap();
        for v in 0..f.len() {
            assert_eq!(e[0][v] + e[1][v] + e[2][v], r(1, 1));
            assert_eq!(f[v], r(2, 1) * e[0][v] + r(-1, 3) * e[1][v] + r(5, 7) * e[2][v]);
        }
    }

    #[test]
    fn integer_table_matches_rational_extension() {
        let c = build_gasket(5).unwrap();
        let h = HarmonicValues::compute(&c, 5).unwrap();
        assert_eq!(h.denominator(), 3125);
        let u0 = harmonic_extend(&c, [r(1, 1), r(0, 1), r(0, 1)], 5).unwrap();
        for v in 0..h.len() {
            assert_eq!(h.value(v, 0), u0[v]);
            assert_eq!(h.numerators[v].iter().sum::<i128>(), 3125);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let c = build_gasket(3).unwrap();
        assert_eq!(
            HarmonicValues::compute_capped(&c, 3, 2).unwrap_err(),
            HarmonicError::RationalCap { depth: 3, cap: 2 }
        );
        assert!(matches!(build_harmonic_gasket(13, 1e-6), Err(HarmonicError::RationalCap { .. })));
    }

    #[test]
    fn restriction_is_consistent() {
        let c = build_gasket(6).unwrap();
        let h6 = HarmonicValues::compute(&c, 6).unwrap();
        for k in 0..6 {
            assert_eq!(h6.restrict(k, &c).unwrap(), HarmonicValues::compute(&c, k).unwrap());
        }
    }

    #[test]
    fn phi_of_boundary_vertex() {
        let c = build_gasket(0).unwrap();
        let h = HarmonicValues::compute(&c, 0).unwrap();
        let p = h.phi(0);
        assert_eq!(p, [0.0, -FRAC_1_SQRT_2, -FRAC_1_SQRT_2]);
    }

    #[test]
    fn injective_on_v4_and_plane_on_v6() {
        let c = build_gasket(6).unwrap();
        let h4 = HarmonicValues::compute(&c, 4).unwrap();
        assert_eq!(h4.len(), 123);
        assert!(h4.is_injective());
        let h6 = HarmonicValues::compute(&c, 6).unwrap();
        for v in 0..h6.len() {
            let p = h6.phi(v);
            assert!((p[0] + p[1] + p[2] + std::f64::consts::SQRT_2).abs() < 1e-12);
        }
    }

    #[test]
    fn quadrature_is_monotone_and_converges() {
        let c = build_gasket(0).unwrap();
        let h = HarmonicValues::compute(&c, 0).unwrap();
        let q = harmonic_curve_length(&c, &h, 0, 1e-6, DEFAULT_QUADRATURE_CAP).unwrap();
        assert!(q.converged);
        assert!((q.estimates[0] - 1.0).abs() < 1e-15);
        for w in q.estimates.windows(2) {
            assert!(w[1] >= w[0] * (1.0 - 1e-14));
        }
        assert!(q.length > 1.07 && q.length < 1.08);
        let short = harmonic_curve_length(&c, &h, 0, 1e-12, 3).unwrap();
        assert!(!short.converged);
        assert_eq!(short.depth, 3);
    }

    #[test]
    fn arclength_adds_up() {
        let g = build_harmonic_gasket(1, 1e-6).unwrap();
        let arc = g.arclength().unwrap();
        for id in 3..12 {
            let whole = arc.along(id, Dyadic::ZERO, Dyadic::ONE);
            let split = arc.along(id, Dyadic::ZERO, Dyadic::new(3, 3)) + arc.along(id, Dyadic::new(3, 3), Dyadic::ONE);
            assert!((whole - split).abs() < 1e-5 * whole);
        }
    }

    #[test]
    fn json_round_trip_of_values() {
        let g = build_harmonic_gasket(2, 1e-6).unwrap();
        let json = g.to_json();
        let back = HarmonicValues::from_json(json.harmonic.as_ref().unwrap(), 2, 5).unwrap();
        assert_eq!(back, g.values);
        assert!(g.vertices_csv().lines().count() == 16);
    }
}
