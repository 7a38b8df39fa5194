//! Exact prefractal Sierpiński gaskets.
//!
//! Points live on the triangular lattice spanned by `v1 = (1, 0)` and
//! `v2 = (1/2, √3/2)` with dyadic coordinates, so vertex identity and edge
//! lengths never go through floating point. Level `n + 1` triangles are the
//! images `Δ_{n+1, j + r·3^n} = T_r Δ_{n,j}` of the level-`n` ones under the
//! three similitudes `T_r(x) = (x + v_r) / 2`.
//!
//! Curves (the edges of every triangle at every level, coarse ones included)
//! are numbered by the standard parametrization: the bottom, right and left
//! edge of the `r`-th level-`n` triangle get ids `κ(n,r)`, `κ(n,r)+1`,
//! `κ(n,r)+2` with `κ(n,r) = 3(Σ_{k<n} 3^k + r)`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::Dyadic;

pub const DEFAULT_LEVEL_CAP: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GasketError {
    #[error("level {level} exceeds the level cap of {cap}")]
    LevelCap { level: u32, cap: u32 },
    #[error("triangle index {index} out of range for level {level} (expected < {count})")]
    TriangleIndex { level: u32, index: usize, count: usize },
    #[error("corner index {0} out of range (expected 0, 1 or 2)")]
    Corner(usize),
    #[error("curve id {id} out of range (complex has {count} curves)")]
    CurveId { id: usize, count: usize },
    #[error("malformed complex: {0}")]
    Malformed(String),
}

/// `a·v1 + b·v2` with exact dyadic coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct LatticePoint {
    pub a: Dyadic,
    pub b: Dyadic,
}

impl LatticePoint {
    pub const V0: LatticePoint = LatticePoint { a: Dyadic::ZERO, b: Dyadic::ZERO };
    pub const V1: LatticePoint = LatticePoint { a: Dyadic::ONE, b: Dyadic::ZERO };
    pub const V2: LatticePoint = LatticePoint { a: Dyadic::ZERO, b: Dyadic::ONE };

    pub fn new(a: Dyadic, b: Dyadic) -> Self {
        LatticePoint { a, b }
    }

    /// The corner `v_r` of the unit triangle.
    pub fn corner(r: usize) -> Result<Self, GasketError> {
        match r {
            0 => Ok(Self::V0),
            1 => Ok(Self::V1),
            2 => Ok(Self::V2),
            _ => Err(GasketError::Corner(r)),
        }
    }

    /// Embedding in ℝ², computed in floating point.
    pub fn euclidean(&self) -> [f64; 2] {
        let a = self.a.to_f64();
        let b = self.b.to_f64();
        [a + b / 2.0, b * 3f64.sqrt() / 2.0]
    }

    /// Exact squared Euclidean distance: `|Δa·v1 + Δb·v2|² = Δa² + Δa·Δb + Δb²`.
    pub fn squared_distance(&self, other: &Self) -> Dyadic {
        let da = self.a - other.a;
        let db = self.b - other.b;
        da * da + da * db + db * db
    }

    pub fn midpoint(&self, other: &Self) -> Self {
        LatticePoint { a: (self.a + other.a).half(), b: (self.b + other.b).half() }
    }

    /// `self + t (other - self)`.
    pub fn lerp(&self, other: &Self, t: Dyadic) -> Self {
        LatticePoint {
            a: self.a + (other.a - self.a) * t,
            b: self.b + (other.b - self.b) * t,
        }
    }

    fn max_exponent(&self) -> u32 {
        self.a.exponent().max(self.b.exponent())
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}·v1 + {}·v2)", self.a, self.b)
    }
}

/// Applies `T_r(p) = (p + v_r) / 2` exactly.
pub fn similitude_apply(r: usize, p: &LatticePoint) -> Result<LatticePoint, GasketError> {
    let v = LatticePoint::corner(r)?;
    let q = p.midpoint(&v);
    if q.max_exponent() > DEFAULT_LEVEL_CAP {
        return Err(GasketError::LevelCap { level: q.max_exponent(), cap: DEFAULT_LEVEL_CAP });
    }
    Ok(q)
}

pub fn pow3(n: u32) -> usize {
    3usize.pow(n)
}

/// `B_n = (3/2)(3^{n+1} − 1)`: number of curves of level at most `n`.
pub fn curve_count(n: u32) -> usize {
    3 * (pow3(n + 1) - 1) / 2
}

/// `|V_n| = (3^{n+1} + 3) / 2`.
pub fn vertex_count(n: u32) -> usize {
    (pow3(n + 1) + 3) / 2
}

/// Standard parametrization index `κ(n,r) = 3(Σ_{k=0}^{n-1} 3^k + r)`.
pub fn kappa(n: u32, r: usize) -> Result<usize, GasketError> {
    if n > DEFAULT_LEVEL_CAP {
        return Err(GasketError::LevelCap { level: n, cap: DEFAULT_LEVEL_CAP });
    }
    let count = pow3(n);
    if r >= count {
        return Err(GasketError::TriangleIndex { level: n, index: r, count });
    }
    Ok(3 * ((pow3(n) - 1) / 2 + r))
}

/// Inverse of the parametrization: `id ↦ (n, r, kind)`.
pub fn locate_curve(id: usize) -> (u32, usize, CurveKind) {
    let mut n = 0u32;
    while curve_count(n) <= id {
        n += 1;
    }
    let base = id / 3 - (pow3(n) - 1) / 2;
    (n, base, CurveKind::from_offset(id % 3))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Bottom,
    Right,
    Left,
}

impl CurveKind {
    pub const ALL: [CurveKind; 3] = [CurveKind::Bottom, CurveKind::Right, CurveKind::Left];

    pub fn offset(self) -> usize {
        match self {
            CurveKind::Bottom => 0,
            CurveKind::Right => 1,
            CurveKind::Left => 2,
        }
    }

    pub fn from_offset(o: usize) -> Self {
        Self::ALL[o % 3]
    }

    /// Triangle corners at the start and end of the edge. Bottom runs left to
    /// right, right runs bottom to top, left runs top to bottom.
    pub fn corners(self) -> [usize; 2] {
        match self {
            CurveKind::Bottom => [0, 1],
            CurveKind::Right => [1, 2],
            CurveKind::Left => [2, 0],
        }
    }

    /// Corner not on this edge.
    pub fn opposite(self) -> usize {
        match self {
            CurveKind::Bottom => 2,
            CurveKind::Right => 0,
            CurveKind::Left => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    pub level: u32,
    /// Zero-based; the one-based index `j` is `index + 1`.
    pub index: usize,
    pub vertices: [LatticePoint; 3],
}

impl Triangle {
    pub fn side_squared(&self) -> [Dyadic; 3] {
        let [p0, p1, p2] = &self.vertices;
        [p0.squared_distance(p1), p1.squared_distance(p2), p2.squared_distance(p0)]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub id: usize,
    pub level: u32,
    pub triangle: usize,
    pub kind: CurveKind,
    /// Indices into the deduplicated vertex array, in parametrization order.
    pub endpoints: [usize; 2],
    pub length: Dyadic,
}

#[derive(Clone, Debug)]
pub struct PrefractalComplex {
    max_level: u32,
    vertices: Vec<LatticePoint>,
    vertex_index: HashMap<LatticePoint, usize>,
    /// `level_sizes[k] = |V_k|`; `V_k` is the prefix of `vertices` of that length.
    level_sizes: Vec<usize>,
    triangles: Vec<Vec<[usize; 3]>>,
    curves: Vec<Curve>,
}

pub fn build_gasket(max_level: u32) -> Result<PrefractalComplex, GasketError> {
    build_gasket_capped(max_level, DEFAULT_LEVEL_CAP)
}

pub fn build_gasket_capped(max_level: u32, cap: u32) -> Result<PrefractalComplex, GasketError> {
    if max_level > cap || cap > DEFAULT_LEVEL_CAP {
        return Err(GasketError::LevelCap { level: max_level, cap: cap.min(DEFAULT_LEVEL_CAP) });
    }
    let mut vertices = vec![LatticePoint::V0, LatticePoint::V1, LatticePoint::V2];
    let mut vertex_index: HashMap<LatticePoint, usize> =
        vertices.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let mut level_sizes = vec![3];
    let mut triangles: Vec<Vec<[usize; 3]>> = vec![vec![[0, 1, 2]]];

    for n in 0..max_level {
        let prev_len = level_sizes[n as usize];
        // V_{n+1} = ∪_r T_r V_n, listed with V_n first so indices stay stable.
        let mut images = Vec::with_capacity(3 * prev_len);
        for r in 0..3 {
            for p in &vertices[..prev_len] {
                images.push(similitude_apply(r, p)?);
            }
        }
        let image_set: HashSet<LatticePoint> = images.iter().copied().collect();
        if let Some(missing) = vertices[..prev_len].iter().find(|p| !image_set.contains(p)) {
            return Err(GasketError::Malformed(format!(
                "vertex {missing} of V_{n} is not in V_{}",
                n + 1
            )));
        }
        for p in images {
            if let std::collections::hash_map::Entry::Vacant(e) = vertex_index.entry(p) {
                e.insert(vertices.len());
                vertices.push(p);
            }
        }
        level_sizes.push(vertices.len());

        let prev = &triangles[n as usize];
        let mut next = Vec::with_capacity(3 * prev.len());
        for r in 0..3 {
            for tri in prev {
                let mut out = [0usize; 3];
                for (slot, &vi) in out.iter_mut().zip(tri.iter()) {
                    let q = similitude_apply(r, &vertices[vi])?;
                    *slot = vertex_index[&q];
                }
                next.push(out);
            }
        }
        triangles.push(next);
    }

    let mut curves = Vec::with_capacity(curve_count(max_level));
    for (n, level) in triangles.iter().enumerate() {
        let length = Dyadic::pow2_neg(n as u32);
        for (r, tri) in level.iter().enumerate() {
            for kind in CurveKind::ALL {
                let [c0, c1] = kind.corners();
                curves.push(Curve {
                    id: curves.len(),
                    level: n as u32,
                    triangle: r,
                    kind,
                    endpoints: [tri[c0], tri[c1]],
                    length,
                });
            }
        }
    }

    Ok(PrefractalComplex { max_level, vertices, vertex_index, level_sizes, triangles, curves })
}

impl PrefractalComplex {
    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    /// The deduplicated vertex set `V_maxLevel`.
    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    /// `V_k` as a prefix of [`Self::vertices`].
    pub fn vertices_at(&self, k: u32) -> &[LatticePoint] {
        &self.vertices[..self.level_sizes[k as usize]]
    }

    pub fn vertex_count_at(&self, k: u32) -> usize {
        self.level_sizes[k as usize]
    }

    pub fn index_of(&self, p: &LatticePoint) -> Option<usize> {
        self.vertex_index.get(p).copied()
    }

    pub fn triangle_count(&self, level: u32) -> usize {
        self.triangles[level as usize].len()
    }

    pub fn triangle_indices(&self, level: u32) -> &[[usize; 3]] {
        &self.triangles[level as usize]
    }

    pub fn triangle(&self, level: u32, index: usize) -> Result<Triangle, GasketError> {
        if level > self.max_level {
            return Err(GasketError::LevelCap { level, cap: self.max_level });
        }
        let tris = &self.triangles[level as usize];
        let tri = tris.get(index).ok_or(GasketError::TriangleIndex {
            level,
            index,
            count: tris.len(),
        })?;
        Ok(Triangle { level, index, vertices: tri.map(|i| self.vertices[i]) })
    }

    /// All curves with id `< B_maxLevel`, ordered by id.
    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn curve(&self, id: usize) -> Result<&Curve, GasketError> {
        self.curves.get(id).ok_or(GasketError::CurveId { id, count: self.curves.len() })
    }

    /// Curves of exactly level `k`.
    pub fn curves_at_level(&self, k: u32) -> &[Curve] {
        let lo = if k == 0 { 0 } else { curve_count(k - 1) };
        &self.curves[lo..curve_count(k)]
    }

    /// The two level-`(n+1)` curves whose union is curve `id`, in
    /// parametrization order, or `None` at the finest level.
    pub fn curve_halves(&self, id: usize) -> Option<[usize; 2]> {
        let c = self.curves.get(id)?;
        if c.level >= self.max_level {
            return None;
        }
        let [c0, c1] = c.kind.corners();
        let child = |corner: usize| {
            kappa(c.level + 1, 3 * c.triangle + corner).expect("child in range") + c.kind.offset()
        };
        Some([child(c0), child(c1)])
    }

    /// Vertex indices of the midpoints of the bottom, right and left edges of
    /// triangle `(level, r)`; these are level-`(level+1)` vertices.
    pub fn edge_midpoints(&self, level: u32, r: usize) -> Option<[usize; 3]> {
        if level >= self.max_level {
            return None;
        }
        let tri = self.triangles[level as usize].get(r)?;
        let mut out = [0; 3];
        for (slot, kind) in out.iter_mut().zip(CurveKind::ALL) {
            let [c0, c1] = kind.corners();
            let m = self.vertices[tri[c0]].midpoint(&self.vertices[tri[c1]]);
            *slot = self.vertex_index[&m];
        }
        Some(out)
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            schema_version: SCHEMA_VERSION,
            geometry: "sg".into(),
            max_level: self.max_level,
            vertices: self
                .vertices
                .iter()
                .map(|p| [p.a.numerator(), p.a.exponent() as i64, p.b.numerator(), p.b.exponent() as i64])
                .collect(),
            curves: self
                .curves
                .iter()
                .map(|c| CurveJson {
                    id: c.id,
                    level: c.level,
                    kind: c.kind,
                    endpoints: c.endpoints,
                    length: CurveLength::Exact(c.length),
                    quadrature: None,
                })
                .collect(),
            triangles: self
                .triangles
                .iter()
                .enumerate()
                .flat_map(|(n, tris)| {
                    tris.iter().enumerate().map(move |(r, t)| TriangleJson {
                        level: n as u32,
                        index: r,
                        vertices: *t,
                    })
                })
                .collect(),
            harmonic: None,
        }
    }

    /// Rebuilds the complex at the recorded level and checks that the file
    /// describes exactly that complex.
    pub fn from_json(json: &ComplexJson) -> Result<Self, GasketError> {
        let built = build_gasket(json.max_level)?;
        let reference = built.to_json();
        if reference.vertices != json.vertices {
            return Err(GasketError::Malformed("vertex list differs".into()));
        }
        if reference.triangles != json.triangles {
            return Err(GasketError::Malformed("triangle list differs".into()));
        }
        if reference.curves.len() != json.curves.len()
            || reference.curves.iter().zip(&json.curves).any(|(a, b)| {
                a.id != b.id || a.level != b.level || a.kind != b.kind || a.endpoints != b.endpoints
            })
        {
            return Err(GasketError::Malformed("curve list differs".into()));
        }
        Ok(built)
    }
}

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ComplexJson {
    pub schema_version: u32,
    pub geometry: String,
    pub max_level: u32,
    /// `[aNum, aExp, bNum, bExp]` per vertex.
    pub vertices: Vec<[i64; 4]>,
    pub curves: Vec<CurveJson>,
    pub triangles: Vec<TriangleJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub harmonic: Option<HarmonicVerticesJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CurveJson {
    pub id: usize,
    pub level: u32,
    pub kind: CurveKind,
    pub endpoints: [usize; 2],
    pub length: CurveLength,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureMeta>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveLength {
    Exact(Dyadic),
    Float(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QuadratureMeta {
    pub depth: u32,
    pub last_increment: f64,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleJson {
    pub level: u32,
    pub index: usize,
    pub vertices: [usize; 3],
}

/// Exact harmonic coordinates: `u_j(v) = numerators[v][j] / denominator`,
/// written as decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HarmonicVerticesJson {
    pub denominator: String,
    pub numerators: Vec<[String; 3]>,
    pub tolerance: f64,
}
