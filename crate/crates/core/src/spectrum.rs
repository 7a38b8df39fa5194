//! Spectra of the curve Dirac operators.
//!
//! On a curve of length `λ` the operator `(1/λ)(∂ + π/2)` has eigenvalues
//! `π(k + ½)/λ`, `k ∈ ℤ`. Counting is done with closed-form floors and never
//! materializes eigenvalues; floors near a discontinuity are decided with
//! exact rational arithmetic against two-sided bounds on `π`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest number of eigenvalues [`enumerate`] will materialize.
pub const ENUMERATION_GUARD: u128 = 10_000_000;
/// Absolute accuracy of the per-curve mode sums in [`zeta_partial`].
pub const ZETA_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_GRID_SIZE: usize = 40;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("curve length must be positive and finite, got {0}")]
    Length(f64),
    #[error("multiplicity must be at least 1")]
    Multiplicity,
    #[error("cutoff must be nonnegative and finite, got {0}")]
    Cutoff(f64),
    #[error("cannot decide floor of Λλ/π + 1/2 at Λλ = {0}: too close to a half-integer")]
    Ambiguous(f64),
    #[error("enumeration would produce {0} eigenvalues, above the guard")]
    TooMany(u128),
    #[error("degenerate grid: {0}")]
    Grid(String),
    #[error("zeta exponent must exceed 1, got {0}")]
    Exponent(f64),
    #[error("the infinite gasket spectrum needs a curve cap for zeta sums")]
    Unbounded,
    #[error("count overflow")]
    Overflow,
}

/// `multiplicity` curves of the same `length`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthClass {
    pub length: f64,
    pub multiplicity: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum SpectrumSpec {
    /// An explicit finite multiset of curve lengths.
    Finite { classes: Vec<LengthClass> },
    /// All levels of the Euclidean gasket: `3^{m+1}` curves of length `2^{-m}`
    /// for every `m ≥ 0`, truncated per cutoff where the terms vanish.
    SierpinskiInfinite,
}

impl SpectrumSpec {
    pub fn finite(classes: Vec<LengthClass>) -> Result<Self, SpectrumError> {
        for c in &classes {
            check_length(c.length)?;
            if c.multiplicity == 0 {
                return Err(SpectrumError::Multiplicity);
            }
        }
        Ok(SpectrumSpec::Finite { classes })
    }

    pub fn single(length: f64) -> Result<Self, SpectrumError> {
        SpectrumSpec::finite(vec![LengthClass { length, multiplicity: 1 }])
    }

    /// The Euclidean `SG_n` operator: levels `0..=n`.
    pub fn sierpinski(n: u32) -> Self {
        SpectrumSpec::Finite { classes: (0..=n).map(sierpinski_class).collect() }
    }

    /// One class per curve, lengths taken as given.
    pub fn from_lengths(lengths: &[f64]) -> Result<Self, SpectrumError> {
        SpectrumSpec::finite(lengths.iter().map(|&length| LengthClass { length, multiplicity: 1 }).collect())
    }

    /// Classes that can contribute eigenvalues of modulus `≤ cutoff`.
    pub fn classes_for(&self, cutoff: f64) -> Vec<LengthClass> {
        match self {
            SpectrumSpec::Finite { classes } => classes.clone(),
            SpectrumSpec::SierpinskiInfinite => {
                // The smallest eigenvalue on level m is π 2^{m-1}; stop once it exceeds the cutoff.
                (0..)
                    .take_while(|&m| m < 120 && PI * 2f64.powi(m as i32 - 1) <= cutoff * (1.0 + 1e-9))
                    .map(sierpinski_class)
                    .collect()
            }
        }
    }

    /// The first `cap` classes (levels, for the infinite gasket).
    pub fn truncated(&self, cap: usize) -> Vec<LengthClass> {
        match self {
            SpectrumSpec::Finite { classes } => classes.iter().take(cap).copied().collect(),
            SpectrumSpec::SierpinskiInfinite => (0..cap as u32).map(sierpinski_class).collect(),
        }
    }
}

fn sierpinski_class(m: u32) -> LengthClass {
    LengthClass { length: 2f64.powi(-(m as i32)), multiplicity: 3u128.pow(m + 1) }
}

fn check_length(l: f64) -> Result<(), SpectrumError> {
    if l > 0.0 && l.is_finite() {
        Ok(())
    } else {
        Err(SpectrumError::Length(l))
    }
}

fn check_cutoff(c: f64) -> Result<(), SpectrumError> {
    if c >= 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(SpectrumError::Cutoff(c))
    }
}

/// Rational bounds `PI_LO < π < PI_HI` (20 significant digits).
fn pi_bounds() -> (BigRational, BigRational) {
    let den = BigInt::from(10u64).pow(19);
    let lo = BigInt::parse_bytes(b"31415926535897932384", 10).unwrap();
    let hi = BigInt::parse_bytes(b"31415926535897932385", 10).unwrap();
    (BigRational::new(lo, den.clone()), BigRational::new(hi, den))
}

fn floor_big(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}

/// `⌊Λλ/π + ½⌋`. Far from a discontinuity the float value decides; near one
/// the exact product `Λλ` is compared against rational bounds on `π`.
fn floor_count(cutoff: f64, length: f64) -> Result<u128, SpectrumError> {
    let y = cutoff * length / PI + 0.5;
    let f = y.floor();
    let margin = 1e-9 * y.max(1.0);
    if y - f > margin && (f + 1.0) - y > margin {
        return f.to_u128().ok_or(SpectrumError::Overflow);
    }
    let exact = BigRational::from_f64(cutoff).ok_or(SpectrumError::Cutoff(cutoff))?
        * BigRational::from_f64(length).ok_or(SpectrumError::Length(length))?;
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let (lo, hi) = pi_bounds();
    let upper = floor_big(&(&exact / &lo + &half));
    let lower = floor_big(&(&exact / &hi + &half));
    if upper != lower {
        return Err(SpectrumError::Ambiguous(cutoff * length));
    }
    upper.to_u128().ok_or(SpectrumError::Overflow)
}

/// Number of `k ∈ ℤ` with `|π(k+½)/λ| ≤ Λ`: `2⌊Λλ/π + ½⌋`.
pub fn interval_count(length: f64, cutoff: f64) -> Result<u128, SpectrumError> {
    check_length(length)?;
    check_cutoff(cutoff)?;
    Ok(2 * floor_count(cutoff, length)?)
}

/// Eigenvalues of `(1/λ)D̸` in `[−Λ, Λ]`, sorted.
pub fn interval_spectrum(length: f64, cutoff: f64) -> Result<Vec<f64>, SpectrumError> {
    let count = interval_count(length, cutoff)?;
    if count > ENUMERATION_GUARD {
        return Err(SpectrumError::TooMany(count));
    }
    let half = (count / 2) as i64;
    Ok((-half..half).map(|k| mode_eigenvalue(length, k)).collect())
}

/// `π(k + ½)/λ`.
pub fn mode_eigenvalue(length: f64, k: i64) -> f64 {
    PI * (k as f64 + 0.5) / length
}

/// `N(Λ)`: eigenvalues of modulus at most `Λ`, with multiplicity.
pub fn count(spec: &SpectrumSpec, cutoff: f64) -> Result<u128, SpectrumError> {
    check_cutoff(cutoff)?;
    spec.classes_for(cutoff)
        .par_iter()
        .map(|c| {
            interval_count(c.length, cutoff)?.checked_mul(c.multiplicity).ok_or(SpectrumError::Overflow)
        })
        .try_reduce(|| 0, |a, b| a.checked_add(b).ok_or(SpectrumError::Overflow))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CountRow {
    pub cutoff: f64,
    pub count: u128,
}

pub fn counting_function(spec: &SpectrumSpec, grid: &[f64]) -> Result<Vec<CountRow>, SpectrumError> {
    if grid.iter().any(|&x| !(x > 0.0 && x.is_finite())) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SpectrumError::Grid("cutoffs must be positive and strictly increasing".into()));
    }
    grid.iter().map(|&cutoff| Ok(CountRow { cutoff, count: count(spec, cutoff)? })).collect()
}

pub fn counting_csv(rows: &[CountRow]) -> String {
    let mut out = String::from("lambda,count\n");
    for r in rows {
        out.push_str(&format!("{:?},{}\n", r.cutoff, r.count));
    }
    out
}

/// `n` points log-uniformly spaced from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, SpectrumError> {
    if n < 2 || !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(SpectrumError::Grid(format!("need 0 < lo < hi and at least 2 points, got [{lo}, {hi}] x {n}")));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..n)
        .map(|i| match i {
            0 => lo,
            i if i == n - 1 => hi,
            i => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect())
}

/// One eigenvalue with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub value: f64,
    pub multiplicity: u128,
}

/// All eigenvalues of modulus `≤ cutoff`, sorted, equal values merged.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueEnumeration {
    pub cutoff: f64,
    pub eigenvalues: Vec<Eigenvalue>,
}

impl EigenvalueEnumeration {
    pub fn total(&self) -> u128 {
        self.eigenvalues.iter().map(|e| e.multiplicity).sum()
    }

    pub fn contains_zero(&self) -> bool {
        self.eigenvalues.iter().any(|e| e.value == 0.0)
    }

    /// Whether `+x` and `−x` occur with equal multiplicity for every `x`.
    pub fn is_symmetric(&self) -> bool {
        let n = self.eigenvalues.len();
        (0..n).all(|i| {
            let (a, b) = (self.eigenvalues[i], self.eigenvalues[n - 1 - i]);
            a.value == -b.value && a.multiplicity == b.multiplicity
        })
    }

    /// `N(Λ)` read off the materialized list.
    pub fn count_up_to(&self, cutoff: f64) -> u128 {
        self.eigenvalues.iter().filter(|e| e.value.abs() <= cutoff).map(|e| e.multiplicity).sum()
    }
}

pub fn enumerate(spec: &SpectrumSpec, cutoff: f64) -> Result<EigenvalueEnumeration, SpectrumError> {
    let total = count(spec, cutoff)?;
    if total > ENUMERATION_GUARD {
        return Err(SpectrumError::TooMany(total));
    }
    let mut all: Vec<Eigenvalue> = Vec::new();
    for c in spec.classes_for(cutoff) {
        for value in interval_spectrum(c.length, cutoff)? {
            all.push(Eigenvalue { value, multiplicity: c.multiplicity });
        }
    }
    all.sort_by(|a, b| a.value.total_cmp(&b.value));
    let mut merged: Vec<Eigenvalue> = Vec::with_capacity(all.len());
    for e in all {
        match merged.last_mut() {
            Some(last) if last.value == e.value => last.multiplicity += e.multiplicity,
            _ => merged.push(e),
        }
    }
    Ok(EigenvalueEnumeration { cutoff, eigenvalues: merged })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DimensionFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub grid: Vec<f64>,
    pub counts: Vec<u128>,
    /// `log N − (intercept + slope · log Λ)` per grid point.
    pub residuals: Vec<f64>,
}

/// Unweighted least squares of `log N(Λ)` against `log Λ` on a log-uniform grid.
pub fn dimension_fit(
    spec: &SpectrumSpec,
    lo: f64,
    hi: f64,
    grid_size: usize,
) -> Result<DimensionFit, SpectrumError> {
    if lo < PI {
        return Err(SpectrumError::Grid(format!("lower cutoff {lo} is below π")));
    }
    if grid_size < 3 {
        return Err(SpectrumError::Grid("at least 3 grid points are needed".into()));
    }
    let grid = log_grid(lo, hi, grid_size)?;
    let rows = counting_function(spec, &grid)?;
    if let Some(r) = rows.iter().find(|r| r.count == 0) {
        return Err(SpectrumError::Grid(format!("N({}) = 0, logarithm undefined", r.cutoff)));
    }
    let xs: Vec<f64> = grid.iter().map(|x| x.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| (r.count as f64).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y - (intercept + slope * x)).collect();
    let ssr: f64 = residuals.iter().map(|r| r * r).sum();
    let stderr = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(DimensionFit { slope, intercept, stderr, grid, counts: rows.iter().map(|r| r.count).collect(), residuals })
}

/// `Σ_{k≥0} (k+½)^{-s}` to absolute accuracy [`ZETA_TOLERANCE`]: direct sum
/// up to `K`, then the midpoint-rule tail `K^{1−s}/(s−1) − sK^{−s−1}/24`.
fn half_integer_zeta(s: f64) -> f64 {
    // The neglected remainder is far below the correction term; size K so the
    // correction itself is under the tolerance.
    let k = ((s / (24.0 * ZETA_TOLERANCE)).powf(1.0 / (s + 1.0))).ceil().max(16.0) as u64;
    let mut sum: crate::scalar::CompensatedSum = (0..k).rev().map(|j| (j as f64 + 0.5).powf(-s)).collect();
    let kf = k as f64;
    sum.add(kf.powf(1.0 - s) / (s - 1.0) - s * kf.powf(-s - 1.0) / 24.0);
    sum.value()
}

/// `Σ |μ|^{-s}` over all eigenvalues of the first `curve_cap` classes
/// (all classes of a finite spec when `None`).
pub fn zeta_partial(spec: &SpectrumSpec, s: f64, curve_cap: Option<usize>) -> Result<f64, SpectrumError> {
    if !(s > 1.0 && s.is_finite()) {
        return Err(SpectrumError::Exponent(s));
    }
    let classes = match (spec, curve_cap) {
        (_, Some(cap)) => spec.truncated(cap),
        (SpectrumSpec::Finite { classes }, None) => classes.clone(),
        (SpectrumSpec::SierpinskiInfinite, None) => return Err(SpectrumError::Unbounded),
    };
    let modes = half_integer_zeta(s);
    let mut total = crate::scalar::CompensatedSum::new();
    for c in classes {
        total.add(c.multiplicity as f64 * 2.0 * (c.length / PI).powf(s) * modes);
    }
    Ok(total.value())
}
