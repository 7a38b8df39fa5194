//! Finitely supported vectors of `H_∞ = ⊕_j L²(C_j)` in the eigenbasis of `D`.
//!
//! Every operator here (`D`, `exp(itD)`, the projections onto `H_n`) is
//! diagonal in the basis `e_{j,k}`, so vectors are sparse coefficient maps.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gasket::{curve_count, locate_curve};
use crate::scalar::CompensatedSum;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HilbertError {
    #[error("curve {curve} is outside H_{level}")]
    OutsideLevel { curve: usize, level: u32 },
    #[error("no length known for curve {0}")]
    UnknownCurve(usize),
    #[error("epsilon must be positive and finite, got {0}")]
    Epsilon(f64),
    #[error("no level drops only curves shorter than {0}")]
    NoLevel(f64),
}

/// Lengths `λ_j` of the curves carrying the Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub enum CurveLengths {
    /// Euclidean gasket: `λ_j = 2^{-level(j)}` for every id.
    Sierpinski,
    /// Explicit table, e.g. harmonic lengths; ids beyond it are unknown.
    Explicit(Vec<f64>),
}

impl CurveLengths {
    pub fn length(&self, j: usize) -> Result<f64, HilbertError> {
        match self {
            CurveLengths::Sierpinski => Ok(2f64.powi(-(locate_curve(j).0 as i32))),
            CurveLengths::Explicit(v) => v.get(j).copied().ok_or(HilbertError::UnknownCurve(j)),
        }
    }

    /// Longest curve with id `≥ B_n`, i.e. the longest one `project(·, n)` drops.
    pub fn longest_dropped(&self, n: u32) -> f64 {
        match self {
            CurveLengths::Sierpinski => 2f64.powi(-(n as i32 + 1)),
            CurveLengths::Explicit(v) => v.iter().skip(curve_count(n)).copied().fold(0.0, f64::max),
        }
    }

    /// Smallest `n` whose dropped curves all satisfy `λ_j < πε/2`.
    pub fn level_for(&self, epsilon: f64) -> Result<u32, HilbertError> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(HilbertError::Epsilon(epsilon));
        }
        let target = PI * epsilon / 2.0;
        (0..60).find(|&n| self.longest_dropped(n) < target).ok_or(HilbertError::NoLevel(target))
    }
}

/// Eigenvalue of `D` on `e_{j,k}`.
pub fn eigenvalue(length: f64, k: i64) -> f64 {
    PI * (k as f64 + 0.5) / length
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModeVector {
    entries: BTreeMap<(usize, i64), Complex64>,
}

impl ModeVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(curve: usize, mode: i64) -> Self {
        let mut v = Self::new();
        v.set(curve, mode, Complex64::new(1.0, 0.0));
        v
    }

    pub fn set(&mut self, curve: usize, mode: i64, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            self.entries.remove(&(curve, mode));
        } else {
            self.entries.insert((curve, mode), c);
        }
    }

    pub fn get(&self, curve: usize, mode: i64) -> Complex64 {
        self.entries.get(&(curve, mode)).copied().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, i64, Complex64)> + '_ {
        self.entries.iter().map(|(&(j, k), &c)| (j, k, c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.entries.values().map(|c| c.norm_sqr()).collect::<CompensatedSum>().value().sqrt()
    }

    /// `‖Dξ‖`.
    pub fn dirac_norm(&self, lengths: &CurveLengths) -> Result<f64, HilbertError> {
        let mut s = CompensatedSum::new();
        for (&(j, k), c) in &self.entries {
            s.add(eigenvalue(lengths.length(j)?, k).powi(2) * c.norm_sqr());
        }
        Ok(s.value().sqrt())
    }

    /// Fails on the smallest curve id outside `H_n`.
    pub fn check_level(&self, level: u32) -> Result<(), HilbertError> {
        let bound = curve_count(level);
        match self.entries.keys().find(|(j, _)| *j >= bound) {
            Some(&(curve, _)) => Err(HilbertError::OutsideLevel { curve, level }),
            None => Ok(()),
        }
    }

    /// `DN_n(ξ) = ‖ξ‖ + ‖D_n ξ‖`; `level = None` is `DN_∞`.
    pub fn dn_norm(&self, lengths: &CurveLengths, level: Option<u32>) -> Result<f64, HilbertError> {
        if let Some(n) = level {
            self.check_level(n)?;
        }
        Ok(self.norm() + self.dirac_norm(lengths)?)
    }

    /// Orthogonal projection onto `H_n`: keeps curve ids `< B_n`.
    pub fn project(&self, n: u32) -> ModeVector {
        let bound = curve_count(n);
        ModeVector { entries: self.entries.range(..(bound, i64::MIN)).map(|(&k, &v)| (k, v)).collect() }
    }

    /// `exp(itD) ξ`.
    pub fn evolve(&self, t: f64, lengths: &CurveLengths) -> Result<ModeVector, HilbertError> {
        let mut entries = BTreeMap::new();
        for (&(j, k), &c) in &self.entries {
            let phase = Complex64::from_polar(1.0, t * eigenvalue(lengths.length(j)?, k));
            entries.insert((j, k), c * phase);
        }
        Ok(ModeVector { entries })
    }

    pub fn scale(&self, a: Complex64) -> ModeVector {
        let mut v = ModeVector::new();
        for (&(j, k), &c) in &self.entries {
            v.set(j, k, c * a);
        }
        v
    }

    pub fn add(&self, other: &ModeVector) -> ModeVector {
        let mut v = self.clone();
        for (&(j, k), &c) in &other.entries {
            let sum = v.get(j, k) + c;
            v.set(j, k, sum);
        }
        v
    }

    pub fn sub(&self, other: &ModeVector) -> ModeVector {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `⟨ξ, η⟩`, linear in the first argument.
    pub fn inner(&self, other: &ModeVector) -> Complex64 {
        let (mut re, mut im) = (CompensatedSum::new(), CompensatedSum::new());
        for (key, &a) in &self.entries {
            if let Some(&b) = other.entries.get(key) {
                let p = a * b.conj();
                re.add(p.re);
                im.add(p.im);
            }
        }
        Complex64::new(re.value(), im.value())
    }

    pub fn to_json(&self) -> ModeVectorJson {
        ModeVectorJson {
            entries: self.entries().map(|(curve, mode, c)| ModeEntry { curve, mode, re: c.re, im: c.im }).collect(),
        }
    }

    pub fn from_json(json: &ModeVectorJson) -> ModeVector {
        let mut v = ModeVector::new();
        for e in &json.entries {
            let sum = v.get(e.curve, e.mode) + Complex64::new(e.re, e.im);
            v.set(e.curve, e.mode, sum);
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeEntry {
    pub curve: usize,
    pub mode: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeVectorJson {
    pub entries: Vec<ModeEntry>,
}

/// Random vector with `DN_∞ = 1`: `terms` coefficients with components in
/// `[−1, 1]`, modes `|k| ≤ max_mode`, on curves whose levels cycle through
/// `0..=max_level` so at least three levels are hit when `max_level ≥ 2`.
pub fn random_mode_vector(
    rng: &mut impl Rng,
    lengths: &CurveLengths,
    max_level: u32,
    max_mode: i64,
    terms: usize,
) -> Result<ModeVector, HilbertError> {
    let mut v = ModeVector::new();
    for i in 0..terms {
        let level = (i as u32) % (max_level + 1);
        let lo = if level == 0 { 0 } else { curve_count(level - 1) };
        let j = rng.gen_range(lo..curve_count(level));
        let k = rng.gen_range(-max_mode..=max_mode);
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let sum = v.get(j, k) + c;
        v.set(j, k, sum);
    }
    let dn = v.dn_norm(lengths, None)?;
    Ok(if dn > 0.0 { v.scale(Complex64::new(1.0 / dn, 0.0)) } else { v })
}

/// `T_n(ξ, η) = max{DN_∞(ξ), DN_n(η), ‖ξ − η‖/ε}`.
pub fn tunnel_bound(
    xi: &ModeVector,
    eta: &ModeVector,
    lengths: &CurveLengths,
    n: u32,
    epsilon: f64,
) -> Result<f64, HilbertError> {
    Ok(xi
        .dn_norm(lengths, None)?
        .max(eta.dn_norm(lengths, Some(n))?)
        .max(xi.sub(eta).norm() / epsilon))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CovariantConfig {
    pub level: u32,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    /// Number of points of the uniform grid on `[−1/ε, 1/ε]`.
    pub time_points: usize,
    pub max_mode: i64,
    pub terms: usize,
    /// Random vectors use curves of level up to `level + extra_levels`.
    pub extra_levels: u32,
}

impl CovariantConfig {
    pub fn new(level: u32, epsilon: f64, trials: usize, seed: u64) -> Self {
        CovariantConfig { level, epsilon, trials, seed, time_points: 201, max_mode: 8, terms: 12, extra_levels: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CovariantReport {
    pub config: CovariantConfig,
    /// Longest dropped curve and the threshold `πε/2` it is compared against.
    pub longest_dropped: f64,
    pub threshold: f64,
    pub level_meets_threshold: bool,
    /// `max ‖ξ − project(ξ, n)‖` over trials.
    pub max_tail: f64,
    /// `max sup_t ‖U(t)ξ − U(t)η‖` over trials.
    pub max_reach: f64,
    /// `max |sup_t ‖U(t)ξ − U(t)η‖ − ‖ξ − η‖|` over trials.
    pub max_reach_deviation: f64,
    /// Trials with `‖ξ − η‖ ≥ ε`.
    pub tail_violations: usize,
    /// Pairs failing `|⟨ξ,ξ′⟩ − ⟨η,η′⟩| ≤ 2ε T_n(ξ,η) T_n(ξ′,η′)`.
    pub leibniz_violations: usize,
    /// Largest `|⟨ξ,ξ′⟩ − ⟨η,η′⟩| / (2ε T T′)` seen.
    pub max_leibniz_ratio: f64,
}

struct TrialOutcome {
    tail: f64,
    reach: f64,
    deviation: f64,
    leibniz_ratio: f64,
}

/// Random `DN_∞`-normalized vectors against their projections onto `H_n`,
/// evolved over the time grid, plus the inner-product Leibniz check on
/// consecutive pairs. Trial `i` uses its own stream of the seeded generator,
/// so results do not depend on the thread count.
pub fn covariant_reach_witness(
    config: &CovariantConfig,
    lengths: &CurveLengths,
) -> Result<CovariantReport, HilbertError> {
    let eps = config.epsilon;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(HilbertError::Epsilon(eps));
    }
    let n = config.level;
    let horizon = 1.0 / eps;
    let times: Vec<f64> = match config.time_points {
        0 | 1 => vec![0.0],
        m => (0..m).map(|i| -horizon + 2.0 * horizon * i as f64 / (m - 1) as f64).collect(),
    };
    let max_level = n + config.extra_levels;
    let outcomes: Vec<TrialOutcome> = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i as u64);
            let xi = random_mode_vector(&mut rng, lengths, max_level, config.max_mode, config.terms)?;
            let xi2 = random_mode_vector(&mut rng, lengths, max_level, config.max_mode, config.terms)?;
            let eta = xi.project(n);
            let eta2 = xi2.project(n);
            let tail = xi.sub(&eta).norm();
            let mut reach: f64 = 0.0;
            for &t in &times {
                let d = xi.evolve(t, lengths)?.sub(&eta.evolve(t, lengths)?).norm();
                reach = reach.max(d);
            }
            let gap = (xi.inner(&xi2) - eta.inner(&eta2)).norm();
            let bound = 2.0
                * eps
                * tunnel_bound(&xi, &eta, lengths, n, eps)?
                * tunnel_bound(&xi2, &eta2, lengths, n, eps)?;
            let leibniz_ratio = if bound > 0.0 { gap / bound } else if gap == 0.0 { 0.0 } else { f64::INFINITY };
            Ok(TrialOutcome { tail, reach, deviation: (reach - tail).abs(), leibniz_ratio })
        })
        .collect::<Result<_, HilbertError>>()?;
    let longest = lengths.longest_dropped(n);
    let threshold = PI * eps / 2.0;
    let fold = |f: fn(&TrialOutcome) -> f64| outcomes.iter().map(f).fold(0.0, f64::max);
    Ok(CovariantReport {
        config: config.clone(),
        longest_dropped: longest,
        threshold,
        level_meets_threshold: longest < threshold,
        max_tail: fold(|o| o.tail),
        max_reach: fold(|o| o.reach),
        max_reach_deviation: fold(|o| o.deviation),
        tail_violations: outcomes.iter().filter(|o| o.tail >= eps).count(),
        leibniz_violations: outcomes.iter().filter(|o| o.leibniz_ratio > 1.0).count(),
        max_leibniz_ratio: fold(|o| o.leibniz_ratio),
    })
}
