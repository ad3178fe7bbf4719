//! Periodic band-limited signals stored as a DC value plus a finite set of
//! harmonics.
//!
//! Every harmonic of order `n` is held as a pair of rms-scaled coefficients
//! `(a, b)` so that
//!
//! ```text
//! s_n(t) = √2 · (a · cos(nωt) + b · sin(nωt))
//! ```
//!
//! and the rms value of the harmonic is `√(a² + b²)`. The complex rms phasor
//! of the harmonic is `a − j·b`, which makes `Re{√2 · phasor · e^{jnωt}}`
//! reproduce `s_n(t)`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex rms phasor of one harmonic.
pub type Phasor = Complex64;

/// Coefficients with both magnitudes below this are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-12;

/// Default number of samples per fundamental period.
pub const DEFAULT_SAMPLES: usize = 4096;

/// Rms-scaled cosine/sine coefficients of a single harmonic.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Harmonic {
    pub cos: f64,
    pub sin: f64,
}

impl Harmonic {
    pub const fn new(cos: f64, sin: f64) -> Self {
        Self { cos, sin }
    }

    pub fn from_phasor(phasor: Phasor) -> Self {
        Self {
            cos: phasor.re,
            sin: -phasor.im,
        }
    }

    pub fn phasor(self) -> Phasor {
        Phasor::new(self.cos, -self.sin)
    }

    /// Rms value of the harmonic.
    pub fn rms(self) -> f64 {
        self.cos.hypot(self.sin)
    }

    fn is_negligible(self) -> bool {
        self.cos.abs() < PRUNE_THRESHOLD && self.sin.abs() < PRUNE_THRESHOLD
    }
}

/// A real `T`-periodic signal with finitely many harmonics.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSignal {
    omega: f64,
    dc: f64,
    terms: BTreeMap<u32, Harmonic>,
}

/// Uniform samples of one or more signals over one fundamental period.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

fn check_omega(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidFrequency(omega))
    }
}

impl HarmonicSignal {
    /// Builds a signal from a DC value and `(order, coefficients)` pairs.
    ///
    /// Orders must be positive and unique. Negligible terms are dropped.
    pub fn new<I>(omega: f64, dc: f64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, Harmonic)>,
    {
        check_omega(omega)?;
        if !dc.is_finite() {
            return Err(Error::InvalidSignal(format!("non-finite DC value {dc}")));
        }
        let mut map = BTreeMap::new();
        for (n, h) in terms {
            if n == 0 {
                return Err(Error::InvalidSignal(
                    "harmonic orders start at 1; use the DC value for order 0".into(),
                ));
            }
            if !(h.cos.is_finite() && h.sin.is_finite()) {
                return Err(Error::InvalidSignal(format!(
                    "non-finite coefficient at order {n}"
                )));
            }
            if map.insert(n, h).is_some() {
                return Err(Error::InvalidSignal(format!("duplicate harmonic order {n}")));
            }
        }
        Ok(Self::from_parts(omega, dc, map))
    }

    /// Convenience constructor from `(order, cos, sin)` triples.
    pub fn from_coefficients(omega: f64, dc: f64, terms: &[(u32, f64, f64)]) -> Result<Self> {
        Self::new(
            omega,
            dc,
            terms.iter().map(|&(n, a, b)| (n, Harmonic::new(a, b))),
        )
    }

    pub fn from_phasors<I>(omega: f64, dc: f64, phasors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, Phasor)>,
    {
        Self::new(
            omega,
            dc,
            phasors
                .into_iter()
                .map(|(n, p)| (n, Harmonic::from_phasor(p))),
        )
    }

    pub fn zero(omega: f64) -> Result<Self> {
        check_omega(omega)?;
        Ok(Self {
            omega,
            dc: 0.0,
            terms: BTreeMap::new(),
        })
    }

    pub fn dc_only(omega: f64, dc: f64) -> Result<Self> {
        Self::new(omega, dc, std::iter::empty())
    }

    // Callers guarantee a valid omega and orders ≥ 1.
    fn from_parts(omega: f64, dc: f64, mut terms: BTreeMap<u32, Harmonic>) -> Self {
        terms.retain(|_, h| !h.is_negligible());
        let dc = if dc.abs() < PRUNE_THRESHOLD { 0.0 } else { dc };
        Self { omega, dc, terms }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    pub fn dc(&self) -> f64 {
        self.dc
    }

    /// Harmonic `n ≥ 1`, if present.
    pub fn harmonic(&self, n: u32) -> Option<Harmonic> {
        self.terms.get(&n).copied()
    }

    /// Phasor of harmonic `n`, zero when absent.
    pub fn phasor(&self, n: u32) -> Phasor {
        self.harmonic(n).map(Harmonic::phasor).unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, Harmonic)> + '_ {
        self.terms.iter().map(|(&n, &h)| (n, h))
    }

    /// AC orders present (the harmonic set `N`).
    pub fn orders(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms.keys().copied()
    }

    /// AC orders plus `0` when the DC value is nonzero (the set `N′`).
    pub fn support(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.terms.len() + 1);
        if self.has_dc() {
            out.push(0);
        }
        out.extend(self.orders());
        out
    }

    pub fn has_dc(&self) -> bool {
        self.dc != 0.0
    }

    pub fn has_ac(&self) -> bool {
        !self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        !self.has_dc() && !self.has_ac()
    }

    pub fn max_order(&self) -> u32 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    /// The component of order `n` alone (`n = 0` selects the DC value).
    pub fn component(&self, n: u32) -> Self {
        if n == 0 {
            return Self {
                omega: self.omega,
                dc: self.dc,
                terms: BTreeMap::new(),
            };
        }
        Self {
            omega: self.omega,
            dc: 0.0,
            terms: self.terms.get_key_value(&n).map(|(&k, &h)| (k, h)).into_iter().collect(),
        }
    }

    /// Squared rms value by Parseval's identity.
    pub fn rms_squared(&self) -> f64 {
        self.dc * self.dc
            + self
                .terms
                .values()
                .map(|h| h.cos * h.cos + h.sin * h.sin)
                .sum::<f64>()
    }

    pub fn rms(&self) -> f64 {
        self.rms_squared().sqrt()
    }

    fn check_same_frequency(&self, other: &Self) -> Result<()> {
        if self.omega == other.omega {
            Ok(())
        } else {
            Err(Error::MismatchedFrequency {
                left: self.omega,
                right: other.omega,
            })
        }
    }

    /// Period average of the product `s1(t)·s2(t)`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_same_frequency(other)?;
        let ac: f64 = self
            .terms
            .iter()
            .filter_map(|(n, h)| other.terms.get(n).map(|g| h.cos * g.cos + h.sin * g.sin))
            .sum();
        Ok(self.dc * other.dc + ac)
    }

    /// `self + k·other`, the primitive behind `add` and `sub`.
    pub fn add_scaled(&self, other: &Self, k: f64) -> Result<Self> {
        self.check_same_frequency(other)?;
        let mut terms = self.terms.clone();
        for (&n, g) in &other.terms {
            let h = terms.entry(n).or_default();
            h.cos += k * g.cos;
            h.sin += k * g.sin;
        }
        Ok(Self::from_parts(self.omega, self.dc + k * other.dc, terms))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, -1.0)
    }

    pub fn scale(&self, k: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&n, h)| (n, Harmonic::new(k * h.cos, k * h.sin)))
            .collect();
        Self::from_parts(self.omega, k * self.dc, terms)
    }

    /// Time derivative: `(a, b) ↦ (nω·b, −nω·a)`, DC vanishes.
    pub fn differentiate(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&n, h)| {
                let w = f64::from(n) * self.omega;
                (n, Harmonic::new(w * h.sin, -w * h.cos))
            })
            .collect();
        Self::from_parts(self.omega, 0.0, terms)
    }

    /// Applies `f(order, phasor)` to every harmonic. DC is mapped by `dc`.
    pub fn map_phasors<F>(&self, dc: f64, mut f: F) -> Self
    where
        F: FnMut(u32, Phasor) -> Phasor,
    {
        let terms = self
            .terms
            .iter()
            .map(|(&n, h)| (n, Harmonic::from_phasor(f(n, h.phasor()))))
            .collect();
        Self::from_parts(self.omega, dc, terms)
    }

    /// Instantaneous value at time `t`.
    pub fn value_at(&self, t: f64) -> f64 {
        let wt = self.omega * t;
        self.dc
            + SQRT_2
                * self
                    .terms
                    .iter()
                    .map(|(&n, h)| {
                        let (s, c) = (f64::from(n) * wt).sin_cos();
                        h.cos * c + h.sin * s
                    })
                    .sum::<f64>()
    }

    /// Values at `t_k = k·T/M`, `k = 0..M`.
    ///
    /// Phases are reduced modulo the period in integer arithmetic so grid
    /// values stay exact to machine precision for any order.
    pub fn sample_values(&self, samples: usize) -> Result<Vec<f64>> {
        check_samples(samples, self.max_order())?;
        let m = samples as u64;
        Ok((0..m)
            .map(|k| {
                let ac: f64 = self
                    .terms
                    .iter()
                    .map(|(&n, h)| {
                        let phase = 2.0 * PI * ((u64::from(n) * k) % m) as f64 / m as f64;
                        let (s, c) = phase.sin_cos();
                        h.cos * c + h.sin * s
                    })
                    .sum();
                self.dc + SQRT_2 * ac
            })
            .collect())
    }

    pub fn sample(&self, samples: usize) -> Result<Waveform> {
        let values = self.sample_values(samples)?;
        Ok(Waveform {
            times: time_grid(self.period(), samples),
            values,
        })
    }
}

/// Uniform time grid over one period.
pub fn time_grid(period: f64, samples: usize) -> Vec<f64> {
    (0..samples)
        .map(|k| period * k as f64 / samples as f64)
        .collect()
}

/// Errors unless `samples > 2·max_order` (and at least one sample).
pub fn check_samples(samples: usize, max_order: u32) -> Result<()> {
    if samples == 0 || (samples as u64) <= 2 * u64::from(max_order) {
        Err(Error::TooFewSamples { samples, max_order })
    } else {
        Ok(())
    }
}
