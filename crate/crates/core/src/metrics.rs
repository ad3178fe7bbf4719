//! Scalar power quantities: Budeanu, Fryze, CPC and Iliovici powers, the
//! equivalent load admittance and per-harmonic measurements.
//!
//! Reactive quantities use `Q_n = Im{U_n · conj(I_n)}`, which is positive for
//! inductive (lagging) loads even though their susceptance `B_n` is negative.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::cpc::{self, Decomposition};
use crate::error::{Error, Result};
use crate::spectrum::{self, HarmonicSignal};

/// Negative `D_B²` radicands within this fraction of `S²` are clipped to 0.
pub const RADICAND_TOLERANCE: f64 = 1e-9;

/// `|B_e|` at or below this counts as resistive; same bound for `G_e`.
pub const CHARACTER_THRESHOLD: f64 = 1e-12;

/// `P = ⟨u, i⟩`.
pub fn active_power(u: &HarmonicSignal, i: &HarmonicSignal) -> Result<f64> {
    u.inner(i)
}

/// `S = ‖u‖·‖i‖`.
pub fn apparent_power(u: &HarmonicSignal, i: &HarmonicSignal) -> Result<f64> {
    if u.omega() != i.omega() {
        return Err(Error::MismatchedFrequency {
            left: u.omega(),
            right: i.omega(),
        });
    }
    Ok(u.rms() * i.rms())
}

pub fn power_factor(u: &HarmonicSignal, i: &HarmonicSignal) -> Result<f64> {
    let s = apparent_power(u, i)?;
    if s == 0.0 {
        return Err(Error::ZeroApparentPower);
    }
    Ok(active_power(u, i)? / s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budeanu {
    /// `Q_B = Σ U_n I_n sin φ_n`.
    pub reactive: f64,
    /// `D_B = √(S² − P² − Q_B²)`.
    pub distortion: f64,
}

fn harmonic_reactive(u: &HarmonicSignal, i: &HarmonicSignal, n: u32) -> f64 {
    (u.phasor(n) * i.phasor(n).conj()).im
}

/// Budeanu reactive and distortion power.
pub fn budeanu(u: &HarmonicSignal, i: &HarmonicSignal) -> Result<Budeanu> {
    let p = active_power(u, i)?;
    let s = apparent_power(u, i)?;
    let reactive: f64 = u.orders().map(|n| harmonic_reactive(u, i, n)).sum();
    let radicand = s * s - p * p - reactive * reactive;
    let distortion = if radicand >= 0.0 {
        radicand.sqrt()
    } else if radicand >= -RADICAND_TOLERANCE * (s * s).max(1.0) {
        0.0
    } else {
        return Err(Error::NumericalInconsistency(format!(
            "negative distortion power radicand {radicand:e}"
        )));
    };
    Ok(Budeanu {
        reactive,
        distortion,
    })
}

/// Fryze non-active power `Q_F = ‖u‖·‖i − i_a‖`.
pub fn fryze_reactive(u: &HarmonicSignal, i: &HarmonicSignal) -> Result<f64> {
    let ia = cpc::active_current(u, i)?;
    Ok(u.rms() * i.sub(&ia)?.rms())
}

/// Square root of `(1/2T²)∬ (u(s)i(t) − u(t)i(s))² ds dt`, evaluated with an
/// `M × M` trapezoid rule.
///
/// This is the Cauchy–Schwarz residual `√(S² − P²)` computed without
/// Parseval's identity; it serves as an independent check.
pub fn cs_residual_oracle(u: &HarmonicSignal, i: &HarmonicSignal, samples: usize) -> Result<f64> {
    if u.omega() != i.omega() {
        return Err(Error::MismatchedFrequency {
            left: u.omega(),
            right: i.omega(),
        });
    }
    spectrum::check_samples(samples, u.max_order().max(i.max_order()))?;
    let us = u.sample_values(samples)?;
    let is = i.sample_values(samples)?;
    let mut acc = 0.0;
    for (us_s, is_s) in us.iter().zip(&is) {
        for (us_t, is_t) in us.iter().zip(&is) {
            let d = us_s * is_t - us_t * is_s;
            acc += d * d;
        }
    }
    let m = samples as f64;
    Ok((acc / (2.0 * m * m)).sqrt())
}

/// Averaged Iliovici reactive power `Q_I = (1/ω)⟨u, di/dt⟩`, i.e. the signed
/// area of the `(u, i)` Lissajous loop divided by `2π`.
pub fn iliovici_total(u: &HarmonicSignal, i: &HarmonicSignal) -> Result<f64> {
    Ok(u.inner(&i.differentiate())? / u.omega())
}

/// `Q_{I_n} = (1/ω)⟨u_n, di/dt⟩ = n·Q_n`.
pub fn iliovici_per_harmonic(u: &HarmonicSignal, i: &HarmonicSignal, n: u32) -> Result<f64> {
    let un = u.component(n);
    if un.is_zero() {
        return Err(Error::HarmonicAbsent { order: n });
    }
    Ok(un.inner(&i.differentiate())? / u.omega())
}

/// `(Q_B, Σ_n Q_{I_n}/n)`; the two agree for any pair of signals.
pub fn budeanu_iliovici_identity(u: &HarmonicSignal, i: &HarmonicSignal) -> Result<(f64, f64)> {
    let qb = budeanu(u, i)?.reactive;
    let mut normalized = 0.0;
    for n in u.orders() {
        normalized += iliovici_per_harmonic(u, i, n)? / f64::from(n);
    }
    Ok((qb, normalized))
}

/// `G_e = P / ‖u‖²`.
pub fn equivalent_conductance(u: &HarmonicSignal, i: &HarmonicSignal) -> Result<f64> {
    cpc::equivalent_conductance(u, i)
}

/// `B_e = −ω²·Q_I / ‖u̇‖²`.
pub fn equivalent_susceptance(u: &HarmonicSignal, i: &HarmonicSignal) -> Result<f64> {
    if !u.has_ac() {
        return Err(if u.is_zero() {
            Error::ZeroSource
        } else {
            Error::NoAcContent
        });
    }
    let w = u.omega();
    Ok(-w * w * iliovici_total(u, i)? / u.differentiate().rms_squared())
}

/// `Y_e = G_e + jB_e`.
pub fn equivalent_admittance(u: &HarmonicSignal, i: &HarmonicSignal) -> Result<Complex64> {
    Ok(Complex64::new(
        equivalent_conductance(u, i)?,
        equivalent_susceptance(u, i)?,
    ))
}

/// Powers carried by the orthogonal CPC currents: `‖u‖·‖component‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpcPowers {
    /// `D_s`
    pub scattered: f64,
    /// `Q_r`
    pub reactive: f64,
    /// `Q_i`, the normed Iliovici power.
    pub iliovici: f64,
    /// `Q_s`
    pub scattered_reactive: f64,
}

pub fn cpc_powers(u: &HarmonicSignal, d: &Decomposition) -> CpcPowers {
    let norm = u.rms();
    CpcPowers {
        scattered: norm * d.scattered.rms(),
        reactive: norm * d.reactive.rms(),
        iliovici: norm * d.iliovici.rms(),
        scattered_reactive: norm * d.scattered_reactive.rms(),
    }
}

/// Readings of the per-harmonic active and reactive measurement circuits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicMeasurement {
    /// `P_n = ⟨u_n, i⟩`
    pub active: f64,
    /// `−(1/2π)∫ u̇_n i dt`, which equals `Q_{I_n}`.
    pub reactive: f64,
}

pub fn per_harmonic_measurements(
    u: &HarmonicSignal,
    i: &HarmonicSignal,
) -> Result<BTreeMap<u32, HarmonicMeasurement>> {
    let period_over_two_pi = 1.0 / u.omega();
    u.support()
        .into_iter()
        .map(|n| {
            let un = u.component(n);
            let active = un.inner(i)?;
            let reactive = -period_over_two_pi * un.differentiate().inner(i)?;
            Ok((n, HarmonicMeasurement { active, reactive }))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activity {
    Passive,
    Active,
    /// `G_e = 0`: the load neither absorbs nor delivers active power.
    Lossless,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reactivity {
    Inductive,
    Capacitive,
    Resistive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadCharacter {
    pub activity: Activity,
    pub reactivity: Reactivity,
}

impl fmt::Display for LoadCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = match self.activity {
            Activity::Passive => "passive",
            Activity::Active => "active",
            Activity::Lossless => "lossless",
        };
        let r = match self.reactivity {
            Reactivity::Inductive => "inductive",
            Reactivity::Capacitive => "capacitive",
            Reactivity::Resistive => "resistive",
        };
        write!(f, "{a}-{r}")
    }
}

/// Sign classification of the equivalent admittance `G_e + jB_e`.
pub fn classify_load(conductance: f64, susceptance: f64) -> LoadCharacter {
    let activity = if conductance.abs() <= CHARACTER_THRESHOLD {
        Activity::Lossless
    } else if conductance > 0.0 {
        Activity::Passive
    } else {
        Activity::Active
    };
    let reactivity = if susceptance.abs() <= CHARACTER_THRESHOLD {
        Reactivity::Resistive
    } else if susceptance < 0.0 {
        Reactivity::Inductive
    } else {
        Reactivity::Capacitive
    };
    LoadCharacter {
        activity,
        reactivity,
    }
}

/// Per-harmonic entries of a [`PowerReport`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicPowers {
    /// `P_n`
    pub active: f64,
    /// `Q_n = Im{U_n conj(I_n)}`
    pub reactive: f64,
    /// `Q_{I_n} = n·Q_n`
    pub iliovici: f64,
    /// `G_n`
    pub conductance: f64,
    /// `B_n`
    pub susceptance: f64,
}

/// Every power quantity of one source/current pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerReport {
    pub active: f64,
    pub apparent: f64,
    pub power_factor: f64,
    pub budeanu_reactive: f64,
    pub budeanu_distortion: f64,
    pub fryze_nonactive: f64,
    pub scattered: f64,
    pub reactive: f64,
    pub iliovici_normed: f64,
    pub scattered_reactive: f64,
    pub iliovici_average: f64,
    pub equivalent_conductance: f64,
    /// `None` for a DC-only source.
    pub equivalent_susceptance: Option<f64>,
    pub load_character: LoadCharacter,
    pub per_harmonic: BTreeMap<u32, HarmonicPowers>,
}

impl PowerReport {
    pub fn compute(u: &HarmonicSignal, i: &HarmonicSignal) -> Result<Self> {
        let d = cpc::decompose(u, i)?;
        Self::from_decomposition(u, &d)
    }

    pub fn from_decomposition(u: &HarmonicSignal, d: &Decomposition) -> Result<Self> {
        let i = &d.total;
        let active = active_power(u, i)?;
        let apparent = apparent_power(u, i)?;
        let power_factor = power_factor(u, i)?;
        let b = budeanu(u, i)?;
        let powers = cpc_powers(u, d);
        let ge = equivalent_conductance(u, i)?;
        let be = if u.has_ac() {
            Some(equivalent_susceptance(u, i)?)
        } else {
            None
        };
        let per_harmonic = u
            .support()
            .into_iter()
            .map(|n| {
                let reactive = if n == 0 { 0.0 } else { harmonic_reactive(u, i, n) };
                Ok((
                    n,
                    HarmonicPowers {
                        active: u.component(n).inner(i)?,
                        reactive,
                        iliovici: iliovici_per_harmonic(u, i, n)?,
                        conductance: cpc::per_harmonic_conductance(u, i, n)?,
                        susceptance: cpc::per_harmonic_susceptance(u, i, n)?,
                    },
                ))
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            active,
            apparent,
            power_factor,
            budeanu_reactive: b.reactive,
            budeanu_distortion: b.distortion,
            fryze_nonactive: u.rms() * d.fryze().rms(),
            scattered: powers.scattered,
            reactive: powers.reactive,
            iliovici_normed: powers.iliovici,
            scattered_reactive: powers.scattered_reactive,
            iliovici_average: iliovici_total(u, i)?,
            equivalent_conductance: ge,
            equivalent_susceptance: be,
            load_character: classify_load(ge, be.unwrap_or(0.0)),
            per_harmonic,
        })
    }
}
