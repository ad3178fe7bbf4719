//! Sampled waveforms: Lissajous figures, their signed loop area, and
//! trapezoid-rule oracles for the spectral power formulas.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::spectrum::{self, HarmonicSignal};

/// Closed `(u, i)` curve sampled over one fundamental period.
#[derive(Debug, Clone, PartialEq)]
pub struct Lissajous {
    pub points: Vec<(f64, f64)>,
    pub labels: (String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Anticlockwise,
    Clockwise,
    Degenerate,
}

/// Relative area below which a loop is reported as degenerate.
pub const DEGENERATE_AREA_RATIO: f64 = 1e-9;

fn check_pair(u: &HarmonicSignal, i: &HarmonicSignal, samples: usize) -> Result<()> {
    if u.omega() != i.omega() {
        return Err(Error::MismatchedFrequency {
            left: u.omega(),
            right: i.omega(),
        });
    }
    spectrum::check_samples(samples, u.max_order().max(i.max_order()))
}

/// Samples `(u(t_k), i(t_k))` at `M` equally spaced instants.
pub fn lissajous(u: &HarmonicSignal, i: &HarmonicSignal, samples: usize) -> Result<Lissajous> {
    check_pair(u, i, samples)?;
    let us = u.sample_values(samples)?;
    let is = i.sample_values(samples)?;
    Ok(Lissajous {
        points: us.into_iter().zip(is).collect(),
        labels: ("u".into(), "i".into()),
    })
}

impl Lissajous {
    pub fn with_labels(mut self, u: impl Into<String>, i: impl Into<String>) -> Self {
        self.labels = (u.into(), i.into());
        self
    }

    pub fn samples(&self) -> usize {
        self.points.len()
    }

    /// Signed shoelace area `½ Σ (u_k i_{k+1} − u_{k+1} i_k)`, closing the
    /// polygon back to the first point. Anticlockwise loops are positive.
    pub fn loop_area(&self) -> f64 {
        let m = self.points.len();
        let twice: f64 = (0..m)
            .map(|k| {
                let (u0, i0) = self.points[k];
                let (u1, i1) = self.points[(k + 1) % m];
                u0 * i1 - u1 * i0
            })
            .sum();
        0.5 * twice
    }

    pub fn orientation(&self) -> Orientation {
        let m = self.points.len().max(1) as f64;
        let rms_u = (self.points.iter().map(|p| p.0 * p.0).sum::<f64>() / m).sqrt();
        let rms_i = (self.points.iter().map(|p| p.1 * p.1).sum::<f64>() / m).sqrt();
        let area = self.loop_area();
        if area.abs() <= DEGENERATE_AREA_RATIO * rms_u * rms_i {
            Orientation::Degenerate
        } else if area > 0.0 {
            Orientation::Anticlockwise
        } else {
            Orientation::Clockwise
        }
    }

    /// CSV with header `u,i`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "u,i")?;
        for (u, i) in &self.points {
            writeln!(out, "{},{}", fmt_full(*u), fmt_full(*i))?;
        }
        Ok(())
    }
}

/// Full double precision: 17 significant digits.
pub fn fmt_full(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with header `t,u,i` for two signals sampled on one period.
pub fn write_waveform_csv<W: Write>(
    mut out: W,
    u: &HarmonicSignal,
    i: &HarmonicSignal,
    samples: usize,
) -> Result<()> {
    check_pair(u, i, samples)?;
    let t = spectrum::time_grid(u.period(), samples);
    let us = u.sample_values(samples)?;
    let is = i.sample_values(samples)?;
    let io = |e: io::Error| Error::InvalidSignal(format!("write failed: {e}"));
    writeln!(out, "t,u,i").map_err(io)?;
    for ((t, u), i) in t.iter().zip(&us).zip(&is) {
        writeln!(out, "{},{},{}", fmt_full(*t), fmt_full(*u), fmt_full(*i)).map_err(io)?;
    }
    Ok(())
}

/// Trapezoid-rule estimates of spectral quantities on `M` samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledPowers {
    pub active: f64,
    pub iliovici: f64,
    pub rms_u: f64,
    pub rms_i: f64,
}

/// `P`, `Q_I = (1/ωT)∫ u·di/dt dt` and both rms values from samples.
///
/// `di/dt` is formed spectrally before sampling so the only error left is
/// the quadrature, which is exact for band-limited periodic integrands.
pub fn sampled_power_oracles(
    u: &HarmonicSignal,
    i: &HarmonicSignal,
    samples: usize,
) -> Result<SampledPowers> {
    check_pair(u, i, samples)?;
    let us = u.sample_values(samples)?;
    let is = i.sample_values(samples)?;
    let dis = i.differentiate().sample_values(samples)?;
    let m = samples as f64;
    let mean = |f: &dyn Fn(usize) -> f64| (0..samples).map(f).sum::<f64>() / m;
    Ok(SampledPowers {
        active: mean(&|k| us[k] * is[k]),
        iliovici: mean(&|k| us[k] * dis[k]) / u.omega(),
        rms_u: mean(&|k| us[k] * us[k]).sqrt(),
        rms_i: mean(&|k| is[k] * is[k]).sqrt(),
    })
}
