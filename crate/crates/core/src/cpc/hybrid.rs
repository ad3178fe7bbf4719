//! Current components computed from the load admittances `Y_n = G_n + jB_n`
//! instead of from period integrals.
//!
//! This is the frequency-domain route; the projection functions in the parent
//! module must agree with it for every LTI load.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::netlist::Network;
use crate::spectrum::HarmonicSignal;

#[derive(Debug, Clone, PartialEq)]
pub struct HybridCurrents {
    pub equivalent_conductance: f64,
    pub active: HarmonicSignal,
    pub scattered: HarmonicSignal,
    pub reactive: HarmonicSignal,
}

/// Active, scattered and reactive currents of `load` driven by `u`.
///
/// `i_s = (G_0 − G_e)U_0 + Σ (G_n − G_e)U_n` and `i_r = Σ jB_n U_n`.
pub fn currents(load: &Network, u: &HarmonicSignal) -> Result<HybridCurrents> {
    if u.is_zero() {
        return Err(Error::ZeroSource);
    }
    let omega = u.omega();
    let g0 = if u.has_dc() {
        load.admittance(0, omega)?.re
    } else {
        0.0
    };
    let admittances = u
        .orders()
        .map(|n| Ok((n, load.admittance(n, omega)?)))
        .collect::<Result<Vec<_>>>()?;

    let power = g0 * u.dc() * u.dc()
        + admittances
            .iter()
            .map(|&(n, y)| y.re * u.phasor(n).norm_sqr())
            .sum::<f64>();
    let ge = power / u.rms_squared();

    let scattered = HarmonicSignal::from_phasors(
        omega,
        (g0 - ge) * u.dc(),
        admittances
            .iter()
            .map(|&(n, y)| (n, (y.re - ge) * u.phasor(n))),
    )?;
    let reactive = HarmonicSignal::from_phasors(
        omega,
        0.0,
        admittances
            .iter()
            .map(|&(n, y)| (n, Complex64::new(0.0, y.im) * u.phasor(n))),
    )?;
    Ok(HybridCurrents {
        equivalent_conductance: ge,
        active: u.scale(ge),
        scattered,
        reactive,
    })
}
