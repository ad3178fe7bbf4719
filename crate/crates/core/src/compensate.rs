//! Lossless compensator sizing. Every compensator is attached in parallel
//! with the load at the source terminals.

use num_complex::Complex64;

use crate::cpc;
use crate::error::{Error, Result};
use crate::metrics::{self, PowerReport};
use crate::netlist::Network;
use crate::spectrum::HarmonicSignal;

/// Below this magnitude a reactive quantity is treated as already compensated.
pub const NEGLIGIBLE_REACTIVE: f64 = 1e-12;

/// Relative mismatch allowed when checking a synthesized series LC branch.
pub const BRANCH_CHECK_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Compensator {
    None,
    ShuntCapacitor { capacitance: f64 },
    ShuntInductor { inductance: f64 },
    /// An inductor and a capacitor in series, the branch shunting the load.
    SeriesLc { inductance: f64, capacitance: f64 },
}

impl Compensator {
    /// The compensator as a one-port, `None` when nothing is attached.
    pub fn network(&self) -> Option<Network> {
        match *self {
            Compensator::None => None,
            Compensator::ShuntCapacitor { capacitance } => Some(Network::Capacitor(capacitance)),
            Compensator::ShuntInductor { inductance } => Some(Network::Inductor(inductance)),
            Compensator::SeriesLc {
                inductance,
                capacitance,
            } => Some(Network::series([
                Network::Inductor(inductance),
                Network::Capacitor(capacitance),
            ])),
        }
    }

    /// `load` with this compensator in parallel.
    pub fn attach(&self, load: &Network) -> Network {
        match self.network() {
            Some(branch) => load.parallel_with(branch),
            None => load.clone(),
        }
    }
}

/// Shunt element that nulls Budeanu's reactive power `Q_B`.
///
/// A shunt capacitor changes `Q_B` by `−ωC·Σ n‖u_n‖²`, a shunt inductor by
/// `Σ ‖u_n‖²/(nωL)`.
pub fn shunt_for_budeanu_null(u: &HarmonicSignal, load: &Network) -> Result<Compensator> {
    if !u.has_ac() {
        return Err(Error::NoAcContent);
    }
    let i = load.steady_state_current(u)?;
    let qb = metrics::budeanu(u, &i)?.reactive;
    let omega = u.omega();
    Ok(if qb.abs() <= NEGLIGIBLE_REACTIVE {
        Compensator::None
    } else if qb > 0.0 {
        let weight: f64 = u
            .terms()
            .map(|(n, h)| f64::from(n) * h.rms().powi(2))
            .sum();
        Compensator::ShuntCapacitor {
            capacitance: qb / (omega * weight),
        }
    } else {
        let weight: f64 = u
            .terms()
            .map(|(n, h)| h.rms().powi(2) / f64::from(n))
            .sum();
        Compensator::ShuntInductor {
            inductance: weight / (omega * -qb),
        }
    })
}

/// Shunt element cancelling the equivalent susceptance `B_e`:
/// `C = |B_e|/ω` for inductive loads, `L = ω‖u‖²/(B_e‖u̇‖²)` for capacitive
/// ones (`1/(ωB_e)` when the source is a pure fundamental).
pub fn shunt_from_equivalent_susceptance(u: &HarmonicSignal, load: &Network) -> Result<Compensator> {
    let i = load.steady_state_current(u)?;
    let be = metrics::equivalent_susceptance(u, &i)?;
    let omega = u.omega();
    Ok(if be.abs() <= NEGLIGIBLE_REACTIVE {
        Compensator::None
    } else if be < 0.0 {
        Compensator::ShuntCapacitor {
            capacitance: be.abs() / omega,
        }
    } else {
        let du = u.differentiate().rms_squared();
        Compensator::ShuntInductor {
            inductance: omega * u.rms_squared() / (be * du),
        }
    })
}

/// Series LC branch whose steady-state current is `−i_sr`.
///
/// The branch susceptance is `b_n = nωC/(1 − n²ω²LC)`. Requiring it at the two
/// harmonics of `i_sr` gives two equations, linear in `C` and `LC`:
///
/// ```text
/// nω·C + b_n·n²ω²·(LC) = b_n
/// ```
pub fn series_lc_for_scattered_reactive(
    u: &HarmonicSignal,
    scattered_reactive: &HarmonicSignal,
) -> Result<Compensator> {
    if u.omega() != scattered_reactive.omega() {
        return Err(Error::MismatchedFrequency {
            left: u.omega(),
            right: scattered_reactive.omega(),
        });
    }
    let orders: Vec<u32> = scattered_reactive.orders().collect();
    let harmonics = orders.len() + usize::from(scattered_reactive.has_dc());
    if harmonics != 2 || scattered_reactive.has_dc() {
        return Err(Error::UnsupportedCompensatorOrder { harmonics });
    }
    let omega = u.omega();
    let mut rows = [[0.0; 3]; 2];
    for (row, &n) in rows.iter_mut().zip(&orders) {
        let voltage = u.phasor(n);
        if voltage.norm() == 0.0 {
            return Err(Error::HarmonicAbsent { order: n });
        }
        // Branch current −I_sr = j·b_n·U_n.
        let b = (Complex64::i() * scattered_reactive.phasor(n) / voltage).re;
        let w = f64::from(n) * omega;
        *row = [w, b * w * w, b];
    }
    let det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0];
    if det == 0.0 || !det.is_finite() {
        return Err(Error::NonphysicalCompensator {
            inductance: f64::NAN,
            capacitance: f64::NAN,
        });
    }
    let capacitance = (rows[0][2] * rows[1][1] - rows[0][1] * rows[1][2]) / det;
    let product = (rows[0][0] * rows[1][2] - rows[0][2] * rows[1][0]) / det;
    let inductance = product / capacitance;
    if !(capacitance > 0.0 && inductance > 0.0 && inductance.is_finite()) {
        return Err(Error::NonphysicalCompensator {
            inductance,
            capacitance,
        });
    }
    let comp = Compensator::SeriesLc {
        inductance,
        capacitance,
    };

    let branch = comp
        .network()
        .expect("series LC has a network")
        .steady_state_current(u)?;
    let target = scattered_reactive.scale(-1.0);
    let deviation = branch.sub(&target)?.rms() / target.rms();
    if deviation > BRANCH_CHECK_TOLERANCE {
        return Err(Error::CompensatorMismatch { deviation });
    }
    Ok(comp)
}

/// Full reactive compensation: the `B_e` shunt removes the Iliovici current
/// and a series LC branch carries the scattered reactive current.
pub fn full_compensation(u: &HarmonicSignal, load: &Network) -> Result<Vec<Compensator>> {
    let shunt = shunt_from_equivalent_susceptance(u, load)?;
    let i = load.steady_state_current(u)?;
    let isr = cpc::scattered_reactive_current(u, &i)?;
    let lc = series_lc_for_scattered_reactive(u, &isr)?;
    Ok(vec![shunt, lc])
}

/// `load` with every compensator attached in parallel.
pub fn compensated_network(load: &Network, compensators: &[Compensator]) -> Network {
    let branches: Vec<Network> = compensators.iter().filter_map(Compensator::network).collect();
    if branches.is_empty() {
        load.clone()
    } else {
        Network::parallel(std::iter::once(load.clone()).chain(branches))
    }
}

/// Power report of the source after attaching `compensators` to `load`.
pub fn evaluate_with(
    u: &HarmonicSignal,
    load: &Network,
    compensators: &[Compensator],
) -> Result<PowerReport> {
    let net = compensated_network(load, compensators);
    let i = net.steady_state_current(u)?;
    PowerReport::compute(u, &i)
}
