//! Orthogonal decompositions of a load current.
//!
//! Every component is an orthogonal projection of the current `i` onto
//! directions spanned by the source voltage `u`, its harmonic contents `u_n`
//! and their time derivatives `u̇_n`:
//!
//! | component            | projection                                       |
//! |----------------------|--------------------------------------------------|
//! | active `i_a`         | onto `u`                                         |
//! | scattered `i_s`      | onto each `u_n`, minus `i_a`                     |
//! | reactive `i_r`       | onto each `u̇_n`                                  |
//! | Iliovici `i_I`       | onto `u̇`                                         |
//! | scattered reactive   | `i_r − i_I`                                      |
//!
//! All period integrals are evaluated in closed form on the harmonic
//! coefficients. The [`hybrid`] module computes the same currents from the
//! load admittances.

pub mod hybrid;

use crate::error::{Error, Result};
use crate::spectrum::HarmonicSignal;

/// Residual rms above this fraction of `rms(i)` is reported.
pub const RESIDUAL_WARNING_RATIO: f64 = 1e-6;

fn check_source(u: &HarmonicSignal) -> Result<()> {
    if u.is_zero() {
        Err(Error::ZeroSource)
    } else {
        Ok(())
    }
}

/// Projection coefficient of `i` along `direction`.
fn projection_gain(i: &HarmonicSignal, direction: &HarmonicSignal) -> Result<f64> {
    Ok(i.inner(direction)? / direction.rms_squared())
}

/// Equivalent conductance `G_e = P / ‖u‖²`.
pub fn equivalent_conductance(u: &HarmonicSignal, i: &HarmonicSignal) -> Result<f64> {
    check_source(u)?;
    projection_gain(i, u)
}

/// Active current `i_a = (P / ‖u‖²)·u`.
pub fn active_current(u: &HarmonicSignal, i: &HarmonicSignal) -> Result<HarmonicSignal> {
    Ok(u.scale(equivalent_conductance(u, i)?))
}

/// Conductance `G_n = ⟨u_n, i⟩ / ‖u_n‖²` seen by voltage content `n`
/// (`n = 0` is the DC term).
pub fn per_harmonic_conductance(u: &HarmonicSignal, i: &HarmonicSignal, n: u32) -> Result<f64> {
    let un = u.component(n);
    if un.is_zero() {
        return Err(Error::HarmonicAbsent { order: n });
    }
    projection_gain(i, &un)
}

/// Conductive current `i_g = Σ_{n∈N′} G_n·u_n = i_a + i_s`.
pub fn conductive_current(u: &HarmonicSignal, i: &HarmonicSignal) -> Result<HarmonicSignal> {
    check_source(u)?;
    let mut acc = HarmonicSignal::zero(u.omega())?;
    for n in u.support() {
        let un = u.component(n);
        acc = acc.add_scaled(&un, projection_gain(i, &un)?)?;
    }
    Ok(acc)
}

/// Scattered current `i_s = Σ_{n∈N′} (G_n − G_e)·u_n`.
pub fn scattered_current(u: &HarmonicSignal, i: &HarmonicSignal) -> Result<HarmonicSignal> {
    let g = conductive_current(u, i)?;
    g.sub(&active_current(u, i)?)
}

/// Susceptance `B_n = nω·⟨i, u̇_n⟩ / ‖u̇_n‖²`; `B_0 = 0` by convention.
pub fn per_harmonic_susceptance(u: &HarmonicSignal, i: &HarmonicSignal, n: u32) -> Result<f64> {
    let un = u.component(n);
    if un.is_zero() {
        return Err(Error::HarmonicAbsent { order: n });
    }
    if n == 0 {
        return Ok(0.0);
    }
    let dun = un.differentiate();
    Ok(f64::from(n) * u.omega() * projection_gain(i, &dun)?)
}

/// Reactive current `i_r = Σ_{n∈N} (⟨i, u̇_n⟩ / ‖u̇_n‖²)·u̇_n`.
///
/// A DC-only source leaves nothing to project on and yields zero.
pub fn reactive_current(u: &HarmonicSignal, i: &HarmonicSignal) -> Result<HarmonicSignal> {
    let mut acc = HarmonicSignal::zero(u.omega())?;
    for n in u.orders() {
        let dun = u.component(n).differentiate();
        acc = acc.add_scaled(&dun, projection_gain(i, &dun)?)?;
    }
    Ok(acc)
}

/// Iliovici current `i_I = (⟨i, u̇⟩ / ‖u̇‖²)·u̇`.
pub fn iliovici_current(u: &HarmonicSignal, i: &HarmonicSignal) -> Result<HarmonicSignal> {
    if !u.has_ac() {
        return Err(Error::NoAcContent);
    }
    let du = u.differentiate();
    Ok(du.scale(projection_gain(i, &du)?))
}

/// Scattered reactive current `i_sr = i_r − i_I`.
pub fn scattered_reactive_current(u: &HarmonicSignal, i: &HarmonicSignal) -> Result<HarmonicSignal> {
    let ii = iliovici_current(u, i)?;
    reactive_current(u, i)?.sub(&ii)
}

/// The full set of current components of one `(u, i)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub total: HarmonicSignal,
    pub active: HarmonicSignal,
    /// Scattered active current (`i_s`, also written `i_sa`).
    pub scattered: HarmonicSignal,
    pub reactive: HarmonicSignal,
    pub iliovici: HarmonicSignal,
    pub scattered_reactive: HarmonicSignal,
    /// Current content outside the harmonic support of the source. Always
    /// zero for LTI loads.
    pub residual: HarmonicSignal,
}

impl Decomposition {
    /// Fryze non-active current `i_F = i − i_a`.
    pub fn fryze(&self) -> HarmonicSignal {
        self.total
            .sub(&self.active)
            .expect("components share the source frequency")
    }

    /// Conductive current `i_g = i_a + i_s`.
    pub fn conductive(&self) -> HarmonicSignal {
        self.active
            .add(&self.scattered)
            .expect("components share the source frequency")
    }

    /// Whether the residual exceeds [`RESIDUAL_WARNING_RATIO`]·rms(i), i.e.
    /// the current carries harmonics the source does not (non-LTI load).
    pub fn has_significant_residual(&self) -> bool {
        self.residual.rms() > RESIDUAL_WARNING_RATIO * self.total.rms()
    }
}

/// Decomposes `i` into active, scattered, reactive, Iliovici and scattered
/// reactive currents plus the out-of-support residual.
pub fn decompose(u: &HarmonicSignal, i: &HarmonicSignal) -> Result<Decomposition> {
    check_source(u)?;
    let active = active_current(u, i)?;
    let scattered = conductive_current(u, i)?.sub(&active)?;
    let reactive = reactive_current(u, i)?;
    let (iliovici, scattered_reactive) = if u.has_ac() {
        let ii = iliovici_current(u, i)?;
        let isr = reactive.sub(&ii)?;
        (ii, isr)
    } else {
        let zero = HarmonicSignal::zero(u.omega())?;
        (zero.clone(), zero)
    };
    let residual = i.sub(&active)?.sub(&scattered)?.sub(&reactive)?;
    Ok(Decomposition {
        total: i.clone(),
        active,
        scattered,
        reactive,
        iliovici,
        scattered_reactive,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::Network;

    fn source() -> HarmonicSignal {
        HarmonicSignal::from_coefficients(1.0, 0.0, &[(1, 10.0, 0.0), (5, 5.0, 0.0)]).unwrap()
    }

    fn rl_current() -> HarmonicSignal {
        Network::series([Network::Resistor(1.0), Network::Inductor(2.0)])
            .steady_state_current(&source())
            .unwrap()
    }

    fn coeffs(s: &HarmonicSignal, n: u32) -> (f64, f64) {
        s.harmonic(n).map(|h| (h.cos, h.sin)).unwrap_or((0.0, 0.0))
    }

    fn assert_coeffs(s: &HarmonicSignal, n: u32, want: (f64, f64)) {
        let got = coeffs(s, n);
        assert!(
            (got.0 - want.0).abs() <= 1e-3 && (got.1 - want.1).abs() <= 1e-3,
            "order {n}: {got:?} vs {want:?}"
        );
    }

    #[test]
    fn active_current_examples() {
        let ia = active_current(&source(), &rl_current()).unwrap();
        assert_coeffs(&ia, 1, (1.620, 0.0));
        assert_coeffs(&ia, 5, (0.810, 0.0));

        let u = source();
        assert_eq!(active_current(&u, &u.scale(0.3)).unwrap(), u.scale(0.3));

        let c = HarmonicSignal::from_coefficients(1.0, 0.0, &[(1, 1.0, 0.0)]).unwrap();
        let s = HarmonicSignal::from_coefficients(1.0, 0.0, &[(1, 0.0, 1.0)]).unwrap();
        assert!(active_current(&c, &s).unwrap().is_zero());
    }

    #[test]
    fn zero_source_is_an_error() {
        let zero = HarmonicSignal::zero(1.0).unwrap();
        assert_eq!(active_current(&zero, &source()), Err(Error::ZeroSource));
        assert_eq!(decompose(&zero, &source()), Err(Error::ZeroSource));
    }

    #[test]
    fn conductance_examples() {
        let (u, i) = (source(), rl_current());
        assert!((per_harmonic_conductance(&u, &i, 1).unwrap() - 0.2).abs() < 1e-12);
        assert!((per_harmonic_conductance(&u, &i, 5).unwrap() - 1.0 / 101.0).abs() < 1e-12);
        assert_eq!(
            per_harmonic_conductance(&u, &i, 3),
            Err(Error::HarmonicAbsent { order: 3 })
        );
        let ir = Network::Resistor(4.0).steady_state_current(&u).unwrap();
        for n in [1, 5] {
            assert!((per_harmonic_conductance(&u, &ir, n).unwrap() - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn scattered_current_examples() {
        let is = scattered_current(&source(), &rl_current()).unwrap();
        assert_coeffs(&is, 1, (0.380, 0.0));
        assert_coeffs(&is, 5, (-0.760, 0.0));

        let sinus = HarmonicSignal::from_coefficients(1.0, 0.0, &[(1, 10.0, 0.0)]).unwrap();
        let i = Network::series([Network::Resistor(1.0), Network::Inductor(2.0)])
            .steady_state_current(&sinus)
            .unwrap();
        assert!(scattered_current(&sinus, &i).unwrap().is_zero());

        let ir = Network::Resistor(3.0).steady_state_current(&source()).unwrap();
        assert!(scattered_current(&source(), &ir).unwrap().is_zero());
    }

    #[test]
    fn susceptance_examples() {
        let (u, i) = (source(), rl_current());
        assert!((per_harmonic_susceptance(&u, &i, 1).unwrap() + 0.4).abs() < 1e-12);
        assert!((per_harmonic_susceptance(&u, &i, 5).unwrap() + 10.0 / 101.0).abs() < 1e-12);
        let ir = Network::Resistor(3.0).steady_state_current(&u).unwrap();
        assert_eq!(per_harmonic_susceptance(&u, &ir, 1).unwrap(), 0.0);

        let with_dc = HarmonicSignal::from_coefficients(1.0, 2.0, &[(1, 1.0, 0.0)]).unwrap();
        assert_eq!(per_harmonic_susceptance(&with_dc, &with_dc, 0).unwrap(), 0.0);
    }

    #[test]
    fn reactive_current_examples() {
        let ir = reactive_current(&source(), &rl_current()).unwrap();
        assert_coeffs(&ir, 1, (0.0, 4.000));
        assert_coeffs(&ir, 5, (0.0, 0.495));

        let res = Network::Resistor(3.0).steady_state_current(&source()).unwrap();
        assert!(reactive_current(&source(), &res).unwrap().is_zero());

        let dc = HarmonicSignal::dc_only(1.0, 5.0).unwrap();
        assert!(reactive_current(&dc, &dc).unwrap().is_zero());
    }

    #[test]
    fn iliovici_current_examples() {
        let ii = iliovici_current(&source(), &rl_current()).unwrap();
        assert_coeffs(&ii, 1, (0.0, 0.722));
        assert_coeffs(&ii, 5, (0.0, 1.806));

        let sinus = HarmonicSignal::from_coefficients(1.0, 0.0, &[(1, 10.0, 0.0)]).unwrap();
        let i = Network::series([Network::Resistor(1.0), Network::Inductor(2.0)])
            .steady_state_current(&sinus)
            .unwrap();
        let diff = iliovici_current(&sinus, &i)
            .unwrap()
            .sub(&reactive_current(&sinus, &i).unwrap())
            .unwrap();
        assert!(diff.is_zero());

        let res = Network::Resistor(3.0).steady_state_current(&source()).unwrap();
        assert!(iliovici_current(&source(), &res).unwrap().is_zero());

        let dc = HarmonicSignal::dc_only(1.0, 5.0).unwrap();
        assert_eq!(iliovici_current(&dc, &dc), Err(Error::NoAcContent));
    }

    #[test]
    fn scattered_reactive_examples() {
        let (u, i) = (source(), rl_current());
        let isr = scattered_reactive_current(&u, &i).unwrap();
        assert_coeffs(&isr, 1, (0.0, 3.278));
        assert_coeffs(&isr, 5, (0.0, -1.311));

        let ir = reactive_current(&u, &i).unwrap();
        let ii = iliovici_current(&u, &i).unwrap();
        let lhs = ii.rms_squared() + isr.rms_squared();
        assert!((lhs - ir.rms_squared()).abs() <= 1e-9 * ir.rms_squared());

        let sinus = HarmonicSignal::from_coefficients(1.0, 0.0, &[(1, 10.0, 0.0)]).unwrap();
        let i = Network::Inductor(1.0).steady_state_current(&sinus).unwrap();
        assert!(scattered_reactive_current(&sinus, &i).unwrap().is_zero());
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(&source(), &rl_current()).unwrap();
        assert!(d.residual.is_zero());
        assert!(!d.has_significant_residual());
        assert_coeffs(&d.conductive(), 1, (2.0, 0.0));
        assert_coeffs(&d.fryze(), 1, (0.380, 4.0));

        let u = source();
        let d = decompose(&u, &u).unwrap();
        assert_eq!(d.active, u);
        for c in [&d.scattered, &d.reactive, &d.iliovici, &d.scattered_reactive, &d.residual] {
            assert!(c.is_zero());
        }
    }

    #[test]
    fn out_of_support_current_lands_in_residual() {
        let u = source();
        let extra = HarmonicSignal::from_coefficients(1.0, 0.7, &[(3, 0.5, -0.25)]).unwrap();
        let i = rl_current().add(&extra).unwrap();
        let d = decompose(&u, &i).unwrap();
        assert!(d.residual.sub(&extra).unwrap().is_zero());
        assert!(d.has_significant_residual());
    }

    #[test]
    fn dc_only_source() {
        let u = HarmonicSignal::dc_only(1.0, 4.0).unwrap();
        let i = HarmonicSignal::dc_only(1.0, 2.0).unwrap();
        let d = decompose(&u, &i).unwrap();
        assert_eq!(d.active, i);
        assert!(d.reactive.is_zero() && d.iliovici.is_zero() && d.residual.is_zero());
    }
}
