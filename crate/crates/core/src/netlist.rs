//! Linear time-invariant one-port loads and their steady-state response.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectrum::HarmonicSignal;

/// Per-harmonic admittance of a tabulated (measured) load.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AdmittanceTable(BTreeMap<u32, Complex64>);

impl AdmittanceTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, order: u32, admittance: Complex64) -> Option<Complex64> {
        self.0.insert(order, admittance)
    }

    pub fn get(&self, order: u32) -> Option<Complex64> {
        self.0.get(&order).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, Complex64)> + '_ {
        self.0.iter().map(|(&n, &y)| (n, y))
    }
}

impl FromIterator<(u32, Complex64)> for AdmittanceTable {
    fn from_iter<T: IntoIterator<Item = (u32, Complex64)>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// A one-port built from ideal R, L, C elements, or a tabulated admittance.
#[derive(Debug, Clone, PartialEq)]
pub enum Network {
    /// Resistance in ohms.
    Resistor(f64),
    /// Inductance in henries.
    Inductor(f64),
    /// Capacitance in farads.
    Capacitor(f64),
    Series(Vec<Network>),
    Parallel(Vec<Network>),
    Table(AdmittanceTable),
}

/// Admittance with an explicit point at infinity (a short circuit).
#[derive(Debug, Clone, Copy, PartialEq)]
enum Extended {
    Finite(Complex64),
    Infinite,
}

impl Extended {
    fn reciprocal(self) -> Self {
        match self {
            Extended::Infinite => Extended::Finite(Complex64::new(0.0, 0.0)),
            Extended::Finite(z) if z == Complex64::new(0.0, 0.0) => Extended::Infinite,
            Extended::Finite(z) => Extended::Finite(z.inv()),
        }
    }

    fn sum(items: impl Iterator<Item = Result<Extended>>) -> Result<Extended> {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut infinite = false;
        for item in items {
            match item? {
                Extended::Infinite => infinite = true,
                Extended::Finite(y) => acc += y,
            }
        }
        Ok(if infinite {
            Extended::Infinite
        } else {
            Extended::Finite(acc)
        })
    }
}

fn check_value(kind: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidElement(format!(
            "{kind} value must be positive and finite, got {value}"
        )))
    }
}

impl Network {
    pub fn series(parts: impl IntoIterator<Item = Network>) -> Self {
        Network::Series(parts.into_iter().collect())
    }

    pub fn parallel(parts: impl IntoIterator<Item = Network>) -> Self {
        Network::Parallel(parts.into_iter().collect())
    }

    /// Attaches `other` in parallel with this network.
    pub fn parallel_with(&self, other: Network) -> Network {
        Network::Parallel(vec![self.clone(), other])
    }

    /// Checks every element value and table entry.
    pub fn validate(&self) -> Result<()> {
        match self {
            Network::Resistor(r) => check_value("resistor", *r),
            Network::Inductor(l) => check_value("inductor", *l),
            Network::Capacitor(c) => check_value("capacitor", *c),
            Network::Series(parts) | Network::Parallel(parts) => {
                parts.iter().try_for_each(Network::validate)
            }
            Network::Table(table) => table.iter().try_for_each(|(n, y)| {
                if y.re.is_finite() && y.im.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidElement(format!(
                        "non-finite tabulated admittance at order {n}"
                    )))
                }
            }),
        }
    }

    fn extended_admittance(&self, n: u32, omega: f64) -> Result<Extended> {
        let w = f64::from(n) * omega;
        let j = Complex64::i();
        Ok(match self {
            Network::Resistor(r) => {
                check_value("resistor", *r)?;
                Extended::Finite(Complex64::new(1.0 / r, 0.0))
            }
            Network::Inductor(l) => {
                check_value("inductor", *l)?;
                if n == 0 {
                    Extended::Infinite
                } else {
                    Extended::Finite((j * w * l).inv())
                }
            }
            Network::Capacitor(c) => {
                check_value("capacitor", *c)?;
                Extended::Finite(j * w * c)
            }
            Network::Parallel(parts) => {
                Extended::sum(parts.iter().map(|p| p.extended_admittance(n, omega)))?
            }
            Network::Series(parts) => Extended::sum(
                parts
                    .iter()
                    .map(|p| p.extended_admittance(n, omega).map(Extended::reciprocal)),
            )?
            .reciprocal(),
            Network::Table(table) => {
                let y = table.get(n).ok_or(Error::MissingTableOrder { order: n })?;
                if !(y.re.is_finite() && y.im.is_finite()) {
                    return Err(Error::InvalidElement(format!(
                        "non-finite tabulated admittance at order {n}"
                    )));
                }
                Extended::Finite(y)
            }
        })
    }

    /// Admittance `Y(jnω) = G + jB` at harmonic order `n`.
    ///
    /// DC (`n = 0`) uses the element limits: an inductor is a short, a
    /// capacitor an open circuit. Only a diverging total is an error.
    pub fn admittance(&self, n: u32, omega: f64) -> Result<Complex64> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidFrequency(omega));
        }
        match self.extended_admittance(n, omega)? {
            Extended::Finite(y) if y.re.is_finite() && y.im.is_finite() => Ok(y),
            _ => Err(Error::SingularAdmittance { order: n }),
        }
    }

    /// Steady-state current drawn from the voltage source `u`.
    pub fn steady_state_current(&self, u: &HarmonicSignal) -> Result<HarmonicSignal> {
        let omega = u.omega();
        let dc = if u.has_dc() {
            self.admittance(0, omega)?.re * u.dc()
        } else {
            0.0
        };
        let phasors = u
            .terms()
            .map(|(n, h)| Ok((n, self.admittance(n, omega)? * h.phasor())))
            .collect::<Result<Vec<_>>>()?;
        HarmonicSignal::from_phasors(omega, dc, phasors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use crate::spectrum::Harmonic;

    fn rl() -> Network {
        Network::series([Network::Resistor(1.0), Network::Inductor(2.0)])
    }

    fn assert_complex(got: Complex64, want: Complex64) {
        assert!((got - want).norm() <= 1e-12 * (1.0 + want.norm()), "{got} vs {want}");
    }

    #[test]
    fn rl_admittance_matches_closed_form() {
        assert_complex(rl().admittance(1, 1.0).unwrap(), Complex64::new(0.2, -0.4));
        assert_complex(
            rl().admittance(5, 1.0).unwrap(),
            Complex64::new(1.0 / 101.0, -10.0 / 101.0),
        );
        for n in 0..4 {
            assert_complex(
                Network::Resistor(4.0).admittance(n, 3.0).unwrap(),
                Complex64::new(0.25, 0.0),
            );
        }
    }

    #[test]
    fn dc_limits() {
        assert!(matches!(
            Network::Inductor(1.0).admittance(0, 1.0),
            Err(Error::SingularAdmittance { order: 0 })
        ));
        assert_complex(Network::Capacitor(1.0).admittance(0, 1.0).unwrap(), Complex64::new(0.0, 0.0));
        // A series RL is purely resistive at DC.
        assert_complex(rl().admittance(0, 1.0).unwrap(), Complex64::new(1.0, 0.0));
        // Series capacitor blocks the inductor short.
        let lc = Network::series([Network::Inductor(1.0), Network::Capacitor(1.0)]);
        assert_complex(lc.admittance(0, 1.0).unwrap(), Complex64::new(0.0, 0.0));
        // Inductor shunting anything shorts the port.
        let shorted = Network::parallel([Network::Resistor(1.0), Network::Inductor(1.0)]);
        assert!(shorted.admittance(0, 1.0).is_err());
        assert!(shorted.admittance(1, 1.0).is_ok());
    }

    #[test]
    fn series_resonance_is_singular() {
        let lc = Network::series([Network::Inductor(1.0), Network::Capacitor(1.0)]);
        assert!(matches!(
            lc.admittance(1, 1.0),
            Err(Error::SingularAdmittance { order: 1 })
        ));
    }

    #[test]
    fn invalid_elements() {
        assert!(matches!(
            Network::Resistor(0.0).admittance(1, 1.0),
            Err(Error::InvalidElement(_))
        ));
        assert!(Network::series([Network::Capacitor(-1.0)]).validate().is_err());
        assert!(rl().validate().is_ok());
    }

    #[test]
    fn table_lookup() {
        let table: AdmittanceTable = [(1, Complex64::new(0.2, -0.4))].into_iter().collect();
        let net = Network::Table(table);
        assert_complex(net.admittance(1, 1.0).unwrap(), Complex64::new(0.2, -0.4));
        assert!(matches!(
            net.admittance(3, 1.0),
            Err(Error::MissingTableOrder { order: 3 })
        ));
    }

    #[test]
    fn steady_state_examples() {
        let u = HarmonicSignal::from_coefficients(1.0, 0.0, &[(1, 10.0, 0.0)]).unwrap();
        let i = rl().steady_state_current(&u).unwrap();
        let h = i.harmonic(1).unwrap();
        assert_relative_eq!(h.cos, 2.0, max_relative = 1e-12);
        assert_relative_eq!(h.sin, 4.0, max_relative = 1e-12);
        assert_relative_eq!(i.rms(), 2.0 * 5f64.sqrt(), max_relative = 1e-12);

        let u = HarmonicSignal::from_coefficients(1.0, 0.0, &[(1, 10.0, 0.0), (5, 5.0, 0.0)]).unwrap();
        let i = rl().steady_state_current(&u).unwrap();
        assert_relative_eq!(i.harmonic(1).unwrap().rms(), 10.0 / 5f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(i.harmonic(5).unwrap().rms(), 5.0 / 101f64.sqrt(), max_relative = 1e-12);

        let u = HarmonicSignal::from_coefficients(1.0, 0.0, &[(1, 10.0, 0.0)]).unwrap();
        let i = Network::Resistor(2.0).steady_state_current(&u).unwrap();
        assert_eq!(i.harmonic(1), Some(Harmonic::new(5.0, 0.0)));
    }

    #[test]
    fn steady_state_dc() {
        let u = HarmonicSignal::from_coefficients(1.0, 3.0, &[(1, 1.0, 0.0)]).unwrap();
        let i = rl().steady_state_current(&u).unwrap();
        assert_eq!(i.dc(), 3.0);
        // An inductor on a pure AC source is fine; with DC it is a short.
        let ac = HarmonicSignal::from_coefficients(1.0, 0.0, &[(1, 1.0, 0.0)]).unwrap();
        assert!(Network::Inductor(1.0).steady_state_current(&ac).is_ok());
        assert!(matches!(
            Network::Inductor(1.0).steady_state_current(&u),
            Err(Error::SingularAdmittance { order: 0 })
        ));
    }

    #[test]
    fn shunt_attachment() {
        let comp = rl().parallel_with(Network::Capacitor(0.4));
        assert!(comp.admittance(1, 1.0).unwrap().im.abs() < 1e-15);

        let open = rl().parallel_with(Network::Parallel(vec![]));
        assert_complex(open.admittance(1, 1.0).unwrap(), rl().admittance(1, 1.0).unwrap());

        let partial = rl().parallel_with(Network::Capacitor(0.072));
        assert_relative_eq!(partial.admittance(1, 1.0).unwrap().im, -0.328, max_relative = 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn tree() -> impl Strategy<Value = Network> {
            let leaf = prop_oneof![
                (0.1f64..10.0).prop_map(Network::Resistor),
                (0.01f64..2.0).prop_map(Network::Inductor),
                (0.01f64..2.0).prop_map(Network::Capacitor),
            ];
            leaf.prop_recursive(3, 12, 3, |inner| {
                prop_oneof![
                    prop::collection::vec(inner.clone(), 1..3).prop_map(Network::Series),
                    prop::collection::vec(inner, 1..3).prop_map(Network::Parallel),
                ]
            })
        }

        proptest! {
            #[test]
            fn combinators_follow_complex_arithmetic(a in tree(), b in tree(), n in 1u32..6, omega in 0.3f64..3.0) {
                let (ya, yb) = match (a.admittance(n, omega), b.admittance(n, omega)) {
                    (Ok(ya), Ok(yb)) => (ya, yb),
                    _ => return Ok(()),
                };
                let par = Network::parallel([a.clone(), b.clone()]).admittance(n, omega).unwrap();
                prop_assert!((par - (ya + yb)).norm() <= 1e-9 * (ya.norm() + yb.norm()));

                if ya.norm() > 1e-9 && yb.norm() > 1e-9 {
                    let z = ya.inv() + yb.inv();
                    if z.norm() > 1e-9 {
                        let ser = Network::series([a, b]).admittance(n, omega).unwrap();
                        prop_assert!((ser - z.inv()).norm() <= 1e-9 * z.inv().norm());
                    }
                }
            }

            #[test]
            fn steady_state_is_linear(net in tree(), a in -5.0f64..5.0, b in -5.0f64..5.0, k in -3.0f64..3.0) {
                let u = HarmonicSignal::from_coefficients(1.0, 0.0, &[(1, a, b), (3, b, a)]).unwrap();
                let (Ok(i1), Ok(ik)) = (net.steady_state_current(&u), net.steady_state_current(&u.scale(k))) else {
                    return Ok(());
                };
                let diff = ik.sub(&i1.scale(k)).unwrap();
                prop_assert!(diff.rms() <= 1e-9 * (1.0 + ik.rms()));
            }
        }
    }
}
