//! JSON circuit description: fundamental frequency, source voltage, load.
//!
//! ```json
//! {
//!   "omega": 1.0,
//!   "source": { "dc": 0.0, "harmonics": [ { "n": 1, "a": 10.0, "b": 0.0 } ] },
//!   "load": { "series": [ { "R": 1.0 }, { "L": 2.0 } ] }
//! }
//! ```
//!
//! Leaves are `{"R": ohms}`, `{"L": henries}`, `{"C": farads}`; combinators
//! are `{"series": [...]}` and `{"parallel": [...]}`. A tabulated load is
//! `{"admittance_table": [{"n": 1, "g": 0.2, "b": -0.4}, ...]}`.

use std::collections::BTreeSet;

use cpc_core::netlist::{AdmittanceTable, Network};
use cpc_core::spectrum::{Harmonic, HarmonicSignal};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub omega: f64,
    pub source: SourceSpec,
    pub load: LoadSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    #[serde(default)]
    pub dc: f64,
    #[serde(default)]
    pub harmonics: Vec<HarmonicSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicSpec {
    pub n: u32,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LoadSpec {
    R(f64),
    L(f64),
    C(f64),
    #[serde(rename = "series")]
    Series(Vec<LoadSpec>),
    #[serde(rename = "parallel")]
    Parallel(Vec<LoadSpec>),
    #[serde(rename = "admittance_table")]
    AdmittanceTable(Vec<TableEntry>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub n: u32,
    pub g: f64,
    pub b: f64,
}

/// A parsed and validated circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub source: HarmonicSignal,
    pub load: Network,
}

#[derive(Debug)]
pub struct SchemaError(pub String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SchemaError {}

impl LoadSpec {
    fn to_network(&self) -> Result<Network, SchemaError> {
        Ok(match self {
            LoadSpec::R(r) => Network::Resistor(*r),
            LoadSpec::L(l) => Network::Inductor(*l),
            LoadSpec::C(c) => Network::Capacitor(*c),
            LoadSpec::Series(parts) => Network::Series(
                parts.iter().map(LoadSpec::to_network).collect::<Result<_, _>>()?,
            ),
            LoadSpec::Parallel(parts) => Network::Parallel(
                parts.iter().map(LoadSpec::to_network).collect::<Result<_, _>>()?,
            ),
            LoadSpec::AdmittanceTable(rows) => {
                let mut table = AdmittanceTable::new();
                for row in rows {
                    if table.insert(row.n, Complex64::new(row.g, row.b)).is_some() {
                        return Err(SchemaError(format!(
                            "duplicate admittance table order {}",
                            row.n
                        )));
                    }
                }
                Network::Table(table)
            }
        })
    }

    fn from_network(net: &Network) -> Self {
        match net {
            Network::Resistor(r) => LoadSpec::R(*r),
            Network::Inductor(l) => LoadSpec::L(*l),
            Network::Capacitor(c) => LoadSpec::C(*c),
            Network::Series(parts) => LoadSpec::Series(parts.iter().map(Self::from_network).collect()),
            Network::Parallel(parts) => {
                LoadSpec::Parallel(parts.iter().map(Self::from_network).collect())
            }
            Network::Table(table) => LoadSpec::AdmittanceTable(
                table
                    .iter()
                    .map(|(n, y)| TableEntry { n, g: y.re, b: y.im })
                    .collect(),
            ),
        }
    }
}

impl CircuitFile {
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        serde_json::from_str(text).map_err(|e| SchemaError(format!("invalid circuit file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit files always serialize")
    }

    /// Validates the document and builds the source signal and load network.
    pub fn to_circuit(&self) -> Result<Circuit, SchemaError> {
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(SchemaError(format!("omega must be positive, got {}", self.omega)));
        }
        let mut seen = BTreeSet::new();
        for h in &self.source.harmonics {
            if !seen.insert(h.n) {
                return Err(SchemaError(format!("duplicate source harmonic order {}", h.n)));
            }
        }
        let source = HarmonicSignal::new(
            self.omega,
            self.source.dc,
            self.source
                .harmonics
                .iter()
                .map(|h| (h.n, Harmonic::new(h.a, h.b))),
        )
        .map_err(|e| SchemaError(e.to_string()))?;
        let load = self.load.to_network()?;
        load.validate().map_err(|e| SchemaError(e.to_string()))?;
        Ok(Circuit { source, load })
    }

    pub fn from_circuit(circuit: &Circuit) -> Self {
        let source = &circuit.source;
        CircuitFile {
            omega: source.omega(),
            source: SourceSpec {
                dc: source.dc(),
                harmonics: source
                    .terms()
                    .map(|(n, h)| HarmonicSpec { n, a: h.cos, b: h.sin })
                    .collect(),
            },
            load: LoadSpec::from_network(&circuit.load),
        }
    }
}
