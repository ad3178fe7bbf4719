//! The four subcommands, independent of argument parsing.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use cpc_core::compensate::{self, Compensator};
use cpc_core::cpc::{self, Decomposition};
use cpc_core::metrics::{self, PowerReport};
use cpc_core::spectrum::{HarmonicSignal, DEFAULT_SAMPLES};
use cpc_core::waveform::{self, Orientation};
use cpc_core::Error;

use crate::circuit::{Circuit, CircuitFile};
use crate::render;

/// Environment variable overriding the default sample count.
pub const SAMPLES_ENV: &str = "CPC_SAMPLES";

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numeric(String),
    Io(String),
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
            CliError::Unsupported(_) => 5,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numeric(m) => write!(f, "numerical error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Unsupported(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidFrequency(_)
            | Error::InvalidSignal(_)
            | Error::InvalidElement(_)
            | Error::MissingTableOrder { .. }
            | Error::TooFewSamples { .. }
            | Error::MismatchedFrequency { .. } => CliError::Input(msg),
            Error::UnsupportedCompensatorOrder { .. }
            | Error::NonphysicalCompensator { .. }
            | Error::CompensatorMismatch { .. } => CliError::Unsupported(msg),
            Error::SingularAdmittance { .. }
            | Error::ZeroSource
            | Error::ZeroApparentPower
            | Error::NoAcContent
            | Error::HarmonicAbsent { .. }
            | Error::NumericalInconsistency(_) => CliError::Numeric(msg),
        }
    }
}

/// Text for standard output plus diagnostics for standard error.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub warnings: Vec<String>,
}

pub fn load_circuit(path: &Path) -> Result<Circuit, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_circuit(&text)
}

pub fn parse_circuit(text: &str) -> Result<Circuit, CliError> {
    CircuitFile::parse(text)
        .and_then(|f| f.to_circuit())
        .map_err(|e| CliError::Input(e.to_string()))
}

/// Sample count: explicit flag, then the environment, then the default.
pub fn resolve_samples(flag: Option<usize>, env: Option<&str>) -> Result<usize, CliError> {
    if let Some(m) = flag {
        return Ok(m);
    }
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{SAMPLES_ENV} must be a positive integer, got {v:?}"))),
        None => Ok(DEFAULT_SAMPLES),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Json,
    Csv,
}

fn current(circuit: &Circuit) -> Result<HarmonicSignal, CliError> {
    Ok(circuit.load.steady_state_current(&circuit.source)?)
}

fn residual_warning(d: &Decomposition) -> Option<String> {
    d.has_significant_residual().then(|| {
        format!(
            "warning: current has content outside the source harmonics (residual rms {:e}); the load is not LTI",
            d.residual.rms()
        )
    })
}

pub fn report(circuit: &Circuit, format: ReportFormat) -> Result<Output, CliError> {
    let u = &circuit.source;
    let d = cpc::decompose(u, &current(circuit)?)?;
    let r = PowerReport::from_decomposition(u, &d)?;
    let stdout = match format {
        ReportFormat::Table => render::report_table(&r),
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&render::report_json(&r))
                .expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Csv => render::report_csv(&r),
    };
    Ok(Output {
        stdout,
        warnings: residual_warning(&d).into_iter().collect(),
    })
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))
}

fn prefixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(format!("_{suffix}.csv"));
    PathBuf::from(name)
}

/// File suffixes and signals written by `decompose`.
pub fn decomposition_files(d: &Decomposition) -> Vec<(&'static str, &'static str, HarmonicSignal)> {
    vec![
        ("ia", "i_a (active)", d.active.clone()),
        ("isa", "i_sa (scattered active)", d.scattered.clone()),
        ("ir", "i_r (reactive)", d.reactive.clone()),
        ("iI", "i_I (Iliovici)", d.iliovici.clone()),
        ("isr", "i_sr (scattered reactive)", d.scattered_reactive.clone()),
        ("ig", "i_g (active + scattered active)", d.conductive()),
        ("total", "i (total)", d.total.clone()),
    ]
}

pub fn decompose(circuit: &Circuit, prefix: &Path, samples: usize) -> Result<Output, CliError> {
    let u = &circuit.source;
    let d = cpc::decompose(u, &current(circuit)?)?;
    let mut out = String::new();
    out.push_str(&render::coefficient_table("u (source)", u));
    for (suffix, title, signal) in decomposition_files(&d) {
        out.push_str(&render::coefficient_table(title, &signal));
        let path = prefixed(prefix, suffix);
        let mut file = create(&path)?;
        waveform::write_waveform_csv(&mut file, u, &signal, samples)?;
        file.flush()
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    if d.residual.has_ac() || d.residual.has_dc() {
        out.push_str(&render::coefficient_table("residual", &d.residual));
    }
    Ok(Output {
        stdout: out,
        warnings: residual_warning(&d).into_iter().collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Budeanu,
    Iliovici,
    Full,
}

/// Compensators chosen by a strategy together with the resulting report.
pub struct CompensationResult {
    pub before: PowerReport,
    /// Intermediate stages; `full` also reports the shunt-only stage.
    pub stages: Vec<(&'static str, Vec<Compensator>, PowerReport)>,
}

pub fn run_compensation(circuit: &Circuit, strategy: Strategy) -> Result<CompensationResult, CliError> {
    let (u, load) = (&circuit.source, &circuit.load);
    let before = PowerReport::compute(u, &current(circuit)?)?;
    let mut stages = Vec::new();
    match strategy {
        Strategy::Budeanu => {
            let c = vec![compensate::shunt_for_budeanu_null(u, load)?];
            let r = compensate::evaluate_with(u, load, &c)?;
            stages.push(("Compensated", c, r));
        }
        Strategy::Iliovici => {
            let c = vec![compensate::shunt_from_equivalent_susceptance(u, load)?];
            let r = compensate::evaluate_with(u, load, &c)?;
            stages.push(("Compensated", c, r));
        }
        Strategy::Full => {
            let full = compensate::full_compensation(u, load)?;
            let shunt = vec![full[0]];
            let r = compensate::evaluate_with(u, load, &shunt)?;
            stages.push(("Iliovici comp.", shunt, r));
            let r = compensate::evaluate_with(u, load, &full)?;
            stages.push(("Full comp.", full, r));
        }
    }
    Ok(CompensationResult { before, stages })
}

fn describe(c: &Compensator) -> String {
    match *c {
        Compensator::None => "none".into(),
        Compensator::ShuntCapacitor { capacitance } => {
            format!("shunt capacitor C = {} F", render::round3(capacitance))
        }
        Compensator::ShuntInductor { inductance } => {
            format!("shunt inductor L = {} H", render::round3(inductance))
        }
        Compensator::SeriesLc { inductance, capacitance } => format!(
            "series LC branch L_x = {} H, C_x = {} F",
            render::round3(inductance),
            render::round3(capacitance)
        ),
    }
}

fn compensator_json(c: &Compensator) -> serde_json::Value {
    match *c {
        Compensator::None => serde_json::json!({ "kind": "none" }),
        Compensator::ShuntCapacitor { capacitance } => {
            serde_json::json!({ "kind": "shunt_capacitor", "C": capacitance })
        }
        Compensator::ShuntInductor { inductance } => {
            serde_json::json!({ "kind": "shunt_inductor", "L": inductance })
        }
        Compensator::SeriesLc { inductance, capacitance } => {
            serde_json::json!({ "kind": "series_lc", "L_x": inductance, "C_x": capacitance })
        }
    }
}

pub fn compensate(circuit: &Circuit, strategy: Strategy, json: bool) -> Result<Output, CliError> {
    let result = run_compensation(circuit, strategy)?;
    let last = &result.stages.last().expect("at least one stage").2;
    let mut warnings = Vec::new();
    if last.power_factor < result.before.power_factor {
        warnings.push(format!(
            "warning: power factor degraded ({} -> {})",
            render::round3(result.before.power_factor),
            render::round3(last.power_factor)
        ));
    }
    let final_comps = &result.stages.last().expect("at least one stage").1;

    let stdout = if json {
        let value = serde_json::json!({
            "compensators": final_comps.iter().map(compensator_json).collect::<Vec<_>>(),
            "before": render::report_json(&result.before),
            "stages": result.stages.iter().map(|(name, comps, r)| serde_json::json!({
                "name": name,
                "compensators": comps.iter().map(compensator_json).collect::<Vec<_>>(),
                "report": render::report_json(r),
            })).collect::<Vec<_>>(),
        });
        let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
        s.push('\n');
        s
    } else {
        let mut s = String::new();
        for c in final_comps {
            let _ = writeln!(s, "Compensator: {}", describe(c));
        }
        s.push('\n');
        let none: &[Compensator] = &[];
        let mut columns: Vec<(&str, &[Compensator], &PowerReport)> =
            vec![("Uncompensated", none, &result.before)];
        columns.extend(result.stages.iter().map(|(n, c, r)| (*n, c.as_slice(), r)));
        s.push_str(&render::comparison_table(&columns));
        s
    };
    Ok(Output { stdout, warnings })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pair {
    Source,
    Active,
    Scattered,
    Reactive,
    Iliovici,
    ScatteredReactive,
    G,
}

impl Pair {
    pub fn name(self) -> &'static str {
        match self {
            Pair::Source => "source",
            Pair::Active => "active",
            Pair::Scattered => "scattered",
            Pair::Reactive => "reactive",
            Pair::Iliovici => "iliovici",
            Pair::ScatteredReactive => "scattered_reactive",
            Pair::G => "g",
        }
    }

    fn current(self, d: &Decomposition) -> HarmonicSignal {
        match self {
            Pair::Source => d.total.clone(),
            Pair::Active => d.active.clone(),
            Pair::Scattered => d.scattered.clone(),
            Pair::Reactive => d.reactive.clone(),
            Pair::Iliovici => d.iliovici.clone(),
            Pair::ScatteredReactive => d.scattered_reactive.clone(),
            Pair::G => d.conductive(),
        }
    }
}

/// One line of the Lissajous summary.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopSummary {
    pub pair: Pair,
    pub area: f64,
    pub iliovici: f64,
    pub orientation: Orientation,
}

pub fn lissajous_summaries(
    circuit: &Circuit,
    pairs: &[Pair],
    samples: usize,
    prefix: Option<&Path>,
) -> Result<Vec<LoopSummary>, CliError> {
    let u = &circuit.source;
    let d = cpc::decompose(u, &current(circuit)?)?;
    pairs
        .iter()
        .map(|&pair| {
            let i = pair.current(&d);
            let fig = waveform::lissajous(u, &i, samples)?.with_labels("u", pair.name());
            if let Some(prefix) = prefix {
                let path = prefixed(prefix, pair.name());
                let mut file = create(&path)?;
                fig.write_csv(&mut file)
                    .and_then(|_| file.flush())
                    .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(LoopSummary {
                pair,
                area: fig.loop_area(),
                iliovici: metrics::iliovici_total(u, &i)?,
                orientation: fig.orientation(),
            })
        })
        .collect()
}

pub fn lissajous(
    circuit: &Circuit,
    pairs: &[Pair],
    samples: usize,
    prefix: Option<&Path>,
) -> Result<Output, CliError> {
    let rows = lissajous_summaries(circuit, pairs, samples, prefix)?;
    let mut out = format!(
        "{:<20} {:>12} {:>12} {:>12}  {}\n",
        "pair", "area", "2pi*Q_I", "area/2pi", "orientation"
    );
    for r in rows {
        let orientation = match r.orientation {
            Orientation::Anticlockwise => "anticlockwise",
            Orientation::Clockwise => "clockwise",
            Orientation::Degenerate => "degenerate",
        };
        let _ = writeln!(
            out,
            "{:<20} {:>12} {:>12} {:>12}  {}",
            r.pair.name(),
            render::round3(r.area),
            render::round3(2.0 * PI * r.iliovici),
            render::round3(r.area / (2.0 * PI)),
            orientation
        );
    }
    let _ = writeln!(out, "samples per period: {samples}");
    Ok(Output {
        stdout: out,
        warnings: Vec::new(),
    })
}
