//! Text, JSON and CSV renderings of power reports.

use std::fmt::Write as _;

use cpc_core::compensate::Compensator;
use cpc_core::metrics::PowerReport;
use cpc_core::spectrum::HarmonicSignal;
use serde::Serialize;

/// Rounds half away from zero to three decimals, never printing `-0.000`.
///
/// Ties are judged on the shortest decimal form of `x` (so `0.4025` rounds
/// up), not on its binary expansion.
pub fn round3(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let text = format!("{}", x.abs());
    let (int_part, frac_part) = text.split_once('.').unwrap_or((&text, ""));
    let mut digits: Vec<u8> = int_part
        .bytes()
        .chain(frac_part.bytes().chain(std::iter::repeat(b'0')).take(3))
        .map(|b| b - b'0')
        .collect();
    if frac_part.as_bytes().get(3).is_some_and(|&d| d >= b'5') {
        let mut k = digits.len();
        loop {
            if k == 0 {
                digits.insert(0, 1);
                break;
            }
            k -= 1;
            if digits[k] == 9 {
                digits[k] = 0;
            } else {
                digits[k] += 1;
                break;
            }
        }
    }
    let split = digits.len() - 3;
    let int: String = digits[..split].iter().map(|d| char::from(b'0' + d)).collect();
    let frac: String = digits[split..].iter().map(|d| char::from(b'0' + d)).collect();
    let negative = x < 0.0 && digits.iter().any(|&d| d != 0);
    format!("{}{int}.{frac}", if negative { "-" } else { "" })
}

struct Row {
    symbol: &'static str,
    unit: &'static str,
    value: fn(&PowerReport) -> Option<f64>,
}

const ROWS: &[Row] = &[
    Row { symbol: "P", unit: "W", value: |r| Some(r.active) },
    Row { symbol: "S", unit: "VA", value: |r| Some(r.apparent) },
    Row { symbol: "PF", unit: "-", value: |r| Some(r.power_factor) },
    Row { symbol: "Q_B", unit: "var", value: |r| Some(r.budeanu_reactive) },
    Row { symbol: "D_B", unit: "VA", value: |r| Some(r.budeanu_distortion) },
    Row { symbol: "Q_F", unit: "VA", value: |r| Some(r.fryze_nonactive) },
    Row { symbol: "D_s", unit: "VA", value: |r| Some(r.scattered) },
    Row { symbol: "Q_r", unit: "var", value: |r| Some(r.reactive) },
    Row { symbol: "Q_i", unit: "var", value: |r| Some(r.iliovici_normed) },
    Row { symbol: "Q_s", unit: "var", value: |r| Some(r.scattered_reactive) },
    Row { symbol: "Q_I", unit: "var", value: |r| Some(r.iliovici_average) },
    Row { symbol: "G_e", unit: "S", value: |r| Some(r.equivalent_conductance) },
    Row { symbol: "B_e", unit: "S", value: |r| r.equivalent_susceptance },
];

fn cell(v: Option<f64>) -> String {
    v.map(round3).unwrap_or_else(|| "---".into())
}

fn write_grid(out: &mut String, header: &[String], rows: &[Vec<String>], unit_column: bool) {
    let cols = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |out: &mut String, cells: &[String]| {
        let mut text = String::new();
        for (k, c) in cells.iter().enumerate() {
            if k == 0 {
                let _ = write!(text, "{c:<w$}", w = widths[0]);
            } else if unit_column && k == cols - 1 {
                let _ = write!(text, "  {c:<w$}", w = widths[k]);
            } else {
                let _ = write!(text, "  {c:>w$}", w = widths[k]);
            }
        }
        out.push_str(text.trim_end());
        out.push('\n');
    };
    line(out, header);
    for row in rows {
        line(out, row);
    }
}

fn harmonic_table(out: &mut String, report: &PowerReport) {
    let header = ["n", "P_n", "Q_n", "Q_In", "G_n", "B_n"].map(String::from);
    let rows: Vec<Vec<String>> = report
        .per_harmonic
        .iter()
        .map(|(n, h)| {
            vec![
                n.to_string(),
                round3(h.active),
                round3(h.reactive),
                round3(h.iliovici),
                round3(h.conductance),
                round3(h.susceptance),
            ]
        })
        .collect();
    write_grid(out, &header, &rows, false);
}

/// Single-column table of every report quantity at three decimals.
pub fn report_table(report: &PowerReport) -> String {
    let header = ["Quantity", "Value", "Unit"].map(String::from);
    let rows: Vec<Vec<String>> = ROWS
        .iter()
        .map(|r| vec![r.symbol.into(), cell((r.value)(report)), r.unit.into()])
        .collect();
    let mut out = String::new();
    write_grid(&mut out, &header, &rows, true);
    let _ = writeln!(out, "Load: {}", report.load_character);
    out.push('\n');
    harmonic_table(&mut out, report);
    out
}

/// Element values of the compensators as `(symbol, unit, value)` rows.
pub fn compensator_values(comps: &[Compensator]) -> Vec<(&'static str, &'static str, f64)> {
    let mut rows = Vec::new();
    for c in comps {
        match *c {
            Compensator::None => {}
            Compensator::ShuntCapacitor { capacitance } => rows.push(("C", "F", capacitance)),
            Compensator::ShuntInductor { inductance } => rows.push(("L", "H", inductance)),
            Compensator::SeriesLc { inductance, capacitance } => {
                rows.push(("L_x", "H", inductance));
                rows.push(("C_x", "F", capacitance));
            }
        }
    }
    rows
}

/// Side-by-side table of several scenarios, e.g. before/after compensation.
///
/// `columns[k]` is `(title, compensators attached, report)`.
pub fn comparison_table(columns: &[(&str, &[Compensator], &PowerReport)]) -> String {
    let mut header = vec!["Quantity".to_string()];
    header.extend(columns.iter().map(|c| c.0.to_string()));
    header.push("Unit".into());

    let mut element_rows: Vec<(&str, &str)> = Vec::new();
    for (_, comps, _) in columns {
        for (sym, unit, _) in compensator_values(comps) {
            if !element_rows.iter().any(|(s, _)| *s == sym) {
                element_rows.push((sym, unit));
            }
        }
    }
    let mut rows = Vec::new();
    for (sym, unit) in element_rows {
        let mut row = vec![sym.to_string()];
        for (_, comps, _) in columns {
            let v = compensator_values(comps)
                .into_iter()
                .find(|(s, _, _)| *s == sym)
                .map(|(_, _, v)| v);
            row.push(cell(v));
        }
        row.push(unit.into());
        rows.push(row);
    }
    for r in ROWS {
        let mut row = vec![r.symbol.to_string()];
        row.extend(columns.iter().map(|c| cell((r.value)(c.2))));
        row.push(r.unit.into());
        rows.push(row);
    }
    let mut out = String::new();
    write_grid(&mut out, &header, &rows, true);
    let loads: Vec<String> = columns
        .iter()
        .map(|c| format!("{}: {}", c.0, c.2.load_character))
        .collect();
    let _ = writeln!(out, "Load: {}", loads.join(", "));
    out
}

#[derive(Serialize)]
struct HarmonicJson {
    n: u32,
    p_n: f64,
    q_n: f64,
    q_in: f64,
    g_n: f64,
    b_n: f64,
}

#[derive(Serialize)]
pub struct ReportJson {
    p: f64,
    s: f64,
    pf: f64,
    q_b: f64,
    d_b: f64,
    q_f: f64,
    d_s: f64,
    q_r: f64,
    q_i: f64,
    q_s: f64,
    q_iliovici: f64,
    g_e: f64,
    b_e: Option<f64>,
    load_character: String,
    per_harmonic: Vec<HarmonicJson>,
}

impl From<&PowerReport> for ReportJson {
    fn from(r: &PowerReport) -> Self {
        ReportJson {
            p: r.active,
            s: r.apparent,
            pf: r.power_factor,
            q_b: r.budeanu_reactive,
            d_b: r.budeanu_distortion,
            q_f: r.fryze_nonactive,
            d_s: r.scattered,
            q_r: r.reactive,
            q_i: r.iliovici_normed,
            q_s: r.scattered_reactive,
            q_iliovici: r.iliovici_average,
            g_e: r.equivalent_conductance,
            b_e: r.equivalent_susceptance,
            load_character: r.load_character.to_string(),
            per_harmonic: r
                .per_harmonic
                .iter()
                .map(|(&n, h)| HarmonicJson {
                    n,
                    p_n: h.active,
                    q_n: h.reactive,
                    q_in: h.iliovici,
                    g_n: h.conductance,
                    b_n: h.susceptance,
                })
                .collect(),
        }
    }
}

pub fn report_json(report: &PowerReport) -> serde_json::Value {
    serde_json::to_value(ReportJson::from(report)).expect("report serializes")
}

/// `quantity,value,unit` rows at full precision, then per-harmonic rows.
pub fn report_csv(report: &PowerReport) -> String {
    let mut out = String::from("quantity,value,unit\n");
    for r in ROWS {
        let v = (r.value)(report).map(cpc_core::waveform::fmt_full).unwrap_or_default();
        let _ = writeln!(out, "{},{},{}", r.symbol, v, r.unit);
    }
    for (n, h) in &report.per_harmonic {
        for (sym, unit, v) in [
            ("P", "W", h.active),
            ("Q", "var", h.reactive),
            ("Q_I", "var", h.iliovici),
            ("G", "S", h.conductance),
            ("B", "S", h.susceptance),
        ] {
            let _ = writeln!(out, "{sym}_{n},{},{unit}", cpc_core::waveform::fmt_full(v));
        }
    }
    out
}

/// Coefficient listing `n  cos  sin` of one signal.
pub fn coefficient_table(name: &str, s: &HarmonicSignal) -> String {
    let mut out = format!("{name}:\n");
    if s.has_dc() {
        let _ = writeln!(out, "  dc  {}", round3(s.dc()));
    }
    if s.is_zero() {
        out.push_str("  (zero)\n");
    }
    for (n, h) in s.terms() {
        let _ = writeln!(out, "  n={n:<3} cos {:>9}  sin {:>9}", round3(h.cos), round3(h.sin));
    }
    out
}
