//! Rendering of results as aligned tables (6 decimals), CSV (17 significant
//! digits) and JSON.

use nitm_core::{NitmResult, SolutionTable};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::Format;

pub const ROW_HEADER: [&str; 7] = ["star_param", "fp_inf_star", "lambda", "physical_param", "f0", "fp0", "fpp0"];
pub const PROFILE_HEADER: &str = "eta,f,fp,fpp";

/// `%.17g`: enough digits for every f64 to re-parse to itself.
pub fn g17(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Six decimals, switching to exponent form where that would hide the value.
pub fn fixed6(x: f64) -> String {
    let a = x.abs();
    if x != 0.0 && x.is_finite() && !(1e-3..1e7).contains(&a) {
        format!("{x:.6e}")
    } else {
        format!("{x:.6}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutputRow {
    pub star_param: f64,
    pub fp_inf_star: f64,
    pub lambda: f64,
    pub physical_param: f64,
    pub f0: f64,
    pub fp0: f64,
    pub fpp0: f64,
}

impl OutputRow {
    pub fn from_result(r: &NitmResult) -> Self {
        // Adding zero folds -0.0 into 0.0.
        Self {
            star_param: r.star_param.unwrap_or(0.0) + 0.0,
            fp_inf_star: r.fp_inf_star + 0.0,
            lambda: r.lambda + 0.0,
            physical_param: r.physical_param.unwrap_or(0.0) + 0.0,
            f0: r.f0 + 0.0,
            fp0: r.fp0 + 0.0,
            fpp0: r.fpp0 + 0.0,
        }
    }

    pub fn values(&self) -> [f64; 7] {
        [self.star_param, self.fp_inf_star, self.lambda, self.physical_param, self.f0, self.fp0, self.fpp0]
    }
}

/// One sweep entry: a solved row or the reason it failed.
pub type RowOutcome = (f64, Result<OutputRow, String>);

fn error_cell(reason: &str) -> String {
    let clean: String = reason.chars().map(|c| if c == ',' || c == '\n' { ';' } else { c }).collect();
    format!("ERROR({clean})")
}

fn aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn row_cells(row: &RowOutcome, fmt: fn(f64) -> String) -> Vec<String> {
    match &row.1 {
        Ok(r) => r.values().iter().map(|&v| fmt(v)).collect(),
        Err(reason) => {
            let mut cells = vec![fmt(row.0)];
            cells.extend(std::iter::repeat_n(error_cell(reason), ROW_HEADER.len() - 1));
            cells
        }
    }
}

fn row_json(row: &RowOutcome) -> Value {
    match &row.1 {
        Ok(r) => serde_json::to_value(r).expect("serialisable"),
        Err(reason) => {
            let mut m = Map::new();
            m.insert("star_param".into(), number(row.0));
            m.insert("error".into(), Value::String(reason.clone()));
            Value::Object(m)
        }
    }
}

/// Sweep output; JSON is an array with one object per row.
pub fn render_rows(rows: &[RowOutcome], format: Format) -> String {
    match format {
        Format::Table => aligned(&ROW_HEADER, &rows.iter().map(|r| row_cells(r, fixed6)).collect::<Vec<_>>()),
        Format::Csv => csv(&ROW_HEADER, &rows.iter().map(|r| row_cells(r, g17)).collect::<Vec<_>>()),
        Format::Json => json_text(&Value::Array(rows.iter().map(row_json).collect())),
    }
}

/// Single solve; JSON is one object.
pub fn render_row(row: &OutputRow, format: Format) -> String {
    match format {
        Format::Json => json_text(&serde_json::to_value(row).expect("serialisable")),
        _ => render_rows(&[(row.star_param, Ok(*row))], format),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Text(String),
}

/// Named scalar report. Table mode prints `key = value` lines.
pub fn render_report(fields: &[(&str, Field)], format: Format) -> String {
    match format {
        Format::Table => {
            let width = fields.iter().map(|f| f.0.len()).max().unwrap_or(0);
            fields
                .iter()
                .map(|(k, v)| {
                    let v = match v {
                        Field::Num(x) => fixed6(*x),
                        Field::Text(t) => t.clone(),
                    };
                    format!("{k:<width$} = {v}\n")
                })
                .collect()
        }
        Format::Csv => {
            let header: Vec<&str> = fields.iter().map(|f| f.0).collect();
            let row = fields
                .iter()
                .map(|(_, v)| match v {
                    Field::Num(x) => g17(*x),
                    Field::Text(t) => t.replace(',', ";"),
                })
                .collect();
            csv(&header, &[row])
        }
        Format::Json => {
            let map: Map<String, Value> = fields
                .iter()
                .map(|(k, v)| {
                    let v = match v {
                        Field::Num(x) => number(*x),
                        Field::Text(t) => Value::String(t.clone()),
                    };
                    (k.to_string(), v)
                })
                .collect();
            json_text(&Value::Object(map))
        }
    }
}

/// Per-boundary history of a classic solve followed by the accepted shear.
pub fn render_history(history: &[(f64, f64)], accepted: Option<(f64, f64)>, format: Format) -> String {
    let header = ["eta_inf_star", "lambda", "shear"];
    let shear = |l: f64| l.powi(-3);
    match format {
        Format::Table => {
            let rows: Vec<Vec<String>> =
                history.iter().map(|&(e, l)| vec![fixed6(e), fixed6(l), fixed6(shear(l))]).collect();
            let mut out = aligned(&header, &rows);
            if let Some((e, l)) = accepted {
                out.push_str(&format!("accepted shear = {} at eta_inf_star = {}\n", fixed6(shear(l)), fixed6(e)));
            }
            out
        }
        Format::Csv => {
            let mut h = header.to_vec();
            h.push("accepted");
            let rows: Vec<Vec<String>> = history
                .iter()
                .map(|&(e, l)| {
                    let acc = accepted.is_some_and(|a| a.0 == e);
                    vec![g17(e), g17(l), g17(shear(l)), (acc as u8).to_string()]
                })
                .collect();
            csv(&h, &rows)
        }
        Format::Json => {
            let entries: Vec<Value> = history
                .iter()
                .map(|&(e, l)| {
                    let mut m = Map::new();
                    m.insert("eta_inf_star".into(), number(e));
                    m.insert("lambda".into(), number(l));
                    m.insert("shear".into(), number(shear(l)));
                    Value::Object(m)
                })
                .collect();
            let mut m = Map::new();
            m.insert("boundaries".into(), Value::Array(entries));
            if let Some((e, l)) = accepted {
                m.insert("eta_inf_star".into(), number(e));
                m.insert("lambda".into(), number(l));
                m.insert("shear".into(), number(shear(l)));
            }
            json_text(&Value::Object(m))
        }
    }
}

pub fn profile_csv(table: &SolutionTable) -> String {
    let mut out = String::from(PROFILE_HEADER);
    out.push('\n');
    for (eta, s) in table.iter() {
        out.push_str(&format!("{},{},{},{}\n", g17(eta), g17(s.f), g17(s.fp), g17(s.fpp)));
    }
    out
}
