//! CSV and JSON renderings. CSV numbers carry 17 significant digits; JSON
//! numbers use the shortest representation that round-trips exactly.

use std::fmt::Write;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::transient::Trajectory;

use super::config::RunConfig;
use super::run::{Entry, SweepRecord, VerifyReport};

pub const SWEEP_COLUMNS: [&str; 14] = [
    "detuning",
    "re_chi1",
    "im_chi1",
    "abs_chi1",
    "re_chi3",
    "im_chi3",
    "abs_chi3",
    "re_chi3_approx",
    "im_chi3_approx",
    "abs_chi3_approx",
    "re_chi3_gd0",
    "im_chi3_gd0",
    "abs_chi3_gd0",
    "enhancement",
];

pub const TRANSIENT_COLUMNS: [&str; 4] = ["t", "abs_chi3", "re_chi3", "im_chi3"];

pub const VERIFY_COLUMNS: [&str; 7] = ["check", "n_atoms", "detuning", "measured", "threshold", "passed", "detail"];

/// `x` with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

enum Cell {
    Num(f64),
    Text(&'static str),
}

fn complex_cells(e: Entry<Complex64>) -> [Cell; 3] {
    match e {
        Ok(z) => [Cell::Num(z.re), Cell::Num(z.im), Cell::Num(z.norm())],
        Err(m) => [Cell::Text(m.as_str()), Cell::Text(m.as_str()), Cell::Text(m.as_str())],
    }
}

fn sweep_cells(r: &SweepRecord) -> Vec<Cell> {
    let mut cells = vec![Cell::Num(r.detuning)];
    for e in [r.chi1, r.chi3, r.chi3_approx, r.chi3_gd0] {
        cells.extend(complex_cells(e));
    }
    cells.push(match r.enhancement {
        Ok(k) => Cell::Num(k),
        Err(m) => Cell::Text(m.as_str()),
    });
    cells
}

fn header(out: &mut String, mode: &str, config: &RunConfig) {
    writeln!(out, "# superchi {mode} v{}", env!("CARGO_PKG_VERSION")).unwrap();
    for line in config.to_toml().lines() {
        writeln!(out, "# {line}").unwrap();
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\"").replace('\n', " "))
    } else {
        s.to_string()
    }
}

pub fn sweep_csv(config: &RunConfig, rows: &[SweepRecord]) -> String {
    let mut out = String::new();
    header(&mut out, "sweep", config);
    out.push_str(&SWEEP_COLUMNS.join(","));
    out.push('\n');
    for r in rows {
        let cells: Vec<String> = sweep_cells(r)
            .into_iter()
            .map(|c| match c {
                Cell::Num(x) => num(x),
                Cell::Text(t) => t.to_string(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn transient_csv(config: &RunConfig, traj: &Trajectory) -> String {
    let mut out = String::new();
    header(&mut out, "transient", config);
    out.push_str(&TRANSIENT_COLUMNS.join(","));
    out.push('\n');
    for (t, x) in traj.times.iter().zip(&traj.chi3_t) {
        writeln!(out, "{},{},{},{}", num(*t), num(x.norm()), num(x.re), num(x.im)).unwrap();
    }
    out
}

pub fn verify_csv(config: &RunConfig, report: &VerifyReport) -> String {
    let mut out = String::new();
    header(&mut out, "verify", config);
    out.push_str(&VERIFY_COLUMNS.join(","));
    out.push('\n');
    for c in &report.checks {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            c.name,
            c.n_atoms,
            c.detuning.map(num).unwrap_or_default(),
            c.measured.map(num).unwrap_or_else(|| "error".into()),
            num(c.threshold),
            c.passed,
            quote(&c.detail)
        )
        .unwrap();
    }
    out
}

fn document(mode: &str, config: &RunConfig, body: Map<String, Value>) -> String {
    let mut doc = Map::new();
    doc.insert("mode".into(), mode.into());
    doc.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    doc.insert("config".into(), serde_json::to_value(config).expect("config serializes"));
    doc.extend(body);
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json");
    s.push('\n');
    s
}

pub fn sweep_json(config: &RunConfig, rows: &[SweepRecord]) -> String {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let obj: Map<String, Value> = SWEEP_COLUMNS
                .iter()
                .zip(sweep_cells(r))
                .map(|(k, c)| {
                    let v = match c {
                        Cell::Num(x) => json!(x),
                        Cell::Text(t) => json!(t),
                    };
                    (k.to_string(), v)
                })
                .collect();
            Value::Object(obj)
        })
        .collect();
    let mut body = Map::new();
    body.insert("columns".into(), json!(SWEEP_COLUMNS));
    body.insert("rows".into(), Value::Array(rows));
    document("sweep", config, body)
}

pub fn transient_json(config: &RunConfig, traj: &Trajectory) -> String {
    let rows: Vec<Value> = traj
        .times
        .iter()
        .zip(&traj.chi3_t)
        .map(|(t, x)| json!({"t": t, "abs_chi3": x.norm(), "re_chi3": x.re, "im_chi3": x.im}))
        .collect();
    let mut body = Map::new();
    body.insert("columns".into(), json!(TRANSIENT_COLUMNS));
    body.insert("rows".into(), Value::Array(rows));
    document("transient", config, body)
}

pub fn verify_json(config: &RunConfig, report: &VerifyReport) -> String {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "check": c.name,
                "n_atoms": c.n_atoms,
                "detuning": c.detuning,
                "measured": c.measured,
                "threshold": c.threshold,
                "passed": c.passed,
                "detail": c.detail,
            })
        })
        .collect();
    let mut body = Map::new();
    body.insert("passed".into(), report.passed().into());
    body.insert("checks".into(), Value::Array(checks));
    document("verify", config, body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::app::run::Marker;

    fn record() -> SweepRecord {
        SweepRecord {
            detuning: 0.0,
            chi1: Ok(Complex64::new(0.0, -0.5)),
            chi3: Err(Marker::IndefiniteLimit),
            chi3_approx: Err(Marker::IndefiniteLimit),
            chi3_gd0: Err(Marker::Pole),
            enhancement: Err(Marker::IndefiniteLimit),
        }
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-20.0), "-2.0000000000000000e1");
        for x in [0.1, 1.0 / 3.0, -2.9418843615127e-3, 1e-300] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn markers_not_nan() {
        let s = sweep_csv(&RunConfig::default(), &[record()]);
        let last = s.lines().last().unwrap();
        assert!(!last.contains("NaN"));
        assert_eq!(last.split(',').count(), SWEEP_COLUMNS.len());
        assert!(last.contains("IndefiniteLimit") && last.contains("Pole"));
        let j = sweep_json(&RunConfig::default(), &[record()]);
        let v: Value = serde_json::from_str(&j).unwrap();
        assert_eq!(v["rows"][0]["abs_chi3"], "IndefiniteLimit");
        assert_eq!(v["rows"][0]["im_chi1"], -0.5);
    }

    #[test]
    fn csv_header_and_comment() {
        let s = sweep_csv(&RunConfig::default(), &[]);
        let lines: Vec<&str> = s.lines().collect();
        assert!(lines[..lines.len() - 1].iter().all(|l| l.starts_with('#')));
        assert_eq!(lines.last().unwrap().split(',').collect::<Vec<_>>(), SWEEP_COLUMNS);
        assert!(!s.contains('\r'));
        let body: String = s
            .lines()
            .filter_map(|l| l.strip_prefix("# "))
            .skip(1)
            .map(|l| format!("{l}\n"))
            .collect();
        assert_eq!(RunConfig::from_toml_str(&body).unwrap(), RunConfig::default());
    }

    #[test]
    fn csv_quotes_details() {
        assert_eq!(quote("a, b"), "\"a, b\"");
        assert_eq!(quote("plain"), "plain");
    }
}
