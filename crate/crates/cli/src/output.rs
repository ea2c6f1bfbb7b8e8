//! File formats. Every float is written as `{:.16e}` (17 significant
//! digits), and every reader re-checks the invariants of what it loads.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use qwalk_core::classical::RwRow;
use qwalk_core::{AmplitudeField, EntropyRecord};

use crate::error::CliError;

pub const AMPLITUDE_HEADER: [&str; 10] =
    ["x", "y", "reL", "imL", "reR", "imR", "reD", "imD", "reU", "imU"];
pub const DISTRIBUTION_HEADER: [&str; 3] = ["x", "y", "p"];
pub const NORM_HEADER: [&str; 3] = ["n", "norm", "deviation"];
pub const ENTROPY_HEADER: [&str; 15] = [
    "n", "s_c", "s_shannon", "s_L", "s_R", "s_D", "s_U", "eig1", "eig2", "eig3", "eig4", "normL",
    "normR", "normD", "normU",
];
pub const BASELINE_HEADER: [&str; 4] = ["n", "s_rw", "ratio1", "bracket2"];

const SUM_TOL: f64 = 1e-10;

pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

fn writer(path: &Path) -> Result<csv::Writer<File>, CliError> {
    let file = File::create(path)
        .map_err(|e| CliError::Resource(format!("{}: {e}", path.display())))?;
    Ok(csv::Writer::from_writer(file))
}

fn bad(path: &Path, line: usize, what: impl std::fmt::Display) -> CliError {
    CliError::Failure(format!("{}: record {line}: {what}", path.display()))
}

fn open(path: &Path, header: &[&str]) -> Result<csv::Reader<File>, CliError> {
    let mut r = csv::Reader::from_path(path)?;
    let got: Vec<String> = r.headers()?.iter().map(String::from).collect();
    if got != header {
        return Err(bad(path, 0, format!("header {got:?}, expected {header:?}")));
    }
    Ok(r)
}

fn num(path: &Path, line: usize, s: &str) -> Result<f64, CliError> {
    s.parse::<f64>().map_err(|e| bad(path, line, format!("{s:?}: {e}")))
}

fn int(path: &Path, line: usize, s: &str) -> Result<i64, CliError> {
    s.parse::<i64>().map_err(|e| bad(path, line, format!("{s:?}: {e}")))
}

fn site_allowed(n: usize, x: i64, y: i64) -> bool {
    x.abs() + y.abs() <= n as i64 && (x + y + n as i64).rem_euclid(2) == 0
}

/// Amplitudes on the parity sites `|x| + |y| ≤ n`, `x + y + n` even.
pub fn write_amplitudes(path: &Path, field: &AmplitudeField) -> Result<(), CliError> {
    let n = field.time();
    let mut w = writer(path)?;
    w.write_record(AMPLITUDE_HEADER)?;
    for (x, y, s) in field.parity_sites() {
        if x.abs() + y.abs() > n as i64 {
            continue;
        }
        let mut rec = vec![x.to_string(), y.to_string()];
        for z in s {
            rec.push(fmt(z.re));
            rec.push(fmt(z.im));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeRow {
    pub x: i64,
    pub y: i64,
    pub amplitudes: [[f64; 2]; 4],
}

pub fn read_amplitudes(path: &Path, n: usize) -> Result<Vec<AmplitudeRow>, CliError> {
    let mut r = open(path, &AMPLITUDE_HEADER)?;
    let mut rows = Vec::new();
    let mut total = 0.0;
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let x = int(path, i + 1, &rec[0])?;
        let y = int(path, i + 1, &rec[1])?;
        if !site_allowed(n, x, y) {
            return Err(bad(path, i + 1, format!("site ({x}, {y}) is not reachable at n = {n}")));
        }
        let mut amplitudes = [[0.0; 2]; 4];
        for k in 0..4 {
            amplitudes[k] = [num(path, i + 1, &rec[2 + 2 * k])?, num(path, i + 1, &rec[3 + 2 * k])?];
            total += amplitudes[k][0].powi(2) + amplitudes[k][1].powi(2);
        }
        rows.push(AmplitudeRow { x, y, amplitudes });
    }
    if (total - 1.0).abs() > SUM_TOL {
        return Err(bad(path, rows.len(), format!("total probability {total}")));
    }
    Ok(rows)
}

pub fn write_distribution(path: &Path, field: &AmplitudeField) -> Result<(), CliError> {
    let n = field.time();
    let mut w = writer(path)?;
    w.write_record(DISTRIBUTION_HEADER)?;
    for (x, y, s) in field.parity_sites() {
        if x.abs() + y.abs() > n as i64 {
            continue;
        }
        let p: f64 = s.iter().map(|z| z.norm_sqr()).sum();
        w.write_record([x.to_string(), y.to_string(), fmt(p)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_distribution(path: &Path, n: usize) -> Result<Vec<(i64, i64, f64)>, CliError> {
    let mut r = open(path, &DISTRIBUTION_HEADER)?;
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let x = int(path, i + 1, &rec[0])?;
        let y = int(path, i + 1, &rec[1])?;
        let p = num(path, i + 1, &rec[2])?;
        if !site_allowed(n, x, y) {
            return Err(bad(path, i + 1, format!("site ({x}, {y}) is not reachable at n = {n}")));
        }
        if !(0.0..=1.0 + SUM_TOL).contains(&p) {
            return Err(bad(path, i + 1, format!("probability {p} outside [0, 1]")));
        }
        rows.push((x, y, p));
    }
    let total: f64 = rows.iter().map(|r| r.2).sum();
    if (total - 1.0).abs() > SUM_TOL {
        return Err(bad(path, rows.len(), format!("total probability {total}")));
    }
    Ok(rows)
}

pub fn write_norm_log(path: &Path, norms: &[(usize, f64)]) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(NORM_HEADER)?;
    for &(n, norm) in norms {
        w.write_record([n.to_string(), fmt(norm), fmt(norm - 1.0)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_norm_log(path: &Path) -> Result<Vec<(usize, f64)>, CliError> {
    let mut r = open(path, &NORM_HEADER)?;
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let n = int(path, i + 1, &rec[0])? as usize;
        let norm = num(path, i + 1, &rec[1])?;
        if (norm - 1.0).abs() > SUM_TOL {
            return Err(bad(path, i + 1, format!("norm {norm} at n = {n}")));
        }
        out.push((n, norm));
    }
    Ok(out)
}

pub fn write_entropy_series(path: &Path, records: &[EntropyRecord]) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(ENTROPY_HEADER)?;
    for r in records {
        let mut rec = vec![r.n.to_string(), fmt(r.s_c), fmt(r.s_shannon)];
        rec.extend(r.s_w.iter().map(|s| fmt_opt(*s)));
        rec.extend(r.eigs.iter().map(|&e| fmt(e)));
        rec.extend(r.norms.iter().map(|&e| fmt(e)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyRow {
    pub n: usize,
    pub s_c: f64,
    pub s_shannon: f64,
    pub s_w: [Option<f64>; 4],
    pub eigs: [f64; 4],
    pub norms: [f64; 4],
}

pub fn read_entropy_series(path: &Path) -> Result<Vec<EntropyRow>, CliError> {
    let mut r = open(path, &ENTROPY_HEADER)?;
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 1;
        let f = |k: usize| num(path, line, &rec[k]);
        let opt = |k: usize| -> Result<Option<f64>, CliError> {
            if rec[k].is_empty() {
                Ok(None)
            } else {
                num(path, line, &rec[k]).map(Some)
            }
        };
        let row = EntropyRow {
            n: int(path, line, &rec[0])? as usize,
            s_c: f(1)?,
            s_shannon: f(2)?,
            s_w: [opt(3)?, opt(4)?, opt(5)?, opt(6)?],
            eigs: [f(7)?, f(8)?, f(9)?, f(10)?],
            norms: [f(11)?, f(12)?, f(13)?, f(14)?],
        };
        if !(row.s_c >= -1e-12 && row.s_c <= 2.0 + 1e-12) {
            return Err(bad(path, line, format!("s_c = {} outside [0, 2]", row.s_c)));
        }
        let eig_sum: f64 = row.eigs.iter().sum();
        let norm_sum: f64 = row.norms.iter().sum();
        if (eig_sum - 1.0).abs() > 1e-9 || (norm_sum - 1.0).abs() > 1e-9 {
            return Err(bad(path, line, "spectrum or component norms do not sum to 1"));
        }
        if row.eigs.windows(2).any(|w| w[1] > w[0]) {
            return Err(bad(path, line, "eigenvalues not in descending order"));
        }
        let s: f64 = -row
            .eigs
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| l * l.log2())
            .sum::<f64>();
        if (s - row.s_c).abs() > 1e-9 {
            return Err(bad(path, line, format!("s_c = {} but spectrum gives {s}", row.s_c)));
        }
        if row.s_shannon < -1e-12 {
            return Err(bad(path, line, "negative Shannon entropy"));
        }
        out.push(row);
    }
    Ok(out)
}

pub fn write_baseline(path: &Path, rows: &[RwRow]) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(BASELINE_HEADER)?;
    for r in rows {
        w.write_record([r.n.to_string(), fmt(r.s_rw), fmt(r.ratio), fmt(r.bracket)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_baseline(path: &Path) -> Result<Vec<RwRow>, CliError> {
    let mut r = open(path, &BASELINE_HEADER)?;
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 1;
        let row = RwRow {
            n: int(path, line, &rec[0])? as u64,
            s_rw: num(path, line, &rec[1])?,
            ratio: num(path, line, &rec[2])?,
            bracket: num(path, line, &rec[3])?,
        };
        let half_log = 0.5 * (row.n as f64).log2();
        if (row.ratio - row.s_rw / half_log).abs() > 1e-12 || (row.bracket - (row.s_rw - half_log)).abs() > 1e-12 {
            return Err(bad(path, line, "ratio1/bracket2 inconsistent with s_rw"));
        }
        if row.s_rw < 0.0 || row.s_rw > (row.n as f64 + 1.0).log2() + 1e-12 {
            return Err(bad(path, line, format!("s_rw = {} outside [0, log2(n+1)]", row.s_rw)));
        }
        out.push(row);
    }
    Ok(out)
}

/// Whitespace-separated two-column data.
pub fn write_columns(path: &Path, header: &str, rows: &[(f64, f64)]) -> Result<(), CliError> {
    let mut f = std::io::BufWriter::new(
        File::create(path).map_err(|e| CliError::Resource(format!("{}: {e}", path.display())))?,
    );
    writeln!(f, "# {header}")?;
    for &(a, b) in rows {
        writeln!(f, "{} {}", fmt(a), fmt(b))?;
    }
    f.flush()?;
    Ok(())
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::Resource(format!("{}: {e}", path.display())))
}
