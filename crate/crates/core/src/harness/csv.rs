//! CSV rendering and parsing for sweep and comparison output.
//!
//! Floats are written with 17 significant digits, enough for `f64` values
//! to survive a write/parse round trip bit for bit. The parser is strict:
//! exact header, fixed field count, finite numbers only. Comparison files
//! carry a machine-readable trailer of `#` lines with the extrema counts
//! and an echo of the run configuration.

use std::fmt::Write as _;

use super::config::SweepConfig;
use super::sweep::{CompareReport, SweepRecord};

/// Column schema of sweep output.
pub const SWEEP_HEADER: &str = "alpha,tau,C,log_negativity,converged,iterations,residual";

/// Column schema of comparison output.
pub const COMPARE_HEADER: &str = "tau,L_emft,L_exact";

/// Malformed CSV input.
#[derive(Debug, PartialEq, thiserror::Error)]
pub enum CsvError {
    #[error("missing or wrong header, expected '{SWEEP_HEADER}'")]
    BadHeader,
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

/// `f64` with full round-trip precision (17 significant digits).
fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Render sweep records in the fixed column schema, one line per record.
pub fn render_sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::with_capacity(32 + records.len() * 96);
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_float(r.alpha),
            fmt_float(r.tau),
            fmt_float(r.c),
            fmt_float(r.log_negativity),
            r.converged,
            r.iterations,
            fmt_float(r.residual),
        );
    }
    out
}

fn field_float(line: usize, name: &str, text: &str) -> Result<f64, CsvError> {
    let malformed = |reason: String| CsvError::Malformed { line, reason };
    let v: f64 = text
        .parse()
        .map_err(|_| malformed(format!("field '{name}': not a number: '{text}'")))?;
    if !v.is_finite() {
        return Err(malformed(format!("field '{name}': not finite: '{text}'")));
    }
    Ok(v)
}

/// Parse sweep CSV produced by [`render_sweep_csv`] (or compatible
/// sources). Strict by design: the header must match exactly and every
/// row must carry all seven fields with finite numbers.
pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRecord>, CsvError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == SWEEP_HEADER => {}
        _ => return Err(CsvError::BadHeader),
    }
    let mut records = Vec::new();
    for (idx, row) in lines {
        let line = idx + 1;
        let malformed = |reason: &str| CsvError::Malformed {
            line,
            reason: reason.to_string(),
        };
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 7 {
            return Err(malformed(&format!(
                "expected 7 fields, got {}",
                fields.len()
            )));
        }
        let converged = match fields[4] {
            "true" => true,
            "false" => false,
            other => {
                return Err(malformed(&format!(
                    "field 'converged': expected true or false, got '{other}'"
                )))
            }
        };
        let iterations: u32 = fields[5]
            .parse()
            .map_err(|_| malformed(&format!("field 'iterations': not a count: '{}'", fields[5])))?;
        records.push(SweepRecord {
            alpha: field_float(line, "alpha", fields[0])?,
            tau: field_float(line, "tau", fields[1])?,
            c: field_float(line, "C", fields[2])?,
            log_negativity: field_float(line, "log_negativity", fields[3])?,
            converged,
            iterations,
            residual: field_float(line, "residual", fields[6])?,
        });
    }
    Ok(records)
}

/// Render a comparison report: data rows, then the `#` trailer with
/// extrema counts, the count verdict, and the configuration echo.
pub fn render_compare_csv(report: &CompareReport, cfg: &SweepConfig) -> String {
    let mut out = String::with_capacity(32 + report.rows.len() * 72);
    out.push_str(COMPARE_HEADER);
    out.push('\n');
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_float(row.tau),
            fmt_float(row.l_emft),
            fmt_float(row.l_exact),
        );
    }
    let _ = writeln!(
        out,
        "# emft crests={} troughs={}",
        report.emft_crests, report.emft_troughs
    );
    let _ = writeln!(
        out,
        "# exact crests={} troughs={}",
        report.exact_crests, report.exact_troughs
    );
    let _ = writeln!(out, "# counts-equal={}", report.counts_equal);
    let _ = writeln!(
        out,
        "# config mode={} alpha={} tau-max={} tau-steps={} nu-e={} chain-n={} extrema-eps={}",
        cfg.mode, cfg.alpha_min, cfg.tau_max, cfg.tau_steps, cfg.nu_e, cfg.chain_n, cfg.extrema_eps
    );
    out
}
