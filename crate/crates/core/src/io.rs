//! File formats and report serialization.
//!
//! States: `{"dim": d, "matrix": [[[re, im], ...], ...]}` row-major, or
//! `{"dim": d, "amplitudes": [[re, im], ...]}` for pure states.
//! Channels: `{"dim": d, "kraus": [matrix, ...]}` with matrices as above.
//! Reports: one JSON object per line, one line per check.
//!
//! All numbers are emitted with 17 significant digits so parsing them back
//! reproduces the exact f64, and emission is fully deterministic.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::relations::VerificationReport;
use crate::states::{validate_density, DensityMatrix, PureState};
use crate::tol::Tolerances;

/// 17-significant-digit decimal form; round-trips any finite f64.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0.0".to_string();
    }
    format!("{x:.16e}")
}

fn fmt_pair(z: Complex64) -> String {
    format!("[{}, {}]", fmt_f64(z.re), fmt_f64(z.im))
}

fn fmt_matrix(m: &ComplexMatrix) -> String {
    let d = m.dim();
    let rows: Vec<String> = (0..d)
        .map(|i| {
            let cols: Vec<String> = (0..d).map(|j| fmt_pair(m[(i, j)])).collect();
            format!("[{}]", cols.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Density-matrix state file.
pub fn density_to_json(rho: &DensityMatrix) -> String {
    format!(
        "{{\"dim\": {}, \"matrix\": {}}}",
        rho.dim(),
        fmt_matrix(rho.matrix())
    )
}

/// Pure-state file.
pub fn pure_to_json(psi: &PureState) -> String {
    let amps: Vec<String> = psi.amplitudes().iter().map(|&a| fmt_pair(a)).collect();
    format!(
        "{{\"dim\": {}, \"amplitudes\": [{}]}}",
        psi.dim(),
        amps.join(", ")
    )
}

/// Channel file.
pub fn channel_to_json(dim: usize, kraus: &[ComplexMatrix]) -> String {
    let mats: Vec<String> = kraus.iter().map(fmt_matrix).collect();
    format!("{{\"dim\": {}, \"kraus\": [{}]}}", dim, mats.join(", "))
}

fn parse_error(context: &str) -> Error {
    Error::Parse(context.to_string())
}

fn as_pair(v: &serde_json::Value, context: &str) -> Result<Complex64> {
    let arr = v.as_array().ok_or_else(|| parse_error(context))?;
    if arr.len() != 2 {
        return Err(parse_error(context));
    }
    let re = arr[0].as_f64().ok_or_else(|| parse_error(context))?;
    let im = arr[1].as_f64().ok_or_else(|| parse_error(context))?;
    Ok(Complex64::new(re, im))
}

fn parse_matrix(v: &serde_json::Value, dim: usize) -> Result<ComplexMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| parse_error("matrix must be an array of rows"))?;
    if rows.len() != dim {
        return Err(parse_error("matrix row count does not match dim"));
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for row in rows {
        let cols = row
            .as_array()
            .ok_or_else(|| parse_error("matrix row must be an array"))?;
        if cols.len() != dim {
            return Err(parse_error("matrix column count does not match dim"));
        }
        for cell in cols {
            entries.push(as_pair(cell, "matrix entry must be [re, im]")?);
        }
    }
    ComplexMatrix::from_entries(dim, entries)
}

/// A parsed state file: either form.
pub enum StateFile {
    Density(DensityMatrix),
    Pure(PureState),
}

impl StateFile {
    /// View as a density matrix (pure states become projectors).
    pub fn density(&self, tol: &Tolerances) -> DensityMatrix {
        match self {
            Self::Density(rho) => rho.clone(),
            Self::Pure(psi) => psi.density(tol),
        }
    }

    pub fn pure(&self) -> Option<&PureState> {
        match self {
            Self::Pure(psi) => Some(psi),
            Self::Density(_) => None,
        }
    }
}

/// Parse and validate a state file (density or pure form).
pub fn state_from_json(text: &str, tol: &Tolerances) -> Result<StateFile> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| parse_error(&format!("invalid JSON: {e}")))?;
    let dim = v
        .get("dim")
        .and_then(|d| d.as_u64())
        .ok_or_else(|| parse_error("missing integer field \"dim\""))? as usize;
    if let Some(m) = v.get("matrix") {
        let matrix = parse_matrix(m, dim)?;
        return Ok(StateFile::Density(validate_density(&matrix, tol)?));
    }
    if let Some(a) = v.get("amplitudes") {
        let arr = a
            .as_array()
            .ok_or_else(|| parse_error("amplitudes must be an array"))?;
        if arr.len() != dim {
            return Err(parse_error("amplitude count does not match dim"));
        }
        let mut amps = Vec::with_capacity(dim);
        for cell in arr {
            amps.push(as_pair(cell, "amplitude must be [re, im]")?);
        }
        return Ok(StateFile::Pure(PureState::new(amps, tol)?));
    }
    Err(parse_error("state file needs \"matrix\" or \"amplitudes\""))
}

/// Parse a channel file into its raw Kraus matrices (freeness is validated
/// separately so diagnostics can name the offending operator).
pub fn channel_from_json(text: &str) -> Result<(usize, Vec<ComplexMatrix>)> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| parse_error(&format!("invalid JSON: {e}")))?;
    let dim = v
        .get("dim")
        .and_then(|d| d.as_u64())
        .ok_or_else(|| parse_error("missing integer field \"dim\""))? as usize;
    let kraus = v
        .get("kraus")
        .and_then(|k| k.as_array())
        .ok_or_else(|| parse_error("missing array field \"kraus\""))?;
    if kraus.is_empty() {
        return Err(parse_error("channel needs at least one Kraus operator"));
    }
    let mut ops = Vec::with_capacity(kraus.len());
    for m in kraus {
        ops.push(parse_matrix(m, dim)?);
    }
    Ok((dim, ops))
}

/// One JSON line per check: suite metadata, violation, verdict and the worst
/// witness state.
pub fn report_to_json_lines(report: &VerificationReport) -> String {
    let mut out = String::new();
    for check in &report.checks {
        let worst = match check.worst_state() {
            Some(state) => density_to_json(state),
            None => "null".to_string(),
        };
        out.push_str(&format!(
            "{{\"suite\": {}, \"dim\": {}, \"samples\": {}, \"seed\": {}, \"check\": {}, \"kind\": \"{}\", \"max_violation\": {}, \"tolerance\": {}, \"pass\": {}, \"counterexamples\": {}, \"worst_state\": {}}}\n",
            serde_json::Value::String(report.suite_id.clone()),
            report.dim,
            check.samples,
            report.seed,
            serde_json::Value::String(check.check_id.clone()),
            check.kind.as_str(),
            fmt_f64(check.max_violation),
            fmt_f64(check.tolerance),
            check.pass,
            check.counterexamples,
            worst,
        ));
    }
    out
}

/// Measure value line for the CLI; infinities are the string `"inf"`.
pub fn measure_to_json(measure: &str, alpha: Option<f64>, value: f64) -> String {
    let alpha_s = match alpha {
        Some(a) => fmt_f64(a),
        None => "null".to_string(),
    };
    let value_s = if value.is_finite() {
        fmt_f64(value)
    } else {
        "\"inf\"".to_string()
    };
    format!("{{\"measure\": \"{measure}\", \"alpha\": {alpha_s}, \"value\": {value_s}}}")
}
