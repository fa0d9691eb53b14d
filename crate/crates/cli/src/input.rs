//! Input files and command-line value parsing.

use std::path::Path;

use serde::Deserialize;

use mpoly::{Composition, Error, GridFunction, MatrixG, Radicand, Scalar, ScalarContext};

/// On-disk matrix description. Entries are scalar literals in the grammar
/// of the declared mode, so exact values survive serialization.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    #[serde(default)]
    pub name: Option<String>,
    pub q: usize,
    pub mode: Mode,
    #[serde(default)]
    pub radicand: Option<i64>,
    pub entries: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

pub struct LoadedMatrix {
    pub name: Option<String>,
    pub matrix: MatrixG,
    pub mode: Mode,
    pub radicand: Option<i64>,
}

impl LoadedMatrix {
    /// One-line description for report headers.
    pub fn describe(&self) -> String {
        let mut out = self.name.clone().unwrap_or_else(|| "unnamed".to_string());
        out.push_str(&format!(" (q={}", self.matrix.q()));
        match self.mode {
            Mode::Exact => {
                out.push_str(", exact");
                if let Some(d) = self.radicand {
                    out.push_str(&format!(", d={d}"));
                }
            }
            Mode::Float => out.push_str(", float"),
        }
        out.push(')');
        out
    }
}

pub fn load_matrix(path: &Path, tol_override: Option<f64>) -> Result<LoadedMatrix, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read matrix file {}: {e}", path.display()))?;
    let file: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| format!("invalid matrix file {}: {e}", path.display()))?;
    let ctx = match file.mode {
        Mode::Exact => {
            let radicand = match file.radicand {
                Some(d) => Radicand::sqrt(d).map_err(|e| e.to_string())?,
                None => Radicand::plain(),
            };
            ScalarContext::Exact(radicand)
        }
        Mode::Float => {
            if file.radicand.is_some() {
                return Err("float mode does not take a radicand".to_string());
            }
            ScalarContext::approx(tol_override.unwrap_or(mpoly::DEFAULT_TOL))
        }
    };
    if file.entries.len() != file.q {
        return Err(format!(
            "matrix declares q = {} but has {} rows",
            file.q,
            file.entries.len()
        ));
    }
    let mut rows = Vec::with_capacity(file.q);
    for (i, row) in file.entries.iter().enumerate() {
        if row.len() != file.q {
            return Err(format!(
                "matrix declares q = {} but row {i} has {} entries",
                file.q,
                row.len()
            ));
        }
        let mut parsed = Vec::with_capacity(file.q);
        for (j, literal) in row.iter().enumerate() {
            let value = Scalar::parse(literal, &ctx)
                .map_err(|e| format!("entry ({i},{j}) '{literal}': {e}"))?;
            parsed.push(value);
        }
        rows.push(parsed);
    }
    let matrix = MatrixG::new(rows).map_err(|e| e.to_string())?;
    Ok(LoadedMatrix { name: file.name, matrix, mode: file.mode, radicand: file.radicand })
}

/// One grid point of a values file for `expand --values`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueEntry {
    pub composition: Vec<usize>,
    pub value: String,
}

pub fn load_grid_function(
    path: &Path,
    n: usize,
    q: usize,
    ctx: &ScalarContext,
) -> Result<GridFunction, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read values file {}: {e}", path.display()))?;
    let entries: Vec<ValueEntry> = serde_json::from_str(&text)
        .map_err(|e| format!("invalid values file {}: {e}", path.display()))?;
    let mut pairs = Vec::with_capacity(entries.len());
    for entry in entries {
        let composition = Composition::new(entry.composition).map_err(|e| e.to_string())?;
        let value = Scalar::parse(&entry.value, ctx)
            .map_err(|e| format!("value at {composition}: {e}"))?;
        pairs.push((composition, value));
    }
    GridFunction::new(n, q, pairs).map_err(|e| e.to_string())
}

/// Parses a comma-separated composition and validates it against the
/// expected arity and weight, naming both in any complaint.
pub fn parse_composition(text: &str, q: usize, n: usize) -> Result<Composition, String> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|piece| {
            piece
                .trim()
                .parse::<usize>()
                .map_err(|_| format!("'{piece}' is not a nonnegative integer"))
        })
        .collect::<Result<_, _>>()?;
    if parts.len() != q {
        return Err(format!(
            "composition '{text}' has {} parts but the matrix needs q = {q}",
            parts.len()
        ));
    }
    let total: usize = parts.iter().sum();
    if total != n {
        return Err(format!(
            "composition '{text}' sums to {total} but n = {n} was requested"
        ));
    }
    Composition::new(parts).map_err(|e| e.to_string())
}

/// Exponent vector for `expand --monomial`; only the length is constrained.
pub fn parse_exponents(text: &str, q: usize) -> Result<Vec<usize>, String> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|piece| {
            piece
                .trim()
                .parse::<usize>()
                .map_err(|_| format!("'{piece}' is not a nonnegative integer"))
        })
        .collect::<Result<_, _>>()?;
    if parts.len() != q {
        return Err(format!(
            "monomial '{text}' has {} exponents but the matrix needs q = {q}",
            parts.len()
        ));
    }
    Ok(parts)
}

/// Maps library errors onto the exit-code contract: 3 for budget refusals,
/// 2 for everything else (usage, parsing, unsatisfied hypotheses).
pub fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::BudgetExceeded { .. } => 3,
        _ => 2,
    }
}
