//! Table, report, and coefficient rendering in pretty, CSV, and JSON form.
//! Every format is bytewise deterministic for a given input.

use serde_json::{json, Value};

use mpoly::{
    Composition, ExpansionResult, MTable, MultiplicationReport, OrthogonalityReport, Scalar,
    StructureReport, Violation,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum Format {
    Pretty,
    Csv,
    Json,
}

fn composition_json(c: &Composition) -> Value {
    Value::Array(c.parts().iter().map(|&p| json!(p)).collect())
}

fn scalar_json(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

/// Orientation of a printed table: rows are p and columns s, or the
/// transpose of that for eyeballing the swap laws.
pub struct TableView<'a> {
    pub table: &'a MTable,
    pub transposed: bool,
}

impl TableView<'_> {
    fn row_axis(&self) -> &'static str {
        if self.transposed {
            "s"
        } else {
            "p"
        }
    }

    fn col_axis(&self) -> &'static str {
        if self.transposed {
            "p"
        } else {
            "s"
        }
    }

    fn cell(&self, r: usize, c: usize) -> &Scalar {
        if self.transposed {
            self.table.value(c, r)
        } else {
            self.table.value(r, c)
        }
    }

    pub fn pretty(&self) -> String {
        let order = self.table.order();
        let labels: Vec<String> = order.iter().map(|c| c.to_string()).collect();
        let cells: Vec<Vec<String>> = (0..order.len())
            .map(|r| (0..order.len()).map(|c| self.cell(r, c).to_string()).collect())
            .collect();
        let mut width = labels.iter().map(String::len).max().unwrap_or(1);
        for row in &cells {
            for cell in row {
                width = width.max(cell.len());
            }
        }
        let mut out = format!(
            "n = {}, rows: {}, columns: {}\n",
            self.table.n(),
            self.row_axis(),
            self.col_axis()
        );
        out.push_str(&" ".repeat(width + 2));
        for label in &labels {
            out.push_str(&format!("{label:>w$}  ", w = width));
        }
        out.push('\n');
        for (r, row) in cells.iter().enumerate() {
            out.push_str(&format!("{:>w$}  ", labels[r], w = width));
            for cell in row {
                out.push_str(&format!("{cell:>w$}  ", w = width));
            }
            out.push('\n');
        }
        out
    }

    pub fn csv(&self) -> String {
        let order = self.table.order();
        let mut writer = csv::Writer::from_writer(Vec::new());
        let mut header = vec![format!("{}\\{}", self.row_axis(), self.col_axis())];
        header.extend(order.iter().map(|c| c.to_string()));
        writer.write_record(&header).expect("in-memory write");
        for r in 0..order.len() {
            let mut record = vec![order[r].to_string()];
            record.extend((0..order.len()).map(|c| self.cell(r, c).to_string()));
            writer.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf8")
    }

    pub fn json(&self) -> Value {
        let order = self.table.order();
        let values: Vec<Value> = (0..order.len())
            .map(|r| {
                Value::Array((0..order.len()).map(|c| scalar_json(self.cell(r, c))).collect())
            })
            .collect();
        json!({
            "n": self.table.n(),
            "rows": self.row_axis(),
            "columns": self.col_axis(),
            "order": order.iter().map(composition_json).collect::<Vec<_>>(),
            "values": values,
            "matrix_fingerprint": format!("{:016x}", self.table.matrix_fingerprint()),
        })
    }
}

pub fn structure_pretty(name: Option<&str>, report: &StructureReport) -> String {
    let mut out = String::new();
    if let Some(name) = name {
        out.push_str(&format!("matrix: {name}\n"));
    }
    out.push_str(&format!("hadamard:     {}\n", report.is_hadamard));
    out.push_str(&format!("symmetric:    {}\n", report.is_symmetric));
    out.push_str(&format!("core-pattern: {}\n", report.is_core_pattern));
    for w in &report.witnesses {
        out.push_str(&format!(
            "  witness: rows ({},{}) inner product {} != {}\n",
            w.i, w.j, w.found, w.expected
        ));
    }
    out
}

pub fn structure_csv(report: &StructureReport) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["predicate", "holds"]).expect("in-memory write");
    writer
        .write_record(["hadamard", &report.is_hadamard.to_string()])
        .expect("in-memory write");
    writer
        .write_record(["symmetric", &report.is_symmetric.to_string()])
        .expect("in-memory write");
    writer
        .write_record(["core-pattern", &report.is_core_pattern.to_string()])
        .expect("in-memory write");
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf8")
}

pub fn structure_json(name: Option<&str>, report: &StructureReport) -> Value {
    json!({
        "name": name,
        "hadamard": report.is_hadamard,
        "symmetric": report.is_symmetric,
        "core_pattern": report.is_core_pattern,
        "witnesses": report.witnesses.iter().map(|w| json!({
            "rows": [w.i, w.j],
            "found": scalar_json(&w.found),
            "expected": scalar_json(&w.expected),
        })).collect::<Vec<_>>(),
    })
}

fn violations_pretty(violations: &[Violation], limit: usize) -> String {
    let mut out = String::new();
    for v in violations.iter().take(limit) {
        out.push_str(&format!(
            "  ({}, {}): computed {} expected {}\n",
            v.p, v.t, v.computed, v.expected
        ));
    }
    if violations.len() > limit {
        out.push_str(&format!("  ... and {} more\n", violations.len() - limit));
    }
    out
}

fn violations_json(violations: &[Violation]) -> Vec<Value> {
    violations
        .iter()
        .map(|v| {
            json!({
                "p": composition_json(&v.p),
                "t": composition_json(&v.t),
                "computed": scalar_json(&v.computed),
                "expected": scalar_json(&v.expected),
            })
        })
        .collect()
}

pub fn orthogonality_pretty(report: &OrthogonalityReport) -> String {
    let mut out = format!(
        "orthogonality check: {}  n = {}\npairs checked: {}\nviolations: {}\n",
        report.variant.name(),
        report.n,
        report.pairs_checked,
        report.violations.len()
    );
    if !report.hypothesis_ok {
        out.push_str("hypothesis: NOT satisfied (forced run)\n");
    }
    if let Some(dev) = report.max_abs_deviation {
        out.push_str(&format!("max abs deviation: {dev:e}\n"));
    }
    out.push_str(&violations_pretty(&report.violations, 20));
    out.push_str(if report.passed() { "PASS\n" } else { "FAIL\n" });
    out
}

pub fn orthogonality_csv(report: &OrthogonalityReport) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["variant", "n", "pairs_checked", "violations", "pass"])
        .expect("in-memory write");
    writer
        .write_record([
            report.variant.name(),
            &report.n.to_string(),
            &report.pairs_checked.to_string(),
            &report.violations.len().to_string(),
            &report.passed().to_string(),
        ])
        .expect("in-memory write");
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf8")
}

pub fn orthogonality_json(report: &OrthogonalityReport) -> Value {
    json!({
        "variant": report.variant.name(),
        "n": report.n,
        "pairs_checked": report.pairs_checked,
        "hypothesis_ok": report.hypothesis_ok,
        "max_abs_deviation": report.max_abs_deviation,
        "violations": violations_json(&report.violations),
        "pass": report.passed(),
    })
}

#[allow(dead_code)]
pub fn multiplication_json(report: &MultiplicationReport) -> Value {
    json!({
        "n": report.n,
        "pairs_checked": report.pairs_checked,
        "violations": violations_json(&report.violations),
        "pass": report.passed(),
    })
}

pub fn expansion_pretty(order: &[Composition], result: &ExpansionResult) -> String {
    let mut out = format!(
        "side: {}  variant: {}  n = {}\n",
        result.side.name(),
        result.variant.name(),
        result.n
    );
    for (c, coeff) in order.iter().zip(&result.coefficients) {
        out.push_str(&format!("{c}: {coeff}\n"));
    }
    out
}

pub fn expansion_csv(order: &[Composition], result: &ExpansionResult) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["composition", "coefficient"]).expect("in-memory write");
    for (c, coeff) in order.iter().zip(&result.coefficients) {
        writer
            .write_record([c.to_string(), coeff.to_string()])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf8")
}

pub fn expansion_json(order: &[Composition], result: &ExpansionResult) -> Value {
    json!({
        "side": result.side.name(),
        "variant": result.variant.name(),
        "n": result.n,
        "order": order.iter().map(composition_json).collect::<Vec<_>>(),
        "coefficients": result.coefficients.iter().map(scalar_json).collect::<Vec<_>>(),
    })
}

pub fn fit_pretty(coefficients: &[Scalar]) -> String {
    let rendered: Vec<String> = coefficients.iter().map(Scalar::to_string).collect();
    format!("{}\n", rendered.join(", "))
}

pub fn fit_csv(coefficients: &[Scalar]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["degree", "coefficient"]).expect("in-memory write");
    for (degree, coeff) in coefficients.iter().enumerate() {
        writer
            .write_record([degree.to_string(), coeff.to_string()])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf8")
}

pub fn fit_json(fixed: &Composition, side: &str, coefficients: &[Scalar]) -> Value {
    json!({
        "fixed": composition_json(fixed),
        "side": side,
        "variable": if side == "s" { "s0-s1" } else { "p0-p1" },
        "coefficients": coefficients.iter().map(scalar_json).collect::<Vec<_>>(),
    })
}
