//! Tabular output: CSV with a JSON metadata comment line, or a single JSON
//! document. Reals are written with 12 significant digits so that reruns
//! are byte-identical.

use std::io::Write;

use serde_json::{json, Map, Value};

use crate::elementary::ElementarySample;
use crate::error::Result;
use crate::fock::BandGrid;
use crate::open_system::RateEntry;
use crate::scalar::Real;
use crate::spectroscopy::{BiasScan, TransitionMap, TransmissionTrace};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
}

impl Cell {
    fn render(&self) -> String {
        match *self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format_real(x),
        }
    }

    fn to_json(self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Real(x) if x.is_finite() => json!(x),
            Cell::Real(_) => Value::Null,
        }
    }
}

/// `{:.11e}`, with `nan`/`inf` spelled out.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.11e}")
    }
}

fn real<T: Real>(x: T) -> Cell {
    Cell::Real(x.as_f64())
}

fn int(i: usize) -> Cell {
    Cell::Int(i as i64)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub metadata: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            metadata: Map::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: Value) -> Self {
        self.metadata.insert(key.to_string(), value);
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// `# {json}` when there is metadata, then the header and rows.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        if !self.metadata.is_empty() {
            writeln!(w, "# {}", Value::Object(self.metadata.clone()))?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::render).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    /// `{"metadata": ..., "columns": [...], "rows": [[...], ...]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "metadata": Value::Object(self.metadata.clone()),
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(|c| c.to_json()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn write_json<W: Write>(&self, w: &mut W) -> Result<()> {
        serde_json::to_writer_pretty(&mut *w, &self.to_json()).map_err(std::io::Error::from)?;
        writeln!(w)?;
        Ok(())
    }
}

/// Long format (m, k, phi, E) over all grids; failed cells are `nan`.
pub fn band_table<T: Real>(grids: &[BandGrid<T>]) -> Table {
    let mut t = Table::new(&["m", "k", "phi", "E"]);
    let meta: Vec<Value> = grids
        .iter()
        .map(|g| {
            json!({
                "band": g.band,
                "nk": g.grid.nk,
                "nphi": g.grid.nphi,
                "truncation": g.truncation,
                "max_drift": g.max_drift.as_f64(),
                "converged": g.converged,
                "validated": g.validated,
                "failed_cells": g.failures.len(),
            })
        })
        .collect();
    t = t.with_meta("bands", Value::Array(meta));
    for g in grids {
        for (i, &k) in g.k_samples.iter().enumerate() {
            for (j, &phi) in g.phi_samples.iter().enumerate() {
                t.push(vec![int(g.band), real(k), real(phi), real(g.at(i, j))]);
            }
        }
    }
    t
}

pub fn elementary_table<T: Real>(samples: &[ElementarySample<T>]) -> Table {
    let mut t = Table::new(&["k", "phi", "E", "dE_dk", "dE_dphi", "gamma_vs_ground"]);
    for s in samples {
        t.push(vec![
            real(s.k),
            real(s.phi),
            real(s.energy),
            real(s.de_dk),
            real(s.de_dphi),
            real(s.gamma_vs_ground),
        ]);
    }
    t
}

pub fn rate_table<T: Real>(rates: &[RateEntry<T>]) -> Table {
    let mut t = Table::new(&["m", "n", "frequency", "up_rate", "down_rate", "matrix_element_sq"]);
    for r in rates {
        t.push(vec![
            int(r.m),
            int(r.n),
            real(r.frequency),
            real(r.up_rate),
            real(r.down_rate),
            real(r.matrix_element_sq),
        ]);
    }
    t
}

pub fn trace_table<T: Real>(trace: &TransmissionTrace<T>) -> Table {
    let mut t = Table::new(&["detuning", "T"])
        .with_meta("state", json!({"k": trace.state.k().as_f64(), "phi": trace.state.phi().as_f64()}))
        .with_meta("reference_frequency", json!(trace.reference_frequency.as_f64()))
        .with_meta("state_frequency", json!(trace.state_frequency.as_f64()))
        .with_meta("max_residual", json!(trace.max_residual.as_f64()))
        .with_meta("weak_drive", json!(trace.weak_drive));
    for (d, v) in trace.detunings.iter().zip(&trace.transmission) {
        t.push(vec![real(*d), real(*v)]);
    }
    t
}

pub fn transition_table<T: Real>(map: &TransitionMap<T>) -> Table {
    let mut t = Table::new(&["k", "phi", "omega10"]).with_meta("resolution", json!(map.resolution().as_f64()));
    for (i, &k) in map.k_samples.iter().enumerate() {
        for (j, &phi) in map.phi_samples.iter().enumerate() {
            t.push(vec![real(k), real(phi), real(map.at(i, j))]);
        }
    }
    t
}

pub fn bias_scan_table<T: Real>(scan: &BiasScan<T>) -> Table {
    let mut t = Table::new(&["n_x", "phi_x", "E0"])
        .with_meta("origin", json!({"k": scan.origin.k().as_f64(), "phi": scan.origin.phi().as_f64()}))
        .with_meta("max_deviation", json!(scan.max_deviation.as_f64()));
    for (i, &n) in scan.n_x.iter().enumerate() {
        for (j, &p) in scan.phi_x.iter().enumerate() {
            t.push(vec![real(n), real(p), real(scan.energies[scan.grid.flat(i, j)])]);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_formatting_is_fixed_width_scientific() {
        assert_eq!(format_real(1.0), "1.00000000000e0");
        assert_eq!(format_real(-0.000123456789012345), "-1.23456789012e-4");
        assert_eq!(format_real(f64::NAN), "nan");
    }

    #[test]
    fn csv_and_json_layout() {
        let mut t = Table::new(&["m", "x"]).with_meta("note", json!("a"));
        t.push(vec![Cell::Int(1), Cell::Real(0.5)]);
        t.push(vec![Cell::Int(2), Cell::Real(f64::NAN)]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "# {\"note\":\"a\"}\nm,x\n1,5.00000000000e-1\n2,nan\n");
        let v = t.to_json();
        assert_eq!(v["rows"][1][1], Value::Null);
        assert_eq!(v["columns"][0], "m");
    }

    #[test]
    fn no_metadata_line_when_empty() {
        let t = Table::new(&["a"]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(buf, b"a\n");
    }
}
