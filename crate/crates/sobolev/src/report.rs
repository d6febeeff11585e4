use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::numfmt::sci16;
use crate::AppResult;

/// One table entry. Reals render as `%.16e` in CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    pub fn as_real(&self) -> Option<f64> {
        match *self {
            Cell::Real(x) => Some(x),
            Cell::Int(i) => Some(i as f64),
            Cell::Text(_) => None,
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => sci16(*x),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    /// Every input that influences the output, sufficient to rerun it.
    pub config: BTreeMap<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub diagnostics: BTreeMap<String, f64>,
    pub wall_time_secs: f64,
}

impl ExperimentReport {
    pub fn new(experiment: &str, columns: &[&str]) -> Self {
        ExperimentReport {
            experiment: experiment.to_owned(),
            config: BTreeMap::new(),
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            rows: Vec::new(),
            diagnostics: BTreeMap::new(),
            wall_time_secs: 0.0,
        }
    }

    pub fn echo(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("configuration values serialize");
        self.config.insert(key.to_owned(), v);
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn diagnostic(&mut self, key: &str, value: f64) {
        self.diagnostics.insert(key.to_owned(), value);
    }

    /// Column by name, as reals.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r[idx].as_real()).collect()
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> AppResult<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    /// Non-finite diagnostics become `null`.
    pub fn write_json(&self, out: &mut dyn Write) -> AppResult<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut r = ExperimentReport::new("demo", &["k", "value", "note"]);
        r.push_row(vec![1usize.into(), 0.5.into(), "a,b".into()]);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "k,value,note\n1,5.0000000000000000e-01,\"a,b\"\n"
        );
        assert_eq!(r.column("value"), Some(vec![0.5]));
        assert_eq!(r.column("note"), None);
    }

    #[test]
    fn json_carries_config() {
        let mut r = ExperimentReport::new("demo", &["k"]);
        r.echo("gamma", 0.25);
        r.diagnostic("residual", 1e-15);
        let mut buf = Vec::new();
        r.write_json(&mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["config"]["gamma"], 0.25);
        assert_eq!(v["experiment"], "demo");
    }
}
