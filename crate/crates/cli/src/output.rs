//! Tabular results and their CSV/JSON renderings.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::numfmt::{fmt_num, round_sig};
use crate::VERSION;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Missing,
}

impl Cell {
    pub fn opt(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => round_sig(*x).map_or(Value::Null, |v| json!(v)),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Missing => Value::Null,
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub kind: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Scalar results attached to the table; CSV footer lines, JSON `meta`.
    pub meta: Vec<(&'static str, Cell)>,
}

impl Table {
    pub fn new(kind: &'static str, columns: &[&'static str]) -> Self {
        Self {
            kind,
            columns: columns.to_vec(),
            rows: Vec::new(),
            meta: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &'static str, value: Cell) {
        self.meta.push((key, value));
    }

    pub fn to_csv(&self, invocation: &str) -> String {
        let mut out = header_comment(invocation);
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        for (key, value) in &self.meta {
            out.push_str(&format!("# {key}={}\n", value.csv()));
        }
        out
    }

    pub fn to_json(&self, invocation: &str) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.to_string(), v.json())).collect();
        let doc = json!({
            "tool": "ptmathieu",
            "version": VERSION,
            "invocation": invocation,
            "kind": self.kind,
            "columns": self.columns,
            "rows": rows,
            "meta": meta,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json serialization");
        s.push('\n');
        s
    }
}

pub fn header_comment(invocation: &str) -> String {
    format!("# ptmathieu {VERSION}: {invocation}\n")
}

/// Writes to `out` through a temporary file in the same directory and a
/// rename, or to stdout when `out` is `None`.
pub fn write_output(out: Option<&Path>, contents: &str) -> std::io::Result<()> {
    let Some(path) = out else {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(contents.as_bytes())?;
        return stdout.flush();
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new("demo", &["branch", "eps", "a"]);
        t.push(vec!["zero".into(), Cell::Num(0.1), Cell::Num(-0.020000000000000004)]);
        t.push(vec!["zero".into(), Cell::Num(0.2), Cell::Missing]);
        t.meta("merged", Cell::Bool(false));
        t
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv("ptmathieu demo");
        let expected =
            format!("# ptmathieu {VERSION}: ptmathieu demo\nbranch,eps,a\nzero,0.1,-0.02\nzero,0.2,\n# merged=false\n");
        assert_eq!(csv, expected);
    }

    #[test]
    fn json_layout() {
        let v: Value = serde_json::from_str(&sample().to_json("x")).unwrap();
        assert_eq!(v["kind"], "demo");
        assert_eq!(v["rows"][0]["a"], json!(-0.02));
        assert_eq!(v["rows"][1]["a"], Value::Null);
        assert_eq!(v["meta"]["merged"], json!(false));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        std::fs::write(&path, "old").unwrap();
        write_output(Some(&path), "new\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "new\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
