//! Command-line value parsers and the table format used for all emitted
//! data.
//!
//! A [`Table`] is a list of `key=value` metadata records, a header, and
//! rows of cells. Numbers are written with 17 significant digits
//! (`{:.16e}`) in both encodings, so CSV and JSON of the same table decode
//! to bit-identical values.
//!
//! CSV layout:
//!
//! ```text
//! # table=state
//! # norm=1.0000000000000000e0
//! n,re,im,p
//! 0,...
//! ```
//!
//! JSON layout: `{"table": ..., "meta": {...}, "columns": [...], "rows": [[...], ...]}`.

use std::fmt::Write as _;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodecError {
    #[error("invalid range '{0}': expected lo:hi with finite lo <= hi")]
    Range(String),
    #[error("invalid k list '{0}': expected comma-separated values in [0, 1]")]
    KList(String),
    #[error("invalid complex number '{0}'")]
    Complex(String),
    #[error("non-finite value in column '{column}'")]
    NonFinite { column: String },
    #[error("row {row} has {got} cells, header has {want}")]
    RowLength { row: usize, got: usize, want: usize },
    #[error("malformed table: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, CodecError>;

fn finite(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// `"lo:hi"` → `(lo, hi)`.
pub fn parse_range(s: &str) -> Result<(f64, f64)> {
    let err = || CodecError::Range(s.to_string());
    let (lo, hi) = s.split_once(':').ok_or_else(err)?;
    let (lo, hi) = (finite(lo).ok_or_else(err)?, finite(hi).ok_or_else(err)?);
    if lo > hi {
        return Err(err());
    }
    Ok((lo, hi))
}

/// `"0.25,0.5,1"` → values, each in `[0, 1]`.
pub fn parse_k_list(s: &str) -> Result<Vec<f64>> {
    let err = || CodecError::KList(s.to_string());
    let values = s
        .split(',')
        .map(|t| finite(t).filter(|k| (0.0..=1.0).contains(k)).ok_or_else(err))
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(err());
    }
    Ok(values)
}

/// Accepts `a`, `bi`, `a+bi`, `a-bi` (also `j`) and polar `r@phi` with
/// `phi` in radians.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let err = || CodecError::Complex(s.to_string());
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((r, phi)) = t.split_once('@') {
        let (r, phi) = (finite(r).ok_or_else(err)?, finite(phi).ok_or_else(err)?);
        return Ok(Complex64::from_polar(r, phi));
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return Ok(Complex64::new(finite(&t).ok_or_else(err)?, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imag = |part: &str| -> Result<f64> {
        match part {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            p => finite(p).ok_or_else(err),
        }
    };
    match split {
        Some(i) => Ok(Complex64::new(finite(&body[..i]).ok_or_else(err)?, imag(&body[i..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    pub fn as_num(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Num(v) => Some(*v),
            Cell::Text(_) => None,
        }
    }
}

fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub name: String,
    pub meta: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.meta.push((key.to_string(), value.into()));
        self
    }

    pub fn push_meta(&mut self, key: &str, value: impl Into<Cell>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    pub fn meta_value(&self, key: &str) -> Option<&Cell> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Row lengths match the header, every number is finite, and the name,
    /// meta entries and header survive the CSV comment-line layout.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CodecError::Malformed(m));
        let one_line = |s: &str| !s.contains(['\n', '\r']);
        if !one_line(&self.name) {
            return bad("table name spans lines".into());
        }
        for (i, (k, v)) in self.meta.iter().enumerate() {
            if !one_line(k) || k.contains('=') || k.trim_start() != k || k == "table" {
                return bad(format!("invalid meta key {k:?}"));
            }
            if self.meta[..i].iter().any(|(prev, _)| prev == k) {
                return bad(format!("duplicate meta key {k:?}"));
            }
            if matches!(v, Cell::Text(t) if !one_line(t)) {
                return bad(format!("meta value for {k:?} spans lines"));
            }
        }
        if self.columns.first().is_some_and(|c| c.starts_with('#')) {
            return bad("first column name starts with '#'".into());
        }
        let check = |column: &str, c: &Cell| match c {
            Cell::Num(v) if !v.is_finite() => Err(CodecError::NonFinite {
                column: column.to_string(),
            }),
            _ => Ok(()),
        };
        for (k, v) in &self.meta {
            check(k, v)?;
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.columns.len() {
                return Err(CodecError::RowLength {
                    row: i,
                    got: row.len(),
                    want: self.columns.len(),
                });
            }
            for (c, cell) in self.columns.iter().zip(row) {
                check(c, cell)?;
            }
        }
        Ok(())
    }

    fn cell_text(c: &Cell) -> String {
        match c {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => fmt_num(*v),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        self.validate()?;
        let mut out = String::new();
        let _ = writeln!(out, "# table={}", self.name);
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {}={}", k, Self::cell_text(v));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CodecError::Malformed(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Self::cell_text)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CodecError::Malformed(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).map_err(|e| CodecError::Malformed(e.to_string()))?);
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut table = Table::default();
        let mut body_start = 0;
        let mut named = false;
        for line in text.split_inclusive('\n') {
            let Some(rest) = line.strip_prefix('#') else { break };
            body_start += line.len();
            let rest = rest.trim_end_matches(['\n', '\r']).trim_start();
            let (k, v) = rest
                .split_once('=')
                .ok_or_else(|| CodecError::Malformed(format!("meta line without '=': {rest}")))?;
            if k == "table" && !named {
                table.name = v.to_string();
                named = true;
            } else {
                table.meta.push((k.to_string(), parse_cell(k, v)?));
            }
        }
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(&text.as_bytes()[body_start..]);
        let bad = |e: csv::Error| CodecError::Malformed(e.to_string());
        table.columns = rdr.headers().map_err(bad)?.iter().map(str::to_string).collect();
        if table.columns.iter().all(|c| c.is_empty()) {
            return Err(CodecError::Malformed("missing header".into()));
        }
        for record in rdr.records() {
            let record = record.map_err(bad)?;
            let row = table
                .columns
                .iter()
                .zip(record.iter())
                .map(|(c, v)| parse_cell(c, v))
                .collect::<Result<Vec<_>>>()?;
            table.rows.push(row);
        }
        table.validate()?;
        Ok(table)
    }

    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        let cell = |c: &Cell| match c {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => fmt_num(*v),
            Cell::Text(s) => json_string(s),
        };
        let mut out = String::new();
        let _ = write!(out, "{{\n  \"table\": {},\n  \"meta\": {{", json_string(&self.name));
        for (i, (k, v)) in self.meta.iter().enumerate() {
            let sep = if i == 0 { "" } else { "," };
            let _ = write!(out, "{sep}\n    {}: {}", json_string(k), cell(v));
        }
        out.push_str(if self.meta.is_empty() { "},\n" } else { "\n  },\n" });
        let cols: Vec<String> = self.columns.iter().map(|c| json_string(c)).collect();
        let _ = write!(out, "  \"columns\": [{}],\n  \"rows\": [", cols.join(", "));
        for (i, row) in self.rows.iter().enumerate() {
            let sep = if i == 0 { "" } else { "," };
            let cells: Vec<String> = row.iter().map(cell).collect();
            let _ = write!(out, "{sep}\n    [{}]", cells.join(", "));
        }
        out.push_str(if self.rows.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
        Ok(out)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        use serde_json::Value;
        let bad = |m: &str| CodecError::Malformed(m.to_string());
        let v: Value = serde_json::from_str(text).map_err(|e| CodecError::Malformed(e.to_string()))?;
        let obj = v.as_object().ok_or_else(|| bad("top level is not an object"))?;
        let name = obj
            .get("table")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing string 'table'"))?
            .to_string();
        let to_cell = |column: &str, v: &Value| -> Result<Cell> {
            match v {
                Value::Number(n) if n.is_i64() => Ok(Cell::Int(n.as_i64().unwrap_or_default())),
                Value::Number(n) => n.as_f64().filter(|x| x.is_finite()).map(Cell::Num).ok_or(CodecError::NonFinite {
                    column: column.to_string(),
                }),
                Value::String(s) => Ok(Cell::Text(s.clone())),
                _ => Err(bad("cells must be numbers or strings")),
            }
        };
        let mut meta = Vec::new();
        if let Some(m) = obj.get("meta") {
            let m = m.as_object().ok_or_else(|| bad("'meta' is not an object"))?;
            for (k, v) in m {
                meta.push((k.clone(), to_cell(k, v)?));
            }
        }
        let columns: Vec<String> = obj
            .get("columns")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing array 'columns'"))?
            .iter()
            .map(|c| c.as_str().map(str::to_string).ok_or_else(|| bad("column names must be strings")))
            .collect::<Result<_>>()?;
        let mut rows = Vec::new();
        for row in obj
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing array 'rows'"))?
        {
            let row = row.as_array().ok_or_else(|| bad("rows must be arrays"))?;
            let cells = row
                .iter()
                .enumerate()
                .map(|(i, v)| to_cell(columns.get(i).map(String::as_str).unwrap_or("?"), v))
                .collect::<Result<Vec<_>>>()?;
            rows.push(cells);
        }
        let table = Table {
            name,
            meta,
            columns,
            rows,
        };
        table.validate()?;
        Ok(table)
    }
}

fn parse_cell(column: &str, s: &str) -> Result<Cell> {
    if let Ok(v) = s.trim().parse::<i64>() {
        return Ok(Cell::Int(v));
    }
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Cell::Num(v)),
        Ok(_) => Err(CodecError::NonFinite {
            column: column.to_string(),
        }),
        Err(_) => Ok(Cell::Text(s.to_string())),
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-2.5:2.5").unwrap(), (-2.5, 2.5));
        assert_eq!(parse_range("0:0").unwrap(), (0.0, 0.0));
        for bad in ["1:0", "a:b", "1", "nan:1", "0:inf", ""] {
            assert!(parse_range(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn k_lists() {
        assert_eq!(parse_k_list("0.25, 0.5,1").unwrap(), vec![0.25, 0.5, 1.0]);
        for bad in ["", "1.5", "0.5,,1", "-0.1"] {
            assert!(parse_k_list(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn complex_numbers() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("2.5").unwrap(), c(2.5, 0.0));
        assert_eq!(parse_complex("-1.5i").unwrap(), c(0.0, -1.5));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_complex("1e-3-2e+1j").unwrap(), c(1e-3, -20.0));
        assert_eq!(parse_complex(" -0.5 - i ").unwrap(), c(-0.5, -1.0));
        let p = parse_complex("1.2@1.0471975511965976").unwrap();
        assert!((p - Complex64::from_polar(1.2, std::f64::consts::FRAC_PI_3)).norm() < 1e-15);
        for bad in ["", "1+", "x", "1++2i", "nan", "1@", "inf+1i"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    fn sample() -> Table {
        let mut t = Table::new("demo", &["n", "value", "label"])
            .with_meta("family", "algebraic")
            .with_meta("k", 0.1);
        t.push(vec![0usize.into(), (1.0 / 3.0).into(), "a,b".into()]);
        t.push(vec![1usize.into(), (-2.5e-300).into(), "plain".into()]);
        t
    }

    #[test]
    fn csv_and_json_round_trip_exactly() {
        let t = sample();
        let csv = t.to_csv().unwrap();
        let json = t.to_json().unwrap();
        assert_eq!(Table::from_csv(&csv).unwrap(), t);
        assert_eq!(Table::from_json(&json).unwrap(), t);
        assert!(csv.contains("3.3333333333333331e-1"));
    }

    #[test]
    fn rejects_non_finite_and_ragged() {
        let mut t = sample();
        t.rows[0][1] = Cell::Num(f64::NAN);
        assert!(t.to_csv().is_err());
        assert!(t.to_json().is_err());
        let mut t = sample();
        t.rows[1].pop();
        assert!(t.to_json().is_err());
        assert!(Table::from_csv("n,v\n1,inf\n").is_err());
        assert!(Table::from_csv("n,v\n1\n").is_err());
        assert!(Table::from_json("{\"table\":\"x\",\"columns\":[\"a\"],\"rows\":[[null]]}").is_err());
        assert!(Table::from_json("[]").is_err());
    }

    #[test]
    fn layout_conflicts_rejected() {
        // a '#' header would read back as a comment line
        assert!(Table::from_csv("\n#").is_err());
        assert!(Table::new("t", &["#a"]).to_csv().is_err());
        assert!(Table::new("a\nb", &["x"]).to_json().is_err());
        assert!(Table::new("t", &["x"]).with_meta("k=v", 1.0).to_csv().is_err());
        assert!(Table::new("t", &["x"]).with_meta("k", "two\nlines").to_csv().is_err());
        assert!(Table::new("t", &["x"]).with_meta("k", 1.0).with_meta("k", 2.0).to_json().is_err());
        assert!(Table::from_csv("# table=a\n# table=b\nx\n").is_err());
        let t = Table::from_csv("# table=\n# k=v\nx\n").unwrap();
        assert_eq!(t.name, "");
        assert_eq!(t.meta_value("k"), Some(&Cell::Text("v".into())));
    }
}
