//! Table model shared by the CSV and JSON emitters, plus a reader used to
//! check that every emitted artifact round-trips through the tool itself.

use std::collections::BTreeMap;
use std::fmt::Write as _;

/// One table cell. Floats are carried as `f64` and formatted with 17
/// significant digits on output so artifacts are bit-reproducible.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Num(x) => format_float(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => csv_escape(s),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            // Serialized through the same fixed-width formatter as CSV so
            // both formats carry the identical 17-significant-digit text.
            Cell::Num(x) => serde_json::Value::String(format_float(*x)),
            Cell::Int(n) => serde_json::Value::from(*n),
            Cell::Bool(b) => serde_json::Value::from(*b),
            Cell::Text(s) => serde_json::Value::from(s.clone()),
        }
    }
}

/// 17 significant digits, scientific notation; round-trips every f64.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A metadata block plus a rectangular body.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    /// Echoed run parameters and tolerances, sorted by key on output.
    pub meta: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            meta: BTreeMap::new(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn set_meta(&mut self, key: &str, value: impl std::fmt::Display) {
        self.meta.insert(key.to_string(), value.to_string());
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "ragged row");
        self.rows.push(row);
    }

    /// `#`-prefixed metadata block, header line, one line per row.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::to_csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    /// One object with `meta` and `rows`; rows are column-keyed objects.
    pub fn to_json(&self) -> String {
        let meta: serde_json::Map<String, serde_json::Value> = self
            .meta
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::from(v.clone())))
            .collect();
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, cell)| (c.clone(), cell.to_json()))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        let doc = serde_json::json!({ "meta": meta, "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// A parsed artifact: metadata plus string-valued cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTable {
    pub meta: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Read back either output format (JSON documents start with `{`).
pub fn read_table(text: &str) -> Result<ParsedTable, String> {
    if text.trim_start().starts_with('{') {
        read_json(text)
    } else {
        read_csv(text)
    }
}

fn read_csv(text: &str) -> Result<ParsedTable, String> {
    let mut meta = BTreeMap::new();
    let mut columns: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix('#') {
            let (k, v) = rest
                .split_once(':')
                .ok_or_else(|| format!("malformed metadata line: {line}"))?;
            meta.insert(k.trim().to_string(), v.trim().to_string());
        } else if columns.is_none() {
            columns = Some(split_csv_line(line)?);
        } else {
            let cells = split_csv_line(line)?;
            let ncols = columns.as_ref().map_or(0, Vec::len);
            if cells.len() != ncols {
                return Err(format!("row has {} cells, expected {ncols}", cells.len()));
            }
            rows.push(cells);
        }
    }
    Ok(ParsedTable {
        meta,
        columns: columns.ok_or("missing header line")?,
        rows,
    })
}

fn split_csv_line(line: &str) -> Result<Vec<String>, String> {
    let mut cells = Vec::new();
    let mut cur = String::new();
    let mut chars = line.chars().peekable();
    let mut quoted = false;
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    cur.push('"');
                } else {
                    quoted = false;
                }
            }
            '"' if cur.is_empty() => quoted = true,
            ',' if !quoted => cells.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    if quoted {
        return Err(format!("unterminated quote in: {line}"));
    }
    cells.push(cur);
    Ok(cells)
}

fn read_json(text: &str) -> Result<ParsedTable, String> {
    let doc: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let meta = doc
        .get("meta")
        .and_then(|m| m.as_object())
        .ok_or("missing meta object")?
        .iter()
        .map(|(k, v)| {
            let s = v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string());
            (k.clone(), s)
        })
        .collect();
    let rows_json = doc
        .get("rows")
        .and_then(|r| r.as_array())
        .ok_or("missing rows array")?;
    let mut columns: Vec<String> = Vec::new();
    let mut rows = Vec::new();
    for row in rows_json {
        let obj = row.as_object().ok_or("row is not an object")?;
        if columns.is_empty() {
            columns = obj.keys().cloned().collect();
        }
        let cells = columns
            .iter()
            .map(|c| {
                let v = obj.get(c).ok_or_else(|| format!("missing column {c}"))?;
                Ok(v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string()))
            })
            .collect::<Result<Vec<String>, String>>()?;
        rows.push(cells);
    }
    Ok(ParsedTable { meta, columns, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["idx", "value", "label"]);
        t.set_meta("tool", "cryptoherm");
        t.set_meta("steps", 3);
        t.push_row(vec![
            Cell::Int(0),
            Cell::Num(1.5),
            Cell::Text("plain".into()),
        ]);
        t.push_row(vec![
            Cell::Int(1),
            Cell::Num(-2.25e-8),
            Cell::Text("needs,\"quoting\"".into()),
        ]);
        t
    }

    #[test]
    fn csv_round_trip() {
        let t = sample();
        let parsed = read_table(&t.to_csv()).unwrap();
        assert_eq!(parsed.meta["tool"], "cryptoherm");
        assert_eq!(parsed.columns, t.columns);
        assert_eq!(parsed.rows.len(), 2);
        assert_eq!(parsed.rows[1][2], "needs,\"quoting\"");
        assert_eq!(parsed.rows[1][1].parse::<f64>().unwrap(), -2.25e-8);
    }

    #[test]
    fn json_round_trip() {
        let t = sample();
        let parsed = read_table(&t.to_json()).unwrap();
        assert_eq!(parsed.meta["steps"], "3");
        assert_eq!(parsed.rows[0][1].parse::<f64>().unwrap(), 1.5);
    }

    #[test]
    fn float_formatting_round_trips() {
        for &x in &[0.0, -1.0, 1.0 / 3.0, 6.02e23, f64::MIN_POSITIVE] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }
}
