//! Row-oriented emission: CSV (RFC 4180 via the `csv` crate) and a streamed
//! JSON array with one object per row. Both formats carry identical values;
//! floats use shortest round-trip formatting in either.

use std::io::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("bad format {s:?}: expected csv or json")),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Cell {
    Int(i64),
    Text(String),
    Float(f64),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Float(f) => format!("{f}"),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => serde_json::Value::from(*v),
            Cell::Text(s) => serde_json::Value::from(s.as_str()),
            Cell::Float(f) => serde_json::Value::from(*f),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Row {
    cells: Vec<(&'static str, Cell)>,
}

impl Row {
    pub fn new() -> Self {
        Row { cells: Vec::new() }
    }

    pub fn int(mut self, name: &'static str, value: i64) -> Self {
        self.cells.push((name, Cell::Int(value)));
        self
    }

    pub fn text(mut self, name: &'static str, value: impl Into<String>) -> Self {
        self.cells.push((name, Cell::Text(value.into())));
        self
    }

    pub fn float(mut self, name: &'static str, value: f64) -> Self {
        self.cells.push((name, Cell::Float(value)));
        self
    }

    fn header(&self) -> Vec<&'static str> {
        self.cells.iter().map(|(name, _)| *name).collect()
    }
}

/// Emit all rows to `out`. Rows must share one column layout.
pub fn emit(out: &mut impl Write, format: Format, rows: &[Row]) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(out);
            if let Some(first) = rows.first() {
                writer.write_record(first.header())?;
                for row in rows {
                    writer.write_record(row.cells.iter().map(|(_, c)| c.csv()))?;
                }
            }
            writer.flush()
        }
        Format::Json => {
            writeln!(out, "[")?;
            for (i, row) in rows.iter().enumerate() {
                let mut object = serde_json::Map::new();
                for (name, cell) in &row.cells {
                    object.insert((*name).to_string(), cell.json());
                }
                let tail = if i + 1 < rows.len() { "," } else { "" };
                writeln!(out, "{}{tail}", serde_json::Value::Object(object))?;
            }
            writeln!(out, "]")
        }
    }
}
