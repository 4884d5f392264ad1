//! Tables and their CSV, JSON and text renderings.

use std::fmt::Write as _;

use serde_json::{Map, Number, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    /// Decimal integer of any size.
    Int(String),
    Text(String),
    Empty,
}

impl Cell {
    pub fn int(v: impl ToString) -> Self {
        Cell::Int(v.to_string())
    }

    pub fn text(v: impl Into<String>) -> Self {
        Cell::Text(v.into())
    }

    pub fn opt_int<T: ToString>(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Cell::int)
    }

    fn as_str(&self) -> &str {
        match self {
            Cell::Int(s) | Cell::Text(s) => s,
            Cell::Empty => "",
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(s) => Value::Number(
                s.parse::<Number>()
                    .expect("integer cell holds a decimal integer"),
            ),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Table {
            name,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match table {}",
            self.name
        );
        self.rows.push(row);
    }
}

/// The output of one command: scalar fields plus one or more tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub command: &'static str,
    pub fields: Vec<(&'static str, Cell)>,
    pub tables: Vec<Table>,
}

impl Document {
    pub fn new(command: &'static str) -> Self {
        Document {
            command,
            fields: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
            Format::Text => self.to_text(),
        }
    }

    /// Tables only, separated by a blank line.
    pub fn to_csv(&self) -> String {
        let mut parts = Vec::new();
        for t in &self.tables {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(&t.columns).expect("write to memory");
            for row in &t.rows {
                w.write_record(row.iter().map(Cell::as_str))
                    .expect("write to memory");
            }
            let bytes = w.into_inner().expect("flush to memory");
            parts.push(String::from_utf8(bytes).expect("cells are UTF-8"));
        }
        parts.join("\n")
    }

    pub fn to_json(&self) -> String {
        let mut root = Map::new();
        root.insert("format".into(), Value::from(1));
        root.insert("command".into(), Value::from(self.command));
        for (k, v) in &self.fields {
            root.insert((*k).into(), v.to_json());
        }
        for t in &self.tables {
            let rows = t
                .rows
                .iter()
                .map(|row| {
                    Value::Object(
                        t.columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| ((*c).to_string(), v.to_json()))
                            .collect(),
                    )
                })
                .collect();
            root.insert(t.name.into(), Value::Array(rows));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("serialize json");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            let v = if *v == Cell::Empty { "-" } else { v.as_str() };
            writeln!(out, "{k}: {v}").unwrap();
        }
        for t in &self.tables {
            if !out.is_empty() {
                out.push('\n');
            }
            writeln!(out, "[{}]", t.name).unwrap();
            let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
            for row in &t.rows {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.as_str().chars().count());
                }
            }
            let line = |cells: Vec<&str>| {
                let padded: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect();
                padded.join("  ").trim_end().to_string()
            };
            writeln!(out, "{}", line(t.columns.clone())).unwrap();
            for row in &t.rows {
                writeln!(out, "{}", line(row.iter().map(Cell::as_str).collect())).unwrap();
            }
        }
        out
    }
}
