use std::fmt::Write as _;

use serde_json::{Map, Value};

use crate::args::Format;
use crate::CliError;

/// A single output field value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    /// Rendered verbatim. Exact integers and decimals travel as text.
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        i64::try_from(v).map_or_else(|_| Cell::Text(v.to_string()), Cell::Int)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

/// Command output: the echoed parameters plus a table of results.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub params: Vec<(&'static str, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Body lines for text mode.
    pub text: Vec<String>,
    /// Parameters become leading CSV columns instead of a trailing comment.
    pub inline_params: bool,
    /// Text mode puts the provenance line first instead of last.
    pub comment_first: bool,
}

impl Report {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Self {
            command,
            params: Vec::new(),
            columns,
            rows: Vec::new(),
            text: Vec::new(),
            inline_params: true,
            comment_first: false,
        }
    }

    pub fn param(mut self, key: &'static str, value: impl Into<Cell>) -> Self {
        self.params.push((key, value.into()));
        self
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn comment(&self) -> String {
        let mut line = format!("# {}", self.command);
        for (k, v) in &self.params {
            let _ = write!(line, " {k}={}", v.render());
        }
        line
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Text => {
                let mut out = String::new();
                if self.comment_first {
                    out.push_str(&self.comment());
                    out.push('\n');
                }
                for line in &self.text {
                    out.push_str(line);
                    out.push('\n');
                }
                if !self.comment_first {
                    out.push_str(&self.comment());
                    out.push('\n');
                }
                Ok(out)
            }
            Format::Csv => {
                let mut writer = csv::Writer::from_writer(Vec::new());
                let mut header: Vec<&str> = Vec::new();
                if self.inline_params {
                    header.extend(self.params.iter().map(|(k, _)| *k));
                }
                header.extend(self.columns.iter().copied());
                writer.write_record(&header)?;
                for row in &self.rows {
                    let mut record: Vec<String> = Vec::with_capacity(header.len());
                    if self.inline_params {
                        record.extend(self.params.iter().map(|(_, v)| v.render()));
                    }
                    record.extend(row.iter().map(Cell::render));
                    writer.write_record(&record)?;
                }
                let bytes = writer.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
                let mut out = String::from_utf8(bytes).expect("csv output is utf-8");
                if !self.inline_params {
                    out.push_str(&self.comment());
                    out.push('\n');
                }
                Ok(out)
            }
            Format::Json => {
                let mut object = Map::new();
                object.insert("command".into(), Value::from(self.command));
                for (k, v) in &self.params {
                    object.insert((*k).into(), v.json());
                }
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        Value::Object(
                            self.columns
                                .iter()
                                .zip(row)
                                .map(|(k, v)| ((*k).to_owned(), v.json()))
                                .collect(),
                        )
                    })
                    .collect();
                object.insert("rows".into(), Value::Array(rows));
                let mut out = serde_json::to_string_pretty(&Value::Object(object))?;
                out.push('\n');
                Ok(out)
            }
        }
    }
}
