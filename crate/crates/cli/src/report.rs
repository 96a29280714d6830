//! Report emission: one table per run, rendered as CSV or JSON.

use std::fmt;

use anyhow::Result;
use serde_json::{json, Map, Value};

/// Outcome of a run, ordered from best to worst.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    /// A falsification witness was found.
    Witness,
    /// The budget ran out before a verdict.
    Indeterminate,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Witness => 1,
            Status::Indeterminate => 2,
        }
    }

    pub fn from_pass(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Witness
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Witness => "witness",
            Status::Indeterminate => "indeterminate",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A table of rows under a fixed header, an overall status, and free-form
/// JSON detail (witnesses, certificates) that only the JSON rendering carries.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub status: Status,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub detail: Value,
}

impl Report {
    pub fn new(command: &'static str, header: &[&'static str]) -> Self {
        Report {
            command,
            status: Status::Pass,
            header: header.to_vec(),
            rows: Vec::new(),
            detail: Value::Null,
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    /// Keeps the worse of the current and the given status.
    pub fn worsen(&mut self, status: Status) {
        self.status = self.status.max(status);
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                Ok(String::from_utf8(w.into_inner()?)?)
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let obj: Map<String, Value> = self
                            .header
                            .iter()
                            .zip(r)
                            .map(|(h, c)| (h.to_string(), Value::String(c.clone())))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let doc = json!({
                    "command": self.command,
                    "status": self.status.to_string(),
                    "rows": rows,
                    "detail": self.detail,
                });
                Ok(serde_json::to_string_pretty(&doc)? + "\n")
            }
        }
    }
}

/// Shorthand for turning displayable values into a row.
#[macro_export]
macro_rules! cells {
    ($($v:expr),* $(,)?) => { vec![$($v.to_string()),*] };
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", &["a", "b"]);
        r.row(cells![1, "x,y"]);
        r.worsen(Status::Witness);
        r.worsen(Status::Pass);
        r
    }

    #[test]
    fn csv_quotes_embedded_commas() {
        assert_eq!(sample().render(Format::Csv).unwrap(), "a,b\n1,\"x,y\"\n");
    }

    #[test]
    fn json_keys_rows_by_header() {
        let v: Value = serde_json::from_str(&sample().render(Format::Json).unwrap()).unwrap();
        assert_eq!(v["status"], "witness");
        assert_eq!(v["rows"][0]["b"], "x,y");
    }

    #[test]
    fn status_only_gets_worse() {
        let mut r = Report::new("demo", &[]);
        r.worsen(Status::Indeterminate);
        r.worsen(Status::Witness);
        assert_eq!(r.status.exit_code(), 2);
    }
}
