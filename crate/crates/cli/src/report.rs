use std::fmt::Write as _;

use serde::Serialize;
use vbalg::{Check, Status};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Records,
}

/// One check outcome on a named object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    pub object: String,
    pub check: String,
    pub status: String,
    pub location: Option<String>,
    pub residual: Option<String>,
}

impl Record {
    pub fn from_check(object: &str, c: &Check) -> Self {
        Record {
            object: object.to_string(),
            check: c.name.clone(),
            status: c.status.to_string(),
            location: c.witness.as_ref().map(|w| w.location.clone()).filter(|l| !l.is_empty()),
            residual: c.witness.as_ref().map(|w| w.residual.clone()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass.to_string()
    }
}

/// Lines of free text (tables of cochains, summaries) followed by check
/// records.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub text: Vec<String>,
    pub records: Vec<Record>,
}

impl Report {
    pub fn push(&mut self, object: &str, c: &Check) {
        self.records.push(Record::from_check(object, c));
    }

    pub fn extend<'a>(&mut self, object: &str, checks: impl IntoIterator<Item = &'a Check>) {
        for c in checks {
            self.push(object, c);
        }
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(Record::passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Table => {
                for line in &self.text {
                    out.push_str(line);
                    out.push('\n');
                }
                for r in &self.records {
                    write!(out, "{:<5} {} {}", r.status, r.object, r.check).expect("string");
                    match (&r.location, &r.residual) {
                        (Some(l), Some(res)) => write!(out, " at {l}: {res}").expect("string"),
                        (None, Some(res)) => write!(out, ": {res}").expect("string"),
                        _ => {}
                    }
                    out.push('\n');
                }
                if !self.records.is_empty() {
                    let failed = self.records.iter().filter(|r| !r.passed()).count();
                    writeln!(out, "checks: {}, failed: {}", self.records.len(), failed).expect("string");
                }
            }
            Format::Records => {
                for line in &self.text {
                    let v = serde_json::json!({ "text": line });
                    writeln!(out, "{v}").expect("string");
                }
                for r in &self.records {
                    writeln!(out, "{}", serde_json::to_string(r).expect("plain strings")).expect("string");
                }
            }
        }
        out
    }
}
