use std::fmt;

use mellin_core::exactlin::FieldElem;
use mellin_core::laurent::CharacterPoint;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub name: String,
    pub status: Status,
    pub witnesses: Value,
}

impl Record {
    pub fn new(name: impl Into<String>, ok: bool, witnesses: Value) -> Record {
        Record { name: name.into(), status: Status::from_bool(ok), witnesses }
    }

    pub fn skipped(name: impl Into<String>, reason: &str) -> Record {
        Record { name: name.into(), status: Status::Skipped, witnesses: json!({ "reason": reason }) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub records: Vec<Record>,
    pub status: Status,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: u64, records: Vec<Record>) -> Report {
        let status = Status::from_bool(records.iter().all(|r| r.status != Status::Fail));
        Report { command: command.into(), seed, records, status }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// One line per record; failing records carry their witnesses.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} (seed {})\n", self.command, self.seed);
        for r in &self.records {
            out.push_str(&format!("{:<7} {}\n", r.status, r.name));
            if r.status == Status::Fail {
                out.push_str(&format!("        {}\n", r.witnesses));
            }
        }
        let failed = self.records.iter().filter(|r| r.status == Status::Fail).count();
        out.push_str(&format!("status: {} ({} records, {} failed)\n", self.status, self.records.len(), failed));
        out
    }
}

pub fn elem(x: &FieldElem) -> Value {
    Value::String(x.to_string())
}

pub fn character(chi: &CharacterPoint) -> Value {
    Value::Array(chi.coords().iter().map(elem).collect())
}

pub fn dims<K: fmt::Display, V: Serialize>(m: &std::collections::BTreeMap<K, V>) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_is_fail_iff_some_record_fails() {
        let r = Report::new("x", 0, vec![Record::new("a", true, json!({})), Record::skipped("b", "n/a")]);
        assert!(r.passed());
        assert_eq!(r.exit_code(), 0);
        let r = Report::new("x", 0, vec![Record::new("a", true, json!({})), Record::new("c", false, json!({ "chi": [1] }))]);
        assert_eq!(r.exit_code(), 1);
        assert!(r.to_text().contains(r#"{"chi":[1]}"#));
        assert!(r.to_json().contains(r#""status": "fail""#));
    }

    #[test]
    fn empty_report_passes() {
        assert!(Report::new("corpus --count 0", 0, vec![]).passed());
    }
}
