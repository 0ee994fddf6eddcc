//! Job records and their text and JSON renderings. Both renderings are deterministic; timings
//! appear only when requested.

use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The check ran into the size cap.
    Cap,
    /// Not applicable to this input.
    Skip,
    /// Any other module error, with its exit code.
    Error(i32),
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Cap => "cap",
            Status::Skip => "skip",
            Status::Error(_) => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass | Status::Skip => 0,
            Status::Fail => 1,
            Status::Cap => 2,
            Status::Error(c) => c,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            status,
            detail: detail.into(),
        }
    }

    /// Runs `f`, turning its verdict or error into a check.
    pub fn run(name: &str, f: impl FnOnce() -> hace::Result<(bool, String)>) -> Check {
        match f() {
            Ok((ok, detail)) => {
                Check::new(name, if ok { Status::Pass } else { Status::Fail }, detail)
            }
            Err(e) => Check::new(name, crate::status_of(&e), e.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Field {
    Text(String),
    List(Vec<String>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Record {
    pub job: String,
    pub inputs: Vec<(String, String)>,
    pub fields: Vec<(String, Field)>,
    pub checks: Vec<Check>,
    pub error: Option<(i32, String)>,
    pub timing_ms: Option<u128>,
}

impl Record {
    pub fn new(job: impl Into<String>) -> Record {
        Record {
            job: job.into(),
            ..Record::default()
        }
    }

    pub fn input(&mut self, k: impl Into<String>, v: impl Into<String>) {
        self.inputs.push((k.into(), v.into()));
    }

    pub fn text(&mut self, k: impl Into<String>, v: impl ToString) {
        self.fields.push((k.into(), Field::Text(v.to_string())));
    }

    pub fn list<T: ToString>(&mut self, k: impl Into<String>, v: impl IntoIterator<Item = T>) {
        self.fields.push((
            k.into(),
            Field::List(v.into_iter().map(|x| x.to_string()).collect()),
        ));
    }

    pub fn exit_code(&self) -> i32 {
        if let Some((c, _)) = self.error {
            return c;
        }
        self.checks
            .iter()
            .map(|c| c.status.exit_code())
            .find(|&c| c != 0)
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub seed: u64,
    pub cap: usize,
    pub records: Vec<Record>,
}

impl Report {
    /// The code of the first failing record, in declaration order.
    pub fn exit_code(&self) -> i32 {
        self.records
            .iter()
            .map(Record::exit_code)
            .find(|&c| c != 0)
            .unwrap_or(0)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("seed {}\ncap {}\n", self.seed, self.cap);
        for (i, r) in self.records.iter().enumerate() {
            out.push_str(&format!("\n[{}] {}\n", i + 1, r.job));
            for (k, v) in &r.inputs {
                out.push_str(&format!("  input {k}: {v}\n"));
            }
            for (k, v) in &r.fields {
                match v {
                    Field::Text(s) => out.push_str(&format!("  {k}: {s}\n")),
                    Field::List(xs) => out.push_str(&format!("  {k}: [{}]\n", xs.join(" "))),
                }
            }
            for c in &r.checks {
                out.push_str(&format!("  check {} {}", c.name, c.status.name()));
                if !c.detail.is_empty() {
                    out.push_str(&format!(" ({})", c.detail));
                }
                out.push('\n');
            }
            if let Some((code, msg)) = &r.error {
                out.push_str(&format!("  error {code}: {msg}\n"));
            }
            if let Some(t) = r.timing_ms {
                out.push_str(&format!("  time {t} ms\n"));
            }
        }
        let code = self.exit_code();
        out.push_str(&format!(
            "\nresult {} (exit {code})\n",
            if code == 0 { "ok" } else { "failed" }
        ));
        out
    }

    /// Pretty JSON with keys in lexicographic order.
    pub fn to_json(&self) -> String {
        let records: Vec<Value> = self
            .records
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut o = Map::new();
                o.insert("index".into(), json!(i + 1));
                o.insert("job".into(), json!(r.job));
                o.insert(
                    "inputs".into(),
                    Value::Object(r.inputs.iter().map(|(k, v)| (k.clone(), json!(v))).collect()),
                );
                o.insert(
                    "fields".into(),
                    Value::Object(
                        r.fields
                            .iter()
                            .map(|(k, v)| {
                                let v = match v {
                                    Field::Text(s) => json!(s),
                                    Field::List(xs) => json!(xs),
                                };
                                (k.clone(), v)
                            })
                            .collect(),
                    ),
                );
                o.insert(
                    "checks".into(),
                    Value::Array(
                        r.checks
                            .iter()
                            .map(|c| json!({"name": c.name, "status": c.status.name(), "detail": c.detail}))
                            .collect(),
                    ),
                );
                if let Some((code, msg)) = &r.error {
                    o.insert("error".into(), json!({"code": code, "message": msg}));
                }
                if let Some(t) = r.timing_ms {
                    o.insert("timing_ms".into(), json!(t as u64));
                }
                o.insert("exit".into(), json!(r.exit_code()));
                Value::Object(o)
            })
            .collect();
        let doc = json!({
            "seed": self.seed,
            "cap": self.cap,
            "jobs": records,
            "exit": self.exit_code(),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }
}
