//! CatSpec parsing, job running, seeded generation and reports for the `hace` engine.

pub mod generate;
pub mod report;
pub mod resolve;
pub mod run;
pub mod spec;
pub mod suites;

use hace::{Error, Limits};
use thiserror::Error as ThisError;

pub use generate::{generate, GenProfile};
pub use report::{Check, Report, Status};
pub use spec::{parse, print, CatSpec, MethodChoice, ParseError};

/// Exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const LAW_FAILURE: i32 = 1;
    pub const CAP: i32 = 2;
    pub const PARSE: i32 = 3;
    pub const RESOLUTION: i32 = 4;
    pub const INVALID_DECLARATION: i32 = 5;
    pub const UNSUPPORTED: i32 = 6;
    pub const GENERATION: i32 = 7;
    pub const USAGE: i32 = 8;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Flags {
    pub seed: u64,
    pub lim: Limits,
    pub method: MethodChoice,
    pub format: Format,
    pub skip_assoc: bool,
    pub timing: bool,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            seed: 0,
            lim: Limits::default(),
            method: MethodChoice::One(hace::ends::Method::Equalizer),
            format: Format::Text,
            skip_assoc: false,
            timing: false,
        }
    }
}

#[derive(Debug, ThisError)]
pub enum RunError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("unresolved `{ident}`: {msg}")]
    Resolve { ident: String, msg: String },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Parse(_) => exit::PARSE,
            RunError::Resolve { .. } => exit::RESOLUTION,
            RunError::Core(e) => status_of(e).exit_code(),
            RunError::Io(_) => exit::USAGE,
        }
    }
}

/// How a module error shows up in a report.
pub fn status_of(e: &Error) -> Status {
    match e {
        _ if e.is_law_failure() => Status::Fail,
        Error::SizeCapExceeded { .. } => Status::Cap,
        Error::InvalidCategory(_)
        | Error::CyclicGraph(_)
        | Error::NotAPoset(_)
        | Error::NotAMonoid(_)
        | Error::NotALattice(_)
        | Error::NotStrictMonoidal(_)
        | Error::NotAFunctor(_)
        | Error::InterchangeFailure { .. }
        | Error::NonFunctorialSlot { .. } => Status::Error(exit::INVALID_DECLARATION),
        Error::GenerationExhausted(_) => Status::Error(exit::GENERATION),
        _ => Status::Error(exit::UNSUPPORTED),
    }
}

/// Parses, validates and runs a spec.
pub fn run_text(text: &str, flags: &Flags) -> Result<Report, RunError> {
    let spec = parse(text)?;
    run_spec(&spec, flags)
}

pub fn run_spec(spec: &CatSpec, flags: &Flags) -> Result<Report, RunError> {
    let r = resolve::resolve(spec, flags.skip_assoc, &flags.lim)?;
    Ok(run::run_resolved(&r, flags))
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    }
}
