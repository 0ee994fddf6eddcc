use std::fmt;

use thiserror::Error;

/// A single violated category law, with the entries that witness it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// An object has no identity, or its identity fails a unit law against `morphism`.
    MissingIdentity {
        object: String,
        morphism: Option<String>,
    },
    /// `h ∘ (g ∘ f) ≠ (h ∘ g) ∘ f`.
    NonAssociative { h: String, g: String, f: String },
    /// A composition entry whose operands or result have the wrong endpoints.
    IllTypedComposite { g: String, f: String },
    /// A composable pair without a composition entry.
    MissingComposite { g: String, f: String },
    /// A name that does not resolve to an object or morphism.
    DanglingId(String),
    /// A name declared twice.
    Duplicate(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingIdentity {
                object,
                morphism: None,
            } => {
                write!(f, "object {object} has no identity")
            }
            Violation::MissingIdentity {
                object,
                morphism: Some(m),
            } => {
                write!(f, "identity of {object} is not a unit for {m}")
            }
            Violation::NonAssociative { h, g, f: ff } => {
                write!(f, "composition not associative on ({h}, {g}, {ff})")
            }
            Violation::IllTypedComposite { g, f: ff } => {
                write!(f, "composite {g} . {ff} is ill-typed")
            }
            Violation::MissingComposite { g, f: ff } => {
                write!(f, "no composite given for {g} . {ff}")
            }
            Violation::DanglingId(s) => write!(f, "unknown identifier {s}"),
            Violation::Duplicate(s) => write!(f, "duplicate identifier {s}"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid category: {}", join(.0))]
    InvalidCategory(Vec<Violation>),
    #[error("graph has a cycle through {0}")]
    CyclicGraph(String),
    #[error("not a poset: {0}")]
    NotAPoset(String),
    #[error("not a monoid: {0}")]
    NotAMonoid(String),
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("not a strict monoidal category: {0}")]
    NotStrictMonoidal(String),
    #[error("size cap exceeded in {what}: {size} > {cap}")]
    SizeCapExceeded {
        what: String,
        size: u128,
        cap: usize,
    },
    #[error("slots {slot_i} and {slot_j} do not commute at {tuple}")]
    InterchangeFailure {
        slot_i: usize,
        slot_j: usize,
        tuple: String,
    },
    #[error("slot {slot} is not functorial: {detail}")]
    NonFunctorialSlot { slot: usize, detail: String },
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("not natural: {0}")]
    NotNatural(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("method unavailable: {0}")]
    MethodUnavailable(String),
    #[error("identity dinatural undefined for signature ({p},{q})")]
    NoIdentityDinat { p: usize, q: usize },
    #[error("factorization not unique: {0}")]
    NonUnique(String),
    #[error("no factorization: {0}")]
    NoFactorization(String),
    #[error("bijection failure: {0}")]
    BijectionFailure(String),
    #[error("no canonical embedding: {0}")]
    NoEmbedding(String),
    #[error("generation exhausted: {0}")]
    GenerationExhausted(String),
    #[error("law check failed: {0}")]
    LawFailure(String),
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that signal a failed mathematical check rather than bad input.
    pub fn is_law_failure(&self) -> bool {
        matches!(
            self,
            Error::NonUnique(_)
                | Error::NoFactorization(_)
                | Error::BijectionFailure(_)
                | Error::LawFailure(_)
                | Error::NotNatural(_)
        )
    }
}
