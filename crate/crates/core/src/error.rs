use thiserror::Error;

use crate::loop_table::Element;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element {element} is out of range for a loop of order {order}")]
    OutOfRange { element: Element, order: usize },

    #[error("parse error{}: {message}", location(*row, *col))]
    Parse {
        row: Option<usize>,
        col: Option<usize>,
        message: String,
    },

    #[error(
        "element {element} has no two-sided inverse (left inverse {left}, right inverse {right})"
    )]
    TwoSidedInverseAbsent {
        element: Element,
        left: Element,
        right: Element,
    },

    #[error("the powers of element {element} depend on bracketing")]
    NotPowerAssociative { element: Element },

    #[error("subloop generated by {a} and {b} is not associative")]
    NotDiassociative { a: Element, b: Element },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("map is not a proper half-isomorphism")]
    NotProper,

    #[error("source loop is not Moufang")]
    SourceNotMoufang,

    #[error("target loop is not Moufang")]
    TargetNotMoufang,

    #[error("not a Scott triple: {0}")]
    NotScottTriple(String),

    #[error("coset product is not well defined: representatives ({x}, {y}) give coset {got}, expected {expected}")]
    NormalityWitness {
        x: Element,
        y: Element,
        got: usize,
        expected: usize,
    },

    /// A proved statement failed on concrete data. Either a bug or a
    /// counterexample; callers must surface it loudly.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for the assertion traps that encode proved statements.
    pub fn is_trap(&self) -> bool {
        matches!(
            self,
            Error::TheoremViolation(_) | Error::NormalityWitness { .. }
        )
    }

    pub(crate) fn parse_at(
        row: Option<usize>,
        col: Option<usize>,
        message: impl Into<String>,
    ) -> Self {
        Error::Parse {
            row,
            col,
            message: message.into(),
        }
    }
}

fn location(row: Option<usize>, col: Option<usize>) -> String {
    match (row, col) {
        (Some(r), Some(c)) => format!(" at row {r}, column {c}"),
        (Some(r), None) => format!(" at row {r}"),
        (None, Some(c)) => format!(" at column {c}"),
        (None, None) => String::new(),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
