//! Delimiter grammar shared by the prompt builder, the response parser and the mock.
//!
//! A solution is written `<start>v1,v2,...,vd<end>` with each component in
//! fixed-point notation with three decimals.

use std::fmt;

pub const START: &str = "<start>";
pub const END: &str = "<end>";

pub const SOLUTION_TAG: &str = "solution:";
pub const OBJECTIVE_TAG: &str = "obj_value:";
pub const LOWER_BOUNDS_TAG: &str = "lower bounds:";
pub const UPPER_BOUNDS_TAG: &str = "upper bounds:";

pub const DECIMALS: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrammarError {
    /// A `<start>` with no matching `<end>`.
    Unterminated {
        offset: usize,
    },
    NonNumeric {
        token: String,
    },
}

impl fmt::Display for GrammarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrammarError::Unterminated { offset } => {
                write!(f, "{START} at byte {offset} has no matching {END}")
            }
            GrammarError::NonNumeric { token } => write!(f, "non-numeric component `{token}`"),
        }
    }
}

impl std::error::Error for GrammarError {}

/// One component at three decimals. Negative zero is printed as `0.000`.
pub fn fixed(v: f64) -> String {
    let s = format!("{v:.DECIMALS$}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

pub fn join_fixed(values: &[f64]) -> String {
    values.iter().map(|v| fixed(*v)).collect::<Vec<_>>().join(",")
}

/// Shortest round-trip representation, used for bounds.
pub fn join_plain(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// `<start>v1,...,vd<end>`
pub fn frame(values: &[f64]) -> String {
    format!("{START}{}{END}", join_fixed(values))
}

/// Contents of every `<start>...<end>` span, in order. Text outside spans
/// and stray `<end>` tokens are ignored.
pub fn extract_spans(text: &str) -> Result<Vec<&str>, GrammarError> {
    let mut spans = Vec::new();
    let mut rest = text;
    let mut consumed = 0;
    while let Some(open) = rest.find(START) {
        let body_start = open + START.len();
        let Some(close) = rest[body_start..].find(END) else {
            return Err(GrammarError::Unterminated {
                offset: consumed + open,
            });
        };
        spans.push(&rest[body_start..body_start + close]);
        let next = body_start + close + END.len();
        consumed += next;
        rest = &rest[next..];
    }
    Ok(spans)
}

/// Comma-separated finite reals; surrounding whitespace is allowed.
pub fn parse_reals(text: &str) -> Result<Vec<f64>, GrammarError> {
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| GrammarError::NonNumeric { token: tok.to_string() })
        })
        .collect()
}
