use std::fmt;

use super::grammar::{self, GrammarError, LOWER_BOUNDS_TAG, OBJECTIVE_TAG, SOLUTION_TAG, UPPER_BOUNDS_TAG};
use super::ElitePool;
use crate::types::{DecisionVector, ProblemSpec};

/// The four prompt blocks and their concatenation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PromptBundle {
    pub identity: String,
    pub task: String,
    pub context: String,
    pub expectation: String,
    pub rendered: String,
}

const IDENTITY: &str = "You are an expert in multi-objective optimization algorithms. \
Your task is to generate improved solutions with better objective values from the given solutions.";

fn count_word(n: usize) -> String {
    const WORDS: [&str; 21] = [
        "zero",
        "one",
        "two",
        "three",
        "four",
        "five",
        "six",
        "seven",
        "eight",
        "nine",
        "ten",
        "eleven",
        "twelve",
        "thirteen",
        "fourteen",
        "fifteen",
        "sixteen",
        "seventeen",
        "eighteen",
        "nineteen",
        "twenty",
    ];
    WORDS.get(n).map_or_else(|| n.to_string(), |w| w.to_string())
}

pub fn build_prompt(elites: &ElitePool, spec: &ProblemSpec, s: usize) -> PromptBundle {
    let d = spec.d();
    let bounds = spec.bounds();
    let task = format!(
        "I have several solutions of a minimization problem with {m} objectives, \
all in the form of {d} dimensional decision vectors.\n\
{LOWER_BOUNDS_TAG} {lo}\n\
{UPPER_BOUNDS_TAG} {hi}\n\
The following solutions come from the current mating pool; each is followed by its objective values.",
        m = spec.m,
        lo = grammar::join_plain(&bounds.lower),
        hi = grammar::join_plain(&bounds.upper),
    );
    let mut context = String::new();
    for e in &elites.members {
        context.push_str(&format!("{SOLUTION_TAG} {}\n", grammar::frame(&e.x)));
        context.push_str(&format!("{OBJECTIVE_TAG} {}\n", grammar::join_fixed(e.objectives())));
    }
    let solutions = if s == 1 { "solution" } else { "solutions" };
    let expectation = format!(
        "You can use one or more multi-objective optimization algorithms to generate new solutions. \
Simply output {count} new {solutions} with better objective values. \
Each solution must start with {start} and end with {end}, and contain {d} comma-separated values.",
        count = count_word(s),
        start = grammar::START,
        end = grammar::END,
    );
    let rendered = format!("{IDENTITY}\n\n{task}\n{context}{expectation}\n");
    PromptBundle {
        identity: IDENTITY.to_string(),
        task,
        context,
        expectation,
        rendered,
    }
}

/// Why a response was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseFailure {
    /// No `<start>...<end>` span at all.
    MissingDelimiters,
    Unterminated {
        offset: usize,
    },
    WrongArity {
        span: usize,
        expected: usize,
        found: usize,
    },
    NonNumeric {
        span: usize,
        token: String,
    },
    TooFew {
        found: usize,
        needed: usize,
    },
    /// The provider call itself failed; retried like a parse failure.
    Provider(String),
}

impl fmt::Display for ParseFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseFailure::MissingDelimiters => {
                write!(f, "response contains no {}...{} span", grammar::START, grammar::END)
            }
            ParseFailure::Unterminated { offset } => {
                write!(f, "{}", GrammarError::Unterminated { offset: *offset })
            }
            ParseFailure::WrongArity { span, expected, found } => {
                write!(f, "span {span} has {found} components, expected {expected}")
            }
            ParseFailure::NonNumeric { span, token } => write!(f, "span {span}: non-numeric component `{token}`"),
            ParseFailure::TooFew { found, needed } => write!(f, "{found} valid solutions, {needed} needed"),
            ParseFailure::Provider(msg) => write!(f, "provider failure: {msg}"),
        }
    }
}

impl std::error::Error for ParseFailure {}

/// Solutions recovered from a response.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedOffspring {
    pub vectors: Vec<DecisionVector>,
    pub raw: String,
    /// 1-based attempt that produced this response.
    pub attempts: usize,
}

/// Extracts `s` decision vectors. Invalid spans are skipped as long as at
/// least `s` valid ones remain; otherwise the first defect is reported.
/// Out-of-bounds components are clipped.
pub fn parse_response(text: &str, spec: &ProblemSpec, s: usize) -> Result<ParsedOffspring, ParseFailure> {
    let spans = grammar::extract_spans(text).map_err(|e| match e {
        GrammarError::Unterminated { offset } => ParseFailure::Unterminated { offset },
        GrammarError::NonNumeric { token } => ParseFailure::NonNumeric { span: 0, token },
    })?;
    if spans.is_empty() && s > 0 {
        return Err(ParseFailure::MissingDelimiters);
    }
    let d = spec.d();
    let mut vectors = Vec::with_capacity(s);
    let mut first_defect = None;
    for (i, span) in spans.iter().enumerate() {
        if vectors.len() == s {
            break;
        }
        match grammar::parse_reals(span) {
            Ok(mut v) if v.len() == d => {
                spec.bounds().clip(&mut v);
                vectors.push(DecisionVector::new(v));
            }
            Ok(v) => {
                first_defect.get_or_insert(ParseFailure::WrongArity {
                    span: i,
                    expected: d,
                    found: v.len(),
                });
            }
            Err(GrammarError::NonNumeric { token }) => {
                first_defect.get_or_insert(ParseFailure::NonNumeric { span: i, token });
            }
            Err(e) => unreachable!("parse_reals returned {e:?}"),
        }
    }
    if vectors.len() < s {
        return Err(first_defect.unwrap_or(ParseFailure::TooFew {
            found: vectors.len(),
            needed: s,
        }));
    }
    Ok(ParsedOffspring {
        vectors,
        raw: text.to_string(),
        attempts: 1,
    })
}
