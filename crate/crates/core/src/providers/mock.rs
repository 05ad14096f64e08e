//! Offline surrogate that extrapolates from the best listed elite away from the worst.

use crate::llm_operator::grammar::{self, LOWER_BOUNDS_TAG, OBJECTIVE_TAG, SOLUTION_TAG, UPPER_BOUNDS_TAG};

use super::{Completion, Provider, ProviderError, TokenUsage};

/// Extrapolation weights, cycled to the requested child count.
pub const MOCK_WEIGHTS: [f64; 3] = [0.25, 0.5, 0.75];

const MALFORMED_REPLY: &str = "I could not read the solutions.\n<start>n/a<end>\n";

/// Four characters per token, rounded up.
pub fn estimate_tokens(text: &str) -> u64 {
    (text.chars().count() as u64).div_ceil(4)
}

#[derive(Clone, Debug, Default)]
pub struct MockProvider {
    fault_injection: bool,
}

impl MockProvider {
    pub fn new(fault_injection: bool) -> Self {
        Self { fault_injection }
    }
}

impl Provider for MockProvider {
    fn name(&self) -> &str {
        "mock"
    }

    fn complete(&self, prompt: &str, expected: usize) -> Result<Completion, ProviderError> {
        let text = mock_complete(prompt, expected, self.fault_injection)?;
        let usage = TokenUsage::new(estimate_tokens(prompt), estimate_tokens(&text));
        Ok(Completion {
            text,
            usage,
            latency_ms: 0,
        })
    }
}

struct Listed {
    x: Vec<f64>,
    objective_sum: f64,
}

/// Lower and upper bound lines, when the prompt states them.
type StatedBounds = Option<(Vec<f64>, Vec<f64>)>;

fn read_prompt(prompt: &str) -> Option<(Vec<Listed>, StatedBounds)> {
    let mut listed = Vec::new();
    let mut pending: Option<Vec<f64>> = None;
    let mut lower = None;
    let mut upper = None;
    for line in prompt.lines().map(str::trim) {
        if let Some(rest) = line.strip_prefix(SOLUTION_TAG) {
            if pending.is_some() {
                return None;
            }
            let spans = grammar::extract_spans(rest).ok()?;
            let [span] = spans.as_slice() else { return None };
            pending = Some(grammar::parse_reals(span).ok()?);
        } else if let Some(rest) = line.strip_prefix(OBJECTIVE_TAG) {
            let x = pending.take()?;
            let f = grammar::parse_reals(rest.trim()).ok()?;
            listed.push(Listed {
                x,
                objective_sum: f.iter().sum(),
            });
        } else if let Some(rest) = line.strip_prefix(LOWER_BOUNDS_TAG) {
            lower = Some(grammar::parse_reals(rest.trim()).ok()?);
        } else if let Some(rest) = line.strip_prefix(UPPER_BOUNDS_TAG) {
            upper = Some(grammar::parse_reals(rest.trim()).ok()?);
        }
    }
    if pending.is_some() || listed.len() < 2 {
        return None;
    }
    let d = listed[0].x.len();
    if listed.iter().any(|l| l.x.len() != d) {
        return None;
    }
    let bounds = match (lower, upper) {
        (Some(lo), Some(hi)) if lo.len() == d && hi.len() == d => Some((lo, hi)),
        (None, None) => None,
        _ => return None,
    };
    Some((listed, bounds))
}

/// Deterministic surrogate response: `s` solution lines
/// `clip(best + w_j (best - worst))`, elites ranked by objective sum.
pub fn mock_complete(prompt: &str, s: usize, fault_injection: bool) -> Result<String, ProviderError> {
    let Some((listed, bounds)) = read_prompt(prompt) else {
        if fault_injection {
            return Ok(MALFORMED_REPLY.to_string());
        }
        return Err(ProviderError::Malformed(
            "prompt lists fewer than two readable solutions with objective lines".into(),
        ));
    };
    // first minimum and last maximum, so ties resolve by listing order
    let best = listed
        .iter()
        .reduce(|a, b| if b.objective_sum < a.objective_sum { b } else { a })
        .expect("at least two listed solutions");
    let worst = listed
        .iter()
        .reduce(|a, b| if b.objective_sum >= a.objective_sum { b } else { a })
        .expect("at least two listed solutions");
    let mut out = String::new();
    for j in 0..s {
        let w = MOCK_WEIGHTS[j % MOCK_WEIGHTS.len()];
        let mut child: Vec<f64> = best.x.iter().zip(&worst.x).map(|(b, wv)| b + w * (b - wv)).collect();
        if let Some((lo, hi)) = &bounds {
            for (v, (l, h)) in child.iter_mut().zip(lo.iter().zip(hi)) {
                *v = v.clamp(*l, *h);
            }
        }
        out.push_str(&grammar::frame(&child));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prompt(rows: &[(&[f64], &[f64])], bounds: Option<(&[f64], &[f64])>) -> String {
        let mut p = String::from("header text\n");
        if let Some((lo, hi)) = bounds {
            p += &format!("{LOWER_BOUNDS_TAG} {}\n", grammar::join_plain(lo));
            p += &format!("{UPPER_BOUNDS_TAG} {}\n", grammar::join_plain(hi));
        }
        for (x, f) in rows {
            p += &format!("{SOLUTION_TAG} {}\n", grammar::frame(x));
            p += &format!("{OBJECTIVE_TAG} {}\n", grammar::join_fixed(f));
        }
        p + "trailing instructions <start> and <end>\n"
    }

    fn children(text: &str) -> Vec<Vec<f64>> {
        grammar::extract_spans(text)
            .unwrap()
            .iter()
            .map(|s| grammar::parse_reals(s).unwrap())
            .collect()
    }

    #[test]
    fn extrapolates_away_from_worst() {
        let p = prompt(&[(&[0.8, 0.8], &[2.0, 2.0]), (&[0.4, 0.4], &[0.5, 0.5])], None);
        let kids = children(&mock_complete(&p, 1, false).unwrap());
        assert_eq!(kids, vec![vec![0.3, 0.3]]);
    }

    #[test]
    fn equal_best_and_worst_repeat_best() {
        let p = prompt(&[(&[0.2, 0.7], &[1.0, 1.0]), (&[0.2, 0.7], &[1.0, 1.0])], None);
        let kids = children(&mock_complete(&p, 4, false).unwrap());
        assert_eq!(kids.len(), 4);
        assert!(kids.iter().all(|k| k == &vec![0.2, 0.7]));
    }

    #[test]
    fn clips_to_listed_bounds() {
        let p = prompt(
            &[(&[0.1, 0.5], &[0.1, 0.1]), (&[0.9, 0.5], &[1.0, 1.0])],
            Some((&[0.0, 0.0], &[1.0, 1.0])),
        );
        let kids = children(&mock_complete(&p, 3, false).unwrap());
        assert_eq!(kids[0], vec![0.0, 0.5]);
        assert_eq!(kids[2], vec![0.0, 0.5]);
    }

    #[test]
    fn emits_exactly_s_spans_and_nothing_else() {
        let p = prompt(&[(&[0.1], &[1.0]), (&[0.3], &[2.0]), (&[0.5], &[3.0])], None);
        for s in 0..7 {
            let text = mock_complete(&p, s, false).unwrap();
            assert_eq!(grammar::extract_spans(&text).unwrap().len(), s);
            assert_eq!(text.lines().count(), s);
        }
    }

    #[test]
    fn unreadable_prompt_errors_or_garbles() {
        let p = "no solutions here";
        assert!(matches!(mock_complete(p, 3, false), Err(ProviderError::Malformed(_))));
        let garbled = mock_complete(p, 3, true).unwrap();
        assert!(grammar::extract_spans(&garbled)
            .unwrap()
            .iter()
            .any(|s| grammar::parse_reals(s).is_err()));
    }

    #[test]
    fn pure_function_of_inputs() {
        let p = prompt(&[(&[0.8, 0.1], &[2.0, 2.0]), (&[0.4, 0.2], &[0.5, 0.5])], None);
        assert_eq!(mock_complete(&p, 3, false), mock_complete(&p, 3, false));
    }

    #[test]
    fn usage_is_quarter_characters_rounded_up() {
        assert_eq!(estimate_tokens(""), 0);
        assert_eq!(estimate_tokens("abcd"), 1);
        assert_eq!(estimate_tokens("abcde"), 2);
        let provider = MockProvider::new(false);
        let p = prompt(&[(&[0.8], &[2.0]), (&[0.4], &[0.5])], None);
        let c = provider.complete(&p, 2).unwrap();
        assert_eq!(c.usage.prompt_tokens, estimate_tokens(&p));
        assert_eq!(c.usage.completion_tokens, estimate_tokens(&c.text));
        assert_eq!(c.latency_ms, 0);
    }
}
