use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;

use crate::braid::{BraidWord, Placement, Sign};
use crate::epi::EpiFamily;
use crate::error::{Error, Result};
use crate::fkdet::DetOptions;

use super::fq_value;

/// Deviations below this are never reported as violations.
pub const MARKOV_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MarkovMove {
    /// `β ↦ α⁻¹βα`, with `α` given by its letters on the current strand count.
    Conjugate(Vec<i32>),
    /// `β ↦ σ_n^ε ι(β)`.
    Stabilize(Sign),
}

impl MarkovMove {
    pub fn apply(&self, beta: &BraidWord) -> Result<BraidWord> {
        match self {
            MarkovMove::Conjugate(letters) => {
                let alpha = BraidWord::new(beta.strands(), letters.clone())?;
                beta.conjugate(&alpha)
            }
            MarkovMove::Stabilize(sign) => Ok(beta.stabilize(*sign, Placement::Before)),
        }
    }

    /// Parses a `;`-separated list such as `conj 1 -2; stab +1`.
    pub fn parse_list(text: &str) -> Result<Vec<MarkovMove>> {
        text.split(';').map(str::trim).filter(|s| !s.is_empty()).map(str::parse).collect()
    }
}

impl fmt::Display for MarkovMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MarkovMove::Conjugate(l) => {
                let parts: Vec<String> = l.iter().map(ToString::to_string).collect();
                write!(f, "conj {}", parts.join(" "))
            }
            MarkovMove::Stabilize(s) => write!(f, "stab {:+}", s.value()),
        }
    }
}

impl FromStr for MarkovMove {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut it = s.split_whitespace();
        let head = it.next().unwrap_or("");
        let rest: Vec<&str> = it.collect();
        match head {
            "conj" | "conjugate" | "c" => {
                let letters = rest
                    .iter()
                    .map(|t| t.parse::<i32>().map_err(|_| Error::InvalidToken((*t).into())))
                    .collect::<Result<Vec<_>>>()?;
                if letters.contains(&0) {
                    return Err(Error::ZeroLetter);
                }
                Ok(MarkovMove::Conjugate(letters))
            }
            "stab" | "stabilize" | "s" => {
                let [v] = rest.as_slice() else {
                    return Err(Error::InvalidParameter(format!("stabilization needs one sign, got `{s}`")));
                };
                let sign = match *v {
                    "+" | "+1" | "1" => Sign::Positive,
                    "-" | "-1" => Sign::Negative,
                    other => return Err(Error::InvalidToken(other.into())),
                };
                Ok(MarkovMove::Stabilize(sign))
            }
            other => Err(Error::InvalidParameter(format!("unknown move `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Invariant,
    Violation,
    /// Some stage has no error bound and the values differ.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Invariant => "invariant",
            Verdict::Violation => "violation",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    /// `None` for the starting braid.
    pub mv: Option<MarkovMove>,
    pub braid: BraidWord,
    pub value: f64,
    pub error_bound: Option<f64>,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovReport {
    pub braid: BraidWord,
    pub family: EpiFamily,
    pub t: f64,
    pub stages: Vec<Stage>,
    pub verdict: Verdict,
    pub max_deviation: f64,
}

/// Evaluates `F_Q` on `β` and after each move, applied cumulatively.
pub fn markov_report(
    beta: &BraidWord,
    moves: &[MarkovMove],
    family: &EpiFamily,
    t0: f64,
    opts: &DetOptions,
) -> Result<MarkovReport> {
    let mut cur = beta.clone();
    let mut stages = Vec::with_capacity(moves.len() + 1);
    let first = fq_value(&cur, family, t0, opts)?;
    stages.push(Stage {
        mv: None,
        braid: cur.clone(),
        value: first.value,
        error_bound: first.error_bound,
        method: first.estimate.method.to_string(),
    });
    for mv in moves {
        cur = mv.apply(&cur)?;
        let v = fq_value(&cur, family, t0, opts)?;
        stages.push(Stage {
            mv: Some(mv.clone()),
            braid: cur.clone(),
            value: v.value,
            error_bound: v.error_bound,
            method: v.estimate.method.to_string(),
        });
    }
    let mut max_deviation = 0.0f64;
    let mut verdict = Verdict::Invariant;
    for (i, a) in stages.iter().enumerate() {
        for b in &stages[i + 1..] {
            let dev = (a.value - b.value).abs();
            max_deviation = max_deviation.max(dev);
            match (a.error_bound, b.error_bound) {
                (Some(ea), Some(eb)) => {
                    if dev > ea + eb + MARKOV_TOLERANCE {
                        verdict = Verdict::Violation;
                    }
                }
                _ => {
                    if dev > MARKOV_TOLERANCE && verdict == Verdict::Invariant {
                        verdict = Verdict::Inconclusive;
                    }
                }
            }
        }
    }
    Ok(MarkovReport { braid: beta.clone(), family: family.clone(), t: t0, stages, verdict, max_deviation })
}

/// Best `m ∈ [−64, 64]` with `f(t) ≈ t^m g(t)` in the `ℓ¹` log sense, and the
/// largest relative residual `|f/(t^m g) − 1|` at that `m`.
pub fn fit_monomial(ts: &[f64], f: &[f64], g: &[f64]) -> (i64, f64) {
    let pairs: Vec<(f64, f64, f64)> = ts.iter().zip(f).zip(g).map(|((&t, &a), &b)| (t, a, b)).collect();
    let nonzero: Vec<&(f64, f64, f64)> = pairs.iter().filter(|(_, a, b)| *a != 0.0 || *b != 0.0).collect();
    if nonzero.iter().any(|(_, a, b)| *a == 0.0 || *b == 0.0) {
        return (0, f64::INFINITY);
    }
    let cost = |m: i64| -> f64 { nonzero.iter().map(|(t, a, b)| (a.ln() - b.ln() - m as f64 * t.ln()).abs()).sum() };
    let best = (-64..=64).min_by(|&x, &y| cost(x).total_cmp(&cost(y)).then(x.abs().cmp(&y.abs()))).unwrap_or(0);
    let resid = nonzero.iter().map(|(t, a, b)| (a / (b * t.powi(best as i32)) - 1.0).abs()).fold(0.0, f64::max);
    (best, resid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid;

    #[test]
    fn parse_moves() {
        let m = MarkovMove::parse_list("conj 1 -2; stab +1;stab -").unwrap();
        assert_eq!(
            m,
            alloc::vec![
                MarkovMove::Conjugate(alloc::vec![1, -2]),
                MarkovMove::Stabilize(Sign::Positive),
                MarkovMove::Stabilize(Sign::Negative)
            ]
        );
        assert_eq!(m[0].to_string(), "conj 1 -2");
        assert_eq!(m[1].to_string(), "stab +1");
        assert!("twist 1".parse::<MarkovMove>().is_err());
    }

    #[test]
    fn winding_is_invariant() {
        let opts = DetOptions::default();
        let r = markov_report(
            &parse_braid("1", Some(2)).unwrap(),
            &[MarkovMove::Stabilize(Sign::Positive)],
            &EpiFamily::TotalWinding,
            1.0,
            &opts,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Invariant);
        assert!(r.max_deviation < 1e-6);
        let r = markov_report(
            &parse_braid("1 1 1", Some(2)).unwrap(),
            &[MarkovMove::Conjugate(alloc::vec![1]), MarkovMove::Stabilize(Sign::Positive)],
            &EpiFamily::TotalWinding,
            1.0,
            &opts,
        )
        .unwrap();
        assert!(r.stages.iter().all(|s| (s.value - 1.0).abs() < 1e-6));
    }

    #[test]
    fn abelianization_violates() {
        let r = markov_report(
            &parse_braid("-1", Some(2)).unwrap(),
            &[MarkovMove::Stabilize(Sign::Positive)],
            &EpiFamily::Abelianization,
            1.0,
            &DetOptions::default(),
        )
        .unwrap();
        assert!((r.stages[0].value - 1.0).abs() < 1e-12);
        assert!((r.stages[1].value - 1.381_356_444_518_497).abs() < 1e-3, "{r:?}");
        assert_eq!(r.verdict, Verdict::Violation);
    }

    #[test]
    fn monomial_fit() {
        let ts = [0.5, 1.0, 2.0];
        let g = [3.0, 1.0, 5.0];
        let f: Vec<f64> = ts.iter().zip(&g).map(|(t, v)| v * t.powi(-3)).collect();
        let (m, r) = fit_monomial(&ts, &f, &g);
        assert_eq!(m, -3);
        assert!(r < 1e-12);
    }
}
