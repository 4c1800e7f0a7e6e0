//! Machine-readable documents. Big integers travel as decimal strings and
//! field order is fixed by declaration order.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use ggc_core::{Alphabet, BoundReport, Decision, DeltaEstimate, Lemma3Report, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsDoc {
    pub delta: u64,
    pub mu: u64,
    #[serde(rename = "L")]
    pub l: String,
    #[serde(rename = "L_prime")]
    pub l_prime: String,
    pub m: String,
    pub m_is_upper_bound: bool,
    #[serde(rename = "C")]
    pub c: String,
    #[serde(rename = "C_prime")]
    pub c_prime: String,
}

impl From<&BoundReport> for BoundsDoc {
    fn from(r: &BoundReport) -> Self {
        BoundsDoc {
            delta: r.delta,
            mu: r.mu,
            l: r.l.to_string(),
            l_prime: r.l_prime.to_string(),
            m: r.m.to_string(),
            m_is_upper_bound: r.m_is_upper_bound,
            c: r.c.to_string(),
            c_prime: r.c_prime.to_string(),
        }
    }
}

impl BoundsDoc {
    pub fn to_report(&self) -> Result<BoundReport, String> {
        let big = |name: &str, s: &str| {
            s.parse::<BigUint>()
                .map_err(|_| format!("`{name}` is not a decimal integer: {s}"))
        };
        Ok(BoundReport {
            delta: self.delta,
            mu: self.mu,
            l: big("L", &self.l)?,
            l_prime: big("L_prime", &self.l_prime)?,
            m: big("m", &self.m)?,
            m_is_upper_bound: self.m_is_upper_bound,
            c: big("C", &self.c)?,
            c_prime: big("C_prime", &self.c_prime)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub g: String,
    pub h: String,
    pub k: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetDoc {
    pub max_conjugator_len: usize,
    pub max_element_len: usize,
    pub paper_mode: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsSummary {
    #[serde(rename = "C")]
    pub c: String,
    #[serde(rename = "C_prime")]
    pub c_prime: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionDoc {
    pub verdict: String,
    pub witness: Option<WitnessDoc>,
    pub budget: BudgetDoc,
    pub bounds: Option<BoundsSummary>,
    pub candidates_examined: u64,
    pub pruned: u64,
    pub diagnostics: Vec<String>,
    /// Wall-clock time; only present when requested, since it breaks
    /// byte-identical reruns.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl DecisionDoc {
    pub fn new(d: &Decision, alphabet: &Alphabet) -> Self {
        let witness = match &d.verdict {
            Verdict::Yes(w) => Some(WitnessDoc {
                g: alphabet.render(&w.g),
                h: alphabet.render(&w.h),
                k: alphabet.render(&w.k),
                exponent: w.exponent,
            }),
            _ => None,
        };
        DecisionDoc {
            verdict: d.verdict.name().to_string(),
            witness,
            budget: BudgetDoc {
                max_conjugator_len: d.budget.max_conjugator_len,
                max_element_len: d.budget.max_element_len,
                paper_mode: d.budget.paper_mode,
            },
            bounds: d.bounds.as_ref().map(|b| BoundsSummary {
                c: b.c.to_string(),
                c_prime: b.c_prime.to_string(),
            }),
            candidates_examined: d.candidates_examined,
            pruned: d.pruned,
            diagnostics: d.diagnostics.clone(),
            runtime_ms: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberDoc {
    pub word: String,
    pub member: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallDoc {
    pub radius: usize,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaDoc {
    pub radius: usize,
    pub thinness_lower_bound: usize,
    pub triangles_examined: usize,
    pub sampled: bool,
}

impl From<&DeltaEstimate> for DeltaDoc {
    fn from(d: &DeltaEstimate) -> Self {
        DeltaDoc {
            radius: d.radius,
            thinness_lower_bound: d.thinness_lower_bound,
            triangles_examined: d.triangles_examined,
            sampled: d.sampled,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma3Doc {
    pub applicable: bool,
    pub passed: bool,
    /// `[first, last]` checked index; absent when the range is empty.
    pub checked_range: Option<[usize; 2]>,
    pub bound: usize,
    pub max_distance: usize,
    pub violations: Vec<usize>,
    pub mu: u64,
    pub distances: Option<Vec<usize>>,
}

impl From<&Lemma3Report> for Lemma3Doc {
    fn from(r: &Lemma3Report) -> Self {
        let range = &r.checked_range;
        Lemma3Doc {
            applicable: r.applicable,
            passed: r.passed(),
            checked_range: (!range.is_empty()).then(|| [*range.start(), *range.end()]),
            bound: r.bound,
            max_distance: r.max_distance,
            violations: r.violations.clone(),
            mu: r.mu,
            distances: r.trace.as_ref().map(|t| t.distances.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyDoc {
    pub u: String,
    pub v: String,
    pub conjugate: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use ggc_core::{GroupContext, Presentation};

    #[test]
    fn bounds_round_trip() {
        let ctx = GroupContext::new(Presentation::free("ab").unwrap(), 1).unwrap();
        let r = BoundReport::evaluate(&ctx, 1, 1);
        let doc = BoundsDoc::from(&r);
        let text = serde_json::to_string(&doc).unwrap();
        let back: BoundsDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_report().unwrap(), r);
        assert!(text.contains("\"C_prime\":\"182\""));
    }

    #[test]
    fn decision_round_trip() {
        let ctx = GroupContext::new(Presentation::free("ab").unwrap(), 0).unwrap();
        let a = ctx.presentation().alphabet();
        let h =
            ggc_core::Subgroup::new(&ctx, vec![a.parse_word("Bab").unwrap()], None, None).unwrap();
        let k =
            ggc_core::Subgroup::new(&ctx, vec![a.parse_word("a").unwrap()], None, None).unwrap();
        let d =
            ggc_core::decide_subgroup_conjugacy(&ctx, &h, &k, ggc_core::Budget::new(3, 4)).unwrap();
        let doc = DecisionDoc::new(&d, a);
        let text = serde_json::to_string_pretty(&doc).unwrap();
        assert_eq!(serde_json::from_str::<DecisionDoc>(&text).unwrap(), doc);
        assert!(!text.contains("runtime_ms"));
        assert_eq!(doc.witness.unwrap().g, "b");
    }
}
