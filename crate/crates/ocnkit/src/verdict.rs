//! Decision outcomes shared by all deciders.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Answer {
    #[serde(rename = "universal")]
    Universal,
    #[serde(rename = "not-universal")]
    NotUniversal,
}

/// A counterexample: either an explicit word or, for singleton alphabets,
/// just a word length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Word(Vec<String>),
    UnaryLength(u64),
}

/// Outcome of a decider. `parameter` carries the sufficient initial counter
/// or bound for the existentially quantified problems; `lemma` names the
/// rule that justified the verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub answer: Answer,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub parameter: Option<u64>,
    pub lemma: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

impl Verdict {
    pub fn universal(lemma: &str) -> Self {
        Verdict {
            answer: Answer::Universal,
            witness: None,
            parameter: None,
            lemma: lemma.to_string(),
            warnings: Vec::new(),
        }
    }

    pub fn universal_with(lemma: &str, parameter: u64) -> Self {
        Verdict { parameter: Some(parameter), ..Verdict::universal(lemma) }
    }

    pub fn not_universal_word(lemma: &str, word: Vec<String>) -> Self {
        Verdict {
            answer: Answer::NotUniversal,
            witness: Some(Witness::Word(word)),
            parameter: None,
            lemma: lemma.to_string(),
            warnings: Vec::new(),
        }
    }

    pub fn not_universal_length(lemma: &str, n: u64) -> Self {
        Verdict {
            answer: Answer::NotUniversal,
            witness: Some(Witness::UnaryLength(n)),
            parameter: None,
            lemma: lemma.to_string(),
            warnings: Vec::new(),
        }
    }

    pub fn with_warning(mut self, warning: String) -> Self {
        self.warnings.push(warning);
        self
    }

    pub fn is_universal(&self) -> bool {
        self.answer == Answer::Universal
    }

    /// Witness length for singleton-alphabet verdicts, whatever the
    /// witness representation.
    pub fn witness_length(&self) -> Option<u64> {
        match &self.witness {
            Some(Witness::UnaryLength(n)) => Some(*n),
            Some(Witness::Word(w)) => Some(w.len() as u64),
            None => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_invariants() {
        let v = Verdict::not_universal_length("x", 3);
        assert!(v.witness.is_some());
        assert_eq!(v.witness_length(), Some(3));
        let v = Verdict::universal_with("x", 7);
        assert_eq!(v.parameter, Some(7));
    }

    #[test]
    fn json_round_trip() {
        let v = Verdict::not_universal_word("det:C4&C2", vec!["a".into(), "a".into()]);
        let json = serde_json::to_string(&v).unwrap();
        let back: Verdict = serde_json::from_str(&json).unwrap();
        assert_eq!(v, back);

        let v = Verdict::universal_with("unary-lasso-coverage", 12);
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(v, serde_json::from_str::<Verdict>(&json).unwrap());
    }
}
