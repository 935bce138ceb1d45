//! Whether a class of labels can observe every barb: for each barb `o`
//! some label `C` in the class must satisfy `P↓o` iff `P` has a
//! `C`-transition, for every term of a corpus.

use std::collections::BTreeSet;

use serde::Serialize;

use super::LabelSet;
use crate::congruence::canonicalize;
use crate::error::Result;
use crate::lts::its_transitions_canonical;
use crate::reduction::{barbs_canonical, Barb};
use crate::terms::{same_calculus, Calculus, Label, Term};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BarbCapture {
    pub barb: String,
    /// Label satisfying the iff on the whole corpus.
    pub label: Option<String>,
    /// A term on which the iff fails, for the first candidate label (or the
    /// first term showing the barb when there is no candidate).
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CapturingReport {
    pub calculus: Calculus,
    pub labels: String,
    pub terms: usize,
    pub barbs: Vec<BarbCapture>,
    pub pass: bool,
}

/// Checks the barbs shown by some corpus term against the labels in
/// `labels` that some corpus term can perform.
pub fn is_capturing(labels: &LabelSet, calculus: Calculus, corpus: &[Term]) -> Result<CapturingReport> {
    let mut rows: Vec<(BTreeSet<Barb>, BTreeSet<Label>)> = Vec::new();
    for t in corpus {
        same_calculus(calculus, t.calculus)?;
        let c = canonicalize(t);
        let ls = its_transitions_canonical(&c)
            .into_iter()
            .filter_map(|tr| tr.context().cloned())
            .filter(|l| labels.contains(l))
            .collect();
        rows.push((barbs_canonical(&c), ls));
    }
    let all_barbs: BTreeSet<&Barb> = rows.iter().flat_map(|(b, _)| b).collect();
    let candidates: BTreeSet<&Label> = rows.iter().flat_map(|(_, l)| l).collect();
    let mut barbs = Vec::new();
    for o in all_barbs {
        let failure = |l: &Label| rows.iter().position(|(b, ls)| b.contains(o) != ls.contains(l));
        let label = candidates.iter().find(|l| failure(l).is_none());
        let counterexample = match (label, candidates.iter().next()) {
            (Some(_), _) => None,
            (None, Some(first)) => failure(first).map(|k| corpus[k].to_string()),
            (None, None) => rows.iter().position(|(b, _)| b.contains(o)).map(|k| corpus[k].to_string()),
        };
        barbs.push(BarbCapture { barb: o.to_string(), label: label.map(|l| l.to_string()), counterexample });
    }
    let pass = barbs.iter().all(|b| b.label.is_some());
    Ok(CapturingReport { calculus, labels: labels.name(), terms: corpus.len(), barbs, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(c: Calculus, src: &[&str]) -> Vec<Term> {
        src.iter().map(|s| Term::parse(c, s).unwrap()).collect()
    }

    #[test]
    fn builtin_classes() {
        let ma = corpus(Calculus::Ma, &["n[0]", "m[in n.0]", "(nu n)n[0] | m[0]", "open n.0", "0"]);
        let r = is_capturing(&LabelSet::Lm, Calculus::Ma, &ma).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.barbs[1].label.as_deref(), Some("-|open n.@X1"));
        assert!(!is_capturing(&LabelSet::Empty, Calculus::Ma, &ma).unwrap().pass);
        let accs = corpus(Calculus::Accs, &["'a", "a.0", "'b | tau.'a", "0"]);
        assert!(is_capturing(&LabelSet::La, Calculus::Accs, &accs).unwrap().pass);
    }
}
