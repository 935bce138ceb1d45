//! Two-step reduction predicates characterising single IPO transitions.
//!
//! A probe context is plugged around the process; a marker (ambient `m`,
//! or message `'i`) appears after the first step and disappears after the
//! second, which pins down where the process's own contribution went.

use std::collections::BTreeSet;
use std::str::FromStr;

use crate::congruence::{canonicalize, CanonicalForm};
use crate::error::{Error, Result};
use crate::reduction::{barbs_canonical, reduct_targets, Barb};
use crate::terms::{fresh_name, same_calculus, Action, Calculus, Proc, Term};

fn closed(t: &Term, calculus: Calculus) -> Result<()> {
    same_calculus(calculus, t.calculus)?;
    if !t.is_pure() {
        return Err(Error::IllFormed(format!("`{t}` is not a closed term")));
    }
    Ok(())
}

/// Two reduction steps from `start`: the marker barb holds after the first
/// and is gone after the second.
fn marked_twice(start: &Term, marker: &Barb) -> BTreeSet<CanonicalForm> {
    let mut out = BTreeSet::new();
    for mid in reduct_targets(&canonicalize(start)) {
        if !barbs_canonical(&mid).contains(marker) {
            continue;
        }
        for y in reduct_targets(&mid) {
            if !barbs_canonical(&y).contains(marker) {
                out.insert(y);
            }
        }
    }
    out
}

/// All `Y` with `p | open n.(m[0] | open m.T1) ⇝ P'' ⇝ Y`, `P''↓m` and not `Y↓m`.
pub fn pred_open_targets(p: &Term, n: &str, t1: &Term) -> Result<BTreeSet<CanonicalForm>> {
    closed(p, Calculus::Ma)?;
    closed(t1, Calculus::Ma)?;
    let mut avoid = p.free_names();
    avoid.extend(t1.free_names());
    avoid.insert(n.to_string());
    let m = fresh_name(&avoid);
    let probe = Proc::prefix(
        Action::Open(n.to_string()),
        Proc::par([Proc::amb(m.clone(), Proc::Nil), Proc::prefix(Action::Open(m.clone()), t1.proc.clone())]),
    );
    let start = Term::from_proc(Calculus::Ma, Proc::par([p.proc.clone(), probe]));
    Ok(marked_twice(&start, &Barb::Ambient(m)))
}

pub fn pred_open(p: &Term, target: &Term, n: &str, t1: &Term) -> Result<bool> {
    closed(target, Calculus::Ma)?;
    Ok(pred_open_targets(p, n, t1)?.contains(&canonicalize(target)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CcsPredicate {
    /// probe `'a.('i | T1) | i`, matching the label `-|'a.T1`
    Out,
    /// probe `a.('i | T1) | i`, matching the label `-|a.T1`
    In,
    /// a single reduction, matching the label `-`
    Tau,
}

impl FromStr for CcsPredicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "out" => Ok(CcsPredicate::Out),
            "in" => Ok(CcsPredicate::In),
            "tau" => Ok(CcsPredicate::Tau),
            _ => Err(Error::InvalidQuery(format!("unknown predicate kind `{s}`"))),
        }
    }
}

/// All `Y` satisfying the predicate for `p`. For `out` and `in` the
/// message `'i` must be consumed by the second step.
pub fn pred_ccs_targets(kind: CcsPredicate, p: &Term, a: &str, t1: &Term) -> Result<BTreeSet<CanonicalForm>> {
    closed(p, Calculus::Ccs)?;
    closed(t1, Calculus::Ccs)?;
    let prefix = match kind {
        CcsPredicate::Tau => return Ok(reduct_targets(&canonicalize(p))),
        CcsPredicate::Out => Action::Send(a.to_string()),
        CcsPredicate::In => Action::Recv(a.to_string()),
    };
    let mut avoid = p.free_names();
    avoid.extend(t1.free_names());
    avoid.insert(a.to_string());
    let i = fresh_name(&avoid);
    let probe = Proc::par([
        Proc::prefix(prefix, Proc::par([Proc::prefix(Action::Send(i.clone()), Proc::Nil), t1.proc.clone()])),
        Proc::prefix(Action::Recv(i.clone()), Proc::Nil),
    ]);
    let start = Term::from_proc(Calculus::Ccs, Proc::par([p.proc.clone(), probe]));
    Ok(marked_twice(&start, &Barb::Output(i)))
}

pub fn pred_ccs(kind: CcsPredicate, p: &Term, target: &Term, a: &str, t1: &Term) -> Result<bool> {
    closed(target, Calculus::Ccs)?;
    Ok(pred_ccs_targets(kind, p, a, t1)?.contains(&canonicalize(target)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ma(s: &str) -> Term {
        Term::parse(Calculus::Ma, s).unwrap()
    }

    fn ccs(s: &str) -> Term {
        Term::parse(Calculus::Ccs, s).unwrap()
    }

    #[test]
    fn open_examples() {
        assert!(pred_open(&ma("n[0]"), &ma("0"), "n", &ma("0")).unwrap());
        assert!(pred_open(&ma("n[k[0]] | j[0]"), &ma("k[0] | j[0] | l[0]"), "n", &ma("l[0]")).unwrap());
        assert!(pred_open_targets(&ma("(nu n)n[0]"), "n", &ma("0")).unwrap().is_empty());
        // the fresh marker avoids the names of T1
        assert!(pred_open(&ma("n[0]"), &ma("f0[0]"), "n", &ma("f0[0]")).unwrap());
    }

    #[test]
    fn ccs_examples() {
        assert!(pred_ccs(CcsPredicate::Out, &ccs("a.0"), &ccs("0 | 0"), "a", &ccs("0")).unwrap());
        assert!(pred_ccs_targets(CcsPredicate::Out, &ccs("b.0"), "a", &ccs("0")).unwrap().is_empty());
        assert!(pred_ccs(CcsPredicate::In, &ccs("'a.b.0"), &ccs("b.0 | c.0"), "a", &ccs("c.0")).unwrap());
        assert!(pred_ccs(CcsPredicate::Tau, &ccs("tau.b.0"), &ccs("b.0"), "a", &ccs("0")).unwrap());
        // an unrelated step between the probe's two steps does not count
        let t = pred_ccs_targets(CcsPredicate::Out, &ccs("a.0 | tau.b.0"), "a", &ccs("0")).unwrap();
        assert_eq!(t.into_iter().map(|c| c.to_string()).collect::<Vec<_>>(), vec!["tau.b.0"]);
    }
}
