//! One-step reductions and barbs.
//!
//! Reductions are found on the canonical form: for ambients the three
//! axioms are tried at the top level and, recursively, inside every
//! ambient; for (asynchronous) CCS only at the top level, under the binder
//! prefix. Process variables never move; name variables name ambients that
//! can move but cannot be entered, exited or opened.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::congruence::{canonicalize, components, summands, CanonicalForm};
use crate::terms::{Action, AmbName, Calculus, Name, Proc, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ReductionRule {
    /// `n[in m.P|Q] | m[R] ⇝ m[n[P|Q]|R]`
    In,
    /// `m[n[out m.P|Q]|R] ⇝ n[P|Q] | m[R]`
    Out,
    /// `open n.P | n[Q] ⇝ P|Q`
    Open,
    /// `tau.P + M ⇝ P`
    Tau,
    /// `(a.P + M) | ('a.Q + N) ⇝ P|Q`, or `(a.P + M) | 'a ⇝ P` asynchronously
    Com,
}

impl fmt::Display for ReductionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReductionStep {
    pub source: CanonicalForm,
    pub target: CanonicalForm,
    pub rule: ReductionRule,
    /// Indices of the ambients (in canonical component order) enclosing the
    /// redex.
    pub position: Vec<usize>,
}

/// All one-step reducts. Steps with the same rule and target are reported
/// once, at the first position found.
pub fn reducts(p: &Term) -> Vec<ReductionStep> {
    reducts_canonical(&canonicalize(p))
}

pub fn reducts_canonical(c: &CanonicalForm) -> Vec<ReductionStep> {
    let mut raw = Vec::new();
    match c.calculus {
        Calculus::Ma => ma_steps(&c.components, &mut Vec::new(), &mut raw),
        Calculus::Ccs | Calculus::Accs => ccs_steps(c.calculus, &c.components, &mut raw),
    }
    let mut seen = BTreeMap::new();
    for (comps, rule, position) in raw {
        let target = canonicalize(&Term::from_proc(c.calculus, Proc::restrict(&c.binders, Proc::par(comps))));
        seen.entry((rule, target)).or_insert(position);
    }
    seen.into_iter()
        .map(|((rule, target), position)| ReductionStep { source: c.clone(), target, rule, position })
        .collect()
}

/// Distinct reduct targets.
pub fn reduct_targets(c: &CanonicalForm) -> BTreeSet<CanonicalForm> {
    reducts_canonical(c).into_iter().map(|s| s.target).collect()
}

type RawStep = (Vec<Proc>, ReductionRule, Vec<usize>);

fn without(xs: &[Proc], drop: &[usize]) -> Vec<Proc> {
    xs.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, p)| p.clone()).collect()
}

fn ma_steps(comps: &[Proc], path: &mut Vec<usize>, out: &mut Vec<RawStep>) {
    for (i, ci) in comps.iter().enumerate() {
        match ci {
            // open n.P | n[Q]
            Proc::Prefix(Action::Open(n), cont) => {
                for (j, cj) in comps.iter().enumerate() {
                    if let Proc::Amb(AmbName::Name(m), body) = cj {
                        if m == n {
                            let mut next = without(comps, &[i, j]);
                            next.push((**cont).clone());
                            next.push((**body).clone());
                            out.push((next, ReductionRule::Open, path.clone()));
                        }
                    }
                }
            }
            Proc::Amb(amb, body) => {
                let inner = components(body);
                for (k, q) in inner.iter().enumerate() {
                    match q {
                        // n[in m.P | Q] | m[R]
                        Proc::Prefix(Action::In(m), cont) => {
                            for (j, cj) in comps.iter().enumerate() {
                                let Proc::Amb(AmbName::Name(m2), r) = cj else { continue };
                                if j == i || m2 != m {
                                    continue;
                                }
                                let moved = Proc::Amb(
                                    amb.clone(),
                                    Box::new(Proc::par(std::iter::once((**cont).clone()).chain(without(&inner, &[k])))),
                                );
                                let host = Proc::amb(m.clone(), Proc::par([(**r).clone(), moved]));
                                let mut next = without(comps, &[i, j]);
                                next.push(host);
                                out.push((next, ReductionRule::In, path.clone()));
                            }
                        }
                        // m[n[out m.P | Q] | R]
                        Proc::Amb(child, child_body) if amb.as_name().is_some() => {
                            let m = amb.as_name().unwrap();
                            let child_inner = components(child_body);
                            for (l, r) in child_inner.iter().enumerate() {
                                let Proc::Prefix(Action::Out(m2), cont) = r else { continue };
                                if m2 != m {
                                    continue;
                                }
                                let moved = Proc::Amb(
                                    child.clone(),
                                    Box::new(Proc::par(
                                        std::iter::once((**cont).clone()).chain(without(&child_inner, &[l])),
                                    )),
                                );
                                let host = Proc::Amb(amb.clone(), Box::new(Proc::par(without(&inner, &[k]))));
                                let mut next = without(comps, &[i]);
                                next.push(moved);
                                next.push(host);
                                out.push((next, ReductionRule::Out, path.clone()));
                            }
                        }
                        _ => {}
                    }
                }
                // reductions inside the ambient
                let mut nested = Vec::new();
                path.push(i);
                ma_steps(&inner, path, &mut nested);
                path.pop();
                for (body, rule, pos) in nested {
                    let mut next = without(comps, &[i]);
                    next.push(Proc::Amb(amb.clone(), Box::new(Proc::par(body))));
                    out.push((next, rule, pos));
                }
            }
            _ => {}
        }
    }
}

fn ccs_steps(calculus: Calculus, comps: &[Proc], out: &mut Vec<RawStep>) {
    for (i, ci) in comps.iter().enumerate() {
        for s in summands(ci) {
            let Proc::Prefix(act, cont) = s else { continue };
            match act {
                Action::Tau => {
                    let mut next = without(comps, &[i]);
                    next.push(*cont);
                    out.push((next, ReductionRule::Tau, vec![]));
                }
                Action::Recv(a) => {
                    for (j, cj) in comps.iter().enumerate() {
                        if j == i {
                            continue;
                        }
                        match (calculus, cj) {
                            (Calculus::Accs, Proc::Output(b)) if b == &a => {
                                let mut next = without(comps, &[i, j]);
                                next.push((*cont).clone());
                                out.push((next, ReductionRule::Com, vec![]));
                            }
                            (Calculus::Ccs, _) => {
                                for t in summands(cj) {
                                    if let Proc::Prefix(Action::Send(b), cont2) = t {
                                        if b == a {
                                            let mut next = without(comps, &[i, j]);
                                            next.push((*cont).clone());
                                            next.push(*cont2);
                                            out.push((next, ReductionRule::Com, vec![]));
                                        }
                                    }
                                }
                            }
                            _ => {}
                        }
                    }
                }
                _ => {}
            }
        }
    }
}

/// Observable barbs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Barb {
    /// Unrestricted top-level ambient.
    Ambient(Name),
    /// Input capability (CCS only).
    Input(Name),
    /// Output capability or pending message.
    Output(Name),
}

impl fmt::Display for Barb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Barb::Ambient(n) | Barb::Input(n) => f.write_str(n),
            Barb::Output(n) => write!(f, "'{n}"),
        }
    }
}

pub fn barbs(p: &Term) -> BTreeSet<Barb> {
    barbs_canonical(&canonicalize(p))
}

pub fn barbs_canonical(c: &CanonicalForm) -> BTreeSet<Barb> {
    let free = |n: &str| !c.binders.iter().any(|b| b == n);
    let mut out = BTreeSet::new();
    for comp in &c.components {
        match (c.calculus, comp) {
            (Calculus::Ma, Proc::Amb(AmbName::Name(n), _)) if free(n) => {
                out.insert(Barb::Ambient(n.clone()));
            }
            (Calculus::Accs, Proc::Output(a)) if free(a) => {
                out.insert(Barb::Output(a.clone()));
            }
            (Calculus::Ccs, _) => {
                for s in summands(comp) {
                    match s {
                        Proc::Prefix(Action::Recv(a), _) if free(&a) => {
                            out.insert(Barb::Input(a));
                        }
                        Proc::Prefix(Action::Send(a), _) if free(&a) => {
                            out.insert(Barb::Output(a));
                        }
                        _ => {}
                    }
                }
            }
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn targets(c: Calculus, s: &str) -> Vec<String> {
        reducts(&Term::parse(c, s).unwrap()).into_iter().map(|r| r.target.to_string()).collect()
    }

    fn canon(c: Calculus, s: &str) -> String {
        canonicalize(&Term::parse(c, s).unwrap()).to_string()
    }

    #[test]
    fn ambient_axioms() {
        let c = Calculus::Ma;
        assert_eq!(targets(c, "n[in m.k[0] | j[0]] | m[l[0]]"), vec![canon(c, "m[n[k[0] | j[0]] | l[0]]")]);
        assert_eq!(targets(c, "m[n[out m.k[0] | j[0]] | l[0]]"), vec![canon(c, "n[k[0] | j[0]] | m[l[0]]")]);
        assert_eq!(targets(c, "open n.k[0] | n[j[0]]"), vec![canon(c, "k[0] | j[0]")]);
        assert!(targets(c, "0").is_empty());
    }

    #[test]
    fn ambient_reductions_under_context() {
        let c = Calculus::Ma;
        let steps = reducts(&Term::parse(c, "(nu k)k[p[open n.0 | n[0]]]").unwrap());
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].position, vec![0, 0]);
        assert_eq!(steps[0].target.to_string(), "(nu f0)f0[p[0]]");
        // the target of `in` must be a sibling, not the moving ambient itself
        assert!(targets(c, "m[in m.0]").is_empty());
        // name variables can move but cannot be entered
        assert_eq!(targets(c, "?x[in m.0] | m[0]"), vec!["m[?x[0]]"]);
        assert!(targets(c, "n[in x.0] | ?x[0]").is_empty());
    }

    #[test]
    fn accs_and_ccs_axioms() {
        assert_eq!(targets(Calculus::Accs, "(a.b.0 + tau.0) | 'a"), vec!["'a", "b.0"]);
        assert_eq!(targets(Calculus::Accs, "tau.'b + a.0"), vec!["'b"]);
        assert_eq!(targets(Calculus::Ccs, "a.0 | 'a.b.0"), vec!["b.0"]);
        assert!(targets(Calculus::Accs, "((nu a)a.0) | 'a").is_empty());
        assert!(targets(Calculus::Ccs, "a.0 | @X").is_empty());
    }

    #[test]
    fn barb_examples() {
        let b =
            |c, s: &str| -> Vec<String> { barbs(&Term::parse(c, s).unwrap()).iter().map(|b| b.to_string()).collect() };
        assert_eq!(b(Calculus::Ma, "(nu n)(n[0] | m[0])"), vec!["m"]);
        assert!(b(Calculus::Accs, "a.'a + tau.0").is_empty());
        assert_eq!(b(Calculus::Accs, "'a | b.0"), vec!["'a"]);
        assert_eq!(b(Calculus::Ccs, "a.0 + 'b.0 | (nu c)c.0"), vec!["a", "'b"]);
        assert!(b(Calculus::Ma, "?x[0]").is_empty());
    }
}
