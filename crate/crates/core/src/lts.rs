//! Ordinary labelled transition systems of CCS and ACCS and the IPO
//! transition systems of the three calculi, given by their inference rules.
//!
//! IPO labels and targets are symbolic: `@X1`, `@X2` stand for processes
//! and `?x` for an ambient name supplied by the environment.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::congruence::{canonical_label, canonicalize, decompose, CanonicalForm, PrefixKind, Shape};
use crate::error::{Error, Result};
use crate::reduction::reducts_canonical;
use crate::terms::{apply_subst, Action, AmbName, Calculus, Label, Name, Proc, Substitution, Term};

pub const X1: &str = "X1";
pub const X2: &str = "X2";
pub const XN: &str = "x";

/// Actions of the ordinary transition systems: `tau`, `a` and `'a`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrdAction {
    Tau,
    In(Name),
    Out(Name),
}

impl OrdAction {
    pub fn name(&self) -> Option<&str> {
        match self {
            OrdAction::Tau => None,
            OrdAction::In(a) | OrdAction::Out(a) => Some(a),
        }
    }
}

impl fmt::Display for OrdAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrdAction::Tau => f.write_str("tau"),
            OrdAction::In(a) => f.write_str(a),
            OrdAction::Out(a) => write!(f, "'{a}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Rule {
    // IPO rules
    Tau,
    Open,
    CoOpen,
    InAmb,
    In,
    CoIn,
    OutAmb,
    Out,
    Rcv,
    Snd,
    // ordinary rules
    Act,
    Msg,
    Com,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TransitionLabel {
    Ordinary(OrdAction),
    Context(Label),
}

impl fmt::Display for TransitionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransitionLabel::Ordinary(a) => a.fmt(f),
            TransitionLabel::Context(l) => l.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub source: CanonicalForm,
    pub label: TransitionLabel,
    pub target: CanonicalForm,
    pub rule: Rule,
}

impl Transition {
    pub fn context(&self) -> Option<&Label> {
        match &self.label {
            TransitionLabel::Context(l) => Some(l),
            TransitionLabel::Ordinary(_) => None,
        }
    }
}

// ---------------------------------------------------------------------------
// ordinary LTS

/// Transitions of the ordinary LTS, computed by structural operational
/// semantics on the term itself.
pub fn ordinary_transitions(p: &Term) -> Result<Vec<Transition>> {
    if p.calculus == Calculus::Ma {
        return Err(Error::Unsupported("an ordinary transition system", Calculus::Ma));
    }
    let source = canonicalize(p);
    let mut out = BTreeSet::new();
    for (act, rule, q) in sos(&p.proc) {
        out.insert(Transition {
            source: source.clone(),
            label: TransitionLabel::Ordinary(act),
            target: canonicalize(&Term::from_proc(p.calculus, q)),
            rule,
        });
    }
    Ok(out.into_iter().collect())
}

pub fn ordinary_transitions_canonical(c: &CanonicalForm) -> Result<Vec<Transition>> {
    ordinary_transitions(&c.to_term())
}

fn sos(p: &Proc) -> Vec<(OrdAction, Rule, Proc)> {
    match p {
        Proc::Prefix(a, cont) => {
            let act = match a {
                Action::Tau => OrdAction::Tau,
                Action::Recv(a) => OrdAction::In(a.clone()),
                Action::Send(a) => OrdAction::Out(a.clone()),
                _ => return vec![],
            };
            vec![(act, Rule::Act, (**cont).clone())]
        }
        Proc::Output(a) => vec![(OrdAction::Out(a.clone()), Rule::Msg, Proc::Nil)],
        Proc::Sum(ps) => ps.iter().flat_map(sos).collect(),
        Proc::Par(ps) => {
            let moves: Vec<_> = ps.iter().map(sos).collect();
            let replace = |i: usize, q: &Proc| -> Vec<Proc> {
                let mut v = ps.clone();
                v[i] = q.clone();
                v
            };
            let mut out = Vec::new();
            for (i, ms) in moves.iter().enumerate() {
                for (act, rule, q) in ms {
                    out.push((act.clone(), *rule, Proc::Par(replace(i, q))));
                    let OrdAction::In(a) = act else { continue };
                    for (j, ns) in moves.iter().enumerate() {
                        if i == j {
                            continue;
                        }
                        for (act2, _, r) in ns {
                            if matches!(act2, OrdAction::Out(b) if b == a) {
                                let mut v = replace(i, q);
                                v[j] = r.clone();
                                out.push((OrdAction::Tau, Rule::Com, Proc::Par(v)));
                            }
                        }
                    }
                }
            }
            out
        }
        Proc::Nu(n, body) => sos(body)
            .into_iter()
            .filter(|(act, _, _)| act.name() != Some(n))
            .map(|(act, rule, q)| (act, rule, Proc::nu(n.clone(), q)))
            .collect(),
        Proc::Nil | Proc::Var(_) | Proc::Hole | Proc::Amb(..) => vec![],
    }
}

// ---------------------------------------------------------------------------
// IPO transition systems

fn var(x: &str) -> Proc {
    Proc::Var(x.to_string())
}

fn xamb(body: Proc) -> Proc {
    Proc::Amb(AmbName::Var(XN.to_string()), Box::new(body))
}

fn par_of(parts: impl IntoIterator<Item = Proc>) -> Proc {
    Proc::par(parts)
}

/// All IPO transitions of `p`.
pub fn its_transitions(p: &Term) -> Vec<Transition> {
    its_transitions_canonical(&canonicalize(p))
}

pub fn its_transitions_canonical(c: &CanonicalForm) -> Vec<Transition> {
    let calculus = c.calculus;
    let mut out: BTreeSet<Transition> = reducts_canonical(c)
        .into_iter()
        .map(|s| Transition {
            source: c.clone(),
            label: TransitionLabel::Context(Label::identity(calculus)),
            target: s.target,
            rule: Rule::Tau,
        })
        .collect();
    let mut emit = |rule: Rule, label: Proc, binders: &[Name], target: Proc| {
        let label = canonical_label(&Label::from_canonical(calculus, label));
        let target = canonicalize(&Term::from_proc(calculus, Proc::restrict(binders, target)));
        out.insert(Transition { source: c.clone(), label: TransitionLabel::Context(label), target, rule });
    };
    let name_of = |a: &Option<Action>| a.as_ref().and_then(|a| a.name()).unwrap().to_string();

    match calculus {
        Calculus::Ma => {
            for d in decompose(c, Shape::Prefix(PrefixKind::Open), true) {
                let n = name_of(&d.action);
                emit(
                    Rule::Open,
                    par_of([Proc::Hole, Proc::amb(n, var(X1))]),
                    &d.binders,
                    par_of([d.selected.clone(), d.rest_proc(), var(X1)]),
                );
            }
            for d in decompose(c, Shape::Ambient, true) {
                let n = d.subject.clone().unwrap();
                emit(
                    Rule::CoOpen,
                    par_of([Proc::Hole, Proc::prefix(Action::Open(n.clone()), var(X1))]),
                    &d.binders,
                    par_of([d.selected.clone(), var(X1), d.rest_proc()]),
                );
                emit(
                    Rule::CoIn,
                    par_of([Proc::Hole, xamb(par_of([Proc::prefix(Action::In(n.clone()), var(X1)), var(X2)]))]),
                    &d.binders,
                    par_of([
                        Proc::amb(n, par_of([xamb(par_of([var(X1), var(X2)])), d.selected.clone()])),
                        d.rest_proc(),
                    ]),
                );
            }
            for d in decompose(c, Shape::AmbientPrefix(PrefixKind::In), true) {
                let m = name_of(&d.action);
                let moved = Proc::Amb(
                    d.ambient.clone().unwrap(),
                    Box::new(par_of(std::iter::once(d.selected.clone()).chain(d.inner_rest.iter().cloned()))),
                );
                emit(
                    Rule::InAmb,
                    par_of([Proc::Hole, Proc::amb(m.clone(), var(X1))]),
                    &d.binders,
                    par_of([Proc::amb(m, par_of([moved, var(X1)])), d.rest_proc()]),
                );
            }
            for d in decompose(c, Shape::Prefix(PrefixKind::In), true) {
                let m = name_of(&d.action);
                emit(
                    Rule::In,
                    par_of([xamb(par_of([Proc::Hole, var(X1)])), Proc::amb(m.clone(), var(X2))]),
                    &d.binders,
                    Proc::amb(m, par_of([xamb(par_of([d.selected.clone(), d.rest_proc(), var(X1)])), var(X2)])),
                );
            }
            for d in decompose(c, Shape::AmbientPrefix(PrefixKind::Out), true) {
                let m = name_of(&d.action);
                let moved = Proc::Amb(
                    d.ambient.clone().unwrap(),
                    Box::new(par_of(std::iter::once(d.selected.clone()).chain(d.inner_rest.iter().cloned()))),
                );
                emit(
                    Rule::OutAmb,
                    Proc::amb(m.clone(), par_of([Proc::Hole, var(X1)])),
                    &d.binders,
                    par_of([Proc::amb(m, par_of([d.rest_proc(), var(X1)])), moved]),
                );
            }
            for d in decompose(c, Shape::Prefix(PrefixKind::Out), true) {
                let m = name_of(&d.action);
                emit(
                    Rule::Out,
                    Proc::amb(m.clone(), par_of([xamb(par_of([Proc::Hole, var(X1)])), var(X2)])),
                    &d.binders,
                    par_of([Proc::amb(m, var(X2)), xamb(par_of([d.selected.clone(), d.rest_proc(), var(X1)]))]),
                );
            }
        }
        Calculus::Ccs => {
            for d in decompose(c, Shape::Summand(PrefixKind::Recv), true) {
                let a = name_of(&d.action);
                emit(
                    Rule::Rcv,
                    par_of([Proc::Hole, Proc::prefix(Action::Send(a), var(X1))]),
                    &d.binders,
                    par_of([d.selected.clone(), d.rest_proc(), var(X1)]),
                );
            }
            for d in decompose(c, Shape::Summand(PrefixKind::Send), true) {
                let a = name_of(&d.action);
                emit(
                    Rule::Snd,
                    par_of([Proc::Hole, Proc::prefix(Action::Recv(a), var(X1))]),
                    &d.binders,
                    par_of([d.selected.clone(), d.rest_proc(), var(X1)]),
                );
            }
        }
        Calculus::Accs => {
            for d in decompose(c, Shape::Summand(PrefixKind::Recv), true) {
                let a = name_of(&d.action);
                emit(
                    Rule::Rcv,
                    par_of([Proc::Hole, Proc::Output(a)]),
                    &d.binders,
                    par_of([d.selected.clone(), d.rest_proc()]),
                );
            }
            for d in decompose(c, Shape::Output, true) {
                let a = d.subject.clone().unwrap();
                emit(
                    Rule::Snd,
                    par_of([Proc::Hole, Proc::prefix(Action::Recv(a), var(X1))]),
                    &d.binders,
                    par_of([d.rest_proc(), var(X1)]),
                );
            }
        }
    }
    out.into_iter().collect()
}

/// Closes the variables of an IPO transition, giving a transition of the
/// instantiated system.
pub fn instantiate(t: &Transition, s: &Substitution) -> Result<Transition> {
    let TransitionLabel::Context(label) = &t.label else {
        return Ok(t.clone());
    };
    let missing: Vec<String> = label.variables.iter().filter(|v| !s.covers(v)).cloned().collect();
    if !missing.is_empty() {
        return Err(Error::IncompleteSubstitution(missing));
    }
    let body = apply_subst(&Term::from_proc(t.source.calculus, label.body.clone()), s)?;
    let label = canonical_label(&Label::from_canonical(t.source.calculus, body.proc));
    let target = canonicalize(&apply_subst(&t.target.to_term(), s)?);
    Ok(Transition { source: t.source.clone(), label: TransitionLabel::Context(label), target, rule: t.rule })
}

/// Treats environment-supplied variables as the inert processes they are
/// in the symbolic game: process variables become `0` and name-variable
/// ambients left with nothing inside vanish.
pub fn erase_variables(c: &CanonicalForm) -> CanonicalForm {
    fn erase(p: &Proc) -> Proc {
        match p {
            Proc::Var(_) => Proc::Nil,
            Proc::Hole | Proc::Nil | Proc::Output(_) => p.clone(),
            Proc::Prefix(a, q) => Proc::prefix(a.clone(), erase(q)),
            Proc::Amb(n, q) => {
                let body = Proc::par([erase(q)]);
                if matches!(n, AmbName::Var(_)) && body == Proc::Nil {
                    Proc::Nil
                } else {
                    Proc::Amb(n.clone(), Box::new(body))
                }
            }
            Proc::Sum(ps) => Proc::Sum(ps.iter().map(erase).collect()),
            Proc::Par(ps) => Proc::par(ps.iter().map(erase)),
            Proc::Nu(n, q) => Proc::nu(n.clone(), erase(q)),
        }
    }
    if c.is_pure() {
        return c.clone();
    }
    canonicalize(&Term::from_proc(c.calculus, erase(&c.to_proc())))
}

// ---------------------------------------------------------------------------
// lazily grown transition systems

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Ordinary,
    Its,
}

/// Transition cache keyed by canonical state. Readers share the map;
/// growing it takes the write lock.
pub struct TransitionSystem {
    pub calculus: Calculus,
    pub kind: SystemKind,
    cache: RwLock<HashMap<CanonicalForm, Arc<Vec<Transition>>>>,
}

impl TransitionSystem {
    pub fn new(calculus: Calculus, kind: SystemKind) -> Result<Self> {
        if kind == SystemKind::Ordinary && calculus == Calculus::Ma {
            return Err(Error::Unsupported("an ordinary transition system", Calculus::Ma));
        }
        Ok(TransitionSystem { calculus, kind, cache: RwLock::new(HashMap::new()) })
    }

    pub fn transitions(&self, c: &CanonicalForm) -> Result<Arc<Vec<Transition>>> {
        if let Some(ts) = self.cache.read().unwrap().get(c) {
            return Ok(ts.clone());
        }
        let ts = Arc::new(match self.kind {
            SystemKind::Ordinary => ordinary_transitions_canonical(c)?,
            SystemKind::Its => its_transitions_canonical(c),
        });
        let mut w = self.cache.write().unwrap();
        Ok(w.entry(c.clone()).or_insert(ts).clone())
    }

    pub fn cached_states(&self) -> usize {
        self.cache.read().unwrap().len()
    }

    /// Breadth-first exploration from `root`. IPO continuation states have
    /// their variables erased. Fails once more than `max_states` states are
    /// found.
    pub fn explore(&self, root: &CanonicalForm, max_states: usize) -> Result<Reachable> {
        let norm = |c: &CanonicalForm| match self.kind {
            SystemKind::Ordinary => c.clone(),
            SystemKind::Its => erase_variables(c),
        };
        let root = norm(root);
        let mut index: BTreeMap<CanonicalForm, usize> = BTreeMap::new();
        let mut states = vec![root.clone()];
        index.insert(root, 0);
        let mut edges = Vec::new();
        let mut next = 0;
        while next < states.len() {
            let s = states[next].clone();
            for t in self.transitions(&s)?.iter() {
                let target = norm(&t.target);
                let id = match index.get(&target) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= max_states {
                            return Err(Error::DivergenceBudgetExceeded(max_states));
                        }
                        states.push(target.clone());
                        index.insert(target, states.len() - 1);
                        states.len() - 1
                    }
                };
                edges.push((next, t.label.clone(), id, t.rule));
            }
            next += 1;
        }
        Ok(Reachable { calculus: self.calculus, kind: self.kind, states, edges })
    }
}

/// Explored fragment of a transition system; state 0 is the root.
#[derive(Clone, Debug)]
pub struct Reachable {
    pub calculus: Calculus,
    pub kind: SystemKind,
    pub states: Vec<CanonicalForm>,
    pub edges: Vec<(usize, TransitionLabel, usize, Rule)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(c: Calculus, s: &str) -> Term {
        Term::parse(c, s).unwrap()
    }

    fn its(c: Calculus, s: &str) -> Vec<(String, String)> {
        its_transitions(&t(c, s)).into_iter().map(|tr| (tr.label.to_string(), tr.target.to_string())).collect()
    }

    fn ord(c: Calculus, s: &str) -> Vec<(String, String)> {
        ordinary_transitions(&t(c, s))
            .unwrap()
            .into_iter()
            .map(|tr| (tr.label.to_string(), tr.target.to_string()))
            .collect()
    }

    fn pairs(xs: &[(&str, &str)]) -> Vec<(String, String)> {
        xs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn ordinary_examples() {
        assert_eq!(ord(Calculus::Accs, "a.'a + tau.0"), pairs(&[("tau", "0"), ("a", "'a")]));
        assert_eq!(ord(Calculus::Accs, "'a"), pairs(&[("'a", "0")]));
        assert!(ord(Calculus::Accs, "(nu a)(a.0)").is_empty());
        assert_eq!(ord(Calculus::Ccs, "a.0 | 'a.0").len(), 3);
        assert!(ordinary_transitions(&t(Calculus::Ma, "n[0]")).is_err());
    }

    #[test]
    fn open_rule() {
        assert_eq!(its(Calculus::Ma, "open n.0"), pairs(&[("-|n[@X1]", "@X1")]));
    }

    #[test]
    fn coin_rule() {
        let ts = its(Calculus::Ma, "m[0]");
        assert!(ts.contains(&("-|?x[in m.@X1|@X2]".into(), "m[?x[@X1 | @X2]]".into())), "{ts:?}");
        assert!(ts.contains(&("-|open m.@X1".into(), "@X1".into())));
        assert_eq!(ts.len(), 2);
    }

    #[test]
    fn ma_rules_with_restriction() {
        let ts = its(Calculus::Ma, "(nu k)(k[in m.0] | out n.k[0])");
        let labels: BTreeSet<String> = ts.iter().map(|(l, _)| l.clone()).collect();
        assert_eq!(labels, ["-|m[@X1]", "n[?x[-|@X1]|@X2]"].iter().map(|s| s.to_string()).collect());
        let ts = its(Calculus::Ma, "in m.0 | n[out k.0]");
        let labels: BTreeSet<String> = ts.iter().map(|(l, _)| l.clone()).collect();
        assert!(labels.contains("?x[-|@X1]|m[@X2]"));
        assert!(labels.contains("k[-|@X1]"));
        assert!(labels.contains("-|open n.@X1"));
    }

    #[test]
    fn accs_rules() {
        let ts = its(Calculus::Accs, "'a | b.0");
        assert!(ts.contains(&("-|a.@X1".into(), "b.0 | @X1".into())), "{ts:?}");
        assert!(ts.contains(&("-|'b".into(), "'a".into())));
        assert_eq!(its(Calculus::Accs, "a.'a + tau.0"), pairs(&[("-", "0"), ("-|'a", "'a")]));
    }

    #[test]
    fn instantiate_examples() {
        let tr = its_transitions(&t(Calculus::Ma, "open n.0")).pop().unwrap();
        let s = Substitution::new().with_proc(X1, Term::nil(Calculus::Ma));
        let i = instantiate(&tr, &s).unwrap();
        assert_eq!((i.label.to_string(), i.target.to_string()), ("-|n[0]".into(), "0".into()));
        assert!(matches!(
            instantiate(&tr, &Substitution::new()),
            Err(Error::IncompleteSubstitution(v)) if v == vec!["X1".to_string()]
        ));

        let tr = its_transitions(&t(Calculus::Ccs, "a.0")).into_iter().find(|tr| tr.rule == Rule::Rcv).unwrap();
        let s = Substitution::new().with_proc(X1, t(Calculus::Ccs, "b.0"));
        let i = instantiate(&tr, &s).unwrap();
        assert_eq!((i.label.to_string(), i.target.to_string()), ("-|'a.b.0".into(), "b.0".into()));

        let tau = its_transitions(&t(Calculus::Ccs, "tau.a.0")).pop().unwrap();
        assert_eq!(instantiate(&tau, &Substitution::new()).unwrap(), tau);
    }

    #[test]
    fn instantiation_avoids_capture() {
        let tr =
            its_transitions(&t(Calculus::Ma, "(nu k)n[k[0]]")).into_iter().find(|tr| tr.rule == Rule::CoOpen).unwrap();
        let s = Substitution::new().with_proc(X1, t(Calculus::Ma, "f0[0]"));
        let i = instantiate(&tr, &s).unwrap();
        assert_eq!(i.target.to_string(), "(nu f1)(f0[0] | f1[0])");
    }

    #[test]
    fn erasing_variables() {
        let c = canonicalize(&t(Calculus::Ma, "m[?x[@X1 | @X2] | k[0]] | @X3"));
        assert_eq!(erase_variables(&c).to_string(), "m[k[0]]");
        let c = canonicalize(&t(Calculus::Ma, "?x[in m.@X1]"));
        assert_eq!(erase_variables(&c).to_string(), "?x[in m.0]");
    }

    #[test]
    fn exploration() {
        let ts = TransitionSystem::new(Calculus::Ma, SystemKind::Its).unwrap();
        let r = ts.explore(&canonicalize(&t(Calculus::Ma, "open n.0")), 10).unwrap();
        assert_eq!(r.states.len(), 2);
        assert_eq!(r.edges.len(), 1);
        assert!(TransitionSystem::new(Calculus::Ma, SystemKind::Ordinary).is_err());
        let ts = TransitionSystem::new(Calculus::Ccs, SystemKind::Ordinary).unwrap();
        let r = ts.explore(&canonicalize(&t(Calculus::Ccs, "a.b.0 | 'a.0")), 10).unwrap();
        assert_eq!(r.states.len(), 6);
        assert!(ts.explore(&canonicalize(&t(Calculus::Ccs, "a.b.0 | 'a.0")), 3).is_err());
    }
}
