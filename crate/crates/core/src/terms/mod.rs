//! Process terms for CCS, asynchronous CCS and the communication-free
//! fragment of mobile ambients, in their extended syntax (process and
//! ambient-name variables) plus one-hole contexts.

mod parse;
mod print;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use parse::{parse_label, parse_proc, parse_term};

pub type Name = String;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Calculus {
    Ccs,
    Accs,
    Ma,
}

impl Calculus {
    pub const ALL: [Calculus; 3] = [Calculus::Ccs, Calculus::Accs, Calculus::Ma];

    pub fn has_sum(self) -> bool {
        !matches!(self, Calculus::Ma)
    }
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Calculus::Ccs => "ccs",
            Calculus::Accs => "accs",
            Calculus::Ma => "ma",
        })
    }
}

impl std::str::FromStr for Calculus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ccs" => Ok(Calculus::Ccs),
            "accs" => Ok(Calculus::Accs),
            "ma" => Ok(Calculus::Ma),
            other => Err(Error::InvalidQuery(format!("unknown calculus `{other}`"))),
        }
    }
}

/// Prefixes of all three calculi. `Recv`/`Send` belong to CCS (ACCS has
/// only `Recv`), `In`/`Out`/`Open` are ambient capabilities.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    Tau,
    Recv(Name),
    Send(Name),
    In(Name),
    Out(Name),
    Open(Name),
}

impl Action {
    pub fn name(&self) -> Option<&str> {
        match self {
            Action::Tau => None,
            Action::Recv(n) | Action::Send(n) | Action::In(n) | Action::Out(n) | Action::Open(n) => Some(n),
        }
    }

    fn map_name(&self, f: impl FnOnce(&str) -> Name) -> Action {
        match self {
            Action::Tau => Action::Tau,
            Action::Recv(n) => Action::Recv(f(n)),
            Action::Send(n) => Action::Send(f(n)),
            Action::In(n) => Action::In(f(n)),
            Action::Out(n) => Action::Out(f(n)),
            Action::Open(n) => Action::Open(f(n)),
        }
    }

    fn allowed_in(&self, calculus: Calculus) -> bool {
        match calculus {
            Calculus::Ccs => matches!(self, Action::Tau | Action::Recv(_) | Action::Send(_)),
            Calculus::Accs => matches!(self, Action::Tau | Action::Recv(_)),
            Calculus::Ma => matches!(self, Action::In(_) | Action::Out(_) | Action::Open(_)),
        }
    }
}

/// Ambient name: a concrete name or a name variable (`?x`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AmbName {
    Var(String),
    Name(Name),
}

impl AmbName {
    pub fn as_name(&self) -> Option<&str> {
        match self {
            AmbName::Name(n) => Some(n),
            AmbName::Var(_) => None,
        }
    }
}

/// Process syntax tree. Variant order is the constructor rank used when
/// sorting parallel components and summands.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Proc {
    Hole,
    Prefix(Action, Box<Proc>),
    Sum(Vec<Proc>),
    Output(Name),
    Amb(AmbName, Box<Proc>),
    Var(String),
    Nil,
    Par(Vec<Proc>),
    Nu(Name, Box<Proc>),
}

impl Proc {
    pub fn prefix(action: Action, cont: Proc) -> Proc {
        Proc::Prefix(action, Box::new(cont))
    }

    pub fn amb(name: impl Into<Name>, body: Proc) -> Proc {
        Proc::Amb(AmbName::Name(name.into()), Box::new(body))
    }

    pub fn nu(name: impl Into<Name>, body: Proc) -> Proc {
        Proc::Nu(name.into(), Box::new(body))
    }

    /// Parallel composition that drops nils and collapses trivial cases.
    pub fn par(parts: impl IntoIterator<Item = Proc>) -> Proc {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Proc::Nil => {}
                Proc::Par(ps) => out.extend(ps),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => Proc::Nil,
            1 => out.pop().unwrap(),
            _ => Proc::Par(out),
        }
    }

    /// Wraps `body` in restrictions, outermost first.
    pub fn restrict(binders: &[Name], body: Proc) -> Proc {
        binders.iter().rev().fold(body, |acc, n| Proc::Nu(n.clone(), Box::new(acc)))
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        let note = |n: &str, bound: &Vec<Name>, out: &mut BTreeSet<Name>| {
            if !bound.iter().any(|b| b == n) {
                out.insert(n.to_string());
            }
        };
        match self {
            Proc::Hole | Proc::Nil | Proc::Var(_) => {}
            Proc::Output(a) => note(a, bound, out),
            Proc::Prefix(act, cont) => {
                if let Some(n) = act.name() {
                    note(n, bound, out);
                }
                cont.collect_free(bound, out);
            }
            Proc::Amb(n, body) => {
                if let AmbName::Name(n) = n {
                    note(n, bound, out);
                }
                body.collect_free(bound, out);
            }
            Proc::Sum(ps) | Proc::Par(ps) => ps.iter().for_each(|p| p.collect_free(bound, out)),
            Proc::Nu(n, body) => {
                bound.push(n.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every name occurring anywhere, free or bound.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |p| match p {
            Proc::Output(a) | Proc::Nu(a, _) | Proc::Amb(AmbName::Name(a), _) => {
                out.insert(a.clone());
            }
            Proc::Prefix(act, _) => {
                if let Some(n) = act.name() {
                    out.insert(n.to_string());
                }
            }
            _ => {}
        });
        out
    }

    /// Process and name variables in first-occurrence (left-to-right) order.
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.visit(&mut |p| {
            let v = match p {
                Proc::Var(x) | Proc::Amb(AmbName::Var(x), _) => x,
                _ => return,
            };
            if !out.contains(v) {
                out.push(v.clone());
            }
        });
        out
    }

    fn variable_occurrences(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |p| match p {
            Proc::Var(x) | Proc::Amb(AmbName::Var(x), _) => out.push(x.clone()),
            _ => {}
        });
        out
    }

    pub fn hole_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |p| {
            if matches!(p, Proc::Hole) {
                n += 1
            }
        });
        n
    }

    pub fn is_pure(&self) -> bool {
        self.variable_occurrences().is_empty()
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Proc)) {
        f(self);
        match self {
            Proc::Prefix(_, p) | Proc::Amb(_, p) | Proc::Nu(_, p) => p.visit(f),
            Proc::Sum(ps) | Proc::Par(ps) => ps.iter().for_each(|p| p.visit(f)),
            _ => {}
        }
    }

    /// Renames free occurrences of `from` to `to`. The caller guarantees
    /// `to` is not captured (it is fresh for `self`).
    pub fn rename_free(&self, from: &str, to: &str) -> Proc {
        let r = |n: &str| if n == from { to.to_string() } else { n.to_string() };
        match self {
            Proc::Hole | Proc::Nil | Proc::Var(_) => self.clone(),
            Proc::Output(a) => Proc::Output(r(a)),
            Proc::Prefix(act, cont) => Proc::Prefix(act.map_name(r), Box::new(cont.rename_free(from, to))),
            Proc::Amb(n, body) => {
                let n = match n {
                    AmbName::Name(n) => AmbName::Name(r(n)),
                    v => v.clone(),
                };
                Proc::Amb(n, Box::new(body.rename_free(from, to)))
            }
            Proc::Sum(ps) => Proc::Sum(ps.iter().map(|p| p.rename_free(from, to)).collect()),
            Proc::Par(ps) => Proc::Par(ps.iter().map(|p| p.rename_free(from, to)).collect()),
            Proc::Nu(n, body) if n == from => self.clone(),
            Proc::Nu(n, body) => Proc::Nu(n.clone(), Box::new(body.rename_free(from, to))),
        }
    }

    /// Number of prefixes, output particles and ambients.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |p| {
            if matches!(p, Proc::Prefix(..) | Proc::Output(_) | Proc::Amb(..)) {
                n += 1
            }
        });
        n
    }

    pub(crate) fn check(&self, calculus: Calculus, holes_allowed: bool) -> Result<()> {
        let bad = |m: String| Err(Error::IllFormed(m));
        match self {
            Proc::Hole if !holes_allowed => bad("hole outside of a context".into()),
            Proc::Hole | Proc::Nil | Proc::Var(_) => Ok(()),
            Proc::Output(a) if calculus != Calculus::Accs => {
                bad(format!("output particle '{a} is only available in ACCS"))
            }
            Proc::Output(_) => Ok(()),
            Proc::Prefix(act, cont) => {
                if !act.allowed_in(calculus) {
                    return bad(format!("prefix {} is not part of {calculus}", print::action(act)));
                }
                cont.check(calculus, holes_allowed)
            }
            Proc::Amb(_, body) => {
                if calculus != Calculus::Ma {
                    return bad(format!("ambients are not part of {calculus}"));
                }
                body.check(calculus, holes_allowed)
            }
            Proc::Sum(ps) => {
                if !calculus.has_sum() {
                    return bad("mobile ambients have no choice operator".into());
                }
                for p in ps {
                    if !matches!(p, Proc::Nil | Proc::Prefix(..) | Proc::Sum(_)) {
                        return bad(format!("unguarded summand `{}`", print::proc_to_string(p)));
                    }
                    p.check(calculus, holes_allowed)?;
                }
                Ok(())
            }
            Proc::Par(ps) => ps.iter().try_for_each(|p| p.check(calculus, holes_allowed)),
            Proc::Nu(_, body) => body.check(calculus, holes_allowed),
        }
    }
}

/// A process of one calculus.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub calculus: Calculus,
    pub proc: Proc,
}

impl Term {
    /// Validates the syntax for `calculus`: allowed prefixes, guarded sums,
    /// no holes, no variable occurring twice.
    pub fn new(calculus: Calculus, proc: Proc) -> Result<Term> {
        proc.check(calculus, false)?;
        let occ = proc.variable_occurrences();
        let distinct: BTreeSet<_> = occ.iter().collect();
        if distinct.len() != occ.len() {
            return Err(Error::IllFormed("a variable occurs twice".into()));
        }
        Ok(Term { calculus, proc })
    }

    /// Builds a term without the well-formedness checks. Used for
    /// intermediate states that are known to be syntactically valid.
    pub(crate) fn from_proc(calculus: Calculus, proc: Proc) -> Term {
        Term { calculus, proc }
    }

    pub fn parse(calculus: Calculus, src: &str) -> Result<Term> {
        parse_term(calculus, src)
    }

    pub fn nil(calculus: Calculus) -> Term {
        Term::from_proc(calculus, Proc::Nil)
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        self.proc.free_names()
    }

    pub fn is_pure(&self) -> bool {
        self.proc.is_pure()
    }

    pub fn par(&self, other: &Term) -> Result<Term> {
        same_calculus(self.calculus, other.calculus)?;
        Ok(Term::from_proc(self.calculus, Proc::par([self.proc.clone(), other.proc.clone()])))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::proc_to_string(&self.proc))
    }
}

pub fn free_names(t: &Term) -> BTreeSet<Name> {
    t.free_names()
}

pub(crate) fn same_calculus(a: Calculus, b: Calculus) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::CrossCalculus(a, b))
    }
}

/// Deterministic fresh names `f0, f1, ...`.
pub fn fresh_name(avoid: &BTreeSet<Name>) -> Name {
    fresh_names(avoid).next().unwrap()
}

pub fn fresh_names(avoid: &BTreeSet<Name>) -> impl Iterator<Item = Name> + '_ {
    (0..).map(|i| format!("f{i}")).filter(move |n| !avoid.contains(n))
}

/// One-hole context, the label of an IPO transition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub calculus: Calculus,
    pub body: Proc,
    pub variables: Vec<String>,
}

impl Label {
    pub fn new(calculus: Calculus, body: Proc) -> Result<Label> {
        body.check(calculus, true)?;
        if body.hole_count() != 1 {
            return Err(Error::IllFormed(format!("a label needs exactly one hole, found {}", body.hole_count())));
        }
        let variables = body.variables();
        Ok(Label { calculus, body, variables })
    }

    pub(crate) fn from_canonical(calculus: Calculus, body: Proc) -> Label {
        let variables = body.variables();
        Label { calculus, body, variables }
    }

    pub fn identity(calculus: Calculus) -> Label {
        Label::from_canonical(calculus, Proc::Hole)
    }

    pub fn parse(calculus: Calculus, src: &str) -> Result<Label> {
        parse_label(calculus, src)
    }

    pub fn is_identity(&self) -> bool {
        self.body == Proc::Hole
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        self.body.free_names()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::proc_to_compact_string(&self.body))
    }
}

/// Replaces the hole of `l` by `t`. Binders of the context are renamed
/// away from the free names of `t`.
pub fn plug(l: &Label, t: &Term) -> Result<Term> {
    same_calculus(l.calculus, t.calculus)?;
    let fn_t = t.free_names();
    let mut avoid = fn_t.clone();
    avoid.extend(l.body.all_names());
    avoid.extend(t.proc.all_names());
    Ok(Term::from_proc(t.calculus, fill(&l.body, &t.proc, &fn_t, &mut avoid)))
}

fn fill(ctx: &Proc, t: &Proc, fn_t: &BTreeSet<Name>, avoid: &mut BTreeSet<Name>) -> Proc {
    match ctx {
        Proc::Hole => t.clone(),
        Proc::Nil | Proc::Var(_) | Proc::Output(_) => ctx.clone(),
        Proc::Prefix(a, c) => Proc::Prefix(a.clone(), Box::new(fill(c, t, fn_t, avoid))),
        Proc::Amb(n, c) => Proc::Amb(n.clone(), Box::new(fill(c, t, fn_t, avoid))),
        Proc::Sum(ps) => Proc::Sum(ps.iter().map(|p| fill(p, t, fn_t, avoid)).collect()),
        Proc::Par(ps) => Proc::Par(ps.iter().map(|p| fill(p, t, fn_t, avoid)).collect()),
        Proc::Nu(n, body) if fn_t.contains(n) && body.hole_count() > 0 => {
            let m = fresh_name(avoid);
            avoid.insert(m.clone());
            let body = body.rename_free(n, &m);
            Proc::Nu(m, Box::new(fill(&body, t, fn_t, avoid)))
        }
        Proc::Nu(n, body) => Proc::Nu(n.clone(), Box::new(fill(body, t, fn_t, avoid))),
    }
}

/// Finite map from process variables to processes and from name variables
/// to names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    pub procs: BTreeMap<String, Term>,
    pub names: BTreeMap<String, Name>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_proc(mut self, var: impl Into<String>, t: Term) -> Self {
        self.procs.insert(var.into(), t);
        self
    }

    pub fn with_name(mut self, var: impl Into<String>, n: impl Into<Name>) -> Self {
        self.names.insert(var.into(), n.into());
        self
    }

    pub fn covers(&self, var: &str) -> bool {
        self.procs.contains_key(var) || self.names.contains_key(var)
    }

    /// Names that substituted material brings in.
    fn range_free_names(&self) -> BTreeSet<Name> {
        let mut out: BTreeSet<Name> = self.names.values().cloned().collect();
        for t in self.procs.values() {
            out.extend(t.free_names());
        }
        out
    }

    /// `other ∘ self`: apply `self`, then `other`.
    pub fn then(&self, other: &Substitution) -> Result<Substitution> {
        let mut out = Substitution::new();
        for (v, t) in &self.procs {
            out.procs.insert(v.clone(), apply_subst(t, other)?);
        }
        for (v, n) in &self.names {
            out.names.insert(v.clone(), n.clone());
        }
        for (v, t) in &other.procs {
            out.procs.entry(v.clone()).or_insert_with(|| t.clone());
        }
        for (v, n) in &other.names {
            out.names.entry(v.clone()).or_insert_with(|| n.clone());
        }
        Ok(out)
    }
}

/// Capture-avoiding substitution of process and name variables.
pub fn apply_subst(t: &Term, s: &Substitution) -> Result<Term> {
    for u in s.procs.values() {
        same_calculus(t.calculus, u.calculus)?;
    }
    let range_fn = s.range_free_names();
    let mut avoid = range_fn.clone();
    avoid.extend(t.proc.all_names());
    for u in s.procs.values() {
        avoid.extend(u.proc.all_names());
    }
    Ok(Term::from_proc(t.calculus, subst_proc(&t.proc, s, &range_fn, &mut avoid)))
}

fn subst_proc(p: &Proc, s: &Substitution, range_fn: &BTreeSet<Name>, avoid: &mut BTreeSet<Name>) -> Proc {
    match p {
        Proc::Var(x) => match s.procs.get(x) {
            Some(t) => t.proc.clone(),
            None => p.clone(),
        },
        Proc::Hole | Proc::Nil | Proc::Output(_) => p.clone(),
        Proc::Prefix(a, c) => Proc::Prefix(a.clone(), Box::new(subst_proc(c, s, range_fn, avoid))),
        Proc::Amb(n, body) => {
            let n = match n {
                AmbName::Var(x) => match s.names.get(x) {
                    Some(m) => AmbName::Name(m.clone()),
                    None => n.clone(),
                },
                n => n.clone(),
            };
            Proc::Amb(n, Box::new(subst_proc(body, s, range_fn, avoid)))
        }
        Proc::Sum(ps) => Proc::Sum(ps.iter().map(|q| subst_proc(q, s, range_fn, avoid)).collect()),
        Proc::Par(ps) => Proc::Par(ps.iter().map(|q| subst_proc(q, s, range_fn, avoid)).collect()),
        Proc::Nu(n, body) => {
            let touches = body.variables().iter().any(|v| s.covers(v));
            if range_fn.contains(n) && touches {
                let m = fresh_name(avoid);
                avoid.insert(m.clone());
                let body = body.rename_free(n, &m);
                Proc::Nu(m, Box::new(subst_proc(&body, s, range_fn, avoid)))
            } else {
                Proc::Nu(n.clone(), Box::new(subst_proc(body, s, range_fn, avoid)))
            }
        }
    }
}

pub use print::{proc_to_compact_string, proc_to_string};
