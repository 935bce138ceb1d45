//! Bisimulation games: strong and asynchronous bisimilarity on the ordinary
//! transition systems, and L-bisimilarity (with IPO and semi-saturated
//! bisimilarity as its endpoints) on the IPO transition systems.
//!
//! The IPO games are played symbolically by default: the variables a label
//! introduces are inert, so continuation states have them erased. In
//! instantiation mode every variable is closed over a finite pool instead.

mod capturing;
mod game;
mod labels;
mod predicates;

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use itertools::Itertools;

pub use capturing::{is_capturing, BarbCapture, CapturingReport};
pub use game::{AnswerInfo, GameResult, Move, MoveKind, Side, Stats, WitnessStep};
pub use labels::LabelSet;
pub use predicates::{pred_ccs, pred_ccs_targets, pred_open, pred_open_targets, CcsPredicate};

use crate::congruence::{canonical_label, canonicalize, CanonicalForm};
use crate::error::{Error, Result};
use crate::lts::{
    erase_variables, instantiate, its_transitions_canonical, OrdAction, SystemKind, TransitionLabel, TransitionSystem,
    XN,
};
use crate::reduction::{barbs_canonical, reduct_targets};
use crate::terms::{apply_subst, fresh_name, plug, same_calculus, Calculus, Label, Name, Proc, Substitution, Term};
use game::Arena;

pub const DEFAULT_MAX_PAIRS: usize = 50_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    Strong,
    Async,
    Ipo,
    SemiSaturated,
    BarbedSemiSaturated { contextual_barbs: bool },
    LBisim(LabelSet),
}

impl Relation {
    /// `strong`, `async`, `ipo`, `semi-sat`, `barbed-semi-sat` or
    /// `l-bisim`; the latter takes a label set, also accepted inline as
    /// `l-bisim:LA`.
    pub fn parse(calculus: Calculus, rel: &str, labels: Option<&str>) -> Result<Relation> {
        let (rel, inline) = match rel.split_once(':') {
            Some((r, l)) => (r, Some(l)),
            None => (rel, None),
        };
        let labels = labels.or(inline);
        if labels.is_some() && rel != "l-bisim" {
            return Err(Error::InvalidQuery(format!("`{rel}` takes no label set")));
        }
        Ok(match rel {
            "strong" => Relation::Strong,
            "async" => Relation::Async,
            "ipo" => Relation::Ipo,
            "semi-sat" => Relation::SemiSaturated,
            "barbed-semi-sat" => Relation::BarbedSemiSaturated { contextual_barbs: true },
            "l-bisim" => match labels {
                Some(l) => Relation::LBisim(LabelSet::parse(calculus, l)?),
                None => return Err(Error::InvalidQuery("`l-bisim` needs a label set".into())),
            },
            _ => return Err(Error::InvalidQuery(format!("unknown relation `{rel}`"))),
        })
    }
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Relation::Strong => f.write_str("strong"),
            Relation::Async => f.write_str("async"),
            Relation::Ipo => f.write_str("ipo"),
            Relation::SemiSaturated => f.write_str("semi-sat"),
            Relation::BarbedSemiSaturated { .. } => f.write_str("barbed-semi-sat"),
            Relation::LBisim(l) => write!(f, "l-bisim:{l}"),
        }
    }
}

/// Closed terms and names the variables of IPO labels range over.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pool {
    pub processes: Vec<Term>,
    /// When empty, the names of the query plus one fresh name.
    pub names: Vec<Name>,
}

impl Pool {
    /// One term per line; `#` starts a comment; a line `names: a b` fixes
    /// the name pool.
    pub fn parse(calculus: Calculus, src: &str) -> Result<Pool> {
        let mut pool = Pool::default();
        for line in src.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(names) = line.strip_prefix("names:") {
                pool.names.extend(names.split_whitespace().map(String::from));
            } else {
                let t = Term::parse(calculus, line)?;
                if !t.is_pure() {
                    return Err(Error::IllFormed(format!("pool term `{line}` is not closed")));
                }
                pool.processes.push(t);
            }
        }
        Ok(pool)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Symbolic,
    Instantiate(Pool),
}

/// A configured solver; each `check` is an independent query.
#[derive(Clone, Debug)]
pub struct Checker {
    pub relation: Relation,
    pub mode: Mode,
    pub max_pairs: usize,
}

impl Checker {
    pub fn new(relation: Relation) -> Self {
        Checker { relation, mode: Mode::Symbolic, max_pairs: DEFAULT_MAX_PAIRS }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_max_pairs(mut self, max_pairs: usize) -> Self {
        self.max_pairs = max_pairs;
        self
    }

    pub fn check(&self, p: &Term, q: &Term) -> Result<GameResult> {
        let arena = self.arena(p, q)?;
        game::solve(arena.as_ref(), canonicalize(p), canonicalize(q), self.max_pairs)
    }

    /// Plays `result.witness` against the move generators; true when every
    /// step is a legal move and the last one cannot be answered.
    pub fn replay(&self, p: &Term, q: &Term, result: &GameResult) -> Result<bool> {
        if result.verdict || result.witness.is_empty() {
            return Ok(result.verdict && result.witness.is_empty());
        }
        let arena = self.arena(p, q)?;
        let calc = p.calculus;
        let state = |s: &str| Term::parse(calc, s).map(|t| canonicalize(&t));
        let root = arena.normalize((canonicalize(p), canonicalize(q)));
        let mut expected = (root.0.to_string(), root.1.to_string());
        let last = result.witness.len() - 1;
        for (k, step) in result.witness.iter().enumerate() {
            match step {
                WitnessStep::Barb { left, right, side, barb } => {
                    if (left.clone(), right.clone()) != expected || k != last {
                        return Ok(false);
                    }
                    let found = arena.mismatch(&state(left)?, &state(right)?);
                    return Ok(found == Some((*side, barb.clone())));
                }
                WitnessStep::Move { left, right, attacker, label, attacker_target, answers, answer } => {
                    if (left.clone(), right.clone()) != expected {
                        return Ok(false);
                    }
                    let (l, r) = (state(left)?, state(right)?);
                    let (att, def) = match attacker {
                        Side::Left => (&l, &r),
                        Side::Right => (&r, &l),
                    };
                    let Some(mv) = arena
                        .attacks(att, def)?
                        .into_iter()
                        .find(|m| &m.label.to_string() == label && &m.target.to_string() == attacker_target)
                    else {
                        return Ok(false);
                    };
                    let replies = arena.answers(&mv, att, def)?;
                    if replies.len() != *answers {
                        return Ok(false);
                    }
                    match answer {
                        None => return Ok(k == last && replies.is_empty()),
                        Some(a) => {
                            if !replies.iter().any(|m| m.target.to_string() == a.defender_target) {
                                return Ok(false);
                            }
                            let (at, dt) = (state(attacker_target)?, state(&a.defender_target)?);
                            let next = arena.normalize(match attacker {
                                Side::Left => (at, dt),
                                Side::Right => (dt, at),
                            });
                            expected = (next.0.to_string(), next.1.to_string());
                        }
                    }
                }
            }
        }
        Ok(false)
    }

    fn arena(&self, p: &Term, q: &Term) -> Result<Box<dyn Arena>> {
        same_calculus(p.calculus, q.calculus)?;
        let calculus = p.calculus;
        for t in [p, q] {
            if !t.is_pure() {
                return Err(Error::IllFormed(format!("`{t}` is not a closed term")));
            }
        }
        let its = |labels: LabelSet, barbs: bool| -> Result<Box<dyn Arena>> {
            let inst = match &self.mode {
                Mode::Symbolic => None,
                Mode::Instantiate(pool) => Some(Instances::new(calculus, pool, &[p, q])?),
            };
            let mut query_names = p.free_names();
            query_names.extend(q.free_names());
            Ok(Box::new(ItsArena { labels, barbs, inst, query_names, cache: RefCell::default() }))
        };
        match &self.relation {
            Relation::Strong => Ok(Box::new(OrdinaryArena {
                ts: TransitionSystem::new(calculus, SystemKind::Ordinary)?,
                asynchronous: false,
            })),
            Relation::Async => {
                if calculus != Calculus::Accs {
                    return Err(Error::Unsupported("asynchronous bisimilarity", calculus));
                }
                Ok(Box::new(OrdinaryArena {
                    ts: TransitionSystem::new(calculus, SystemKind::Ordinary)?,
                    asynchronous: true,
                }))
            }
            Relation::Ipo => its(LabelSet::All, false),
            Relation::SemiSaturated => its(LabelSet::Empty, false),
            Relation::BarbedSemiSaturated { contextual_barbs } => {
                if !contextual_barbs {
                    return Err(Error::UnsupportedQuantification);
                }
                its(LabelSet::Empty, true)
            }
            Relation::LBisim(labels) => its(labels.clone(), false),
        }
    }
}

pub fn strong_bisim(p: &Term, q: &Term) -> Result<GameResult> {
    Checker::new(Relation::Strong).check(p, q)
}

pub fn async_bisim(p: &Term, q: &Term) -> Result<GameResult> {
    Checker::new(Relation::Async).check(p, q)
}

pub fn l_bisim(p: &Term, q: &Term, labels: &LabelSet) -> Result<GameResult> {
    Checker::new(Relation::LBisim(labels.clone())).check(p, q)
}

pub fn ipo_bisim(p: &Term, q: &Term) -> Result<GameResult> {
    Checker::new(Relation::Ipo).check(p, q)
}

pub fn semi_saturated_bisim(p: &Term, q: &Term) -> Result<GameResult> {
    Checker::new(Relation::SemiSaturated).check(p, q)
}

pub fn barbed_semi_saturated_bisim(p: &Term, q: &Term, contextual_barbs: bool) -> Result<GameResult> {
    Checker::new(Relation::BarbedSemiSaturated { contextual_barbs }).check(p, q)
}

// ---------------------------------------------------------------------------
// arenas

struct OrdinaryArena {
    ts: TransitionSystem,
    asynchronous: bool,
}

impl Arena for OrdinaryArena {
    fn attacks(&self, s: &CanonicalForm, _: &CanonicalForm) -> Result<Vec<Move>> {
        Ok(self
            .ts
            .transitions(s)?
            .iter()
            .map(|t| Move { label: t.label.clone(), target: t.target.clone(), kind: MoveKind::Transition })
            .collect())
    }

    fn answers(&self, attack: &Move, _: &CanonicalForm, defender: &CanonicalForm) -> Result<Vec<Move>> {
        let mut out = Vec::new();
        for t in self.ts.transitions(defender)?.iter() {
            if t.label == attack.label {
                out.push(Move { label: t.label.clone(), target: t.target.clone(), kind: MoveKind::Transition });
            }
        }
        if let (true, TransitionLabel::Ordinary(OrdAction::In(a))) = (self.asynchronous, &attack.label) {
            for t in self.ts.transitions(defender)?.iter() {
                if t.label == TransitionLabel::Ordinary(OrdAction::Tau) {
                    let with_msg = Proc::par([t.target.to_proc(), Proc::Output(a.clone())]);
                    out.push(Move {
                        label: t.label.clone(),
                        target: canonicalize(&Term::from_proc(defender.calculus, with_msg)),
                        kind: MoveKind::TauWithMessage,
                    });
                }
            }
        }
        Ok(out)
    }
}

/// Closing substitutions for instantiation mode.
struct Instances {
    processes: Vec<Term>,
    names: Vec<Name>,
}

impl Instances {
    fn new(calculus: Calculus, pool: &Pool, query: &[&Term]) -> Result<Instances> {
        for t in &pool.processes {
            same_calculus(calculus, t.calculus)?;
        }
        let mut processes = pool.processes.clone();
        if processes.is_empty() {
            processes.push(Term::nil(calculus));
        }
        let names = if pool.names.is_empty() {
            let mut names: BTreeSet<Name> = BTreeSet::new();
            for t in query.iter().copied().chain(pool.processes.iter()) {
                names.extend(t.proc.all_names());
            }
            let fresh = fresh_name(&names);
            names.into_iter().chain([fresh]).collect()
        } else {
            pool.names.clone()
        };
        Ok(Instances { processes, names })
    }

    fn substitutions(&self, label: &Label) -> Vec<Substitution> {
        label
            .variables
            .iter()
            .map(|v| {
                if v == XN {
                    self.names.iter().map(|n| (v.clone(), Err(n.clone()))).collect::<Vec<_>>()
                } else {
                    self.processes.iter().map(|t| (v.clone(), Ok(t.clone()))).collect()
                }
            })
            .multi_cartesian_product()
            .map(|choice| {
                choice.into_iter().fold(Substitution::new(), |s, (v, x)| match x {
                    Ok(t) => s.with_proc(v, t),
                    Err(n) => s.with_name(v, n),
                })
            })
            .chain(label.variables.is_empty().then(Substitution::new))
            .collect()
    }
}

struct ItsArena {
    labels: LabelSet,
    barbs: bool,
    inst: Option<Instances>,
    /// Free names of the query. In symbolic ambient games any other free
    /// name was picked by the environment.
    query_names: BTreeSet<Name>,
    cache: RefCell<HashMap<(CanonicalForm, Option<Name>), MoveList>>,
}

type MoveList = Rc<Vec<Move>>;

impl ItsArena {
    fn settle(&self, c: &CanonicalForm) -> CanonicalForm {
        match self.inst {
            None if c.calculus == Calculus::Ma => collect_environment_ambients(&erase_variables(c), &self.query_names),
            None => erase_variables(c),
            Some(_) => c.clone(),
        }
    }

    fn environment_names(&self) -> impl Iterator<Item = Name> + '_ {
        (0..).map(|k| format!("e{k}")).filter(|n| !self.query_names.contains(n))
    }

    /// Name standing for the attacker's choice of a name variable: one not
    /// occurring in either state, nor in the query.
    fn environment_name(&self, s: &CanonicalForm, other: &CanonicalForm) -> Option<Name> {
        if self.inst.is_some() || s.calculus != Calculus::Ma {
            return None;
        }
        let (ns, no) = (s.to_proc().all_names(), other.to_proc().all_names());
        self.environment_names().find(|n| !ns.contains(n) && !no.contains(n))
    }

    fn moves(&self, s: &CanonicalForm, other: &CanonicalForm) -> Result<Rc<Vec<Move>>> {
        let env = self.environment_name(s, other);
        let key = (s.clone(), env.clone());
        if let Some(ms) = self.cache.borrow().get(&key) {
            return Ok(ms.clone());
        }
        let mut seen = BTreeSet::new();
        for t in its_transitions_canonical(s) {
            match (&self.inst, &env) {
                (Some(inst), _) => {
                    for sub in inst.substitutions(t.context().expect("IPO label")) {
                        let u = instantiate(&t, &sub)?;
                        seen.insert((u.label, u.target));
                    }
                }
                (None, Some(e)) if t.context().is_some_and(|l| l.variables.iter().any(|v| v == XN)) => {
                    let sub = Substitution::new().with_name(XN, e.clone());
                    let label = t.context().unwrap();
                    let body = apply_subst(&Term::from_proc(s.calculus, label.body.clone()), &sub)?;
                    let label = canonical_label(&Label::from_canonical(s.calculus, body.proc));
                    let target = apply_subst(&t.target.to_term(), &sub)?;
                    seen.insert((TransitionLabel::Context(label), self.settle(&canonicalize(&target))));
                }
                (None, _) => {
                    seen.insert((t.label.clone(), self.settle(&t.target)));
                }
            }
        }
        let ms: Rc<Vec<Move>> = Rc::new(
            seen.into_iter().map(|(label, target)| Move { label, target, kind: MoveKind::Transition }).collect(),
        );
        self.cache.borrow_mut().insert(key, ms.clone());
        Ok(ms)
    }
}

/// Drops empty ambients whose name was made up by the environment and is
/// mentioned nowhere else. Ambients the environment injects through `CoIn`
/// would otherwise pile up without bound.
fn collect_environment_ambients(c: &CanonicalForm, query_names: &BTreeSet<Name>) -> CanonicalForm {
    let mut uses: HashMap<Name, usize> = HashMap::new();
    let count = |p: &Proc, uses: &mut HashMap<Name, usize>| {
        p.visit(&mut |q| {
            let n = match q {
                Proc::Prefix(a, _) => a.name(),
                Proc::Amb(n, _) => n.as_name(),
                _ => None,
            };
            if let Some(n) = n {
                *uses.entry(n.to_string()).or_default() += 1;
            }
        })
    };
    for comp in &c.components {
        count(comp, &mut uses);
    }
    let garbage = |n: &str| !query_names.contains(n) && !c.binders.iter().any(|b| b == n) && uses.get(n) == Some(&1);
    fn sweep(p: &Proc, garbage: &dyn Fn(&str) -> bool) -> Proc {
        match p {
            Proc::Amb(n, body) => {
                let body = sweep(body, garbage);
                match n.as_name() {
                    Some(m) if body == Proc::Nil && garbage(m) => Proc::Nil,
                    _ => Proc::Amb(n.clone(), Box::new(body)),
                }
            }
            Proc::Prefix(a, q) => Proc::prefix(a.clone(), sweep(q, garbage)),
            Proc::Par(ps) => Proc::par(ps.iter().map(|q| sweep(q, garbage))),
            _ => p.clone(),
        }
    }
    let swept: Vec<Proc> = c.components.iter().map(|p| sweep(p, &garbage)).collect();
    if swept == c.components {
        return c.clone();
    }
    canonicalize(&Term::from_proc(c.calculus, Proc::restrict(&c.binders, Proc::par(swept))))
}

impl Arena for ItsArena {
    /// Environment names are renamed `e0, e1, ...` in order of first
    /// occurrence; bisimilarity does not depend on which fresh names the
    /// environment picked.
    fn normalize(&self, pair: game::Pair) -> game::Pair {
        if self.inst.is_some() || pair.0.calculus != Calculus::Ma {
            return pair;
        }
        let mut pair = pair;
        for _ in 0..3 {
            let mut seen: Vec<Name> = Vec::new();
            for c in [&pair.0, &pair.1] {
                for comp in &c.components {
                    comp.visit(&mut |q| {
                        let n = match q {
                            Proc::Prefix(a, _) => a.name(),
                            Proc::Amb(n, _) => n.as_name(),
                            _ => None,
                        };
                        if let Some(n) = n {
                            if !self.query_names.contains(n)
                                && !c.binders.iter().any(|b| b == n)
                                && !seen.iter().any(|m| m == n)
                            {
                                seen.push(n.to_string());
                            }
                        }
                    });
                }
            }
            let targets: Vec<Name> = self.environment_names().take(seen.len()).collect();
            if seen == targets {
                break;
            }
            let rename = |c: &CanonicalForm| {
                let mut p = c.to_proc();
                for (k, n) in seen.iter().enumerate() {
                    p = p.rename_free(n, &format!("%e{k}"));
                }
                for (k, n) in targets.iter().enumerate() {
                    p = p.rename_free(&format!("%e{k}"), n);
                }
                canonicalize(&Term::from_proc(c.calculus, p))
            };
            pair = (rename(&pair.0), rename(&pair.1));
        }
        pair
    }

    fn attacks(&self, s: &CanonicalForm, other: &CanonicalForm) -> Result<Vec<Move>> {
        Ok(self.moves(s, other)?.as_ref().clone())
    }

    fn answers(&self, attack: &Move, attacker: &CanonicalForm, defender: &CanonicalForm) -> Result<Vec<Move>> {
        let TransitionLabel::Context(label) = &attack.label else { unreachable!("IPO moves carry contexts") };
        if self.labels.contains(label) {
            // the attacker's fresh name is the defender's too
            return Ok(self.moves(defender, attacker)?.iter().filter(|m| m.label == attack.label).cloned().collect());
        }
        let plugged = canonicalize(&plug(label, &defender.to_term())?);
        let identity = TransitionLabel::Context(Label::identity(defender.calculus));
        let targets: BTreeSet<CanonicalForm> = reduct_targets(&plugged).iter().map(|t| self.settle(t)).collect();
        Ok(targets
            .into_iter()
            .map(|target| Move { label: identity.clone(), target, kind: MoveKind::Reduction })
            .collect())
    }

    fn mismatch(&self, left: &CanonicalForm, right: &CanonicalForm) -> Option<(Side, String)> {
        if !self.barbs {
            return None;
        }
        let (bl, br) = (barbs_canonical(left), barbs_canonical(right));
        if let Some(b) = bl.difference(&br).next() {
            return Some((Side::Left, b.to_string()));
        }
        br.difference(&bl).next().map(|b| (Side::Right, b.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(c: Calculus, s: &str) -> Term {
        Term::parse(c, s).unwrap()
    }

    fn verdict(rel: Relation, c: Calculus, p: &str, q: &str) -> bool {
        Checker::new(rel).check(&t(c, p), &t(c, q)).unwrap().verdict
    }

    #[test]
    fn asynchronous_example() {
        let c = Calculus::Accs;
        let (p, q) = (t(c, "a.'a + tau.0"), t(c, "tau.0"));
        assert!(async_bisim(&p, &q).unwrap().verdict);
        assert!(l_bisim(&p, &q, &LabelSet::La).unwrap().verdict);
        assert!(semi_saturated_bisim(&p, &q).unwrap().verdict);
        let ipo = ipo_bisim(&p, &q).unwrap();
        assert!(!ipo.verdict);
        assert_eq!(ipo.final_label(), Some("-|'a"));
        assert!(Checker::new(Relation::Ipo).replay(&p, &q, &ipo).unwrap());
        assert!(!strong_bisim(&p, &q).unwrap().verdict);
    }

    #[test]
    fn small_examples() {
        let (ccs, accs, ma) = (Calculus::Ccs, Calculus::Accs, Calculus::Ma);
        assert!(verdict(Relation::Strong, ccs, "a.0 + a.0", "a.0"));
        assert!(verdict(Relation::Strong, ccs, "0", "0"));
        assert!(verdict(Relation::Async, accs, "'a", "0 | 'a"));
        assert!(!verdict(Relation::Async, accs, "'a", "0"));
        assert!(!verdict(Relation::SemiSaturated, accs, "'a", "0"));
        assert!(verdict(Relation::Ipo, accs, "tau.0", "tau.0 | 0"));
        assert!(!verdict(Relation::Ipo, ma, "n[0]", "m[0]"));
        assert!(!verdict(Relation::LBisim(LabelSet::Lm), ma, "n[0]", "(nu n)n[0]"));
        let bss = Relation::BarbedSemiSaturated { contextual_barbs: true };
        assert!(!verdict(bss.clone(), ma, "n[0]", "(nu n)n[0]"));
        let r = Checker::new(bss).check(&t(accs, "'a"), &t(accs, "0")).unwrap();
        assert!(matches!(&r.witness[..], [WitnessStep::Barb { barb, side: Side::Left, .. }] if barb == "'a"));
    }

    #[test]
    fn environment_can_open_the_ambient_it_named() {
        // after `in b` and `out b` the moved process sits in an ambient named
        // by the environment, which can then open it
        let ma = Calculus::Ma;
        let (p, q) = (t(ma, "in b.(out b.0 | open b.0)"), t(ma, "in b.(out b.0 | a[0])"));
        let chk = Checker::new(Relation::LBisim(LabelSet::Lm));
        let r = chk.check(&p, &q).unwrap();
        assert!(!r.verdict);
        assert!(chk.replay(&p, &q, &r).unwrap(), "{r:#?}");
        // injected ambients are collected, so this game stays finite
        assert!(chk.check(&t(ma, "a[0]"), &t(ma, "a[0] | (nu b)b[0]")).unwrap().verdict);
    }

    #[test]
    fn relation_names() {
        let c = Calculus::Accs;
        assert_eq!(Relation::parse(c, "l-bisim", Some("LA")).unwrap(), Relation::LBisim(LabelSet::La));
        assert_eq!(Relation::parse(c, "l-bisim:EMPTY", None).unwrap().to_string(), "l-bisim:EMPTY");
        assert!(Relation::parse(c, "ipo", Some("LA")).is_err());
        assert!(Relation::parse(c, "l-bisim", None).is_err());
        assert!(Relation::parse(c, "weak", None).is_err());
    }

    #[test]
    fn errors() {
        let ma = Calculus::Ma;
        assert!(matches!(strong_bisim(&t(ma, "0"), &t(ma, "0")), Err(Error::Unsupported(..))));
        assert!(matches!(
            barbed_semi_saturated_bisim(&t(ma, "0"), &t(ma, "0"), false),
            Err(Error::UnsupportedQuantification)
        ));
        assert!(matches!(ipo_bisim(&t(ma, "0"), &t(Calculus::Ccs, "0")), Err(Error::CrossCalculus(..))));
        let big = Checker::new(Relation::Ipo).with_max_pairs(1);
        assert!(matches!(
            big.check(&t(ma, "n[in m.0] | m[0]"), &t(ma, "m[0] | k[0]")),
            Err(Error::DivergenceBudgetExceeded(1))
        ));
    }

    #[test]
    fn instantiation_mode() {
        let c = Calculus::Accs;
        let pool = Pool::parse(c, "0\n'b\n").unwrap();
        let chk = |rel| Checker::new(rel).with_mode(Mode::Instantiate(pool.clone()));
        let (p, q) = (t(c, "a.'a + tau.0"), t(c, "tau.0"));
        assert!(chk(Relation::LBisim(LabelSet::La)).check(&p, &q).unwrap().verdict);
        let ipo = chk(Relation::Ipo).check(&p, &q).unwrap();
        assert!(!ipo.verdict);
        assert!(chk(Relation::Ipo).replay(&p, &q, &ipo).unwrap());
    }
}
