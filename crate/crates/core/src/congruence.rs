//! Canonical forms modulo structural congruence.
//!
//! A term is first flattened into blocks `(νA)(c1 | ... | ck)` whose binders
//! get unique temporary names, with vacuous restrictions dropped. Nil units
//! disappear, parallel and choice are flattened, and restrictions are hoisted
//! across parallel composition (all calculi) and across ambients and
//! capabilities (mobile ambients only). The second pass picks binder names
//! `f0, f1, ...` by scope depth and sorts components; among binder orderings
//! that agree on a renaming-invariant signature, the one giving the smallest
//! component list wins, so alpha-equivalent blocks print identically.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;

use crate::error::Result;
use crate::terms::{fresh_names, proc_to_string, same_calculus, Action, AmbName, Calculus, Label, Name, Proc, Term};

/// Congruence-normal representative: `(ν binders)(components)`, each
/// component an atom (prefix, sum, ambient, output, variable or hole).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub calculus: Calculus,
    pub binders: Vec<Name>,
    pub components: Vec<Proc>,
}

impl CanonicalForm {
    pub fn to_proc(&self) -> Proc {
        Proc::restrict(&self.binders, Proc::par(self.components.iter().cloned()))
    }

    pub fn to_term(&self) -> Term {
        Term::from_proc(self.calculus, self.to_proc())
    }

    pub fn nil(calculus: Calculus) -> Self {
        CanonicalForm { calculus, binders: vec![], components: vec![] }
    }

    pub fn is_nil(&self) -> bool {
        self.components.is_empty()
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        self.to_proc().free_names()
    }

    pub fn is_pure(&self) -> bool {
        self.to_proc().is_pure()
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&proc_to_string(&self.to_proc()))
    }
}

pub fn canonicalize(t: &Term) -> CanonicalForm {
    let (binders, components) = canonical_parts(t.calculus, &t.proc);
    CanonicalForm { calculus: t.calculus, binders, components }
}

/// Canonical version of any process or context of `calculus`.
pub fn canonical_proc(calculus: Calculus, p: &Proc) -> Proc {
    let (binders, comps) = canonical_parts(calculus, p);
    Proc::restrict(&binders, Proc::par(comps))
}

pub fn canonical_label(l: &Label) -> Label {
    Label::from_canonical(l.calculus, canonical_proc(l.calculus, &l.body))
}

pub fn equiv(t1: &Term, t2: &Term) -> Result<bool> {
    same_calculus(t1.calculus, t2.calculus)?;
    Ok(canonicalize(t1) == canonicalize(t2))
}

fn canonical_parts(calculus: Calculus, p: &Proc) -> (Vec<Name>, Vec<Proc>) {
    let mut temps = 0usize;
    let node = flatten(calculus, p, &HashMap::new(), &mut temps);
    let levels: Vec<Name> = fresh_names(&p.free_names()).take(temps).collect();
    let cx = Namer { levels: &levels };
    cx.block(&node, &HashMap::new(), 0)
}

#[derive(Debug)]
struct Node {
    binders: Vec<Name>,
    comps: Vec<Atom>,
}

#[derive(Debug)]
enum Atom {
    Hole,
    Var(String),
    Output(Name),
    Prefix(Action, Node),
    Sum(Vec<(Action, Node)>),
    Amb(AmbName, Vec<Atom>),
}

fn lookup(env: &HashMap<Name, Name>, n: &str) -> Name {
    env.get(n).cloned().unwrap_or_else(|| n.to_string())
}

fn rename_action(a: &Action, env: &HashMap<Name, Name>) -> Action {
    match a {
        Action::Tau => Action::Tau,
        Action::Recv(n) => Action::Recv(lookup(env, n)),
        Action::Send(n) => Action::Send(lookup(env, n)),
        Action::In(n) => Action::In(lookup(env, n)),
        Action::Out(n) => Action::Out(lookup(env, n)),
        Action::Open(n) => Action::Open(lookup(env, n)),
    }
}

fn rename_amb(n: &AmbName, env: &HashMap<Name, Name>) -> AmbName {
    match n {
        AmbName::Name(n) => AmbName::Name(lookup(env, n)),
        v => v.clone(),
    }
}

fn flatten(calculus: Calculus, p: &Proc, env: &HashMap<Name, Name>, temps: &mut usize) -> Node {
    let single = |a: Atom| Node { binders: vec![], comps: vec![a] };
    match p {
        Proc::Nil => Node { binders: vec![], comps: vec![] },
        Proc::Hole => single(Atom::Hole),
        Proc::Var(x) => single(Atom::Var(x.clone())),
        Proc::Output(a) => single(Atom::Output(lookup(env, a))),
        Proc::Par(ps) => {
            let mut out = Node { binders: vec![], comps: vec![] };
            for q in ps {
                let n = flatten(calculus, q, env, temps);
                out.binders.extend(n.binders);
                out.comps.extend(n.comps);
            }
            out
        }
        Proc::Nu(n, body) => {
            let t = format!("%{temps}");
            *temps += 1;
            let mut env = env.clone();
            env.insert(n.clone(), t.clone());
            let mut node = flatten(calculus, body, &env, temps);
            if node.comps.iter().any(|a| atom_mentions(a, &t)) {
                node.binders.insert(0, t);
            }
            node
        }
        Proc::Prefix(act, cont) => {
            let act = rename_action(act, env);
            let inner = flatten(calculus, cont, env, temps);
            if calculus == Calculus::Ma {
                Node {
                    binders: inner.binders,
                    comps: vec![Atom::Prefix(act, Node { binders: vec![], comps: inner.comps })],
                }
            } else {
                single(Atom::Prefix(act, inner))
            }
        }
        Proc::Amb(n, body) => {
            let n = rename_amb(n, env);
            let inner = flatten(calculus, body, env, temps);
            Node { binders: inner.binders, comps: vec![Atom::Amb(n, inner.comps)] }
        }
        Proc::Sum(_) => {
            let mut summands = Vec::new();
            collect_summands(calculus, p, env, temps, &mut summands);
            match summands.len() {
                0 => Node { binders: vec![], comps: vec![] },
                1 => {
                    let (a, n) = summands.pop().unwrap();
                    single(Atom::Prefix(a, n))
                }
                _ => single(Atom::Sum(summands)),
            }
        }
    }
}

fn collect_summands(
    calculus: Calculus,
    p: &Proc,
    env: &HashMap<Name, Name>,
    temps: &mut usize,
    out: &mut Vec<(Action, Node)>,
) {
    match p {
        Proc::Nil => {}
        Proc::Sum(ps) => ps.iter().for_each(|q| collect_summands(calculus, q, env, temps, out)),
        Proc::Prefix(act, cont) => {
            out.push((rename_action(act, env), flatten(calculus, cont, env, temps)));
        }
        // Well-formed sums contain nothing else.
        other => unreachable!("unguarded summand {other:?}"),
    }
}

fn atom_mentions(a: &Atom, n: &str) -> bool {
    match a {
        Atom::Hole | Atom::Var(_) => false,
        Atom::Output(m) => m == n,
        Atom::Prefix(act, node) => act.name() == Some(n) || node_mentions(node, n),
        Atom::Sum(ss) => ss.iter().any(|(act, node)| act.name() == Some(n) || node_mentions(node, n)),
        Atom::Amb(m, comps) => m.as_name() == Some(n) || comps.iter().any(|c| atom_mentions(c, n)),
    }
}

fn node_mentions(node: &Node, n: &str) -> bool {
    node.comps.iter().any(|c| atom_mentions(c, n))
}

struct Namer<'a> {
    levels: &'a [Name],
}

const FOCUS: &str = "%*";
const OTHER: &str = "%_";

impl Namer<'_> {
    fn block(&self, node: &Node, env: &HashMap<Name, Name>, depth: usize) -> (Vec<Name>, Vec<Proc>) {
        let k = node.binders.len();
        if k == 0 {
            return (vec![], self.atoms(&node.comps, env, depth));
        }
        let names: Vec<Name> = self.levels[depth..depth + k].to_vec();

        // Renaming-invariant signature of each binder.
        let mut keyed: Vec<(Vec<Proc>, &Name)> = node
            .binders
            .iter()
            .map(|b| {
                let mut env = env.clone();
                for o in &node.binders {
                    env.insert(o.clone(), if o == b { FOCUS } else { OTHER }.to_string());
                }
                (self.atoms(&node.comps, &env, depth + k), b)
            })
            .collect();
        keyed.sort();
        let groups: Vec<Vec<&Name>> =
            keyed.iter().chunk_by(|(sig, _)| sig).into_iter().map(|(_, g)| g.map(|(_, b)| *b).collect()).collect();

        let mut best: Option<Vec<Proc>> = None;
        let orderings = groups
            .iter()
            .map(|g| g.iter().copied().permutations(g.len()).collect::<Vec<_>>())
            .multi_cartesian_product();
        for choice in orderings {
            let mut env = env.clone();
            for (b, n) in choice.iter().flatten().zip(&names) {
                env.insert((*b).clone(), n.clone());
            }
            let comps = self.atoms(&node.comps, &env, depth + k);
            if best.as_ref().is_none_or(|b| comps < *b) {
                best = Some(comps);
            }
        }
        (names, best.unwrap())
    }

    fn atoms(&self, comps: &[Atom], env: &HashMap<Name, Name>, depth: usize) -> Vec<Proc> {
        let mut out: Vec<Proc> = comps.iter().map(|a| self.atom(a, env, depth)).collect();
        out.sort();
        out
    }

    fn prefix(&self, act: &Action, node: &Node, env: &HashMap<Name, Name>, depth: usize) -> Proc {
        let (bs, comps) = self.block(node, env, depth);
        Proc::prefix(rename_action(act, env), Proc::restrict(&bs, Proc::par(comps)))
    }

    fn atom(&self, a: &Atom, env: &HashMap<Name, Name>, depth: usize) -> Proc {
        match a {
            Atom::Hole => Proc::Hole,
            Atom::Var(x) => Proc::Var(x.clone()),
            Atom::Output(n) => Proc::Output(lookup(env, n)),
            Atom::Prefix(act, node) => self.prefix(act, node, env, depth),
            Atom::Sum(ss) => {
                let mut out: Vec<Proc> = ss.iter().map(|(act, node)| self.prefix(act, node, env, depth)).collect();
                out.sort();
                Proc::Sum(out)
            }
            Atom::Amb(n, comps) => Proc::Amb(rename_amb(n, env), Box::new(Proc::par(self.atoms(comps, env, depth)))),
        }
    }
}

/// Parallel components of a canonical sub-process (ambient body or
/// mobile-ambient continuation, which carry no binders).
pub fn components(p: &Proc) -> Vec<Proc> {
    match p {
        Proc::Nil => vec![],
        Proc::Par(ps) => ps.clone(),
        other => vec![other.clone()],
    }
}

/// Summands of a canonical component: the prefixes of a sum, or the
/// component itself when it is a prefix.
pub fn summands(p: &Proc) -> Vec<Proc> {
    match p {
        Proc::Sum(ps) => ps.clone(),
        Proc::Prefix(..) => vec![p.clone()],
        _ => vec![],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrefixKind {
    Tau,
    Recv,
    Send,
    In,
    Out,
    Open,
}

impl PrefixKind {
    pub fn of(a: &Action) -> PrefixKind {
        match a {
            Action::Tau => PrefixKind::Tau,
            Action::Recv(_) => PrefixKind::Recv,
            Action::Send(_) => PrefixKind::Send,
            Action::In(_) => PrefixKind::In,
            Action::Out(_) => PrefixKind::Out,
            Action::Open(_) => PrefixKind::Open,
        }
    }
}

/// Premise shapes of the reduction and transition rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// `(νA)(M.P1 | P2)`, a top-level capability.
    Prefix(PrefixKind),
    /// `(νA)(n[M.P1 | P2] | P3)`.
    AmbientPrefix(PrefixKind),
    /// `(νA)(n[P1] | P2)` with `n` a name.
    Ambient,
    /// `(νA)(μ.Q + M | R)`.
    Summand(PrefixKind),
    /// `(νA)('a | Q)`.
    Output,
}

/// One way of matching a canonical form against a [`Shape`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub binders: Vec<Name>,
    /// Selected prefix, if the shape has one.
    pub action: Option<Action>,
    /// Name the `n ∉ A` side condition is about.
    pub subject: Option<Name>,
    pub ambient: Option<AmbName>,
    /// `P1` (prefix continuation or ambient body) or `Q`.
    pub selected: Proc,
    /// Remaining summands `M`.
    pub other_summands: Vec<Proc>,
    /// `P2` inside the ambient for [`Shape::AmbientPrefix`].
    pub inner_rest: Vec<Proc>,
    /// Parallel remainder at top level.
    pub rest: Vec<Proc>,
}

impl Decomposition {
    pub fn rest_proc(&self) -> Proc {
        Proc::par(self.rest.iter().cloned())
    }

    /// Rebuilds the matched process.
    pub fn recompose(&self) -> Proc {
        let selected = match &self.action {
            Some(a) => Proc::prefix(a.clone(), self.selected.clone()),
            None => self.selected.clone(),
        };
        let component = match (&self.ambient, self.action.is_some()) {
            (Some(n), true) => Proc::Amb(
                n.clone(),
                Box::new(Proc::par(std::iter::once(selected).chain(self.inner_rest.iter().cloned()))),
            ),
            (Some(n), false) => Proc::Amb(n.clone(), Box::new(selected)),
            (None, _) if !self.other_summands.is_empty() => {
                Proc::Sum(std::iter::once(selected).chain(self.other_summands.iter().cloned()).collect())
            }
            (None, _) => selected,
        };
        Proc::restrict(&self.binders, Proc::par(std::iter::once(component).chain(self.rest.iter().cloned())))
    }
}

fn remove_at(xs: &[Proc], i: usize) -> Vec<Proc> {
    xs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect()
}

/// Enumerates every match of `c` against `shape`. With `require_free`, the
/// subject name must not be among the binders.
pub fn decompose(c: &CanonicalForm, shape: Shape, require_free: bool) -> Vec<Decomposition> {
    let free_ok = |n: Option<&str>| match n {
        Some(n) if require_free => !c.binders.iter().any(|b| b == n),
        _ => true,
    };
    let base = |rest: Vec<Proc>| Decomposition {
        binders: c.binders.clone(),
        action: None,
        subject: None,
        ambient: None,
        selected: Proc::Nil,
        other_summands: vec![],
        inner_rest: vec![],
        rest,
    };
    let mut out = Vec::new();
    for (i, comp) in c.components.iter().enumerate() {
        match (shape, comp) {
            (Shape::Prefix(k), Proc::Prefix(a, cont)) if PrefixKind::of(a) == k && free_ok(a.name()) => {
                out.push(Decomposition {
                    action: Some(a.clone()),
                    subject: a.name().map(str::to_string),
                    selected: (**cont).clone(),
                    ..base(remove_at(&c.components, i))
                });
            }
            (Shape::AmbientPrefix(k), Proc::Amb(n, body)) => {
                let inner = components(body);
                for (j, q) in inner.iter().enumerate() {
                    if let Proc::Prefix(a, cont) = q {
                        if PrefixKind::of(a) == k && free_ok(a.name()) {
                            out.push(Decomposition {
                                action: Some(a.clone()),
                                subject: a.name().map(str::to_string),
                                ambient: Some(n.clone()),
                                selected: (**cont).clone(),
                                inner_rest: remove_at(&inner, j),
                                ..base(remove_at(&c.components, i))
                            });
                        }
                    }
                }
            }
            (Shape::Ambient, Proc::Amb(AmbName::Name(n), body)) if free_ok(Some(n)) => {
                out.push(Decomposition {
                    subject: Some(n.clone()),
                    ambient: Some(AmbName::Name(n.clone())),
                    selected: (**body).clone(),
                    ..base(remove_at(&c.components, i))
                });
            }
            (Shape::Summand(k), Proc::Prefix(..) | Proc::Sum(_)) => {
                let ss = summands(comp);
                for (j, s) in ss.iter().enumerate() {
                    let Proc::Prefix(a, cont) = s else { continue };
                    if PrefixKind::of(a) == k && free_ok(a.name()) {
                        out.push(Decomposition {
                            action: Some(a.clone()),
                            subject: a.name().map(str::to_string),
                            selected: (**cont).clone(),
                            other_summands: remove_at(&ss, j),
                            ..base(remove_at(&c.components, i))
                        });
                    }
                }
            }
            (Shape::Output, Proc::Output(a)) if free_ok(Some(a)) => {
                out.push(Decomposition {
                    subject: Some(a.clone()),
                    selected: Proc::Output(a.clone()),
                    ..base(remove_at(&c.components, i))
                });
            }
            _ => {}
        }
    }
    out
}
