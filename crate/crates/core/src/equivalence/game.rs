//! Bisimulation games on pairs of canonical states.
//!
//! The reachable part of the pair graph is built breadth first; a pair is
//! then refuted when a local observation differs or when some attack has
//! no answer leading to a pair that is still standing. Refutations are
//! propagated backwards until nothing changes, which leaves the greatest
//! fixpoint. Every refuted pair remembers the attack that sank it, and the
//! order in which it fell, so a witness can be read off by always
//! continuing to the answer that fell first.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::congruence::CanonicalForm;
use crate::error::{Error, Result};
use crate::lts::TransitionLabel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// How a move was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoveKind {
    /// A transition with the given label.
    Transition,
    /// A reduction of the defender plugged into the attacker's label.
    Reduction,
    /// A `tau` step, with the received message put back in parallel.
    TauWithMessage,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub label: TransitionLabel,
    pub target: CanonicalForm,
    pub kind: MoveKind,
}

pub(crate) type Pair = (CanonicalForm, CanonicalForm);

pub(crate) trait Arena {
    /// Moves of `s` while the defender stands at `other`.
    fn attacks(&self, s: &CanonicalForm, other: &CanonicalForm) -> Result<Vec<Move>>;
    fn answers(&self, attack: &Move, attacker: &CanonicalForm, defender: &CanonicalForm) -> Result<Vec<Move>>;
    /// Representative of the pair up to renamings the game cannot observe.
    fn normalize(&self, pair: Pair) -> Pair {
        pair
    }
    /// Description of a local observation that tells the states apart.
    fn mismatch(&self, _left: &CanonicalForm, _right: &CanonicalForm) -> Option<(Side, String)> {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnswerInfo {
    pub label: String,
    pub kind: MoveKind,
    pub defender_target: String,
}

/// One round of a distinguishing play.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "kebab-case")]
pub enum WitnessStep {
    /// The attacker moves; every answer leads to a refuted pair. `answer` is
    /// the one the play follows, `None` if there was no answer at all.
    Move {
        left: String,
        right: String,
        attacker: Side,
        label: String,
        attacker_target: String,
        answers: usize,
        answer: Option<AnswerInfo>,
    },
    /// `side` shows a barb the other state lacks.
    Barb { left: String, right: String, side: Side, barb: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub explored_pairs: usize,
    pub refuted_pairs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GameResult {
    pub verdict: bool,
    pub witness: Vec<WitnessStep>,
    pub stats: Stats,
}

impl GameResult {
    /// Label of the last attacker move of the witness, if any.
    pub fn final_label(&self) -> Option<&str> {
        self.witness.iter().rev().find_map(|s| match s {
            WitnessStep::Move { label, .. } => Some(label.as_str()),
            WitnessStep::Barb { .. } => None,
        })
    }
}

struct AttackRec {
    side: Side,
    mv: Move,
    answers: Vec<(Move, usize)>,
}

#[derive(Default)]
struct PairRec {
    mismatch: Option<(Side, String)>,
    attacks: Vec<AttackRec>,
}

enum Reason {
    Local,
    Attack(usize),
}

pub(crate) fn solve(
    arena: &dyn Arena,
    left: CanonicalForm,
    right: CanonicalForm,
    max_pairs: usize,
) -> Result<GameResult> {
    let root = arena.normalize((left, right));
    let mut pairs: Vec<Pair> = vec![root.clone()];
    let mut index: HashMap<Pair, usize> = HashMap::from([(root, 0)]);
    let mut recs: Vec<PairRec> = Vec::new();
    // per pair: predecessors (pair, attack); per expanded pair and attack:
    // answers not yet refuted
    let mut preds: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    let mut pending: Vec<Vec<usize>> = Vec::new();
    let mut fallen: Vec<Option<(usize, Reason)>> = vec![None];
    let mut order = 0;

    let mut next = 0;
    while next < pairs.len() && fallen[0].is_none() {
        let (l, r) = pairs[next].clone();
        let u = next;
        next += 1;
        let mut rec = PairRec::default();
        // identical states are bisimilar in every game played here
        if l != r {
            rec.mismatch = arena.mismatch(&l, &r);
            if rec.mismatch.is_none() {
                for side in [Side::Left, Side::Right] {
                    let (att, def) = match side {
                        Side::Left => (&l, &r),
                        Side::Right => (&r, &l),
                    };
                    for mv in arena.attacks(att, def)? {
                        let mut answers = Vec::new();
                        for ans in arena.answers(&mv, att, def)? {
                            let pair = arena.normalize(match side {
                                Side::Left => (mv.target.clone(), ans.target.clone()),
                                Side::Right => (ans.target.clone(), mv.target.clone()),
                            });
                            let id = match index.get(&pair) {
                                Some(&id) => id,
                                None => {
                                    if pairs.len() >= max_pairs {
                                        return Err(Error::DivergenceBudgetExceeded(max_pairs));
                                    }
                                    pairs.push(pair.clone());
                                    index.insert(pair, pairs.len() - 1);
                                    preds.push(Vec::new());
                                    fallen.push(None);
                                    pairs.len() - 1
                                }
                            };
                            answers.push((ans, id));
                        }
                        rec.attacks.push(AttackRec { side, mv, answers });
                    }
                }
            }
        }
        // register the new pair and refute what can be refuted
        let mut counts = Vec::with_capacity(rec.attacks.len());
        for (a, att) in rec.attacks.iter().enumerate() {
            let mut succ: Vec<usize> = att.answers.iter().map(|(_, id)| *id).filter(|&v| fallen[v].is_none()).collect();
            succ.sort_unstable();
            succ.dedup();
            for &v in &succ {
                preds[v].push((u, a));
            }
            counts.push(succ.len());
        }
        let reason = if rec.mismatch.is_some() {
            Some(Reason::Local)
        } else {
            counts.iter().position(|&c| c == 0).map(Reason::Attack)
        };
        pending.push(counts);
        recs.push(rec);
        if let Some(reason) = reason {
            fallen[u] = Some((order, reason));
            order += 1;
            let mut queue = VecDeque::from([u]);
            while let Some(v) = queue.pop_front() {
                for (w, a) in std::mem::take(&mut preds[v]) {
                    if fallen[w].is_some() {
                        continue;
                    }
                    pending[w][a] -= 1;
                    if pending[w][a] == 0 {
                        fallen[w] = Some((order, Reason::Attack(a)));
                        order += 1;
                        queue.push_back(w);
                    }
                }
            }
        }
    }

    let stats = Stats { explored_pairs: recs.len(), refuted_pairs: order };
    let mut witness = Vec::new();
    let mut at = 0;
    while let Some((_, reason)) = &fallen[at] {
        let (l, r) = &pairs[at];
        match reason {
            Reason::Local => {
                let (side, barb) = recs[at].mismatch.clone().unwrap();
                witness.push(WitnessStep::Barb { left: l.to_string(), right: r.to_string(), side, barb });
                break;
            }
            Reason::Attack(a) => {
                let att = &recs[at].attacks[*a];
                let best = att
                    .answers
                    .iter()
                    .min_by_key(|(_, id)| fallen[*id].as_ref().map(|(o, _)| *o).unwrap_or(usize::MAX));
                witness.push(WitnessStep::Move {
                    left: l.to_string(),
                    right: r.to_string(),
                    attacker: att.side,
                    label: att.mv.label.to_string(),
                    attacker_target: att.mv.target.to_string(),
                    answers: att.answers.len(),
                    answer: best.map(|(ans, _)| AnswerInfo {
                        label: ans.label.to_string(),
                        kind: ans.kind,
                        defender_target: ans.target.to_string(),
                    }),
                });
                match best {
                    Some((_, id)) => at = *id,
                    None => break,
                }
            }
        }
    }
    Ok(GameResult { verdict: fallen[0].is_none(), witness, stats })
}
