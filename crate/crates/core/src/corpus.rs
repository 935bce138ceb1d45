//! Term corpora: exhaustive enumeration by size, seeded random terms,
//! random structurally congruent variants and random contexts.
//!
//! Size counts prefixes, output particles and ambients, as `Proc::size`.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::congruence::{canonicalize, CanonicalForm};
use crate::lts::its_transitions_canonical;
use crate::reduction::barbs_canonical;
use crate::terms::{fresh_name, Action, Calculus, Label, Name, Proc, Term};

fn actions(calculus: Calculus, names: &[Name]) -> Vec<Action> {
    let mut out = Vec::new();
    if calculus != Calculus::Ma {
        out.push(Action::Tau);
    }
    for n in names {
        match calculus {
            Calculus::Ccs => out.extend([Action::Recv(n.clone()), Action::Send(n.clone())]),
            Calculus::Accs => out.push(Action::Recv(n.clone())),
            Calculus::Ma => out.extend([Action::In(n.clone()), Action::Out(n.clone()), Action::Open(n.clone())]),
        }
    }
    out
}

/// Multisets of items (indices non-decreasing) whose sizes add up to `total`.
fn multisets(items: &[(usize, Proc)], total: usize, min_len: usize) -> Vec<Vec<&Proc>> {
    fn go<'a>(
        items: &'a [(usize, Proc)],
        from: usize,
        left: usize,
        acc: &mut Vec<&'a Proc>,
        min_len: usize,
        out: &mut Vec<Vec<&'a Proc>>,
    ) {
        if left == 0 {
            if acc.len() >= min_len {
                out.push(acc.clone());
            }
            return;
        }
        for (k, (s, p)) in items.iter().enumerate().skip(from) {
            if *s <= left {
                acc.push(p);
                go(items, k, left - s, acc, min_len, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(items, 0, total, &mut Vec::new(), min_len, &mut out);
    out
}

/// Every term of size at most `max_size` over `names`, one per
/// congruence class, sorted by size and then canonically. Restrictions
/// bind names from `names`.
pub fn enumerate(calculus: Calculus, names: &[Name], max_size: usize) -> Vec<Term> {
    let acts = actions(calculus, names);
    // all[k]: canonical processes of size exactly k
    let mut all: Vec<BTreeSet<CanonicalForm>> = Vec::new();
    // seq: components (prefixes, sums, ambients, outputs) with their sizes
    let mut seq: Vec<(usize, Proc)> = Vec::new();
    let mut guarded: Vec<(usize, Proc)> = Vec::new();
    for k in 0..=max_size {
        if k > 0 {
            let mut fresh = Vec::new();
            for c in &all[k - 1] {
                let body = c.to_proc();
                for a in &acts {
                    fresh.push(Proc::prefix(a.clone(), body.clone()));
                }
                if calculus == Calculus::Ma {
                    for n in names {
                        fresh.push(Proc::amb(n.clone(), body.clone()));
                    }
                }
            }
            let guards: Vec<(usize, Proc)> = fresh
                .iter()
                .filter(|p| calculus != Calculus::Ma && matches!(p, Proc::Prefix(..)))
                .map(|p| (k, p.clone()))
                .collect();
            if calculus == Calculus::Accs && k == 1 {
                fresh.extend(names.iter().map(|n| Proc::Output(n.clone())));
            }
            guarded.extend(guards);
            if calculus.has_sum() {
                for ms in multisets(&guarded, k, 2) {
                    fresh.push(Proc::Sum(ms.into_iter().cloned().collect()));
                }
            }
            seq.extend(fresh.into_iter().map(|p| (k, p)));
        }
        let mut level = BTreeSet::new();
        let pars: Vec<Proc> = if k == 0 {
            vec![Proc::Nil]
        } else {
            multisets(&seq, k, 1).into_iter().map(|ms| Proc::par(ms.into_iter().cloned())).collect()
        };
        for p in pars {
            let mut scoped = vec![p.clone()];
            for n in names {
                scoped.push(Proc::nu(n.clone(), p.clone()));
                for m in names {
                    if m != n {
                        scoped.push(Proc::nu(n.clone(), Proc::nu(m.clone(), p.clone())));
                    }
                }
            }
            for q in scoped {
                let c = canonicalize(&Term::from_proc(calculus, q));
                if c.to_proc().size() == k {
                    level.insert(c);
                }
            }
        }
        all.push(level);
    }
    all.into_iter().flatten().map(|c| c.to_term()).collect()
}

/// Names `a`, `b`, ... of the given count.
pub fn default_names(count: usize) -> Vec<Name> {
    (0..count).map(|k| ((b'a' + k as u8) as char).to_string()).collect()
}

fn random_proc<R: Rng + ?Sized>(rng: &mut R, calculus: Calculus, names: &[Name], size: usize) -> Proc {
    if size == 0 {
        return Proc::Nil;
    }
    let acts = actions(calculus, names);
    let name = |rng: &mut R| names.choose(rng).unwrap().clone();
    match rng.gen_range(0..10) {
        0..=2 if size >= 2 => {
            let k = rng.gen_range(1..size);
            Proc::Par(vec![random_proc(rng, calculus, names, k), random_proc(rng, calculus, names, size - k)])
        }
        3 => Proc::nu(name(rng), random_proc(rng, calculus, names, size)),
        4 if calculus.has_sum() && size >= 2 => {
            let k = rng.gen_range(1..size);
            let guard = |rng: &mut R, s: usize| {
                Proc::prefix(acts.choose(rng).unwrap().clone(), random_proc(rng, calculus, names, s - 1))
            };
            Proc::Sum(vec![guard(rng, k), guard(rng, size - k)])
        }
        5 | 6 if calculus == Calculus::Ma => Proc::amb(name(rng), random_proc(rng, calculus, names, size - 1)),
        5 if calculus == Calculus::Accs && size == 1 => Proc::Output(name(rng)),
        _ => Proc::prefix(acts.choose(rng).unwrap().clone(), random_proc(rng, calculus, names, size - 1)),
    }
}

/// A random closed term of exactly `size`.
pub fn random_term<R: Rng + ?Sized>(rng: &mut R, calculus: Calculus, names: &[Name], size: usize) -> Term {
    Term::from_proc(calculus, random_proc(rng, calculus, names, size))
}

/// Applies random structural-congruence rewrites: reordering and
/// regrouping of parallel components and summands, `|0`, vacuous and
/// renamed restrictions, and scope extrusion.
pub fn congruent_variant<R: Rng + ?Sized>(rng: &mut R, t: &Term) -> Term {
    let mut avoid = t.proc.all_names();
    Term::from_proc(t.calculus, vary(rng, &t.proc, &mut avoid))
}

fn vary<R: Rng + ?Sized>(rng: &mut R, p: &Proc, avoid: &mut BTreeSet<Name>) -> Proc {
    let mut q = match p {
        Proc::Prefix(a, c) => Proc::prefix(a.clone(), vary(rng, c, avoid)),
        Proc::Amb(n, c) => Proc::Amb(n.clone(), Box::new(vary(rng, c, avoid))),
        Proc::Sum(ps) => {
            // summands stay guarded: only their continuations vary
            let mut ps: Vec<Proc> = ps
                .iter()
                .map(|x| match x {
                    Proc::Prefix(a, c) => Proc::prefix(a.clone(), vary(rng, c, avoid)),
                    other => other.clone(),
                })
                .collect();
            ps.shuffle(rng);
            Proc::Sum(ps)
        }
        Proc::Par(ps) => {
            let mut ps: Vec<Proc> = ps.iter().map(|x| vary(rng, x, avoid)).collect();
            ps.shuffle(rng);
            // regroup a prefix of the components
            if ps.len() >= 3 && rng.gen_bool(0.5) {
                let rest = ps.split_off(2);
                ps = std::iter::once(Proc::Par(ps)).chain(rest).collect();
            }
            // extrude a restriction over its right neighbour
            if ps.len() >= 2 && rng.gen_bool(0.5) {
                if let Proc::Nu(n, body) = &ps[0] {
                    if !ps[1].free_names().contains(n) {
                        let merged = Proc::nu(n.clone(), Proc::Par(vec![(**body).clone(), ps[1].clone()]));
                        ps.splice(0..2, [merged]);
                    }
                }
            }
            if ps.len() == 1 {
                ps.pop().unwrap()
            } else {
                Proc::Par(ps)
            }
        }
        Proc::Nu(n, body) => {
            let body = vary(rng, body, avoid);
            if rng.gen_bool(0.5) {
                let m = fresh_name(avoid);
                avoid.insert(m.clone());
                Proc::nu(m.clone(), body.rename_free(n, &m))
            } else {
                Proc::nu(n.clone(), body)
            }
        }
        _ => p.clone(),
    };
    match rng.gen_range(0..8) {
        0 => q = Proc::Par(vec![q, Proc::Nil]),
        1 => q = Proc::Par(vec![Proc::Nil, q]),
        2 => {
            let m = fresh_name(avoid);
            avoid.insert(m.clone());
            q = Proc::nu(m, q);
        }
        _ => {}
    }
    q
}

/// A random one-hole context built from `-|R`, `(nu n)-`, prefixes and,
/// for ambients, `n[-]`, nested up to `depth` times.
pub fn random_context<R: Rng + ?Sized>(
    rng: &mut R,
    calculus: Calculus,
    names: &[Name],
    depth: usize,
    max_size: usize,
) -> Label {
    let mut body = Proc::Hole;
    for _ in 0..rng.gen_range(1..=depth.max(1)) {
        body = match rng.gen_range(0..4) {
            0 => {
                let s = rng.gen_range(0..=max_size);
                Proc::Par(vec![body, random_proc(rng, calculus, names, s)])
            }
            1 => Proc::nu(names.choose(rng).unwrap().clone(), body),
            2 if calculus == Calculus::Ma => Proc::amb(names.choose(rng).unwrap().clone(), body),
            _ => Proc::prefix(actions(calculus, names).choose(rng).unwrap().clone(), body),
        };
    }
    Label::new(calculus, body).expect("generated contexts are well formed")
}

/// Coarse invariant of strong behaviour, used to pair up terms likely to
/// be equivalent.
pub fn fingerprint(t: &Term) -> (Vec<String>, BTreeSet<String>) {
    let c = canonicalize(t);
    let barbs = barbs_canonical(&c).iter().map(|b| b.to_string()).collect();
    let labels = its_transitions_canonical(&c).into_iter().map(|t| t.label.to_string()).collect();
    (barbs, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn enumeration_is_deduplicated_and_bounded() {
        let names = default_names(2);
        for c in Calculus::ALL {
            let ts = enumerate(c, &names, 2);
            let set: BTreeSet<String> = ts.iter().map(|t| t.to_string()).collect();
            assert_eq!(set.len(), ts.len());
            assert!(ts.iter().all(|t| t.proc.size() <= 2));
            assert_eq!(ts[0].to_string(), "0");
        }
        let ccs = enumerate(Calculus::Ccs, &names, 1);
        assert_eq!(ccs.len(), 1 + 5 + 2, "{ccs:?}");
    }

    #[test]
    fn variants_are_congruent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let names = default_names(2);
        for c in Calculus::ALL {
            for _ in 0..200 {
                let t = random_term(&mut rng, c, &names, 4);
                t.proc.check(c, false).unwrap();
                let v = congruent_variant(&mut rng, &t);
                assert_eq!(canonicalize(&t), canonicalize(&v), "{t} vs {v}");
            }
        }
    }
}
