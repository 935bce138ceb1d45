//! Corpus cross-checks: each check runs over a corpus (or pairs drawn from
//! it) and counts how many cases agree. Independent cases run in parallel.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::congruence::{canonicalize, CanonicalForm};
use crate::corpus::{congruent_variant, default_names, enumerate, fingerprint, random_context, random_term};
use crate::equivalence::{
    is_capturing, pred_ccs_targets, pred_open_targets, CcsPredicate, Checker, LabelSet, Relation,
};
use crate::error::{Error, Result};
use crate::lts::{
    instantiate, its_transitions_canonical, ordinary_transitions_canonical, OrdAction, TransitionLabel, X1,
};
use crate::reduction::{barbs_canonical, reduct_targets, Barb};
use crate::terms::{plug, Calculus, Label, Name, Proc, Substitution, Term};

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub check: String,
    pub total: usize,
    pub agree: usize,
    /// Up to a handful of disagreeing cases.
    pub failures: Vec<String>,
    /// Cases that were skipped, e.g. games over budget (not counted in `total`).
    pub skipped: usize,
}

impl Row {
    pub fn pass(&self) -> bool {
        self.total > 0 && self.agree == self.total
    }

    fn collect(check: String, cases: Vec<std::result::Result<Option<String>, String>>) -> Row {
        let mut row = Row { check, total: 0, agree: 0, failures: Vec::new(), skipped: 0 };
        for c in cases {
            match c {
                Ok(None) => {
                    row.total += 1;
                    row.agree += 1;
                }
                Ok(Some(f)) => {
                    row.total += 1;
                    if row.failures.len() < 5 {
                        row.failures.push(f);
                    }
                }
                Err(_) => row.skipped += 1,
            }
        }
        row
    }
}

// ---------------------------------------------------------------------------
// transition-system correspondences

fn its_set(c: &CanonicalForm) -> BTreeSet<(String, CanonicalForm)> {
    its_transitions_canonical(c).into_iter().map(|t| (t.label.to_string(), t.target)).collect()
}

fn with_x1(c: &CanonicalForm) -> CanonicalForm {
    canonicalize(&Term::from_proc(c.calculus, Proc::par([c.to_proc(), Proc::Var(X1.into())])))
}

/// Ordinary transitions mapped to the IPO transitions they should match
/// one to one: `tau` to `-`; for CCS `a` to `-|'a.X1` and `'a` to
/// `-|a.X1`, for ACCS `a` to `-|'a` and `'a` to `-|a.X1`, adding `X1` to the
/// target where the label supplies a continuation.
pub fn expected_its(c: &CanonicalForm) -> Result<BTreeSet<(String, CanonicalForm)>> {
    let mut out = BTreeSet::new();
    for t in ordinary_transitions_canonical(c)? {
        let TransitionLabel::Ordinary(a) = &t.label else { unreachable!() };
        let entry = match (c.calculus, a) {
            (_, OrdAction::Tau) => ("-".to_string(), t.target),
            (Calculus::Accs, OrdAction::In(a)) => (format!("-|'{a}"), t.target),
            (_, OrdAction::In(a)) => (format!("-|'{a}.@X1"), with_x1(&t.target)),
            (_, OrdAction::Out(a)) => (format!("-|{a}.@X1"), with_x1(&t.target)),
        };
        out.insert(entry);
    }
    Ok(out)
}

/// Ordinary/IPO correspondence (CCS and ACCS), one case per term.
pub fn correspondence(corpus: &[Term]) -> Row {
    let calc = corpus.first().map(|t| t.calculus);
    let cases = corpus
        .par_iter()
        .map(|t| {
            let c = canonicalize(t);
            let expected = expected_its(&c).map_err(|e| e.to_string())?;
            let actual = its_set(&c);
            Ok((expected != actual).then(|| {
                let show = |s: &BTreeSet<(String, CanonicalForm)>| {
                    s.iter().map(|(l, t)| format!("{l} => {t}")).collect::<Vec<_>>().join(", ")
                };
                format!("{t}: ordinary gives [{}], IPO gives [{}]", show(&expected), show(&actual))
            }))
        })
        .collect();
    Row::collect(format!("correspondence/{}", calc.map(|c| c.to_string()).unwrap_or_default()), cases)
}

/// `P↓n` iff `P` has a `-|open n.X1` transition, for every term and every
/// name of `names`.
pub fn open_barbs(corpus: &[Term], names: &[Name]) -> Row {
    let cases = corpus
        .par_iter()
        .flat_map_iter(|t| {
            let c = canonicalize(t);
            let barbs = barbs_canonical(&c);
            let labels: BTreeSet<String> = its_set(&c).into_iter().map(|(l, _)| l).collect();
            names
                .iter()
                .map(|n| {
                    let barb = barbs.contains(&Barb::Ambient(n.clone()));
                    let label = labels.contains(&format!("-|open {n}.@X1"));
                    Ok((barb != label).then(|| format!("{t}: barb {n} is {barb}, open transition is {label}")))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Row::collect("open-barbs".into(), cases)
}

/// Barb capturing by a label class over the corpus, one case per barb.
pub fn capturing(labels: &LabelSet, calculus: Calculus, corpus: &[Term]) -> Result<Row> {
    let report = is_capturing(labels, calculus, corpus)?;
    let cases = report
        .barbs
        .iter()
        .map(|b| {
            Ok(match &b.label {
                Some(_) => None,
                None => Some(format!(
                    "barb {} not captured{}",
                    b.barb,
                    b.counterexample.as_ref().map(|t| format!(" (see {t})")).unwrap_or_default()
                )),
            })
        })
        .collect();
    Ok(Row::collect(format!("capturing/{labels}"), cases))
}

/// Probe continuations used for the predicate checks.
pub fn probe_terms(calculus: Calculus) -> Vec<Term> {
    let src: &[&str] = match calculus {
        Calculus::Ma => &["0", "c[0]", "open a.0"],
        _ => &["0", "c.0", "'a.0"],
    };
    src.iter().filter_map(|s| Term::parse(calculus, s).ok()).collect()
}

/// Predicates against the transitions they characterise: for MA the open
/// predicate against `-|open n.X1`; for CCS the out, in and tau predicates
/// against `-|'a.X1`, `-|a.X1` and `-`. One case per (term, name, T1, kind),
/// comparing the full sets of targets.
pub fn predicates(corpus: &[Term], names: &[Name]) -> Result<Row> {
    let Some(calc) = corpus.first().map(|t| t.calculus) else {
        return Ok(Row::collect("predicates".into(), vec![]));
    };
    if !matches!(calc, Calculus::Ma | Calculus::Ccs) {
        return Err(Error::Unsupported("the stability predicates", calc));
    }
    let probes = probe_terms(calc);
    let cases = corpus
        .par_iter()
        .flat_map_iter(|t| {
            let c = canonicalize(t);
            let its: Vec<_> = its_transitions_canonical(&c);
            let mut cases = Vec::new();
            for n in names {
                for t1 in &probes {
                    let kinds: Vec<(Option<CcsPredicate>, String)> = match calc {
                        Calculus::Ma => vec![(None, format!("-|open {n}.@X1"))],
                        _ => vec![
                            (Some(CcsPredicate::Out), format!("-|'{n}.@X1")),
                            (Some(CcsPredicate::In), format!("-|{n}.@X1")),
                            (Some(CcsPredicate::Tau), "-".to_string()),
                        ],
                    };
                    for (kind, label) in kinds {
                        let sub = Substitution::new().with_proc(X1, t1.clone());
                        let expected: std::result::Result<BTreeSet<CanonicalForm>, Error> = its
                            .iter()
                            .filter(|tr| tr.label.to_string() == label)
                            .map(|tr| instantiate(tr, &sub).map(|u| u.target))
                            .collect();
                        let actual = match kind {
                            None => pred_open_targets(t, n, t1),
                            Some(k) => pred_ccs_targets(k, t, n, t1),
                        };
                        cases.push(match (expected, actual) {
                            (Ok(e), Ok(a)) if e == a => Ok(None),
                            (Ok(e), Ok(a)) => Ok(Some(format!(
                                "{t} with {label}, T1 = {t1}: transitions reach {e:?}, predicate accepts {a:?}"
                            ))),
                            (Err(e), _) | (_, Err(e)) => Ok(Some(format!("{t}: {e}"))),
                        });
                    }
                }
            }
            cases
        })
        .collect();
    Ok(Row::collect(format!("predicates/{calc}"), cases))
}

// ---------------------------------------------------------------------------
// equivalence checks

fn verdict(checker: &Checker, p: &Term, q: &Term) -> std::result::Result<bool, String> {
    checker.check(p, q).map(|r| r.verdict).map_err(|e| e.to_string())
}

/// Verdict equality of two relations on every pair. Pairs on which either
/// game runs over budget are skipped.
pub fn coincide(a: &Checker, b: &Checker, pairs: &[(Term, Term)]) -> Row {
    let cases = pairs
        .par_iter()
        .map(|(p, q)| {
            let (va, vb) = (verdict(a, p, q)?, verdict(b, p, q)?);
            Ok((va != vb).then(|| format!("{p} vs {q}: {} says {va}, {} says {vb}", a.relation, b.relation)))
        })
        .collect();
    Row::collect(format!("coincide/{}={}", a.relation, b.relation), cases)
}

/// Closure under contexts: for every related pair and every context,
/// the plugged pair is related too. One case per (pair, context) with a
/// related pair.
pub fn congruence(checker: &Checker, pairs: &[(Term, Term)], contexts: &[Label]) -> Row {
    let cases = pairs
        .par_iter()
        .flat_map_iter(|(p, q)| {
            let related = verdict(checker, p, q);
            contexts
                .iter()
                .filter_map(|ctx| match &related {
                    Err(e) => Some(Err(e.clone())),
                    Ok(false) => None,
                    Ok(true) => Some((|| {
                        let (cp, cq) =
                            (plug(ctx, p).map_err(|e| e.to_string())?, plug(ctx, q).map_err(|e| e.to_string())?);
                        let v = verdict(checker, &cp, &cq)?;
                        Ok((!v).then(|| format!("{p} ~ {q} but not under {ctx}: {cp} vs {cq}")))
                    })()),
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Row::collect(format!("congruence/{}", checker.relation), cases)
}

/// Reflexivity and symmetry of a relation on the given pairs.
pub fn equivalence_laws(checker: &Checker, pairs: &[(Term, Term)]) -> Row {
    let cases = pairs
        .par_iter()
        .map(|(p, q)| {
            if !verdict(checker, p, p)? {
                return Ok(Some(format!("{p} is not related to itself")));
            }
            let (pq, qp) = (verdict(checker, p, q)?, verdict(checker, q, p)?);
            Ok((pq != qp).then(|| format!("{p} vs {q}: {pq} one way, {qp} the other")))
        })
        .collect();
    Row::collect(format!("laws/{}", checker.relation), cases)
}

// ---------------------------------------------------------------------------
// infrastructure properties

/// `canonicalize` is idempotent and printing parses back to the same term.
pub fn canonical_roundtrip(calculus: Calculus, count: usize, seed: u64) -> Row {
    let names = default_names(3);
    let cases = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            let t = random_term(&mut rng, calculus, &names, 1 + k % 6);
            let c = canonicalize(&t);
            let again = canonicalize(&c.to_term());
            if again != c {
                return Ok(Some(format!("{t}: {c} canonicalises to {again}")));
            }
            let printed = t.to_string();
            Ok(match Term::parse(calculus, &printed) {
                Ok(u) if u == t => None,
                Ok(u) => Some(format!("{printed} parses as {u}")),
                Err(e) => Some(format!("{printed}: {e}")),
            })
        })
        .collect();
    Row::collect(format!("canonical-roundtrip/{calculus}"), cases)
}

/// Reducts of a term and of a random congruent variant coincide.
pub fn reduct_invariance(calculus: Calculus, count: usize, seed: u64) -> Row {
    let names = default_names(2);
    let cases = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            let t = random_term(&mut rng, calculus, &names, 1 + k % 5);
            let v = congruent_variant(&mut rng, &t);
            let (rt, rv) = (reduct_targets(&canonicalize(&t)), reduct_targets(&canonicalize(&v)));
            Ok((rt != rv).then(|| format!("{t} and {v} have different reducts")))
        })
        .collect();
    Row::collect(format!("reduct-invariance/{calculus}"), cases)
}

// ---------------------------------------------------------------------------
// pairs and suite specifications

/// All unordered pairs of distinct terms.
pub fn all_pairs(terms: &[Term]) -> Vec<(Term, Term)> {
    let mut out = Vec::new();
    for (i, p) in terms.iter().enumerate() {
        for q in &terms[i + 1..] {
            out.push((p.clone(), q.clone()));
        }
    }
    out
}

/// Up to `count` pairs of distinct terms with equal fingerprints, drawn
/// with a seeded shuffle; such pairs are often equivalent.
pub fn similar_pairs(terms: &[Term], count: usize, seed: u64) -> Vec<(Term, Term)> {
    let mut buckets: BTreeMap<_, Vec<&Term>> = BTreeMap::new();
    for t in terms {
        buckets.entry(fingerprint(t)).or_default().push(t);
    }
    let mut pairs = Vec::new();
    for ts in buckets.values() {
        for w in ts.windows(2) {
            pairs.push((w[0].clone(), w[1].clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pairs.shuffle(&mut rng);
    pairs.truncate(count);
    pairs
}

/// Seeded random contexts.
pub fn contexts(calculus: Calculus, names: &[Name], count: usize, seed: u64) -> Vec<Label> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_context(&mut rng, calculus, names, 2, 1)).collect()
}

/// A corpus suite: generator bounds, optional explicit pairs and the
/// checks to run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    pub calculus: Calculus,
    #[serde(default = "two_names")]
    pub names: Vec<Name>,
    #[serde(default = "three")]
    pub max_size: usize,
    /// Terms up to this size are paired exhaustively.
    #[serde(default = "two")]
    pub pair_size: usize,
    /// Extra pairs of fingerprint-equal terms from the whole corpus.
    #[serde(default)]
    pub similar_pairs: usize,
    /// Explicit pairs, used instead of generated ones when present.
    #[serde(default)]
    pub pairs: Vec<(String, String)>,
    #[serde(default)]
    pub seed: u64,
    /// `correspondence`, `open-barbs`, `predicates`, `capturing:<labels>`,
    /// `coincide:<rel>=<rel>`, `congruence:<rel>`, `laws:<rel>`,
    /// `canonical-roundtrip`, `reduct-invariance`.
    pub checks: Vec<String>,
}

fn two_names() -> Vec<Name> {
    default_names(2)
}
fn three() -> usize {
    3
}
fn two() -> usize {
    2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub calculus: Calculus,
    pub terms: usize,
    pub pairs: usize,
    pub rows: Vec<Row>,
    pub pass: bool,
}

pub fn run_suite(spec: &SuiteSpec, max_pairs: usize) -> Result<SuiteReport> {
    let calc = spec.calculus;
    let corpus = enumerate(calc, &spec.names, spec.max_size);
    let pairs: Vec<(Term, Term)> = if spec.pairs.is_empty() {
        let small: Vec<Term> = corpus.iter().filter(|t| t.proc.size() <= spec.pair_size).cloned().collect();
        let mut pairs = all_pairs(&small);
        pairs.extend(similar_pairs(&corpus, spec.similar_pairs, spec.seed));
        pairs
    } else {
        spec.pairs.iter().map(|(p, q)| Ok((Term::parse(calc, p)?, Term::parse(calc, q)?))).collect::<Result<_>>()?
    };
    let checker = |rel: &str| Relation::parse(calc, rel, None).map(|r| Checker::new(r).with_max_pairs(max_pairs));
    let mut rows = Vec::new();
    for check in &spec.checks {
        let (name, arg) = check.split_once(':').unwrap_or((check, ""));
        rows.push(match name {
            "correspondence" => correspondence(&corpus),
            "open-barbs" => open_barbs(&corpus, &spec.names),
            "predicates" => predicates(&corpus, &spec.names)?,
            "capturing" => capturing(&LabelSet::parse(calc, arg)?, calc, &corpus)?,
            "coincide" => {
                let (a, b) = arg
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidQuery(format!("`{check}`: expected coincide:<rel>=<rel>")))?;
                coincide(&checker(a)?, &checker(b)?, &pairs)
            }
            "congruence" => congruence(&checker(arg)?, &pairs, &contexts(calc, &spec.names, 4, spec.seed)),
            "laws" => equivalence_laws(&checker(arg)?, &pairs),
            "canonical-roundtrip" => canonical_roundtrip(calc, corpus.len(), spec.seed),
            "reduct-invariance" => reduct_invariance(calc, corpus.len(), spec.seed),
            _ => return Err(Error::InvalidQuery(format!("unknown check `{check}`"))),
        });
    }
    let pass = rows.iter().all(Row::pass);
    Ok(SuiteReport { calculus: calc, terms: corpus.len(), pairs: pairs.len(), rows, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite() {
        let spec: SuiteSpec = serde_json::from_str(
            r#"{"calculus": "accs", "max_size": 2, "pair_size": 1,
                "checks": ["correspondence", "capturing:LA", "coincide:async=l-bisim:LA"]}"#,
        )
        .unwrap();
        let r = run_suite(&spec, 10_000).unwrap();
        assert!(r.pass, "{r:#?}");
        assert_eq!(r.pairs, 8 * 7 / 2);
        assert!(serde_json::from_str::<SuiteSpec>(r#"{"calculus": "ma", "checks": [], "depth": 3}"#).is_err());
    }

    #[test]
    fn unknown_check() {
        let spec = SuiteSpec {
            calculus: Calculus::Ccs,
            names: two_names(),
            max_size: 0,
            pair_size: 0,
            similar_pairs: 0,
            pairs: vec![],
            seed: 0,
            checks: vec!["nope".into()],
        };
        assert!(matches!(run_suite(&spec, 10), Err(Error::InvalidQuery(_))));
    }

    #[test]
    fn expected_its_shapes() {
        let c = canonicalize(&Term::parse(Calculus::Accs, "a.b.0 | 'c").unwrap());
        let e: Vec<String> = expected_its(&c).unwrap().into_iter().map(|(l, t)| format!("{l} {t}")).collect();
        assert_eq!(e, vec!["-|'a b.0 | 'c", "-|c.@X1 a.b.0 | @X1"]);
    }
}
