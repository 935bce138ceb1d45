//! Acceptance criteria, one line each. Exits non-zero if any fails.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lbisim_core::congruence::canonicalize;
use lbisim_core::corpus::{congruent_variant, default_names, enumerate, random_term};
use lbisim_core::equivalence::{async_bisim, ipo_bisim, l_bisim, Checker, LabelSet, Relation};
use lbisim_core::reduction::{reduct_targets, reducts};
use lbisim_core::suite::{self, Row};
use lbisim_core::terms::{plug, Calculus, Label, Term};

struct Outcome {
    pass: bool,
    detail: String,
}

fn from_rows(rows: &[Row]) -> Outcome {
    let pass = rows.iter().all(Row::pass);
    let mut parts = Vec::new();
    for r in rows {
        parts.push(format!("{} {}/{}", r.check, r.agree, r.total));
        if r.skipped > 0 {
            parts.push(format!("({} skipped)", r.skipped));
        }
        for f in &r.failures {
            parts.push(format!("[{f}]"));
        }
    }
    Outcome { pass, detail: parts.join(" ") }
}

fn t(c: Calculus, s: &str) -> Term {
    Term::parse(c, s).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let c = Calculus::Accs;
    let (p, q) = (t(c, "a.'a + tau.0"), t(c, "tau.0"));
    let asy = async_bisim(&p, &q).unwrap().verdict;
    let la = l_bisim(&p, &q, &LabelSet::La).unwrap().verdict;
    let ipo = ipo_bisim(&p, &q).unwrap();
    let label = ipo.final_label().map(String::from);
    let elapsed = start.elapsed();
    Outcome {
        pass: asy && la && !ipo.verdict && label.as_deref() == Some("-|'a") && elapsed < Duration::from_secs(1),
        detail: format!("async {asy}, L_A {la}, ipo {} with witness {label:?}, {elapsed:?}", ipo.verdict),
    }
}

fn criterion_2() -> Outcome {
    let ma = Calculus::Ma;
    let axioms = [
        ("n[in m.k[0] | j[0]] | m[l[0]]", "m[n[k[0] | j[0]] | l[0]]"),
        ("m[n[out m.k[0] | j[0]] | l[0]]", "n[k[0] | j[0]] | m[l[0]]"),
        ("open n.k[0] | n[j[0]]", "k[0] | j[0]"),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let names = default_names(3);
    let (mut total, mut ok, mut failures) = (0, 0, Vec::new());
    for (lhs, rhs) in axioms {
        let (lhs, rhs) = (t(ma, lhs), t(ma, rhs));
        total += 1;
        let targets: Vec<_> = reducts(&lhs).into_iter().map(|s| s.target).collect();
        if targets == vec![canonicalize(&rhs)] {
            ok += 1;
        } else {
            failures.push(format!("{lhs}"));
        }
        // restriction, ambient and parallel closures
        for k in 0..20 {
            let body = match k % 3 {
                0 => "(nu a)-".to_string(),
                1 => format!("{}[-]", names[k % names.len()]),
                _ => format!("- | {}", random_term(&mut rng, ma, &names, 1 + k % 3)),
            };
            let ctx = Label::parse(ma, &body).unwrap();
            let (cl, cr) = (plug(&ctx, &lhs).unwrap(), plug(&ctx, &rhs).unwrap());
            total += 1;
            if reduct_targets(&canonicalize(&cl)).contains(&canonicalize(&cr)) {
                ok += 1;
            } else {
                failures.push(format!("{cl}"));
            }
        }
    }
    Outcome { pass: ok == total && total == 63, detail: format!("{ok}/{total} {failures:?}") }
}

fn corpus(c: Calculus) -> Vec<Term> {
    enumerate(c, &default_names(2), 3)
}

fn criterion_3() -> Outcome {
    let ts = corpus(Calculus::Ccs);
    let mut o = from_rows(&[suite::correspondence(&ts)]);
    o.pass &= ts.len() >= 300;
    o
}

fn criterion_4() -> Outcome {
    let ts = corpus(Calculus::Accs);
    let mut o = from_rows(&[suite::correspondence(&ts)]);
    o.pass &= ts.len() >= 300;
    o
}

fn pairs(c: Calculus) -> Vec<(Term, Term)> {
    let names = default_names(2);
    let mut ps = suite::all_pairs(&enumerate(c, &names, 2));
    ps.extend(suite::similar_pairs(&corpus(c), 1000, 5));
    ps
}

fn checker(c: Calculus, rel: &str) -> Checker {
    Checker::new(Relation::parse(c, rel, None).unwrap())
}

fn criterion_5() -> Outcome {
    let (ccs, accs) = (pairs(Calculus::Ccs), pairs(Calculus::Accs));
    let rows = [
        suite::coincide(&checker(Calculus::Ccs, "strong"), &checker(Calculus::Ccs, "l-bisim:LCCS"), &ccs),
        suite::coincide(&checker(Calculus::Accs, "async"), &checker(Calculus::Accs, "l-bisim:LA"), &accs),
    ];
    let mut o = from_rows(&rows);
    o.pass &= rows.iter().all(|r| r.total >= 500);
    o
}

fn criterion_6() -> Outcome {
    let ts = corpus(Calculus::Ma);
    let rows = [suite::open_barbs(&ts, &default_names(2)), suite::capturing(&LabelSet::Lm, Calculus::Ma, &ts).unwrap()];
    let mut o = from_rows(&rows);
    o.pass &= ts.len() >= 300;
    o
}

fn criterion_7() -> Outcome {
    let names = default_names(2);
    from_rows(&[
        suite::predicates(&corpus(Calculus::Ma), &names).unwrap(),
        suite::predicates(&corpus(Calculus::Ccs), &names).unwrap(),
    ])
}

fn criterion_8() -> Outcome {
    let mut rows = Vec::new();
    for c in Calculus::ALL {
        let ps = pairs(c);
        rows.push(suite::coincide(&checker(c, "l-bisim:ALL"), &checker(c, "ipo"), &ps));
        rows.push(suite::coincide(&checker(c, "l-bisim:EMPTY"), &checker(c, "semi-sat"), &ps));
    }
    from_rows(&rows)
}

fn criterion_9() -> Outcome {
    let mut rows = Vec::new();
    for (c, labels) in [(Calculus::Ma, "LM"), (Calculus::Accs, "LA"), (Calculus::Ccs, "LCCS")] {
        let chk = checker(c, &format!("l-bisim:{labels}"));
        let names = default_names(2);
        // related, non-congruent pairs, each under a few contexts
        let related: Vec<(Term, Term)> = suite::similar_pairs(&corpus(c), 4000, 9)
            .into_iter()
            .filter(|(p, q)| chk.check(p, q).map(|r| r.verdict).unwrap_or(false))
            .take(50)
            .collect();
        let ctxs = suite::contexts(c, &names, 4, 11);
        let row = suite::congruence(&chk, &related, &ctxs);
        rows.push(row);
    }
    let mut o = from_rows(&rows);
    o.pass &= rows.iter().all(|r| r.total >= 200);
    o
}

fn criterion_10() -> Outcome {
    let mut rows = Vec::new();
    for c in Calculus::ALL {
        rows.push(suite::canonical_roundtrip(c, 10_000, 1));
        rows.push(suite::reduct_invariance(c, 1_000, 3));
    }
    // a variant is never a different class
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let p = random_term(&mut rng, Calculus::Ma, &default_names(2), 4);
    let v = congruent_variant(&mut rng, &p);
    let mut o = from_rows(&rows);
    o.pass &= canonicalize(&p) == canonicalize(&v);
    o
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("async/L_A/IPO example", criterion_1),
        ("ambient reduction axioms", criterion_2),
        ("CCS transition correspondence", criterion_3),
        ("ACCS transition correspondence", criterion_4),
        ("coincidence of L_CCS and L_A with strong and async", criterion_5),
        ("L_M captures ambient barbs", criterion_6),
        ("predicates match transitions", criterion_7),
        ("endpoint label sets", criterion_8),
        ("congruence sampling", criterion_9),
        ("canonical forms and reducts", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} criterion {}: {name} ({:.1?}) {}",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            start.elapsed(),
            o.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
