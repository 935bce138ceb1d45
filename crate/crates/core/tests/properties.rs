//! Randomised properties of parsing, canonical forms and the IPO system.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lbisim_core::congruence::canonicalize;
use lbisim_core::corpus::{congruent_variant, default_names, enumerate, random_term};
use lbisim_core::lts::{instantiate, its_transitions};
use lbisim_core::reduction::{reduct_targets, reducts};
use lbisim_core::terms::{plug, Calculus, Substitution, Term};

fn calculus() -> impl Strategy<Value = Calculus> {
    prop_oneof![Just(Calculus::Ccs), Just(Calculus::Accs), Just(Calculus::Ma)]
}

fn term() -> impl Strategy<Value = Term> {
    (calculus(), any::<u64>(), 1usize..7).prop_map(|(c, seed, size)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_term(&mut rng, c, &default_names(3), size)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn printing_round_trips(t in term()) {
        let again = Term::parse(t.calculus, &t.to_string()).unwrap();
        prop_assert_eq!(canonicalize(&again), canonicalize(&t));
        let c = canonicalize(&t);
        let reparsed = Term::parse(t.calculus, &c.to_string()).unwrap();
        prop_assert_eq!(canonicalize(&reparsed), c);
    }

    #[test]
    fn canonicalisation_is_idempotent(t in term()) {
        let c = canonicalize(&t);
        prop_assert_eq!(canonicalize(&c.to_term()), c);
    }

    #[test]
    fn variants_share_canonical_form_and_reducts(t in term(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = congruent_variant(&mut rng, &t);
        prop_assert_eq!(canonicalize(&v), canonicalize(&t));
        let targets = |x: &Term| reducts(x).into_iter().map(|s| s.target).collect::<Vec<_>>();
        prop_assert_eq!(targets(&v), targets(&t));
    }
}

/// Closing an IPO transition and plugging its label around the source
/// gives a term that reduces to the closed target.
#[test]
fn instantiated_labels_reduce_to_instantiated_targets() {
    let names = default_names(2);
    let mut checked = 0;
    for c in [Calculus::Ccs, Calculus::Accs, Calculus::Ma] {
        let fillers = enumerate(c, &names, 1);
        let terms = enumerate(c, &names, 3);
        for (k, t) in terms.iter().enumerate().step_by(7) {
            let source = canonicalize(t);
            for tr in its_transitions(t) {
                let label = tr.context().unwrap();
                let mut s = Substitution::new();
                for (j, v) in label.variables.iter().enumerate() {
                    s = if v.starts_with(|ch: char| ch.is_ascii_lowercase()) {
                        s.with_name(v.clone(), ["a", "b", "z"][(k + j) % 3])
                    } else {
                        s.with_proc(v.clone(), fillers[(k + j) % fillers.len()].clone())
                    };
                }
                let closed = instantiate(&tr, &s).unwrap();
                let plugged = plug(closed.context().unwrap(), &source.to_term()).unwrap();
                let targets = reduct_targets(&canonicalize(&plugged));
                assert!(
                    targets.contains(&closed.target),
                    "{source} --{}--> {}: {} does not reduce to {}",
                    tr.label,
                    tr.target,
                    plugged,
                    closed.target
                );
                checked += 1;
            }
        }
    }
    assert!(checked > 1000, "{checked}");
}
