//! Property tests for adjustment relations and the two rewriting engines.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use grw_core::rewrite::{
    applicable_steps, apply_rewrite_sequence, apply_step, closure_of_string, id_applicable_steps,
    id_apply_step, id_closure, pi, validate_id_guides, validate_rewrite_sequence, GuidePos,
    IdStep, RewriteSequence,
};
use grw_core::symbols::{AdjustmentRelation, Alphabet, GuideSet, Str, Symbol};
use proptest::prelude::*;

const TOKENS: [&str; 4] = ["a", "b", "c", "d"];

fn alphabet(size: usize) -> Alphabet {
    Alphabet::parse(&TOKENS[..size].join(" ")).unwrap()
}

fn string_from(al: &Alphabet, picks: &[usize]) -> Str {
    Str::from_symbols(picks.iter().map(|&i| al.get(i % al.len()).unwrap().clone()).collect())
}

fn relation() -> impl Strategy<Value = AdjustmentRelation> {
    (2..=4usize)
        .prop_flat_map(|size| (Just(size), proptest::collection::vec(0..4u32, size)))
        .prop_map(|(size, assign)| {
            let al = alphabet(size);
            let mut groups: BTreeMap<u32, Vec<Symbol>> = BTreeMap::new();
            for (i, id) in assign.iter().enumerate() {
                groups.entry(*id).or_default().push(al.get(i).unwrap().clone());
            }
            let classes: Vec<Vec<Symbol>> = groups.into_values().collect();
            AdjustmentRelation::from_classes(al, &classes).unwrap()
        })
}

#[derive(Debug, Clone)]
struct SystemFixture {
    rel: AdjustmentRelation,
    guides: GuideSet,
}

fn system() -> impl Strategy<Value = SystemFixture> {
    relation().prop_flat_map(|rel| {
        let size = rel.alphabet().len();
        let guide = proptest::collection::vec(0..size, 1..=3);
        (Just(rel), proptest::collection::vec(guide, 1..=3)).prop_map(|(rel, raw)| {
            let al = rel.alphabet().clone();
            let mut guides: Vec<Str> = Vec::new();
            for picks in raw {
                let g = string_from(&al, &picks);
                if !guides.contains(&g) {
                    guides.push(g);
                }
            }
            SystemFixture { rel, guides: GuideSet::new(guides) }
        })
    })
}

fn system_with_string(max_len: usize) -> impl Strategy<Value = (SystemFixture, Str)> {
    system().prop_flat_map(move |sys| {
        let size = sys.rel.alphabet().len();
        (Just(sys), proptest::collection::vec(0..size, 0..=max_len))
            .prop_map(|(sys, picks)| {
                let u = string_from(sys.rel.alphabet(), &picks);
                (sys, u)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjustment_is_an_equivalence(rel in relation()) {
        let al = rel.alphabet();
        for a in al.symbols() {
            prop_assert!(rel.adjusts(a, a).unwrap());
            for b in al.symbols() {
                prop_assert_eq!(rel.adjusts(a, b).unwrap(), rel.adjusts(b, a).unwrap());
                for c in al.symbols() {
                    if rel.adjusts(a, b).unwrap() && rel.adjusts(b, c).unwrap() {
                        prop_assert!(rel.adjusts(a, c).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn class_ids_agree_with_adjacency(rel in relation()) {
        let al = rel.alphabet();
        for a in al.symbols() {
            for b in al.symbols() {
                prop_assert_eq!(
                    rel.adjusts(a, b).unwrap(),
                    rel.class_id(a).unwrap() == rel.class_id(b).unwrap()
                );
            }
        }
    }

    #[test]
    fn lifting_compares_symbol_by_symbol(
        (rel, u_picks, v_picks) in relation().prop_flat_map(|rel| {
            let size = rel.alphabet().len();
            (
                Just(rel),
                proptest::collection::vec(0..size, 0..=6),
                proptest::collection::vec(0..size, 0..=6),
            )
        }),
        align in any::<bool>(),
    ) {
        let al = rel.alphabet().clone();
        let u = string_from(&al, &u_picks);
        // Half the time compare strings of equal length, otherwise the
        // draws are usually unequal in length already.
        let v = if align {
            string_from(&al, &v_picks.iter().cycle().take(u_picks.len()).copied().collect::<Vec<_>>())
        } else {
            string_from(&al, &v_picks)
        };
        let want = u.len() == v.len()
            && u.iter().zip(v.iter()).all(|(a, b)| rel.adjusts(a, b).unwrap());
        prop_assert_eq!(rel.lift_equiv(&u, &v).unwrap(), want);
    }

    #[test]
    fn listed_steps_are_exactly_the_ones_that_apply((sys, u) in system_with_string(6)) {
        let listed: BTreeSet<(Str, usize)> = applicable_steps(&u, &sys.guides, &sys.rel)
            .unwrap()
            .into_iter()
            .map(|step| (step.guide, step.position))
            .collect();
        for g in sys.guides.iter() {
            for p in 0..=u.len() {
                let outcome = apply_step(&u, &GuidePos::new(g.clone(), p), &sys.rel);
                prop_assert_eq!(
                    outcome.is_ok(),
                    listed.contains(&(g.clone(), p)),
                    "guide {} at {}", g, p
                );
            }
        }
    }

    #[test]
    fn closures_preserve_length_and_are_closed((sys, u) in system_with_string(5)) {
        let closure = closure_of_string(&u, &sys.guides, &sys.rel).unwrap();
        prop_assert!(closure.contains(&u));
        for v in &closure {
            prop_assert_eq!(v.len(), u.len());
            prop_assert!(sys.rel.lift_equiv(&u, v).unwrap());
            for step in applicable_steps(v, &sys.guides, &sys.rel).unwrap() {
                let next = apply_step(v, &step, &sys.rel).unwrap();
                prop_assert!(closure.contains(&next), "{} step ({}, {}) leaves the closure",
                    v, step.guide, step.position);
            }
        }
    }

    #[test]
    fn sequence_validation_agrees_with_stepwise_application(
        (sys, u, raw_steps) in system_with_string(5).prop_flat_map(|(sys, u)| {
            let guide_count = sys.guides.len();
            let len = u.len();
            let step = (0..guide_count, 0..=len);
            (Just(sys), Just(u), proptest::collection::vec(step, 0..=4))
        }),
    ) {
        let steps: Vec<GuidePos> = raw_steps
            .into_iter()
            .map(|(g, p)| GuidePos::new(sys.guides.get(g).unwrap().clone(), p))
            .collect();
        let seq = RewriteSequence::new(steps);

        let mut current = u.clone();
        let mut stepwise: Result<(), usize> = Ok(());
        for (k, step) in seq.iter().enumerate() {
            match apply_step(&current, step, &sys.rel) {
                Ok(next) => current = next,
                Err(_) => {
                    stepwise = Err(k + 1);
                    break;
                }
            }
        }

        match (validate_rewrite_sequence(&u, &seq, Some(&sys.guides), &sys.rel), stepwise) {
            (Ok(()), Ok(())) => {
                let run = apply_rewrite_sequence(&u, &seq, &sys.rel).unwrap();
                prop_assert_eq!(run.result(), &current);
                prop_assert_eq!(run.intermediates().len(), seq.len() + 1);
            }
            (Err(reported), Err(failing)) => prop_assert_eq!(reported.step, failing),
            (got, want) => prop_assert!(false, "validation {:?} but stepwise {:?}", got, want),
        }
    }
}

fn id_alphabet() -> Alphabet {
    Alphabet::parse("a b 0").unwrap()
}

fn zero() -> Symbol {
    Symbol::new("0").unwrap()
}

#[derive(Debug, Clone)]
struct IdFixture {
    guides: GuideSet,
}

fn id_system() -> impl Strategy<Value = IdFixture> {
    let guide = (proptest::collection::vec(0..3usize, 0..=2), 0..2usize, 0..2usize)
        .prop_map(|(middle, first, last)| {
            let al = id_alphabet();
            let mut picks = vec![first];
            picks.extend(middle);
            picks.push(last);
            string_from(&al, &picks)
        });
    proptest::collection::vec(guide, 1..=3).prop_map(|raw| {
        let mut guides: Vec<Str> = Vec::new();
        for g in raw {
            if !guides.contains(&g) {
                guides.push(g);
            }
        }
        let set = GuideSet::new(guides);
        validate_id_guides(&set, &zero()).expect("ends are drawn from the non-zero symbols");
        IdFixture { guides: set }
    })
}

fn id_string(max_len: usize) -> impl Strategy<Value = Str> {
    proptest::collection::vec(0..3usize, 0..=max_len)
        .prop_map(|picks| string_from(&id_alphabet(), &picks))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zero_erasure_drops_exactly_the_zeros(u in id_string(8)) {
        let z = zero();
        let erased = pi(&u, &z);
        prop_assert!(erased.iter().all(|s| s != &z));
        let zeros = u.iter().filter(|s| *s == &z).count();
        prop_assert_eq!(erased.len(), u.len() - zeros);
        let kept: Vec<&Symbol> = u.iter().filter(|s| *s != &z).collect();
        prop_assert_eq!(erased.iter().collect::<Vec<_>>(), kept);
    }

    #[test]
    fn listed_id_steps_are_exactly_the_ones_that_apply(
        (fix, u) in (id_system(), id_string(6)),
    ) {
        let z = zero();
        let listed = id_applicable_steps(&u, &fix.guides, &z).unwrap();
        for g in fix.guides.iter() {
            for p in 0..u.len() {
                for l in 1..=(u.len() - p) {
                    let step = IdStep::new(g.clone(), p, l);
                    let outcome = id_apply_step(&u, &step, &z);
                    prop_assert_eq!(
                        outcome.is_ok(),
                        listed.contains(&step),
                        "guide {} window ({}, {})", g, p, l
                    );
                }
            }
        }
    }

    #[test]
    fn id_closures_preserve_erasure_and_are_closed(
        (fix, u) in (id_system(), id_string(5)),
    ) {
        let z = zero();
        let closure = id_closure(&u, &fix.guides, &z).unwrap();
        prop_assert!(closure.contains(&u));
        let erased = pi(&u, &z);
        for v in &closure {
            prop_assert_eq!(pi(v, &z), erased.clone());
            for step in id_applicable_steps(v, &fix.guides, &z).unwrap() {
                let next = id_apply_step(v, &step, &z).unwrap();
                prop_assert!(closure.contains(&next), "{} escapes the closure", next);
            }
        }
    }
}
