//! Property tests for the logic core and the transformations, run over
//! small universes where exhaustive model enumeration is exact.

use proptest::prelude::*;

use kbmerge::logic::{
    consistent_with, entails, equivalent, forget, models, parse_formula, substitute, truth_table,
    Formula, Replacement, Universe, Variable,
};
use kbmerge::transforms::{Transformation, TransformationSet};

const VAR_NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

fn var(name: &str) -> Variable {
    Variable::new(name).unwrap()
}

fn universe() -> Universe {
    Universe::from_vars(VAR_NAMES.iter().map(|n| var(n))).unwrap()
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::TRUE),
        Just(Formula::FALSE),
        proptest::sample::select(VAR_NAMES.to_vec()).prop_map(|n| Formula::Var(var(n))),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::negate),
            proptest::collection::vec(inner.clone(), 2..4).prop_map(Formula::And),
            proptest::collection::vec(inner.clone(), 2..4).prop_map(Formula::Or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
}

fn arb_var() -> impl Strategy<Value = Variable> {
    proptest::sample::select(VAR_NAMES.to_vec()).prop_map(var)
}

proptest! {
    #[test]
    fn every_formula_entails_itself(f in arb_formula()) {
        let u = universe();
        prop_assert!(entails(&f, &f, &u).unwrap());
        prop_assert!(entails(&Formula::FALSE, &f, &u).unwrap());
    }

    #[test]
    fn conjunction_models_are_the_intersection(f in arb_formula(), g in arb_formula()) {
        let u = universe();
        let fg = Formula::And(vec![f.clone(), g.clone()]);
        let both = truth_table(&f, &u).unwrap().and(&truth_table(&g, &u).unwrap());
        prop_assert!(truth_table(&fg, &u).unwrap() == both);
        let f_or_g = Formula::Or(vec![f.clone(), g.clone()]);
        let either = truth_table(&f, &u).unwrap().or(&truth_table(&g, &u).unwrap());
        prop_assert!(truth_table(&f_or_g, &u).unwrap() == either);
    }

    #[test]
    fn printing_then_parsing_preserves_meaning(f in arb_formula()) {
        let u = universe();
        let round = parse_formula(&f.to_string()).unwrap();
        prop_assert!(equivalent(&f, &round, &u).unwrap(), "printed as {f}");
    }

    #[test]
    fn renaming_to_a_fresh_variable_is_invertible(f in arb_formula(), x in arb_var()) {
        // g is outside VAR_NAMES' use here only when f doesn't mention it;
        // filter to the fresh case the property is about.
        let fresh = var("zz");
        prop_assume!(!f.mentions(&fresh));
        let there = substitute(&f, &x, &Replacement::Var(fresh.clone()));
        let back = substitute(&there, &fresh, &Replacement::Var(x.clone()));
        let mut u = universe();
        u.insert(fresh).unwrap();
        prop_assert!(equivalent(&back, &f, &u).unwrap());
    }

    #[test]
    fn iterated_forgetting_collapses(f in arb_formula(), keep_mask in 0u8..64) {
        // Z ⊆ Y ⊆ vars: forgetting down to Y and then to Z equals
        // forgetting straight to Z.
        let u = universe();
        let y_vars: Vec<Variable> = VAR_NAMES.iter().enumerate()
            .filter(|(i, _)| (keep_mask >> i) & 1 == 1)
            .map(|(_, n)| var(n))
            .collect();
        let z_vars: Vec<Variable> = y_vars.iter().skip(1).cloned().collect();
        let y = Universe::from_vars(y_vars).unwrap();
        let z = Universe::from_vars(z_vars).unwrap();
        let via_y = forget(&forget(&f, &y, &u).unwrap(), &z, &u).unwrap();
        let direct = forget(&f, &z, &u).unwrap();
        prop_assert!(equivalent(&via_y, &direct, &u).unwrap());
    }

    #[test]
    fn generalization_undoes_particularization(f in arb_formula(), x in arb_var()) {
        // Exact recovery needs the added assumption to be foreign to the
        // formula; with x inside f, discharging the assumption also
        // rewrites f itself (for any x the result is f[x/true]).
        let u = universe();
        let particularized = Transformation::Particularization(x.clone()).apply(&f).unwrap();
        let back = Transformation::Generalization(x.clone()).apply(&particularized).unwrap();
        let rewritten = substitute(&f, &x, &Replacement::Const(true));
        prop_assert!(equivalent(&back, &rewritten, &u).unwrap());
        if !f.mentions(&x) {
            prop_assert!(equivalent(&back, &f, &u).unwrap());
        }
    }

    #[test]
    fn consistency_agrees_with_model_intersection(f in arb_formula(), g in arb_formula()) {
        let u = universe();
        let overlap = models(&f, &u).unwrap().iter().map(|m| m.bits()).any(|b| {
            truth_table(&g, &u).unwrap().contains(b)
        });
        prop_assert_eq!(consistent_with(&f, &g, &u).unwrap(), overlap);
    }
}

/// Distinct-subject sets whose renaming targets avoid every subject, the
/// regime in which member order is immaterial even one step at a time.
fn arb_commuting_set() -> impl Strategy<Value = Vec<Transformation>> {
    let subjects = proptest::sample::subsequence(VAR_NAMES.to_vec(), 1..4);
    subjects.prop_flat_map(|subs| {
        let n = subs.len();
        let kinds = proptest::collection::vec(0u8..3, n);
        (Just(subs), kinds).prop_map(|(subs, kinds)| {
            let taken: Vec<Variable> = subs.iter().map(|n| var(n)).collect();
            subs.iter()
                .zip(kinds)
                .map(|(name, kind)| {
                    let v = var(name);
                    match kind {
                        0 => {
                            // Target outside the subject set keeps every
                            // pairwise order equivalent.
                            let to = var("zz");
                            let _ = &taken;
                            Transformation::Renaming { from: v, to }
                        }
                        1 => Transformation::Generalization(v),
                        _ => Transformation::Particularization(v),
                    }
                })
                .collect()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn commuting_sets_apply_order_independently(
        f in arb_formula(),
        items in arb_commuting_set(),
        shuffle in proptest::collection::vec(0usize..100, 4),
    ) {
        let Ok(set) = TransformationSet::new(items.clone()) else {
            // Duplicate renaming targets can collide across members.
            return Ok(());
        };
        let mut u = universe();
        u.insert(var("zz")).unwrap();
        let canonical = set.apply(&f).unwrap();

        // One permutation, applied one transformation at a time.
        let mut permuted: Vec<Transformation> = set.iter().cloned().collect();
        for (i, s) in shuffle.iter().enumerate() {
            if permuted.len() > 1 {
                let len = permuted.len();
                permuted.swap(i % len, s % len);
            }
        }
        let mut sequential = f.clone();
        for t in &permuted {
            sequential = t.apply(&sequential).unwrap();
        }
        prop_assert!(
            equivalent(&canonical, &sequential, &u).unwrap(),
            "set {set} on {f}: canonical {canonical} vs sequential {sequential}"
        );
    }

    #[test]
    fn value_flip_swaps_at_most_one_model_pair(f in arb_formula(), x in arb_var(), bits in 0u64..64) {
        let u = universe();
        let table = truth_table(&f, &u).unwrap();
        prop_assume!(table.contains(bits));
        let model = kbmerge::logic::Model::new(u.clone(), bits);
        let flip = Transformation::value_flip(model.clone(), x.clone()).unwrap();
        let after = truth_table(&flip.apply(&f).unwrap(), &u).unwrap();
        let flipped_bits = model.flipped(&x).unwrap().bits();
        let expected_delta = if table.contains(flipped_bits) { 1 } else { 2 };
        let mut delta = 0;
        for m in 0..(1u64 << u.len()) {
            if table.contains(m) != after.contains(m) {
                delta += 1;
            }
        }
        prop_assert_eq!(delta, expected_delta);
    }
}
