//! Similarity between knowledge bases and plausibility ranking of
//! transformation hypotheses.
//!
//! Similarity is measured semantically, by counting the models on which
//! two formulas agree over a fixed universe. The ranking combines the
//! number of hypothesized transformations with a logarithm of the
//! similarity of the transformed bases.
//!
//! Sign convention, fixed crate-wide: **lower scores are more plausible**.
//! A score is `(number of transformations) - (logarithmic similarity
//! term)`, so hypotheses win by using fewer transformations *and* by
//! making the bases agree on more models. The similarity quantity inside
//! the log is always clamped to be non-negative and offset by one, keeping
//! every score finite and defined.

use crate::engine::Substitution;
use crate::logic::{truth_table, Formula, KnowledgeProfile, LogicError, Universe};
use crate::transforms::{TransformError, TransformationTuple};

/// Upper limit on `|X|` for the subset-sum similarity, which enumerates
/// all `2^|X|` variable subsets.
pub const RESTRICTED_SUBSET_CAP: usize = 10;

/// Which similarity measure feeds the ranking's logarithmic term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaMode {
    /// Count of agreeing models, `|Mod(K1 <-> K2)|`.
    #[default]
    LinearCount,
    /// Agreeing models divided by disagreeing models.
    Quotient,
    /// Sum of the linear measure over all nonempty variable subsets,
    /// weighted toward larger subsets.
    RestrictedSum,
}

/// A plausibility score; lower is more plausible. Always finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankScore(pub f64);

impl RankScore {
    pub fn value(&self) -> f64 {
        self.0
    }
}

impl PartialOrd for RankScore {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.0.total_cmp(&other.0))
    }
}

/// Models over `u` on which `k1` and `k2` take the same value.
pub fn agree_count(k1: &Formula, k2: &Formula, u: &Universe) -> Result<u64, LogicError> {
    Ok(truth_table(k1, u)?.xnor(&truth_table(k2, u)?).count())
}

/// Agreeing minus disagreeing models: `2 * |Mod(k1 <-> k2)| - 2^|u|`.
pub fn delta_linear(k1: &Formula, k2: &Formula, u: &Universe) -> Result<i64, LogicError> {
    let agree = agree_count(k1, k2, u)? as i64;
    Ok(2 * agree - (1i64 << u.len()))
}

/// Agreeing divided by disagreeing models; positive infinity when the
/// formulas are equivalent over `u`.
pub fn delta_quotient(k1: &Formula, k2: &Formula, u: &Universe) -> Result<f64, LogicError> {
    let agree = agree_count(k1, k2, u)?;
    let disagree = (1u64 << u.len()) - agree;
    if disagree == 0 {
        Ok(f64::INFINITY)
    } else {
        Ok(agree as f64 / disagree as f64)
    }
}

/// Similarity restricted to variable subsets: the linear measure of the
/// two formulas projected onto every nonempty `Y ⊆ x`, each weighted by
/// `1 / (|x| - |Y| + 1)` so that agreement on larger subsets counts more.
pub fn delta_restricted(k1: &Formula, k2: &Formula, x: &Universe) -> Result<f64, LogicError> {
    if x.len() > RESTRICTED_SUBSET_CAP {
        return Err(LogicError::UniverseCapExceeded { size: x.len(), cap: RESTRICTED_SUBSET_CAP });
    }
    let vars: Vec<_> = x.iter().cloned().collect();
    let mut total = 0.0;
    for mask in 1u32..(1u32 << vars.len()) {
        let subset: Vec<_> = vars
            .iter()
            .enumerate()
            .filter(|(i, _)| (mask >> i) & 1 == 1)
            .map(|(_, v)| v.clone())
            .collect();
        let y = Universe::from_vars(subset)?;
        let p1 = crate::logic::forget(k1, &y, x)?;
        let p2 = crate::logic::forget(k2, &y, x)?;
        let weight = 1.0 / (x.len() - y.len() + 1) as f64;
        total += delta_linear(&p1, &p2, &y)? as f64 * weight;
    }
    Ok(total)
}

fn similarity(mode: DeltaMode, k1: &Formula, k2: &Formula, u: &Universe) -> Result<f64, LogicError> {
    match mode {
        DeltaMode::LinearCount => Ok(agree_count(k1, k2, u)? as f64),
        DeltaMode::Quotient => {
            // Clamp the equivalent-formulas sentinel so scores stay finite.
            let q = delta_quotient(k1, k2, u)?;
            Ok(q.min((1u64 << u.len()) as f64))
        }
        DeltaMode::RestrictedSum => delta_restricted(k1, k2, u),
    }
}

fn log_term(sim: f64) -> f64 {
    (sim.max(0.0) + 1.0).log2()
}

/// Scores a transformation tuple against a profile: the total number of
/// transformations minus, for every unordered pair of transformed bases,
/// the log of their similarity. Lower is more plausible.
pub fn rank_tuple(
    tuple: &TransformationTuple,
    profile: &KnowledgeProfile,
    mode: DeltaMode,
) -> Result<RankScore, TransformError> {
    let u = profile.universe();
    let transformed: Vec<Formula> = tuple
        .sets()
        .iter()
        .zip(profile.bases())
        .map(|(set, base)| set.apply(base))
        .collect::<Result<_, _>>()?;
    let mut score = tuple.size() as f64;
    for i in 0..transformed.len() {
        for j in i + 1..transformed.len() {
            score -= log_term(similarity(mode, &transformed[i], &transformed[j], u)?);
        }
    }
    Ok(RankScore(score))
}

/// Scores a pair of renaming substitutions for a two-base profile: the
/// combined number of name changes minus the log-similarity of the two
/// substituted bases. Lower is more plausible.
pub fn rank_renaming_pair(
    y_sub: &Substitution,
    z_sub: &Substitution,
    k1: &Formula,
    k2: &Formula,
    profile: &KnowledgeProfile,
) -> Result<RankScore, LogicError> {
    let u = profile.universe();
    let f1 = y_sub.apply(k1)?;
    let f2 = z_sub.apply(k2)?;
    let agree = agree_count(&f1, &f2, u)? as f64;
    Ok(RankScore((y_sub.len() + z_sub.len()) as f64 - log_term(agree)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, Variable};
    use crate::transforms::{Transformation, TransformationSet};

    fn v(name: &str) -> Variable {
        Variable::new(name).unwrap()
    }

    fn uni(names: &[&str]) -> Universe {
        Universe::from_vars(names.iter().map(|n| v(n))).unwrap()
    }

    #[test]
    fn linear_delta_examples() {
        let u1 = uni(&["a"]);
        let a = parse_formula("a").unwrap();
        let na = parse_formula("!a").unwrap();
        assert_eq!(delta_linear(&a, &a, &u1).unwrap(), 2);
        assert_eq!(delta_linear(&a, &na, &u1).unwrap(), -2);
        let u2 = uni(&["a", "b"]);
        let b = parse_formula("b").unwrap();
        assert_eq!(delta_linear(&a, &b, &u2).unwrap(), 0);
    }

    #[test]
    fn quotient_delta_examples() {
        let u1 = uni(&["a"]);
        let a = parse_formula("a").unwrap();
        let na = parse_formula("!a").unwrap();
        assert_eq!(delta_quotient(&a, &na, &u1).unwrap(), 0.0);
        let u2 = uni(&["a", "b"]);
        let b = parse_formula("b").unwrap();
        assert_eq!(delta_quotient(&a, &b, &u2).unwrap(), 1.0);
        assert!(delta_quotient(&a, &a, &u1).unwrap().is_infinite());
    }

    /// Independent oracle for the subset-restricted measure: projects
    /// model sets coordinate-wise and counts agreements directly, without
    /// going through `forget` or `delta_linear`.
    fn restricted_oracle(k1: &Formula, k2: &Formula, x: &Universe) -> f64 {
        let t1 = truth_table(k1, x).unwrap();
        let t2 = truth_table(k2, x).unwrap();
        let n = x.len();
        let mut total = 0.0;
        for mask in 1u32..(1u32 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| (mask >> i) & 1 == 1).collect();
            let project = |t: &crate::logic::TruthTable| -> std::collections::BTreeSet<u64> {
                t.iter_models()
                    .map(|m| {
                        idx.iter().enumerate().fold(0u64, |acc, (j, i)| acc | (((m >> i) & 1) << j))
                    })
                    .collect()
            };
            let p1 = project(&t1);
            let p2 = project(&t2);
            let space = 1u64 << idx.len();
            let agree =
                (0..space).filter(|m| p1.contains(m) == p2.contains(m)).count() as i64;
            let delta = 2 * agree - space as i64;
            total += delta as f64 / (n - idx.len() + 1) as f64;
        }
        total
    }

    #[test]
    fn restricted_delta_single_variable() {
        let u = uni(&["a"]);
        let a = parse_formula("a").unwrap();
        assert_eq!(delta_restricted(&a, &a, &u).unwrap(), 2.0);
    }

    #[test]
    fn restricted_delta_matches_the_projection_oracle() {
        let u = uni(&["a", "b"]);
        let k1 = parse_formula("a & b").unwrap();
        let k2 = parse_formula("a & !b").unwrap();
        let expected = restricted_oracle(&k1, &k2, &u);
        let got = delta_restricted(&k1, &k2, &u).unwrap();
        assert!((got - expected).abs() < 1e-12, "got {got}, oracle {expected}");
        // Hand check: Y={a} agrees everywhere (+2, weight 1/2), Y={b}
        // disagrees everywhere (-2, weight 1/2), Y={a,b} agrees on the two
        // !a models (0, weight 1). Total 0.
        assert_eq!(got, 0.0);

        // Disjoint-variable formulas, same oracle.
        let u = uni(&["a", "b", "c"]);
        let k1 = parse_formula("a | c").unwrap();
        let k2 = parse_formula("b").unwrap();
        let got = delta_restricted(&k1, &k2, &u).unwrap();
        let expected = restricted_oracle(&k1, &k2, &u);
        assert!((got - expected).abs() < 1e-12, "got {got}, oracle {expected}");
    }

    #[test]
    fn restricted_delta_enforces_the_subset_cap() {
        let vars: Vec<Variable> = (0..11).map(|i| v(&format!("v{i}"))).collect();
        let u = Universe::from_vars(vars).unwrap();
        let a = parse_formula("v0").unwrap();
        assert!(matches!(
            delta_restricted(&a, &a, &u),
            Err(LogicError::UniverseCapExceeded { size: 11, cap: RESTRICTED_SUBSET_CAP })
        ));
    }

    #[test]
    fn tuple_rank_examples() {
        let a = parse_formula("a").unwrap();
        let profile =
            KnowledgeProfile::new(vec![a.clone(), a.clone()], Formula::TRUE, Formula::TRUE)
                .unwrap();
        // Identical bases, no transformations: 0 - log2(agree + 1) where
        // agree = 2^|{a, a'}| = 4.
        let empty = TransformationTuple::identity(2);
        let score = rank_tuple(&empty, &profile, DeltaMode::LinearCount).unwrap();
        assert!((score.value() - (0.0 - (5.0f64).log2())).abs() < 1e-12);

        // One renaming that keeps the bases equivalent costs exactly 1.
        let renamed = TransformationTuple::new(vec![
            TransformationSet::singleton(
                Transformation::renaming(v("a"), v("a'")).unwrap(),
            ),
            TransformationSet::empty(),
        ]);
        // a' and a agree on half of the 4 models.
        let score = rank_tuple(&renamed, &profile, DeltaMode::LinearCount).unwrap();
        assert!((score.value() - (1.0 - (3.0f64).log2())).abs() < 1e-12);
    }

    #[test]
    fn contradictory_bases_contribute_nothing_to_similarity() {
        let a = parse_formula("a").unwrap();
        let na = parse_formula("!a").unwrap();
        let profile = KnowledgeProfile::new(vec![a, na], Formula::TRUE, Formula::TRUE).unwrap();
        let empty = TransformationTuple::identity(2);
        let score = rank_tuple(&empty, &profile, DeltaMode::LinearCount).unwrap();
        // agree = 0, so the log term is log2(1) = 0 and only sizes remain.
        assert_eq!(score.value(), 0.0);
    }

    #[test]
    fn quotient_mode_stays_finite_on_equivalent_bases() {
        let a = parse_formula("a").unwrap();
        let profile =
            KnowledgeProfile::new(vec![a.clone(), a.clone()], Formula::TRUE, Formula::TRUE)
                .unwrap();
        let empty = TransformationTuple::identity(2);
        let score = rank_tuple(&empty, &profile, DeltaMode::Quotient).unwrap();
        assert!(score.value().is_finite());
        // The sentinel clamps to the model-space size: log2(2^|u| + 1).
        assert!((score.value() + (5.0f64).log2()).abs() < 1e-12);
    }

    #[test]
    fn restricted_mode_rejects_oversized_universes() {
        let vars: Vec<Variable> = (0..6).map(|i| v(&format!("w{i}"))).collect();
        let conj = Formula::conj(vars.iter().cloned().map(Formula::Var));
        // Six base variables reserve six primes: a 12-variable universe,
        // past the subset-enumeration cap.
        let profile =
            KnowledgeProfile::new(vec![conj.clone(), conj], Formula::TRUE, Formula::TRUE).unwrap();
        assert_eq!(profile.universe().len(), 12);
        let empty = TransformationTuple::identity(2);
        let err = rank_tuple(&empty, &profile, DeltaMode::RestrictedSum).unwrap_err();
        assert!(matches!(
            err,
            TransformError::Logic(LogicError::UniverseCapExceeded { size: 12, cap: 10 })
        ));
    }

    #[test]
    fn renaming_pair_rank_examples() {
        use crate::engine::Substitution;
        let a = parse_formula("a").unwrap();
        let profile =
            KnowledgeProfile::new(vec![a.clone(), a.clone()], Formula::TRUE, Formula::TRUE)
                .unwrap();
        let id = Substitution::identity();
        // Identity pair on identical bases: no changes, full agreement
        // over the four models of {a, a'}.
        let s = rank_renaming_pair(&id, &id, &a, &a, &profile).unwrap();
        assert!((s.value() - (0.0 - (5.0f64).log2())).abs() < 1e-12);

        // One renaming on each side, both bases becoming a': still fully
        // agreeing, so only the two name changes count.
        let to_prime =
            Substitution::permitted(&[(v("a"), v("a'"))], &profile).unwrap();
        let s = rank_renaming_pair(&to_prime, &to_prime, &a, &a, &profile).unwrap();
        assert!((s.value() - (2.0 - (5.0f64).log2())).abs() < 1e-12);

        // Substitutions yielding contradictory bases: zero agreement, so
        // the score is exactly the combined size.
        let na = parse_formula("!a").unwrap();
        let profile2 =
            KnowledgeProfile::new(vec![a.clone(), na.clone()], Formula::TRUE, Formula::TRUE)
                .unwrap();
        let s = rank_renaming_pair(&id, &id, &a, &na, &profile2).unwrap();
        assert_eq!(s.value(), 0.0);
        let left =
            Substitution::permitted(&[(v("a"), v("a'"))], &profile2).unwrap();
        // a' vs !a agree on half the models; one change.
        let s = rank_renaming_pair(&left, &id, &a, &na, &profile2).unwrap();
        assert!((s.value() - (1.0 - (3.0f64).log2())).abs() < 1e-12);
    }

    #[test]
    fn adding_an_equivalent_transformation_costs_exactly_one() {
        let k = parse_formula("p & q").unwrap();
        let profile =
            KnowledgeProfile::new(vec![k.clone(), k.clone()], Formula::TRUE, Formula::TRUE)
                .unwrap();
        let empty = TransformationTuple::identity(2);
        // Generalizing a variable the base never mentions leaves the
        // formula untouched, so only the size term moves.
        let noop = TransformationTuple::new(vec![
            TransformationSet::singleton(Transformation::Generalization(v("z"))),
            TransformationSet::empty(),
        ]);
        let s0 = rank_tuple(&empty, &profile, DeltaMode::LinearCount).unwrap();
        let s1 = rank_tuple(&noop, &profile, DeltaMode::LinearCount).unwrap();
        assert!((s1.value() - s0.value() - 1.0).abs() < 1e-12);
    }
}
