//! Truth-table semantics, substitution, and variable forgetting.
//!
//! Everything here enumerates the full model space of an explicit
//! [`Universe`]. A formula's table is a packed bitset with one bit per
//! assignment, so connectives reduce to word-wise boolean operations and
//! the tables stay fast well past the sizes the engine needs.

use super::{Formula, LogicError, Model, Universe, Variable};

/// The set of models of some formula over a fixed universe, one bit per
/// assignment. Bit `m` of the table corresponds to the assignment whose
/// `i`-th universe variable is `(m >> i) & 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    words: Vec<u64>,
    n_vars: usize,
}

impl TruthTable {
    fn empty(n_vars: usize) -> Self {
        let n_words = (1usize << n_vars).div_ceil(64);
        TruthTable { words: vec![0; n_words], n_vars }
    }

    fn full(n_vars: usize) -> Self {
        let mut t = Self::empty(n_vars);
        for w in &mut t.words {
            *w = u64::MAX;
        }
        t.mask_tail();
        t
    }

    /// Word in which bit `b` is set iff `(b >> index) & 1`, for `index < 6`.
    fn word_pattern(index: usize) -> u64 {
        let mut pattern = 0u64;
        for bit in 0..64 {
            if (bit >> index) & 1 == 1 {
                pattern |= 1 << bit;
            }
        }
        pattern
    }

    /// Table of a single variable: bit `m` set iff `(m >> index) & 1`.
    fn variable(n_vars: usize, index: usize) -> Self {
        let mut t = Self::empty(n_vars);
        if index < 6 {
            // The pattern repeats within every word.
            let pattern = Self::word_pattern(index);
            for w in &mut t.words {
                *w = pattern;
            }
        } else {
            // Whole words alternate in blocks of 2^(index-6).
            let block = 1usize << (index - 6);
            for (i, w) in t.words.iter_mut().enumerate() {
                if (i / block) % 2 == 1 {
                    *w = u64::MAX;
                }
            }
        }
        t.mask_tail();
        t
    }

    /// The image of this model set under inverting one variable: model `m`
    /// is in the result iff `m` with bit `index` toggled is in `self`.
    pub fn flip_var(&self, index: usize) -> TruthTable {
        debug_assert!(index < self.n_vars);
        let mut out = self.clone();
        if index < 6 {
            let shift = 1u32 << index;
            let pattern = Self::word_pattern(index);
            for (o, w) in out.words.iter_mut().zip(&self.words) {
                *o = ((w & pattern) >> shift) | ((w & !pattern) << shift);
            }
        } else {
            let block = 1usize << (index - 6);
            for (j, o) in out.words.iter_mut().enumerate() {
                *o = self.words[j ^ block];
            }
        }
        out
    }

    fn mask_tail(&mut self) {
        let bits = 1usize << self.n_vars;
        if !bits.is_multiple_of(64) {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << (bits % 64)) - 1;
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Number of models in the table.
    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn contains(&self, model_bits: u64) -> bool {
        let m = model_bits as usize;
        (self.words[m / 64] >> (m % 64)) & 1 == 1
    }

    pub fn insert(&mut self, model_bits: u64) {
        let m = model_bits as usize;
        self.words[m / 64] |= 1 << (m % 64);
    }

    pub fn remove(&mut self, model_bits: u64) {
        let m = model_bits as usize;
        self.words[m / 64] &= !(1 << (m % 64));
    }

    pub fn and(&self, other: &TruthTable) -> TruthTable {
        self.zip(other, |a, b| a & b)
    }

    pub fn or(&self, other: &TruthTable) -> TruthTable {
        self.zip(other, |a, b| a | b)
    }

    /// Models where the two tables agree (both in or both out).
    pub fn xnor(&self, other: &TruthTable) -> TruthTable {
        let mut t = self.zip(other, |a, b| !(a ^ b));
        t.mask_tail();
        t
    }

    pub fn complement(&self) -> TruthTable {
        let mut t = TruthTable { words: self.words.iter().map(|w| !w).collect(), n_vars: self.n_vars };
        t.mask_tail();
        t
    }

    /// True iff every model here is also a model of `other`.
    pub fn subset_of(&self, other: &TruthTable) -> bool {
        debug_assert_eq!(self.n_vars, other.n_vars);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &TruthTable) -> bool {
        debug_assert_eq!(self.n_vars, other.n_vars);
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// Model bit patterns in ascending order.
    pub fn iter_models(&self) -> impl Iterator<Item = u64> + '_ {
        (0..(1u64 << self.n_vars)).filter(move |m| self.contains(*m))
    }

    fn zip(&self, other: &TruthTable, op: impl Fn(u64, u64) -> u64) -> TruthTable {
        debug_assert_eq!(self.n_vars, other.n_vars);
        TruthTable {
            words: self.words.iter().zip(&other.words).map(|(a, b)| op(*a, *b)).collect(),
            n_vars: self.n_vars,
        }
    }
}

/// Evaluates a formula over the whole model space of `u`.
///
/// Errors if a variable of `f` is missing from `u`.
pub fn truth_table(f: &Formula, u: &Universe) -> Result<TruthTable, LogicError> {
    let n = u.len();
    match f {
        Formula::Const(true) => Ok(TruthTable::full(n)),
        Formula::Const(false) => Ok(TruthTable::empty(n)),
        Formula::Var(v) => match u.index_of(v) {
            Some(i) => Ok(TruthTable::variable(n, i)),
            None => Err(LogicError::VariableNotInUniverse(v.clone())),
        },
        Formula::Not(c) => Ok(truth_table(c, u)?.complement()),
        Formula::And(cs) => {
            let mut acc = TruthTable::full(n);
            for c in cs {
                acc = acc.and(&truth_table(c, u)?);
            }
            Ok(acc)
        }
        Formula::Or(cs) => {
            let mut acc = TruthTable::empty(n);
            for c in cs {
                acc = acc.or(&truth_table(c, u)?);
            }
            Ok(acc)
        }
        Formula::Implies(a, b) => {
            Ok(truth_table(a, u)?.complement().or(&truth_table(b, u)?))
        }
        Formula::Iff(a, b) => Ok(truth_table(a, u)?.xnor(&truth_table(b, u)?)),
    }
}

/// The satisfying assignments of `f` over `u`, materialized as [`Model`]s.
pub fn models(f: &Formula, u: &Universe) -> Result<Vec<Model>, LogicError> {
    let t = truth_table(f, u)?;
    Ok(t.iter_models().map(|bits| Model::new(u.clone(), bits)).collect())
}

/// True iff every model of `f` over `u` is a model of `g`.
pub fn entails(f: &Formula, g: &Formula, u: &Universe) -> Result<bool, LogicError> {
    Ok(truth_table(f, u)?.subset_of(&truth_table(g, u)?))
}

/// True iff `f & g` has at least one model over `u`.
pub fn consistent_with(f: &Formula, g: &Formula, u: &Universe) -> Result<bool, LogicError> {
    Ok(truth_table(f, u)?.intersects(&truth_table(g, u)?))
}

/// True iff `f` and `g` have the same models over `u`.
pub fn equivalent(f: &Formula, g: &Formula, u: &Universe) -> Result<bool, LogicError> {
    Ok(truth_table(f, u)? == truth_table(g, u)?)
}

/// Rebuilds a formula from an explicit model set, as a disjunction of
/// minterms in ascending model order. An empty table yields `false`.
pub fn formula_from_table(t: &TruthTable, u: &Universe) -> Formula {
    debug_assert_eq!(t.n_vars(), u.len());
    let minterms = t.iter_models().map(|m| {
        Formula::conj(u.iter().enumerate().map(|(i, v)| {
            if (m >> i) & 1 == 1 {
                Formula::Var(v.clone())
            } else {
                Formula::negate(Formula::Var(v.clone()))
            }
        }))
    });
    Formula::disj(minterms)
}

/// What a substituted variable is replaced with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Replacement {
    Var(Variable),
    Const(bool),
}

impl From<Variable> for Replacement {
    fn from(v: Variable) -> Self {
        Replacement::Var(v)
    }
}

impl From<bool> for Replacement {
    fn from(b: bool) -> Self {
        Replacement::Const(b)
    }
}

impl Replacement {
    fn to_formula(&self) -> Formula {
        match self {
            Replacement::Var(v) => Formula::Var(v.clone()),
            Replacement::Const(b) => Formula::Const(*b),
        }
    }
}

/// Replaces every occurrence of `from` by `to`, leaving the rest of the
/// tree untouched. Substituting an absent variable is the identity.
pub fn substitute(f: &Formula, from: &Variable, to: &Replacement) -> Formula {
    match f {
        Formula::Const(_) => f.clone(),
        Formula::Var(v) => {
            if v == from {
                to.to_formula()
            } else {
                f.clone()
            }
        }
        Formula::Not(c) => Formula::negate(substitute(c, from, to)),
        Formula::And(cs) => Formula::And(cs.iter().map(|c| substitute(c, from, to)).collect()),
        Formula::Or(cs) => Formula::Or(cs.iter().map(|c| substitute(c, from, to)).collect()),
        Formula::Implies(a, b) => {
            Formula::implies(substitute(a, from, to), substitute(b, from, to))
        }
        Formula::Iff(a, b) => Formula::iff(substitute(a, from, to), substitute(b, from, to)),
    }
}

/// Applies all `from -> to` pairs at once: a variable introduced by one
/// replacement is never itself replaced, so swaps work as expected.
///
/// Errors if two pairs share a `from` variable.
pub fn simultaneous_substitute(
    f: &Formula,
    map: &[(Variable, Variable)],
) -> Result<Formula, LogicError> {
    for (i, (from, _)) in map.iter().enumerate() {
        if map[i + 1..].iter().any(|(other, _)| other == from) {
            return Err(LogicError::DuplicateKey(from.clone()));
        }
    }
    Ok(apply_map(f, map))
}

fn apply_map(f: &Formula, map: &[(Variable, Variable)]) -> Formula {
    match f {
        Formula::Const(_) => f.clone(),
        Formula::Var(v) => match map.iter().find(|(from, _)| from == v) {
            Some((_, to)) => Formula::Var(to.clone()),
            None => f.clone(),
        },
        Formula::Not(c) => Formula::negate(apply_map(c, map)),
        Formula::And(cs) => Formula::And(cs.iter().map(|c| apply_map(c, map)).collect()),
        Formula::Or(cs) => Formula::Or(cs.iter().map(|c| apply_map(c, map)).collect()),
        Formula::Implies(a, b) => Formula::implies(apply_map(a, map), apply_map(b, map)),
        Formula::Iff(a, b) => Formula::iff(apply_map(a, map), apply_map(b, map)),
    }
}

/// Existential projection onto `keep`: drops every other variable of `f`
/// by Shannon expansion, `f[x/true] | f[x/false]`.
///
/// The result's models over `keep` are exactly the projections of the
/// models of `f`. `keep` must be a subset of the ambient universe `u`.
pub fn forget(f: &Formula, keep: &Universe, u: &Universe) -> Result<Formula, LogicError> {
    for v in keep.iter() {
        if !u.contains(v) {
            return Err(LogicError::NotASubset(v.clone()));
        }
    }
    for v in f.vars() {
        if !u.contains(&v) {
            return Err(LogicError::VariableNotInUniverse(v));
        }
    }
    let mut out = f.clone();
    for v in f.vars() {
        if !keep.contains(&v) {
            let pos = substitute(&out, &v, &Replacement::Const(true));
            let neg = substitute(&out, &v, &Replacement::Const(false));
            out = Formula::disj([pos, neg]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn v(name: &str) -> Variable {
        Variable::new(name).unwrap()
    }

    fn uni(names: &[&str]) -> Universe {
        Universe::from_vars(names.iter().map(|n| v(n))).unwrap()
    }

    #[test]
    fn tautology_has_all_models() {
        let u = uni(&["a"]);
        let ms = models(&Formula::TRUE, &u).unwrap();
        assert_eq!(ms.len(), 2);
        assert_eq!(ms[0].bits(), 0);
        assert_eq!(ms[1].bits(), 1);
    }

    #[test]
    fn single_model_formula() {
        let u = uni(&["a", "b"]);
        let f = parse_formula("a & !b").unwrap();
        let ms = models(&f, &u).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].value(&v("a")), Some(true));
        assert_eq!(ms[0].value(&v("b")), Some(false));
    }

    #[test]
    fn disjunction_has_three_models_over_two_vars() {
        // Oracle: naive truth-table enumeration, written independently of
        // the bitset path.
        let u = uni(&["a", "b"]);
        let f = parse_formula("a | b").unwrap();
        let mut expected = 0;
        for a in [false, true] {
            for b in [false, true] {
                if a || b {
                    expected += 1;
                }
            }
        }
        assert_eq!(models(&f, &u).unwrap().len(), expected);
        assert_eq!(truth_table(&f, &u).unwrap().count(), 3);
    }

    #[test]
    fn unknown_variable_is_an_error() {
        let u = uni(&["a"]);
        let f = parse_formula("a & b").unwrap();
        assert!(matches!(
            truth_table(&f, &u),
            Err(LogicError::VariableNotInUniverse(x)) if x == v("b")
        ));
    }

    #[test]
    fn entailment_examples() {
        let u = uni(&["a", "b"]);
        let ab = parse_formula("a & b").unwrap();
        let a = parse_formula("a").unwrap();
        assert!(entails(&ab, &a, &u).unwrap());
        assert!(!entails(&a, &ab, &u).unwrap());
        // A conjunction of negative facts cannot force a positive one.
        let u5 = uni(&["x1", "x1'", "x2"]);
        let neg = parse_formula("!x1' & !x2").unwrap();
        let x1 = parse_formula("x1").unwrap();
        assert!(!entails(&neg, &x1, &u5).unwrap());
    }

    #[test]
    fn consistency_examples() {
        let u = uni(&["a", "b", "a'"]);
        let a = parse_formula("a").unwrap();
        let na = parse_formula("!a").unwrap();
        let b = parse_formula("b").unwrap();
        assert!(!consistent_with(&a, &na, &u).unwrap());
        assert!(consistent_with(&a, &b, &u).unwrap());
        let mixed = parse_formula("a' & !a").unwrap();
        assert!(consistent_with(&mixed, &Formula::TRUE, &u).unwrap());
    }

    #[test]
    fn substitute_examples() {
        let imp = parse_formula("x -> y").unwrap();
        let got = substitute(&imp, &v("x"), &Replacement::Const(true));
        assert_eq!(got.to_string(), "true -> y");
        let u = uni(&["x", "y"]);
        assert!(equivalent(&got, &parse_formula("y").unwrap(), &u).unwrap());

        let disj = parse_formula("x | y").unwrap();
        let renamed = substitute(&disj, &v("x"), &Replacement::Var(v("z")));
        assert_eq!(renamed.to_string(), "z | y");

        let a = parse_formula("a").unwrap();
        assert_eq!(substitute(&a, &v("b"), &Replacement::Var(v("c"))), a);
    }

    #[test]
    fn simultaneous_substitution_swaps() {
        let f = parse_formula("a & b").unwrap();
        let swapped =
            simultaneous_substitute(&f, &[(v("a"), v("b")), (v("b"), v("a"))]).unwrap();
        assert_eq!(swapped.to_string(), "b & a");

        let g = parse_formula("x1 & a").unwrap();
        let got = simultaneous_substitute(&g, &[(v("x1"), v("x1'"))]).unwrap();
        assert_eq!(got.to_string(), "x1' & a");

        assert_eq!(simultaneous_substitute(&g, &[]).unwrap(), g);

        let dup = simultaneous_substitute(&f, &[(v("a"), v("b")), (v("a"), v("c"))]);
        assert!(matches!(dup, Err(LogicError::DuplicateKey(x)) if x == v("a")));
    }

    #[test]
    fn forget_projects_models() {
        let u = uni(&["a", "b"]);
        let keep = uni(&["a"]);
        let f = parse_formula("a & b").unwrap();
        let got = forget(&f, &keep, &u).unwrap();
        assert!(equivalent(&got, &parse_formula("a").unwrap(), &keep).unwrap());

        // Both values of a extend to a model of a | b, so nothing remains.
        let g = parse_formula("a | b").unwrap();
        let got = forget(&g, &keep, &u).unwrap();
        assert!(equivalent(&got, &Formula::TRUE, &keep).unwrap());

        let full = forget(&f, &u, &u).unwrap();
        assert!(equivalent(&full, &f, &u).unwrap());

        let bad_keep = uni(&["c"]);
        assert!(matches!(forget(&f, &bad_keep, &u), Err(LogicError::NotASubset(_))));
    }

    #[test]
    fn flip_var_toggles_one_coordinate() {
        let names: Vec<String> = (0..7).map(|i| format!("v{i}")).collect();
        let u = uni(&names.iter().map(String::as_str).collect::<Vec<_>>());
        let f = parse_formula("v0 & (v3 | !v6) & (v1 <-> v5)").unwrap();
        let t = truth_table(&f, &u).unwrap();
        for index in 0..u.len() {
            let flipped = t.flip_var(index);
            let expected: std::collections::BTreeSet<u64> =
                t.iter_models().map(|m| m ^ (1 << index)).collect();
            let got: std::collections::BTreeSet<u64> = flipped.iter_models().collect();
            assert_eq!(got, expected, "flip of variable {index}");
        }
    }

    #[test]
    fn forget_matches_model_projection_oracle() {
        // Independent oracle: project the model set coordinate-wise instead
        // of expanding the formula.
        let u = uni(&["a", "b", "c"]);
        let keep = uni(&["a", "c"]);
        for f in [
            parse_formula("a & (b | !c)").unwrap(),
            parse_formula("b -> (a <-> c)").unwrap(),
            parse_formula("!a | b").unwrap(),
        ] {
            let got = truth_table(&forget(&f, &keep, &u).unwrap(), &keep).unwrap();
            let mut expected = std::collections::BTreeSet::new();
            for m in truth_table(&f, &u).unwrap().iter_models() {
                let mut proj = 0u64;
                for (j, kv) in keep.iter().enumerate() {
                    let i = u.index_of(kv).unwrap();
                    proj |= ((m >> i) & 1) << j;
                }
                expected.insert(proj);
            }
            let got_models: std::collections::BTreeSet<u64> = got.iter_models().collect();
            assert_eq!(got_models, expected, "projection mismatch for {f}");
        }
    }
}
