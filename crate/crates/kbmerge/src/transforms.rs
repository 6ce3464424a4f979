//! The mistake transformations and their candidate enumeration.
//!
//! A knowledge base handed to the merger is modeled as the output of a
//! correct source corrupted by zero or more of these transformations:
//!
//! * renaming `ren x->y`: every occurrence of `x` becomes `y` (covers
//!   homonymy, synonymy, and subject misunderstanding);
//! * wrong generalization `gen x`: an assumption is dropped by replacing
//!   `x` with `true`, so the output never mentions `x`;
//! * wrong particularization `par x`: a spurious assumption is added,
//!   turning `F` into `x -> F`;
//! * value flip `flip <bits> x`: one model of the formula is replaced by
//!   the same model with `x` inverted — the classical belief-revision
//!   mistake, used here only by the minimal-model-change baseline.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::logic::{
    formula_from_table, simultaneous_substitute, substitute, truth_table, Formula,
    KnowledgeProfile, LogicError, Model, Replacement, TruthTable, Universe, Variable,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("renaming must change the variable (`{0}` maps to itself)")]
    IdentityRenaming(Variable),
    #[error("flip variable `{0}` is not in the model's universe")]
    FlipVarNotInModel(Variable),
    #[error("flip model `{model}` does not satisfy the formula")]
    FlipModelNotSatisfied { model: String },
    #[error("transformations in one set must touch distinct variables (`{0}` repeats)")]
    OverlappingSubjects(Variable),
    #[error("renaming target `{0}` collides with another member's variable")]
    TargetCollision(Variable),
    #[error("tuple has {tuple} sets but the profile has {bases} bases")]
    LengthMismatch { tuple: usize, bases: usize },
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// One hypothesized acquisition mistake.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Transformation {
    Renaming { from: Variable, to: Variable },
    Generalization(Variable),
    Particularization(Variable),
    ValueFlip { model: Model, var: Variable },
}

impl Transformation {
    pub fn renaming(from: Variable, to: Variable) -> Result<Self, TransformError> {
        if from == to {
            return Err(TransformError::IdentityRenaming(from));
        }
        Ok(Transformation::Renaming { from, to })
    }

    pub fn value_flip(model: Model, var: Variable) -> Result<Self, TransformError> {
        if !model.universe().contains(&var) {
            return Err(TransformError::FlipVarNotInModel(var));
        }
        Ok(Transformation::ValueFlip { model, var })
    }

    /// The variable this transformation rewrites (the renaming source, or
    /// the generalized/particularized/flipped variable).
    pub fn subject(&self) -> &Variable {
        match self {
            Transformation::Renaming { from, .. } => from,
            Transformation::Generalization(v) => v,
            Transformation::Particularization(v) => v,
            Transformation::ValueFlip { var, .. } => var,
        }
    }

    pub fn apply(&self, f: &Formula) -> Result<Formula, TransformError> {
        match self {
            Transformation::Renaming { from, to } => {
                Ok(substitute(f, from, &Replacement::Var(to.clone())))
            }
            Transformation::Generalization(x) => {
                Ok(substitute(f, x, &Replacement::Const(true)))
            }
            Transformation::Particularization(x) => {
                Ok(Formula::implies(Formula::Var(x.clone()), f.clone()))
            }
            Transformation::ValueFlip { model, var } => {
                let u = model.universe();
                let mut table = truth_table(f, u)?;
                if !table.contains(model.bits()) {
                    return Err(TransformError::FlipModelNotSatisfied {
                        model: model.to_string(),
                    });
                }
                let flipped = model.flipped(var).expect("checked at construction");
                table.remove(model.bits());
                table.insert(flipped.bits());
                Ok(formula_from_table(&table, u))
            }
        }
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transformation::Renaming { from, to } => write!(f, "ren {from}->{to}"),
            Transformation::Generalization(v) => write!(f, "gen {v}"),
            Transformation::Particularization(v) => write!(f, "par {v}"),
            Transformation::ValueFlip { model, var } => write!(f, "flip {model} {var}"),
        }
    }
}

/// The mistakes hypothesized for a single knowledge base.
///
/// All members must rewrite distinct variables, and no renaming target may
/// collide with a generalized or particularized variable. Under those
/// constraints the application order is immaterial: renamings are applied
/// in one simultaneous step, and everything else commutes.
///
/// Renaming chains such as `{ren a->b, ren b->c}` are legal; being
/// simultaneous, they do not cascade.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TransformationSet {
    items: Vec<Transformation>,
}

impl TransformationSet {
    pub fn empty() -> Self {
        TransformationSet { items: Vec::new() }
    }

    pub fn new<I>(items: I) -> Result<Self, TransformError>
    where
        I: IntoIterator<Item = Transformation>,
    {
        let mut items: Vec<Transformation> = items.into_iter().collect();
        items.sort();
        items.dedup();
        let mut subjects = BTreeSet::new();
        for t in &items {
            if matches!(t, Transformation::ValueFlip { .. }) {
                continue;
            }
            if !subjects.insert(t.subject().clone()) {
                return Err(TransformError::OverlappingSubjects(t.subject().clone()));
            }
        }
        for t in &items {
            if let Transformation::Renaming { to, .. } = t {
                let collides = items.iter().any(|other| {
                    matches!(
                        other,
                        Transformation::Generalization(v) | Transformation::Particularization(v)
                            if v == to
                    )
                });
                if collides {
                    return Err(TransformError::TargetCollision(to.clone()));
                }
            }
        }
        Ok(TransformationSet { items })
    }

    pub fn singleton(t: Transformation) -> Self {
        TransformationSet { items: vec![t] }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transformation> {
        self.items.iter()
    }

    /// Applies the whole set in canonical order: the renamings in one
    /// simultaneous substitution, then generalizations and
    /// particularizations sorted by variable name, then value flips.
    pub fn apply(&self, f: &Formula) -> Result<Formula, TransformError> {
        let renamings: Vec<(Variable, Variable)> = self
            .items
            .iter()
            .filter_map(|t| match t {
                Transformation::Renaming { from, to } => Some((from.clone(), to.clone())),
                _ => None,
            })
            .collect();
        let mut out = simultaneous_substitute(f, &renamings)?;
        for t in &self.items {
            if let Transformation::Generalization(_) = t {
                out = t.apply(&out)?;
            }
        }
        for t in &self.items {
            if let Transformation::Particularization(_) = t {
                out = t.apply(&out)?;
            }
        }
        for t in &self.items {
            if let Transformation::ValueFlip { .. } = t {
                out = t.apply(&out)?;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for TransformationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, t) in self.items.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "}}")
    }
}

/// One transformation set per knowledge base, in profile order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TransformationTuple {
    per_base: Vec<TransformationSet>,
}

impl TransformationTuple {
    pub fn new(per_base: Vec<TransformationSet>) -> Self {
        TransformationTuple { per_base }
    }

    pub fn identity(n: usize) -> Self {
        TransformationTuple { per_base: vec![TransformationSet::empty(); n] }
    }

    pub fn sets(&self) -> &[TransformationSet] {
        &self.per_base
    }

    /// Total number of transformations across all sets.
    pub fn size(&self) -> usize {
        self.per_base.iter().map(TransformationSet::len).sum()
    }

    /// Conjunction of each set applied to its knowledge base.
    pub fn apply(&self, profile: &KnowledgeProfile) -> Result<Formula, TransformError> {
        if self.per_base.len() != profile.bases().len() {
            return Err(TransformError::LengthMismatch {
                tuple: self.per_base.len(),
                bases: profile.bases().len(),
            });
        }
        let mut parts = Vec::with_capacity(self.per_base.len());
        for (set, base) in self.per_base.iter().zip(profile.bases()) {
            parts.push(set.apply(base)?);
        }
        Ok(Formula::conj(parts))
    }
}

impl fmt::Display for TransformationTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, s) in self.per_base.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ">")
    }
}

/// True iff `!x |= k`, i.e. every model making `x` false satisfies `k`.
///
/// For `x` outside `vars(k)` this holds exactly when `k` is a tautology.
fn negation_entails(k_table: &TruthTable, k_vars: &Universe, x: &Variable) -> Result<bool, LogicError> {
    match k_vars.index_of(x) {
        Some(_) => {
            let neg = truth_table(&Formula::negate(Formula::Var(x.clone())), k_vars)?;
            Ok(neg.subset_of(k_table))
        }
        None => Ok(k_table.count() == 1u64 << k_vars.len()),
    }
}

/// The transformations that could have produced `k` from some correct
/// source: renamings that introduced a variable `k` mentions, dropped
/// assumptions on variables `k` no longer mentions, and added assumptions
/// `x` with `!x |= k`.
///
/// `pool` supplies the variables a vanished name may have had — the other
/// bases' and bounds' variables plus the fresh primes. The result is in
/// canonical order, truncated to at most `budget` entries.
pub fn forward_candidates(
    k: &Formula,
    pool: &Universe,
    budget: usize,
) -> Result<Vec<Transformation>, TransformError> {
    let k_vars = Universe::from_vars(k.vars())?;
    let k_table = truth_table(k, &k_vars)?;
    let mut out = BTreeSet::new();
    for x in pool.iter().filter(|x| !k_vars.contains(x)) {
        for y in k_vars.iter() {
            out.insert(Transformation::Renaming { from: x.clone(), to: y.clone() });
        }
        out.insert(Transformation::Generalization(x.clone()));
    }
    for x in k_vars.iter().chain(pool.iter().filter(|x| !k_vars.contains(x))) {
        if negation_entails(&k_table, &k_vars, x)? {
            out.insert(Transformation::Particularization(x.clone()));
        }
    }
    Ok(out.into_iter().take(budget).collect())
}

/// Pairs `(forward, inverse)` where applying `inverse` to `k` undoes a
/// hypothesized `forward` of the same kind:
///
/// * a renaming that introduced `y` is undone by renaming `y` to some
///   variable `k` does not mention;
/// * a generalization of a variable `k` does not mention is undone by
///   particularizing on such a variable;
/// * a particularization on `x` (recognizable because `!x |= k`) is undone
///   by generalizing the same `x`.
pub fn inverse_candidates(
    k: &Formula,
    pool: &Universe,
) -> Result<Vec<(Transformation, Transformation)>, TransformError> {
    let k_vars = Universe::from_vars(k.vars())?;
    let k_table = truth_table(k, &k_vars)?;
    let outside: Vec<&Variable> = pool.iter().filter(|x| !k_vars.contains(x)).collect();
    let mut out = BTreeSet::new();
    for y in k_vars.iter() {
        for x in &outside {
            for z in &outside {
                out.insert((
                    Transformation::Renaming { from: (*x).clone(), to: y.clone() },
                    Transformation::Renaming { from: y.clone(), to: (*z).clone() },
                ));
            }
        }
    }
    for x in &outside {
        for y in &outside {
            out.insert((
                Transformation::Generalization((*x).clone()),
                Transformation::Particularization((*y).clone()),
            ));
        }
    }
    for x in k_vars.iter().chain(outside.iter().copied()) {
        if negation_entails(&k_table, &k_vars, x)? {
            out.insert((
                Transformation::Particularization(x.clone()),
                Transformation::Generalization(x.clone()),
            ));
        }
    }
    Ok(out.into_iter().collect())
}
