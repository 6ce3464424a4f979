//! The merging operators.
//!
//! All of them search for minimal hypotheses about the mistakes behind the
//! delivered knowledge bases, keep the hypotheses whose inversion makes
//! the conjoined bases entail the upper bound `A` while staying consistent
//! with the lower bound `B`, and disjoin the merged results:
//!
//! * [`general_merge`] — per-base sets of renaming, generalization, and
//!   particularization inversions, searched breadth-first by total count;
//! * [`rmel_merge`] — two bases, renamings only, every admissible
//!   substitution pair of minimal combined size kept (equal likeliness);
//! * [`rm_merge`] — like [`rmel_merge`] but the minimal pairs are further
//!   filtered to the ones whose substituted bases are most similar;
//! * [`dalal_revise`] — the classical baseline: correct a minimal number
//!   of single-model value flips instead of renamings.
//!
//! An empty outcome (result `false`) is meaningful: no hypothesis in the
//! operator's mistake model can satisfy the bounds, so the operator's
//! assumption about the kind of mistakes is inconsistent with the data.
//! [`MergeOutcome::admissible`] exposes the distinction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::logic::{
    formula_from_table, truth_table, Formula, KnowledgeProfile, LogicError, TruthTable, Universe,
    Variable,
};
use crate::ranking::{rank_renaming_pair, rank_tuple, DeltaMode, RankScore};
use crate::transforms::{
    inverse_candidates, TransformError, Transformation, TransformationSet, TransformationTuple,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MergeError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("this operator works on exactly two knowledge bases, got {0}")]
    NeedsTwoBases(usize),
    #[error("substitution key `{0}` is outside the problem alphabet")]
    KeyOutsideAlphabet(Variable),
    #[error("substitution target `{to}` is not permitted for `{from}` (another alphabet variable or its own prime)")]
    TargetNotPermitted { from: Variable, to: Variable },
    #[error("revision target is unsatisfiable")]
    UnsatisfiableRevision,
    #[error("search cap of {cap} candidate hypotheses exceeded")]
    SearchCapExceeded { cap: usize },
}

/// A permitted renaming hypothesis: a simultaneous map sending each
/// changed variable either to another variable of the problem alphabet or
/// to its own reserved fresh prime. Unchanged variables are absent, so
/// `len` is the number of actual name changes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Substitution {
    map: BTreeMap<Variable, Variable>,
}

impl Substitution {
    pub fn identity() -> Self {
        Substitution::default()
    }

    /// Validates the pairs against a profile's alphabet. Identity pairs
    /// are dropped rather than rejected; duplicate keys are an error.
    pub fn permitted(
        pairs: &[(Variable, Variable)],
        profile: &KnowledgeProfile,
    ) -> Result<Self, MergeError> {
        let alphabet = profile.base_universe();
        let mut map = BTreeMap::new();
        for (from, to) in pairs {
            if from == to {
                continue;
            }
            if !alphabet.contains(from) {
                return Err(MergeError::KeyOutsideAlphabet(from.clone()));
            }
            if !alphabet.contains(to) && *to != profile.fresh_of(from) {
                return Err(MergeError::TargetNotPermitted {
                    from: from.clone(),
                    to: to.clone(),
                });
            }
            if map.insert(from.clone(), to.clone()).is_some() {
                return Err(MergeError::Logic(LogicError::DuplicateKey(from.clone())));
            }
        }
        Ok(Substitution { map })
    }

    fn from_pairs_unchecked(pairs: Vec<(Variable, Variable)>) -> Self {
        Substitution { map: pairs.into_iter().collect() }
    }

    /// Number of non-identity entries.
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Variable)> {
        self.map.iter()
    }

    pub fn apply(&self, f: &Formula) -> Result<Formula, LogicError> {
        let pairs: Vec<(Variable, Variable)> =
            self.map.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
        crate::logic::simultaneous_substitute(f, &pairs)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (from, to)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{from}->{to}")?;
        }
        write!(f, "}}")
    }
}

/// How a disjunct was produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Tuple(TransformationTuple),
    Renamings { left: Substitution, right: Substitution },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Tuple(t) => write!(f, "{t}"),
            Provenance::Renamings { left, right } => write!(f, "Y={left} Z={right}"),
        }
    }
}

/// One merged scenario: the corrected conjunction, the hypothesis that
/// produced it, and the hypothesis' score.
#[derive(Debug, Clone)]
pub struct Disjunct {
    pub formula: Formula,
    pub provenance: Provenance,
    pub score: RankScore,
}

/// The disjunction of all minimal merged scenarios.
///
/// `disjuncts` keeps every minimal hypothesis with its provenance;
/// `result` disjoins one representative per equivalence class of disjunct
/// formulas (and is `false` when there is no admissible hypothesis).
#[derive(Debug, Clone)]
pub struct MergeOutcome {
    pub disjuncts: Vec<Disjunct>,
    pub result: Formula,
    pub universe: Universe,
}

impl MergeOutcome {
    /// False means no admissible mistake hypothesis exists.
    pub fn admissible(&self) -> bool {
        !self.disjuncts.is_empty()
    }

    fn empty(universe: Universe) -> Self {
        MergeOutcome { disjuncts: Vec::new(), result: Formula::FALSE, universe }
    }
}

/// Which mistake kinds the general operator hypothesizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MistakeKinds {
    pub renaming: bool,
    pub generalization: bool,
    pub particularization: bool,
}

impl MistakeKinds {
    pub fn all() -> Self {
        MistakeKinds { renaming: true, generalization: true, particularization: true }
    }

    pub fn renaming_only() -> Self {
        MistakeKinds { renaming: true, generalization: false, particularization: false }
    }
}

impl Default for MistakeKinds {
    fn default() -> Self {
        MistakeKinds::all()
    }
}

/// How minimal tuples are selected among the bound-satisfying ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ranking {
    /// Fewest transformations; all ties kept.
    EqualLikeliness,
    /// Fewest transformations, then highest similarity of the transformed
    /// bases; all score ties kept.
    #[default]
    Heuristic,
}

/// Whether similarity ranking stays within the minimal combined size or
/// considers every admissible pair regardless of size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankScope {
    #[default]
    MinimalSize,
    AllAdmissible,
}

#[derive(Debug, Clone)]
pub struct MergeConfig {
    /// Largest hypothesis set per knowledge base in the general operator.
    pub budget_per_base: usize,
    pub delta_mode: DeltaMode,
    pub ranking: Ranking,
    pub kinds: MistakeKinds,
    pub rank_scope: RankScope,
    /// Fresh prime levels per variable the search may use (bounded by the
    /// profile's reserved levels).
    pub max_fresh_primes: usize,
    /// Upper bound on examined hypotheses before giving up with an error.
    pub search_cap: usize,
}

impl Default for MergeConfig {
    fn default() -> Self {
        MergeConfig {
            budget_per_base: 2,
            delta_mode: DeltaMode::default(),
            ranking: Ranking::default(),
            kinds: MistakeKinds::default(),
            rank_scope: RankScope::default(),
            max_fresh_primes: 1,
            search_cap: 2_000_000,
        }
    }
}

const SCORE_TIE_TOLERANCE: f64 = 1e-9;

/// All `k`-element index combinations of `0..n`, lexicographic.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // Advance the rightmost index that can still move.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn keep_score_minima<T>(mut items: Vec<(T, RankScore)>) -> Vec<(T, RankScore)> {
    let best = items
        .iter()
        .map(|(_, s)| s.value())
        .fold(f64::INFINITY, f64::min);
    items.retain(|(_, s)| s.value() <= best + SCORE_TIE_TOLERANCE);
    items
}

/// Sorts disjuncts by provenance print form, then disjoins one
/// representative per equivalence class into the outcome's result.
fn assemble_outcome(
    mut disjuncts: Vec<Disjunct>,
    universe: &Universe,
) -> Result<MergeOutcome, MergeError> {
    disjuncts.sort_by_key(|d| d.provenance.to_string());
    let mut representatives: Vec<(TruthTable, Formula)> = Vec::new();
    for d in &disjuncts {
        let t = truth_table(&d.formula, universe)?;
        if !representatives.iter().any(|(seen, _)| *seen == t) {
            representatives.push((t, d.formula.clone()));
        }
    }
    let result = Formula::disj(representatives.into_iter().map(|(_, f)| f));
    Ok(MergeOutcome { disjuncts, result, universe: universe.clone() })
}

/// Odometer step over mixed radii; false once all combinations are spent.
fn advance(cursor: &mut [usize], radii: &[usize]) -> bool {
    for i in (0..cursor.len()).rev() {
        cursor[i] += 1;
        if cursor[i] < radii[i] {
            return true;
        }
        cursor[i] = 0;
    }
    false
}

// ---------------------------------------------------------------------------
// General merge
// ---------------------------------------------------------------------------

struct Prepared {
    set: TransformationSet,
    formula: Formula,
    table: TruthTable,
}

/// Inverse-transformation candidates for one base.
///
/// Renaming hypotheses use the permitted-substitution space — a mentioned
/// variable may be renamed to any other alphabet variable or to its own
/// reserved prime — so that the renaming-only general search and
/// [`rmel_merge`] explore exactly the same space. Generalization and
/// particularization hypotheses come from [`inverse_candidates`] over the
/// pool of other bases' and bounds' variables plus the fresh primes.
fn base_candidates(
    profile: &KnowledgeProfile,
    index: usize,
    cfg: &MergeConfig,
) -> Result<Vec<Transformation>, MergeError> {
    let base = &profile.bases()[index];
    let base_vars = base.vars();
    let levels = cfg.max_fresh_primes.min(profile.prime_levels());
    let mut out = BTreeSet::new();
    if cfg.kinds.renaming {
        for y in &base_vars {
            for z in profile.base_universe().iter() {
                if z != y {
                    out.insert(Transformation::Renaming { from: y.clone(), to: z.clone() });
                }
            }
            for prime in profile.fresh_chain(y).iter().take(levels) {
                out.insert(Transformation::Renaming { from: y.clone(), to: prime.clone() });
            }
        }
    }
    if cfg.kinds.generalization || cfg.kinds.particularization {
        let mut pool = Universe::with_cap(profile.universe().cap());
        for (j, other) in profile.bases().iter().enumerate() {
            if j != index {
                for v in other.vars() {
                    pool.insert(v)?;
                }
            }
        }
        for v in profile.upper().vars().into_iter().chain(profile.lower().vars()) {
            pool.insert(v)?;
        }
        for v in profile.universe().iter() {
            if !profile.base_universe().contains(v) {
                pool.insert(v.clone())?;
            }
        }
        for (_, inverse) in inverse_candidates(base, &pool)? {
            match inverse {
                Transformation::Particularization(_) if cfg.kinds.particularization => {
                    out.insert(inverse);
                }
                Transformation::Generalization(_) if cfg.kinds.generalization => {
                    out.insert(inverse);
                }
                _ => {}
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Per-base legal transformation sets with their applications, built one
/// size at a time as the breadth-first levels demand them.
struct SetPool<'a> {
    profile: &'a KnowledgeProfile,
    index: usize,
    candidates: Vec<Transformation>,
    by_size: Vec<Vec<Prepared>>,
}

impl<'a> SetPool<'a> {
    fn new(
        profile: &'a KnowledgeProfile,
        index: usize,
        cfg: &MergeConfig,
    ) -> Result<Self, MergeError> {
        let base = &profile.bases()[index];
        let candidates = base_candidates(profile, index, cfg)?;
        let by_size = vec![vec![Prepared {
            set: TransformationSet::empty(),
            formula: base.clone(),
            table: truth_table(base, profile.universe())?,
        }]];
        Ok(SetPool { profile, index, candidates, by_size })
    }

    fn ensure(&mut self, size: usize, cfg: &MergeConfig, examined: &mut usize) -> Result<(), MergeError> {
        let base = &self.profile.bases()[self.index];
        let u = self.profile.universe();
        while self.by_size.len() <= size {
            let s = self.by_size.len();
            let mut prepared = Vec::new();
            for combo in combinations(self.candidates.len(), s) {
                *examined += 1;
                if *examined > cfg.search_cap {
                    return Err(MergeError::SearchCapExceeded { cap: cfg.search_cap });
                }
                let items: Vec<Transformation> =
                    combo.iter().map(|i| self.candidates[*i].clone()).collect();
                let Ok(set) = TransformationSet::new(items) else {
                    continue;
                };
                let formula = set.apply(base)?;
                let table = truth_table(&formula, u)?;
                prepared.push(Prepared { set, formula, table });
            }
            self.by_size.push(prepared);
        }
        Ok(())
    }
}

/// Size compositions of `total` into `parts` summands each at most `max`.
fn compositions(total: usize, parts: usize, max: usize) -> Vec<Vec<usize>> {
    fn rec(total: usize, parts: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for s in 0..=max.min(total) {
            prefix.push(s);
            rec(total - s, parts - 1, max, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, max, &mut Vec::new(), &mut out);
    out
}

enum TupleScorer<'a> {
    EqualLikeliness,
    Heuristic(DeltaMode),
    Custom(&'a dyn Fn(&TransformationTuple) -> f64),
}

fn run_general(
    profile: &KnowledgeProfile,
    cfg: &MergeConfig,
    scorer: TupleScorer<'_>,
) -> Result<MergeOutcome, MergeError> {
    let u = profile.universe();
    let a_table = truth_table(profile.upper(), u)?;
    let b_table = truth_table(profile.lower(), u)?;
    let n = profile.bases().len();
    let mut examined = 0usize;
    let mut per_base = Vec::with_capacity(n);
    for i in 0..n {
        per_base.push(SetPool::new(profile, i, cfg)?);
    }

    for level in 0..=n * cfg.budget_per_base {
        let level_compositions = compositions(level, n, cfg.budget_per_base);
        for sizes in &level_compositions {
            for (i, s) in sizes.iter().enumerate() {
                per_base[i].ensure(*s, cfg, &mut examined)?;
            }
        }
        let mut admissible: Vec<(Vec<&Prepared>, Formula)> = Vec::new();
        for sizes in &level_compositions {
            let options: Vec<&[Prepared]> = sizes
                .iter()
                .enumerate()
                .map(|(i, s)| per_base[i].by_size[*s].as_slice())
                .collect();
            if options.iter().any(|o| o.is_empty()) {
                continue;
            }
            let radii: Vec<usize> = options.iter().map(|o| o.len()).collect();
            let mut cursor = vec![0usize; n];
            loop {
                examined += 1;
                if examined > cfg.search_cap {
                    return Err(MergeError::SearchCapExceeded { cap: cfg.search_cap });
                }
                let chosen: Vec<&Prepared> =
                    cursor.iter().enumerate().map(|(i, c)| &options[i][*c]).collect();
                let mut conj = chosen[0].table.clone();
                for p in &chosen[1..] {
                    conj = conj.and(&p.table);
                }
                if conj.subset_of(&a_table) && conj.intersects(&b_table) {
                    let formula = Formula::conj(chosen.iter().map(|p| p.formula.clone()));
                    admissible.push((chosen, formula));
                }
                if !advance(&mut cursor, &radii) {
                    break;
                }
            }
        }
        if admissible.is_empty() {
            continue;
        }
        let scored: Vec<(Disjunct, RankScore)> = admissible
            .into_iter()
            .map(|(chosen, formula)| -> Result<(Disjunct, RankScore), MergeError> {
                let tuple =
                    TransformationTuple::new(chosen.iter().map(|p| p.set.clone()).collect());
                let score = match &scorer {
                    TupleScorer::EqualLikeliness => RankScore(level as f64),
                    TupleScorer::Heuristic(mode) => rank_tuple(&tuple, profile, *mode)?,
                    TupleScorer::Custom(f) => RankScore(f(&tuple)),
                };
                Ok((Disjunct { formula, provenance: Provenance::Tuple(tuple), score }, score))
            })
            .collect::<Result<_, MergeError>>()?;
        let kept = match scorer {
            TupleScorer::EqualLikeliness => scored,
            _ => keep_score_minima(scored),
        };
        return assemble_outcome(kept.into_iter().map(|(d, _)| d).collect(), u);
    }
    Ok(MergeOutcome::empty(u.clone()))
}

/// Merges a profile by inverting minimal sets of hypothesized mistakes.
///
/// Searches transformation tuples breadth-first by total size; at the
/// first size with bound-satisfying tuples, keeps them all
/// ([`Ranking::EqualLikeliness`]) or only the most plausible by
/// [`rank_tuple`] ([`Ranking::Heuristic`]), and disjoins the results.
/// Returns the inadmissible empty outcome when no tuple within the budget
/// satisfies the bounds.
pub fn general_merge(
    profile: &KnowledgeProfile,
    cfg: &MergeConfig,
) -> Result<MergeOutcome, MergeError> {
    let scorer = match cfg.ranking {
        Ranking::EqualLikeliness => TupleScorer::EqualLikeliness,
        Ranking::Heuristic => TupleScorer::Heuristic(cfg.delta_mode),
    };
    run_general(profile, cfg, scorer)
}

/// [`general_merge`] with an explicit scoring function instead of the
/// built-in rankings; minimal-score ties at the first admissible size are
/// kept. Intended for tests and callers with their own likeliness tables.
pub fn general_merge_with_scorer(
    profile: &KnowledgeProfile,
    cfg: &MergeConfig,
    scorer: &dyn Fn(&TransformationTuple) -> f64,
) -> Result<MergeOutcome, MergeError> {
    run_general(profile, cfg, TupleScorer::Custom(scorer))
}

// ---------------------------------------------------------------------------
// Renaming merging operators
// ---------------------------------------------------------------------------

struct SidePrepared {
    sub: Substitution,
    formula: Formula,
    table: TruthTable,
}

/// All substitutions with exactly `size` non-identity entries drawn from
/// `subjects`, each mapped to another alphabet variable or its own prime,
/// applied to `base`.
fn side_substitutions(
    base: &Formula,
    subjects: &[Variable],
    profile: &KnowledgeProfile,
    size: usize,
    u: &Universe,
) -> Result<Vec<SidePrepared>, MergeError> {
    let alphabet = profile.base_universe();
    let mut out = Vec::new();
    for combo in combinations(subjects.len(), size) {
        let chosen: Vec<&Variable> = combo.iter().map(|i| &subjects[*i]).collect();
        let target_lists: Vec<Vec<Variable>> = chosen
            .iter()
            .map(|y| {
                let mut ts: Vec<Variable> =
                    alphabet.iter().filter(|z| z != y).cloned().collect();
                ts.push(profile.fresh_of(y));
                ts
            })
            .collect();
        let radii: Vec<usize> = target_lists.iter().map(Vec::len).collect();
        let mut cursor = vec![0usize; size];
        loop {
            let pairs: Vec<(Variable, Variable)> = (0..size)
                .map(|i| (chosen[i].clone(), target_lists[i][cursor[i]].clone()))
                .collect();
            let sub = Substitution::from_pairs_unchecked(pairs);
            let formula = sub.apply(base)?;
            let table = truth_table(&formula, u)?;
            out.push(SidePrepared { sub, formula, table });
            if !advance(&mut cursor, &radii) {
                break;
            }
        }
    }
    Ok(out)
}

struct PairSearch<'a> {
    profile: &'a KnowledgeProfile,
    a_table: TruthTable,
    b_table: TruthTable,
    left_subjects: Vec<Variable>,
    right_subjects: Vec<Variable>,
    left_by_size: Vec<Vec<SidePrepared>>,
    right_by_size: Vec<Vec<SidePrepared>>,
}

impl<'a> PairSearch<'a> {
    fn new(profile: &'a KnowledgeProfile) -> Result<Self, MergeError> {
        if profile.bases().len() != 2 {
            return Err(MergeError::NeedsTwoBases(profile.bases().len()));
        }
        let u = profile.universe();
        Ok(PairSearch {
            profile,
            a_table: truth_table(profile.upper(), u)?,
            b_table: truth_table(profile.lower(), u)?,
            left_subjects: profile.bases()[0].vars(),
            right_subjects: profile.bases()[1].vars(),
            left_by_size: Vec::new(),
            right_by_size: Vec::new(),
        })
    }

    fn max_combined_size(&self) -> usize {
        self.left_subjects.len() + self.right_subjects.len()
    }

    fn ensure_side(&mut self, left: bool, size: usize) -> Result<(), MergeError> {
        let u = self.profile.universe();
        let (by_size, subjects, base) = if left {
            (&mut self.left_by_size, &self.left_subjects, &self.profile.bases()[0])
        } else {
            (&mut self.right_by_size, &self.right_subjects, &self.profile.bases()[1])
        };
        while by_size.len() <= size {
            let s = by_size.len();
            let prepared = if s > subjects.len() {
                Vec::new()
            } else {
                side_substitutions(base, subjects, self.profile, s, u)?
            };
            by_size.push(prepared);
        }
        Ok(())
    }

    /// Admissible pairs with exactly `combined` total name changes.
    fn admissible_at(
        &mut self,
        combined: usize,
    ) -> Result<Vec<(Substitution, Substitution, Formula)>, MergeError> {
        let mut found = Vec::new();
        for left_size in 0..=combined {
            let right_size = combined - left_size;
            if left_size > self.left_subjects.len() || right_size > self.right_subjects.len() {
                continue;
            }
            self.ensure_side(true, left_size)?;
            self.ensure_side(false, right_size)?;
            for l in &self.left_by_size[left_size] {
                for r in &self.right_by_size[right_size] {
                    let conj = l.table.and(&r.table);
                    if conj.subset_of(&self.a_table) && conj.intersects(&self.b_table) {
                        found.push((
                            l.sub.clone(),
                            r.sub.clone(),
                            Formula::conj([l.formula.clone(), r.formula.clone()]),
                        ));
                    }
                }
            }
        }
        Ok(found)
    }
}

/// Renaming merging with equal likeliness: disjoins `K1[Y] & K2[Z]` over
/// every permitted substitution pair of minimal combined size that makes
/// the conjunction entail `a` and stay consistent with `b`.
pub fn rmel_merge(
    k1: &Formula,
    k2: &Formula,
    a: &Formula,
    b: &Formula,
) -> Result<MergeOutcome, MergeError> {
    let profile =
        KnowledgeProfile::new(vec![k1.clone(), k2.clone()], a.clone(), b.clone())?;
    rmel_merge_in(&profile)
}

/// [`rmel_merge`] over an existing two-base profile.
pub fn rmel_merge_in(profile: &KnowledgeProfile) -> Result<MergeOutcome, MergeError> {
    let mut search = PairSearch::new(profile)?;
    for combined in 0..=search.max_combined_size() {
        let found = search.admissible_at(combined)?;
        if found.is_empty() {
            continue;
        }
        let disjuncts = found
            .into_iter()
            .map(|(left, right, formula)| Disjunct {
                formula,
                provenance: Provenance::Renamings { left, right },
                score: RankScore(combined as f64),
            })
            .collect();
        return assemble_outcome(disjuncts, profile.universe());
    }
    Ok(MergeOutcome::empty(profile.universe().clone()))
}

/// Renaming merging with the similarity ranking: among admissible
/// substitution pairs, keeps the ones minimizing [`rank_renaming_pair`]
/// (name changes traded against the similarity of the substituted bases).
///
/// With [`RankScope::MinimalSize`] the ranking refines the minimal-size
/// pairs of [`rmel_merge`]; with [`RankScope::AllAdmissible`] it compares
/// admissible pairs of every size, which can prefer a larger pair whose
/// similarity term outweighs the extra changes.
pub fn rm_merge(
    k1: &Formula,
    k2: &Formula,
    a: &Formula,
    b: &Formula,
    cfg: &MergeConfig,
) -> Result<MergeOutcome, MergeError> {
    let profile =
        KnowledgeProfile::new(vec![k1.clone(), k2.clone()], a.clone(), b.clone())?;
    rm_merge_in(&profile, cfg)
}

/// [`rm_merge`] over an existing two-base profile.
pub fn rm_merge_in(
    profile: &KnowledgeProfile,
    cfg: &MergeConfig,
) -> Result<MergeOutcome, MergeError> {
    let mut search = PairSearch::new(profile)?;
    let k1 = profile.bases()[0].clone();
    let k2 = profile.bases()[1].clone();
    let score_pair = |left: &Substitution, right: &Substitution| -> Result<RankScore, MergeError> {
        Ok(rank_renaming_pair(left, right, &k1, &k2, profile)?)
    };

    let mut scored: Vec<(Disjunct, RankScore)> = Vec::new();
    let max_log = ((1u64 << profile.universe().len()) as f64 + 1.0).log2();
    for combined in 0..=search.max_combined_size() {
        if let Some(best) = scored
            .iter()
            .map(|(_, s)| s.value())
            .min_by(f64::total_cmp)
        {
            // A pair of this size scores at least `combined - max_log`.
            if cfg.rank_scope == RankScope::AllAdmissible
                && combined as f64 - max_log > best + SCORE_TIE_TOLERANCE
            {
                break;
            }
        }
        let found = search.admissible_at(combined)?;
        for (left, right, formula) in found {
            let score = score_pair(&left, &right)?;
            scored.push((
                Disjunct { formula, provenance: Provenance::Renamings { left, right }, score },
                score,
            ));
        }
        if cfg.rank_scope == RankScope::MinimalSize && !scored.is_empty() {
            break;
        }
    }
    if scored.is_empty() {
        return Ok(MergeOutcome::empty(profile.universe().clone()));
    }
    let kept = keep_score_minima(scored);
    assemble_outcome(kept.into_iter().map(|(d, _)| d).collect(), profile.universe())
}

// ---------------------------------------------------------------------------
// Value-mistake baseline
// ---------------------------------------------------------------------------

/// Classical minimal-model-change revision of `k` by `p`: the models of
/// `p` reachable from the models of `k` by the fewest single-variable
/// value flips. Computed as a breadth-first walk of the assignment
/// hypercube, one flip per step.
///
/// When `k & p` is satisfiable the result is equivalent to `k & p`; when
/// `k` is unsatisfiable there is nothing to correct and the result is
/// equivalent to `p`.
pub fn dalal_revise(k: &Formula, p: &Formula, u: &Universe) -> Result<Formula, MergeError> {
    let p_table = truth_table(p, u)?;
    if p_table.is_empty() {
        return Err(MergeError::UnsatisfiableRevision);
    }
    let k_table = truth_table(k, u)?;
    if k_table.is_empty() {
        return Ok(formula_from_table(&p_table, u));
    }
    let mut visited = k_table.clone();
    let mut frontier = k_table;
    loop {
        let reached = frontier.and(&p_table);
        if !reached.is_empty() {
            return Ok(formula_from_table(&reached, u));
        }
        let mut next = frontier.flip_var(0);
        for i in 1..u.len() {
            next = next.or(&frontier.flip_var(i));
        }
        next = next.and(&visited.complement());
        if next.is_empty() {
            // p is satisfiable, so the walk must reach it first.
            return Err(MergeError::UnsatisfiableRevision);
        }
        visited = visited.or(&next);
        frontier = next;
    }
}
