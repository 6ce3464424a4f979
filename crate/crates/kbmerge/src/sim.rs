//! Seeded end-to-end simulation: draw correct source bases, corrupt them
//! with known mistakes, merge the corrupted bases, and measure how much
//! of the hidden knowledge the operator recovers.
//!
//! Everything is deterministic in the seed, including formula shapes and
//! injected mistakes, so batch runs are reproducible byte for byte.

use thiserror::Error;

use crate::engine::{
    general_merge, rm_merge_in, rmel_merge_in, MergeConfig, MergeError, MistakeKinds,
};
use crate::logic::{
    entails, truth_table, Formula, KnowledgeProfile, LogicError, Universe, Variable,
};
use crate::transforms::{TransformError, Transformation, TransformationSet};

pub const MAX_SIM_VARS: usize = 8;
pub const MAX_SIM_BUDGET: usize = 2;
pub const MAX_SIM_SOURCES: usize = 4;
const RESAMPLE_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("{name} = {value} exceeds the simulator cap of {cap}")]
    CapExceeded { name: &'static str, value: usize, cap: usize },
    #[error("no scenario satisfied the bounds within {0} attempts")]
    ResampleLimitExceeded(usize),
    #[error("scenario record {index} does not match its injected transformations")]
    CorruptedScenario { index: usize },
    #[error("the hidden sources do not satisfy the scenario bounds")]
    HiddenSourcesViolateBounds,
    #[error(transparent)]
    Merge(#[from] MergeError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// One simulated source: the hidden correct base, the mistakes injected
/// into it, and the corrupted base the merger actually sees.
#[derive(Debug, Clone)]
pub struct SourceRecord {
    pub hidden: Formula,
    pub injected: TransformationSet,
    pub delivered: Formula,
}

/// A full merge problem with known ground truth.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub seed: u64,
    pub universe: Universe,
    pub sources: Vec<SourceRecord>,
    pub upper: Formula,
    pub lower: Formula,
}

impl Scenario {
    /// Conjunction of the hidden correct bases.
    pub fn hidden_conjunction(&self) -> Formula {
        Formula::conj(self.sources.iter().map(|s| s.hidden.clone()))
    }

    /// Delivery and bounds invariants: every delivered base must be its
    /// hidden base under the injected set, and the hidden conjunction must
    /// entail the upper bound and stay consistent with the lower one.
    fn validate(&self) -> Result<(), SimError> {
        for (index, s) in self.sources.iter().enumerate() {
            if s.injected.apply(&s.hidden)? != s.delivered {
                return Err(SimError::CorruptedScenario { index });
            }
        }
        let mut u = self.universe.clone();
        let conj = self.hidden_conjunction();
        for v in conj.vars().into_iter().chain(self.upper.vars()).chain(self.lower.vars()) {
            u.insert(v)?;
        }
        if !entails(&conj, &self.upper, &u)?
            || !crate::logic::consistent_with(&conj, &self.lower, &u)?
        {
            return Err(SimError::HiddenSourcesViolateBounds);
        }
        Ok(())
    }
}

/// Which operator the simulator drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorChoice {
    Rmel,
    Rm,
    General,
}

/// What a merge recovered relative to the hidden sources.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryReport {
    /// The merge produced at least one disjunct.
    pub admissible: bool,
    /// No sampled small clause is implied by the result without being
    /// implied by the hidden conjunction (sampling: all clauses of at
    /// most two literals over the scenario universe).
    pub sound_wrt_sources: bool,
    /// The result implies the hidden conjunction.
    pub complete_wrt_sources: bool,
    /// Exact soundness (hidden conjunction implies the result), reported
    /// when the check universe is small enough.
    pub sound_exact: Option<bool>,
    pub disjunct_count: usize,
    pub injected_count: usize,
    pub min_score: Option<f64>,
    pub universe_size: usize,
}

/// SplitMix64; tiny, seed-stable, and good enough for drawing formulas.
struct Rng(u64);

impl Rng {
    fn new(seed: u64) -> Self {
        Rng(seed)
    }

    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    fn coin(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}

fn random_literal(rng: &mut Rng, universe: &Universe) -> Formula {
    let idx = rng.below(universe.len());
    let var = Formula::Var(universe.iter().nth(idx).unwrap().clone());
    if rng.coin() {
        Formula::negate(var)
    } else {
        var
    }
}

/// One to three clauses of one to three literals, conjoined or disjoined.
fn random_formula(rng: &mut Rng, universe: &Universe) -> Formula {
    let cnf = rng.coin();
    let n_clauses = 1 + rng.below(3);
    let clauses = (0..n_clauses).map(|_| {
        let n_lits = 1 + rng.below(3);
        let lits = (0..n_lits).map(|_| random_literal(rng, universe)).collect::<Vec<_>>();
        if cnf {
            Formula::disj(lits)
        } else {
            Formula::conj(lits)
        }
    });
    if cnf {
        Formula::conj(clauses.collect::<Vec<_>>())
    } else {
        Formula::disj(clauses.collect::<Vec<_>>())
    }
}

fn random_bound(rng: &mut Rng, universe: &Universe) -> Formula {
    if rng.coin() {
        Formula::TRUE
    } else {
        let n_lits = 1 + rng.below(2);
        Formula::disj((0..n_lits).map(|_| random_literal(rng, universe)).collect::<Vec<_>>())
    }
}

/// Draws one injected transformation set for a source.
///
/// Renaming targets are always globally fresh primes (grown through
/// `taken`), so a renaming never collapses two existing variables — the
/// corruption stays invertible, which is what the renaming operators'
/// recovery guarantee is about. Generalizations pick a variable the
/// source mentions; particularizations may pick any universe variable.
fn draw_injection(
    rng: &mut Rng,
    hidden: &Formula,
    universe: &Universe,
    taken: &mut Universe,
    budget: usize,
    kinds: MistakeKinds,
) -> Result<TransformationSet, SimError> {
    let size = rng.below(budget + 1);
    let mut items: Vec<Transformation> = Vec::new();
    let mut subjects: Vec<Variable> = Vec::new();
    for _ in 0..size {
        let mut options = Vec::new();
        let mentioned: Vec<Variable> =
            hidden.vars().into_iter().filter(|v| !subjects.contains(v)).collect();
        if kinds.renaming && !mentioned.is_empty() {
            options.push(0);
        }
        if kinds.generalization && !mentioned.is_empty() {
            options.push(1);
        }
        let free: Vec<Variable> = universe
            .iter()
            .filter(|v| !subjects.contains(v))
            .cloned()
            .collect();
        if kinds.particularization && !free.is_empty() {
            options.push(2);
        }
        if options.is_empty() {
            break;
        }
        let kind = options[rng.below(options.len())];
        let t = match kind {
            0 => {
                let from = mentioned[rng.below(mentioned.len())].clone();
                let to = taken.fresh_prime(&from);
                taken.insert(to.clone())?;
                Transformation::Renaming { from, to }
            }
            1 => Transformation::Generalization(mentioned[rng.below(mentioned.len())].clone()),
            _ => Transformation::Particularization(free[rng.below(free.len())].clone()),
        };
        subjects.push(t.subject().clone());
        items.push(t);
    }
    Ok(TransformationSet::new(items)?)
}

/// Draws a scenario: hidden sources and bounds are resampled until the
/// hidden conjunction entails the upper bound and is consistent with the
/// lower one, then each source is corrupted by up to `mistake_budget`
/// mistakes of the allowed kinds. Deterministic in `seed`.
pub fn generate(
    seed: u64,
    n_vars: usize,
    n_sources: usize,
    mistake_budget: usize,
    kinds: MistakeKinds,
) -> Result<Scenario, SimError> {
    if n_vars == 0 || n_vars > MAX_SIM_VARS {
        return Err(SimError::CapExceeded { name: "vars", value: n_vars, cap: MAX_SIM_VARS });
    }
    if mistake_budget > MAX_SIM_BUDGET {
        return Err(SimError::CapExceeded {
            name: "budget",
            value: mistake_budget,
            cap: MAX_SIM_BUDGET,
        });
    }
    if n_sources == 0 || n_sources > MAX_SIM_SOURCES {
        return Err(SimError::CapExceeded {
            name: "sources",
            value: n_sources,
            cap: MAX_SIM_SOURCES,
        });
    }
    let universe = Universe::from_vars((0..n_vars).map(|i| {
        Variable::new(format!("v{i}")).expect("generated names are valid")
    }))?;
    let mut rng = Rng::new(seed);
    for _ in 0..RESAMPLE_LIMIT {
        let hidden: Vec<Formula> =
            (0..n_sources).map(|_| random_formula(&mut rng, &universe)).collect();
        let upper = random_bound(&mut rng, &universe);
        let lower = random_bound(&mut rng, &universe);
        let conj = Formula::conj(hidden.clone());
        if !entails(&conj, &upper, &universe)? {
            continue;
        }
        if !crate::logic::consistent_with(&conj, &lower, &universe)? {
            continue;
        }
        let mut taken = universe.clone();
        let mut sources = Vec::with_capacity(n_sources);
        for s in hidden {
            let injected =
                draw_injection(&mut rng, &s, &universe, &mut taken, mistake_budget, kinds)?;
            let delivered = injected.apply(&s)?;
            sources.push(SourceRecord { hidden: s, injected, delivered });
        }
        return Ok(Scenario { seed, universe, sources, upper, lower });
    }
    Err(SimError::ResampleLimitExceeded(RESAMPLE_LIMIT))
}

/// Merges the delivered bases of a scenario and scores the outcome
/// against the hidden sources.
pub fn evaluate(
    scenario: &Scenario,
    operator: OperatorChoice,
    cfg: &MergeConfig,
) -> Result<RecoveryReport, SimError> {
    scenario.validate()?;
    let delivered: Vec<Formula> =
        scenario.sources.iter().map(|s| s.delivered.clone()).collect();
    let profile = KnowledgeProfile::with_cap(
        delivered,
        scenario.upper.clone(),
        scenario.lower.clone(),
        2 * crate::logic::DEFAULT_UNIVERSE_CAP,
    )?;
    let outcome = match operator {
        OperatorChoice::Rmel => rmel_merge_in(&profile)?,
        OperatorChoice::Rm => rm_merge_in(&profile, cfg)?,
        OperatorChoice::General => general_merge(&profile, cfg)?,
    };

    let hidden_conj = scenario.hidden_conjunction();
    // Check universe: whatever the result and the hidden sources mention,
    // plus the scenario universe the sampled clauses range over.
    let mut check_u = Universe::with_cap(2 * crate::logic::DEFAULT_UNIVERSE_CAP);
    for v in scenario.universe.iter() {
        check_u.insert(v.clone())?;
    }
    for v in hidden_conj.vars().into_iter().chain(outcome.result.vars()) {
        check_u.insert(v)?;
    }

    let hidden_table = truth_table(&hidden_conj, &check_u)?;
    let result_table = truth_table(&outcome.result, &check_u)?;
    let complete = result_table.subset_of(&hidden_table);

    let mut sound = true;
    let lits: Vec<Formula> = scenario
        .universe
        .iter()
        .flat_map(|v| {
            [Formula::Var(v.clone()), Formula::negate(Formula::Var(v.clone()))]
        })
        .collect();
    let mut clauses: Vec<Formula> = lits.clone();
    for i in 0..lits.len() {
        for j in i + 1..lits.len() {
            // Skip same-variable pairs; those are tautologies or literals.
            if scenario.universe.iter().any(|v| lits[i].mentions(v) && lits[j].mentions(v)) {
                continue;
            }
            clauses.push(Formula::disj([lits[i].clone(), lits[j].clone()]));
        }
    }
    for clause in &clauses {
        let c_table = truth_table(clause, &check_u)?;
        if !hidden_table.subset_of(&c_table) && result_table.subset_of(&c_table) {
            sound = false;
            break;
        }
    }
    let sound_exact = if check_u.len() <= 6 {
        Some(hidden_table.subset_of(&result_table))
    } else {
        None
    };

    Ok(RecoveryReport {
        admissible: outcome.admissible(),
        sound_wrt_sources: sound,
        complete_wrt_sources: complete,
        sound_exact,
        disjunct_count: outcome.disjuncts.len(),
        injected_count: scenario.sources.iter().map(|s| s.injected.len()).sum(),
        min_score: outcome
            .disjuncts
            .iter()
            .map(|d| d.score.value())
            .min_by(f64::total_cmp),
        universe_size: profile.universe().len(),
    })
}
