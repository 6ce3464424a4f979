//! Propositional formulas over named variables, with brute-force
//! truth-table semantics relative to an explicit finite universe.

mod parse;
mod semantics;

pub use parse::parse_formula;
pub use semantics::{
    consistent_with, entails, equivalent, forget, formula_from_table, models,
    simultaneous_substitute, substitute, truth_table, Replacement, TruthTable,
};

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Default limit on universe size; the model space is `2^|universe|`.
pub const DEFAULT_UNIVERSE_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("empty input")]
    EmptyInput,
    #[error("invalid variable name `{0}`")]
    InvalidVariableName(String),
    #[error("variable `{0}` is not in the universe")]
    VariableNotInUniverse(Variable),
    #[error("universe of {size} variables exceeds the cap of {cap}")]
    UniverseCapExceeded { size: usize, cap: usize },
    #[error("`{0}` is not a subset of the universe")]
    NotASubset(Variable),
    #[error("duplicate substitution key `{0}`")]
    DuplicateKey(Variable),
    #[error("a profile needs at least one knowledge base")]
    EmptyProfile,
    #[error("bound {name} is unsatisfiable")]
    UnsatisfiableBound { name: &'static str },
}

/// A propositional variable: an identifier optionally ending in prime marks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(String);

impl Variable {
    /// Accepts names matching `[A-Za-z_][A-Za-z0-9_]*'*`.
    pub fn new(name: impl Into<String>) -> Result<Self, LogicError> {
        let name = name.into();
        if Self::is_valid(&name) {
            Ok(Variable(name))
        } else {
            Err(LogicError::InvalidVariableName(name))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// The same name with one more prime mark appended.
    pub fn primed(&self) -> Variable {
        Variable(format!("{}'", self.0))
    }

    fn is_valid(name: &str) -> bool {
        let mut chars = name.chars().peekable();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return false,
        }
        let mut in_primes = false;
        for c in chars {
            if c == '\'' {
                in_primes = true;
            } else if in_primes || !(c.is_ascii_alphanumeric() || c == '_') {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::str::FromStr for Variable {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variable::new(s)
    }
}

/// An ordered, duplicate-free set of variables fixing the model space.
///
/// Iteration order is insertion order, so model bit patterns and printed
/// output are stable for a given construction sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Universe {
    vars: Vec<Variable>,
    cap: usize,
}

impl Universe {
    pub fn new() -> Self {
        Self::with_cap(DEFAULT_UNIVERSE_CAP)
    }

    pub fn with_cap(cap: usize) -> Self {
        Universe { vars: Vec::new(), cap }
    }

    pub fn from_vars<I>(vars: I) -> Result<Self, LogicError>
    where
        I: IntoIterator<Item = Variable>,
    {
        let mut u = Universe::new();
        for v in vars {
            u.insert(v)?;
        }
        Ok(u)
    }

    /// Adds a variable unless already present; errors once the cap is hit.
    pub fn insert(&mut self, v: Variable) -> Result<(), LogicError> {
        if self.vars.contains(&v) {
            return Ok(());
        }
        if self.vars.len() == self.cap {
            return Err(LogicError::UniverseCapExceeded { size: self.vars.len() + 1, cap: self.cap });
        }
        self.vars.push(v);
        Ok(())
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn contains(&self, v: &Variable) -> bool {
        self.vars.contains(v)
    }

    pub fn index_of(&self, v: &Variable) -> Option<usize> {
        self.vars.iter().position(|x| x == v)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Variable> {
        self.vars.iter()
    }

    pub fn is_subset_of(&self, other: &Universe) -> bool {
        self.vars.iter().all(|v| other.contains(v))
    }

    /// First variant of `v` with extra prime marks that is not yet present.
    pub fn fresh_prime(&self, v: &Variable) -> Variable {
        let mut candidate = v.primed();
        while self.contains(&candidate) {
            candidate = candidate.primed();
        }
        candidate
    }
}

impl Default for Universe {
    fn default() -> Self {
        Universe::new()
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vars.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A total assignment over a universe, stored as a bit pattern indexed by
/// universe order (bit `i` is the value of the `i`-th universe variable).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Model {
    universe: Universe,
    bits: u64,
}

impl Model {
    pub fn new(universe: Universe, bits: u64) -> Self {
        let mask = if universe.len() == 64 { u64::MAX } else { (1u64 << universe.len()) - 1 };
        Model { universe, bits: bits & mask }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn value(&self, v: &Variable) -> Option<bool> {
        self.universe.index_of(v).map(|i| (self.bits >> i) & 1 == 1)
    }

    /// The model with `v`'s value inverted; `None` if `v` is absent.
    pub fn flipped(&self, v: &Variable) -> Option<Model> {
        let i = self.universe.index_of(v)?;
        Some(Model { universe: self.universe.clone(), bits: self.bits ^ (1 << i) })
    }
}

impl fmt::Display for Model {
    /// Bit string in universe order, first variable leftmost.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.universe.len() {
            write!(f, "{}", (self.bits >> i) & 1)?;
        }
        Ok(())
    }
}

/// A propositional formula. `And`/`Or` hold at least two children; the
/// normalizing constructors below maintain that.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Var(Variable),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub const TRUE: Formula = Formula::Const(true);
    pub const FALSE: Formula = Formula::Const(false);

    pub fn var(v: Variable) -> Formula {
        Formula::Var(v)
    }

    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn iff(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Iff(Box::new(lhs), Box::new(rhs))
    }

    /// Conjunction; drops `true` children, collapses on `false`, and
    /// unwraps singletons so the `And`-arity invariant holds.
    pub fn conj<I>(children: I) -> Formula
    where
        I: IntoIterator<Item = Formula>,
    {
        let mut kept = Vec::new();
        for c in children {
            match c {
                Formula::Const(true) => {}
                Formula::Const(false) => return Formula::FALSE,
                other => kept.push(other),
            }
        }
        match kept.len() {
            0 => Formula::TRUE,
            1 => kept.pop().unwrap(),
            _ => Formula::And(kept),
        }
    }

    /// Disjunction; dual of [`Formula::conj`]. An empty list yields `false`.
    pub fn disj<I>(children: I) -> Formula
    where
        I: IntoIterator<Item = Formula>,
    {
        let mut kept = Vec::new();
        for c in children {
            match c {
                Formula::Const(false) => {}
                Formula::Const(true) => return Formula::TRUE,
                other => kept.push(other),
            }
        }
        match kept.len() {
            0 => Formula::FALSE,
            1 => kept.pop().unwrap(),
            _ => Formula::Or(kept),
        }
    }

    /// Variables of the formula in first-occurrence order.
    pub fn vars(&self) -> Vec<Variable> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.collect_vars(&mut seen, &mut out);
        out
    }

    pub fn mentions(&self, v: &Variable) -> bool {
        match self {
            Formula::Const(_) => false,
            Formula::Var(x) => x == v,
            Formula::Not(c) => c.mentions(v),
            Formula::And(cs) | Formula::Or(cs) => cs.iter().any(|c| c.mentions(v)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.mentions(v) || b.mentions(v),
        }
    }

    fn collect_vars(&self, seen: &mut BTreeSet<Variable>, out: &mut Vec<Variable>) {
        match self {
            Formula::Const(_) => {}
            Formula::Var(v) => {
                if seen.insert(v.clone()) {
                    out.push(v.clone());
                }
            }
            Formula::Not(c) => c.collect_vars(seen, out),
            Formula::And(cs) | Formula::Or(cs) => {
                for c in cs {
                    c.collect_vars(seen, out);
                }
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_vars(seen, out);
                b.collect_vars(seen, out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Const(_) | Formula::Var(_) => 6,
            Formula::Not(_) => 5,
            Formula::And(_) => 4,
            Formula::Or(_) => 3,
            Formula::Implies(..) => 2,
            Formula::Iff(..) => 1,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        let parens = prec < min;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Formula::Const(b) => write!(f, "{b}")?,
            Formula::Var(v) => write!(f, "{v}")?,
            Formula::Not(c) => {
                write!(f, "!")?;
                c.fmt_prec(f, 5)?;
            }
            Formula::And(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    c.fmt_prec(f, 4)?;
                }
            }
            Formula::Or(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    c.fmt_prec(f, 3)?;
                }
            }
            Formula::Implies(a, b) => {
                a.fmt_prec(f, 3)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, 2)?;
            }
            Formula::Iff(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " <-> ")?;
                b.fmt_prec(f, 1)?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// A merging problem: knowledge bases `K_1..K_n`, an upper bound the merged
/// result must entail, and a lower bound it must stay consistent with.
///
/// Construction fixes the universe for the whole merge run: every variable
/// of the bases and bounds plus one fresh prime per such variable, so that
/// model counts are comparable across candidate transformations.
#[derive(Debug, Clone)]
pub struct KnowledgeProfile {
    bases: Vec<Formula>,
    upper: Formula,
    lower: Formula,
    base_universe: Universe,
    universe: Universe,
    chains: std::collections::BTreeMap<Variable, Vec<Variable>>,
    prime_levels: usize,
}

impl KnowledgeProfile {
    pub fn new(bases: Vec<Formula>, upper: Formula, lower: Formula) -> Result<Self, LogicError> {
        Self::with_options(bases, upper, lower, DEFAULT_UNIVERSE_CAP, 1)
    }

    pub fn with_cap(
        bases: Vec<Formula>,
        upper: Formula,
        lower: Formula,
        cap: usize,
    ) -> Result<Self, LogicError> {
        Self::with_options(bases, upper, lower, cap, 1)
    }

    /// Full-control constructor: `cap` bounds the final universe and
    /// `prime_levels` reserves that many fresh primes per base variable
    /// (the renaming operators only ever use the first).
    pub fn with_options(
        bases: Vec<Formula>,
        upper: Formula,
        lower: Formula,
        cap: usize,
        prime_levels: usize,
    ) -> Result<Self, LogicError> {
        if bases.is_empty() {
            return Err(LogicError::EmptyProfile);
        }
        let prime_levels = prime_levels.max(1);
        let mut base_universe = Universe::with_cap(cap);
        for f in bases.iter().chain([&upper, &lower]) {
            for v in f.vars() {
                base_universe.insert(v)?;
            }
        }
        let mut universe = base_universe.clone();
        let mut chains = std::collections::BTreeMap::new();
        for v in base_universe.iter() {
            let mut chain = Vec::with_capacity(prime_levels);
            let mut current = v.clone();
            for _ in 0..prime_levels {
                current = universe.fresh_prime(&current);
                universe.insert(current.clone())?;
                chain.push(current.clone());
            }
            chains.insert(v.clone(), chain);
        }
        for (bound, name) in [(&upper, "A"), (&lower, "B")] {
            if truth_table(bound, &universe)?.is_empty() {
                return Err(LogicError::UnsatisfiableBound { name });
            }
        }
        if !consistent_with(&upper, &lower, &universe)? {
            return Err(LogicError::UnsatisfiableBound { name: "A & B" });
        }
        Ok(KnowledgeProfile { bases, upper, lower, base_universe, universe, chains, prime_levels })
    }

    pub fn bases(&self) -> &[Formula] {
        &self.bases
    }

    pub fn upper(&self) -> &Formula {
        &self.upper
    }

    pub fn lower(&self) -> &Formula {
        &self.lower
    }

    /// Variables occurring in the bases and bounds, without the primes.
    pub fn base_universe(&self) -> &Universe {
        &self.base_universe
    }

    /// The full model space: base variables plus their reserved primes.
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn prime_levels(&self) -> usize {
        self.prime_levels
    }

    /// The first fresh prime this profile reserves for `v`.
    pub fn fresh_of(&self, v: &Variable) -> Variable {
        self.fresh_chain(v)
            .first()
            .cloned()
            .unwrap_or_else(|| self.base_universe.fresh_prime(v))
    }

    /// All primes reserved for `v`, nearest first.
    pub fn fresh_chain(&self, v: &Variable) -> &[Variable] {
        self.chains.get(v).map(Vec::as_slice).unwrap_or(&[])
    }
}
