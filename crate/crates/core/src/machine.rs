//! Rough finite state machines and their transition semantics.
//!
//! A [`Machine`] maps every `(state, symbol)` pair to a [`RoughSet`] of
//! states. From the table we derive:
//!
//! * [`Machine::block_step`]: the lift of one symbol to a definable set, by
//!   union over the states of its blocks;
//! * [`Machine::word_step`]: evaluation of a word from a single state,
//!   threading the lower and upper parts separately, left to right;
//! * [`Machine::block_word_step`]: the union of `word_step` over the states
//!   of a definable set.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::rough::{ApproximationSpace, DefinableSet, RoughSet, StateId};

pub type SymbolId = usize;

/// A finite word over a machine's alphabet, as symbol indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<SymbolId>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letter(a: SymbolId) -> Self {
        Self(vec![a])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[SymbolId] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn split_at(&self, i: usize) -> (Word, Word) {
        let (x, y) = self.0.split_at(i);
        (Word(x.to_vec()), Word(y.to_vec()))
    }

    /// Symbol-wise image under a letter map.
    pub fn map(&self, f: &[SymbolId]) -> Word {
        Word(self.0.iter().map(|&a| f[a]).collect())
    }
}

/// Every word of length exactly `len` over `n` symbols, in lexicographic order.
pub fn words_of_len(n: usize, len: usize) -> impl Iterator<Item = Word> {
    let total = n.checked_pow(len as u32).unwrap_or(0);
    (0..total).map(move |mut code| {
        let mut w = vec![0; len];
        for slot in w.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        Word(w)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    /// Lower approximation is not contained in the upper one.
    LowerNotInUpper,
    /// A boundary block has a single state, so no subset has this approximation.
    Unrealizable,
    /// The entry was built over a different approximation space.
    ForeignSpace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub state: String,
    pub symbol: String,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let reason = match self.kind {
            ViolationKind::LowerNotInUpper => "lower approximation is not contained in upper",
            ViolationKind::Unrealizable => "boundary contains a single-state block",
            ViolationKind::ForeignSpace => "entry refers to a different approximation space",
        };
        write!(f, "({}, {}): {reason}", self.state, self.symbol)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Machine {
    name: String,
    space: ApproximationSpace,
    alphabet: Vec<String>,
    symbol_index: HashMap<String, SymbolId>,
    // row-major: state * |alphabet| + symbol
    table: Vec<RoughSet>,
}

impl Machine {
    /// Builds and validates a machine. `table` is row-major by state.
    pub fn new(
        name: impl Into<String>,
        space: ApproximationSpace,
        alphabet: Vec<String>,
        table: Vec<RoughSet>,
    ) -> Result<Self> {
        let m = Self::new_unchecked(name, space, alphabet, table)?;
        let violations = m.validate();
        if violations.is_empty() {
            Ok(m)
        } else {
            Err(Error::InvalidMachine(violations))
        }
    }

    /// Builds a machine checking only its shape; table entries are not
    /// validated. Use [`Machine::validate`] to list their problems.
    pub fn new_unchecked(
        name: impl Into<String>,
        space: ApproximationSpace,
        alphabet: Vec<String>,
        table: Vec<RoughSet>,
    ) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::Totality("input alphabet is empty".into()));
        }
        let mut symbol_index = HashMap::with_capacity(alphabet.len());
        for (i, a) in alphabet.iter().enumerate() {
            if symbol_index.insert(a.clone(), i).is_some() {
                return Err(Error::DuplicateSymbol(a.clone()));
            }
        }
        let expected = space.len() * alphabet.len();
        if table.len() != expected {
            return Err(Error::Totality(format!(
                "transition table has {} entries, expected {expected}",
                table.len()
            )));
        }
        Ok(Self {
            name: name.into(),
            space,
            alphabet,
            symbol_index,
            table,
        })
    }

    /// Builds a validated machine from a function of `(state, symbol)`.
    pub fn from_fn(
        name: impl Into<String>,
        space: ApproximationSpace,
        alphabet: Vec<String>,
        mut entry: impl FnMut(StateId, SymbolId) -> RoughSet,
    ) -> Result<Self> {
        let nx = alphabet.len();
        let table = (0..space.len() * nx)
            .map(|i| entry(i / nx, i % nx))
            .collect();
        Self::new(name, space, alphabet, table)
    }

    /// Lists structurally broken table entries: a lower part outside its
    /// upper part, or sets from another space. Empty iff the machine is well
    /// formed. Realizability is not required here; see
    /// [`Machine::validate_strict`].
    pub fn validate(&self) -> Vec<Violation> {
        self.violations(false)
    }

    /// [`Machine::validate`] plus realizability: every entry must be the
    /// approximation of some subset of states.
    pub fn validate_strict(&self) -> Vec<Violation> {
        self.violations(true)
    }

    fn violations(&self, strict: bool) -> Vec<Violation> {
        let mut out = Vec::new();
        for q in 0..self.state_count() {
            for a in 0..self.symbol_count() {
                let rs = self.entry(q, a);
                let kind = match self.space.is_realizable(&rs.lower, &rs.upper) {
                    Err(_) => Some(ViolationKind::ForeignSpace),
                    Ok(true) => None,
                    Ok(false) if !rs.lower.is_subset(&rs.upper) => {
                        Some(ViolationKind::LowerNotInUpper)
                    }
                    Ok(false) if strict => Some(ViolationKind::Unrealizable),
                    Ok(false) => None,
                };
                if let Some(kind) = kind {
                    out.push(Violation {
                        state: self.space.state_name(q).to_owned(),
                        symbol: self.alphabet[a].clone(),
                        kind,
                    });
                }
            }
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn space(&self) -> &ApproximationSpace {
        &self.space
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.space.len()
    }

    pub fn symbol_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn symbol_name(&self, a: SymbolId) -> &str {
        &self.alphabet[a]
    }

    pub fn symbol_index(&self, name: &str) -> Result<SymbolId> {
        self.symbol_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(name.to_owned()))
    }

    pub fn state_index(&self, name: &str) -> Result<StateId> {
        self.space.state_index(name)
    }

    /// The table entry `δ(q, a)`.
    pub fn entry(&self, q: StateId, a: SymbolId) -> &RoughSet {
        &self.table[q * self.alphabet.len() + a]
    }

    pub fn table(&self) -> &[RoughSet] {
        &self.table
    }

    fn check_symbol(&self, a: SymbolId) -> Result<()> {
        if a < self.symbol_count() {
            Ok(())
        } else {
            Err(Error::UnknownSymbol(format!("#{a}")))
        }
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        w.symbols().iter().try_for_each(|&a| self.check_symbol(a))
    }

    fn check_state(&self, q: StateId) -> Result<()> {
        if q < self.state_count() {
            Ok(())
        } else {
            Err(Error::UnknownState(format!("#{q}")))
        }
    }

    fn union_lower(&self, d: &DefinableSet, a: SymbolId) -> DefinableSet {
        let mut out = DefinableSet::empty(&self.space);
        for b in d.block_ids() {
            for &q in self.space.block(b) {
                out.union_with(&self.entry(q, a).lower);
            }
        }
        out
    }

    fn union_upper(&self, d: &DefinableSet, a: SymbolId) -> DefinableSet {
        let mut out = DefinableSet::empty(&self.space);
        for b in d.block_ids() {
            for &q in self.space.block(b) {
                out.union_with(&self.entry(q, a).upper);
            }
        }
        out
    }

    /// Block transition: unions of the lower and upper parts of `δ(q, a)`
    /// over every state `q` of every block inside `d`. The empty set maps to
    /// `(φ, φ)`.
    pub fn block_step(&self, d: &DefinableSet, a: SymbolId) -> Result<RoughSet> {
        self.space.check_definable(d)?;
        self.check_symbol(a)?;
        Ok(RoughSet::new(
            self.union_lower(d, a),
            self.union_upper(d, a),
        ))
    }

    /// `δ*(q, w)`: starts at `([q], [q])`; each further symbol advances the
    /// lower part by the lower of a block step and the upper part by the
    /// upper of a block step.
    pub fn word_step(&self, q: StateId, w: &Word) -> Result<RoughSet> {
        self.check_state(q)?;
        self.check_word(w)?;
        let start = RoughSet::exact(DefinableSet::closure_of(&self.space, [q]));
        Ok(self.advance(start, w.symbols()))
    }

    /// Threads `(lower, upper)` through `symbols`.
    pub(crate) fn advance(&self, mut rs: RoughSet, symbols: &[SymbolId]) -> RoughSet {
        for &a in symbols {
            rs = self.advance_one(&rs, a);
        }
        rs
    }

    pub(crate) fn advance_one(&self, rs: &RoughSet, a: SymbolId) -> RoughSet {
        RoughSet::new(
            self.union_lower(&rs.lower, a),
            self.union_upper(&rs.upper, a),
        )
    }

    /// Extended block map, evaluated directly as the union of
    /// `word_step(q, w)` over the states of `d`.
    pub fn block_word_step(&self, d: &DefinableSet, w: &Word) -> Result<RoughSet> {
        self.space.check_definable(d)?;
        self.check_word(w)?;
        let mut lower = DefinableSet::empty(&self.space);
        let mut upper = DefinableSet::empty(&self.space);
        for q in d.states(&self.space) {
            let rs = self.word_step(q, w)?;
            lower.union_with(&rs.lower);
            upper.union_with(&rs.upper);
        }
        Ok(RoughSet::new(lower, upper))
    }

    /// Extended block map evaluated by the recurrence
    /// `δ*D(d, xa) = (lower δD(lower δ*D(d, x), a), upper δD(upper δ*D(d, x), a))`.
    /// Agrees with [`Machine::block_word_step`].
    pub fn block_word_step_recursive(&self, d: &DefinableSet, w: &Word) -> Result<RoughSet> {
        self.space.check_definable(d)?;
        self.check_word(w)?;
        Ok(self.advance(RoughSet::exact(d.clone()), w.symbols()))
    }

    /// Parses a word by longest-match tokenization against the alphabet.
    /// Whitespace between symbols is ignored; `""` and `"e"` (when `e` is
    /// not itself a symbol) denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || (text == "e" && !self.symbol_index.contains_key("e")) {
            return Ok(Word::empty());
        }
        let mut out = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let trimmed = rest.trim_start();
            if trimmed.len() != rest.len() {
                rest = trimmed;
                continue;
            }
            let best = self
                .alphabet
                .iter()
                .enumerate()
                .filter(|(_, s)| rest.starts_with(s.as_str()))
                .max_by_key(|(_, s)| s.len());
            match best {
                Some((i, s)) => {
                    out.push(i);
                    rest = &rest[s.len()..];
                }
                None => return Err(Error::UnknownSymbol(rest.to_owned())),
            }
        }
        Ok(Word(out))
    }

    pub fn display_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "e".to_owned();
        }
        w.symbols()
            .iter()
            .map(|&a| self.alphabet[a].as_str())
            .collect()
    }
}
