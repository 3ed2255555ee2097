//! Homomorphisms, isomorphisms and coverings between machines.
//!
//! Containment between rough sets is componentwise: the image of a lower
//! part must land inside the lower part on the other side, and likewise for
//! upper parts. A map applied to a set means its image as a set of states.
//!
//! Every check runs at the letter level against the transition tables. A
//! `depth` of 2 or more additionally checks all words of length `1..=depth`
//! through [`Machine::word_step`]; depths 0 and 1 are letter-only.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::machine::{Machine, SymbolId, Word};
use crate::rough::{DefinableSet, RoughSet, StateId};

pub const DEFAULT_DEPTH: usize = 2;
pub const DEFAULT_SEARCH_BUDGET: u128 = 1 << 22;

/// `(f, g)` with `f: Q1 → Q2` and `g: X1 → X2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MorphismPair {
    pub state_map: Vec<StateId>,
    pub input_map: Vec<SymbolId>,
}

impl MorphismPair {
    pub fn new(state_map: Vec<StateId>, input_map: Vec<SymbolId>) -> Self {
        Self {
            state_map,
            input_map,
        }
    }

    pub fn identity(m: &Machine) -> Self {
        Self::new(
            (0..m.state_count()).collect(),
            (0..m.symbol_count()).collect(),
        )
    }

    fn check_total(&self, m1: &Machine, m2: &Machine) -> Result<()> {
        check_map(
            "state map",
            &self.state_map,
            m1.state_count(),
            m2.state_count(),
        )?;
        check_map(
            "input map",
            &self.input_map,
            m1.symbol_count(),
            m2.symbol_count(),
        )
    }
}

/// `(η, ξ)` covering `m1` by `m2`, with `η: Q2 → Q1` onto and `ξ: X1 → X2`
/// extended to words symbol by symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoveringPair {
    pub state_map: Vec<StateId>,
    pub input_map: Vec<SymbolId>,
}

impl CoveringPair {
    pub fn new(state_map: Vec<StateId>, input_map: Vec<SymbolId>) -> Self {
        Self {
            state_map,
            input_map,
        }
    }

    pub fn identity(m: &Machine) -> Self {
        Self::new(
            (0..m.state_count()).collect(),
            (0..m.symbol_count()).collect(),
        )
    }

    /// Given `self` covering `m1` by `m2` and `outer` covering `m2` by `m3`,
    /// the pair covering `m1` by `m3`.
    pub fn then(&self, outer: &CoveringPair) -> CoveringPair {
        CoveringPair {
            state_map: outer.state_map.iter().map(|&q| self.state_map[q]).collect(),
            input_map: self.input_map.iter().map(|&x| outer.input_map[x]).collect(),
        }
    }

    fn check_total(&self, m1: &Machine, m2: &Machine) -> Result<()> {
        check_map(
            "state map",
            &self.state_map,
            m2.state_count(),
            m1.state_count(),
        )?;
        check_map(
            "input map",
            &self.input_map,
            m1.symbol_count(),
            m2.symbol_count(),
        )?;
        let mut hit = vec![false; m1.state_count()];
        for &q in &self.state_map {
            hit[q] = true;
        }
        match hit.iter().position(|&h| !h) {
            Some(q) => Err(Error::NotOnto(m1.space().state_name(q).to_owned())),
            None => Ok(()),
        }
    }
}

fn check_map(what: &str, map: &[usize], domain: usize, codomain: usize) -> Result<()> {
    if map.len() != domain {
        return Err(Error::Totality(format!(
            "{what} has {} entries for a domain of {domain}",
            map.len()
        )));
    }
    if let Some(&v) = map.iter().find(|&&v| v >= codomain) {
        return Err(Error::Totality(format!(
            "{what} value #{v} is out of range"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Lower,
    Upper,
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Part::Lower => "lower",
            Part::Upper => "upper",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    /// Two related states whose images are unrelated.
    RelationNotPreserved {
        p: String,
        q: String,
    },
    /// The transition of `state` on `word` is not contained in its image.
    TransitionNotContained {
        state: String,
        word: String,
        part: Part,
        /// Letter-level table check or word-level `δ*` check.
        word_level: bool,
    },
    NotBijective {
        map: &'static str,
    },
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::RelationNotPreserved { p, q } => {
                write!(f, "({p}, {q}) are related but their images are not")
            }
            Counterexample::TransitionNotContained {
                state,
                word,
                part,
                word_level,
            } => {
                let how = if *word_level { "δ*" } else { "δ" };
                write!(
                    f,
                    "{part} part of {how}({state}, {word}) is not contained in its image"
                )
            }
            Counterexample::NotBijective { map } => write!(f, "{map} is not a bijection"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Counterexample),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(c) => Some(c),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("holds"),
            Verdict::Fails(c) => write!(f, "fails: {c}"),
        }
    }
}

/// Whether every element of `src` (a definable set of `from`) lands, under
/// `map`, inside `dst` (a definable set of `to`).
fn image_within(
    from: &Machine,
    src: &DefinableSet,
    map: &[StateId],
    to: &Machine,
    dst: &DefinableSet,
) -> bool {
    src.states(from.space())
        .into_iter()
        .all(|s| dst.contains_state(to.space(), map[s]))
}

/// Image of a definable set under a state map, as a bitset over the target's states.
fn image_states(
    from: &Machine,
    src: &DefinableSet,
    map: &[StateId],
    target_len: usize,
) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(target_len);
    for s in src.states(from.space()) {
        out.insert(map[s]);
    }
    out
}

fn within_image(to: &Machine, small: &DefinableSet, image: &FixedBitSet) -> bool {
    small
        .states(to.space())
        .into_iter()
        .all(|s| image.contains(s))
}

/// Checks `(f, g)` as a homomorphism from `m1` to `m2`.
pub fn check_homomorphism(
    m1: &Machine,
    m2: &Machine,
    pair: &MorphismPair,
    depth: usize,
) -> Result<Verdict> {
    pair.check_total(m1, m2)?;
    let f = &pair.state_map;
    let g = &pair.input_map;

    if let Some((p, q)) = unrelated_images(m1, m2, f) {
        return Ok(Verdict::Fails(Counterexample::RelationNotPreserved {
            p: m1.space().state_name(p).to_owned(),
            q: m1.space().state_name(q).to_owned(),
        }));
    }

    let contained = |rs1: &RoughSet, rs2: &RoughSet| -> Option<Part> {
        if !image_within(m1, &rs1.lower, f, m2, &rs2.lower) {
            Some(Part::Lower)
        } else if !image_within(m1, &rs1.upper, f, m2, &rs2.upper) {
            Some(Part::Upper)
        } else {
            None
        }
    };

    for q in 0..m1.state_count() {
        for x in 0..m1.symbol_count() {
            if let Some(part) = contained(m1.entry(q, x), m2.entry(f[q], g[x])) {
                return Ok(Verdict::Fails(Counterexample::TransitionNotContained {
                    state: m1.space().state_name(q).to_owned(),
                    word: m1.symbol_name(x).to_owned(),
                    part,
                    word_level: false,
                }));
            }
        }
    }

    if depth >= 2 {
        for q in 0..m1.state_count() {
            let start1 = m1.word_step(q, &Word::empty())?;
            let start2 = m2.word_step(f[q], &Word::empty())?;
            if let Some((w, part)) =
                first_word_failure(m1, m2, start1, start2, g, depth, &contained)
            {
                return Ok(Verdict::Fails(Counterexample::TransitionNotContained {
                    state: m1.space().state_name(q).to_owned(),
                    word: m1.display_word(&w),
                    part,
                    word_level: true,
                }));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Breadth-first over words of length `1..=depth`, advancing both machines in
/// lockstep (`m2` reads the image of each symbol). Returns the first word,
/// shortest first, where `failure` reports a problem.
fn first_word_failure(
    m1: &Machine,
    m2: &Machine,
    start1: RoughSet,
    start2: RoughSet,
    xi: &[SymbolId],
    depth: usize,
    failure: &dyn Fn(&RoughSet, &RoughSet) -> Option<Part>,
) -> Option<(Word, Part)> {
    let mut frontier = vec![(Word::empty(), start1, start2)];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(frontier.len() * m1.symbol_count());
        for (w, rs1, rs2) in &frontier {
            for x in 0..m1.symbol_count() {
                let r1 = m1.advance_one(rs1, x);
                let r2 = m2.advance_one(rs2, xi[x]);
                let w = w.concat(&Word::letter(x));
                if let Some(part) = failure(&r1, &r2) {
                    return Some((w, part));
                }
                next.push((w, r1, r2));
            }
        }
        frontier = next;
    }
    None
}

fn unrelated_images(from: &Machine, to: &Machine, map: &[StateId]) -> Option<(StateId, StateId)> {
    for block in from.space().blocks() {
        let first = block[0];
        for &q in &block[1..] {
            if !to.space().related(map[first], map[q]) {
                return Some((first, q));
            }
        }
    }
    None
}

fn is_bijection(map: &[usize], codomain: usize) -> bool {
    if map.len() != codomain {
        return false;
    }
    let mut seen = vec![false; codomain];
    map.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
}

/// A bijective homomorphism. Bijectivity is checked first, then the
/// homomorphism conditions at the given depth.
pub fn check_isomorphism(
    m1: &Machine,
    m2: &Machine,
    pair: &MorphismPair,
    depth: usize,
) -> Result<Verdict> {
    pair.check_total(m1, m2)?;
    if !is_bijection(&pair.state_map, m2.state_count()) {
        return Ok(Verdict::Fails(Counterexample::NotBijective {
            map: "state map",
        }));
    }
    if !is_bijection(&pair.input_map, m2.symbol_count()) {
        return Ok(Verdict::Fails(Counterexample::NotBijective {
            map: "input map",
        }));
    }
    check_homomorphism(m1, m2, pair, depth)
}

/// Whether `f` sends every block of `m1` onto a whole block of `m2`.
pub fn maps_blocks_onto_blocks(m1: &Machine, m2: &Machine, f: &[StateId]) -> bool {
    m1.space().blocks().iter().all(|block| {
        let target = m2.space().block_of(f[block[0]]);
        let mut image: Vec<StateId> = block.iter().map(|&q| f[q]).collect();
        image.sort_unstable();
        image.dedup();
        image == m2.space().block(target)
    })
}

/// Checks `(η, ξ)` as a covering of `m1` by `m2`.
pub fn check_covering(
    m1: &Machine,
    m2: &Machine,
    pair: &CoveringPair,
    depth: usize,
) -> Result<Verdict> {
    pair.check_total(m1, m2)?;
    let eta = &pair.state_map;
    let xi = &pair.input_map;

    if let Some((p, q)) = unrelated_images(m2, m1, eta) {
        return Ok(Verdict::Fails(Counterexample::RelationNotPreserved {
            p: m2.space().state_name(p).to_owned(),
            q: m2.space().state_name(q).to_owned(),
        }));
    }

    let n1 = m1.state_count();
    let covered = |rs1: &RoughSet, rs2: &RoughSet| -> Option<Part> {
        if !within_image(m1, &rs1.lower, &image_states(m2, &rs2.lower, eta, n1)) {
            Some(Part::Lower)
        } else if !within_image(m1, &rs1.upper, &image_states(m2, &rs2.upper, eta, n1)) {
            Some(Part::Upper)
        } else {
            None
        }
    };

    for q2 in 0..m2.state_count() {
        for x in 0..m1.symbol_count() {
            if let Some(part) = covered(m1.entry(eta[q2], x), m2.entry(q2, xi[x])) {
                return Ok(Verdict::Fails(Counterexample::TransitionNotContained {
                    state: m2.space().state_name(q2).to_owned(),
                    word: m1.symbol_name(x).to_owned(),
                    part,
                    word_level: false,
                }));
            }
        }
    }

    if depth >= 2 {
        for q2 in 0..m2.state_count() {
            let start1 = m1.word_step(eta[q2], &Word::empty())?;
            let start2 = m2.word_step(q2, &Word::empty())?;
            if let Some((w, part)) = first_word_failure(m1, m2, start1, start2, xi, depth, &covered)
            {
                return Ok(Verdict::Fails(Counterexample::TransitionNotContained {
                    state: m2.space().state_name(q2).to_owned(),
                    word: m1.display_word(&w),
                    part,
                    word_level: true,
                }));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Size of the raw `(η, ξ)` search space, `|Q1|^|Q2| · |X2|^|X1|`, saturating.
pub fn covering_search_space(m1: &Machine, m2: &Machine) -> u128 {
    let pow = |b: usize, e: usize| (b as u128).checked_pow(e as u32).unwrap_or(u128::MAX);
    pow(m1.state_count(), m2.state_count())
        .saturating_mul(pow(m2.symbol_count(), m1.symbol_count()))
}

/// Every covering of `m1` by `m2` passing [`check_covering`] at `depth`,
/// ordered lexicographically by `(η, ξ)`.
pub fn search_coverings(
    m1: &Machine,
    m2: &Machine,
    depth: usize,
    budget: u128,
) -> Result<Vec<CoveringPair>> {
    let size = covering_search_space(m1, m2);
    if size > budget {
        return Err(Error::BudgetExceeded { size, budget });
    }
    let (n1, n2) = (m1.state_count(), m2.state_count());
    let mut found = Vec::new();
    if n1 > n2 {
        return Ok(found);
    }
    let mut eta = vec![0; n2];
    loop {
        if let Some(xis) = letter_candidates(m1, m2, &eta) {
            for_each_choice(&xis, |xi| {
                let pair = CoveringPair::new(eta.clone(), xi.to_vec());
                let ok = depth < 2
                    || check_covering(m1, m2, &pair, depth)
                        .map(|v| v.holds())
                        .unwrap_or(false);
                if ok {
                    found.push(pair);
                }
            });
        }
        if !increment(&mut eta, n1) {
            break;
        }
    }
    Ok(found)
}

/// For an onto, relation-preserving `η`, the admissible images of each
/// letter under the letter-level condition. `None` when `η` itself fails.
fn letter_candidates(m1: &Machine, m2: &Machine, eta: &[StateId]) -> Option<Vec<Vec<SymbolId>>> {
    let n1 = m1.state_count();
    let mut hit = vec![false; n1];
    for &q in eta {
        hit[q] = true;
    }
    if hit.contains(&false) || unrelated_images(m2, m1, eta).is_some() {
        return None;
    }
    let mut out = Vec::with_capacity(m1.symbol_count());
    for x in 0..m1.symbol_count() {
        let ok: Vec<SymbolId> = (0..m2.symbol_count())
            .filter(|&y| {
                (0..m2.state_count()).all(|q2| {
                    let rs1 = m1.entry(eta[q2], x);
                    let rs2 = m2.entry(q2, y);
                    within_image(m1, &rs1.lower, &image_states(m2, &rs2.lower, eta, n1))
                        && within_image(m1, &rs1.upper, &image_states(m2, &rs2.upper, eta, n1))
                })
            })
            .collect();
        if ok.is_empty() {
            return None;
        }
        out.push(ok);
    }
    Some(out)
}

fn for_each_choice(options: &[Vec<usize>], mut visit: impl FnMut(&[usize])) {
    let mut pos = vec![0; options.len()];
    loop {
        let choice: Vec<usize> = pos.iter().zip(options).map(|(&i, o)| o[i]).collect();
        visit(&choice);
        let mut k = options.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            pos[k] += 1;
            if pos[k] < options[k].len() {
                break;
            }
            pos[k] = 0;
        }
    }
}

/// Odometer increment, most significant digit first. False on wrap-around.
fn increment(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}
