//! Approximation spaces and rough sets.
//!
//! An [`ApproximationSpace`] is a finite, ordered state set together with a
//! partition into blocks. Block ids are assigned in order of each block's
//! first member, so two spaces built from the same partition are identical
//! regardless of how the cells were listed.
//!
//! Definable sets are stored as sets of block ids rather than state sets, so
//! "is a union of blocks" holds by construction.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub type StateId = usize;
pub type BlockId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproximationSpace {
    states: Vec<String>,
    index: HashMap<String, StateId>,
    block_of: Vec<BlockId>,
    blocks: Vec<Vec<StateId>>,
}

impl ApproximationSpace {
    /// Builds a space from state names and a list of cells naming those states.
    pub fn make_partition<S, C>(states: &[S], cells: &[C]) -> Result<Self>
    where
        S: AsRef<str>,
        C: AsRef<[S]>,
    {
        let index = index_names(states)?;
        let mut label = vec![usize::MAX; states.len()];
        for (c, cell) in cells.iter().enumerate() {
            let cell = cell.as_ref();
            if cell.is_empty() {
                return Err(Error::NonPartition(format!("cell {c} is empty")));
            }
            for name in cell {
                let name = name.as_ref();
                let &s = index.get(name).ok_or_else(|| {
                    Error::NonPartition(format!("`{name}` is not a declared state"))
                })?;
                if label[s] != usize::MAX {
                    return Err(Error::NonPartition(format!(
                        "`{name}` appears in more than one cell"
                    )));
                }
                label[s] = c;
            }
        }
        if let Some(s) = label.iter().position(|&l| l == usize::MAX) {
            return Err(Error::NonPartition(format!(
                "`{}` is not covered by any cell",
                states[s].as_ref()
            )));
        }
        Self::from_labels(states, &label)
    }

    /// Builds a space where states sharing a label share a block. Labels are
    /// arbitrary; block ids are renumbered canonically.
    pub fn from_labels<S: AsRef<str>>(states: &[S], labels: &[usize]) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::NonPartition("state set is empty".into()));
        }
        if labels.len() != states.len() {
            return Err(Error::NonPartition(format!(
                "{} labels for {} states",
                labels.len(),
                states.len()
            )));
        }
        let index = index_names(states)?;
        let mut renumber: HashMap<usize, BlockId> = HashMap::new();
        let mut blocks: Vec<Vec<StateId>> = Vec::new();
        let mut block_of = Vec::with_capacity(states.len());
        for (s, &l) in labels.iter().enumerate() {
            let b = *renumber.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(s);
            block_of.push(b);
        }
        Ok(Self {
            states: states.iter().map(|s| s.as_ref().to_owned()).collect(),
            index,
            block_of,
            blocks,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s]
    }

    pub fn state_index(&self, name: &str) -> Result<StateId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownState(name.to_owned()))
    }

    pub fn block_of(&self, s: StateId) -> BlockId {
        self.block_of[s]
    }

    pub fn block(&self, b: BlockId) -> &[StateId] {
        &self.blocks[b]
    }

    pub fn blocks(&self) -> &[Vec<StateId>] {
        &self.blocks
    }

    /// `(p, q) ∈ R`.
    pub fn related(&self, p: StateId, q: StateId) -> bool {
        self.block_of[p] == self.block_of[q]
    }

    /// Lower and upper approximation of an arbitrary subset.
    pub fn approximate(&self, a: &StateSubset) -> Result<RoughSet> {
        self.check_subset(a)?;
        let mut lower = DefinableSet::empty(self);
        let mut upper = DefinableSet::empty(self);
        for (b, members) in self.blocks.iter().enumerate() {
            let hits = members.iter().filter(|&&s| a.contains(s)).count();
            if hits == members.len() {
                lower.insert(b);
            }
            if hits > 0 {
                upper.insert(b);
            }
        }
        Ok(RoughSet { lower, upper })
    }

    pub fn is_definable(&self, a: &StateSubset) -> Result<bool> {
        let rs = self.approximate(a)?;
        Ok(rs.lower == rs.upper)
    }

    /// Whether `(lower, upper)` is the approximation of some subset: lower
    /// must sit inside upper, and every boundary block needs at least two
    /// states so it can be hit without being covered.
    pub fn is_realizable(&self, lower: &DefinableSet, upper: &DefinableSet) -> Result<bool> {
        self.check_definable(lower)?;
        self.check_definable(upper)?;
        if !lower.is_subset(upper) {
            return Ok(false);
        }
        Ok(upper
            .blocks
            .difference(&lower.blocks)
            .all(|b| self.blocks[b].len() >= 2))
    }

    /// The space on `Q1 × Q2` whose relation is `R1 × R2`.
    pub fn product_partition(&self, other: &ApproximationSpace) -> ApproximationSpace {
        let n2 = other.len();
        let nb2 = other.block_count();
        let mut names = Vec::with_capacity(self.len() * n2);
        let mut labels = Vec::with_capacity(self.len() * n2);
        for (s1, name1) in self.states.iter().enumerate() {
            for (s2, name2) in other.states.iter().enumerate() {
                names.push(pair_name(name1, name2));
                labels.push(self.block_of[s1] * nb2 + other.block_of[s2]);
            }
        }
        Self::from_labels(&names, &labels).expect("pair names are unique")
    }

    pub(crate) fn check_definable(&self, d: &DefinableSet) -> Result<()> {
        if d.blocks.len() == self.block_count() {
            Ok(())
        } else {
            Err(Error::MismatchedSpace)
        }
    }

    pub(crate) fn check_subset(&self, a: &StateSubset) -> Result<()> {
        if a.members.len() == self.len() {
            Ok(())
        } else {
            Err(Error::MismatchedSpace)
        }
    }

    /// Renders a definable set as a union of blocks, e.g. `{q1,q2}∪{q4}`,
    /// with `φ` for the empty set.
    pub fn display_definable(&self, d: &DefinableSet) -> String {
        if d.is_empty() {
            return "φ".to_owned();
        }
        d.block_ids()
            .map(|b| {
                let names: Vec<&str> = self.blocks[b].iter().map(|&s| self.state_name(s)).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect::<Vec<_>>()
            .join("∪")
    }

    pub fn display_rough(&self, rs: &RoughSet) -> String {
        format!(
            "({},{})",
            self.display_definable(&rs.lower),
            self.display_definable(&rs.upper)
        )
    }
}

pub(crate) fn pair_name(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

fn index_names<S: AsRef<str>>(names: &[S]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if index.insert(n.as_ref().to_owned(), i).is_some() {
            return Err(Error::DuplicateState(n.as_ref().to_owned()));
        }
    }
    Ok(index)
}

/// A union of blocks, held as block ids of one space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DefinableSet {
    blocks: FixedBitSet,
}

impl DefinableSet {
    pub fn empty(space: &ApproximationSpace) -> Self {
        Self {
            blocks: FixedBitSet::with_capacity(space.block_count()),
        }
    }

    pub fn full(space: &ApproximationSpace) -> Self {
        let mut d = Self::empty(space);
        d.blocks.insert_range(..);
        d
    }

    pub fn from_blocks(
        space: &ApproximationSpace,
        ids: impl IntoIterator<Item = BlockId>,
    ) -> Result<Self> {
        let mut d = Self::empty(space);
        for b in ids {
            if b >= space.block_count() {
                return Err(Error::MismatchedSpace);
            }
            d.blocks.insert(b);
        }
        Ok(d)
    }

    /// The union of the blocks containing the given states.
    pub fn closure_of(
        space: &ApproximationSpace,
        states: impl IntoIterator<Item = StateId>,
    ) -> Self {
        let mut d = Self::empty(space);
        for s in states {
            d.blocks.insert(space.block_of(s));
        }
        d
    }

    /// The definable set with exactly these members, or `None` if they split a block.
    pub fn from_subset(space: &ApproximationSpace, a: &StateSubset) -> Result<Option<Self>> {
        let rs = space.approximate(a)?;
        Ok((rs.lower == rs.upper).then_some(rs.lower))
    }

    pub(crate) fn insert(&mut self, b: BlockId) {
        self.blocks.insert(b);
    }

    pub fn contains_block(&self, b: BlockId) -> bool {
        self.blocks.contains(b)
    }

    pub fn contains_state(&self, space: &ApproximationSpace, s: StateId) -> bool {
        self.blocks.contains(space.block_of(s))
    }

    pub fn block_ids(&self) -> impl Iterator<Item = BlockId> + '_ {
        self.blocks.ones()
    }

    pub fn block_len(&self) -> usize {
        self.blocks.count_ones(..)
    }

    /// Number of blocks in the owning space.
    pub fn universe(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_clear()
    }

    pub fn is_subset(&self, other: &DefinableSet) -> bool {
        self.blocks.is_subset(&other.blocks)
    }

    pub fn union_with(&mut self, other: &DefinableSet) {
        self.blocks.union_with(&other.blocks);
    }

    /// Member states in state order.
    pub fn states(&self, space: &ApproximationSpace) -> Vec<StateId> {
        (0..space.len())
            .filter(|&s| self.contains_state(space, s))
            .collect()
    }

    pub fn to_subset(&self, space: &ApproximationSpace) -> StateSubset {
        StateSubset::from_indices(space, self.states(space)).expect("members are valid")
    }
}

/// A `(lower, upper)` pair of definable sets.
///
/// Values read from a machine table are checked for realizability by
/// [`crate::Machine::validate`]; values derived by the transition semantics
/// are not, since they need not be realizable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RoughSet {
    pub lower: DefinableSet,
    pub upper: DefinableSet,
}

impl RoughSet {
    pub fn new(lower: DefinableSet, upper: DefinableSet) -> Self {
        Self { lower, upper }
    }

    pub fn exact(d: DefinableSet) -> Self {
        Self {
            lower: d.clone(),
            upper: d,
        }
    }

    pub fn empty(space: &ApproximationSpace) -> Self {
        Self::exact(DefinableSet::empty(space))
    }

    pub fn is_realizable_in(&self, space: &ApproximationSpace) -> Result<bool> {
        space.is_realizable(&self.lower, &self.upper)
    }

    /// Componentwise containment: lower in lower, upper in upper.
    pub fn is_within(&self, other: &RoughSet) -> bool {
        self.lower.is_subset(&other.lower) && self.upper.is_subset(&other.upper)
    }
}

/// An arbitrary subset of a space's states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateSubset {
    members: FixedBitSet,
}

impl StateSubset {
    pub fn empty(space: &ApproximationSpace) -> Self {
        Self {
            members: FixedBitSet::with_capacity(space.len()),
        }
    }

    pub fn from_indices(
        space: &ApproximationSpace,
        ids: impl IntoIterator<Item = StateId>,
    ) -> Result<Self> {
        let mut a = Self::empty(space);
        for s in ids {
            if s >= space.len() {
                return Err(Error::UnknownState(format!("#{s}")));
            }
            a.members.insert(s);
        }
        Ok(a)
    }

    pub fn from_names<S: AsRef<str>>(space: &ApproximationSpace, names: &[S]) -> Result<Self> {
        let ids = names
            .iter()
            .map(|n| space.state_index(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(space, ids)
    }

    /// Subset whose members are the set bits of `mask` (state `i` is bit `i`).
    pub fn from_mask(space: &ApproximationSpace, mask: u64) -> Self {
        let mut a = Self::empty(space);
        for s in 0..space.len().min(64) {
            if mask >> s & 1 == 1 {
                a.members.insert(s);
            }
        }
        a
    }

    pub fn contains(&self, s: StateId) -> bool {
        self.members.contains(s)
    }

    pub fn members(&self) -> impl Iterator<Item = StateId> + '_ {
        self.members.ones()
    }
}

impl fmt::Display for DefinableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.block_ids().map(|b| format!("B{b}")).collect();
        write!(f, "{{{}}}", ids.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex21() -> ApproximationSpace {
        ApproximationSpace::make_partition(
            &["q1", "q2", "q3", "q4", "q5"],
            &[vec!["q1", "q2"], vec!["q3", "q5"], vec!["q4"]],
        )
        .unwrap()
    }

    fn set(space: &ApproximationSpace, names: &[&str]) -> StateSubset {
        StateSubset::from_names(space, names).unwrap()
    }

    fn def(space: &ApproximationSpace, names: &[&str]) -> DefinableSet {
        DefinableSet::from_subset(space, &set(space, names))
            .unwrap()
            .unwrap()
    }

    #[test]
    fn example_partition_has_three_blocks() {
        let s = ex21();
        assert_eq!(s.block_count(), 3);
        assert_eq!(s.block(1), &[2, 4]);
        assert_eq!(s.block_of(3), 2);
    }

    #[test]
    fn block_ids_follow_first_member() {
        let s = ApproximationSpace::make_partition(&["a", "b", "c"], &[vec!["c"], vec!["b", "a"]])
            .unwrap();
        assert_eq!(s.block(0), &[0, 1]);
        assert_eq!(s.block(1), &[2]);
    }

    #[test]
    fn singleton_partition() {
        let s = ApproximationSpace::make_partition(&["q"], &[vec!["q"]]).unwrap();
        assert_eq!(s.block_count(), 1);
    }

    #[test]
    fn partition_errors() {
        let st = ["q1", "q2", "q3"];
        assert!(matches!(
            ApproximationSpace::make_partition(&st, &[vec!["q1", "q2"], vec!["q2", "q3"]]),
            Err(Error::NonPartition(_))
        ));
        assert!(matches!(
            ApproximationSpace::make_partition(&st, &[vec!["q1", "q2"]]),
            Err(Error::NonPartition(_))
        ));
        assert!(matches!(
            ApproximationSpace::make_partition(&st, &[vec!["q1", "q2", "q3"], vec![]]),
            Err(Error::NonPartition(_))
        ));
        assert!(matches!(
            ApproximationSpace::make_partition(&["q1", "q1"], &[vec!["q1"]]),
            Err(Error::DuplicateState(_))
        ));
    }

    #[test]
    fn approximate_examples() {
        let s = ex21();
        let empty = s.approximate(&StateSubset::empty(&s)).unwrap();
        assert!(empty.lower.is_empty() && empty.upper.is_empty());

        let rs = s.approximate(&set(&s, &["q1", "q3"])).unwrap();
        assert!(rs.lower.is_empty());
        assert_eq!(rs.upper, def(&s, &["q1", "q2", "q3", "q5"]));

        let rs = s.approximate(&set(&s, &["q4"])).unwrap();
        assert_eq!(rs, RoughSet::exact(def(&s, &["q4"])));

        assert!(matches!(
            StateSubset::from_names(&s, &["q9"]),
            Err(Error::UnknownState(_))
        ));
    }

    #[test]
    fn definability_examples() {
        let s = ex21();
        assert!(s.is_definable(&set(&s, &["q3", "q5"])).unwrap());
        assert!(!s.is_definable(&set(&s, &["q3"])).unwrap());
        assert!(s
            .is_definable(&set(&s, &["q1", "q2", "q3", "q4", "q5"]))
            .unwrap());
    }

    #[test]
    fn realizability_examples() {
        let s = ex21();
        let empty = DefinableSet::empty(&s);
        assert!(s.is_realizable(&empty, &def(&s, &["q3", "q5"])).unwrap());
        assert!(!s
            .is_realizable(&def(&s, &["q1", "q2"]), &def(&s, &["q1", "q2", "q4"]))
            .unwrap());
        let d = def(&s, &["q3", "q5", "q4"]);
        assert!(s.is_realizable(&d, &d).unwrap());
        // lower not inside upper
        assert!(!s
            .is_realizable(&def(&s, &["q4"]), &def(&s, &["q1", "q2"]))
            .unwrap());
        let other = ApproximationSpace::make_partition(&["x"], &[vec!["x"]]).unwrap();
        assert_eq!(
            s.is_realizable(&DefinableSet::empty(&other), &empty),
            Err(Error::MismatchedSpace)
        );
    }

    #[test]
    fn product_partition_blocks() {
        let s = ex21();
        let p = s.product_partition(&s);
        assert_eq!(p.len(), 25);
        assert_eq!(p.block_count(), 9);
        // block of (q1,q3) is {q1,q2}×{q3,q5}
        let s13 = p.state_index("(q1,q3)").unwrap();
        let names: Vec<&str> = p
            .block(p.block_of(s13))
            .iter()
            .map(|&i| p.state_name(i))
            .collect();
        assert_eq!(names, ["(q1,q3)", "(q1,q5)", "(q2,q3)", "(q2,q5)"]);

        let one = ApproximationSpace::make_partition(&["u"], &[vec!["u"]]).unwrap();
        let q = s.product_partition(&one);
        assert_eq!(q.block_count(), s.block_count());
        for i in 0..s.len() {
            assert_eq!(q.block_of(i), s.block_of(i));
        }
    }

    #[test]
    fn display_uses_block_unions() {
        let s = ex21();
        let rs = s.approximate(&set(&s, &["q1", "q3"])).unwrap();
        assert_eq!(s.display_rough(&rs), "(φ,{q1,q2}∪{q3,q5})");
    }
}
