//! Bundled sample machines and maps.

use crate::format::{parse_machine, parse_map};
use crate::machine::Machine;
use crate::morphism::MorphismPair;

pub const FIVE_STATE: &str = include_str!("../fixtures/five_state.rfsm");
pub const HOM_SOURCE: &str = include_str!("../fixtures/hom_source.rfsm");
pub const HOM_TARGET: &str = include_str!("../fixtures/hom_target.rfsm");
pub const HOM_MAP: &str = include_str!("../fixtures/hom.map");
pub const HOM_SWAPPED_MAP: &str = include_str!("../fixtures/hom_swapped.map");

/// Five states in blocks `{q1,q2}`, `{q3,q5}`, `{q4}` over `{a, b}`.
pub fn five_state() -> Machine {
    parse_machine(FIVE_STATE).expect("bundled fixture parses")
}

/// Two four-state machines related by the homomorphism in [`HOM_MAP`].
pub fn hom_pair() -> (Machine, Machine) {
    (
        parse_machine(HOM_SOURCE).expect("bundled fixture parses"),
        parse_machine(HOM_TARGET).expect("bundled fixture parses"),
    )
}

pub fn hom_map() -> MorphismPair {
    let (m1, m2) = hom_pair();
    parse_map(HOM_MAP)
        .and_then(|d| d.to_morphism(&m1, &m2))
        .expect("bundled map parses")
}

pub fn hom_swapped_map() -> MorphismPair {
    let (m1, m2) = hom_pair();
    parse_map(HOM_SWAPPED_MAP)
        .and_then(|d| d.to_morphism(&m1, &m2))
        .expect("bundled map parses")
}
