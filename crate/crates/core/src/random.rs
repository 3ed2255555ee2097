//! Seeded random machines, wirings and bridges for property runs.
//!
//! Every entry of a generated machine is the approximation of a random
//! subset, so generated machines are realizable as well as valid.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::machine::Machine;
use crate::morphism::CoveringPair;
use crate::products::{CascadeWiring, InputBridge};
use crate::rough::{ApproximationSpace, DefinableSet, RoughSet, StateSubset};

pub type TestRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `a`, `b`, ..., `z`, then `a1`, `b1`, ...
pub fn symbol_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            let c = (b'a' + (i % 26) as u8) as char;
            match i / 26 {
                0 => c.to_string(),
                k => format!("{c}{k}"),
            }
        })
        .collect()
}

pub fn state_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// A random partition of `states` into at most `states.len()` blocks.
pub fn random_space<R: Rng + ?Sized>(rng: &mut R, states: &[String]) -> ApproximationSpace {
    let n = states.len();
    let k = rng.gen_range(1..=n.max(1));
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    ApproximationSpace::from_labels(states, &labels).expect("labels cover every state")
}

fn random_entry<R: Rng + ?Sized>(rng: &mut R, space: &ApproximationSpace) -> RoughSet {
    let members = (0..space.len()).filter(|_| rng.gen_bool(0.5));
    let subset = StateSubset::from_indices(space, members).expect("indices in range");
    space.approximate(&subset).expect("subset of this space")
}

/// A realizable machine with exactly `states` states and `symbols` symbols.
pub fn random_machine<R: Rng + ?Sized>(
    rng: &mut R,
    name: &str,
    prefix: &str,
    states: usize,
    symbols: usize,
) -> Machine {
    let names = state_names(prefix, states);
    let space = random_space(rng, &names);
    let table = (0..states * symbols)
        .map(|_| random_entry(rng, &space))
        .collect();
    Machine::new(name, space, symbol_names(symbols), table).expect("generated machine is valid")
}

/// Like [`random_machine`] with sizes drawn from `1..=max_states` and `1..=max_symbols`.
pub fn random_machine_upto<R: Rng + ?Sized>(
    rng: &mut R,
    name: &str,
    prefix: &str,
    max_states: usize,
    max_symbols: usize,
) -> Machine {
    let states = rng.gen_range(1..=max_states);
    let symbols = rng.gen_range(1..=max_symbols);
    random_machine(rng, name, prefix, states, symbols)
}

pub fn random_wiring<R: Rng + ?Sized>(rng: &mut R, m1: &Machine, m2: &Machine) -> CascadeWiring {
    let omega = (0..m2.state_count() * m2.symbol_count())
        .map(|_| rng.gen_range(0..m1.symbol_count()))
        .collect();
    CascadeWiring::new(m1, m2, omega).expect("wiring in range")
}

pub fn random_bridge<R: Rng + ?Sized>(
    rng: &mut R,
    m1: &Machine,
    m2: &Machine,
    carrier: usize,
) -> InputBridge {
    let names = (1..=carrier).map(|i| format!("u{i}")).collect();
    let decode = (0..carrier)
        .map(|_| {
            (
                rng.gen_range(0..m1.symbol_count()),
                rng.gen_range(0..m2.symbol_count()),
            )
        })
        .collect();
    InputBridge::new(m1, m2, names, decode).expect("bridge in range")
}

/// Builds a machine covering `m`: one state is duplicated into its own
/// block, every original entry is replaced by its preimage, and with
/// `extra_symbol` a fresh symbol with random entries is appended. Returns the
/// new machine and the covering `(η, ξ)` of `m` by it, where `η` sends the
/// copy to its original and `ξ` is the inclusion of alphabets.
pub fn inflate<R: Rng + ?Sized>(
    rng: &mut R,
    m: &Machine,
    extra_symbol: bool,
) -> (Machine, CoveringPair) {
    let space = m.space();
    let n = space.len();
    let original = rng.gen_range(0..n);
    let mut names = space.states().to_vec();
    let mut copy = format!("{}'", space.state_name(original));
    while names.contains(&copy) {
        copy.push('\'');
    }
    names.push(copy);
    let mut labels: Vec<usize> = (0..n).map(|s| space.block_of(s)).collect();
    labels.push(space.block_of(original));
    let inflated =
        ApproximationSpace::from_labels(&names, &labels).expect("labels cover every state");

    let mut eta: Vec<usize> = (0..n).collect();
    eta.push(original);
    let preimage = |d: &DefinableSet| {
        let states = (0..=n).filter(|&s| d.contains_state(space, eta[s]));
        DefinableSet::closure_of(&inflated, states)
    };

    let symbols = m.symbol_count() + usize::from(extra_symbol);
    let mut table = Vec::with_capacity((n + 1) * symbols);
    for &q in &eta {
        for a in 0..symbols {
            if a < m.symbol_count() {
                let e = m.entry(q, a);
                table.push(RoughSet::new(preimage(&e.lower), preimage(&e.upper)));
            } else {
                table.push(random_entry(rng, &inflated));
            }
        }
    }
    let name = format!("{}+", m.name());
    let machine = Machine::new(name, inflated, symbol_names(symbols), table)
        .expect("inflated machine is valid");
    (
        machine,
        CoveringPair::new(eta, (0..m.symbol_count()).collect()),
    )
}

/// Picks one element uniformly; `None` when empty.
pub fn pick<'a, T, R: Rng + ?Sized>(rng: &mut R, items: &'a [T]) -> Option<&'a T> {
    items.choose(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::{check_covering, DEFAULT_DEPTH};

    #[test]
    fn generated_machines_are_realizable() {
        let mut rng = seeded(7);
        for _ in 0..50 {
            let m = random_machine_upto(&mut rng, "m", "s", 5, 3);
            assert!(m.validate_strict().is_empty());
        }
    }

    #[test]
    fn same_seed_same_machine() {
        let a = random_machine(&mut seeded(3), "m", "s", 4, 2);
        let b = random_machine(&mut seeded(3), "m", "s", 4, 2);
        assert_eq!(a, b);
    }

    #[test]
    fn inflated_machine_covers_original() {
        let mut rng = seeded(11);
        for i in 0..30 {
            let m = random_machine_upto(&mut rng, "m", "s", 3, 2);
            let (big, pair) = inflate(&mut rng, &m, i % 2 == 0);
            assert_eq!(big.state_count(), m.state_count() + 1);
            assert!(big.validate_strict().is_empty());
            assert!(check_covering(&m, &big, &pair, DEFAULT_DEPTH)
                .unwrap()
                .holds());
        }
    }

    #[test]
    fn symbol_names_wrap() {
        let names = symbol_names(28);
        assert_eq!(&names[..3], ["a", "b", "c"]);
        assert_eq!(&names[26..], ["a1", "b1"]);
    }
}
