use std::collections::BTreeSet;

use proptest::prelude::*;
use rfsm::fixtures::five_state;
use rfsm::format::{parse_machine, serialize_machine};
use rfsm::products::{
    cascade, compose_wreath_inputs, full_direct, general_direct, restricted_direct, wreath,
    FunctionSymbol, InputBridge, WreathElement,
};
use rfsm::random::{random_bridge, random_machine, random_machine_upto, random_wiring, seeded};
use rfsm::{Machine, Word};

fn set(m: &Machine, d: &rfsm::DefinableSet) -> BTreeSet<usize> {
    d.states(m.space()).into_iter().collect()
}

/// `A × B` as indices of the product with `n2` states in the second factor.
fn cross(a: &BTreeSet<usize>, b: &BTreeSet<usize>, n2: usize) -> BTreeSet<usize> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| x * n2 + y))
        .collect()
}

/// Checks every entry of `p` against `δ1(q1, x1(q2, s)) × δ2(q2, x2(s))`.
fn assert_componentwise(
    p: &Machine,
    m1: &Machine,
    m2: &Machine,
    pick: impl Fn(usize, usize) -> (usize, usize),
) {
    let n2 = m2.state_count();
    assert_eq!(p.space(), &m1.space().product_partition(m2.space()));
    for q in 0..p.state_count() {
        let (q1, q2) = (q / n2, q % n2);
        for s in 0..p.symbol_count() {
            let (x1, x2) = pick(q2, s);
            let (e1, e2, e) = (m1.entry(q1, x1), m2.entry(q2, x2), p.entry(q, s));
            assert_eq!(
                set(p, &e.lower),
                cross(&set(m1, &e1.lower), &set(m2, &e2.lower), n2)
            );
            assert_eq!(
                set(p, &e.upper),
                cross(&set(m1, &e1.upper), &set(m2, &e2.upper), n2)
            );
        }
    }
}

fn pairs() -> Vec<(Machine, Machine)> {
    let mut rng = seeded(77);
    let mut out = vec![(five_state(), five_state())];
    for _ in 0..25 {
        let m1 = random_machine_upto(&mut rng, "m1", "p", 4, 2);
        let m2 = random_machine_upto(&mut rng, "m2", "r", 4, 2);
        out.push((m1, m2));
    }
    out
}

#[test]
fn products_are_componentwise() {
    let mut rng = seeded(78);
    for (m1, m2) in pairs() {
        let nx2 = m2.symbol_count();
        assert_componentwise(&full_direct(&m1, &m2).unwrap(), &m1, &m2, |_, s| {
            (s / nx2, s % nx2)
        });
        let bridge = random_bridge(&mut rng, &m1, &m2, 3);
        assert_componentwise(
            &general_direct(&m1, &m2, &bridge).unwrap(),
            &m1,
            &m2,
            |_, s| bridge.decode(s),
        );
        let w = random_wiring(&mut rng, &m1, &m2);
        assert_componentwise(&cascade(&m1, &m2, &w).unwrap(), &m1, &m2, |q2, s| {
            (w.apply(q2, s), s)
        });
        if m2.state_count() <= 3 {
            let (q2n, nx1) = (m2.state_count(), m1.symbol_count());
            assert_componentwise(&wreath(&m1, &m2).unwrap(), &m1, &m2, |q2, s| {
                (
                    FunctionSymbol::from_index(s / nx2, q2n, nx1).apply(q2),
                    s % nx2,
                )
            });
        }
        if m1.alphabet() == m2.alphabet() {
            assert_componentwise(&restricted_direct(&m1, &m2).unwrap(), &m1, &m2, |_, s| {
                (s, s)
            });
        }
    }
}

#[test]
fn bridges_reduce_to_direct_products() {
    for (m1, m2) in pairs() {
        let full = full_direct(&m1, &m2).unwrap();
        let general = general_direct(&m1, &m2, &InputBridge::identity(&m1, &m2)).unwrap();
        assert_eq!(general.table(), full.table());
        assert_eq!(general.alphabet(), full.alphabet());
        if m1.alphabet() == m2.alphabet() {
            let restricted = restricted_direct(&m1, &m2).unwrap();
            let general =
                general_direct(&m1, &m2, &InputBridge::diagonal(&m1, &m2).unwrap()).unwrap();
            assert_eq!(general.table(), restricted.table());
        }
    }
}

#[test]
fn products_of_realizable_machines_are_realizable() {
    let mut rng = seeded(79);
    for (m1, m2) in pairs().into_iter().skip(1) {
        let w = random_wiring(&mut rng, &m1, &m2);
        let b = random_bridge(&mut rng, &m1, &m2, 2);
        let mut products = vec![
            full_direct(&m1, &m2).unwrap(),
            general_direct(&m1, &m2, &b).unwrap(),
            cascade(&m1, &m2, &w).unwrap(),
            wreath(&m1, &m2).unwrap(),
        ];
        if m1.alphabet() == m2.alphabet() {
            products.push(restricted_direct(&m1, &m2).unwrap());
        }
        for p in products {
            assert!(p.validate_strict().is_empty(), "{}", p.name());
        }
    }
}

#[test]
fn products_round_trip_through_text() {
    let mut rng = seeded(80);
    for (m1, m2) in pairs().into_iter().take(6) {
        let w = random_wiring(&mut rng, &m1, &m2);
        for p in [
            full_direct(&m1, &m2).unwrap(),
            cascade(&m1, &m2, &w).unwrap(),
        ] {
            let text = serialize_machine(&p);
            assert_eq!(parse_machine(&text).unwrap(), p);
        }
    }
    let m = five_state();
    let p = full_direct(&m, &m).unwrap();
    assert_eq!(p.space().state_name(1), "(q1,q2)");
    assert_eq!(
        parse_machine(&serialize_machine(&p))
            .unwrap()
            .state_index("(q1,q2)")
            .unwrap(),
        1
    );
}

fn element(states: usize, outputs: usize) -> impl Strategy<Value = WreathElement> {
    let word = move || proptest::collection::vec(0..outputs, 0..3).prop_map(Word);
    (proptest::collection::vec(word(), states), word())
        .prop_map(|(outputs, tail)| WreathElement { outputs, tail })
}

proptest! {
    #[test]
    fn wreath_inputs_form_a_monoid(a in element(2, 2), b in element(2, 2), c in element(2, 2)) {
        let id = WreathElement::identity(2);
        prop_assert_eq!(compose_wreath_inputs(&a, &id).unwrap(), a.clone());
        prop_assert_eq!(compose_wreath_inputs(&id, &a).unwrap(), a.clone());
        let left = compose_wreath_inputs(&compose_wreath_inputs(&a, &b).unwrap(), &c).unwrap();
        let right = compose_wreath_inputs(&a, &compose_wreath_inputs(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn function_symbol_index_round_trips(states in 1usize..5, outputs in 1usize..4, seed in any::<u64>()) {
        let total = outputs.pow(states as u32);
        let idx = (seed % total as u64) as usize;
        let f = FunctionSymbol::from_index(idx, states, outputs);
        prop_assert_eq!(f.index(outputs), idx);
    }

    #[test]
    fn neutral_factor_leaves_entries_alone(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let m = random_machine(&mut rng, "m", "s", 3, 2);
        let one = parse_machine("machine one\nstates p\nblock p\ninputs u\ntrans p u lower { p } upper { p }\n").unwrap();
        let p = full_direct(&m, &one).unwrap();
        for q in 0..m.state_count() {
            for a in 0..m.symbol_count() {
                prop_assert_eq!(set(&p, &p.entry(q, a).lower), set(&m, &m.entry(q, a).lower));
                prop_assert_eq!(set(&p, &p.entry(q, a).upper), set(&m, &m.entry(q, a).upper));
            }
        }
    }
}
