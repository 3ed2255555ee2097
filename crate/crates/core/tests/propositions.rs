use rfsm::morphism::DEFAULT_DEPTH;
use rfsm::propositions::{
    lift_covering, run_lift_trials, run_trials, Claim, ProductKind, Side, WitnessMaps,
};
use rfsm::random::{inflate, random_machine, seeded};
use rfsm::search_coverings;

#[test]
fn witnesses_hold_on_random_machines() {
    let claims = [
        Claim::RestrictedInFull,
        Claim::WreathExchange,
        Claim::CascadeInWreath,
        Claim::Associativity(ProductKind::Full),
        Claim::Associativity(ProductKind::Restricted),
        Claim::Associativity(ProductKind::Wreath),
        Claim::Associativity(ProductKind::Cascade),
    ];
    for (i, claim) in claims.into_iter().enumerate() {
        let s = run_trials(claim, 100 + i as u64, 10, DEFAULT_DEPTH).unwrap();
        assert_eq!(s.holds, 10, "{claim}: {}", s.failures[0]);
    }
}

#[test]
fn well_posed_lifts_hold() {
    for kind in ProductKind::ALL {
        for side in [Side::Left, Side::Right] {
            let s = run_lift_trials(kind, side, 7, 15, DEFAULT_DEPTH, true).unwrap();
            assert!(s.failures.is_empty(), "{}", s.failures[0]);
            assert!(s.trials >= 10);
        }
    }
}

#[test]
fn restricted_lift_needs_identity_input_map() {
    // Search for a covering whose ξ swaps the letters and check that the
    // restricted lift through some third factor can fail.
    let mut rng = seeded(3);
    let mut failed = 0;
    for _ in 0..200 {
        let m1 = random_machine(&mut rng, "m1", "p", 2, 2);
        let (m2, _) = inflate(&mut rng, &m1, false);
        let m3 = random_machine(&mut rng, "m3", "s", 2, 2);
        for pair in search_coverings(&m1, &m2, DEFAULT_DEPTH, 1 << 20).unwrap() {
            if pair.input_map == [0, 1] {
                continue;
            }
            let r = lift_covering(
                ProductKind::Restricted,
                Side::Left,
                &pair,
                &m1,
                &m2,
                &m3,
                None,
                DEFAULT_DEPTH,
            )
            .unwrap();
            failed += usize::from(!r.holds());
        }
    }
    assert!(failed > 0);
}

#[test]
fn lifted_maps_have_product_shapes() {
    let mut rng = seeded(9);
    for kind in ProductKind::ALL {
        for side in [Side::Left, Side::Right] {
            let Some(r) =
                rfsm::propositions::lift_trial(&mut rng, kind, side, DEFAULT_DEPTH, true).unwrap()
            else {
                continue;
            };
            let WitnessMaps::Covering(pair) = &r.maps else {
                panic!("lift produced an isomorphism");
            };
            assert_eq!(pair.state_map.len(), r.covering.state_count());
            assert_eq!(pair.input_map.len(), r.covered.symbol_count());
            assert!(pair.state_map.iter().all(|&q| q < r.covered.state_count()));
        }
    }
}
