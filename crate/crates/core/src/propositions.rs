//! Constructive witnesses for the covering and isomorphism relations between
//! products. Each builder constructs both product machines and the maps
//! between them, then runs the checker on the result.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::machine::{Machine, SymbolId};
use crate::morphism::{
    check_covering, check_isomorphism, search_coverings, CoveringPair, MorphismPair, Verdict,
    DEFAULT_SEARCH_BUDGET,
};
use crate::products::{
    cascade, check_same_alphabet, decode_wreath_symbol, full_direct, restricted_direct, wreath,
    wreath_symbol, CascadeWiring, FunctionSymbol,
};
use crate::random::{inflate, pick, random_machine, random_machine_upto, random_wiring, seeded};
use crate::rough::StateId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProductKind {
    Full,
    Restricted,
    Wreath,
    Cascade,
}

impl ProductKind {
    pub const ALL: [ProductKind; 4] = [Self::Full, Self::Restricted, Self::Wreath, Self::Cascade];
}

impl fmt::Display for ProductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Full => "full",
            Self::Restricted => "restricted",
            Self::Wreath => "wreath",
            Self::Cascade => "cascade",
        })
    }
}

/// Which factor of a product the covered machine occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Left => "left",
            Self::Right => "right",
        })
    }
}

/// The relation a report witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Claim {
    /// `M1 ∧ M2 ⪯ M1 × M2`.
    RestrictedInFull,
    /// `(M1 ∘ M2) × (M3 ∘ M4) ⪯ (M1 × M3) ∘ (M2 × M4)`.
    WreathExchange,
    /// `M1 ω M2 ⪯ M1 ∘ M2`.
    CascadeInWreath,
    /// Regrouping a triple product is an isomorphism.
    Associativity(ProductKind),
    /// A covering `M1 ⪯ M2` lifts through a product with `M3`.
    Lift(ProductKind, Side),
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::RestrictedInFull => f.write_str("restricted-in-full"),
            Self::WreathExchange => f.write_str("wreath-exchange"),
            Self::CascadeInWreath => f.write_str("cascade-in-wreath"),
            Self::Associativity(k) => write!(f, "associativity/{k}"),
            Self::Lift(k, s) => write!(f, "lift/{k}/{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessMaps {
    Covering(CoveringPair),
    Isomorphism(MorphismPair),
}

/// A constructed witness: `covered` is related to `covering` by `maps`.
/// For isomorphisms the maps run from `covered` to `covering`.
#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub claim: Claim,
    pub covered: Machine,
    pub covering: Machine,
    pub maps: WitnessMaps,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl WitnessReport {
    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }
}

impl fmt::Display for WitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.maps {
            WitnessMaps::Covering(_) => "⪯",
            WitnessMaps::Isomorphism(_) => "≅",
        };
        write!(
            f,
            "{}: {} {rel} {}: {}",
            self.claim,
            self.covered.name(),
            self.covering.name(),
            self.verdict
        )?;
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        Ok(())
    }
}

fn covering_report(
    claim: Claim,
    covered: Machine,
    covering: Machine,
    pair: CoveringPair,
    depth: usize,
) -> Result<WitnessReport> {
    let verdict = check_covering(&covered, &covering, &pair, depth)?;
    Ok(WitnessReport {
        claim,
        covered,
        covering,
        maps: WitnessMaps::Covering(pair),
        verdict,
        notes: Vec::new(),
    })
}

fn isomorphism_report(
    claim: Claim,
    left: Machine,
    right: Machine,
    pair: MorphismPair,
    depth: usize,
) -> Result<WitnessReport> {
    let verdict = check_isomorphism(&left, &right, &pair, depth)?;
    Ok(WitnessReport {
        claim,
        covered: left,
        covering: right,
        maps: WitnessMaps::Isomorphism(pair),
        verdict,
        notes: Vec::new(),
    })
}

/// `η` = identity on `Q1 × Q2`, `ξ(x) = (x, x)`.
pub fn witness_restricted_in_full(
    m1: &Machine,
    m2: &Machine,
    depth: usize,
) -> Result<WitnessReport> {
    let covered = restricted_direct(m1, m2)?;
    let covering = full_direct(m1, m2)?;
    let nx = m1.symbol_count();
    let pair = CoveringPair::new(
        (0..covered.state_count()).collect(),
        (0..nx).map(|x| x * nx + x).collect(),
    );
    covering_report(Claim::RestrictedInFull, covered, covering, pair, depth)
}

/// `η` = identity, `ξ(x2) = (f, x2)` with `f(q2) = ω(q2, x2)`.
pub fn witness_cascade_in_wreath(
    m1: &Machine,
    m2: &Machine,
    w: &CascadeWiring,
    depth: usize,
) -> Result<WitnessReport> {
    let covering = wreath(m1, m2)?;
    let covered = cascade(m1, m2, w)?;
    let xi = (0..m2.symbol_count())
        .map(|x2| {
            let f = FunctionSymbol((0..m2.state_count()).map(|q2| w.apply(q2, x2)).collect());
            wreath_symbol(m1, m2, &f, x2)
        })
        .collect();
    let pair = CoveringPair::new((0..covered.state_count()).collect(), xi);
    covering_report(Claim::CascadeInWreath, covered, covering, pair, depth)
}

/// Covers `(M1 ∘ M2) × (M3 ∘ M4)` by `(M1 × M3) ∘ (M2 × M4)` with
/// `η((q1,q3),(q2,q4)) = ((q1,q2),(q3,q4))` and
/// `ξ((f,x2),(g,x4)) = (f×g, (x2,x4))`.
pub fn witness_wreath_exchange(
    m1: &Machine,
    m2: &Machine,
    m3: &Machine,
    m4: &Machine,
    depth: usize,
) -> Result<WitnessReport> {
    let w12 = wreath(m1, m2)?;
    let w34 = wreath(m3, m4)?;
    let covered = full_direct(&w12, &w34)?;
    let f13 = full_direct(m1, m3)?;
    let f24 = full_direct(m2, m4)?;
    let covering = wreath(&f13, &f24)?;

    let (n1, n2, n3, n4) = (
        m1.state_count(),
        m2.state_count(),
        m3.state_count(),
        m4.state_count(),
    );
    let eta = (0..covering.state_count())
        .map(|s| {
            let (s13, s24) = (s / (n2 * n4), s % (n2 * n4));
            let (q1, q3) = (s13 / n3, s13 % n3);
            let (q2, q4) = (s24 / n4, s24 % n4);
            (q1 * n2 + q2) * (n3 * n4) + q3 * n4 + q4
        })
        .collect();
    debug_assert_eq!(covered.state_count(), n1 * n2 * n3 * n4);

    let (nx3, nx4) = (m3.symbol_count(), m4.symbol_count());
    let ny34 = w34.symbol_count();
    let xi = (0..covered.symbol_count())
        .map(|s| {
            let (f, x2) = decode_wreath_symbol(m1, m2, s / ny34);
            let (g, x4) = decode_wreath_symbol(m3, m4, s % ny34);
            let h = FunctionSymbol(
                (0..n2 * n4)
                    .map(|q24| f.apply(q24 / n4) * nx3 + g.apply(q24 % n4))
                    .collect(),
            );
            wreath_symbol(&f13, &f24, &h, x2 * nx4 + x4)
        })
        .collect();
    covering_report(
        Claim::WreathExchange,
        covered,
        covering,
        CoveringPair::new(eta, xi),
        depth,
    )
}

/// Checks that regrouping `((q1,q2),q3) ↦ (q1,(q2,q3))` with the matching
/// input regrouping is an isomorphism between the two bracketings. For
/// cascades `wirings = (ω1, ω2)` with `ω1: Q2 × X2 → X1` and
/// `ω2: Q3 × X3 → X2`; the right bracketing uses `ω4 = ω2` and
/// `ω3((q2,q3), x3) = ω1(q2, ω2(q3, x3))`.
pub fn assoc_isomorphism(
    kind: ProductKind,
    m1: &Machine,
    m2: &Machine,
    m3: &Machine,
    wirings: Option<(&CascadeWiring, &CascadeWiring)>,
    depth: usize,
) -> Result<WitnessReport> {
    let (n2, n3) = (m2.state_count(), m3.state_count());
    // ((q1,q2),q3) and (q1,(q2,q3)) share the same row-major index.
    let states = |left: &Machine| (0..left.state_count()).collect::<Vec<StateId>>();
    let claim = Claim::Associativity(kind);
    match kind {
        ProductKind::Full => {
            let left = full_direct(&full_direct(m1, m2)?, m3)?;
            let right = full_direct(m1, &full_direct(m2, m3)?)?;
            let pair = MorphismPair::new(states(&left), (0..left.symbol_count()).collect());
            isomorphism_report(claim, left, right, pair, depth)
        }
        ProductKind::Restricted => {
            check_same_alphabet(m1, m2)?;
            check_same_alphabet(m2, m3)?;
            let left = restricted_direct(&restricted_direct(m1, m2)?, m3)?;
            let right = restricted_direct(m1, &restricted_direct(m2, m3)?)?;
            let pair = MorphismPair::new(states(&left), (0..left.symbol_count()).collect());
            isomorphism_report(claim, left, right, pair, depth)
        }
        ProductKind::Wreath => {
            let w12 = wreath(m1, m2)?;
            let w23 = wreath(m2, m3)?;
            let left = wreath(&w12, m3)?;
            let right = wreath(m1, &w23)?;
            let g = (0..left.symbol_count())
                .map(|s| {
                    let (big_f, x3) = decode_wreath_symbol(&w12, m3, s);
                    let mut h = vec![0; n2 * n3];
                    let mut k = vec![0; n3];
                    for q3 in 0..n3 {
                        let (f_q3, y_q3) = decode_wreath_symbol(m1, m2, big_f.apply(q3));
                        k[q3] = y_q3;
                        for q2 in 0..n2 {
                            h[q2 * n3 + q3] = f_q3.apply(q2);
                        }
                    }
                    let inner = wreath_symbol(m2, m3, &FunctionSymbol(k), x3);
                    wreath_symbol(m1, &w23, &FunctionSymbol(h), inner)
                })
                .collect();
            let pair = MorphismPair::new(states(&left), g);
            isomorphism_report(claim, left, right, pair, depth)
        }
        ProductKind::Cascade => {
            let (w1, w2) = wirings.ok_or_else(|| {
                Error::PreconditionFailed("cascade associativity needs two wirings".into())
            })?;
            let c12 = cascade(m1, m2, w1)?;
            let left = cascade(
                &c12,
                m3,
                &CascadeWiring::new(&c12, m3, w2.as_slice().to_vec())?,
            )?;
            let w4 = CascadeWiring::new(m2, m3, w2.as_slice().to_vec())?;
            let c23 = cascade(m2, m3, &w4)?;
            let w3 = CascadeWiring::from_fn(m1, &c23, |q23, x3| {
                w1.apply(q23 / n3, w2.apply(q23 % n3, x3))
            })?;
            let right = cascade(m1, &c23, &w3)?;
            let pair = MorphismPair::new(states(&left), (0..left.symbol_count()).collect());
            isomorphism_report(claim, left, right, pair, depth)
        }
    }
}

fn lift_states(side: Side, eta: &[StateId], n1: usize, n2: usize, n3: usize) -> Vec<StateId> {
    match side {
        Side::Left => (0..n2 * n3).map(|s| eta[s / n3] * n3 + s % n3).collect(),
        Side::Right => (0..n3 * n2).map(|s| (s / n2) * n1 + eta[s % n2]).collect(),
    }
}

/// `ω2(q2, ξ(x1)) = ω1(η(q2), x1)`; first `x1` wins on conflicts and
/// symbols outside the image of `ξ` get `default`.
fn pull_back_wiring(
    pair: &CoveringPair,
    m1: &Machine,
    m2: &Machine,
    m3: &Machine,
    w1: &CascadeWiring,
    default: SymbolId,
    notes: &mut Vec<String>,
) -> Result<CascadeWiring> {
    let nx2 = m2.symbol_count();
    let mut omega: Vec<Option<SymbolId>> = vec![None; m2.state_count() * nx2];
    for q2 in 0..m2.state_count() {
        for x1 in 0..m1.symbol_count() {
            let want = w1.apply(pair.state_map[q2], x1);
            let slot = &mut omega[q2 * nx2 + pair.input_map[x1]];
            match *slot {
                None => *slot = Some(want),
                Some(have) if have != want => notes.push(format!(
                    "ω2({}, {}) is ambiguous: {} kept, {} dropped",
                    m2.space().state_name(q2),
                    m2.symbol_name(pair.input_map[x1]),
                    m3.symbol_name(have),
                    m3.symbol_name(want)
                )),
                Some(_) => {}
            }
        }
    }
    let defaulted = omega.iter().filter(|o| o.is_none()).count();
    if defaulted > 0 {
        notes.push(format!(
            "ω2 defaults to {} on {defaulted} pair(s) outside the image of ξ",
            m3.symbol_name(default)
        ));
    }
    CascadeWiring::new(
        m3,
        m2,
        omega.into_iter().map(|o| o.unwrap_or(default)).collect(),
    )
}

/// Lifts a covering `(η, ξ)` of `m1` by `m2` through a product with `m3`
/// and checks the lifted pair at the same `depth`.
///
/// * full: `η(q2,q3) = (η q2, q3)`, `ξ(x1,x3) = (ξ x1, x3)`, mirrored on the right.
/// * restricted: as full on states, `ξ` unchanged; needs `X1 = X2 = X3`.
/// * wreath, left: `ξ(f, x3) = (ξ∘f, x3)`; right: `ξ(f, x1) = (f∘η, ξ x1)`.
/// * cascade, left: `wiring = ω1: Q3 × X3 → X1`, `ω2 = ξ∘ω1`, `ξ` the identity on `X3`;
///   right: `wiring = ω1: Q1 × X1 → X3`, `ω2(q2, ξ x1) = ω1(η q2, x1)`,
///   remaining pairs default to the first symbol of `X3`.
#[allow(clippy::too_many_arguments)]
pub fn lift_covering(
    kind: ProductKind,
    side: Side,
    pair: &CoveringPair,
    m1: &Machine,
    m2: &Machine,
    m3: &Machine,
    wiring: Option<&CascadeWiring>,
    depth: usize,
) -> Result<WitnessReport> {
    if let Verdict::Fails(c) = check_covering(m1, m2, pair, depth)? {
        return Err(Error::PreconditionFailed(format!("not a covering: {c}")));
    }
    let (n1, n2, n3) = (m1.state_count(), m2.state_count(), m3.state_count());
    let (nx1, nx2, nx3) = (m1.symbol_count(), m2.symbol_count(), m3.symbol_count());
    let eta = lift_states(side, &pair.state_map, n1, n2, n3);
    let xi = &pair.input_map;
    let claim = Claim::Lift(kind, side);
    let needs_wiring = || Error::PreconditionFailed("cascade lift needs a wiring".into());

    match (kind, side) {
        (ProductKind::Full, Side::Left) => {
            let g = (0..nx1 * nx3)
                .map(|s| xi[s / nx3] * nx3 + s % nx3)
                .collect();
            covering_report(
                claim,
                full_direct(m1, m3)?,
                full_direct(m2, m3)?,
                CoveringPair::new(eta, g),
                depth,
            )
        }
        (ProductKind::Full, Side::Right) => {
            let g = (0..nx3 * nx1)
                .map(|s| (s / nx1) * nx2 + xi[s % nx1])
                .collect();
            covering_report(
                claim,
                full_direct(m3, m1)?,
                full_direct(m3, m2)?,
                CoveringPair::new(eta, g),
                depth,
            )
        }
        (ProductKind::Restricted, _) => {
            check_same_alphabet(m1, m2)?;
            check_same_alphabet(m1, m3)?;
            let (covered, covering) = match side {
                Side::Left => (restricted_direct(m1, m3)?, restricted_direct(m2, m3)?),
                Side::Right => (restricted_direct(m3, m1)?, restricted_direct(m3, m2)?),
            };
            covering_report(
                claim,
                covered,
                covering,
                CoveringPair::new(eta, xi.clone()),
                depth,
            )
        }
        (ProductKind::Wreath, Side::Left) => {
            let covered = wreath(m1, m3)?;
            let covering = wreath(m2, m3)?;
            let g = (0..covered.symbol_count())
                .map(|s| {
                    let (f, x3) = decode_wreath_symbol(m1, m3, s);
                    let composed = FunctionSymbol(f.0.iter().map(|&x1| xi[x1]).collect());
                    wreath_symbol(m2, m3, &composed, x3)
                })
                .collect();
            covering_report(claim, covered, covering, CoveringPair::new(eta, g), depth)
        }
        (ProductKind::Wreath, Side::Right) => {
            let covered = wreath(m3, m1)?;
            let covering = wreath(m3, m2)?;
            let g = (0..covered.symbol_count())
                .map(|s| {
                    let (f, x1) = decode_wreath_symbol(m3, m1, s);
                    let pulled =
                        FunctionSymbol(pair.state_map.iter().map(|&q1| f.apply(q1)).collect());
                    wreath_symbol(m3, m2, &pulled, xi[x1])
                })
                .collect();
            covering_report(claim, covered, covering, CoveringPair::new(eta, g), depth)
        }
        (ProductKind::Cascade, Side::Left) => {
            let w1 = wiring.ok_or_else(needs_wiring)?;
            let w2 = CascadeWiring::from_fn(m2, m3, |q3, x3| xi[w1.apply(q3, x3)])?;
            let covered = cascade(m1, m3, w1)?;
            let covering = cascade(m2, m3, &w2)?;
            covering_report(
                claim,
                covered,
                covering,
                CoveringPair::new(eta, (0..nx3).collect()),
                depth,
            )
        }
        (ProductKind::Cascade, Side::Right) => {
            let w1 = wiring.ok_or_else(needs_wiring)?;
            let mut notes = Vec::new();
            let w2 = pull_back_wiring(pair, m1, m2, m3, w1, 0, &mut notes)?;
            let covered = cascade(m3, m1, w1)?;
            let covering = cascade(m3, m2, &w2)?;
            let lifted = CoveringPair::new(eta, xi.clone());
            let mut report = covering_report(claim, covered, covering, lifted.clone(), depth)?;
            if nx3 > 1 && !w2.as_slice().is_empty() {
                let mut scratch = Vec::new();
                let alt = pull_back_wiring(pair, m1, m2, m3, w1, nx3 - 1, &mut scratch)?;
                if alt != w2 {
                    let other = cascade(m3, m2, &alt)?;
                    let same = check_covering(&report.covered, &other, &lifted, depth)?.holds()
                        == report.holds();
                    notes.push(if same {
                        "verdict unchanged under the alternative default".to_owned()
                    } else {
                        "verdict depends on the default".to_owned()
                    });
                }
            }
            report.notes = notes;
            Ok(report)
        }
    }
}

/// Summary of a randomized run.
#[derive(Debug, Clone, Default)]
pub struct TrialSummary {
    pub trials: usize,
    pub holds: usize,
    pub failures: Vec<WitnessReport>,
    /// Trials that could not be set up, such as no covering being found.
    pub skipped: usize,
}

impl TrialSummary {
    fn record(&mut self, r: WitnessReport) {
        self.trials += 1;
        if r.holds() {
            self.holds += 1;
        } else {
            self.failures.push(r);
        }
    }
}

/// Random machines used by [`run_trials`]: at most four states for the two
/// factor witnesses, at most two states for the quadruple and triple
/// products that involve wreaths.
pub fn run_trials(claim: Claim, seed: u64, trials: usize, depth: usize) -> Result<TrialSummary> {
    let mut rng = seeded(seed);
    let mut out = TrialSummary::default();
    for _ in 0..trials {
        match claim {
            Claim::RestrictedInFull => {
                let nx = rng.gen_range(1..=2);
                let (q1, q2) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
                let m1 = random_machine(&mut rng, "m1", "p", q1, nx);
                let m2 = random_machine(&mut rng, "m2", "r", q2, nx);
                out.record(witness_restricted_in_full(&m1, &m2, depth)?);
            }
            Claim::CascadeInWreath => {
                let m1 = random_machine_upto(&mut rng, "m1", "p", 4, 2);
                let m2 = random_machine_upto(&mut rng, "m2", "r", 4, 2);
                let w = random_wiring(&mut rng, &m1, &m2);
                out.record(witness_cascade_in_wreath(&m1, &m2, &w, depth)?);
            }
            Claim::WreathExchange => {
                let ms: Vec<Machine> = ["m1", "m2", "m3", "m4"]
                    .iter()
                    .zip(["p", "r", "s", "t"])
                    .map(|(n, p)| random_machine_upto(&mut rng, n, p, 2, 2))
                    .collect();
                out.record(witness_wreath_exchange(
                    &ms[0], &ms[1], &ms[2], &ms[3], depth,
                )?);
            }
            Claim::Associativity(kind) => {
                let (max_q, shared) = match kind {
                    ProductKind::Full => (3, false),
                    ProductKind::Restricted => (3, true),
                    ProductKind::Wreath | ProductKind::Cascade => (2, false),
                };
                let nx = rng.gen_range(1..=2);
                let gen = |name: &str, prefix: &str, rng: &mut crate::random::TestRng| {
                    let q = rng.gen_range(1..=max_q);
                    let x = if shared { nx } else { rng.gen_range(1..=2) };
                    random_machine(rng, name, prefix, q, x)
                };
                let m1 = gen("m1", "p", &mut rng);
                let m2 = gen("m2", "r", &mut rng);
                let m3 = gen("m3", "s", &mut rng);
                let report = if kind == ProductKind::Cascade {
                    let w1 = random_wiring(&mut rng, &m1, &m2);
                    let w2 = random_wiring(&mut rng, &m2, &m3);
                    assoc_isomorphism(kind, &m1, &m2, &m3, Some((&w1, &w2)), depth)?
                } else {
                    assoc_isomorphism(kind, &m1, &m2, &m3, None, depth)?
                };
                out.record(report);
            }
            Claim::Lift(kind, side) => match lift_trial(&mut rng, kind, side, depth, false)? {
                Some(r) => out.record(r),
                None => out.skipped += 1,
            },
        }
    }
    Ok(out)
}

/// Lift trials with `well_posed` as in [`lift_trial`].
pub fn run_lift_trials(
    kind: ProductKind,
    side: Side,
    seed: u64,
    trials: usize,
    depth: usize,
    well_posed: bool,
) -> Result<TrialSummary> {
    let mut rng = seeded(seed);
    let mut out = TrialSummary::default();
    for _ in 0..trials {
        match lift_trial(&mut rng, kind, side, depth, well_posed)? {
            Some(r) => out.record(r),
            None => out.skipped += 1,
        }
    }
    Ok(out)
}

/// One lift trial: a 2-state machine, a 3-state machine covering it, a
/// covering between them found by search, and a random third factor.
///
/// With `well_posed`, restricted lifts only draw coverings whose `ξ` is the
/// identity, and right cascade lifts draw `ω1(q1, x1) = h(q1, ξ x1)` so that
/// the pulled back wiring has no ambiguous pairs. Returns `None` when no
/// suitable covering is found.
pub fn lift_trial<R: Rng>(
    rng: &mut R,
    kind: ProductKind,
    side: Side,
    depth: usize,
    well_posed: bool,
) -> Result<Option<WitnessReport>> {
    let shared = kind == ProductKind::Restricted;
    let nx = rng.gen_range(1..=2);
    let m1 = random_machine(rng, "m1", "p", 2, nx);
    let extra = !shared && rng.gen_bool(0.5);
    let (m2, _) = inflate(rng, &m1, extra);
    let m2 = m2.with_name("m2");
    let mut found = search_coverings(&m1, &m2, depth, DEFAULT_SEARCH_BUDGET)?;
    if well_posed && shared {
        found.retain(|p| p.input_map.iter().enumerate().all(|(i, &x)| i == x));
    }
    let Some(pair) = pick(rng, &found).cloned() else {
        return Ok(None);
    };
    let m3 = if shared {
        let q3 = rng.gen_range(1..=2);
        random_machine(rng, "m3", "s", q3, nx)
    } else {
        random_machine_upto(rng, "m3", "s", 2, 2)
    };
    let wiring = match (kind, side) {
        (ProductKind::Cascade, Side::Left) => Some(random_wiring(rng, &m1, &m3)),
        (ProductKind::Cascade, Side::Right) if well_posed => {
            let h = random_wiring(rng, &m3, &m2);
            let m1_rows: Vec<StateId> = (0..m1.state_count())
                .map(|q1| {
                    pair.state_map
                        .iter()
                        .position(|&q| q == q1)
                        .expect("η is onto")
                })
                .collect();
            Some(CascadeWiring::from_fn(&m3, &m1, |q1, x1| {
                h.apply(m1_rows[q1], pair.input_map[x1])
            })?)
        }
        (ProductKind::Cascade, Side::Right) => Some(random_wiring(rng, &m3, &m1)),
        _ => None,
    };
    lift_covering(kind, side, &pair, &m1, &m2, &m3, wiring.as_ref(), depth).map(Some)
}
