//! Product constructions.
//!
//! Every product lives on `Q1 × Q2` with the product partition. An entry is
//! the componentwise product of one transition of each factor: if the
//! factors give `(L1, U1)` and `(L2, U2)`, the product entry is
//! `(L1 × L2, U1 × U2)`. The products differ only in their alphabet and in
//! how a product symbol selects the pair of factor symbols.
//!
//! | product      | alphabet            | factor inputs at `((q1,q2), s)` |
//! |--------------|---------------------|---------------------------------|
//! | full direct  | `X1 × X2`           | `s = (x1, x2)`                  |
//! | restricted   | `X` (shared)        | `(s, s)`                        |
//! | general      | bridge carrier      | `decode(s)`                     |
//! | wreath       | `X1^Q2 × X2`        | `s = (f, x)` gives `(f(q2), x)` |
//! | cascade      | `X2`                | `(ω(q2, s), s)`                 |

use crate::error::{Error, Result};
use crate::machine::{Machine, SymbolId, Word};
use crate::rough::{pair_name, ApproximationSpace, DefinableSet, RoughSet, StateId};

pub const DEFAULT_WREATH_BUDGET: usize = 4096;

/// A total map `Q2 → X1`, one wreath input component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionSymbol(pub Vec<SymbolId>);

impl FunctionSymbol {
    pub fn constant(states: usize, x: SymbolId) -> Self {
        Self(vec![x; states])
    }

    pub fn apply(&self, q2: StateId) -> SymbolId {
        self.0[q2]
    }

    /// Position in the canonical enumeration: outputs read as digits in base
    /// `outputs`, first state most significant.
    pub fn index(&self, outputs: usize) -> usize {
        self.0.iter().fold(0, |acc, &x| acc * outputs + x)
    }

    pub fn from_index(mut index: usize, states: usize, outputs: usize) -> Self {
        let mut v = vec![0; states];
        for slot in v.iter_mut().rev() {
            *slot = index % outputs;
            index /= outputs;
        }
        Self(v)
    }

    /// `f[<out1>,<out2>,...]` with outputs in state order.
    pub fn name(&self, m1: &Machine) -> String {
        let outs: Vec<&str> = self.0.iter().map(|&x| m1.symbol_name(x)).collect();
        format!("f[{}]", outs.join(","))
    }
}

/// The input carrier of a general direct product and its decoding into
/// factor symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputBridge {
    carrier: Vec<String>,
    decode: Vec<(SymbolId, SymbolId)>,
}

impl InputBridge {
    pub fn new(
        m1: &Machine,
        m2: &Machine,
        carrier: Vec<String>,
        decode: Vec<(SymbolId, SymbolId)>,
    ) -> Result<Self> {
        if carrier.is_empty() || carrier.len() != decode.len() {
            return Err(Error::Totality(format!(
                "bridge decodes {} of {} carrier symbols",
                decode.len(),
                carrier.len()
            )));
        }
        if decode
            .iter()
            .any(|&(x1, x2)| x1 >= m1.symbol_count() || x2 >= m2.symbol_count())
        {
            return Err(Error::Totality(
                "bridge decodes to an unknown symbol".into(),
            ));
        }
        Ok(Self { carrier, decode })
    }

    /// Carrier `X1 × X2`, decoding each pair to itself.
    pub fn identity(m1: &Machine, m2: &Machine) -> Self {
        let mut carrier = Vec::new();
        let mut decode = Vec::new();
        for x1 in 0..m1.symbol_count() {
            for x2 in 0..m2.symbol_count() {
                carrier.push(pair_name(m1.symbol_name(x1), m2.symbol_name(x2)));
                decode.push((x1, x2));
            }
        }
        Self { carrier, decode }
    }

    /// Carrier `X`, decoding `x ↦ (x, x)`. Requires equal alphabets.
    pub fn diagonal(m1: &Machine, m2: &Machine) -> Result<Self> {
        check_same_alphabet(m1, m2)?;
        Ok(Self {
            carrier: m1.alphabet().to_vec(),
            decode: (0..m1.symbol_count()).map(|x| (x, x)).collect(),
        })
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn decode(&self, s: SymbolId) -> (SymbolId, SymbolId) {
        self.decode[s]
    }
}

/// `ω: Q2 × X2 → X1`, stored row-major by `q2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CascadeWiring {
    omega: Vec<SymbolId>,
    inputs: usize,
}

impl CascadeWiring {
    pub fn new(m1: &Machine, m2: &Machine, omega: Vec<SymbolId>) -> Result<Self> {
        let expected = m2.state_count() * m2.symbol_count();
        if omega.len() != expected {
            return Err(Error::Totality(format!(
                "wiring has {} entries, expected {expected}",
                omega.len()
            )));
        }
        if omega.iter().any(|&x| x >= m1.symbol_count()) {
            return Err(Error::Totality("wiring maps to an unknown symbol".into()));
        }
        Ok(Self {
            omega,
            inputs: m2.symbol_count(),
        })
    }

    pub fn from_fn(
        m1: &Machine,
        m2: &Machine,
        f: impl Fn(StateId, SymbolId) -> SymbolId,
    ) -> Result<Self> {
        let nx = m2.symbol_count();
        let omega = (0..m2.state_count() * nx)
            .map(|i| f(i / nx, i % nx))
            .collect();
        Self::new(m1, m2, omega)
    }

    /// `ω(q2, x) = x`; requires `X1 = X2`.
    pub fn passthrough(m1: &Machine, m2: &Machine) -> Result<Self> {
        check_same_alphabet(m1, m2)?;
        Self::from_fn(m1, m2, |_, x| x)
    }

    pub fn apply(&self, q2: StateId, x2: SymbolId) -> SymbolId {
        self.omega[q2 * self.inputs + x2]
    }

    pub fn as_slice(&self) -> &[SymbolId] {
        &self.omega
    }
}

pub(crate) fn check_same_alphabet(m1: &Machine, m2: &Machine) -> Result<()> {
    if m1.alphabet() == m2.alphabet() {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch(format!(
            "{{{}}} vs {{{}}}",
            m1.alphabet().join(","),
            m2.alphabet().join(",")
        )))
    }
}

/// `(L1 × L2)` as block ids of the product partition.
fn product_definable(
    space: &ApproximationSpace,
    d1: &DefinableSet,
    d2: &DefinableSet,
) -> DefinableSet {
    let nb2 = d2.universe();
    let ids = d1
        .block_ids()
        .flat_map(|b1| d2.block_ids().map(move |b2| b1 * nb2 + b2))
        .collect::<Vec<_>>();
    DefinableSet::from_blocks(space, ids).expect("product block ids are in range")
}

/// Index of `(q1, q2)` among product states.
pub fn pair_state(m2: &Machine, q1: StateId, q2: StateId) -> StateId {
    q1 * m2.state_count() + q2
}

/// Shared constructor: `pick(q2, s)` selects the factor symbols for product
/// symbol `s` at second-component state `q2`.
fn combine(
    m1: &Machine,
    m2: &Machine,
    name: String,
    alphabet: Vec<String>,
    pick: impl Fn(StateId, SymbolId) -> (SymbolId, SymbolId),
) -> Result<Machine> {
    let space = m1.space().product_partition(m2.space());
    let n2 = m2.state_count();
    let entries = {
        let space = &space;
        move |q: StateId, s: SymbolId| {
            let (q1, q2) = (q / n2, q % n2);
            let (x1, x2) = pick(q2, s);
            let (r1, r2) = (m1.entry(q1, x1), m2.entry(q2, x2));
            RoughSet::new(
                product_definable(space, &r1.lower, &r2.lower),
                product_definable(space, &r1.upper, &r2.upper),
            )
        }
    };
    let nx = alphabet.len();
    let table = (0..space.len() * nx)
        .map(|i| entries(i / nx, i % nx))
        .collect();
    Machine::new(name, space, alphabet, table)
}

pub fn full_direct(m1: &Machine, m2: &Machine) -> Result<Machine> {
    let bridge = InputBridge::identity(m1, m2);
    let name = format!("full({},{})", m1.name(), m2.name());
    combine(m1, m2, name, bridge.carrier.clone(), |_, s| {
        bridge.decode(s)
    })
}

pub fn restricted_direct(m1: &Machine, m2: &Machine) -> Result<Machine> {
    check_same_alphabet(m1, m2)?;
    let name = format!("restricted({},{})", m1.name(), m2.name());
    combine(m1, m2, name, m1.alphabet().to_vec(), |_, s| (s, s))
}

pub fn general_direct(m1: &Machine, m2: &Machine, bridge: &InputBridge) -> Result<Machine> {
    if bridge
        .decode
        .iter()
        .any(|&(x1, x2)| x1 >= m1.symbol_count() || x2 >= m2.symbol_count())
    {
        return Err(Error::Totality("bridge does not fit these machines".into()));
    }
    let name = format!("general({},{})", m1.name(), m2.name());
    combine(m1, m2, name, bridge.carrier.clone(), |_, s| {
        bridge.decode(s)
    })
}

/// `|X1|^|Q2| · |X2|`, or `None` on overflow.
pub fn wreath_alphabet_size(m1: &Machine, m2: &Machine) -> Option<usize> {
    m1.symbol_count()
        .checked_pow(m2.state_count() as u32)?
        .checked_mul(m2.symbol_count())
}

/// Wreath symbol index of `(f, x2)`: function index major, `x2` minor.
pub fn wreath_symbol(m1: &Machine, m2: &Machine, f: &FunctionSymbol, x2: SymbolId) -> SymbolId {
    f.index(m1.symbol_count()) * m2.symbol_count() + x2
}

pub fn decode_wreath_symbol(m1: &Machine, m2: &Machine, s: SymbolId) -> (FunctionSymbol, SymbolId) {
    let nx2 = m2.symbol_count();
    (
        FunctionSymbol::from_index(s / nx2, m2.state_count(), m1.symbol_count()),
        s % nx2,
    )
}

pub fn wreath(m1: &Machine, m2: &Machine) -> Result<Machine> {
    wreath_with_budget(m1, m2, DEFAULT_WREATH_BUDGET)
}

pub fn wreath_with_budget(m1: &Machine, m2: &Machine, budget: usize) -> Result<Machine> {
    let size = match wreath_alphabet_size(m1, m2) {
        Some(n) if n <= budget => n,
        Some(n) => {
            return Err(Error::BudgetExceeded {
                size: n as u128,
                budget: budget as u128,
            })
        }
        None => {
            return Err(Error::BudgetExceeded {
                size: u128::MAX,
                budget: budget as u128,
            })
        }
    };
    let functions: Vec<FunctionSymbol> = (0..size / m2.symbol_count())
        .map(|i| FunctionSymbol::from_index(i, m2.state_count(), m1.symbol_count()))
        .collect();
    let alphabet = functions
        .iter()
        .flat_map(|f| {
            let fname = f.name(m1);
            m2.alphabet().iter().map(move |x| pair_name(&fname, x))
        })
        .collect();
    let nx2 = m2.symbol_count();
    let name = format!("wreath({},{})", m1.name(), m2.name());
    combine(m1, m2, name, alphabet, |q2, s| {
        (functions[s / nx2].apply(q2), s % nx2)
    })
}

pub fn cascade(m1: &Machine, m2: &Machine, wiring: &CascadeWiring) -> Result<Machine> {
    if wiring.omega.len() != m2.state_count() * m2.symbol_count()
        || wiring.inputs != m2.symbol_count()
    {
        return Err(Error::Totality(
            "wiring does not match the second machine".into(),
        ));
    }
    if wiring.omega.iter().any(|&x| x >= m1.symbol_count()) {
        return Err(Error::Totality(
            "wiring maps outside the first alphabet".into(),
        ));
    }
    let name = format!("cascade({},{})", m1.name(), m2.name());
    combine(m1, m2, name, m2.alphabet().to_vec(), |q2, s| {
        (wiring.apply(q2, s), s)
    })
}

/// An element of `(X1*)^Q2 × X2*`: per-state words over `X1` and a word over `X2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WreathElement {
    pub outputs: Vec<Word>,
    pub tail: Word,
}

impl WreathElement {
    /// `(I, e)` with `I(q2) = e` everywhere.
    pub fn identity(states: usize) -> Self {
        Self {
            outputs: vec![Word::empty(); states],
            tail: Word::empty(),
        }
    }

    pub fn from_input(f: &FunctionSymbol, x2: SymbolId) -> Self {
        Self {
            outputs: f.0.iter().map(|&x| Word::letter(x)).collect(),
            tail: Word::letter(x2),
        }
    }

    /// `(f, s) ∗ (g, t) = (fg, st)` with `(fg)(q2) = f(q2) g(q2)`.
    pub fn compose(&self, other: &WreathElement) -> Result<WreathElement> {
        compose_wreath_inputs(self, other)
    }
}

pub fn compose_wreath_inputs(p: &WreathElement, q: &WreathElement) -> Result<WreathElement> {
    if p.outputs.len() != q.outputs.len() {
        return Err(Error::ShapeMismatch(format!(
            "function over {} states composed with one over {}",
            p.outputs.len(),
            q.outputs.len()
        )));
    }
    Ok(WreathElement {
        outputs: p
            .outputs
            .iter()
            .zip(&q.outputs)
            .map(|(a, b)| a.concat(b))
            .collect(),
        tail: p.tail.concat(&q.tail),
    })
}
