//! Text formats: machine documents, map files, wiring and bridge files, and
//! table rendering.
//!
//! A machine document is line oriented; `#` starts a comment.
//!
//! ```text
//! machine <name>
//! states <n1> <n2> ...
//! block <n1> <n2> ...          # one line per block
//! inputs <a> <b> ...
//! trans <state> <symbol> lower { <names> } upper { <names> }
//! ```
//!
//! Names are any whitespace-free tokens without `{`, `}` or `#`, so product
//! names such as `(q1,q2)` or `(f[a,b],x)` are atomic.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::machine::{Machine, SymbolId, Word};
use crate::morphism::{CoveringPair, MorphismPair};
use crate::products::{CascadeWiring, InputBridge};
use crate::rough::{ApproximationSpace, DefinableSet, RoughSet, StateSubset};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

/// Splits a line into tokens, treating braces as tokens of their own and
/// dropping everything after `#`.
fn tokenize(line: &str) -> Vec<Token<'_>> {
    let line = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let column_of = |byte: usize| line[..byte].chars().count() + 1;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() || c == '{' || c == '}' {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    column: column_of(s),
                });
            }
            if c == '{' || c == '}' {
                out.push(Token {
                    text: &line[i..i + 1],
                    column: column_of(i),
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: column_of(s),
        });
    }
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn semantic(line: usize, message: impl Into<String>) -> Error {
    Error::Semantic {
        line,
        message: message.into(),
    }
}

struct TransLine {
    line: usize,
    state: String,
    symbol: String,
    lower: Vec<String>,
    upper: Vec<String>,
}

/// Parses `<keyword> { names } ` starting at `toks[i]`; returns names and the next index.
fn braced<'a>(
    toks: &[Token<'a>],
    mut i: usize,
    keyword: &str,
    line: usize,
    end_col: usize,
) -> Result<(Vec<String>, usize)> {
    let at = |i: usize| toks.get(i).map(|t| t.column).unwrap_or(end_col);
    match toks.get(i) {
        Some(t) if t.text == keyword => i += 1,
        _ => return Err(syntax(line, at(i), format!("expected `{keyword}`"))),
    }
    match toks.get(i) {
        Some(t) if t.text == "{" => i += 1,
        _ => return Err(syntax(line, at(i), "expected `{`")),
    }
    let mut names = Vec::new();
    loop {
        match toks.get(i) {
            Some(t) if t.text == "}" => return Ok((names, i + 1)),
            Some(t) if t.text == "{" => return Err(syntax(line, t.column, "unexpected `{`")),
            Some(t) => {
                names.push(t.text.to_owned());
                i += 1;
            }
            None => return Err(syntax(line, end_col, "unterminated `{`")),
        }
    }
}

/// Parses and validates a machine document.
pub fn parse_machine(text: &str) -> Result<Machine> {
    let mut name: Option<String> = None;
    let mut states: Option<(usize, Vec<String>)> = None;
    let mut blocks: Vec<(usize, Vec<String>)> = Vec::new();
    let mut inputs: Option<(usize, Vec<String>)> = None;
    let mut trans: Vec<TransLine> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let toks = tokenize(raw);
        let Some(head) = toks.first() else { continue };
        let end_col = raw.chars().count() + 1;
        let args = || -> Result<Vec<String>> {
            toks[1..]
                .iter()
                .map(|t| {
                    if t.text == "{" || t.text == "}" {
                        Err(syntax(line, t.column, format!("unexpected `{}`", t.text)))
                    } else {
                        Ok(t.text.to_owned())
                    }
                })
                .collect()
        };
        match head.text {
            "machine" => {
                if name.is_some() {
                    return Err(syntax(line, head.column, "duplicate `machine` line"));
                }
                let a = args()?;
                if a.len() != 1 {
                    return Err(syntax(
                        line,
                        head.column,
                        "`machine` takes exactly one name",
                    ));
                }
                name = Some(a[0].clone());
            }
            "states" => {
                if states.is_some() {
                    return Err(syntax(line, head.column, "duplicate `states` line"));
                }
                states = Some((line, args()?));
            }
            "block" => blocks.push((line, args()?)),
            "inputs" => {
                if inputs.is_some() {
                    return Err(syntax(line, head.column, "duplicate `inputs` line"));
                }
                inputs = Some((line, args()?));
            }
            "trans" => {
                if toks.len() < 3 {
                    return Err(syntax(
                        line,
                        end_col,
                        "expected `trans <state> <symbol> lower { .. } upper { .. }`",
                    ));
                }
                let (lower, i) = braced(&toks, 3, "lower", line, end_col)?;
                let (upper, i) = braced(&toks, i, "upper", line, end_col)?;
                if let Some(t) = toks.get(i) {
                    return Err(syntax(line, t.column, "trailing tokens"));
                }
                trans.push(TransLine {
                    line,
                    state: toks[1].text.to_owned(),
                    symbol: toks[2].text.to_owned(),
                    lower,
                    upper,
                });
            }
            other => {
                return Err(syntax(
                    line,
                    head.column,
                    format!("unknown keyword `{other}`"),
                ))
            }
        }
    }

    let name = name.ok_or_else(|| semantic(1, "missing `machine` line"))?;
    let (states_line, states) =
        states.ok_or_else(|| semantic(last_line, "missing `states` line"))?;
    let (inputs_line, inputs) =
        inputs.ok_or_else(|| semantic(last_line, "missing `inputs` line"))?;
    if states.is_empty() {
        return Err(semantic(states_line, "state set is empty"));
    }
    if inputs.is_empty() {
        return Err(semantic(inputs_line, "input alphabet is empty"));
    }
    let block_line = blocks.first().map(|b| b.0).unwrap_or(states_line);
    let cells: Vec<Vec<String>> = blocks.into_iter().map(|(_, c)| c).collect();
    let space = ApproximationSpace::make_partition(&states, &cells)
        .map_err(|e| semantic(block_line, e.to_string()))?;

    let mut symbol_index = HashMap::new();
    for (i, s) in inputs.iter().enumerate() {
        if symbol_index.insert(s.as_str(), i).is_some() {
            return Err(semantic(
                inputs_line,
                format!("duplicate input symbol `{s}`"),
            ));
        }
    }

    let nx = inputs.len();
    let mut table: Vec<Option<(usize, RoughSet)>> = vec![None; space.len() * nx];
    for t in &trans {
        let q = space
            .state_index(&t.state)
            .map_err(|e| semantic(t.line, e.to_string()))?;
        let a = *symbol_index
            .get(t.symbol.as_str())
            .ok_or_else(|| semantic(t.line, format!("unknown input symbol `{}`", t.symbol)))?;
        let as_definable = |names: &[String], part: &'static str| -> Result<DefinableSet> {
            let subset = StateSubset::from_names(&space, names)
                .map_err(|e| semantic(t.line, e.to_string()))?;
            DefinableSet::from_subset(&space, &subset)?.ok_or_else(|| Error::NonDefinableEntry {
                line: t.line,
                state: t.state.clone(),
                symbol: t.symbol.clone(),
                part,
            })
        };
        let lower = as_definable(&t.lower, "lower")?;
        let upper = as_definable(&t.upper, "upper")?;
        let slot = &mut table[q * nx + a];
        if let Some((prev, _)) = slot {
            return Err(semantic(
                t.line,
                format!(
                    "duplicate entry for ({}, {}), first given on line {prev}",
                    t.state, t.symbol
                ),
            ));
        }
        *slot = Some((t.line, RoughSet::new(lower, upper)));
    }

    if let Some(i) = table.iter().position(Option::is_none) {
        return Err(semantic(
            last_line,
            format!(
                "table not total: missing ({}, {})",
                space.state_name(i / nx),
                inputs[i % nx]
            ),
        ));
    }
    let lines: Vec<usize> = table
        .iter()
        .map(|e| e.as_ref().map(|(l, _)| *l).unwrap_or(0))
        .collect();
    let table: Vec<RoughSet> = table
        .into_iter()
        .map(|e| e.expect("checked total").1)
        .collect();
    let machine = Machine::new_unchecked(name, space, inputs, table)?;
    if let Some(v) = machine.validate().into_iter().next() {
        let q = machine.state_index(&v.state)?;
        let a = machine.symbol_index(&v.symbol)?;
        return Err(semantic(lines[q * nx + a], v.to_string()));
    }
    Ok(machine)
}

fn names_of(m: &Machine, d: &DefinableSet) -> String {
    d.states(m.space())
        .into_iter()
        .map(|s| m.space().state_name(s))
        .collect::<Vec<_>>()
        .join(" ")
}

fn braces(body: &str) -> String {
    if body.is_empty() {
        "{ }".to_owned()
    } else {
        format!("{{ {body} }}")
    }
}

/// Canonical text of a machine: states in declared order, blocks by id,
/// entries by `(state, symbol)`.
pub fn serialize_machine(m: &Machine) -> String {
    let space = m.space();
    let mut out = String::new();
    writeln!(out, "machine {}", m.name()).unwrap();
    writeln!(out, "states {}", space.states().join(" ")).unwrap();
    for block in space.blocks() {
        let names: Vec<&str> = block.iter().map(|&s| space.state_name(s)).collect();
        writeln!(out, "block {}", names.join(" ")).unwrap();
    }
    writeln!(out, "inputs {}", m.alphabet().join(" ")).unwrap();
    for q in 0..m.state_count() {
        for a in 0..m.symbol_count() {
            let e = m.entry(q, a);
            writeln!(
                out,
                "trans {} {} lower {} upper {}",
                space.state_name(q),
                m.symbol_name(a),
                braces(&names_of(m, &e.lower)),
                braces(&names_of(m, &e.upper))
            )
            .unwrap();
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    State,
    Block,
}

/// Rows of the block table: distinct definable sets occurring as a lower or
/// upper part in the transition table that are unions of at least two blocks
/// and not the whole state set, ordered by block ids. Falls back to every
/// distinct nonempty occurring set when that selection is empty.
pub fn block_table_rows(m: &Machine) -> Vec<DefinableSet> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for q in 0..m.state_count() {
        for a in 0..m.symbol_count() {
            let e = m.entry(q, a);
            for d in [&e.lower, &e.upper] {
                if !d.is_empty() {
                    seen.insert(d.block_ids().collect());
                }
            }
        }
    }
    let total = m.space().block_count();
    let compound: Vec<&Vec<usize>> = seen
        .iter()
        .filter(|ids| ids.len() >= 2 && ids.len() < total)
        .collect();
    let pick: Vec<&Vec<usize>> = if compound.is_empty() {
        seen.iter().collect()
    } else {
        compound
    };
    pick.into_iter()
        .map(|ids| {
            DefinableSet::from_blocks(m.space(), ids.iter().copied()).expect("ids from this space")
        })
        .collect()
}

fn render_grid(header: Vec<String>, rows: Vec<Vec<String>>) -> String {
    let width = |s: &str| s.chars().count();
    let mut widths: Vec<usize> = header.iter().map(|h| width(h)).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(width(cell));
        }
    }
    let line = |cells: &[String]| -> String {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - width(c))))
            .collect();
        format!("| {} |\n", parts.join(" | "))
    };
    let mut out = line(&header);
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out.push_str(&format!("|-{}-|\n", rule.join("-|-")));
    for row in &rows {
        out.push_str(&line(row));
    }
    out
}

/// Renders the state transition table (rows = states) or the block
/// transition table (rows = [`block_table_rows`]). With a word, the single
/// column holds `δ*(q, w)` or `δ*D(D, w)`; otherwise there is one column per
/// symbol. Cells read `(lower,upper)` with sets as unions of blocks and `φ`
/// for the empty set.
pub fn render_tables(m: &Machine, kind: TableKind, word: Option<&Word>) -> Result<String> {
    let space = m.space();
    let columns: Vec<(String, Option<SymbolId>)> = match word {
        Some(w) => vec![(m.display_word(w), None)],
        None => (0..m.symbol_count())
            .map(|a| (m.symbol_name(a).to_owned(), Some(a)))
            .collect(),
    };
    match kind {
        TableKind::State => {
            let mut header = vec!["Q".to_owned()];
            header.extend(columns.iter().map(|(c, _)| match word {
                Some(_) => format!("δ*(q,{c})"),
                None => format!("δ(q,{c})"),
            }));
            let mut rows = Vec::new();
            for q in 0..m.state_count() {
                let mut row = vec![space.state_name(q).to_owned()];
                for (_, col) in &columns {
                    let rs = match (col, word) {
                        (Some(a), _) => m.entry(q, *a).clone(),
                        (None, Some(w)) => m.word_step(q, w)?,
                        (None, None) => unreachable!(),
                    };
                    row.push(space.display_rough(&rs));
                }
                rows.push(row);
            }
            Ok(render_grid(header, rows))
        }
        TableKind::Block => {
            let mut header = vec!["D".to_owned()];
            header.extend(columns.iter().map(|(c, _)| match word {
                Some(_) => format!("δ*D(D,{c})"),
                None => format!("δD(D,{c})"),
            }));
            let mut rows = Vec::new();
            for d in block_table_rows(m) {
                let mut row = vec![space.display_definable(&d)];
                for (_, col) in &columns {
                    let rs = match (col, word) {
                        (Some(a), _) => m.block_step(&d, *a)?,
                        (None, Some(w)) => m.block_word_step(&d, w)?,
                        (None, None) => unreachable!(),
                    };
                    row.push(space.display_rough(&rs));
                }
                rows.push(row);
            }
            Ok(render_grid(header, rows))
        }
    }
}

/// A parsed map file: `state <from> <to>` and `input <from> <to>` lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MapDocument {
    pub states: Vec<(usize, String, String)>,
    pub inputs: Vec<(usize, String, String)>,
}

/// Parses whitespace-separated records of a fixed arity, skipping blanks and comments.
fn records(text: &str, arity: usize) -> Result<Vec<(usize, Vec<String>)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let toks = tokenize(raw);
        if toks.is_empty() {
            continue;
        }
        if toks.len() != arity {
            return Err(syntax(
                idx + 1,
                toks[0].column,
                format!("expected {arity} fields, found {}", toks.len()),
            ));
        }
        out.push((idx + 1, toks.iter().map(|t| t.text.to_owned()).collect()));
    }
    Ok(out)
}

pub fn parse_map(text: &str) -> Result<MapDocument> {
    let mut doc = MapDocument::default();
    for (line, mut f) in records(text, 3)? {
        let to = f.pop().unwrap();
        let from = f.pop().unwrap();
        match f[0].as_str() {
            "state" => doc.states.push((line, from, to)),
            "input" => doc.inputs.push((line, from, to)),
            other => {
                return Err(syntax(
                    line,
                    1,
                    format!("expected `state` or `input`, found `{other}`"),
                ))
            }
        }
    }
    Ok(doc)
}

fn resolve(
    entries: &[(usize, String, String)],
    domain_len: usize,
    domain: impl Fn(&str) -> Result<usize>,
    codomain: impl Fn(&str) -> Result<usize>,
    domain_name: impl Fn(usize) -> String,
    what: &str,
) -> Result<Vec<usize>> {
    let mut map = vec![None; domain_len];
    for (line, from, to) in entries {
        let i = domain(from).map_err(|e| semantic(*line, e.to_string()))?;
        let j = codomain(to).map_err(|e| semantic(*line, e.to_string()))?;
        if map[i].replace(j).is_some() {
            return Err(semantic(*line, format!("{what} `{from}` mapped twice")));
        }
    }
    map.iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| Error::Totality(format!("{what} `{}` is not mapped", domain_name(i))))
        })
        .collect()
}

impl MapDocument {
    /// Reads `(f, g)` from `m1` to `m2`.
    pub fn to_morphism(&self, m1: &Machine, m2: &Machine) -> Result<MorphismPair> {
        let f = resolve(
            &self.states,
            m1.state_count(),
            |n| m1.state_index(n),
            |n| m2.state_index(n),
            |i| m1.space().state_name(i).to_owned(),
            "state",
        )?;
        let g = resolve(
            &self.inputs,
            m1.symbol_count(),
            |n| m1.symbol_index(n),
            |n| m2.symbol_index(n),
            |i| m1.symbol_name(i).to_owned(),
            "input",
        )?;
        Ok(MorphismPair::new(f, g))
    }

    /// Reads `(η, ξ)` covering `m1` by `m2`: states map `Q2 → Q1`, inputs `X1 → X2`.
    pub fn to_covering(&self, m1: &Machine, m2: &Machine) -> Result<CoveringPair> {
        let eta = resolve(
            &self.states,
            m2.state_count(),
            |n| m2.state_index(n),
            |n| m1.state_index(n),
            |i| m2.space().state_name(i).to_owned(),
            "state",
        )?;
        let xi = resolve(
            &self.inputs,
            m1.symbol_count(),
            |n| m1.symbol_index(n),
            |n| m2.symbol_index(n),
            |i| m1.symbol_name(i).to_owned(),
            "input",
        )?;
        Ok(CoveringPair::new(eta, xi))
    }
}

pub fn serialize_covering(m1: &Machine, m2: &Machine, pair: &CoveringPair) -> String {
    let mut out = String::new();
    for (q2, &q1) in pair.state_map.iter().enumerate() {
        writeln!(
            out,
            "state {} {}",
            m2.space().state_name(q2),
            m1.space().state_name(q1)
        )
        .unwrap();
    }
    for (x1, &x2) in pair.input_map.iter().enumerate() {
        writeln!(out, "input {} {}", m1.symbol_name(x1), m2.symbol_name(x2)).unwrap();
    }
    out
}

pub fn serialize_morphism(m1: &Machine, m2: &Machine, pair: &MorphismPair) -> String {
    let mut out = String::new();
    for (q1, &q2) in pair.state_map.iter().enumerate() {
        writeln!(
            out,
            "state {} {}",
            m1.space().state_name(q1),
            m2.space().state_name(q2)
        )
        .unwrap();
    }
    for (x1, &x2) in pair.input_map.iter().enumerate() {
        writeln!(out, "input {} {}", m1.symbol_name(x1), m2.symbol_name(x2)).unwrap();
    }
    out
}

/// Omega file: lines `<q2> <x2> <x1>` giving `ω(q2, x2) = x1`.
pub fn parse_omega(text: &str, m1: &Machine, m2: &Machine) -> Result<CascadeWiring> {
    let nx2 = m2.symbol_count();
    let mut omega = vec![None; m2.state_count() * nx2];
    for (line, f) in records(text, 3)? {
        let q2 = m2
            .state_index(&f[0])
            .map_err(|e| semantic(line, e.to_string()))?;
        let x2 = m2
            .symbol_index(&f[1])
            .map_err(|e| semantic(line, e.to_string()))?;
        let x1 = m1
            .symbol_index(&f[2])
            .map_err(|e| semantic(line, e.to_string()))?;
        if omega[q2 * nx2 + x2].replace(x1).is_some() {
            return Err(semantic(line, format!("ω({}, {}) given twice", f[0], f[1])));
        }
    }
    let omega = omega
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| {
                Error::Totality(format!(
                    "ω({}, {}) is not given",
                    m2.space().state_name(i / nx2),
                    m2.symbol_name(i % nx2)
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    CascadeWiring::new(m1, m2, omega)
}

pub fn serialize_omega(m1: &Machine, m2: &Machine, w: &CascadeWiring) -> String {
    let mut out = String::new();
    for q2 in 0..m2.state_count() {
        for x2 in 0..m2.symbol_count() {
            writeln!(
                out,
                "{} {} {}",
                m2.space().state_name(q2),
                m2.symbol_name(x2),
                m1.symbol_name(w.apply(q2, x2))
            )
            .unwrap();
        }
    }
    out
}

/// Bridge file: lines `<xbar> <x1> <x2>`; carrier symbols in order of appearance.
pub fn parse_bridge(text: &str, m1: &Machine, m2: &Machine) -> Result<InputBridge> {
    let mut carrier = Vec::new();
    let mut decode = Vec::new();
    let mut seen = HashMap::new();
    for (line, f) in records(text, 3)? {
        if seen.insert(f[0].clone(), line).is_some() {
            return Err(semantic(
                line,
                format!("carrier symbol `{}` given twice", f[0]),
            ));
        }
        let x1 = m1
            .symbol_index(&f[1])
            .map_err(|e| semantic(line, e.to_string()))?;
        let x2 = m2
            .symbol_index(&f[2])
            .map_err(|e| semantic(line, e.to_string()))?;
        carrier.push(f[0].clone());
        decode.push((x1, x2));
    }
    InputBridge::new(m1, m2, carrier, decode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{five_state, FIVE_STATE};

    #[test]
    fn fixture_parses() {
        let m = parse_machine(FIVE_STATE).unwrap();
        assert_eq!(m.name(), "five_state");
        assert_eq!(m.state_count(), 5);
        assert_eq!(m.space().block_count(), 3);
    }

    #[test]
    fn canonical_text_round_trips() {
        let m = five_state();
        let text = serialize_machine(&m);
        let back = parse_machine(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(serialize_machine(&back), text);
    }

    #[test]
    fn empty_trans_section_is_not_total() {
        let text = "machine m\nstates p q\nblock p q\ninputs a\n";
        match parse_machine(text) {
            Err(Error::Semantic { message, .. }) => {
                assert!(message.contains("not total"), "{message}")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn split_block_is_not_definable() {
        let text = FIVE_STATE.replace(
            "trans q1 a lower { q1 q2 } upper",
            "trans q1 a lower { q3 } upper",
        );
        match parse_machine(&text) {
            Err(Error::NonDefinableEntry {
                state,
                symbol,
                part,
                ..
            }) => {
                assert_eq!(
                    (state.as_str(), symbol.as_str(), part),
                    ("q1", "a", "lower")
                );
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err =
            parse_machine("machine m\nstates p\nblock p\ninputs a\ntrans p a lower q upper { }\n")
                .unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 5,
                column: 17,
                message: "expected `{`".into()
            }
        );
        let err = parse_machine("machin m\n").unwrap_err();
        assert!(matches!(
            err,
            Error::Syntax {
                line: 1,
                column: 1,
                ..
            }
        ));
    }

    #[test]
    fn broken_containment_is_a_semantic_error() {
        let text = "machine m\nstates p q\nblock p\nblock q\ninputs a\n\
                    trans p a lower { p } upper { q }\ntrans q a lower { } upper { q }\n";
        assert!(matches!(
            parse_machine(text),
            Err(Error::Semantic { line: 6, .. })
        ));
    }

    #[test]
    fn state_table_cells() {
        let m = five_state();
        let t = render_tables(&m, TableKind::State, None).unwrap();
        assert!(t.contains("(φ,{q3,q5})"), "{t}");
        assert!(t.contains("({q1,q2},{q1,q2}∪{q3,q5})"), "{t}");
    }

    #[test]
    fn block_table_rows_and_cells() {
        let m = five_state();
        let rows: Vec<String> = block_table_rows(&m)
            .iter()
            .map(|d| m.space().display_definable(d))
            .collect();
        assert_eq!(rows, ["{q1,q2}∪{q3,q5}", "{q1,q2}∪{q4}", "{q3,q5}∪{q4}"]);
        let t = render_tables(&m, TableKind::Block, None).unwrap();
        assert!(t.contains("({q1,q2}∪{q4},{q1,q2}∪{q3,q5}∪{q4})"), "{t}");
    }

    #[test]
    fn one_state_machine_table() {
        let m = parse_machine(
            "machine one\nstates p\nblock p\ninputs a\ntrans p a lower { p } upper { p }\n",
        )
        .unwrap();
        let t = render_tables(&m, TableKind::State, None).unwrap();
        assert_eq!(t.lines().count(), 3);
        assert!(t.contains("| p | ({p},{p}) |"), "{t}");
    }

    #[test]
    fn map_files() {
        let m = five_state();
        let doc = parse_map("state q1 q1\nstate q2 q2\nstate q3 q3\nstate q4 q4\nstate q5 q5\ninput a a\ninput b b\n").unwrap();
        assert_eq!(doc.to_covering(&m, &m).unwrap(), CoveringPair::identity(&m));
        let partial = parse_map("state q1 q1\ninput a a\n").unwrap();
        assert!(matches!(
            partial.to_morphism(&m, &m),
            Err(Error::Totality(_))
        ));
        assert!(matches!(
            parse_map("stat q1 q1\n"),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn omega_and_bridge_files() {
        let m = five_state();
        let mut text = String::new();
        for q in m.space().states() {
            text.push_str(&format!("{q} a b\n{q} b a\n"));
        }
        let w = parse_omega(&text, &m, &m).unwrap();
        assert_eq!(w.apply(0, 0), 1);
        assert_eq!(serialize_omega(&m, &m, &w), text);
        assert!(matches!(
            parse_omega("q1 a b\n", &m, &m),
            Err(Error::Totality(_))
        ));

        let b = parse_bridge("u a b\nv b b\n", &m, &m).unwrap();
        assert_eq!(b.carrier(), ["u", "v"]);
        assert_eq!(b.decode(1), (1, 1));
    }
}
