//! Browser bindings. Every operation takes machine text and returns a
//! string, so the page only moves text around. The plain functions in
//! [`ops`] do the work and are testable off the browser.

use wasm_bindgen::prelude::*;

pub mod ops {
    use rfsm::fixtures::FIVE_STATE;
    use rfsm::format::{parse_machine, render_tables, TableKind};
    use rfsm::StateSubset;

    pub type Result<T> = std::result::Result<T, String>;

    fn text(e: rfsm::Error) -> String {
        e.to_string()
    }

    pub fn sample_machine() -> String {
        FIVE_STATE.to_owned()
    }

    /// Approximation of a comma or space separated state list.
    pub fn approximate(machine: &str, states: &str) -> Result<String> {
        let m = parse_machine(machine).map_err(text)?;
        let names: Vec<&str> = states.split([',', ' ']).filter(|s| !s.is_empty()).collect();
        let subset = StateSubset::from_names(m.space(), &names).map_err(text)?;
        let rs = m.space().approximate(&subset).map_err(text)?;
        Ok(m.space().display_rough(&rs))
    }

    pub fn run_word(machine: &str, state: &str, word: &str) -> Result<String> {
        let m = parse_machine(machine).map_err(text)?;
        let q = m.state_index(state.trim()).map_err(text)?;
        let w = m.parse_word(word).map_err(text)?;
        let rs = m.word_step(q, &w).map_err(text)?;
        Ok(m.space().display_rough(&rs))
    }

    /// Markdown table; an empty `word` gives one column per letter.
    pub fn render(machine: &str, blocks: bool, word: &str) -> Result<String> {
        let m = parse_machine(machine).map_err(text)?;
        let kind = if blocks {
            TableKind::Block
        } else {
            TableKind::State
        };
        let w = match word.trim() {
            "" => None,
            w => Some(m.parse_word(w).map_err(text)?),
        };
        render_tables(&m, kind, w.as_ref()).map_err(text)
    }
}

fn js(r: ops::Result<String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sample_machine() -> String {
    ops::sample_machine()
}

#[wasm_bindgen]
pub fn approximate(machine: &str, states: &str) -> Result<String, JsError> {
    js(ops::approximate(machine, states))
}

#[wasm_bindgen]
pub fn run_word(machine: &str, state: &str, word: &str) -> Result<String, JsError> {
    js(ops::run_word(machine, state, word))
}

#[wasm_bindgen]
pub fn render(machine: &str, blocks: bool, word: &str) -> Result<String, JsError> {
    js(ops::render(machine, blocks, word))
}
