//! The bundled example corpus (multicusps, a single-separatrix foliation and
//! a rigid configuration).

use super::input::{parse_input, FoliationInput};
use super::model::Foliation;
use super::FolError;

pub const EXAMPLE_COUNT: usize = 7;

const SOURCES: [&str; EXAMPLE_COUNT] = [
    include_str!("../../examples_data/example0.json"),
    include_str!("../../examples_data/example1.json"),
    include_str!("../../examples_data/example2.json"),
    include_str!("../../examples_data/example3.json"),
    include_str!("../../examples_data/example4.json"),
    include_str!("../../examples_data/example5.json"),
    include_str!("../../examples_data/example6.json"),
];

/// Raw JSON of example `n`.
pub fn example_json(n: usize) -> Option<&'static str> {
    SOURCES.get(n).copied()
}

pub fn example_input(n: usize) -> Result<FoliationInput, FolError> {
    let src = example_json(n).ok_or_else(|| FolError::Inconsistent(format!("no example {n}")))?;
    parse_input(src)
}

/// Example `n`, parsed and validated.
pub fn example(n: usize) -> Result<Foliation, FolError> {
    Foliation::new(example_input(n)?)
}
