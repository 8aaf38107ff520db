use std::path::Path;

use hobo_core::parse::{parse_problem, parse_term_list, ProblemSpec};
use hobo_core::problems::Example;

use crate::error::{io_error, CliError};

/// Loads a `.hobo` source, a `.json` term list, or a built-in example by
/// name. Existing files win over example names.
pub fn load(input: &str) -> Result<ProblemSpec, CliError> {
    let path = Path::new(input);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(io_error(path))?;
        let is_json = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        return Ok(if is_json {
            parse_term_list(&text)?
        } else {
            parse_problem(&text)?
        });
    }
    match Example::from_name(input) {
        Some(e) => Ok(parse_problem(&e.source())?),
        None if path.exists() => Err(CliError::UnknownInput(input.to_string())),
        None => Err(io_error(path)(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            "no such file or built-in example (seating, pythagoras, tsp)",
        ))),
    }
}
