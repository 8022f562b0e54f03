//! Family sources: files, stdin, or built-in fixtures.

use std::io::Read;
use std::path::Path;

use butterfly_core::io::parse_family;
use butterfly_core::search::listed_exceptions;
use butterfly_core::{Error, Family, GroundSize};

use crate::report::CliError;

pub struct Input {
    pub source: String,
    pub family: Family,
}

pub const FIXTURES: &str =
    "exceptional-n3, exceptional-n4, two-levels:<n>:<k>, level:<n>:<k>, power-set:<n>";

pub fn load(arg: &str) -> Result<Input, CliError> {
    let text = if arg == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError(format!("stdin: {e}")))?;
        Some(buf)
    } else if Path::new(arg).is_file() {
        Some(std::fs::read_to_string(arg).map_err(|e| CliError(format!("{arg}: {e}")))?)
    } else {
        None
    };
    let family = match text {
        Some(text) => parse_family(&text).map_err(|e| match e {
            Error::Parse { line, message } => CliError(format!("{arg}:{line}: {message}")),
            other => CliError(format!("{arg}: {other}")),
        })?,
        None => fixture(arg)?.ok_or_else(|| {
            CliError(format!(
                "{arg}: no such file or built-in fixture (fixtures: {FIXTURES})"
            ))
        })?,
    };
    Ok(Input {
        source: arg.to_string(),
        family,
    })
}

fn fixture(name: &str) -> Result<Option<Family>, CliError> {
    let bad = |what: &str| CliError(format!("{name}: {what}"));
    let parts: Vec<&str> = name.split(':').collect();
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| bad("expected integer parameters"))
    };
    let family = match parts.as_slice() {
        ["exceptional-n3"] => listed_exceptions(3).remove(0),
        ["exceptional-n4"] => listed_exceptions(4).remove(0),
        ["two-levels", n, k] => Family::two_levels(GroundSize::new(num(n)?)?, num(k)?)?,
        ["level", n, k] => Family::level(GroundSize::new(num(n)?)?, num(k)?)?,
        ["power-set", n] => Family::power_set(GroundSize::new(num(n)?)?),
        _ => return Ok(None),
    };
    Ok(Some(family))
}
