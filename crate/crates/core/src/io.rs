//! Plain-text family format.
//!
//! ```text
//! n=4
//! {}
//! 1
//! 1,2
//! ```
//!
//! The first line declares the ground size; each further nonempty line holds one
//! member as ascending comma-separated elements, with `{}` for the empty set.
//! Lines starting with `#` are comments.

use crate::error::{Error, Result};
use crate::family::Family;
use crate::subset::{GroundSize, Subset};

pub fn parse_family(text: &str) -> Result<Family> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing \"n=<int>\" header".into(),
    })?;
    let n = header
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse::<usize>().ok())
        .ok_or_else(|| Error::Parse {
            line: header_line,
            message: format!("expected \"n=<int>\", found {header:?}"),
        })?;
    let n = GroundSize::new(n).map_err(|e| Error::Parse {
        line: header_line,
        message: e.to_string(),
    })?;

    let mut members = Vec::new();
    for (line, content) in lines {
        members.push(parse_member(n, content).map_err(|message| Error::Parse { line, message })?);
    }
    Family::new(n, members)
}

fn parse_member(n: GroundSize, content: &str) -> std::result::Result<Subset, String> {
    if content == "{}" {
        return Ok(Subset::empty(n));
    }
    let mut elements = Vec::new();
    for tok in content.split(',') {
        let tok = tok.trim();
        let e: usize = tok
            .parse()
            .map_err(|_| format!("expected an element label, found {tok:?}"))?;
        if let Some(&prev) = elements.last() {
            if e <= prev {
                return Err(format!("elements must be strictly ascending: {content:?}"));
            }
        }
        elements.push(e);
    }
    Subset::from_elements(n, elements).map_err(|e| e.to_string())
}

/// Parses the one-line form produced by [`Family::to_compact`], e.g. `{} {1} {1,2}`.
pub fn parse_compact(n: usize, text: &str) -> Result<Family> {
    let n = GroundSize::new(n)?;
    let parse_err = |message: String| Error::Parse { line: 1, message };
    let mut members = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('{')
            .and_then(|r| r.split_once('}'))
            .ok_or_else(|| parse_err(format!("expected \"{{...}}\", found {rest:?}")))?;
        let (body, tail) = inner;
        let member = if body.trim().is_empty() { "{}" } else { body };
        members.push(parse_member(n, member).map_err(parse_err)?);
        rest = tail.trim_start();
    }
    Family::new(n, members)
}

pub fn format_family(family: &Family) -> String {
    let mut out = format!("n={}\n", family.n());
    for s in family {
        out.push_str(&s.to_line());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_example() {
        let f = parse_family("n=3\n{}\n1\n2\n1,2\n\n2,3\n1,3\n").unwrap();
        assert_eq!(f.len(), 6);
        assert!(f.contains_empty());
        assert_eq!(format_family(&f), "n=3\n{}\n1\n2\n1,2\n1,3\n2,3\n");
    }

    #[test]
    fn comments_and_blank_lines() {
        let f = parse_family("# a family\n\nn=2\n# members\n1\n").unwrap();
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_family("n=3\n1\n1,x\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                message: "expected an element label, found \"x\"".into()
            }
        );
        assert!(matches!(
            parse_family(""),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_family("garbage"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_family("n=3\n4\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_family("n=3\n2,1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_family("n=0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn compact_form() {
        let f = parse_compact(3, "{} {1} {1,2}").unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.to_compact(), "{} {1} {1,2}");
        assert!(parse_compact(3, "{1} 2").is_err());
        assert!(parse_compact(3, "{4}").is_err());
        assert_eq!(parse_compact(3, "").unwrap().len(), 0);
    }

    proptest! {
        #[test]
        fn text_round_trip(n in 1usize..=6, mask in any::<u64>()) {
            let f = Family::from_value_mask(GroundSize::new(n).unwrap(), &[mask]);
            prop_assert_eq!(parse_family(&format_family(&f)).unwrap(), f.clone());
            prop_assert_eq!(parse_compact(n, &f.to_compact()).unwrap(), f);
        }
    }
}
