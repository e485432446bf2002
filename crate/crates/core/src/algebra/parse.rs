use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::field::Field;
use super::group::GroupSpec;

fn bad(s: &str) -> Error {
    Error::Parse(format!("malformed group spec `{s}`"))
}

fn parse_num<T: FromStr>(s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad number `{s}`")))
}

/// Parses `p^r|modulus=c0,...,cr`.
fn parse_field(body: &str) -> Result<Field> {
    let (pr, modulus) = body.split_once("|modulus=").ok_or_else(|| bad(body))?;
    let (p, r) = pr.split_once('^').ok_or_else(|| bad(body))?;
    let coeffs = modulus
        .split(',')
        .map(parse_num::<u32>)
        .collect::<Result<Vec<_>>>()?;
    Field::new(parse_num(p)?, parse_num(r)?, Some(coeffs))
}

/// Splits on `;` at parenthesis depth zero.
fn split_top(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ';' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

pub fn parse_group(s: &str) -> Result<GroupSpec> {
    let s = s.trim();
    let (head, rest) = s.split_once('(').ok_or_else(|| bad(s))?;
    let body = rest.strip_suffix(')').ok_or_else(|| bad(s))?;
    match head {
        "Z" => {
            let n: usize = parse_num(body)?;
            if n == 0 {
                return Err(bad(s));
            }
            Ok(GroupSpec::cyclic(n))
        }
        "GF" => Ok(GroupSpec::field_additive(Arc::new(parse_field(body)?))),
        "GFmul" => GroupSpec::field_mult(Arc::new(parse_field(body)?)),
        "Prod" => Ok(GroupSpec::product(
            split_top(body).into_iter().map(parse_group).collect::<Result<Vec<_>>>()?,
        )),
        _ => Err(bad(s)),
    }
}

impl FromStr for GroupSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<GroupSpec> {
        parse_group(s)
    }
}
