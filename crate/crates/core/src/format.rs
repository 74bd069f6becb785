//! Text formats for algebras, fields of sets, and subpowers.
//!
//! All three formats are line-oriented UTF-8. A `#` starts a comment that
//! runs to the end of the line; blank lines are ignored. Parse errors
//! carry a 1-based line number (line 0 stands for the input as a whole,
//! e.g. a missing required line).
//!
//! Algebra:
//!
//! ```text
//! algebra chain        # optional, at most once, before `carrier`
//! carrier 3            # required, exactly once
//! op f 0 0 1           # zero or more, after `carrier`
//! ```
//!
//! Field of sets (subsets as strings of `0`/`1`, character `i` standing
//! for ground element `i`):
//!
//! ```text
//! ground 2
//! members 00 11 01 10
//! ```
//!
//! Subpower over a base algebra (elements in lexicographic order, one
//! tuple literal per line, generators marked `gen`):
//!
//! ```text
//! subpower N=3 base=chain
//! (0,0,0)
//! (1,0,0)
//! gen (2,0,1)
//! ```

use std::collections::BTreeSet;
use std::str::FromStr;

use crate::algebra::UnaryAlgebra;
use crate::casebook::FieldOfSets;
use crate::error::{Error, Result};
use crate::powers::{generate_subpower, Subpower, Tuple};
use crate::Limits;

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Lines with comments stripped, trimmed, paired with 1-based numbers;
/// blank results are dropped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(index, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((index + 1, line))
        }
    })
}

/// Parses the algebra text format.
pub fn parse_algebra(text: &str) -> Result<UnaryAlgebra> {
    let mut name: Option<String> = None;
    let mut carrier: Option<usize> = None;
    let mut ops: Vec<(String, Vec<usize>)> = Vec::new();

    for (line, content) in content_lines(text) {
        let mut tokens = content.split_whitespace();
        let directive = tokens.next().expect("content lines are non-empty");
        match directive {
            "algebra" => {
                if carrier.is_some() {
                    return Err(parse_error(line, "`algebra` must precede `carrier`"));
                }
                if name.is_some() {
                    return Err(parse_error(line, "duplicate `algebra` line"));
                }
                let value = tokens
                    .next()
                    .ok_or_else(|| parse_error(line, "`algebra` needs a name"))?;
                if tokens.next().is_some() {
                    return Err(parse_error(line, "`algebra` takes a single name"));
                }
                name = Some(value.to_string());
            }
            "carrier" => {
                if carrier.is_some() {
                    return Err(parse_error(line, "duplicate `carrier` line"));
                }
                let value = tokens
                    .next()
                    .ok_or_else(|| parse_error(line, "`carrier` needs a size"))?;
                if tokens.next().is_some() {
                    return Err(parse_error(line, "`carrier` takes a single size"));
                }
                let size: usize = value
                    .parse()
                    .map_err(|_| parse_error(line, format!("`{value}` is not a size")))?;
                if size == 0 {
                    return Err(parse_error(line, "the carrier must have at least 1 element"));
                }
                carrier = Some(size);
            }
            "op" => {
                let size = carrier
                    .ok_or_else(|| parse_error(line, "`op` must come after `carrier`"))?;
                let op_name = tokens
                    .next()
                    .ok_or_else(|| parse_error(line, "`op` needs a name"))?;
                if ops.iter().any(|(existing, _)| existing == op_name) {
                    return Err(parse_error(line, format!("duplicate operation `{op_name}`")));
                }
                let mut table = Vec::with_capacity(size);
                for token in tokens {
                    let value: usize = token
                        .parse()
                        .map_err(|_| parse_error(line, format!("`{token}` is not a value")))?;
                    if value >= size {
                        return Err(parse_error(
                            line,
                            format!("value {value} is outside the carrier 0..{size}"),
                        ));
                    }
                    table.push(value);
                }
                if table.len() != size {
                    return Err(parse_error(
                        line,
                        format!("`{op_name}` has {} values, the carrier needs {size}", table.len()),
                    ));
                }
                ops.push((op_name.to_string(), table));
            }
            other => {
                return Err(parse_error(line, format!("unknown directive `{other}`")));
            }
        }
    }

    let carrier = carrier.ok_or_else(|| parse_error(0, "missing `carrier` line"))?;
    UnaryAlgebra::new(name, carrier, ops)
}

/// Renders an algebra in the text format; inverse of [`parse_algebra`].
pub fn write_algebra(algebra: &UnaryAlgebra) -> String {
    algebra.to_string()
}

/// Parses the field-of-sets text format and validates closure.
pub fn parse_field_of_sets(text: &str) -> Result<FieldOfSets> {
    let mut ground: Option<usize> = None;
    let mut members: BTreeSet<u64> = BTreeSet::new();

    for (line, content) in content_lines(text) {
        let mut tokens = content.split_whitespace();
        let directive = tokens.next().expect("content lines are non-empty");
        match directive {
            "ground" => {
                if ground.is_some() {
                    return Err(parse_error(line, "duplicate `ground` line"));
                }
                let value = tokens
                    .next()
                    .ok_or_else(|| parse_error(line, "`ground` needs a size"))?;
                if tokens.next().is_some() {
                    return Err(parse_error(line, "`ground` takes a single size"));
                }
                let size: usize = value
                    .parse()
                    .map_err(|_| parse_error(line, format!("`{value}` is not a size")))?;
                if size == 0 || size > 63 {
                    return Err(parse_error(line, "the ground size must be in 1..=63"));
                }
                ground = Some(size);
            }
            "members" => {
                let size = ground
                    .ok_or_else(|| parse_error(line, "`members` must come after `ground`"))?;
                for token in tokens {
                    if token.len() != size {
                        return Err(parse_error(
                            line,
                            format!("member `{token}` must have exactly {size} characters"),
                        ));
                    }
                    let mut mask = 0u64;
                    for (element, ch) in token.chars().enumerate() {
                        match ch {
                            '1' => mask |= 1 << element,
                            '0' => {}
                            other => {
                                return Err(parse_error(
                                    line,
                                    format!("member character `{other}` is not 0 or 1"),
                                ));
                            }
                        }
                    }
                    members.insert(mask);
                }
            }
            other => {
                return Err(parse_error(line, format!("unknown directive `{other}`")));
            }
        }
    }

    let ground = ground.ok_or_else(|| parse_error(0, "missing `ground` line"))?;
    FieldOfSets::new(ground, members)
}

/// Renders a field of sets; inverse of [`parse_field_of_sets`]. Members
/// come out in ascending mask order, sixteen per line.
pub fn write_field_of_sets(field: &FieldOfSets) -> String {
    let mut out = format!("ground {}\n", field.ground_size());
    let masks: Vec<u64> = field.members().iter().copied().collect();
    for chunk in masks.chunks(16) {
        out.push_str("members");
        for &mask in chunk {
            out.push(' ');
            for element in 0..field.ground_size() {
                out.push(if mask & (1 << element) != 0 { '1' } else { '0' });
            }
        }
        out.push('\n');
    }
    out
}

/// Renders a subpower; inverse of [`parse_subpower`] over the same base.
pub fn write_subpower(subpower: &Subpower) -> String {
    let base = subpower.base().name().unwrap_or("-");
    let mut out = format!("subpower N={} base={}\n", subpower.n_positions(), base);
    for tuple in subpower.elements() {
        if subpower.generators().binary_search(tuple).is_ok() {
            out.push_str("gen ");
        }
        out.push_str(&tuple.to_string());
        out.push('\n');
    }
    out
}

/// Parses a subpower over the given base algebra and verifies the listed
/// data: the base name matches the header, elements are sorted with no
/// duplicates, the set is closed under the operations, and the `gen` lines
/// generate exactly the listed elements.
pub fn parse_subpower(
    text: &str,
    base: &UnaryAlgebra,
    limits: &Limits,
) -> Result<Subpower> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| parse_error(0, "missing `subpower` header line"))?;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("subpower") {
        return Err(parse_error(header_line, "the first line must start with `subpower`"));
    }
    let n_token = tokens
        .next()
        .and_then(|t| t.strip_prefix("N="))
        .ok_or_else(|| parse_error(header_line, "expected `N=<positions>`"))?;
    let n_positions: usize = n_token
        .parse()
        .map_err(|_| parse_error(header_line, format!("`{n_token}` is not a position count")))?;
    if n_positions == 0 {
        return Err(parse_error(header_line, "N must be at least 1"));
    }
    let base_token = tokens
        .next()
        .and_then(|t| t.strip_prefix("base="))
        .ok_or_else(|| parse_error(header_line, "expected `base=<name-or-->`"))?;
    if tokens.next().is_some() {
        return Err(parse_error(header_line, "unexpected tokens after `base=`"));
    }
    if base_token != "-" && base.name() != Some(base_token) {
        return Err(parse_error(
            header_line,
            format!(
                "base mismatch: the file says `{base_token}`, the algebra is `{}`",
                base.name().unwrap_or("-")
            ),
        ));
    }

    let mut elements: Vec<Tuple> = Vec::new();
    let mut generators: Vec<Tuple> = Vec::new();
    for (line, content) in lines {
        let (is_generator, literal) = match content.strip_prefix("gen ") {
            Some(rest) => (true, rest.trim()),
            None => (false, content),
        };
        let tuple = Tuple::from_str(literal)
            .map_err(|error| parse_error(line, error.to_string()))?;
        if tuple.len() != n_positions {
            return Err(parse_error(
                line,
                format!("tuple has {} positions, the header says {n_positions}", tuple.len()),
            ));
        }
        if let Some(&entry) = tuple.entries().iter().find(|&&e| e >= base.carrier_size()) {
            return Err(parse_error(
                line,
                format!(
                    "entry {entry} is outside the base carrier 0..{}",
                    base.carrier_size()
                ),
            ));
        }
        if elements.last().is_some_and(|last| *last >= tuple) {
            return Err(parse_error(
                line,
                "elements must be listed in strictly increasing lexicographic order",
            ));
        }
        if is_generator {
            generators.push(tuple.clone());
        }
        elements.push(tuple);
    }

    for op in base.ops() {
        let closed = elements.iter().all(|tuple| {
            let image = Tuple(tuple.entries().iter().map(|&x| op.apply(x)).collect());
            elements.binary_search(&image).is_ok()
        });
        if !closed {
            return Err(Error::NotClosed {
                op: op.name().to_string(),
            });
        }
    }

    let regenerated = generate_subpower(base, n_positions, &generators, limits)?;
    if regenerated.elements() != elements {
        return Err(Error::InvalidSubpower(format!(
            "the {} generator(s) generate {} element(s), the file lists {}",
            generators.len(),
            regenerated.len(),
            elements.len()
        )));
    }

    Ok(Subpower::from_sorted_parts(
        base.clone(),
        n_positions,
        elements,
        generators,
    ))
}
