//! Line-oriented system files.
//!
//! ```text
//! # comment
//! field 4
//! polygon rat(0,0) rat(1,0) rat(1,1) rat(0,1)
//! map direct a=poly(1/3) b=poly(0)
//! group cyclic 4 center=rat(1/2,1/2)
//! ```
//!
//! Scalars are written `poly(q0, q1, ...)` with canonical coefficients in
//! the declared cyclotomic field (missing ones are zero), or `rat(x, y)`
//! for x + iy when the field contains i. Parse errors carry line and
//! column; all scalars are reduced to canonical form on the way in.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, Similarity};
use crate::scalar::{poly::euler_phi, Scalar};
use crate::symmetry::{GroupSpec, SymmetryGroup};
use crate::system::PolygonalSystem;

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, col, msg: msg.into() }
}

/// Tokens of one line, parenthesized groups kept whole, with 1-based columns.
fn scan_line(line: &str, lineno: usize) -> Result<Vec<(usize, &str)>> {
    let mut tokens = Vec::new();
    let bytes = line.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if bytes[i] == b'#' {
            break;
        }
        let start = i;
        let mut depth = 0usize;
        while i < bytes.len() {
            match bytes[i] {
                b'(' => depth += 1,
                b')' => {
                    depth = depth.checked_sub(1).ok_or_else(|| {
                        syntax(lineno, i + 1, "unbalanced closing parenthesis")
                    })?;
                }
                b'#' if depth == 0 => break,
                c if c.is_ascii_whitespace() && depth == 0 => break,
                _ => {}
            }
            i += 1;
        }
        if depth != 0 {
            return Err(syntax(lineno, start + 1, "unbalanced opening parenthesis"));
        }
        tokens.push((start + 1, &line[start..i]));
    }
    Ok(tokens)
}

fn parse_rational(text: &str, line: usize, col: usize) -> Result<BigRational> {
    text.trim()
        .parse::<BigRational>()
        .map_err(|_| syntax(line, col, format!("expected a rational number, found `{}`", text.trim())))
}

/// Parse a scalar literal in the declared field.
pub fn parse_scalar(token: &str, order: u32, line: usize, col: usize) -> Result<Scalar> {
    if let Some(inner) = token.strip_prefix("poly(").and_then(|t| t.strip_suffix(')')) {
        let degree = euler_phi(order);
        let parts: Vec<&str> = inner.split(',').collect();
        if inner.trim().is_empty() {
            return Err(syntax(line, col, "poly() needs at least one coefficient"));
        }
        if parts.len() > degree {
            return Err(Error::FieldMismatch(format!(
                "literal has {} coefficients but the field of order {order} has degree {degree}",
                parts.len()
            )));
        }
        let coeffs = parts
            .iter()
            .map(|p| parse_rational(p, line, col))
            .collect::<Result<Vec<_>>>()?;
        Ok(Scalar::from_poly(order, coeffs))
    } else if let Some(inner) = token.strip_prefix("rat(").and_then(|t| t.strip_suffix(')')) {
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 2 {
            return Err(syntax(line, col, "rat(x, y) needs exactly two rationals"));
        }
        let i = Scalar::unit_imag(order).ok_or_else(|| {
            Error::FieldMismatch(format!(
                "rat(x, y) needs a field order divisible by 4, got {order}"
            ))
        })?;
        let x = parse_rational(parts[0], line, col)?;
        let y = parse_rational(parts[1], line, col)?;
        Ok(&Scalar::from_rational(order, x) + &(&i * &Scalar::from_rational(order, y)))
    } else {
        Err(syntax(line, col, format!("expected poly(...) or rat(...), found `{token}`")))
    }
}

fn parse_keyed_scalar(
    token: &str,
    key: &str,
    order: u32,
    line: usize,
    col: usize,
) -> Result<Scalar> {
    let prefix = format!("{key}=");
    let rest = token.strip_prefix(&prefix).ok_or_else(|| {
        syntax(line, col, format!("expected `{key}=<scalar>`, found `{token}`"))
    })?;
    parse_scalar(rest, order, line, col)
}

/// Parse a complete system file.
pub fn parse_spec(text: &str) -> Result<PolygonalSystem> {
    let mut field_order: Option<u32> = None;
    let mut polygon: Option<ConvexPolygon> = None;
    let mut maps: Vec<Similarity> = Vec::new();
    let mut group: Option<GroupSpec> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let tokens = scan_line(raw, lineno)?;
        let Some(&(head_col, head)) = tokens.first() else {
            continue;
        };
        match head {
            "field" => {
                if field_order.is_some() {
                    return Err(syntax(lineno, head_col, "duplicate field declaration"));
                }
                let &(col, tok) = tokens
                    .get(1)
                    .ok_or_else(|| syntax(lineno, head_col, "field needs an order"))?;
                let n: u32 = tok
                    .parse()
                    .map_err(|_| syntax(lineno, col, format!("invalid field order `{tok}`")))?;
                if n == 0 {
                    return Err(syntax(lineno, col, "field order must be positive"));
                }
                field_order = Some(n);
            }
            "polygon" => {
                let order = field_order
                    .ok_or_else(|| syntax(lineno, head_col, "field order must be declared first"))?;
                if polygon.is_some() {
                    return Err(syntax(lineno, head_col, "duplicate polygon declaration"));
                }
                if tokens.len() < 4 {
                    return Err(syntax(lineno, head_col, "polygon needs at least three vertices"));
                }
                let vertices = tokens[1..]
                    .iter()
                    .map(|&(col, tok)| parse_scalar(tok, order, lineno, col))
                    .collect::<Result<Vec<_>>>()?;
                polygon = Some(ConvexPolygon::new(vertices)?);
            }
            "map" => {
                let order = field_order
                    .ok_or_else(|| syntax(lineno, head_col, "field order must be declared first"))?;
                let &(kind_col, kind) = tokens
                    .get(1)
                    .ok_or_else(|| syntax(lineno, head_col, "map needs `direct` or `mirror`"))?;
                let mirror = match kind {
                    "direct" => false,
                    "mirror" => true,
                    other => {
                        return Err(syntax(
                            lineno,
                            kind_col,
                            format!("expected `direct` or `mirror`, found `{other}`"),
                        ))
                    }
                };
                if mirror && order % 4 != 0 {
                    return Err(Error::FieldMismatch(format!(
                        "mirror maps require a field order divisible by 4, got {order}"
                    )));
                }
                let &(a_col, a_tok) = tokens
                    .get(2)
                    .ok_or_else(|| syntax(lineno, head_col, "map needs `a=<scalar>`"))?;
                let a = parse_keyed_scalar(a_tok, "a", order, lineno, a_col)?;
                let &(b_col, b_tok) = tokens
                    .get(3)
                    .ok_or_else(|| syntax(lineno, head_col, "map needs `b=<scalar>`"))?;
                let b = parse_keyed_scalar(b_tok, "b", order, lineno, b_col)?;
                if a.is_zero() {
                    return Err(syntax(lineno, a_col, "map coefficient a must be nonzero"));
                }
                maps.push(Similarity::new(a, b, mirror));
            }
            "group" => {
                let order = field_order
                    .ok_or_else(|| syntax(lineno, head_col, "field order must be declared first"))?;
                if group.is_some() {
                    return Err(syntax(lineno, head_col, "duplicate group declaration"));
                }
                let &(kind_col, kind) = tokens
                    .get(1)
                    .ok_or_else(|| syntax(lineno, head_col, "group needs `cyclic` or `dihedral`"))?;
                let dihedral = match kind {
                    "cyclic" => false,
                    "dihedral" => true,
                    other => {
                        return Err(syntax(
                            lineno,
                            kind_col,
                            format!("expected `cyclic` or `dihedral`, found `{other}`"),
                        ))
                    }
                };
                let &(n_col, n_tok) = tokens
                    .get(2)
                    .ok_or_else(|| syntax(lineno, head_col, "group needs an order"))?;
                let n: u32 = n_tok
                    .parse()
                    .map_err(|_| syntax(lineno, n_col, format!("invalid group order `{n_tok}`")))?;
                let &(c_col, c_tok) = tokens
                    .get(3)
                    .ok_or_else(|| syntax(lineno, head_col, "group needs `center=<scalar>`"))?;
                let center = {
                    let rest = c_tok.strip_prefix("center=").ok_or_else(|| {
                        syntax(lineno, c_col, format!("expected `center=<scalar>`, found `{c_tok}`"))
                    })?;
                    parse_scalar(rest, order, lineno, c_col)?
                };
                let axis = if dihedral {
                    let &(x_col, x_tok) = tokens
                        .get(4)
                        .ok_or_else(|| syntax(lineno, head_col, "dihedral group needs `axis=<k>`"))?;
                    let rest = x_tok.strip_prefix("axis=").ok_or_else(|| {
                        syntax(lineno, x_col, format!("expected `axis=<k>`, found `{x_tok}`"))
                    })?;
                    rest.parse::<u32>()
                        .map_err(|_| syntax(lineno, x_col, format!("invalid axis index `{rest}`")))?
                } else {
                    0
                };
                let spec = GroupSpec { dihedral, n, center, axis };
                // Materialize once to surface field-compatibility mistakes here.
                SymmetryGroup::from_spec(&spec, order)?;
                group = Some(spec);
            }
            other => {
                return Err(syntax(
                    lineno,
                    head_col,
                    format!("unknown directive `{other}`"),
                ))
            }
        }
    }

    let order =
        field_order.ok_or_else(|| syntax(last_line + 1, 1, "missing field declaration"))?;
    let polygon =
        polygon.ok_or_else(|| syntax(last_line + 1, 1, "missing polygon declaration"))?;
    if maps.is_empty() {
        return Err(syntax(last_line + 1, 1, "missing map declarations"));
    }
    PolygonalSystem::new(polygon, maps, group, order)
}

/// Canonical serialization; parse(serialize(s)) reproduces s exactly.
pub fn serialize_system(system: &PolygonalSystem) -> String {
    let mut out = String::new();
    out.push_str(&format!("field {}\n", system.field_order()));
    out.push_str("polygon");
    for v in system.base().vertices() {
        out.push_str(&format!(" {v}"));
    }
    out.push('\n');
    for m in system.maps() {
        let kind = if m.mirror { "mirror" } else { "direct" };
        out.push_str(&format!("map {kind} a={} b={}\n", m.a, m.b));
    }
    if let Some(g) = system.group() {
        if g.dihedral {
            out.push_str(&format!(
                "group dihedral {} center={} axis={}\n",
                g.n, g.center, g.axis
            ));
        } else {
            out.push_str(&format!("group cyclic {} center={}\n", g.n, g.center));
        }
    }
    out
}
