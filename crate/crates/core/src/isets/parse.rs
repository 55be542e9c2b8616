//! Set-literal grammar.
//!
//! ```text
//! SET   := SHAPE ("|" SHAPE)*
//! SHAPE := "interval(NET,NET)" | "box(interval(..),...)"
//!        | "points((NET,...);(NET,...);...)" | "exterior(NET)"
//! ```
//!
//! Net literals use the net grammar; inside sets they may not contain comb
//! pieces (no ';'), keeping the syntax unambiguous.

use std::fmt;

use super::shape::{SetFamily, Shape};
use crate::nets::{parse_net, Net, VecNet};
use crate::{Error, Result};

pub fn parse_set(text: &str) -> Result<SetFamily> {
    let mut shapes = Vec::new();
    let mut dim: Option<usize> = None;
    for part in split_top(text, '|') {
        let part = part.trim();
        let shape = parse_shape(part)?;
        if let Some(d) = shape.own_dim() {
            match dim {
                None => dim = Some(d),
                Some(e) if e != d => {
                    return Err(Error::DimMismatch { expected: e, got: d })
                }
                _ => {}
            }
        }
        shapes.push(shape);
    }
    let dim = dim.unwrap_or(1);
    SetFamily::new(shapes, dim)
}

fn parse_shape(text: &str) -> Result<Shape> {
    let (head, body) = split_call(text)?;
    match head {
        "interval" => {
            let args = split_top(body, ',');
            if args.len() != 2 {
                return Err(Error::Syntax(format!("interval needs 2 nets: {text}")));
            }
            Ok(Shape::Interval { lo: net(args[0])?, hi: net(args[1])? })
        }
        "box" => {
            let mut intervals = Vec::new();
            for arg in split_top(body, ',') {
                let Shape::Interval { lo, hi } = parse_shape(arg.trim())? else {
                    return Err(Error::Syntax(format!("box needs interval(..) entries: {arg}")));
                };
                intervals.push((lo, hi));
            }
            Ok(Shape::Box { intervals })
        }
        "points" => {
            let mut pts = Vec::new();
            for group in split_top(body, ';') {
                let group = group.trim();
                let inner = group
                    .strip_prefix('(')
                    .and_then(|g| g.strip_suffix(')'))
                    .ok_or_else(|| Error::Syntax(format!("point needs (NET,...): {group}")))?;
                let comps = inner
                    .split(',')
                    .map(net)
                    .collect::<Result<Vec<_>>>()?;
                pts.push(VecNet::new(comps)?);
            }
            Ok(Shape::Points { pts })
        }
        "exterior" => Ok(Shape::Exterior { r: net(body)? }),
        _ => Err(Error::Syntax(format!("unknown shape: {head}"))),
    }
}

fn net(text: &str) -> Result<Net> {
    let text = text.trim();
    // Bare sums are accepted as tail-only nets.
    let wrapped;
    let src = if text.starts_with('[') {
        text
    } else {
        wrapped = format!("[tail] {text}");
        &wrapped
    };
    Ok(Net::Symbolic(parse_net(src)?))
}

/// Split on `sep` at paren depth 0.
fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            c if c == sep && depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

/// "head( body )" -> (head, body) with the matching close paren.
fn split_call(text: &str) -> Result<(&str, &str)> {
    let open = text
        .find('(')
        .ok_or_else(|| Error::Syntax(format!("shape needs '(': {text}")))?;
    if !text.ends_with(')') {
        return Err(Error::Syntax(format!("shape needs closing ')': {text}")));
    }
    Ok((text[..open].trim(), &text[open + 1..text.len() - 1]))
}

fn write_net(f: &mut fmt::Formatter<'_>, n: &Net) -> fmt::Result {
    match n {
        Net::Symbolic(p) if p.combs().is_empty() => write!(f, "{}", p.tail()),
        Net::Symbolic(p) => write!(f, "{p}"),
        Net::Sampled(_) => write!(f, "<sampled>"),
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Interval { lo, hi } => {
                write!(f, "interval(")?;
                write_net(f, lo)?;
                write!(f, ",")?;
                write_net(f, hi)?;
                write!(f, ")")
            }
            Shape::Box { intervals } => {
                write!(f, "box(")?;
                for (i, (lo, hi)) in intervals.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "interval(")?;
                    write_net(f, lo)?;
                    write!(f, ",")?;
                    write_net(f, hi)?;
                    write!(f, ")")?;
                }
                write!(f, ")")
            }
            Shape::Points { pts } => {
                write!(f, "points(")?;
                for (i, p) in pts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "(")?;
                    for (j, c) in p.components.iter().enumerate() {
                        if j > 0 {
                            write!(f, ",")?;
                        }
                        write_net(f, c)?;
                    }
                    write!(f, ")")?;
                }
                write!(f, ")")
            }
            Shape::Exterior { r } => {
                write!(f, "exterior(")?;
                write_net(f, r)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.shapes.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{s}")?;
        }
        if self.shapes.is_empty() {
            write!(f, "<empty>")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_interval_and_union() {
        let f = parse_set("interval(0, 1) | interval(2, 3)").unwrap();
        assert_eq!(f.shapes.len(), 2);
        assert_eq!(f.dim, 1);
    }

    #[test]
    fn parse_points_and_box() {
        let f = parse_set("points((0, 1*eps^1);(1, 2))").unwrap();
        assert_eq!(f.dim, 2);
        let f = parse_set("box(interval(0,1),interval(2,3))").unwrap();
        assert_eq!(f.dim, 2);
    }

    #[test]
    fn parse_exterior() {
        let f = parse_set("exterior(1*eps^-1)").unwrap();
        assert_eq!(f.shapes.len(), 1);
    }

    #[test]
    fn bad_shapes_rejected() {
        assert!(parse_set("disk(1)").is_err());
        assert!(parse_set("interval(1)").is_err());
        assert!(parse_set("interval(1, 0)").is_err());
    }
}
