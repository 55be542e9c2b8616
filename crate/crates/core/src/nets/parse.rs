//! Net-literal grammar.
//!
//! ```text
//! NET     := PIECE (";" PIECE)*
//! PIECE   := "[" PATTERN "]" SUM
//! PATTERN := "tail" | "comb" c q m r
//! SUM     := SIGNED_TERM+
//! TERM    := coeff "*eps^" expo | coeff | "NEGL"
//! ```
//!
//! Examples: `[tail] 1*eps^1` (the net of alpha), `[tail] 0` (the zero net),
//! `[comb 0.5 0.5 2 0] 1*eps^1 ; [tail] 1*eps^2`.

use std::fmt;

use super::comb::Comb;
use super::piecewise::PiecewiseNet;
use super::power_sum::{PowerSum, Term};
use crate::{Error, Result};

pub fn parse_net(text: &str) -> Result<PiecewiseNet> {
    let mut combs = Vec::new();
    let mut tail: Option<PowerSum> = None;
    for piece in text.split(';') {
        let piece = piece.trim();
        if piece.is_empty() {
            return Err(Error::Syntax("empty piece".into()));
        }
        let rest = piece
            .strip_prefix('[')
            .ok_or_else(|| Error::Syntax(format!("piece must start with '[': {piece}")))?;
        let close = rest
            .find(']')
            .ok_or_else(|| Error::Syntax(format!("missing ']' in piece: {piece}")))?;
        let pattern = rest[..close].trim();
        let sum = parse_sum(rest[close + 1..].trim())?;
        if pattern == "tail" {
            if tail.replace(sum).is_some() {
                return Err(Error::Syntax("more than one tail piece".into()));
            }
        } else if let Some(args) = pattern.strip_prefix("comb") {
            let nums: Vec<&str> = args.split_whitespace().collect();
            if nums.len() != 4 {
                return Err(Error::Syntax(format!("comb needs 4 arguments: {pattern}")));
            }
            let c: f64 = parse_num(nums[0])?;
            let q: f64 = parse_num(nums[1])?;
            let m: u32 = nums[2]
                .parse()
                .map_err(|_| Error::Syntax(format!("bad comb period: {}", nums[2])))?;
            let r: u32 = nums[3]
                .parse()
                .map_err(|_| Error::Syntax(format!("bad comb residue: {}", nums[3])))?;
            combs.push((Comb::new(c, q, m, r)?, sum));
        } else {
            return Err(Error::Syntax(format!("unknown pattern: {pattern}")));
        }
    }
    let tail = tail.ok_or_else(|| Error::Syntax("net needs exactly one tail piece".into()))?;
    PiecewiseNet::new(combs, tail)
}

fn parse_num(s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Syntax(format!("bad number: {s}")))
}

fn parse_sum(text: &str) -> Result<PowerSum> {
    if text.is_empty() {
        return Err(Error::Syntax("empty sum".into()));
    }
    let mut terms = Vec::new();
    let mut negl = false;
    // Split into signed terms: insert breaks before +/- that are not part of
    // an exponent (the char after '^' or 'e'/'E' inside a number).
    let chars: Vec<char> = text.chars().collect();
    let mut pieces: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (i, &ch) in chars.iter().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 {
            let prev = chars[..i]
                .iter()
                .rev()
                .find(|c| !c.is_whitespace())
                .copied()
                .unwrap_or(' ');
            if prev != '^' && prev != 'e' && prev != 'E' || cur.trim().is_empty() {
                if !cur.trim().is_empty() {
                    pieces.push(cur.clone());
                    cur.clear();
                }
            }
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        pieces.push(cur);
    }
    for raw in pieces {
        let mut t = raw.trim();
        let mut sign = 1.0;
        while let Some(rest) = t.strip_prefix('+').or_else(|| t.strip_prefix('-')) {
            if t.starts_with('-') {
                sign = -sign;
            }
            t = rest.trim_start();
        }
        if t == "NEGL" {
            negl = true;
            continue;
        }
        if let Some((coeff_s, expo_s)) = t.split_once("*eps^") {
            terms.push(Term {
                coeff: sign * parse_num(coeff_s.trim())?,
                expo: parse_num(expo_s.trim())?,
            });
        } else if let Some(expo_s) = t.strip_prefix("eps^") {
            terms.push(Term { coeff: sign, expo: parse_num(expo_s.trim())? });
        } else {
            terms.push(Term { coeff: sign * parse_num(t)?, expo: 0.0 });
        }
    }
    Ok(PowerSum::from_terms(terms, negl))
}

impl fmt::Display for PowerSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for t in self.terms() {
            if first {
                if t.coeff < 0.0 {
                    write!(f, "-")?;
                }
            } else if t.coeff < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if t.expo == 0.0 {
                write!(f, "{}", t.coeff.abs())?;
            } else {
                write!(f, "{}*eps^{}", t.coeff.abs(), t.expo)?;
            }
            first = false;
        }
        if self.has_negl() {
            if first {
                write!(f, "NEGL")?;
            } else {
                write!(f, " + NEGL")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for PiecewiseNet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (comb, v) in self.combs() {
            write!(f, "[comb {} {} {} {}] {} ; ", comb.c, comb.q, comb.m, comb.r, v)?;
        }
        write!(f, "[tail] {}", self.tail())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_alpha() {
        let net = parse_net("[tail] 1*eps^1").unwrap();
        assert_eq!(net, PiecewiseNet::alpha());
    }

    #[test]
    fn parse_zero() {
        let net = parse_net("[tail] 0").unwrap();
        assert!(net.is_zero());
    }

    #[test]
    fn parse_two_piece() {
        let net = parse_net("[comb 0.5 0.5 2 0] 1*eps^1 ; [tail] 1*eps^2").unwrap();
        assert_eq!(net.combs().len(), 1);
        assert_eq!(net.valuation(), 1.0);
    }

    #[test]
    fn overlapping_combs_rejected() {
        let err = parse_net("[comb 0.5 0.5 2 0] 1 ; [comb 0.5 0.5 2 0] 2 ; [tail] 0");
        assert!(matches!(err, Err(Error::Overlap(_))));
    }

    #[test]
    fn parse_signed_terms_and_negl() {
        let net = parse_net("[tail] -3*eps^1 + 1*eps^-2 - NEGL").unwrap();
        let t = net.tail();
        assert_eq!(t.terms().len(), 2);
        assert_eq!(t.valuation(), -2.0);
        assert!(t.has_negl());
    }

    #[test]
    fn parse_exponent_with_scientific_coeff() {
        let net = parse_net("[tail] 1e-3*eps^2 + 2").unwrap();
        assert_eq!(net.tail().terms().len(), 2);
        assert_eq!(net.valuation(), 0.0);
    }

    #[test]
    fn display_round_trip() {
        let s = "[comb 0.5 0.5 2 0] 1*eps^3 ; [tail] 1*eps^5 + NEGL";
        let net = parse_net(s).unwrap();
        let again = parse_net(&net.to_string()).unwrap();
        assert_eq!(net, again);
    }

    #[test]
    fn bad_grammar() {
        assert!(parse_net("1*eps^1").is_err());
        assert!(parse_net("[tail]").is_err());
        assert!(parse_net("[comb 0.5] 1 ; [tail] 0").is_err());
    }
}
