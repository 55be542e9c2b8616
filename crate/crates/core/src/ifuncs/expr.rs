//! Expression bodies for internal functions.
//!
//! ```text
//! EXPR   := TERM (("+"|"-") TERM)*
//! TERM   := FACTOR (("*"|"/") FACTOR)*
//! FACTOR := "-" FACTOR | ATOM ("^" FACTOR)?   ('^' right associative)
//! ATOM   := number | "x" | "eps" | "abs" "(" EXPR ")" | "(" EXPR ")"
//! ```
//!
//! Evaluation happens in the signed log-magnitude domain so that nets like
//! eps^(1/x) keep their decay order far below f64 underflow.

use crate::nets::Sample;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    X,
    Eps,
    Lit(f64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Abs(Box<Expr>),
}

impl Expr {
    /// Signed log-magnitude evaluation at a real point.
    pub fn eval_log(&self, x: f64, eps: f64) -> Result<Sample> {
        Ok(match self {
            Expr::X => Sample::from_value(x),
            Expr::Eps => Sample { sign: 1, logmag: eps.ln() },
            Expr::Lit(c) => Sample::from_value(*c),
            Expr::Add(a, b) => a.eval_log(x, eps)?.add(&b.eval_log(x, eps)?),
            Expr::Sub(a, b) => a.eval_log(x, eps)?.add(&b.eval_log(x, eps)?.neg()),
            Expr::Mul(a, b) => a.eval_log(x, eps)?.mul(&b.eval_log(x, eps)?),
            Expr::Div(a, b) => {
                let d = b.eval_log(x, eps)?;
                if d.sign == 0 {
                    return Err(Error::DomainEvaluation(format!(
                        "division by zero at x = {x}"
                    )));
                }
                let n = a.eval_log(x, eps)?;
                Sample { sign: n.sign * d.sign, logmag: n.logmag - d.logmag }
            }
            Expr::Pow(a, b) => {
                let base = a.eval_log(x, eps)?;
                let expo = b.eval_log(x, eps)?.value();
                if !expo.is_finite() {
                    return Err(Error::DomainEvaluation(format!(
                        "non-finite exponent at x = {x}"
                    )));
                }
                match base.sign {
                    0 if expo > 0.0 => Sample { sign: 0, logmag: f64::NEG_INFINITY },
                    0 => {
                        return Err(Error::DomainEvaluation(format!(
                            "zero base with exponent {expo} at x = {x}"
                        )))
                    }
                    1 => Sample { sign: 1, logmag: expo * base.logmag },
                    _ => {
                        if expo.fract() != 0.0 {
                            return Err(Error::DomainEvaluation(format!(
                                "negative base with non-integer exponent at x = {x}"
                            )));
                        }
                        let sign = if (expo as i64) % 2 == 0 { 1 } else { -1 };
                        Sample { sign, logmag: expo * base.logmag }
                    }
                }
            }
            Expr::Neg(a) => a.eval_log(x, eps)?.neg(),
            Expr::Abs(a) => a.eval_log(x, eps)?.abs(),
        })
    }

    /// Saturating linear-domain value.
    pub fn eval(&self, x: f64, eps: f64) -> Result<f64> {
        Ok(self.eval_log(x, eps)?.value())
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Syntax(format!(
            "trailing input after expression: {:?}",
            &p.tokens[p.pos..]
        )));
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    X,
    Eps,
    Abs,
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push(Tok::Op(c));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_digit()
                        || chars[i] == '.'
                        || chars[i] == 'e'
                        || chars[i] == 'E'
                        || ((chars[i] == '+' || chars[i] == '-')
                            && matches!(chars[i - 1], 'e' | 'E')))
                {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Tok::Num(s.parse().map_err(|_| {
                    Error::Syntax(format!("bad number: {s}"))
                })?));
            }
            c if c.is_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_alphanumeric() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(match s.as_str() {
                    "x" => Tok::X,
                    "eps" => Tok::Eps,
                    "abs" => Tok::Abs,
                    _ => return Err(Error::Syntax(format!("unknown identifier: {s}"))),
                });
            }
            _ => return Err(Error::Syntax(format!("unexpected character: {c}"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat_op(&mut self, op: char) -> Result<()> {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Syntax(format!("expected '{op}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            e = if op == '+' {
                Expr::Add(Box::new(e), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(e), Box::new(rhs))
            };
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.factor()?;
        while let Some(Tok::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.factor()?;
            e = if op == '*' {
                Expr::Mul(Box::new(e), Box::new(rhs))
            } else {
                Expr::Div(Box::new(e), Box::new(rhs))
            };
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<Expr> {
        // Unary minus binds looser than '^': -x^2 = -(x^2).
        if self.peek() == Some(&Tok::Op('-')) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Op('^')) {
            self.pos += 1;
            let expo = self.factor()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(expo)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Expr::Lit(v))
            }
            Some(Tok::X) => {
                self.pos += 1;
                Ok(Expr::X)
            }
            Some(Tok::Eps) => {
                self.pos += 1;
                Ok(Expr::Eps)
            }
            Some(Tok::Abs) => {
                self.pos += 1;
                self.eat_op('(')?;
                let e = self.expr()?;
                self.eat_op(')')?;
                Ok(Expr::Abs(Box::new(e)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.eat_op(')')?;
                Ok(e)
            }
            t => Err(Error::Syntax(format!("unexpected token: {t:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_evaluate() {
        let f = parse_expr("x^2/(1+x^2)").unwrap();
        assert!((f.eval(1.0, 0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!((f.eval(2.0, 0.5).unwrap() - 0.8).abs() < 1e-15);
        let g = parse_expr("x/(1-x)").unwrap();
        assert!((g.eval(0.5, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!(g.eval(1.0, 0.5).is_err());
    }

    #[test]
    fn eps_powers_stay_in_log_domain() {
        let f = parse_expr("eps^(1/x)").unwrap();
        let eps = 2f64.powi(-40);
        // At x = eps the value is eps^{1/eps}: far below f64 underflow but
        // exactly representable as a log-magnitude.
        let s = f.eval_log(eps, eps).unwrap();
        assert_eq!(s.sign, 1);
        assert!((s.logmag - eps.ln() / eps).abs() < 1e-3 * s.logmag.abs());
    }

    #[test]
    fn precedence_and_unary() {
        let f = parse_expr("-x^2 + 2*x").unwrap();
        assert!((f.eval(3.0, 0.5).unwrap() - (-3.0)).abs() < 1e-12);
        let g = parse_expr("abs(-2*x)").unwrap();
        assert!((g.eval(1.5, 0.5).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn bad_expressions_rejected() {
        assert!(parse_expr("x +").is_err());
        assert!(parse_expr("y").is_err());
        assert!(parse_expr("abs x").is_err());
        assert!(parse_expr("(x").is_err());
    }
}
