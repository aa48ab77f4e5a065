//! Recursive-descent parser for radial weight expressions `Q(r)`.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | 'r' | func '(' expr ')' | '(' expr ')'
//! func  := 'log' | 'exp' | 'sqrt'
//! ```

use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Log,
    Exp,
    Sqrt,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Log => "log",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    R,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: expected {expected}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EvalError {
    #[error("log of non-positive value {0}")]
    LogDomain(f64),
    #[error("sqrt of negative value {0}")]
    SqrtDomain(f64),
    #[error("expression evaluated to NaN at r = {0}")]
    NotANumber(f64),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.pos,
            expected: expected.to_string(),
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if c == b'+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if c == b'*' {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let func = match word {
                    "r" => return Ok(Expr::R),
                    "log" => Func::Log,
                    "exp" => Func::Exp,
                    "sqrt" => Func::Sqrt,
                    _ => {
                        self.pos = start;
                        return self.err("'r', 'log', 'exp' or 'sqrt'");
                    }
                };
                if self.peek() != Some(b'(') {
                    return self.err("'(' after function name");
                }
                self.pos += 1;
                let arg = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("')'");
                }
                self.pos += 1;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            _ => self.err("number, 'r', function or '('"),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return self.err("digits");
        }
        // exponent only when a digit follows, so "2e" stays an error elsewhere
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match text.parse::<f64>() {
            Ok(v) => Ok(Expr::Num(v)),
            Err(_) => {
                self.pos = start;
                self.err("number")
            }
        }
    }
}

pub fn parse_radial_expression(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("operator or end of input");
    }
    Ok(e)
}

impl Expr {
    pub fn eval(&self, r: f64) -> Result<f64, EvalError> {
        let v = self.eval_inner(r)?;
        if v.is_nan() {
            return Err(EvalError::NotANumber(r));
        }
        Ok(v)
    }

    fn eval_inner(&self, r: f64) -> Result<f64, EvalError> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::R => r,
            Expr::Neg(a) => -a.eval_inner(r)?,
            Expr::Add(a, b) => a.eval_inner(r)? + b.eval_inner(r)?,
            Expr::Sub(a, b) => a.eval_inner(r)? - b.eval_inner(r)?,
            Expr::Mul(a, b) => a.eval_inner(r)? * b.eval_inner(r)?,
            Expr::Div(a, b) => a.eval_inner(r)? / b.eval_inner(r)?,
            Expr::Pow(a, b) => a.eval_inner(r)?.powf(b.eval_inner(r)?),
            Expr::Call(f, a) => {
                let x = a.eval_inner(r)?;
                match f {
                    Func::Log if x <= 0.0 => return Err(EvalError::LogDomain(x)),
                    Func::Log => x.ln(),
                    Func::Exp => x.exp(),
                    Func::Sqrt if x < 0.0 => return Err(EvalError::SqrtDomain(x)),
                    Func::Sqrt => x.sqrt(),
                }
            }
        })
    }
}

/// Fully parenthesized; re-parses to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::R => write!(f, "r"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn evaluates_examples() {
        assert_eq!(parse_radial_expression("r^2").unwrap().eval(1.5).unwrap(), 2.25);
        let e = parse_radial_expression("0.5*r^2 + log(1+r)").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), 0.0);
        assert!((e.eval(1.0).unwrap() - (0.5 + 2f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn precedence_and_associativity() {
        let ev = |s: &str| parse_radial_expression(s).unwrap().eval(2.0).unwrap();
        assert_eq!(ev("1 + 2 * 3"), 7.0);
        assert_eq!(ev("2 ^ 3 ^ 2"), 512.0);
        assert_eq!(ev("-r^2"), -4.0);
        assert_eq!(ev("8 / 2 / 2"), 2.0);
        assert_eq!(ev("10 - 3 - 2"), 5.0);
        assert_eq!(ev("2^-1"), 0.5);
        assert_eq!(ev("1.5e1 + sqrt(r*8)"), 19.0);
        assert!((ev("exp(log(r))") - 2.0).abs() < 1e-15);
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let e = parse_radial_expression("r^^2").unwrap_err();
        assert_eq!(e.offset, 2);
        assert_eq!(parse_radial_expression("(r + 1").unwrap_err().offset, 6);
        assert_eq!(parse_radial_expression("foo(r)").unwrap_err().offset, 0);
        assert_eq!(parse_radial_expression("r r").unwrap_err().offset, 2);
        assert!(parse_radial_expression("").is_err());
        assert!(parse_radial_expression("log r").is_err());
    }

    #[test]
    fn domain_errors_surface_at_evaluation() {
        let e = parse_radial_expression("log(r)").unwrap();
        assert!(matches!(e.eval(0.0), Err(EvalError::LogDomain(_))));
        let e = parse_radial_expression("sqrt(r - 1)").unwrap();
        assert!(matches!(e.eval(0.5), Err(EvalError::SqrtDomain(_))));
        let e = parse_radial_expression("r/r").unwrap();
        assert!(matches!(e.eval(0.0), Err(EvalError::NotANumber(_))));
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0.0f64..1e6).prop_map(Expr::Num),
            (1u32..1000).prop_map(|k| Expr::Num(k as f64 / 7.0)),
            Just(Expr::R),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Pow(Box::new(a), Box::new(b))),
                inner.clone().prop_map(|a| Expr::Call(Func::Log, Box::new(a))),
                inner.clone().prop_map(|a| Expr::Call(Func::Exp, Box::new(a))),
                inner.prop_map(|a| Expr::Call(Func::Sqrt, Box::new(a))),
            ]
        })
    }

    proptest! {
        #[test]
        fn pretty_print_round_trips(e in arb_expr()) {
            let printed = e.to_string();
            let back = parse_radial_expression(&printed).unwrap();
            prop_assert_eq!(back, e);
        }
    }
}
