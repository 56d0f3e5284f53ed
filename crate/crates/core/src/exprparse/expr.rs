use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::ring::{Poly, RatFunc, Rational};

/// Largest accepted literal exponent.
pub const MAX_EXPONENT: u32 = 64;
/// Largest total degree an evaluated expression may reach.
pub const MAX_DEGREE: u32 = 256;
/// Nesting limit for parentheses and unary minus.
pub const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {position}: expected one of {expected:?}, found {found}")]
    Syntax {
        position: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("unknown variable `{name}` at {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("exponent too large at {position} (limit {MAX_EXPONENT})")]
    ExponentTooLarge { position: usize },
    #[error("expression degree exceeds {MAX_DEGREE} at {position}")]
    DegreeTooLarge { position: usize },
    #[error("nesting deeper than {MAX_DEPTH} at {position}")]
    TooDeep { position: usize },
    #[error("division by zero at {position}")]
    DivisionByZero { position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::UnknownVariable { position, .. }
            | ParseError::ExponentTooLarge { position }
            | ParseError::DegreeTooLarge { position }
            | ParseError::TooDeep { position }
            | ParseError::DivisionByZero { position } => *position,
        }
    }
}

/// Expression tree. Literals are non-negative; negation is explicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Int(_) | Expr::Var(_) => 5,
        }
    }

    /// Evaluate over the given variable names.
    pub fn eval(&self, vars: &[String]) -> Result<RatFunc, ParseError> {
        self.eval_at(vars, 0)
    }

    fn eval_at(&self, vars: &[String], position: usize) -> Result<RatFunc, ParseError> {
        let n = vars.len();
        let out = match self {
            Expr::Int(i) => RatFunc::constant(n, Rational::from_integer(i.clone())),
            Expr::Var(name) => match vars.iter().position(|v| v == name) {
                Some(i) => RatFunc::var(n, i),
                None => {
                    return Err(ParseError::UnknownVariable {
                        name: name.clone(),
                        position,
                    })
                }
            },
            Expr::Neg(a) => -a.eval_at(vars, position)?,
            Expr::Add(a, b) => a.eval_at(vars, position)? + b.eval_at(vars, position)?,
            Expr::Sub(a, b) => a.eval_at(vars, position)? - b.eval_at(vars, position)?,
            Expr::Mul(a, b) => a.eval_at(vars, position)? * b.eval_at(vars, position)?,
            Expr::Div(a, b) => {
                let d = b.eval_at(vars, position)?;
                a.eval_at(vars, position)?
                    .checked_div(&d)
                    .map_err(|_| ParseError::DivisionByZero { position })?
            }
            Expr::Pow(a, k) => {
                let base = a.eval_at(vars, position)?;
                let deg = base.num().total_degree().max(base.den().total_degree());
                if deg.saturating_mul(*k) > MAX_DEGREE {
                    return Err(ParseError::DegreeTooLarge { position });
                }
                base.pow(*k)
            }
        };
        check_degree(&out, position)?;
        Ok(out)
    }
}

fn check_degree(f: &RatFunc, position: usize) -> Result<(), ParseError> {
    if f.num().total_degree() > MAX_DEGREE || f.den().total_degree() > MAX_DEGREE {
        return Err(ParseError::DegreeTooLarge { position });
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Int(i) => write!(f, "{i}"),
            Expr::Var(v) => f.write_str(v),
            Expr::Neg(a) => {
                f.write_str("-")?;
                child(f, a, 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                child(f, a, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                child(f, b, 2)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                child(f, a, 2)?;
                f.write_str(if matches!(self, Expr::Mul(..)) { "*" } else { "/" })?;
                child(f, b, 3)
            }
            Expr::Pow(a, k) => {
                child(f, a, 4)?;
                write!(f, "^{k}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(i) => format!("number {i}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Op(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        }
    }
}

const OPERAND: &[&str] = &["number", "identifier", "(", "-"];

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let digits = &text[start..i];
            out.push((Tok::Int(digits.parse().expect("ascii digits")), start));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'#') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
        } else if b"+-*/^()".contains(&c) {
            out.push((Tok::Op(c as char), i));
            i += 1;
        } else {
            let found = text[i..].chars().next().map_or_else(String::new, |ch| format!("`{ch}`"));
            return Err(ParseError::Syntax {
                position: i,
                expected: vec!["number", "identifier", "operator", "(", ")"],
                found,
            });
        }
    }
    out.push((Tok::End, bytes.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError::Syntax {
            position: self.offset(),
            expected: expected.to_vec(),
            found: self.peek().describe(),
        }
    }

    fn descend(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::TooDeep {
                position: self.offset(),
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Op('/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == &Tok::Op('-') {
            self.pos += 1;
            self.descend()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.atom()?;
        while self.peek() == &Tok::Op('^') {
            self.pos += 1;
            let at = self.offset();
            let Tok::Int(k) = self.peek().clone() else {
                return Err(self.error(&["non-negative integer exponent"]));
            };
            self.pos += 1;
            let k = u32::try_from(k)
                .ok()
                .filter(|k| *k <= MAX_EXPONENT)
                .ok_or(ParseError::ExponentTooLarge { position: at })?;
            base = Expr::Pow(Box::new(base), k);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(i) => {
                self.pos += 1;
                Ok(Expr::Int(i))
            }
            Tok::Ident(s) => {
                self.pos += 1;
                Ok(Expr::Var(s))
            }
            Tok::Op('(') => {
                self.pos += 1;
                self.descend()?;
                let inner = self.expr()?;
                self.depth -= 1;
                if self.peek() != &Tok::Op(')') {
                    return Err(self.error(&[")", "+", "-", "*", "/", "^"]));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error(OPERAND)),
        }
    }
}

/// Parse text into an expression tree without resolving variables.
pub fn parse_ast(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        depth: 0,
    };
    let e = p.expr()?;
    if p.peek() != &Tok::End {
        return Err(p.error(&["+", "-", "*", "/", "^", "end of input"]));
    }
    Ok(e)
}

/// Parse and evaluate an expression over the given variables. Unknown
/// identifiers are rejected with their position.
pub fn parse_expr(text: &str, variables: &[String]) -> Result<RatFunc, ParseError> {
    let toks = lex(text)?;
    // Resolve identifiers up front so the error carries the exact position.
    for (t, at) in &toks {
        if let Tok::Ident(name) = t {
            if !variables.contains(name) {
                return Err(ParseError::UnknownVariable {
                    name: name.clone(),
                    position: *at,
                });
            }
        }
    }
    let mut p = Parser {
        toks,
        pos: 0,
        depth: 0,
    };
    let e = p.expr()?;
    if p.peek() != &Tok::End {
        return Err(p.error(&["+", "-", "*", "/", "^", "end of input"]));
    }
    e.eval(variables)
}

/// Render a rational function so that [`parse_expr`] reads it back exactly.
pub fn print_ratfunc(f: &RatFunc, variables: &[String]) -> String {
    f.format_with(variables)
}

/// Polynomial-only convenience used by tests and file readers.
pub fn parse_poly(text: &str, variables: &[String]) -> Result<Poly, ParseError> {
    let f = parse_expr(text, variables)?;
    if f.is_polynomial() {
        Ok(f.num().clone())
    } else {
        Err(ParseError::Syntax {
            position: 0,
            expected: vec!["polynomial"],
            found: "rational function".to_string(),
        })
    }
}

impl Expr {
    pub fn int(i: i64) -> Expr {
        if i < 0 {
            Expr::Neg(Box::new(Expr::Int(BigInt::from(-i))))
        } else {
            Expr::Int(BigInt::from(i))
        }
    }

    pub fn is_zero_literal(&self) -> bool {
        matches!(self, Expr::Int(i) if i.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars() -> Vec<String> {
        vec!["u1".into(), "u2".into()]
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse_ast("1 - 2 - 3").unwrap();
        assert_eq!(e.to_string(), "1 - 2 - 3");
        let e = parse_ast("1 - (2 - 3)").unwrap();
        assert_eq!(e.to_string(), "1 - (2 - 3)");
        let e = parse_ast("-u1^2").unwrap();
        assert_eq!(e, Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Var("u1".into())), 2))));
        let f = parse_expr("2*u1^2/4 - u2", &vars()).unwrap();
        assert_eq!(f.to_string(), "1/2*u1^2 - u2");
    }

    #[test]
    fn examples() {
        let f = parse_expr("u2^2", &vars()).unwrap();
        assert_eq!(f, RatFunc::var(2, 1).pow(2));
        let g = parse_expr("1/(u1*u2)", &vars()).unwrap();
        assert_eq!(g.den(), &(&Poly::var(2, 0) * &Poly::var(2, 1)));
        assert!(matches!(
            parse_expr("u3", &vars()),
            Err(ParseError::UnknownVariable { ref name, position: 0 }) if name == "u3"
        ));
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let err = parse_expr("2u1", &vars()).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { position: 1, .. }), "{err:?}");
    }

    #[test]
    fn structured_failures() {
        assert!(matches!(parse_expr("", &vars()), Err(ParseError::Syntax { position: 0, .. })));
        assert!(matches!(parse_expr("u1^-1", &vars()), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("u1^1000", &vars()), Err(ParseError::ExponentTooLarge { .. })));
        assert!(matches!(parse_expr("1/(u1-u1)", &vars()), Err(ParseError::DivisionByZero { .. })));
        assert!(matches!(parse_expr("(u1", &vars()), Err(ParseError::Syntax { position: 3, .. })));
        assert!(matches!(parse_expr("u1 $", &vars()), Err(ParseError::Syntax { position: 3, .. })));
        let deep = "(".repeat(500) + "1" + &")".repeat(500);
        assert!(matches!(parse_expr(&deep, &vars()), Err(ParseError::TooDeep { .. })));
        assert!(matches!(
            parse_expr("((u1+u2)^64)^64", &vars()),
            Err(ParseError::DegreeTooLarge { .. })
        ));
    }

    #[test]
    fn printed_rational_functions_reparse() {
        for text in ["(u1^2 - 1)/(u1 - 1)", "-3/4*u1/u2", "1/u1 + 1/u2", "u1#1"] {
            let names = vec!["u1".to_string(), "u2".to_string(), "u1#1".to_string()];
            let f = parse_expr(text, &names).unwrap();
            let printed = print_ratfunc(&f, &names);
            assert_eq!(parse_expr(&printed, &names).unwrap(), f, "{printed}");
        }
    }
}
