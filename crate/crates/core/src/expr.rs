//! Scalar expressions in `x` and `y`.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?          right associative
//! primary := NUMBER | 'x' | 'y' | 'pi' | FUNC '(' expr ')' | '(' expr ')'
//! FUNC    := sin | cos | exp | sqrt | ln
//! ```
//!
//! Only smooth primitives are accepted. Expressions evaluate over `f64` and
//! over [`Jet2`], so one parsed function yields both values and derivatives.

use std::fmt;

use crate::error::{Error, Result};
use crate::jets::{pow_by_squaring, Jet2};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
    Ln,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            "ln" => Func::Ln,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Ln => "ln",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Y,
    Pi,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Values an [`Expr`] can be evaluated over.
pub trait Evaluable: Clone {
    /// A constant of the same shape as `self`.
    fn lift(&self, value: f64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div(&self, other: &Self) -> Result<Self>;
    fn apply(&self, func: Func) -> Result<Self>;
    fn powi(&self, exponent: i64) -> Result<Self>;
    fn powf(&self, exponent: f64) -> Result<Self>;
}

impl Evaluable for f64 {
    fn lift(&self, value: f64) -> f64 {
        value
    }
    fn add(&self, other: &f64) -> f64 {
        self + other
    }
    fn sub(&self, other: &f64) -> f64 {
        self - other
    }
    fn mul(&self, other: &f64) -> f64 {
        self * other
    }
    fn neg(&self) -> f64 {
        -self
    }
    fn div(&self, other: &f64) -> Result<f64> {
        if *other == 0.0 {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(self / other)
    }
    fn apply(&self, func: Func) -> Result<f64> {
        let v = *self;
        Ok(match func {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Exp => v.exp(),
            Func::Sqrt => {
                if v < 0.0 {
                    return Err(Error::Domain(format!("sqrt of negative value {v}")));
                }
                v.sqrt()
            }
            Func::Ln => {
                if v <= 0.0 {
                    return Err(Error::Domain(format!("ln of non-positive value {v}")));
                }
                v.ln()
            }
        })
    }
    fn powi(&self, exponent: i64) -> Result<f64> {
        let positive = pow_by_squaring(*self, exponent.unsigned_abs(), 1.0, |a, b| a * b);
        if exponent < 0 {
            Evaluable::div(&1.0, &positive)
        } else {
            Ok(positive)
        }
    }
    fn powf(&self, exponent: f64) -> Result<f64> {
        if *self < 0.0 {
            return Err(Error::Domain(format!("real power of negative value {self}")));
        }
        Ok(f64::powf(*self, exponent))
    }
}

impl Evaluable for Jet2 {
    fn lift(&self, value: f64) -> Jet2 {
        Jet2::constant(value, self.degree())
    }
    fn add(&self, other: &Jet2) -> Jet2 {
        self + other
    }
    fn sub(&self, other: &Jet2) -> Jet2 {
        self - other
    }
    fn mul(&self, other: &Jet2) -> Jet2 {
        self * other
    }
    fn neg(&self) -> Jet2 {
        -self
    }
    fn div(&self, other: &Jet2) -> Result<Jet2> {
        self.try_div(other)
    }
    fn apply(&self, func: Func) -> Result<Jet2> {
        match func {
            Func::Sin => Ok(self.sin()),
            Func::Cos => Ok(self.cos()),
            Func::Exp => Ok(self.exp()),
            Func::Sqrt => self.sqrt(),
            Func::Ln => self.ln(),
        }
    }
    fn powi(&self, exponent: i64) -> Result<Jet2> {
        Jet2::powi(self, exponent)
    }
    fn powf(&self, exponent: f64) -> Result<Jet2> {
        Jet2::powf(self, exponent)
    }
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        parse(text)
    }

    /// Value if the expression contains no variables.
    pub fn constant_value(&self) -> Option<f64> {
        if self.has_variables() {
            return None;
        }
        self.eval(0.0, 0.0).ok()
    }

    pub fn has_variables(&self) -> bool {
        match self {
            Expr::X | Expr::Y => true,
            Expr::Num(_) | Expr::Pi => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.has_variables(),
            Expr::Bin(_, a, b) => a.has_variables() || b.has_variables(),
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        self.eval_over(&x, &y)
    }

    /// Evaluates over jets seeded at the expansion center.
    pub fn eval_jet2(&self, x: &Jet2, y: &Jet2) -> Result<Jet2> {
        assert_eq!(x.degree(), y.degree(), "jet degree mismatch");
        self.eval_over(x, y)
    }

    /// Taylor expansion of the expression about `(x0, y0)` to total degree `degree`.
    pub fn taylor(&self, x0: f64, y0: f64, degree: usize) -> Result<Jet2> {
        use crate::jets::Seed;
        self.eval_jet2(&Jet2::seed(x0, Seed::X, degree), &Jet2::seed(y0, Seed::Y, degree))
    }

    pub fn eval_over<T: Evaluable>(&self, x: &T, y: &T) -> Result<T> {
        Ok(match self {
            Expr::Num(v) => x.lift(*v),
            Expr::Pi => x.lift(std::f64::consts::PI),
            Expr::X => x.clone(),
            Expr::Y => y.clone(),
            Expr::Neg(a) => a.eval_over(x, y)?.neg(),
            Expr::Call(f, a) => a.eval_over(x, y)?.apply(*f)?,
            Expr::Bin(op, a, b) => {
                let lhs = a.eval_over(x, y)?;
                match op {
                    BinOp::Add => lhs.add(&b.eval_over(x, y)?),
                    BinOp::Sub => lhs.sub(&b.eval_over(x, y)?),
                    BinOp::Mul => lhs.mul(&b.eval_over(x, y)?),
                    BinOp::Div => lhs.div(&b.eval_over(x, y)?)?,
                    BinOp::Pow => match b.constant_value() {
                        Some(e) if e.fract() == 0.0 && e.abs() < 1e9 => lhs.powi(e as i64)?,
                        Some(e) => lhs.powf(e)?,
                        None => {
                            // a^b = exp(b ln a) for a variable exponent
                            let ln = lhs.apply(Func::Ln)?;
                            ln.mul(&b.eval_over(x, y)?).apply(Func::Exp)?
                        }
                    },
                }
            }
        })
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesized form; re-parses to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::X => f.write_str("x"),
            Expr::Y => f.write_str("y"),
            Expr::Pi => f.write_str("pi"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Bin(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Expr> {
        parse(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || c == '.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let literal = &text[start..i];
            let value: f64 = literal
                .parse()
                .map_err(|_| Error::Syntax { pos: start, msg: format!("malformed number `{literal}`") })?;
            if !value.is_finite() {
                return Err(Error::Syntax { pos: start, msg: format!("number `{literal}` overflows") });
            }
            out.push((Tok::Num(value), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
        } else {
            let tok = match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(Error::Syntax { pos: start, msg: format!("unexpected character `{c}`") }),
            };
            out.push((tok, start));
            i += c.len_utf8();
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if *self.peek() == Tok::Op('^') {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let start = self.offset();
        match self.bump() {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(Expr::X),
                "y" => Ok(Expr::Y),
                "pi" => Ok(Expr::Pi),
                _ => match Func::from_name(&name) {
                    Some(func) => {
                        self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
                        let arg = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(Expr::Call(func, Box::new(arg)))
                    }
                    None => Err(Error::UnknownIdentifier { name, pos: start }),
                },
            },
            Tok::End => Err(Error::Syntax { pos: start, msg: "unexpected end of input".into() }),
            tok => Err(Error::Syntax { pos: start, msg: format!("unexpected token {tok:?}") }),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    if text.trim().is_empty() {
        return Err(Error::Syntax { pos: 0, msg: "empty expression".into() });
    }
    let mut parser = Parser { tokens: tokenize(text)?, pos: 0 };
    let expr = parser.expr()?;
    if *parser.peek() != Tok::End {
        return parser.error("unexpected trailing input");
    }
    Ok(expr)
}
