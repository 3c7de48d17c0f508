//! The expression language for index functions `g(k)`.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' unary)?          right-associative
//! atom     := number | 'pi' | 'e' | 'k' | func '(' expr ')' | '(' expr ')'
//! func     := sin | cos | exp | log | sqrt
//! ```

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet::{as_small_integer, Jet, Scalar};
use crate::series::IndexFn;

type C64 = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Sin, Func::Cos, Func::Exp, Func::Log, Func::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    fn apply<S: Scalar>(self, x: &S) -> S {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Exp => x.exp(),
            Func::Log => x.ln(),
            Func::Sqrt => x.sqrt(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }
}

/// Parse tree. Literals are nonnegative; negation is always a `Neg` node.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Const(Constant),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn contains_var(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Neg(x) | Expr::Call(_, x) => x.contains_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.contains_var() || b.contains_var()
            }
        }
    }

    /// Value of a subtree free of `k`.
    pub fn const_value(&self) -> Option<C64> {
        if self.contains_var() {
            return None;
        }
        self.eval_scalar(C64::new(0.0, 0.0)).ok()
    }

    pub fn eval_scalar<S: Scalar>(&self, k: S) -> Result<S> {
        let checked = |v: S, node: &Expr| -> Result<S> {
            if v.all_finite() {
                Ok(v)
            } else {
                Err(Error::eval_at(
                    format!("k = {}", k.value()),
                    format!("`{node}` is not finite"),
                ))
            }
        };
        let v = match self {
            Expr::Num(x) => S::lift(C64::new(*x, 0.0), &k),
            Expr::Const(c) => S::lift(C64::new(c.value(), 0.0), &k),
            Expr::Var => k,
            Expr::Neg(x) => -x.eval_scalar(k)?,
            Expr::Add(a, b) => a.eval_scalar(k)? + b.eval_scalar(k)?,
            Expr::Sub(a, b) => a.eval_scalar(k)? - b.eval_scalar(k)?,
            Expr::Mul(a, b) => a.eval_scalar(k)? * b.eval_scalar(k)?,
            Expr::Div(a, b) => a.eval_scalar(k)? / b.eval_scalar(k)?,
            Expr::Pow(a, b) => {
                let base = a.eval_scalar(k)?;
                match b.const_value().and_then(as_small_integer) {
                    Some(i) => base.powi(i),
                    None => base.powc(&b.eval_scalar(k)?),
                }
            }
            Expr::Call(f, x) => f.apply(&x.eval_scalar(k)?),
        };
        checked(v, self)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let paren = self.precedence() < min_prec;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Expr::Num(x) => {
                let a = x.abs();
                if a != 0.0 && !(1e-5..1e16).contains(&a) {
                    write!(f, "{x:e}")?
                } else {
                    write!(f, "{x}")?
                }
            }
            Expr::Const(Constant::Pi) => f.write_str("pi")?,
            Expr::Const(Constant::E) => f.write_str("e")?,
            Expr::Var => f.write_str("k")?,
            Expr::Neg(x) => {
                f.write_str("-")?;
                x.write_at(f, 3)?;
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                b.write_at(f, 2)?;
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(if matches!(self, Expr::Mul(..)) { "*" } else { "/" })?;
                b.write_at(f, 3)?;
            }
            Expr::Pow(a, b) => {
                a.write_at(f, 5)?;
                f.write_str("^")?;
                b.write_at(f, 3)?;
            }
            Expr::Call(func, x) => {
                write!(f, "{}(", func.name())?;
                x.write_at(f, 0)?;
                f.write_str(")")?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

/// A parsed index function together with its source text.
#[derive(Clone, Debug, PartialEq)]
pub struct Expression {
    text: String,
    root: Expr,
}

impl Expression {
    pub fn parse(text: &str) -> Result<Self> {
        parse_expression(text)
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    pub fn evaluate(&self, k: C64) -> Result<C64> {
        self.root.eval_scalar(k)
    }

    pub fn evaluate_jet(&self, k: &Jet) -> Result<Jet> {
        self.root.eval_scalar(*k)
    }
}

impl IndexFn for Expression {
    fn eval(&self, z: C64) -> C64 {
        self.evaluate(z).unwrap_or(C64::new(f64::NAN, f64::NAN))
    }

    fn eval_jet(&self, z: &Jet) -> Option<Jet> {
        self.evaluate_jet(z).ok()
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    token: Token,
    token_start: usize,
}

const ATOM_START: &[&str] = &["number", "pi", "e", "k", "function", "(", "-"];
const AFTER_OPERAND: &[&str] = &["+", "-", "*", "/", "^", "end of input"];

fn syntax(offset: usize, expected: &[&str]) -> Error {
    Error::Syntax {
        offset,
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self> {
        let mut p = Parser {
            src,
            pos: 0,
            token: Token::End,
            token_start: 0,
        };
        p.advance(ATOM_START)?;
        Ok(p)
    }

    /// Lexes the next token; `expected` describes what the grammar wants
    /// here, for error reporting.
    fn advance(&mut self, expected: &[&str]) -> Result<()> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.token_start = self.pos;
        if self.pos >= bytes.len() {
            self.token = Token::End;
            return Ok(());
        }
        let c = bytes[self.pos];
        self.token = match c {
            b'0'..=b'9' | b'.' => self.lex_number(expected)?,
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = self.pos;
                while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_') {
                    self.pos += 1;
                }
                Token::Ident(self.src[start..self.pos].to_string())
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                self.pos += 1;
                Token::Op(c as char)
            }
            b'(' => {
                self.pos += 1;
                Token::LParen
            }
            b')' => {
                self.pos += 1;
                Token::RParen
            }
            _ => return Err(syntax(self.pos, expected)),
        };
        Ok(())
    }

    fn lex_number(&mut self, expected: &[&str]) -> Result<Token> {
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let digits = |p: &mut usize| {
            let s = *p;
            while *p < bytes.len() && bytes[*p].is_ascii_digit() {
                *p += 1;
            }
            *p - s
        };
        let mut n = digits(&mut self.pos);
        if self.pos < bytes.len() && bytes[self.pos] == b'.' {
            self.pos += 1;
            n += digits(&mut self.pos);
        }
        if n == 0 {
            return Err(syntax(start, expected));
        }
        if self.pos < bytes.len() && (bytes[self.pos] == b'e' || bytes[self.pos] == b'E') {
            // only an exponent if digits follow; otherwise `e` is the constant
            let mut q = self.pos + 1;
            if q < bytes.len() && (bytes[q] == b'+' || bytes[q] == b'-') {
                q += 1;
            }
            if digits(&mut q) > 0 {
                self.pos = q;
            }
        }
        let text = &self.src[start..self.pos];
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Token::Num(v)),
            _ => Err(syntax(start, &["finite number"])),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Token::Op(op @ ('+' | '-')) = self.token {
            self.advance(ATOM_START)?;
            let rhs = self.term()?;
            lhs = if op == '+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Token::Op(op @ ('*' | '/')) = self.token {
            self.advance(ATOM_START)?;
            let rhs = self.unary()?;
            lhs = if op == '*' {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.token == Token::Op('-') {
            self.advance(ATOM_START)?;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.token == Token::Op('^') {
            self.advance(ATOM_START)?;
            let exponent = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let start = self.token_start;
        match std::mem::replace(&mut self.token, Token::End) {
            Token::Num(v) => {
                self.advance(AFTER_OPERAND)?;
                Ok(Expr::Num(v))
            }
            Token::LParen => {
                self.advance(ATOM_START)?;
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Token::Ident(name) => match name.as_str() {
                "k" => {
                    self.advance(AFTER_OPERAND)?;
                    Ok(Expr::Var)
                }
                "pi" => {
                    self.advance(AFTER_OPERAND)?;
                    Ok(Expr::Const(Constant::Pi))
                }
                "e" => {
                    self.advance(AFTER_OPERAND)?;
                    Ok(Expr::Const(Constant::E))
                }
                _ => {
                    let Some(func) = Func::ALL.into_iter().find(|f| f.name() == name) else {
                        return Err(syntax(start, ATOM_START));
                    };
                    self.advance(&["("])?;
                    if self.token != Token::LParen {
                        return Err(syntax(self.token_start, &["("]));
                    }
                    self.advance(ATOM_START)?;
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    Ok(Expr::Call(func, Box::new(arg)))
                }
            },
            _ => Err(syntax(start, ATOM_START)),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        if self.token != Token::RParen {
            return Err(syntax(self.token_start, &["+", "-", "*", "/", "^", ")"]));
        }
        self.advance(AFTER_OPERAND)
    }
}

pub fn parse_expression(text: &str) -> Result<Expression> {
    let mut p = Parser::new(text)?;
    let root = p.expr()?;
    if p.token != Token::End {
        return Err(syntax(p.token_start, AFTER_OPERAND));
    }
    Ok(Expression {
        text: text.to_string(),
        root,
    })
}
