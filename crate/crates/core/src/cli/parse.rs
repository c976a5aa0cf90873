//! Text syntax for constants, rational functions, operators and matrices.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' exponent)?
//! atom  := integer | name | name '(' expr ')' | '(' expr ')'
//! ```
//!
//! Names: `z`, `phi`, tower generators `th1`, `th2`, …, bound parameters.
//! The only function is `sqrt`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::field::{AlgNum, Constants, Ctx, Level, RatFunc};
use crate::ore::{MatK, OreOp};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{msg} at position {pos}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|x| x.1).collect();
            out.push((pos, Tok::Int(text.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((pos, Tok::Name(chars[start..i].iter().map(|x| x.1).collect())));
        } else if "+-*/^(),[]".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return err(pos, format!("unexpected character '{c}'"));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Expr {
    Int(BigInt),
    Name(usize, String),
    Call(usize, String, Box<Expr>),
    Neg(Box<Expr>),
    Bin(usize, char, Box<Expr>, Box<Expr>),
    Pow(usize, Box<Expr>, i64),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn new(s: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(s)?,
            i: 0,
            end: s.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            err(self.pos(), format!("expected '{c}'"))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.i < self.toks.len() {
            err(self.pos(), "unexpected trailing input")
        } else {
            Ok(())
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            let op = if self.eat('+') {
                '+'
            } else if self.eat('-') {
                '-'
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Bin(pos, op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            let op = if self.eat('*') {
                '*'
            } else if self.eat('/') {
                '/'
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(pos, op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        let pos = self.pos();
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let e = match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.i += 1;
                i64::try_from(n).or_else(|_| err(pos, "exponent too large"))?
            }
            _ => return err(self.pos(), "exponent must be an integer literal"),
        };
        if paren {
            self.expect(')')?;
        }
        Ok(Expr::Pow(pos, Box::new(base), if neg { -e } else { e }))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.i += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Name(name)) => {
                self.i += 1;
                if self.eat('(') {
                    let arg = self.expr()?;
                    self.expect(')')?;
                    Ok(Expr::Call(pos, name, Box::new(arg)))
                } else {
                    Ok(Expr::Name(pos, name))
                }
            }
            Some(Tok::Sym('(')) => {
                self.i += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(_) => err(pos, "expected a number, a name or '('"),
            None => err(pos, "unexpected end of input"),
        }
    }
}

/// Values bound to names, plus the constant tower for `sqrt` and `thN`.
#[derive(Clone, Debug)]
pub struct Scope {
    pub consts: Constants,
    pub bindings: BTreeMap<String, AlgNum>,
}

impl Scope {
    pub fn new(consts: Constants) -> Self {
        Scope {
            consts,
            bindings: BTreeMap::new(),
        }
    }

    pub fn bind(&mut self, name: &str, v: AlgNum) {
        self.bindings.insert(name.to_string(), v);
    }

    fn generator(&self, name: &str) -> Option<AlgNum> {
        let depth: usize = name.strip_prefix("th")?.parse().ok()?;
        let mut cur: Option<std::sync::Arc<Level>> = self.consts.top();
        while let Some(l) = cur {
            if l.depth == depth {
                return Some(AlgNum::generator(&l));
            }
            cur = l.parent.clone();
        }
        None
    }

    fn constant(&self, pos: usize, name: &str) -> Result<AlgNum, ParseError> {
        if let Some(v) = self.bindings.get(name) {
            return Ok(v.clone());
        }
        if let Some(v) = self.generator(name) {
            return Ok(v);
        }
        err(pos, format!("unbound parameter '{name}'"))
    }

    fn sqrt(&self, pos: usize, c: &AlgNum) -> Result<AlgNum, ParseError> {
        self.consts
            .nth_root(c, 2)
            .or_else(|e| err(pos, format!("cannot adjoin sqrt({c}): {e}")))
    }
}

/// Operator-valued evaluation; `z` and `phi` are only meaningful here.
trait Domain: Sized + Clone {
    fn constant(c: AlgNum, ctx: &Ev) -> Self;
    fn name(pos: usize, name: &str, ctx: &Ev) -> Result<Self, ParseError>;
    fn add(&self, o: &Self, pos: usize) -> Result<Self, ParseError>;
    fn sub(&self, o: &Self, pos: usize) -> Result<Self, ParseError>;
    fn mul(&self, o: &Self, pos: usize) -> Result<Self, ParseError>;
    fn div(&self, o: &Self, pos: usize) -> Result<Self, ParseError>;
    fn neg(&self) -> Self;
    fn pow(&self, e: i64, pos: usize) -> Result<Self, ParseError>;
    fn as_constant(&self) -> Option<AlgNum>;
}

struct Ev<'a> {
    scope: &'a Scope,
    ctx: Option<&'a Ctx>,
}

fn eval<D: Domain>(e: &Expr, ev: &Ev) -> Result<D, ParseError> {
    match e {
        Expr::Int(n) => Ok(D::constant(AlgNum::from_bigint(n.clone()), ev)),
        Expr::Name(pos, n) => D::name(*pos, n, ev),
        Expr::Call(pos, f, arg) => {
            if f != "sqrt" {
                return err(*pos, format!("unknown function '{f}'"));
            }
            let a: D = eval(arg, ev)?;
            let c = a.as_constant().ok_or(ParseError {
                pos: *pos,
                msg: "sqrt takes a constant argument".into(),
            })?;
            Ok(D::constant(ev.scope.sqrt(*pos, &c)?, ev))
        }
        Expr::Neg(a) => Ok(eval::<D>(a, ev)?.neg()),
        Expr::Bin(pos, op, a, b) => {
            let (x, y): (D, D) = (eval(a, ev)?, eval(b, ev)?);
            match op {
                '+' => x.add(&y, *pos),
                '-' => x.sub(&y, *pos),
                '*' => x.mul(&y, *pos),
                _ => x.div(&y, *pos),
            }
        }
        Expr::Pow(pos, a, k) => eval::<D>(a, ev)?.pow(*k, *pos),
    }
}

impl Domain for AlgNum {
    fn constant(c: AlgNum, _: &Ev) -> Self {
        c
    }
    fn name(pos: usize, name: &str, ev: &Ev) -> Result<Self, ParseError> {
        if name == "z" || name == "phi" {
            return err(pos, format!("'{name}' is not a constant"));
        }
        ev.scope.constant(pos, name)
    }
    fn add(&self, o: &Self, _: usize) -> Result<Self, ParseError> {
        Ok(self + o)
    }
    fn sub(&self, o: &Self, _: usize) -> Result<Self, ParseError> {
        Ok(self - o)
    }
    fn mul(&self, o: &Self, _: usize) -> Result<Self, ParseError> {
        Ok(self * o)
    }
    fn div(&self, o: &Self, pos: usize) -> Result<Self, ParseError> {
        if o.is_zero() {
            return err(pos, "division by zero");
        }
        Ok(self / o)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn pow(&self, e: i64, pos: usize) -> Result<Self, ParseError> {
        if e < 0 && self.is_zero() {
            return err(pos, "division by zero");
        }
        Ok(AlgNum::pow(self, e))
    }
    fn as_constant(&self) -> Option<AlgNum> {
        Some(self.clone())
    }
}

impl Domain for OreOp {
    fn constant(c: AlgNum, ev: &Ev) -> Self {
        OreOp::scalar(&ev.ctx.expect("operator context").spec, RatFunc::constant(c))
    }
    fn name(pos: usize, name: &str, ev: &Ev) -> Result<Self, ParseError> {
        let spec = &ev.ctx.expect("operator context").spec;
        match name {
            "z" => Ok(OreOp::scalar(spec, RatFunc::z())),
            "phi" => Ok(OreOp::phi_pow(spec, 1)),
            _ => Ok(OreOp::scalar(spec, RatFunc::constant(ev.scope.constant(pos, name)?))),
        }
    }
    fn add(&self, o: &Self, pos: usize) -> Result<Self, ParseError> {
        OreOp::add(self, o).or_else(|e| err(pos, e.to_string()))
    }
    fn sub(&self, o: &Self, pos: usize) -> Result<Self, ParseError> {
        OreOp::sub(self, o).or_else(|e| err(pos, e.to_string()))
    }
    fn mul(&self, o: &Self, pos: usize) -> Result<Self, ParseError> {
        OreOp::mul(self, o).or_else(|e| err(pos, e.to_string()))
    }
    fn div(&self, o: &Self, pos: usize) -> Result<Self, ParseError> {
        let (Some(a), Some(b)) = (scalar_part(self), scalar_part(o)) else {
            return err(pos, "only coefficients can be divided; write (a/b)*phi^k");
        };
        if b.is_zero() {
            return err(pos, "division by zero");
        }
        Ok(OreOp::scalar(self.spec(), &a / &b))
    }
    fn neg(&self) -> Self {
        OreOp::neg(self)
    }
    fn pow(&self, e: i64, pos: usize) -> Result<Self, ParseError> {
        if let Some(a) = scalar_part(self) {
            if e < 0 && a.is_zero() {
                return err(pos, "division by zero");
            }
            return Ok(OreOp::scalar(self.spec(), a.pow(e)));
        }
        let single = self.terms().count() == 1 && self.leading().is_one();
        match self.top() {
            Some(k) if single => Ok(OreOp::phi_pow(self.spec(), k * e)),
            _ if e >= 0 => {
                let mut acc = OreOp::scalar(self.spec(), RatFunc::one());
                for _ in 0..e {
                    acc = OreOp::mul(&acc, self).or_else(|er| err(pos, er.to_string()))?;
                }
                Ok(acc)
            }
            _ => err(pos, "negative powers of an operator are not defined"),
        }
    }
    fn as_constant(&self) -> Option<AlgNum> {
        scalar_part(self)?.as_constant()
    }
}

fn scalar_part(op: &OreOp) -> Option<RatFunc> {
    match op.top() {
        None => Some(RatFunc::zero()),
        Some(0) if op.bottom() == Some(0) => Some(op.coeff(0)),
        _ => None,
    }
}

fn parse_expr(s: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(s)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// A constant expression: rationals, bound names, `sqrt`, tower generators.
pub fn parse_constant(s: &str, scope: &Scope) -> Result<AlgNum, ParseError> {
    let e = parse_expr(s)?;
    eval::<AlgNum>(&e, &Ev { scope, ctx: None })
}

/// An operator Σ aᵢ(z)·φ^i, products taken in the twisted sense (φ·f = φ(f)·φ).
pub fn parse_operator_raw(s: &str, scope: &Scope, ctx: &Ctx) -> Result<OreOp, ParseError> {
    let e = parse_expr(s)?;
    eval::<OreOp>(&e, &Ev { scope, ctx: Some(ctx) })
}

/// Normalized operator with nonzero leading and trailing coefficients.
pub fn parse_operator(s: &str, scope: &Scope, ctx: &Ctx) -> Result<OreOp, ParseError> {
    let op = parse_operator_raw(s, scope, ctx)?.normalized();
    if op.is_zero() {
        return err(0, "operator is zero");
    }
    Ok(op)
}

/// An element of k.
pub fn parse_ratfunc(s: &str, scope: &Scope, ctx: &Ctx) -> Result<RatFunc, ParseError> {
    let op = parse_operator_raw(s, scope, ctx)?;
    scalar_part(&op).ok_or(ParseError {
        pos: 0,
        msg: "expected a rational function, found phi".into(),
    })
}

/// Row-major string entries, as emitted in reports.
pub fn parse_matrix(rows: &[Vec<String>], scope: &Scope, ctx: &Ctx) -> Result<MatK, ParseError> {
    let n = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != n) {
        return err(0, "ragged matrix");
    }
    let entries = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| parse_ratfunc(x, scope, ctx))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MatK::from_rows(&ctx.spec, entries))
}
