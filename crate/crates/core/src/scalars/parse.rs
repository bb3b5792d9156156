//! Parser for scalar expressions.
//!
//! Grammar (usual precedence, `^` binds tightest and takes an integer):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (('*'|'/') power)*
//! power  := atom ['^' int]
//! atom   := int | var | form | '(' expr ')'
//! var    := mu<i> | a | b | lambda | c
//! form   := 'mu·(' int (',' int)* ')'      (also accepts 'mu.(')
//! ```
//!
//! A divisor is split into its product factors before dividing, and every
//! factor must be a constant or a multiple of a linear form `μ·α`.

use std::str::FromStr;

use crate::lattice::LatticePoint;

use super::monomial::Var;
use super::rational::Rational;
use super::scalar::{LinearForm, Scalar};
use super::ScalarError;

#[derive(Debug, Clone)]
enum Expr {
    Num(Rational),
    Var(Var),
    Form(LatticePoint),
    Sum(Vec<(bool, Expr)>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Form(Vec<i64>),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, ScalarError> {
    let err = |m: &str| ScalarError::Parse(format!("{m} in `{s}`"));
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Int(chars[st..i].iter().collect()));
        } else if ch.is_ascii_alphabetic() {
            let st = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[st..i].iter().collect();
            if word == "mu" && i < chars.len() && (chars[i] == '·' || chars[i] == '.') {
                i += 1;
                if chars.get(i) != Some(&'(') {
                    return Err(err("expected `(` after `mu·`"));
                }
                let close = chars[i..].iter().position(|&c| c == ')').ok_or_else(|| err("unclosed form"))? + i;
                let inner: String = chars[i + 1..close].iter().collect();
                let coords: Result<Vec<i64>, _> = inner.split(',').map(|t| t.trim().parse::<i64>()).collect();
                out.push(Tok::Form(coords.map_err(|_| err("bad form coordinates"))?));
                i = close + 1;
            } else {
                out.push(Tok::Ident(word));
            }
        } else if "+-*/^()".contains(ch) {
            out.push(Tok::Op(ch));
            i += 1;
        } else {
            return Err(err(&format!("unexpected character `{ch}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, m: &str) -> ScalarError {
        ScalarError::Parse(format!("{m} in `{}`", self.src))
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Expr, ScalarError> {
        let mut terms = Vec::new();
        let mut neg = false;
        if let Some(c @ ('+' | '-')) = self.peek_op() {
            neg = c == '-';
            self.pos += 1;
        }
        terms.push((neg, self.term()?));
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            terms.push((c == '-', self.term()?));
        }
        if terms.len() == 1 && !terms[0].0 {
            return Ok(terms.pop().unwrap().1);
        }
        Ok(Expr::Sum(terms))
    }

    fn term(&mut self) -> Result<Expr, ScalarError> {
        let mut acc = self.power()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.power()?;
            acc = if c == '*' { Expr::Mul(Box::new(acc), Box::new(rhs)) } else { Expr::Div(Box::new(acc), Box::new(rhs)) };
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Expr, ScalarError> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.toks.get(self.pos) {
                Some(Tok::Int(s)) => {
                    let e: u32 = s.parse().map_err(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return Err(self.err("expected integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ScalarError> {
        let tok = self.toks.get(self.pos).cloned().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        match tok {
            Tok::Int(s) => Ok(Expr::Num(s.parse().map_err(|_| self.err("bad integer"))?)),
            Tok::Ident(w) => Var::parse(&w).map(Expr::Var).ok_or_else(|| self.err(&format!("unknown variable `{w}`"))),
            Tok::Form(c) => Ok(Expr::Form(LatticePoint::new(&c))),
            Tok::Op('(') => {
                let e = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::Op(c) => Err(self.err(&format!("unexpected `{c}`"))),
        }
    }
}

fn eval(e: &Expr) -> Result<Scalar, ScalarError> {
    match e {
        Expr::Num(r) => Ok(Scalar::from_rational(r.clone())),
        Expr::Var(v) => Ok(Scalar::var(*v)),
        Expr::Form(a) => Ok(Scalar::form(a)),
        Expr::Sum(ts) => {
            let mut acc = Scalar::zero();
            for (neg, t) in ts {
                let v = eval(t)?;
                acc = if *neg { &acc - &v } else { &acc + &v };
            }
            Ok(acc)
        }
        Expr::Mul(a, b) => Ok(&eval(a)? * &eval(b)?),
        Expr::Pow(a, k) => Ok(eval(a)?.pow(*k)),
        Expr::Div(a, b) => {
            let mut acc = eval(a)?;
            let mut factors = Vec::new();
            divisor_factors(b, 1, &mut factors);
            for (f, k) in factors {
                for _ in 0..k {
                    acc = match f {
                        Expr::Form(alpha) => acc.divide_by_form(&LinearForm::new(alpha.clone())?),
                        other => acc.checked_div(&eval(other)?)?,
                    };
                }
            }
            Ok(acc)
        }
    }
}

fn divisor_factors<'e>(e: &'e Expr, mult: u32, out: &mut Vec<(&'e Expr, u32)>) {
    match e {
        Expr::Mul(a, b) => {
            divisor_factors(a, mult, out);
            divisor_factors(b, mult, out);
        }
        Expr::Pow(a, k) => divisor_factors(a, mult * k, out),
        other => out.push((other, mult)),
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let toks = tokenize(s)?;
        if toks.is_empty() {
            return Err(ScalarError::Parse("empty expression".into()));
        }
        let mut p = Parser { toks, pos: 0, src: s };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        eval(&e)
    }
}
