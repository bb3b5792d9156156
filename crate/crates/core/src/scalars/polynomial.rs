use std::fmt;

use super::monomial::{Monomial, Var};
use super::rational::Rational;

/// Sparse polynomial over ℚ, terms kept sorted ascending in graded-lex order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: Vec<(Monomial, Rational)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Polynomial { terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn var(v: Var) -> Self {
        Polynomial { terms: vec![(Monomial::var(v), Rational::one())] }
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut v: Vec<(Monomial, Rational)> = it.into_iter().collect();
        v.sort_unstable_by_key(|a| a.0);
        let mut terms: Vec<(Monomial, Rational)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match terms.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = &*lc + &c,
                _ => {
                    if terms.last().is_some_and(|(_, c)| c.is_zero()) {
                        terms.pop();
                    }
                    terms.push((m, c));
                }
            }
        }
        if terms.last().is_some_and(|(_, c)| c.is_zero()) {
            terms.pop();
        }
        Polynomial { terms }
    }

    /// `Σ αᵢ μᵢ`.
    pub fn linear_mu(coords: &[i64]) -> Self {
        // μ₁ > μ₂ > … in the monomial order, so ascending means reversed
        let terms: Vec<(Monomial, Rational)> = coords
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (Monomial::var(Var::mu(i + 1)), Rational::from_integer(c)))
            .collect();
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        Polynomial { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Rational)> {
        self.terms.last()
    }

    pub fn degree(&self) -> u32 {
        self.terms.last().map_or(0, |(m, _)| m.degree())
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        match self.terms.binary_search_by(|(k, _)| k.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.iter().flat_map(|(m, _)| m.factors().map(|(v, _)| v)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                std::cmp::Ordering::Less => {
                    out.push((*ma, ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((*mb, cb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = ca + cb;
                    if !s.is_zero() {
                        out.push((*ma, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Polynomial { terms: out }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rational) -> Polynomial {
        if k.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect() }
    }

    fn mul_term(&self, m: &Monomial, k: &Rational) -> Polynomial {
        // multiplying every monomial by a fixed one preserves the order
        Polynomial { terms: self.terms.iter().map(|(a, c)| (a.mul(m), c * k)).collect() }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        if other.terms.len() == 1 {
            let (m, k) = &other.terms[0];
            return self.mul_term(m, k);
        }
        if self.terms.len() == 1 {
            let (m, k) = &self.terms[0];
            return other.mul_term(m, k);
        }
        Polynomial::from_terms(
            self.terms
                .iter()
                .flat_map(|(ma, ca)| other.terms.iter().map(move |(mb, cb)| (ma.mul(mb), ca * cb))),
        )
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Division with remainder by a single nonzero divisor in the global
    /// monomial order. The remainder is unique, so `rem == 0` exactly when
    /// `divisor` divides `self`.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let (lm, lc) = divisor.leading().expect("division by zero polynomial").clone();
        let lc_inv = lc.recip().expect("nonzero leading coefficient");
        let mut rest = self.clone();
        let mut quot: Vec<(Monomial, Rational)> = Vec::new();
        let mut rem: Vec<(Monomial, Rational)> = Vec::new();
        while let Some((m, c)) = rest.terms.last().cloned() {
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = &c * &lc_inv;
                rest = rest.sub(&divisor.mul_term(&qm, &qc));
                quot.push((qm, qc));
            } else {
                rest.terms.pop();
                rem.push((m, c));
            }
        }
        quot.reverse();
        rem.reverse();
        (Polynomial::from_terms(quot), Polynomial { terms: rem })
    }

    /// `Some(self / divisor)` when the division is exact.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        if let Some(k) = divisor.as_constant() {
            return k.recip().map(|inv| self.scale(&inv));
        }
        if self.degree() < divisor.degree() {
            return None;
        }
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Substitutes values for some variables; the others stay symbolic.
    pub fn substitute(&self, assignment: &dyn Fn(Var) -> Option<Rational>) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| {
            let mut coeff = c.clone();
            let mut rest = *m;
            for (v, e) in m.factors() {
                if let Some(val) = assignment(v) {
                    coeff = &coeff * &val.pow(e as u32);
                    rest = rest.without(v);
                }
            }
            (rest, coeff)
        }))
    }

    pub(crate) fn shift_mu(&self, offset: usize) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.shift_mu(offset), c.clone())))
    }

    pub fn lcm_coefficient_denominators(&self) -> Rational {
        super::rational::lcm_denominators(self.terms.iter().map(|(_, c)| c))
    }
}

impl fmt::Display for Polynomial {
    /// Terms in descending order, e.g. `mu1^3-mu1` or `2*mu1-mu2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { "-" } else { "+" })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else if abs.is_integer() {
                write!(f, "{abs}*{m}")?;
            } else {
                // p/q*m reads ambiguously; write the fraction as m*p/q
                write!(f, "{m}*{abs}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
