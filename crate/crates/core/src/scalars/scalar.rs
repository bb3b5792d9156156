use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::lattice::LatticePoint;

use super::monomial::Var;
use super::polynomial::Polynomial;
use super::rational::Rational;
use super::ScalarError;

/// The linear form `μ·α` for a nonzero `α`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    alpha: LatticePoint,
}

impl LinearForm {
    pub fn new(alpha: LatticePoint) -> Result<Self, ScalarError> {
        if alpha.is_zero() {
            return Err(ScalarError::ZeroForm);
        }
        Ok(LinearForm { alpha })
    }

    pub fn alpha(&self) -> &LatticePoint {
        &self.alpha
    }

    pub fn polynomial(&self) -> Polynomial {
        Polynomial::linear_mu(self.alpha.coords())
    }

    /// Writes `μ·α = k · μ·π` with `π` primitive, lex-positive and without
    /// trailing zeros. `π` is the key stored in scalar denominators.
    fn canonical(&self) -> (LatticePoint, Rational) {
        let coords = self.alpha.coords();
        let g = coords.iter().fold(0i64, |g, &c| num_integer::gcd(g, c));
        let sign = if self.alpha.is_lex_negative() { -1 } else { 1 };
        let k = sign * g;
        let last = coords.iter().rposition(|&c| c != 0).expect("nonzero form");
        let prim: Vec<i64> = coords[..=last].iter().map(|c| c / k).collect();
        (LatticePoint::new(&prim), Rational::from_integer(k))
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_form(f, &self.alpha)
    }
}

fn write_form(f: &mut fmt::Formatter<'_>, alpha: &LatticePoint) -> fmt::Result {
    f.write_str("mu·(")?;
    for (i, c) in alpha.coords().iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{c}")?;
    }
    f.write_str(")")
}

/// An element of ℚ[μ₁…μₙ, a, b, λ, c] localized at the nonzero linear forms
/// `μ·α`.
///
/// Stored as `numerator / Π μ·πᵢ` where every `πᵢ` is a primitive lex-positive
/// lattice vector and no `μ·πᵢ` divides the numerator. Linear forms are
/// pairwise non-associate primes of the polynomial ring, so this
/// representation is unique and structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    num: Polynomial,
    den: Vec<LatticePoint>,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar { num: Polynomial::constant(r), den: Vec::new() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    pub fn var(v: Var) -> Self {
        Scalar { num: Polynomial::var(v), den: Vec::new() }
    }

    pub fn mu(i: usize) -> Self {
        Self::var(Var::mu(i))
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        Scalar { num: p, den: Vec::new() }
    }

    /// The polynomial `μ·α`; zero for `α = 0`.
    pub fn form(alpha: &LatticePoint) -> Self {
        Self::from_polynomial(Polynomial::linear_mu(alpha.coords()))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value as a rational number if it has no indeterminates.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// Numerator with integer coefficients, paired with
    /// [`denominator_content`](Self::denominator_content).
    pub fn numerator(&self) -> Polynomial {
        self.num.scale(&self.denominator_content())
    }

    /// Numerator as stored, with rational coefficients and unit content.
    pub fn rational_numerator(&self) -> &Polynomial {
        &self.num
    }

    /// Canonical primitive forms of the denominator, as a sorted multiset.
    pub fn denominator_forms(&self) -> &[LatticePoint] {
        &self.den
    }

    /// Positive integer `k` with `self = numerator() / (k · Π forms)`.
    pub fn denominator_content(&self) -> Rational {
        self.num.lcm_coefficient_denominators()
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs = self.num.variables();
        for f in &self.den {
            for (i, &c) in f.coords().iter().enumerate() {
                if c != 0 {
                    vs.push(Var::mu(i + 1));
                }
            }
        }
        vs.sort();
        vs.dedup();
        vs
    }

    fn normalized(mut num: Polynomial, mut den: Vec<LatticePoint>) -> Scalar {
        if num.is_zero() {
            return Scalar::zero();
        }
        if den.is_empty() {
            return Scalar { num, den };
        }
        den.sort();
        let mut kept = Vec::with_capacity(den.len());
        let mut i = 0;
        while i < den.len() {
            let f = &den[i];
            let mut j = i;
            while j < den.len() && den[j] == *f {
                j += 1;
            }
            let fp = Polynomial::linear_mu(f.coords());
            let mut remaining = j - i;
            while remaining > 0 {
                match num.div_exact(&fp) {
                    Some(q) => {
                        num = q;
                        remaining -= 1;
                    }
                    None => break,
                }
            }
            for _ in 0..remaining {
                kept.push(f.clone());
            }
            i = j;
        }
        Scalar { num, den: kept }
    }

    /// `self / (μ·α)`.
    pub fn divide_by_form(&self, form: &LinearForm) -> Scalar {
        let (prim, k) = form.canonical();
        let num = self.num.scale(&k.recip().expect("nonzero"));
        let mut den = self.den.clone();
        den.push(prim);
        Scalar::normalized(num, den)
    }

    /// `self / (μ·α)`; fails with [`ScalarError::ZeroForm`] for `α = 0`.
    pub fn divide_by_alpha(&self, alpha: &LatticePoint) -> Result<Scalar, ScalarError> {
        Ok(self.divide_by_form(&LinearForm::new(alpha.clone())?))
    }

    pub fn scale(&self, k: &Rational) -> Scalar {
        if k.is_zero() {
            return Scalar::zero();
        }
        Scalar { num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division. The divisor's numerator must be a nonzero constant or
    /// a multiple of a single linear form `μ·α`, the only denominators this
    /// ring admits.
    pub fn checked_div(&self, d: &Scalar) -> Result<Scalar, ScalarError> {
        if d.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        // x / (P/F) = x·F / P
        let mut out = self.clone();
        for f in &d.den {
            out = &out * &Scalar::form(f);
        }
        if let Some(k) = d.num.as_constant() {
            return Ok(out.scale(&k.recip().expect("nonzero")));
        }
        match linear_form_of(&d.num) {
            Some((alpha, k)) => Ok(out.divide_by_form(&LinearForm::new(alpha)?).scale(&k.recip().expect("nonzero"))),
            None => Err(ScalarError::NonFormDivisor(d.to_string())),
        }
    }

    /// Exact value under a full assignment.
    pub fn evaluate(&self, assignment: &BTreeMap<Var, Rational>) -> Result<Rational, ScalarError> {
        let lookup = |v: Var| assignment.get(&v).cloned().ok_or(ScalarError::MissingVariable(v));
        let mut num = Rational::zero();
        for (m, c) in self.num.terms() {
            let mut t = c.clone();
            for (v, e) in m.factors() {
                t = &t * &lookup(v)?.pow(e as u32);
            }
            num = &num + &t;
        }
        let mut den = Rational::one();
        for f in &self.den {
            let mut val = Rational::zero();
            for (i, &c) in f.coords().iter().enumerate() {
                if c != 0 {
                    val = &val + &(&lookup(Var::mu(i + 1))? * &Rational::from_integer(c));
                }
            }
            if val.is_zero() {
                return Err(ScalarError::DenominatorVanishes(f.clone()));
            }
            den = &den * &val;
        }
        Ok(&num / &den)
    }

    /// Partial specialization. A denominator form must be either untouched by
    /// the assignment or fully specialized (then it must not vanish).
    pub fn substitute(&self, assignment: &BTreeMap<Var, Rational>) -> Result<Scalar, ScalarError> {
        let num = self.num.substitute(&|v| assignment.get(&v).cloned());
        let mut out = Scalar::normalized(num, Vec::new());
        for f in &self.den {
            let touched: Vec<bool> = f
                .coords()
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, _)| assignment.contains_key(&Var::mu(i + 1)))
                .collect();
            if touched.iter().all(|&t| !t) {
                out = out.divide_by_form(&LinearForm::new(f.clone())?);
            } else if touched.iter().all(|&t| t) {
                let val = Scalar::form(f).evaluate(assignment)?;
                if val.is_zero() {
                    return Err(ScalarError::DenominatorVanishes(f.clone()));
                }
                out = out.scale(&val.recip().expect("nonzero"));
            } else {
                return Err(ScalarError::PartialFormSubstitution(f.clone()));
            }
        }
        Ok(out)
    }

    /// Renames `μᵢ ↦ μᵢ₊ₖ` (forms gain `k` leading zero coordinates).
    pub fn shift_mu(&self, offset: usize) -> Scalar {
        let num = self.num.shift_mu(offset);
        let den = self
            .den
            .iter()
            .map(|f| {
                let mut c = vec![0; offset];
                c.extend_from_slice(f.coords());
                LatticePoint::new(&c)
            })
            .collect();
        Scalar::normalized(num, den)
    }

    /// If `self = μ·γ` for an integer vector `γ`, returns `γ` (trailing zeros
    /// trimmed; the empty point for zero).
    pub fn as_lattice_value(&self) -> Option<Vec<i64>> {
        if !self.den.is_empty() {
            return None;
        }
        let mut coords: Vec<i64> = Vec::new();
        for (m, c) in self.num.terms() {
            let mut fs = m.factors();
            let (v, e) = fs.next()?;
            if fs.next().is_some() || e != 1 {
                return None;
            }
            let Var::Mu(i) = v else { return None };
            let k = c.to_i64()?;
            let i = i as usize - 1;
            if coords.len() <= i {
                coords.resize(i + 1, 0);
            }
            coords[i] = k;
        }
        Some(coords)
    }
}

/// `p = k · μ·α` with `α` integer, if `p` has that shape.
fn linear_form_of(p: &Polynomial) -> Option<(LatticePoint, Rational)> {
    let mut coords: Vec<Rational> = Vec::new();
    for (m, c) in p.terms() {
        let mut fs = m.factors();
        let (v, e) = fs.next()?;
        if fs.next().is_some() || e != 1 {
            return None;
        }
        let Var::Mu(i) = v else { return None };
        let i = i as usize - 1;
        if coords.len() <= i {
            coords.resize(i + 1, Rational::zero());
        }
        coords[i] = c.clone();
    }
    if coords.iter().all(|c| c.is_zero()) {
        return None;
    }
    // scale to integers
    let l = super::rational::lcm_denominators(coords.iter());
    let ints: Vec<i64> = coords.iter().map(|c| (c * &l).to_i64()).collect::<Option<_>>()?;
    Some((LatticePoint::new(&ints), l.recip().expect("nonzero")))
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_empty() && rhs.den.is_empty() {
            return Scalar { num: self.num.add(&rhs.num), den: Vec::new() };
        }
        if self.den == rhs.den {
            return Scalar::normalized(self.num.add(&rhs.num), self.den.clone());
        }
        // lcm of the two sorted multisets and the cofactors of each side
        let (mut i, mut j) = (0, 0);
        let mut lcm = Vec::new();
        let mut cof_l = Polynomial::one();
        let mut cof_r = Polynomial::one();
        while i < self.den.len() || j < rhs.den.len() {
            let take = match (self.den.get(i), rhs.den.get(j)) {
                (Some(a), Some(b)) => a.cmp(b),
                (Some(_), None) => std::cmp::Ordering::Less,
                (None, _) => std::cmp::Ordering::Greater,
            };
            match take {
                std::cmp::Ordering::Equal => {
                    lcm.push(self.den[i].clone());
                    i += 1;
                    j += 1;
                }
                std::cmp::Ordering::Less => {
                    cof_r = cof_r.mul(&Polynomial::linear_mu(self.den[i].coords()));
                    lcm.push(self.den[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    cof_l = cof_l.mul(&Polynomial::linear_mu(rhs.den[j].coords()));
                    lcm.push(rhs.den[j].clone());
                    j += 1;
                }
            }
        }
        let num = self.num.mul(&cof_l).add(&rhs.num.mul(&cof_r));
        Scalar::normalized(num, lcm)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        let num = self.num.mul(&rhs.num);
        if self.den.is_empty() && rhs.den.is_empty() {
            return Scalar { num, den: Vec::new() };
        }
        let mut den = self.den.clone();
        den.extend(rhs.den.iter().cloned());
        Scalar::normalized(num, den)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl fmt::Display for Scalar {
    /// Canonical text: `N` or `N/D` where `N` is the integer-coefficient
    /// numerator and `D` the content times the `mu·(α)` forms, e.g.
    /// `(mu1^3-mu1)/12` or `1/(2*mu·(1,1))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let content = self.denominator_content();
        let num = self.numerator();
        if content.is_one() && self.den.is_empty() {
            return write!(f, "{num}");
        }
        if num.len() > 1 {
            write!(f, "({num})/")?;
        } else {
            write!(f, "{num}/")?;
        }
        // group repeated forms into powers
        let mut groups: Vec<(&LatticePoint, usize)> = Vec::new();
        for d in &self.den {
            match groups.last_mut() {
                Some((g, k)) if *g == d => *k += 1,
                _ => groups.push((d, 1)),
            }
        }
        let factors = groups.len() + usize::from(!content.is_one());
        if factors > 1 {
            f.write_str("(")?;
        }
        let mut first = true;
        if !content.is_one() {
            write!(f, "{content}")?;
            first = false;
        }
        for (d, k) in groups {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write_form(f, d)?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        if factors > 1 {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
