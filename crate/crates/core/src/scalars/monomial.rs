use std::cmp::Ordering;
use std::fmt;

/// Number of `μ` indeterminates the scalar ring can hold.
pub const MAX_MU: usize = 12;
const SLOTS: usize = MAX_MU + 4;

/// An indeterminate of the coefficient ring.
///
/// Ids are fixed globally: `μ₁ … μ₁₂` take ids `0 … 11`, then `a`, `b`,
/// `λ` and the central charge `c`. The monomial order compares exponents in
/// id order, so `μ₁` is the most significant variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// `μᵢ`, 1-based.
    Mu(u8),
    A,
    B,
    Lambda,
    C,
}

impl Var {
    pub fn mu(i: usize) -> Var {
        assert!((1..=MAX_MU).contains(&i), "μ index {i} out of range 1..={MAX_MU}");
        Var::Mu(i as u8)
    }

    pub(crate) fn slot(self) -> usize {
        match self {
            Var::Mu(i) => i as usize - 1,
            Var::A => MAX_MU,
            Var::B => MAX_MU + 1,
            Var::Lambda => MAX_MU + 2,
            Var::C => MAX_MU + 3,
        }
    }

    pub(crate) fn from_slot(slot: usize) -> Var {
        match slot {
            s if s < MAX_MU => Var::Mu(s as u8 + 1),
            s if s == MAX_MU => Var::A,
            s if s == MAX_MU + 1 => Var::B,
            s if s == MAX_MU + 2 => Var::Lambda,
            _ => Var::C,
        }
    }

    pub fn name(self) -> String {
        match self {
            Var::Mu(i) => format!("mu{i}"),
            Var::A => "a".into(),
            Var::B => "b".into(),
            Var::Lambda => "lambda".into(),
            Var::C => "c".into(),
        }
    }

    pub fn parse(s: &str) -> Option<Var> {
        match s {
            "a" => Some(Var::A),
            "b" => Some(Var::B),
            "lambda" => Some(Var::Lambda),
            "c" => Some(Var::C),
            _ => {
                let i: usize = s.strip_prefix("mu")?.parse().ok()?;
                (1..=MAX_MU).contains(&i).then_some(Var::Mu(i as u8))
            }
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A power product of indeterminates, stored densely.
///
/// Ordered graded-lexicographically: total degree first, then exponents in
/// id order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u16; SLOTS],
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u16) -> Self {
        let mut m = Self::default();
        m.exps[v.slot()] = e;
        m
    }

    pub fn exponent(&self, v: Var) -> u16 {
        self.exps[v.slot()]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    /// Nonzero exponents in id order.
    pub fn factors(&self) -> impl Iterator<Item = (Var, u16)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(s, &e)| (Var::from_slot(s), e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (o, e) in out.exps.iter_mut().zip(other.exps.iter()) {
            *o = o.checked_add(*e).expect("monomial exponent overflow");
        }
        out
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut out = *other;
        for (o, e) in out.exps.iter_mut().zip(self.exps.iter()) {
            *o -= *e;
        }
        out
    }

    pub(crate) fn without(&self, v: Var) -> Monomial {
        let mut out = *self;
        out.exps[v.slot()] = 0;
        out
    }

    /// Moves every `μᵢ` exponent to `μᵢ₊ₖ`.
    pub(crate) fn shift_mu(&self, offset: usize) -> Monomial {
        let mut out = *self;
        for i in 0..MAX_MU {
            out.exps[i] = 0;
        }
        for i in 0..MAX_MU {
            if self.exps[i] > 0 {
                assert!(i + offset < MAX_MU, "μ index out of range after shift");
                out.exps[i + offset] = self.exps[i];
            }
        }
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in self.factors() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex() {
        let m1 = Monomial::var(Var::mu(1));
        let m2 = Monomial::var(Var::mu(2));
        let m1sq = Monomial::var_pow(Var::mu(1), 2);
        let a = Monomial::var(Var::A);
        assert!(m1 > m2);
        assert!(m2 > a);
        assert!(m1sq > m1);
        assert!(m2.mul(&m2) > m1);
        assert!(Monomial::one() < a);
    }

    #[test]
    fn var_names_round_trip() {
        for v in [Var::mu(1), Var::mu(12), Var::A, Var::B, Var::Lambda, Var::C] {
            assert_eq!(Var::parse(&v.name()), Some(v));
        }
        assert_eq!(Var::parse("mu13"), None);
        assert_eq!(Var::parse("mu0"), None);
    }
}
