//! Modules induced from a "lowering" subalgebra.
//!
//! Both Verma modules and generalized Verma modules have the shape
//! `U(𝔫⁻) ⊗ B`: a PBW word in lowering generators applied to a vector of a
//! base module `B` on which every other generator acts directly. This module
//! holds the shared straightening engine; [`crate::verma`] and
//! [`crate::gvm`] only supply the lowering predicate and the base action.
//!
//! Words are stored in application order: `word[0]` acts on the base first.
//! The normal order is non-decreasing in lex order, so the smallest generator
//! sits next to the base vector. The text form writes the outermost
//! generator first, `E[0,-1]E[-1,1]v`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::algebra::{basis_bracket, AlgebraElement, BasisSymbol};
use crate::lattice::LatticePoint;
use crate::scalars::{Scalar, ScalarError};

/// The data that determines an induced module.
pub trait Inducing {
    type Base: BaseLabel;

    /// Whether `E(α)` belongs to the lowering subalgebra.
    ///
    /// The lowering set must be closed under addition and must not contain
    /// `α` and `−α` together, so that lowering brackets carry no central term.
    fn is_lowering(&self, alpha: &LatticePoint) -> bool;

    /// A non-lowering basis element (or `c`) applied to a bare base vector.
    fn act_on_base(&self, sym: &BasisSymbol, base: &Self::Base) -> Vec<(Self::Base, Scalar)>;
}

/// Index of a base vector, with its text form.
pub trait BaseLabel: Clone + Ord + fmt::Debug {
    fn write_label(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result;
    fn parse_label(s: &str) -> Option<Self>;
}

/// The single highest-weight vector of a Verma module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Vacuum;

impl BaseLabel for Vacuum {
    fn write_label(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("v")
    }
    fn parse_label(s: &str) -> Option<Self> {
        (s == "v").then_some(Vacuum)
    }
}

impl BaseLabel for LatticePoint {
    fn write_label(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{self}")
    }
    fn parse_label(s: &str) -> Option<Self> {
        s.strip_prefix('v').filter(|r| r.starts_with('[')).and_then(|r| r.parse().ok())
    }
}

/// A normal-ordered word applied to a base vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial<B> {
    word: Vec<LatticePoint>,
    base: B,
}

impl<B: BaseLabel> Monomial<B> {
    /// Builds a monomial from a word in application order; `None` unless the
    /// word is non-decreasing.
    pub fn new(word: Vec<LatticePoint>, base: B) -> Option<Self> {
        word.windows(2).all(|w| w[0] <= w[1]).then_some(Monomial { word, base })
    }

    /// The bare base vector.
    pub fn base_vector(base: B) -> Self {
        Monomial { word: Vec::new(), base }
    }

    /// Generators in application order (`word()[0]` acts first).
    pub fn word(&self) -> &[LatticePoint] {
        &self.word
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Sum of the word's letters, `None` for the empty word.
    pub fn word_sum(&self) -> Option<LatticePoint> {
        let (first, rest) = self.word.split_first()?;
        Some(rest.iter().fold(first.clone(), |acc, g| &acc + g))
    }
}

impl<B: BaseLabel> fmt::Display for Monomial<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in self.word.iter().rev() {
            write!(f, "E{g}")?;
        }
        self.base.write_label(f)
    }
}

impl<B: BaseLabel> fmt::Debug for Monomial<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<B: BaseLabel> FromStr for Monomial<B> {
    type Err = ScalarError;

    /// Accepts the normal-ordered text form only.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ScalarError::Parse(format!("not a normal-ordered monomial: `{s}`"));
        let mut rest = s.trim();
        let mut written = Vec::new();
        while let Some(r) = rest.strip_prefix('E') {
            let close = r.find(']').ok_or_else(bad)?;
            written.push(r[..=close].parse::<LatticePoint>().map_err(|_| bad())?);
            rest = &r[close + 1..];
        }
        let base = B::parse_label(rest).ok_or_else(bad)?;
        written.reverse();
        Monomial::new(written, base).ok_or_else(bad)
    }
}

/// Finite combination of normal-ordered monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct Vector<B> {
    terms: BTreeMap<Monomial<B>, Scalar>,
}

impl<B: BaseLabel> Default for Vector<B> {
    fn default() -> Self {
        Vector { terms: BTreeMap::new() }
    }
}

impl<B: BaseLabel> Vector<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: Monomial<B>) -> Self {
        Self::term(m, Scalar::one())
    }

    pub fn term(m: Monomial<B>, c: Scalar) -> Self {
        let mut v = Self::zero();
        v.add_term(m, c);
        v
    }

    /// `1·b`, a bare base vector.
    pub fn base_vector(b: B) -> Self {
        Self::monomial(Monomial::base_vector(b))
    }

    pub fn add_term(&mut self, m: Monomial<B>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<B>, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial<B>) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coefficients<E>(&self, f: impl Fn(&Scalar) -> Result<Scalar, E>) -> Result<Self, E> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }
}

impl<B: BaseLabel> fmt::Display for Vector<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::text::write_combination(f, self.terms.iter())
    }
}

impl<B: BaseLabel> fmt::Debug for Vector<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<B: BaseLabel> FromStr for Vector<B> {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let terms = crate::text::parse_combination(s, |l| l.parse::<Monomial<B>>(), ScalarError::Parse)?;
        let mut v = Self::zero();
        for (m, c) in terms {
            v.add_term(m, c);
        }
        Ok(v)
    }
}

/// `x·v`, rewritten to normal order.
pub fn act<M: Inducing>(module: &M, x: &AlgebraElement, v: &Vector<M::Base>) -> Vector<M::Base> {
    let mut out = Vector::zero();
    for (sym, cx) in x.terms() {
        for (m, cv) in v.terms() {
            let k = cx * cv;
            match sym {
                BasisSymbol::E(g) => act_e(module, g, &m.word, &m.base, &k, &mut out),
                BasisSymbol::Central => act_central(module, &m.word, &m.base, &k, &mut out),
            }
        }
    }
    out
}

/// `E(γ_k)⋯E(γ_1)·b` for a word in arbitrary order (application order, as
/// in [`Monomial::word`]), straightened.
pub fn apply_word<M: Inducing>(module: &M, word: &[LatticePoint], base: M::Base) -> Vector<M::Base> {
    let mut v = Vector::base_vector(base);
    for g in word {
        v = act(module, &AlgebraElement::e(g.clone()), &v);
    }
    v
}

fn act_central<M: Inducing>(module: &M, word: &[LatticePoint], base: &M::Base, coef: &Scalar, out: &mut Vector<M::Base>) {
    // c is central, so it passes the whole word
    for (b, k) in module.act_on_base(&BasisSymbol::Central, base) {
        out.add_term(Monomial { word: word.to_vec(), base: b }, coef * &k);
    }
}

/// Termination measure: word length first, then whether the incoming
/// generator still has to travel to the base.
fn measure<M: Inducing>(module: &M, g: &LatticePoint, len: usize) -> usize {
    2 * len + usize::from(!module.is_lowering(g))
}

/// `coef · E(g)·(word·base)`, accumulated into `out`.
///
/// `E(g)E(h)X = E(h)(E(g)X) + [E(g),E(h)]X` with `h` the outermost letter;
/// every recursive call has a strictly smaller [`measure`].
fn act_e<M: Inducing>(module: &M, g: &LatticePoint, word: &[LatticePoint], base: &M::Base, coef: &Scalar, out: &mut Vector<M::Base>) {
    let lowering = module.is_lowering(g);
    let here = measure(module, g, word.len());
    let Some((outer, rest)) = word.split_last() else {
        if lowering {
            out.add_term(Monomial { word: vec![g.clone()], base: base.clone() }, coef.clone());
        } else {
            for (b, k) in module.act_on_base(&BasisSymbol::E(g.clone()), base) {
                out.add_term(Monomial { word: Vec::new(), base: b }, coef * &k);
            }
        }
        return;
    };
    if lowering && g >= outer {
        let mut w = word.to_vec();
        w.push(g.clone());
        out.add_term(Monomial { word: w, base: base.clone() }, coef.clone());
        return;
    }

    let mut inner = Vector::zero();
    debug_assert!(measure(module, g, rest.len()) < here);
    act_e(module, g, rest, base, &Scalar::one(), &mut inner);
    for (m, k) in inner.terms {
        let k = coef * &k;
        if lowering {
            // every letter of E(g)·rest is ≤ outer: the rest, g < outer, and
            // sums of lowering letters, which lie below both summands
            debug_assert!(m.word.last().is_none_or(|l| l <= outer));
            let mut w = m.word;
            w.push(outer.clone());
            out.add_term(Monomial { word: w, base: m.base }, k);
        } else {
            // a non-lowering generator never lengthens a word
            debug_assert!(m.word.len() <= rest.len());
            debug_assert!(measure(module, outer, m.word.len()) < here);
            act_e(module, outer, &m.word, &m.base, &k, out);
        }
    }

    let (e, z) = basis_bracket(g, outer);
    if !e.is_zero() {
        let s = g + outer;
        debug_assert!(measure(module, &s, rest.len()) < here);
        act_e(module, &s, rest, base, &(coef * &Scalar::from_polynomial(e)), out);
    }
    if !z.is_zero() {
        act_central(module, rest, base, &(coef * &Scalar::from_polynomial(z)), out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> LatticePoint {
        LatticePoint::new(c)
    }

    #[test]
    fn monomial_text_round_trip() {
        let m: Monomial<Vacuum> = Monomial::new(vec![p(&[-1, 1]), p(&[0, -1])], Vacuum).unwrap();
        assert_eq!(m.to_string(), "E[0,-1]E[-1,1]v");
        assert_eq!(m.to_string().parse::<Monomial<Vacuum>>().unwrap(), m);
        assert!("E[-1,1]E[0,-1]v".parse::<Monomial<Vacuum>>().is_err());
        let g: Monomial<LatticePoint> = Monomial::new(vec![p(&[-1, 2])], p(&[-2])).unwrap();
        assert_eq!(g.to_string(), "E[-1,2]v[-2]");
        assert_eq!(g.to_string().parse::<Monomial<LatticePoint>>().unwrap(), g);
        assert_eq!(Monomial::base_vector(Vacuum).to_string(), "v");
        assert!(Monomial::new(vec![p(&[0, -1]), p(&[-1, 1])], Vacuum).is_none());
    }

    #[test]
    fn vector_text_round_trip() {
        let t = "(2*mu1*lambda)*v - E[-1]v + ((mu1^3-mu1)/12)*E[-1]E[-2]v";
        let v: Vector<Vacuum> = t.parse().unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(v.to_string().parse::<Vector<Vacuum>>().unwrap(), v);
    }
}
