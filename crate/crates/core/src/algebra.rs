//! The solenoidal Witt and Virasoro algebras.
//!
//! Basis `e_{μ·α}` (written `E(α)`) for `α ∈ ℤⁿ` plus the central element
//! `c`, with bracket
//!
//! ```text
//! [E(α), E(β)] = μ·(β−α) E(α+β) + ((μ·α)³ − μ·α)/12 · δ_{α,−β} c
//! ```
//!
//! `E(0)` doubles as the degree derivation `d_μ`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use rayon::prelude::*;

pub use crate::lattice::lex_compare;
use crate::lattice::{box_points, LatticeError, LatticePoint};
use crate::scalars::{LinearForm, Polynomial, Rational, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("the Witt bracket does not accept the central element")]
    CentralTermPresent,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("axis {axis} out of range for rank {rank}")]
    AxisOutOfRange { axis: usize, rank: usize },
    #[error("central samples do not fit a·m³ + b·m")]
    FitFailed,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("cannot parse element: {0}")]
    Parse(String),
}

/// `E(α)` or the central element. The derived order lists every `E`
/// (lexicographically) before `Central`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BasisSymbol {
    E(LatticePoint),
    Central,
}

impl fmt::Display for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisSymbol::E(a) => write!(f, "e{a}"),
            BasisSymbol::Central => f.write_str("c"),
        }
    }
}

/// Finite `Scalar`-linear combination of basis symbols. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<BasisSymbol, Scalar>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(sym: BasisSymbol) -> Self {
        Self::term(sym, Scalar::one())
    }

    pub fn e(alpha: LatticePoint) -> Self {
        Self::basis(BasisSymbol::E(alpha))
    }

    pub fn central() -> Self {
        Self::basis(BasisSymbol::Central)
    }

    pub fn term(sym: BasisSymbol, coef: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(sym, coef);
        }
        AlgebraElement { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (BasisSymbol, Scalar)>) -> Self {
        let mut out = AlgebraElement::zero();
        for (s, c) in it {
            out.add_term(s, c);
        }
        out
    }

    pub fn add_term(&mut self, sym: BasisSymbol, coef: Scalar) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(sym) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &coef;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisSymbol, &Scalar)> {
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

    pub fn coefficient(&self, sym: &BasisSymbol) -> Scalar {
        self.terms.get(sym).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn has_central(&self) -> bool {
        self.terms.contains_key(&BasisSymbol::Central)
    }

    /// The lattice points `α` with a nonzero `E(α)` coefficient.
    pub fn e_support(&self) -> impl Iterator<Item = &LatticePoint> {
        self.terms.keys().filter_map(|s| match s {
            BasisSymbol::E(a) => Some(a),
            BasisSymbol::Central => None,
        })
    }

    pub fn scale(&self, k: &Scalar) -> AlgebraElement {
        if k.is_zero() {
            return AlgebraElement::zero();
        }
        AlgebraElement::from_terms(self.terms.iter().map(|(s, c)| (s.clone(), c * k)))
    }

    /// Common rank of all lattice points, `None` when there are none.
    pub fn rank(&self) -> Result<Option<usize>, AlgebraError> {
        let mut rank = None;
        for a in self.e_support() {
            match rank {
                None => rank = Some(a.rank()),
                Some(r) => a.check_rank(r)?,
            }
        }
        Ok(rank)
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (s, c) in &rhs.terms {
            out.add_term(s.clone(), c.clone());
        }
        out
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self + &(-rhs)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement { terms: self.terms.iter().map(|(s, c)| (s.clone(), -c)).collect() }
    }
}

/// `μ·(β−α)`, the Witt structure constant.
pub fn witt_constant(alpha: &LatticePoint, beta: &LatticePoint) -> Polynomial {
    Polynomial::linear_mu((beta - alpha).coords())
}

/// `((μ·α)³ − μ·α)/12`, the central coefficient of `[E(α), E(−α)]`.
pub fn central_constant(alpha: &LatticePoint) -> Polynomial {
    let f = Polynomial::linear_mu(alpha.coords());
    f.pow(3).sub(&f).scale(&Rational::new(1, 12))
}

/// Bracket of two basis vectors: the coefficient of `E(α+β)` and the
/// coefficient of `c`.
pub fn basis_bracket(alpha: &LatticePoint, beta: &LatticePoint) -> (Polynomial, Polynomial) {
    let e = witt_constant(alpha, beta);
    let z = if (alpha + beta).is_zero() { central_constant(alpha) } else { Polynomial::zero() };
    (e, z)
}

fn check_pair(x: &AlgebraElement, y: &AlgebraElement) -> Result<(), AlgebraError> {
    if let (Some(r), Some(s)) = (x.rank()?, y.rank()?) {
        if r != s {
            return Err(LatticeError::RankMismatch { expected: r, found: s }.into());
        }
    }
    Ok(())
}

fn bracket_impl(x: &AlgebraElement, y: &AlgebraElement, with_central: bool) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (sx, cx) in &x.terms {
        let BasisSymbol::E(a) = sx else { continue };
        for (sy, cy) in &y.terms {
            let BasisSymbol::E(b) = sy else { continue };
            let (e, z) = basis_bracket(a, b);
            let k = cx * cy;
            if !e.is_zero() {
                out.add_term(BasisSymbol::E(a + b), &k * &Scalar::from_polynomial(e));
            }
            if with_central && !z.is_zero() {
                out.add_term(BasisSymbol::Central, &k * &Scalar::from_polynomial(z));
            }
        }
    }
    out
}

/// Bracket of the centerless algebra.
pub fn witt_bracket(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
    if x.has_central() || y.has_central() {
        return Err(AlgebraError::CentralTermPresent);
    }
    check_pair(x, y)?;
    Ok(bracket_impl(x, y, false))
}

/// Bracket of the centrally extended algebra, normalized as in the module
/// documentation.
pub fn vir_bracket(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
    check_pair(x, y)?;
    Ok(bracket_impl(x, y, true))
}

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`.
pub fn jacobi_residual(x: &AlgebraElement, y: &AlgebraElement, z: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
    let a = vir_bracket(x, &vir_bracket(y, z)?)?;
    let b = vir_bracket(y, &vir_bracket(z, x)?)?;
    let c = vir_bracket(z, &vir_bracket(x, y)?)?;
    Ok(&(&a + &b) + &c)
}

/// Jacobi residual of three basis vectors as `(E(α+β+κ) coefficient, c
/// coefficient)`, computed from the structure constants without building
/// elements.
pub fn jacobi_residual_basis(a: &LatticePoint, b: &LatticePoint, k: &LatticePoint) -> (Polynomial, Polynomial) {
    let n = a.rank();
    // Σ μ·(w−y) · μ·(y+w−x) as a dense symmetric integer quadratic form
    let mut quad = vec![0i64; n * n];
    let mut z = Polynomial::zero();
    let central = (&(a + b) + k).is_zero();
    for (x, y, w) in [(a, b, k), (b, k, a), (k, a, b)] {
        let (x, y, w) = (x.coords(), y.coords(), w.coords());
        for p in 0..n {
            let u = w[p] - y[p];
            if u == 0 {
                continue;
            }
            for q in 0..n {
                quad[p * n + q] += u * (y[q] + w[q] - x[q]);
            }
        }
        if central {
            // [x, [y, w]] with x = −(y+w): central part of [E(x), E(y+w)]
            let inner = Polynomial::linear_mu(&sub(w, y));
            z = z.add(&inner.mul(&central_constant(&LatticePoint::new(x))));
        }
    }
    (quadratic_polynomial(&quad, n), z)
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn quadratic_polynomial(quad: &[i64], n: usize) -> Polynomial {
    use crate::scalars::{Monomial, Var};
    let mut terms = Vec::new();
    for p in 0..n {
        for q in p..n {
            let c = if p == q { quad[p * n + p] } else { quad[p * n + q] + quad[q * n + p] };
            if c != 0 {
                let m = Monomial::var(Var::mu(p + 1)).mul(&Monomial::var(Var::mu(q + 1)));
                terms.push((m, Rational::from_integer(c)));
            }
        }
    }
    Polynomial::from_terms(terms)
}

/// Splits `x` by the lex sign of each `E(α)`; `E(0)` and `c` form the zero
/// part.
pub fn triangular_split(x: &AlgebraElement) -> (AlgebraElement, AlgebraElement, AlgebraElement) {
    let mut plus = AlgebraElement::zero();
    let mut zero = AlgebraElement::zero();
    let mut minus = AlgebraElement::zero();
    for (s, c) in &x.terms {
        let part = match s {
            BasisSymbol::Central => &mut zero,
            BasisSymbol::E(a) => match a.lex_sign() {
                std::cmp::Ordering::Greater => &mut plus,
                std::cmp::Ordering::Equal => &mut zero,
                std::cmp::Ordering::Less => &mut minus,
            },
        };
        part.terms.insert(s.clone(), c.clone());
    }
    (plus, zero, minus)
}

/// Outcome of an exhaustive box scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxScan {
    pub checked: u64,
    /// Offending triples (or pairs, with the third entry repeated), sorted.
    pub failures: Vec<[LatticePoint; 3]>,
}

impl BoxScan {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs `check` on every unordered triple of distinct points of the box of
/// radius `r`. Sufficient for alternating trilinear residuals: permuting the
/// arguments only changes the sign, and a repeated argument gives zero once
/// the underlying bracket is antisymmetric.
pub fn scan_box_triples<F>(rank: usize, r: i64, check: F) -> BoxScan
where
    F: Fn(&LatticePoint, &LatticePoint, &LatticePoint) -> bool + Sync,
{
    let pts = box_points(rank, r);
    let n = pts.len();
    let (checked, mut failures) = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut count = 0u64;
            let mut bad = Vec::new();
            for j in i + 1..n {
                for k in j + 1..n {
                    count += 1;
                    if !check(&pts[i], &pts[j], &pts[k]) {
                        bad.push([pts[i].clone(), pts[j].clone(), pts[k].clone()]);
                    }
                }
            }
            (count, bad)
        })
        .reduce(
            || (0, Vec::new()),
            |(c1, mut b1), (c2, b2)| {
                b1.extend(b2);
                (c1 + c2, b1)
            },
        );
    failures.sort();
    BoxScan { checked, failures }
}

/// Antisymmetry of the bracket on all ordered pairs of basis vectors in the
/// box, including `α = β`.
pub fn antisymmetry_scan(rank: usize, r: i64) -> BoxScan {
    let pts = box_points(rank, r);
    let mut failures = Vec::new();
    let mut checked = 0;
    for a in &pts {
        for b in &pts {
            checked += 1;
            let (e1, z1) = basis_bracket(a, b);
            let (e2, z2) = basis_bracket(b, a);
            if !e1.add(&e2).is_zero() || !z1.add(&z2).is_zero() {
                failures.push([a.clone(), b.clone(), b.clone()]);
            }
        }
    }
    BoxScan { checked, failures }
}

/// Exhaustive Jacobi check on basis triples of the box of radius `r`.
pub fn jacobi_box_scan(rank: usize, r: i64) -> BoxScan {
    let mut scan = scan_box_triples(rank, r, |a, b, k| {
        let (e, z) = jacobi_residual_basis(a, b, k);
        e.is_zero() && z.is_zero()
    });
    let anti = antisymmetry_scan(rank, r);
    scan.checked += anti.checked;
    scan.failures.extend(anti.failures);
    scan
}

/// Algebra of a fixed rank `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Algebra {
    rank: usize,
}

impl Algebra {
    pub fn new(rank: usize) -> Self {
        assert!((1..=crate::scalars::MAX_MU).contains(&rank), "rank must lie in 1..={}", crate::scalars::MAX_MU);
        Algebra { rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn point(&self, coords: &[i64]) -> Result<LatticePoint, AlgebraError> {
        let p = LatticePoint::new(coords);
        p.check_rank(self.rank)?;
        Ok(p)
    }

    pub fn e(&self, coords: &[i64]) -> Result<AlgebraElement, AlgebraError> {
        Ok(AlgebraElement::e(self.point(coords)?))
    }

    /// Checks that every lattice point of `x` has this algebra's rank.
    pub fn check(&self, x: &AlgebraElement) -> Result<(), AlgebraError> {
        for a in x.e_support() {
            a.check_rank(self.rank)?;
        }
        Ok(())
    }

    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check(x)?;
        self.check(y)?;
        vir_bracket(x, y)
    }

    fn check_axis(&self, i: usize) -> Result<(), AlgebraError> {
        if i == 0 || i > self.rank {
            return Err(AlgebraError::AxisOutOfRange { axis: i, rank: self.rank });
        }
        Ok(())
    }

    /// `e_m^i = (1/μᵢ) E(m εᵢ)`, spanning a copy of the rank-one Witt
    /// algebra along axis `i`.
    pub fn vir_i_element(&self, i: usize, m: i64) -> Result<AlgebraElement, AlgebraError> {
        self.check_axis(i)?;
        let unit = LatticePoint::unit(self.rank, i);
        let coef = Scalar::one().divide_by_form(&LinearForm::new(unit.clone())?);
        Ok(AlgebraElement::term(BasisSymbol::E(unit.scale(m)), coef))
    }

    /// Fits the central coefficient `η_i(m)` of `[e_m^i, e_{−m}^i]` to
    /// `a·m³ + b·m` from the samples `m = 1, 2` and confirms it at `m = 3`.
    pub fn vir_i_cocycle_coefficients(&self, i: usize) -> Result<(Scalar, Scalar), AlgebraError> {
        let eta = |m: i64| -> Result<Scalar, AlgebraError> {
            let br = vir_bracket(&self.vir_i_element(i, m)?, &self.vir_i_element(i, -m)?)?;
            Ok(br.coefficient(&BasisSymbol::Central))
        };
        let (e1, e2, e3) = (eta(1)?, eta(2)?, eta(3)?);
        let a = (&e2 - &e1.scale(&Rational::from_integer(2))).scale(&Rational::new(1, 6));
        let b = &e1 - &a;
        let predicted = &a.scale(&Rational::from_integer(27)) + &b.scale(&Rational::from_integer(3));
        if predicted != e3 {
            return Err(AlgebraError::FitFailed);
        }
        Ok((a, b))
    }
}

impl fmt::Display for AlgebraElement {
    /// `coef*e[α] + ... + coef*c`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::text::write_combination(f, self.terms.iter())
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for BasisSymbol {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "c" {
            return Ok(BasisSymbol::Central);
        }
        match t.strip_prefix('e') {
            Some(rest) if rest.starts_with('[') => Ok(BasisSymbol::E(rest.parse()?)),
            _ => Err(AlgebraError::Parse(format!("expected e[..] or c, found `{t}`"))),
        }
    }
}

impl FromStr for AlgebraElement {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let terms = crate::text::parse_combination(s, |label| label.parse::<BasisSymbol>(), AlgebraError::Parse)?;
        Ok(AlgebraElement::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::scalars::Var;

    fn p(c: &[i64]) -> LatticePoint {
        LatticePoint::new(c)
    }

    fn e(c: &[i64]) -> AlgebraElement {
        AlgebraElement::e(p(c))
    }

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn witt_bracket_examples() {
        let br = witt_bracket(&e(&[1, 0]), &e(&[0, 1])).unwrap();
        assert_eq!(br, AlgebraElement::term(BasisSymbol::E(p(&[1, 1])), s("mu2 - mu1")));
        let x = &e(&[2, -1]) + &e(&[0, 3]).scale(&Scalar::var(Var::A));
        assert!(witt_bracket(&x, &x).unwrap().is_zero());
        let br = witt_bracket(&e(&[0, 0]), &e(&[3, -2])).unwrap();
        assert_eq!(br, AlgebraElement::term(BasisSymbol::E(p(&[3, -2])), Scalar::form(&p(&[3, -2]))));
        assert_eq!(witt_bracket(&AlgebraElement::central(), &e(&[1, 0])), Err(AlgebraError::CentralTermPresent));
        assert!(matches!(witt_bracket(&e(&[1]), &e(&[1, 0])), Err(AlgebraError::Lattice(_))));
    }

    #[test]
    fn vir_bracket_examples() {
        let a = p(&[2, -1]);
        let br = vir_bracket(&AlgebraElement::e(a.clone()), &AlgebraElement::e(-&a)).unwrap();
        let f = Scalar::form(&a);
        let expected = AlgebraElement::from_terms([
            (BasisSymbol::E(p(&[0, 0])), f.scale(&Rational::from_integer(-2))),
            (BasisSymbol::Central, (&f.pow(3) - &f).scale(&Rational::new(1, 12))),
        ]);
        assert_eq!(br, expected);
        assert!(vir_bracket(&AlgebraElement::central(), &e(&[0, 0])).unwrap().is_zero());
        assert_eq!(
            vir_bracket(&e(&[1, 0]), &e(&[0, 1])).unwrap(),
            witt_bracket(&e(&[1, 0]), &e(&[0, 1])).unwrap()
        );
    }

    #[test]
    fn jacobi_examples() {
        let z = jacobi_residual(&e(&[1, 2]), &e(&[-3, 0]), &e(&[0, 1])).unwrap();
        assert!(z.is_zero());
        let z = jacobi_residual(&e(&[1, 0]), &e(&[0, 1]), &e(&[-1, -1])).unwrap();
        assert!(z.is_zero());
        let z = jacobi_residual(&AlgebraElement::central(), &e(&[1, 0]), &e(&[-1, 0])).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn central_term_cancels_only_in_sum() {
        // each cyclic summand of the Jacobi sum has a central part here
        let (a, b, k) = (p(&[1, 0]), p(&[0, 1]), p(&[-1, -1]));
        let single = vir_bracket(&AlgebraElement::e(a.clone()), &vir_bracket(&AlgebraElement::e(b.clone()), &AlgebraElement::e(k.clone())).unwrap()).unwrap();
        assert!(single.has_central());
        let (e, z) = jacobi_residual_basis(&a, &b, &k);
        assert!(e.is_zero() && z.is_zero());
    }

    #[test]
    fn basis_jacobi_agrees_with_element_jacobi() {
        for t in [[p(&[1, 0]), p(&[0, 1]), p(&[-1, -1])], [p(&[2, 1]), p(&[-1, 1]), p(&[0, -3])]] {
            let full = jacobi_residual(&AlgebraElement::e(t[0].clone()), &AlgebraElement::e(t[1].clone()), &AlgebraElement::e(t[2].clone())).unwrap();
            let (e, z) = jacobi_residual_basis(&t[0], &t[1], &t[2]);
            assert_eq!(full.is_zero(), e.is_zero() && z.is_zero());
        }
    }

    #[test]
    fn jacobi_box_small() {
        let scan = jacobi_box_scan(2, 2);
        assert!(scan.passed());
        assert_eq!(scan.checked, 2300 + 625);
    }

    #[test]
    fn scan_reports_failures() {
        let scan = scan_box_triples(1, 2, |a, b, k| (&(a + b) + k).coords()[0] != 0);
        assert_eq!(scan.checked, 10);
        // {-2,0,2} and {-1,0,1} are the triples summing to zero
        assert_eq!(scan.failures, vec![[p(&[-2]), p(&[0]), p(&[2])], [p(&[-1]), p(&[0]), p(&[1])]]);
    }

    #[test]
    fn triangular_split_examples() {
        let (pl, z, mi) = triangular_split(&e(&[-1, 3]));
        assert!(pl.is_zero() && z.is_zero());
        assert_eq!(mi, e(&[-1, 3]));
        let x = &AlgebraElement::central() + &e(&[0, 0]);
        let (pl, z, mi) = triangular_split(&x);
        assert!(pl.is_zero() && mi.is_zero());
        assert_eq!(z, x);
        let (pl, _, mi) = triangular_split(&(&e(&[1, 0]) + &e(&[-1, 0])));
        assert_eq!((pl, mi), (e(&[1, 0]), e(&[-1, 0])));
    }

    #[test]
    fn vir_i_examples() {
        let alg = Algebra::new(2);
        let x = alg.vir_i_element(1, 0).unwrap();
        assert_eq!(x, AlgebraElement::term(BasisSymbol::E(p(&[0, 0])), s("1/mu1")));
        let y = alg.vir_i_element(2, 3).unwrap();
        assert_eq!(y, AlgebraElement::term(BasisSymbol::E(p(&[0, 3])), s("1/mu2")));
        assert_eq!(alg.vir_i_element(3, 1), Err(AlgebraError::AxisOutOfRange { axis: 3, rank: 2 }));
        assert_eq!(alg.vir_i_element(0, 1), Err(AlgebraError::AxisOutOfRange { axis: 0, rank: 2 }));

        // Witt part of [e_m^i, e_k^i] = (k−m) e_{m+k}^i, expanded by hand
        for i in 1..=2 {
            for (m, k) in [(1, 2), (-3, 1), (2, 2), (0, -4)] {
                let br = alg.bracket(&alg.vir_i_element(i, m).unwrap(), &alg.vir_i_element(i, k).unwrap()).unwrap();
                let witt = &br - &AlgebraElement::term(BasisSymbol::Central, br.coefficient(&BasisSymbol::Central));
                let expected = alg.vir_i_element(i, m + k).unwrap().scale(&Scalar::from_int(k - m));
                assert_eq!(witt, expected, "i={i} m={m} k={k}");
            }
        }
    }

    #[test]
    fn vir_i_cocycle() {
        for n in 1..=3 {
            let alg = Algebra::new(n);
            for i in 1..=n {
                let (a, b) = alg.vir_i_cocycle_coefficients(i).unwrap();
                assert_eq!(a, Scalar::mu(i).scale(&Rational::new(1, 12)));
                assert_eq!(b, s(&format!("-1/(12*mu{i})")));
                assert!(!a.is_zero());
                // non-central part of [e_m^i, e_{−m}^i] is −2m e_0^i
                for m in 1..=3 {
                    let br = vir_bracket(&alg.vir_i_element(i, m).unwrap(), &alg.vir_i_element(i, -m).unwrap()).unwrap();
                    let zero = LatticePoint::zero(n);
                    let e0 = alg.vir_i_element(i, 0).unwrap().coefficient(&BasisSymbol::E(zero.clone()));
                    assert_eq!(br.coefficient(&BasisSymbol::E(zero)), e0.scale(&Rational::from_integer(-2 * m)));
                }
            }
        }
    }

    #[test]
    fn text_examples() {
        let br = vir_bracket(&e(&[1, 0]), &e(&[-1, 0])).unwrap();
        assert_eq!(br.to_string(), "-2*mu1*e[0,0] + ((mu1^3-mu1)/12)*c");
        assert_eq!(br.to_string().parse::<AlgebraElement>().unwrap(), br);
        let br = vir_bracket(&e(&[1, -1]), &e(&[1, 0])).unwrap();
        assert_eq!(br.to_string(), "mu2*e[2,-1]");
        let x: AlgebraElement = "e[1,0] - (2*mu1-mu2)*e[0,1] + a*b*c".parse().unwrap();
        assert_eq!(x.coefficient(&BasisSymbol::E(p(&[0, 1]))), s("mu2-2*mu1"));
        assert_eq!(x.coefficient(&BasisSymbol::Central), s("a*b"));
        assert_eq!(x.to_string(), "(-2*mu1+mu2)*e[0,1] + e[1,0] + a*b*c");
        assert!("3*x".parse::<AlgebraElement>().is_err());
        assert_eq!("0".parse::<AlgebraElement>().unwrap(), AlgebraElement::zero());
    }

    fn arb_point(rank: usize) -> impl Strategy<Value = LatticePoint> {
        prop::collection::vec(-3i64..=3, rank).prop_map(|v| LatticePoint::new(&v))
    }

    fn arb_coef() -> impl Strategy<Value = Scalar> {
        prop_oneof![
            (-4i64..=4).prop_map(Scalar::from_int),
            Just(Scalar::var(Var::A)),
            Just(Scalar::mu(2)),
            Just(s("1/mu·(1,-1)")),
            Just(s("(lambda - 1)/3")),
        ]
    }

    fn arb_element() -> impl Strategy<Value = AlgebraElement> {
        prop::collection::vec((prop_oneof![4 => arb_point(2).prop_map(BasisSymbol::E), 1 => Just(BasisSymbol::Central)], arb_coef()), 0..4)
            .prop_map(AlgebraElement::from_terms)
    }

    proptest! {
        #[test]
        fn antisymmetry(x in arb_element(), y in arb_element()) {
            let sum = &vir_bracket(&x, &y).unwrap() + &vir_bracket(&y, &x).unwrap();
            prop_assert!(sum.is_zero());
        }

        #[test]
        fn jacobi_general(x in arb_element(), y in arb_element(), z in arb_element()) {
            prop_assert!(jacobi_residual(&x, &y, &z).unwrap().is_zero());
        }

        #[test]
        fn grading(a in arb_point(2), b in arb_point(2)) {
            let br = vir_bracket(&AlgebraElement::e(a.clone()), &AlgebraElement::e(b.clone())).unwrap();
            let sum = &a + &b;
            prop_assert!(br.e_support().all(|g| *g == sum));
            prop_assert_eq!(br.has_central(), sum.is_zero() && !a.is_zero());
        }

        #[test]
        fn triangular_parts_closed(a in arb_point(2), b in arb_point(2)) {
            prop_assume!(a.lex_sign() == b.lex_sign() && !a.is_zero());
            let br = vir_bracket(&AlgebraElement::e(a.clone()), &AlgebraElement::e(b.clone())).unwrap();
            let (pl, z, mi) = triangular_split(&br);
            prop_assert!(z.is_zero());
            if a.is_lex_positive() {
                prop_assert!(mi.is_zero());
            } else {
                prop_assert!(pl.is_zero());
            }
        }

        #[test]
        fn group_order(a in arb_point(3), b in arb_point(3), g in arb_point(3)) {
            prop_assert_eq!(lex_compare(&a, &b).unwrap(), lex_compare(&(&a + &g), &(&b + &g)).unwrap());
            prop_assert_eq!(lex_compare(&a, &b).unwrap(), lex_compare(&b, &a).unwrap().reverse());
        }

        #[test]
        fn split_recombines(x in arb_element()) {
            let (pl, z, mi) = triangular_split(&x);
            prop_assert_eq!(&(&pl + &z) + &mi, x);
        }

        #[test]
        fn text_round_trip(x in arb_element()) {
            let t = x.to_string();
            prop_assert_eq!(t.parse::<AlgebraElement>().unwrap(), x);
        }
    }
}
