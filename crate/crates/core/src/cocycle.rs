//! 2-cocycles on the centerless algebra.
//!
//! A [`TwoCochain`] is stored as a multiple of the canonical cocycle, plus the
//! coboundary of a finitely supported 1-cochain, plus a finitely supported
//! skew correction. The middle piece is kept symbolically because `δg` is
//! nonzero on infinitely many pairs even when `g` has finite support.
//!
//! Scans over lattice boxes only visit unordered triples of distinct points:
//! for a skew cochain the cocycle residual is alternating.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::algebra::{scan_box_triples, witt_bracket, witt_constant, AlgebraElement, AlgebraError, BasisSymbol, BoxScan};
use crate::lattice::{box_points, LatticeError, LatticePoint};
use crate::linalg::Echelon;
use crate::scalars::{LinearForm, Monomial, Polynomial, Rational, Scalar, ScalarError};

/// Degree bound of the polynomial ansatz in [`h2_rank_experiment`].
pub const H2_DEGREE_BOUND: u32 = 7;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CocycleError {
    #[error("cocycle condition fails at {}, {}, {}", .0[0], .0[1], .0[2])]
    NotACocycle(Box<[LatticePoint; 3]>),
    #[error("shifted cochain is nonzero at ({0}, {1}) although the points do not sum to zero")]
    NotNormalizable(LatticePoint, LatticePoint),
    #[error("table is not of the form a·x³ + b·x")]
    NotCubicOdd,
    #[error("{0} lies outside the box of radius {1}")]
    OutsideBox(LatticePoint, i64),
    #[error("box radius {0} is too small, need at least 2")]
    BoxTooSmall(i64),
    #[error("cochain value on the diagonal ({0}, {0}) must be zero")]
    NotSkew(LatticePoint),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("cannot parse cochain: {0}")]
    Parse(String),
}

/// A finitely supported linear form on the algebra: `f(E(α))`.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct OneCochain {
    support: BTreeMap<LatticePoint, Scalar>,
}

impl OneCochain {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `v` at `α`, zero elsewhere.
    pub fn indicator(alpha: LatticePoint, v: Scalar) -> Self {
        let mut f = Self::zero();
        f.insert(alpha, v);
        f
    }

    pub fn insert(&mut self, alpha: LatticePoint, v: Scalar) {
        if v.is_zero() {
            self.support.remove(&alpha);
        } else {
            self.support.insert(alpha, v);
        }
    }

    pub fn get(&self, alpha: &LatticePoint) -> Scalar {
        self.support.get(alpha).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, &Scalar)> {
        self.support.iter()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn add(&self, other: &OneCochain) -> OneCochain {
        let mut out = self.clone();
        for (a, v) in &other.support {
            let s = &out.get(a) + v;
            out.insert(a.clone(), s);
        }
        out
    }

    /// `f(x)` for an element of the centerless algebra.
    pub fn apply(&self, x: &AlgebraElement) -> Result<Scalar, CocycleError> {
        let mut acc = Scalar::zero();
        for (s, c) in x.terms() {
            match s {
                BasisSymbol::E(a) => acc = &acc + &(c * &self.get(a)),
                BasisSymbol::Central => return Err(AlgebraError::CentralTermPresent.into()),
            }
        }
        Ok(acc)
    }
}

impl FromIterator<(LatticePoint, Scalar)> for OneCochain {
    fn from_iter<T: IntoIterator<Item = (LatticePoint, Scalar)>>(iter: T) -> Self {
        let mut f = OneCochain::zero();
        for (a, v) in iter {
            let s = &f.get(&a) + &v;
            f.insert(a, s);
        }
        f
    }
}

/// `θ = k·C + δg + extra`, skew in its two arguments.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct TwoCochain {
    canonical_multiple: Scalar,
    coboundary_part: OneCochain,
    /// Keys `(α, β)` with `α < β`; the value at `(β, α)` is the negative.
    extra: BTreeMap<(LatticePoint, LatticePoint), Scalar>,
}

impl TwoCochain {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The canonical cocycle `((μ·α)³ − μ·α)/12 · δ_{α,−β}`.
    pub fn canonical() -> Self {
        TwoCochain { canonical_multiple: Scalar::one(), ..Self::default() }
    }

    pub fn canonical_multiple(&self) -> &Scalar {
        &self.canonical_multiple
    }

    pub fn coboundary_part(&self) -> &OneCochain {
        &self.coboundary_part
    }

    /// Stored correction entries, each unordered pair once with `α < β`.
    pub fn extra(&self) -> impl Iterator<Item = (&LatticePoint, &LatticePoint, &Scalar)> {
        self.extra.iter().map(|((a, b), v)| (a, b, v))
    }

    /// Adds `v` to the correction at `(α, β)` (and `−v` at `(β, α)`).
    pub fn add_extra(&mut self, alpha: LatticePoint, beta: LatticePoint, v: Scalar) -> Result<(), CocycleError> {
        if v.is_zero() {
            return Ok(());
        }
        if alpha == beta {
            return Err(CocycleError::NotSkew(alpha));
        }
        let (key, v) = if alpha < beta { ((alpha, beta), v) } else { ((beta, alpha), -v) };
        let s = &self.extra.get(&key).cloned().unwrap_or_else(Scalar::zero) + &v;
        if s.is_zero() {
            self.extra.remove(&key);
        } else {
            self.extra.insert(key, s);
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.canonical_multiple.is_zero() && self.coboundary_part.is_zero() && self.extra.is_empty()
    }

    /// `θ(E(α), E(β))`.
    pub fn value(&self, alpha: &LatticePoint, beta: &LatticePoint) -> Scalar {
        let mut acc = Scalar::zero();
        if !self.canonical_multiple.is_zero() {
            let c = canonical_cocycle(alpha, beta);
            if !c.is_zero() {
                acc = &c * &self.canonical_multiple;
            }
        }
        if !self.coboundary_part.is_zero() {
            let g = self.coboundary_part.get(&(alpha + beta));
            if !g.is_zero() {
                acc = &acc + &(&g * &Scalar::from_polynomial(witt_constant(alpha, beta)));
            }
        }
        if !self.extra.is_empty() && alpha != beta {
            if alpha < beta {
                if let Some(v) = self.extra.get(&(alpha.clone(), beta.clone())) {
                    acc = &acc + v;
                }
            } else if let Some(v) = self.extra.get(&(beta.clone(), alpha.clone())) {
                acc = &acc - v;
            }
        }
        acc
    }

    /// Bilinear extension to elements of the centerless algebra.
    pub fn apply(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<Scalar, CocycleError> {
        let mut acc = Scalar::zero();
        for (sx, cx) in x.terms() {
            let BasisSymbol::E(a) = sx else { return Err(AlgebraError::CentralTermPresent.into()) };
            for (sy, cy) in y.terms() {
                let BasisSymbol::E(b) = sy else { return Err(AlgebraError::CentralTermPresent.into()) };
                let v = self.value(a, b);
                if !v.is_zero() {
                    acc = &acc + &(&(cx * cy) * &v);
                }
            }
        }
        Ok(acc)
    }

    pub fn add(&self, other: &TwoCochain) -> TwoCochain {
        let mut out = TwoCochain {
            canonical_multiple: &self.canonical_multiple + &other.canonical_multiple,
            coboundary_part: self.coboundary_part.add(&other.coboundary_part),
            extra: self.extra.clone(),
        };
        for ((a, b), v) in &other.extra {
            out.add_extra(a.clone(), b.clone(), v.clone()).expect("stored keys are off-diagonal");
        }
        out
    }

    pub fn scale(&self, k: &Scalar) -> TwoCochain {
        TwoCochain {
            canonical_multiple: &self.canonical_multiple * k,
            coboundary_part: self.coboundary_part.iter().map(|(a, v)| (a.clone(), v * k)).collect(),
            extra: self.extra.iter().map(|(key, v)| (key.clone(), v * k)).filter(|(_, v)| !v.is_zero()).collect(),
        }
    }
}

/// `((μ·α)³ − μ·α)/12` when `α + β = 0`, else 0.
pub fn canonical_cocycle(alpha: &LatticePoint, beta: &LatticePoint) -> Scalar {
    if !(alpha + beta).is_zero() {
        return Scalar::zero();
    }
    Scalar::from_polynomial(crate::algebra::central_constant(alpha))
}

/// `θ(α,[κ,β]) + θ(β,[α,κ]) + θ(κ,[β,α])`.
pub fn cocycle_residual(theta: &TwoCochain, alpha: &LatticePoint, beta: &LatticePoint, kappa: &LatticePoint) -> Scalar {
    let mut acc = Scalar::zero();
    for (x, y, z) in [(alpha, kappa, beta), (beta, alpha, kappa), (kappa, beta, alpha)] {
        // [E(y), E(z)] = μ·(z−y) E(y+z)
        let v = theta.value(x, &(y + z));
        if !v.is_zero() {
            acc = &acc + &(&v * &Scalar::from_polynomial(witt_constant(y, z)));
        }
    }
    acc
}

/// The same residual for arbitrary elements, built from [`witt_bracket`].
pub fn cocycle_residual_elements(theta: &TwoCochain, x: &AlgebraElement, y: &AlgebraElement, z: &AlgebraElement) -> Result<Scalar, CocycleError> {
    let a = theta.apply(x, &witt_bracket(z, y)?)?;
    let b = theta.apply(y, &witt_bracket(x, z)?)?;
    let c = theta.apply(z, &witt_bracket(y, x)?)?;
    Ok(&(&a + &b) + &c)
}

/// Exhaustive cocycle-condition scan over the box of radius `r`.
pub fn cocycle_box_scan(theta: &TwoCochain, rank: usize, r: i64) -> BoxScan {
    scan_box_triples(rank, r, |a, b, k| cocycle_residual(theta, a, b, k).is_zero())
}

/// `δf(α, β) = f([E(α), E(β)])`.
pub fn coboundary(f: &OneCochain) -> TwoCochain {
    TwoCochain { coboundary_part: f.clone(), ..TwoCochain::default() }
}

/// Values `η(α)` on the box of radius `radius`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EtaTable {
    pub values: BTreeMap<LatticePoint, Scalar>,
    pub radius: i64,
}

impl EtaTable {
    /// Tabulates `η` on the box of radius `radius`.
    pub fn from_fn(rank: usize, radius: i64, eta: impl Fn(&LatticePoint) -> Scalar) -> Self {
        let values = box_points(rank, radius).into_iter().map(|a| {
            let v = eta(&a);
            (a, v)
        });
        EtaTable { values: values.collect(), radius }
    }

    /// `η(α)`, or `OutsideBox`.
    pub fn get(&self, alpha: &LatticePoint) -> Result<Scalar, CocycleError> {
        if alpha.norm() > self.radius {
            return Err(CocycleError::OutsideBox(alpha.clone(), self.radius));
        }
        Ok(self.values.get(alpha).cloned().unwrap_or_else(Scalar::zero))
    }

    pub fn rank(&self) -> Option<usize> {
        self.values.keys().next().map(LatticePoint::rank)
    }

    /// `η(−α) = −η(α)` on every stored pair.
    pub fn is_odd(&self) -> bool {
        self.values.iter().all(|(a, v)| match self.values.get(&-a) {
            Some(w) => (v + w).is_zero(),
            None => true,
        })
    }
}

/// Result of [`normalize_cocycle`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Normalized {
    pub eta: EtaTable,
    /// `s(α) = θ(0, α)/(μ·α)`; the new basis is `E(α) + s(α)·c`.
    pub shift: OneCochain,
}

/// Changes basis by `E(α) ↦ E(α) + θ(0,α)/(μ·α) · c` so that the cochain
/// becomes `δ_{α,−β} η(α)` on the box of radius `r`, and returns `η`.
pub fn normalize_cocycle(theta: &TwoCochain, rank: usize, r: i64) -> Result<Normalized, CocycleError> {
    let scan = cocycle_box_scan(theta, rank, r);
    if let Some([a, b, k]) = scan.failures.into_iter().next() {
        return Err(CocycleError::NotACocycle(Box::new([a, b, k])));
    }
    let zero = LatticePoint::zero(rank);
    // α + β ranges over the box of radius 2r
    let mut shift = OneCochain::zero();
    for a in box_points(rank, 2 * r) {
        if a.is_zero() {
            continue;
        }
        let t = theta.value(&zero, &a);
        if !t.is_zero() {
            shift.insert(a.clone(), t.divide_by_form(&LinearForm::new(a)?));
        }
    }
    let shifted = |a: &LatticePoint, b: &LatticePoint| -> Scalar {
        let s = shift.get(&(a + b));
        if s.is_zero() {
            theta.value(a, b)
        } else {
            &theta.value(a, b) - &(&Scalar::from_polynomial(witt_constant(a, b)) * &s)
        }
    };
    let pts = box_points(rank, r);
    for a in &pts {
        for b in &pts {
            if !(a + b).is_zero() && !shifted(a, b).is_zero() {
                return Err(CocycleError::NotNormalizable(a.clone(), b.clone()));
            }
        }
    }
    let eta = EtaTable::from_fn(rank, r, |a| shifted(a, &-a));
    Ok(Normalized { eta, shift })
}

/// Fits `η(α) = a·(μ·α)³ + b·(μ·α)` with `a, b` free of `μ`, using
/// `α = ε₁, 2ε₁`, and checks the fit on the whole table.
pub fn recognize_eta(eta: &EtaTable) -> Result<(Scalar, Scalar), CocycleError> {
    if eta.radius < 2 {
        return Err(CocycleError::BoxTooSmall(eta.radius));
    }
    let rank = eta.rank().ok_or(CocycleError::NotCubicOdd)?;
    let e1 = LatticePoint::unit(rank, 1);
    let f1 = LinearForm::new(e1.clone())?;
    let (h1, h2) = (eta.get(&e1)?, eta.get(&e1.scale(2))?);
    // η(2x) − 2η(x) = 6a·x³
    let mut a = (&h2 - &h1.scale(&Rational::from_integer(2))).scale(&Rational::new(1, 6));
    for _ in 0..3 {
        a = a.divide_by_form(&f1);
    }
    let x = Scalar::form(&e1);
    let b = (&h1 - &(&a * &x.pow(3))).divide_by_form(&f1);
    let mu_free = |s: &Scalar| s.denominator_forms().is_empty() && s.variables().iter().all(|v| !matches!(v, crate::scalars::Var::Mu(_)));
    if !mu_free(&a) || !mu_free(&b) {
        return Err(CocycleError::NotCubicOdd);
    }
    for (alpha, v) in &eta.values {
        let x = Scalar::form(alpha);
        if *v != &(&a * &x.pow(3)) + &(&b * &x) {
            return Err(CocycleError::NotCubicOdd);
        }
    }
    Ok((a, b))
}

/// `2xη(x) − 2yη(y) − (x−y)η(x+y) − (x+y)η(x−y)` at `x = μ·α`, `y = μ·β`.
pub fn full_equation_residual(eta: &EtaTable, alpha: &LatticePoint, beta: &LatticePoint) -> Result<Scalar, CocycleError> {
    let (s, d) = (alpha + beta, alpha - beta);
    let (ea, eb, es, ed) = (eta.get(alpha)?, eta.get(beta)?, eta.get(&s)?, eta.get(&d)?);
    let (x, y) = (Scalar::form(alpha), Scalar::form(beta));
    let two = Rational::from_integer(2);
    let lhs = &(&x * &ea).scale(&two) - &(&y * &eb).scale(&two);
    let rhs = &(&Scalar::form(&d) * &es) + &(&Scalar::form(&s) * &ed);
    Ok(&lhs - &rhs)
}

/// Solution of `5xη(x) − 4xη(2x) + xη(3x) = 0` over polynomials
/// `η = Σ_{k ≤ d} a_k x^k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FunctionalEquationSolution {
    /// `5 − 2^{k+2} + 3^k` for `k = 0..=d`: the system is diagonal in the
    /// monomial basis.
    pub factors: Vec<BigInt>,
    /// Exponents `k` with a free coefficient `a_k`.
    pub kernel: Vec<u32>,
}

impl FunctionalEquationSolution {
    pub fn dimension(&self) -> usize {
        self.kernel.len()
    }
}

/// Substituting `x^k` turns the equation into `a_k (5 − 2^{k+2} + 3^k) x^{k+1}
/// = 0`, so the kernel is spanned by the monomials whose factor vanishes.
pub fn solve_functional_equation(degree_bound: u32) -> FunctionalEquationSolution {
    let factors: Vec<BigInt> = (0..=degree_bound)
        .map(|k| BigInt::from(5) - BigInt::from(2).pow(k + 2) + BigInt::from(3).pow(k))
        .collect();
    let kernel = (0..=degree_bound).filter(|&k| factors[k as usize] == BigInt::from(0)).collect();
    FunctionalEquationSolution { factors, kernel }
}

/// Dimensions found by [`h2_rank_experiment`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct H2Report {
    pub cocycle_space_dim: usize,
    pub coboundary_space_dim: usize,
    pub quotient_dim: usize,
    pub degree_bound: u32,
}

/// [`h2_rank_experiment_with_degree`] at [`H2_DEGREE_BOUND`].
pub fn h2_rank_experiment(rank: usize, r: i64) -> Result<H2Report, CocycleError> {
    h2_rank_experiment_with_degree(rank, r, H2_DEGREE_BOUND)
}

/// Dimension count for normalized cocycles `δ_{α,−β} η(μ·α)` on the box of
/// radius `r`, with `η` odd and given on lex-positive points by
/// `Σ_{k ≤ d} a_k (μ·α)^k`.
///
/// The cocycle space is the kernel of the exact linear system in the `a_k`
/// obtained from every cocycle condition in the box. The coboundary space
/// is spanned by the normalized coboundaries of the indicator 1-cochains on
/// the box, expressed in the same coordinates.
pub fn h2_rank_experiment_with_degree(rank: usize, r: i64, degree_bound: u32) -> Result<H2Report, CocycleError> {
    if r < 2 {
        return Err(CocycleError::BoxTooSmall(r));
    }
    let ncols = degree_bound as usize + 1;
    let pts = box_points(rank, r);
    let ansatz: Vec<TwoCochain> = (0..=degree_bound)
        .map(|k| {
            let mut th = TwoCochain::zero();
            for a in pts.iter().filter(|a| a.is_lex_positive()) {
                th.add_extra(a.clone(), -a, Scalar::form(a).pow(k)).expect("off-diagonal");
            }
            th
        })
        .collect();

    // Under the ansatz θ(x, y) vanishes unless x + y = 0, so only triples
    // summing to zero can produce a nonzero residual.
    let mut system = Echelon::new(ncols);
    'outer: for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let k = -&(a + b);
            if k.norm() > r || k <= *b {
                continue;
            }
            let residuals: Vec<Polynomial> =
                ansatz.iter().map(|th| cocycle_residual(th, a, b, &k).rational_numerator().clone()).collect();
            let monomials: std::collections::BTreeSet<Monomial> =
                residuals.iter().flat_map(|p| p.terms().iter().map(|(m, _)| *m)).collect();
            for m in monomials {
                let row: Vec<Rational> = residuals.iter().map(|p| p.coefficient(&m)).collect();
                system.insert(&row);
                if system.is_full() {
                    break 'outer;
                }
            }
        }
    }
    let kernel = system.kernel();

    let mut cob = Echelon::new(ncols);
    for g in &pts {
        let f = OneCochain::indicator(g.clone(), Scalar::one());
        let normalized = normalize_cocycle(&coboundary(&f), rank, r)?;
        let (a, b) = recognize_eta(&normalized.eta)?;
        let mut v = vec![Rational::zero(); ncols];
        for (deg, coef) in [(3usize, a), (1usize, b)] {
            if coef.is_zero() {
                continue;
            }
            if deg >= ncols {
                return Err(CocycleError::NotCubicOdd);
            }
            v[deg] = coef.as_rational().ok_or(CocycleError::NotCubicOdd)?;
        }
        cob.insert(&v);
    }
    let mut total = cob.clone();
    for v in &kernel {
        total.insert(v);
    }
    Ok(H2Report {
        cocycle_space_dim: kernel.len(),
        coboundary_space_dim: cob.rank(),
        quotient_dim: total.rank() - cob.rank(),
        degree_bound,
    })
}

fn parse_point(s: &str) -> Result<(LatticePoint, &str), CocycleError> {
    let s = s.trim_start();
    if !s.starts_with('[') {
        return Err(CocycleError::Parse(format!("expected `[` at `{s}`")));
    }
    let end = s.find(']').ok_or_else(|| CocycleError::Parse(format!("unclosed `[` in `{s}`")))?;
    Ok((s[..=end].parse()?, &s[end + 1..]))
}

fn parse_scalar(s: &str) -> Result<Scalar, CocycleError> {
    Ok(s.trim().parse()?)
}

fn records(s: &str) -> impl Iterator<Item = &str> {
    s.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty())
}

impl fmt::Display for OneCochain {
    /// One `[α] value` line per support point.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, v) in &self.support {
            writeln!(f, "{a} {v}")?;
        }
        Ok(())
    }
}

impl FromStr for OneCochain {
    type Err = CocycleError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = OneCochain::zero();
        for line in records(s) {
            let (a, rest) = parse_point(line)?;
            let v = &out.get(&a) + &parse_scalar(rest)?;
            out.insert(a, v);
        }
        Ok(out)
    }
}

impl fmt::Display for TwoCochain {
    /// Lines `canonical v`, `coboundary [γ] v` and `extra [α] [β] v`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.canonical_multiple.is_zero() {
            writeln!(f, "canonical {}", self.canonical_multiple)?;
        }
        for (g, v) in self.coboundary_part.iter() {
            writeln!(f, "coboundary {g} {v}")?;
        }
        for ((a, b), v) in &self.extra {
            writeln!(f, "extra {a} {b} {v}")?;
        }
        Ok(())
    }
}

impl FromStr for TwoCochain {
    type Err = CocycleError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = TwoCochain::zero();
        for line in records(s) {
            let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match kw {
                "canonical" => out.canonical_multiple = &out.canonical_multiple + &parse_scalar(rest)?,
                "coboundary" => {
                    let (g, rest) = parse_point(rest)?;
                    let v = &out.coboundary_part.get(&g) + &parse_scalar(rest)?;
                    out.coboundary_part.insert(g, v);
                }
                "extra" => {
                    let (a, rest) = parse_point(rest)?;
                    let (b, rest) = parse_point(rest)?;
                    out.add_extra(a, b, parse_scalar(rest)?)?;
                }
                other => return Err(CocycleError::Parse(format!("unknown record `{other}`"))),
            }
        }
        Ok(out)
    }
}
