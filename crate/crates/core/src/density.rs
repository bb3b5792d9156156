//! Tensor-density modules `T_μ(a, b)`.
//!
//! Basis `v_β` (`β ∈ ℤⁿ`) with
//!
//! ```text
//! E(α)·v_β = (μ·β + a + (μ·α) b) v_{α+β},    c·v_β = 0.
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::algebra::{vir_bracket, AlgebraElement, AlgebraError, BasisSymbol};
use crate::lattice::{box_points, LatticeError, LatticePoint};
use crate::scalars::{Scalar, ScalarError, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DensityError {
    #[error("parameters (a, b) are not an exceptional case (a ∈ Γ_μ, b ∈ {{0, 1}})")]
    WrongCase,
    #[error("lattice tag {tag} does not match a = {a}")]
    TagMismatch { tag: LatticePoint, a: Scalar },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("cannot parse vector: {0}")]
    Parse(String),
}

/// The parameters `(a, b)`, with an optional declaration `a = μ·γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityParams {
    a: Scalar,
    b: Scalar,
    a_lattice_tag: Option<LatticePoint>,
}

impl DensityParams {
    pub fn new(a: Scalar, b: Scalar) -> Self {
        DensityParams { a, b, a_lattice_tag: None }
    }

    /// `a` and `b` as independent indeterminates.
    pub fn formal() -> Self {
        Self::new(Scalar::var(Var::A), Scalar::var(Var::B))
    }

    /// `a = μ·γ`, declared as a lattice value.
    pub fn lattice(gamma: LatticePoint, b: Scalar) -> Self {
        DensityParams { a: Scalar::form(&gamma), b, a_lattice_tag: Some(gamma) }
    }

    /// Checks the tag against `a`.
    pub fn tagged(a: Scalar, b: Scalar, tag: LatticePoint) -> Result<Self, DensityError> {
        if a != Scalar::form(&tag) {
            return Err(DensityError::TagMismatch { tag, a });
        }
        Ok(DensityParams { a, b, a_lattice_tag: Some(tag) })
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }

    pub fn b(&self) -> &Scalar {
        &self.b
    }

    pub fn a_lattice_tag(&self) -> Option<&LatticePoint> {
        self.a_lattice_tag.as_ref()
    }

    /// `γ` with `a = μ·γ`, when `a ∈ Γ_μ` is decidable and true.
    ///
    /// Decided structurally: a tag, or `a` being an integer combination of
    /// the `μᵢ` (which includes `a = 0`). Anything else, in particular an
    /// expression in the indeterminate `a` or a nonzero rational, is not a
    /// lattice value for generic `μ`.
    pub fn lattice_witness(&self, rank: usize) -> Option<LatticePoint> {
        if let Some(t) = &self.a_lattice_tag {
            return Some(t.clone());
        }
        let coords = self.a.as_lattice_value()?;
        if coords.len() > rank {
            return None;
        }
        let mut padded = coords;
        padded.resize(rank, 0);
        Some(LatticePoint::new(&padded))
    }

    /// Parameters of the isomorphic module `T(a − μ·γ, b)`, via
    /// `v_β ↦ v_{β+γ}`.
    pub fn shifted(&self, gamma: &LatticePoint) -> DensityParams {
        let a = &self.a - &Scalar::form(gamma);
        let tag = self.a_lattice_tag.as_ref().map(|t| t - gamma);
        DensityParams { a, b: self.b.clone(), a_lattice_tag: tag }
    }

    /// Parameters `(−a, 1 − b)` of the restricted dual.
    pub fn dual(&self) -> DensityParams {
        DensityParams {
            a: -&self.a,
            b: &Scalar::one() - &self.b,
            a_lattice_tag: self.a_lattice_tag.as_ref().map(|t| -t),
        }
    }
}

/// Finite combination of the basis vectors `v_β`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct DensityVector {
    terms: BTreeMap<LatticePoint, Scalar>,
}

impl DensityVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(beta: LatticePoint) -> Self {
        Self::term(beta, Scalar::one())
    }

    pub fn term(beta: LatticePoint, c: Scalar) -> Self {
        let mut v = Self::zero();
        v.add_term(beta, c);
        v
    }

    pub fn add_term(&mut self, beta: LatticePoint, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let s = match self.terms.get(&beta) {
            Some(old) => old + &c,
            None => c,
        };
        if s.is_zero() {
            self.terms.remove(&beta);
        } else {
            self.terms.insert(beta, s);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticePoint, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, beta: &LatticePoint) -> Scalar {
        self.terms.get(beta).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &DensityVector) -> DensityVector {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DensityVector) -> DensityVector {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, k: &Scalar) -> DensityVector {
        let mut out = DensityVector::zero();
        for (b, c) in &self.terms {
            out.add_term(b.clone(), c * k);
        }
        out
    }
}

/// `(μ·β + a + (μ·α) b)`, the coefficient of `E(α)·v_β`.
pub fn density_coefficient(alpha: &LatticePoint, beta: &LatticePoint, p: &DensityParams) -> Scalar {
    let mut c = &Scalar::form(beta) + &p.a;
    if !alpha.is_zero() {
        c = &c + &(&Scalar::form(alpha) * &p.b);
    }
    c
}

/// `x·v` in `T_μ(a, b)`.
pub fn density_act(x: &AlgebraElement, v: &DensityVector, p: &DensityParams) -> DensityVector {
    let mut out = DensityVector::zero();
    for (s, cx) in x.terms() {
        let BasisSymbol::E(alpha) = s else { continue };
        for (beta, cv) in &v.terms {
            let k = density_coefficient(alpha, beta, p);
            if !k.is_zero() {
                out.add_term(alpha + beta, &(cx * cv) * &k);
            }
        }
    }
    out
}

/// `[x,y]·v − x·(y·v) + y·(x·v)`.
pub fn density_axiom_residual(x: &AlgebraElement, y: &AlgebraElement, v: &DensityVector, p: &DensityParams) -> Result<DensityVector, DensityError> {
    let lhs = density_act(&vir_bracket(x, y)?, v, p);
    let xy = density_act(x, &density_act(y, v, p), p);
    let yx = density_act(y, &density_act(x, v, p), p);
    Ok(lhs.sub(&xy).add(&yx))
}

/// Result of [`density_axiom_scan`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomScan {
    pub checked: u64,
    pub failures: Vec<(LatticePoint, LatticePoint, LatticePoint)>,
}

impl AxiomScan {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Module axiom on `(E(α), E(β), v_κ)` for all `α, β, κ` in the box.
pub fn density_axiom_scan(p: &DensityParams, rank: usize, r: i64) -> Result<AxiomScan, DensityError> {
    let pts = box_points(rank, r);
    let mut scan = AxiomScan { checked: 0, failures: Vec::new() };
    for a in &pts {
        let x = AlgebraElement::e(a.clone());
        for b in &pts {
            let y = AlgebraElement::e(b.clone());
            for k in &pts {
                scan.checked += 1;
                if !density_axiom_residual(&x, &y, &DensityVector::basis(k.clone()), p)?.is_zero() {
                    scan.failures.push((a.clone(), b.clone(), k.clone()));
                }
            }
        }
    }
    Ok(scan)
}

/// Irreducibility type of `T_μ(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DensityClass {
    Irreducible,
    /// `a = μ·γ`, `b = 0`: isomorphic to `T(0,0)`, which contains the trivial
    /// submodule `ℂv_0`.
    ReducibleTrivialSub { witness: LatticePoint },
    /// `a = μ·γ`, `b = 1`: isomorphic to `T(0,1)`, which contains the
    /// codimension-one submodule spanned by `v_β`, `β ≠ 0`.
    ReducibleCodimOne { witness: LatticePoint },
}

impl DensityClass {
    pub fn name(&self) -> &'static str {
        match self {
            DensityClass::Irreducible => "Irreducible",
            DensityClass::ReducibleTrivialSub { .. } => "ReducibleTrivialSub",
            DensityClass::ReducibleCodimOne { .. } => "ReducibleCodimOne",
        }
    }

    pub fn witness(&self) -> Option<&LatticePoint> {
        match self {
            DensityClass::Irreducible => None,
            DensityClass::ReducibleTrivialSub { witness } | DensityClass::ReducibleCodimOne { witness } => Some(witness),
        }
    }
}

/// Reducible exactly when `a ∈ Γ_μ` and `b ∈ {0, 1}`.
pub fn classify_density(p: &DensityParams, rank: usize) -> DensityClass {
    let Some(gamma) = p.lattice_witness(rank) else { return DensityClass::Irreducible };
    let q = p.shifted(&gamma);
    debug_assert!(q.a.is_zero());
    if q.b.is_zero() {
        DensityClass::ReducibleTrivialSub { witness: gamma }
    } else if q.b.is_one() {
        DensityClass::ReducibleCodimOne { witness: gamma }
    } else {
        DensityClass::Irreducible
    }
}

/// Result of [`submodule_invariance_check`], computed on the shifted module
/// with `a = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmoduleReport {
    pub class: DensityClass,
    /// Products `E(α)·v` that must stay inside the submodule.
    pub invariance_checked: usize,
    pub invariance_failures: Vec<LatticePoint>,
    /// Pairs `(κ, λ)` of nonzero points where `E(λ−κ)·v_κ` must hit `v_λ`.
    pub generation_checked: usize,
    pub generation_failures: Vec<(LatticePoint, LatticePoint)>,
}

impl SubmoduleReport {
    pub fn passed(&self) -> bool {
        self.invariance_failures.is_empty() && self.generation_failures.is_empty()
    }
}

/// Checks the submodule of an exceptional module on the box of radius `r`:
/// the invariant line `ℂv_0` for `b = 0`, the invariant hyperplane
/// `span{v_β : β ≠ 0}` for `b = 1`, and in both cases that each `v_κ` with
/// `κ ≠ 0` reaches every `v_λ` with `λ ≠ 0` in one step.
pub fn submodule_invariance_check(p: &DensityParams, rank: usize, r: i64) -> Result<SubmoduleReport, DensityError> {
    let class = classify_density(p, rank);
    let Some(gamma) = class.witness().cloned() else { return Err(DensityError::WrongCase) };
    let q = p.shifted(&gamma);
    let zero = LatticePoint::zero(rank);
    let pts = box_points(rank, r);
    let mut report = SubmoduleReport {
        class: class.clone(),
        invariance_checked: 0,
        invariance_failures: Vec::new(),
        generation_checked: 0,
        generation_failures: Vec::new(),
    };
    for a in &pts {
        let x = AlgebraElement::e(a.clone());
        report.invariance_checked += 1;
        let ok = match class {
            DensityClass::ReducibleTrivialSub { .. } => density_act(&x, &DensityVector::basis(zero.clone()), &q).is_zero(),
            _ => a.is_zero() || density_act(&x, &DensityVector::basis(-a), &q).coefficient(&zero).is_zero(),
        };
        if !ok {
            report.invariance_failures.push(a.clone());
        }
    }
    for k in pts.iter().filter(|k| !k.is_zero()) {
        for l in pts.iter().filter(|l| !l.is_zero()) {
            report.generation_checked += 1;
            let img = density_act(&AlgebraElement::e(l - k), &DensityVector::basis(k.clone()), &q);
            if img.coefficient(l).is_zero() {
                report.generation_failures.push((k.clone(), l.clone()));
            }
        }
    }
    Ok(report)
}

/// Compares the contragredient action on the dual basis `w_γ` of
/// `T(a, b)` with the action of `T(−a, 1−b)` under `w_γ ↦ v_{−γ}`:
///
/// `(E(α)·w_γ)(v_{γ−α}) = −(coefficient of v_γ in E(α)·v_{γ−α})` must equal
/// the coefficient of `v_{α−γ}` in `E(α)·v_{−γ}` computed in the dual
/// module. Returns the difference.
pub fn duality_check(p: &DensityParams, alpha: &LatticePoint, gamma: &LatticePoint) -> Scalar {
    let x = AlgebraElement::e(alpha.clone());
    let contra = -density_act(&x, &DensityVector::basis(gamma - alpha), p).coefficient(gamma);
    let dual = density_act(&x, &DensityVector::basis(-gamma), &p.dual()).coefficient(&(alpha - gamma));
    &contra - &dual
}

impl fmt::Display for DensityVector {
    /// `coef*v[β] + ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::text::write_combination(f, self.terms.iter().map(|(b, c)| (format!("v{b}"), c)))
    }
}

impl fmt::Debug for DensityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for DensityVector {
    type Err = DensityError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let terms = crate::text::parse_combination(
            s,
            |label| match label.strip_prefix('v') {
                Some(rest) if rest.starts_with('[') => Ok(rest.parse::<LatticePoint>()?),
                _ => Err(DensityError::Parse(format!("expected v[..], found `{label}`"))),
            },
            DensityError::Parse,
        )?;
        let mut v = DensityVector::zero();
        for (b, c) in terms {
            v.add_term(b, c);
        }
        Ok(v)
    }
}
