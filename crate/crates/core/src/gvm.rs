//! Generalized Verma modules induced from a tensor-density module.
//!
//! Grade the algebra by the first coordinate: `E(α)` has degree `α₁` and `c`
//! has degree 0. The degree-0 part is a copy of the rank `n−1` algebra
//! (`E((0,γ))` plays `E(γ)`), acting on `T_{μ'}(a,b)` with `μ' = (μ₂,…,μₙ)`:
//!
//! ```text
//! E((0,γ))·v_κ = (a + μ'·κ + b μ'·γ) v_{κ+γ},   c·v_κ = 0,
//! ```
//!
//! and the positive degrees act by zero. Inducing up gives a module spanned by
//! words in negative-degree generators applied to some `v_κ`; the level of a
//! word is minus its degree.
//!
//! At level 1, a vector lies in the maximal submodule meeting `T` trivially
//! exactly when every degree-1 generator kills it: its images land in `T`,
//! which is irreducible, and higher degrees already map level 1 to zero. The
//! level-1 weight spaces of the irreducible quotient are therefore computed
//! as ranks of the pairing between degree-1 raisings and the level-1 basis,
//! see [`quotient_dim_level1`].

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::algebra::{AlgebraElement, BasisSymbol};
use crate::density::{classify_density, DensityClass, DensityParams};
use crate::induced::{self, Inducing, Monomial, Vector};
use crate::lattice::{box_points, LatticePoint};
use crate::linalg::rank_scalar;
use crate::scalars::Scalar;

pub type GvmMonomial = Monomial<LatticePoint>;
pub type GvmVector = Vector<LatticePoint>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GvmError {
    #[error("T(a,b) is {0}; the level-1 rank criterion needs it irreducible")]
    NotFormalParams(&'static str),
    #[error("level must be at least 1")]
    InvalidLevel,
    #[error("the base index needs rank at least 1 (ambient rank at least 2)")]
    RankTooSmall,
    #[error("radius must be at least 1, got {0}")]
    InvalidRadius(i64),
}

/// Splits `x` by degree, the first coordinate; `c` goes to degree 0.
pub fn grade_of(x: &AlgebraElement) -> BTreeMap<i64, AlgebraElement> {
    let mut out: BTreeMap<i64, AlgebraElement> = BTreeMap::new();
    for (sym, coef) in x.terms() {
        let d = match sym {
            BasisSymbol::E(a) => a.coords().first().copied().unwrap_or(0),
            BasisSymbol::Central => 0,
        };
        out.entry(d).or_default().add_term(sym.clone(), coef.clone());
    }
    out
}

/// The generalized Verma module as an [`Inducing`] datum.
#[derive(Debug, Clone)]
pub struct GvmModule {
    pub params: DensityParams,
}

impl Inducing for GvmModule {
    type Base = LatticePoint;

    fn is_lowering(&self, alpha: &LatticePoint) -> bool {
        alpha.coords()[0] < 0
    }

    fn act_on_base(&self, sym: &BasisSymbol, kappa: &LatticePoint) -> Vec<(LatticePoint, Scalar)> {
        match sym {
            BasisSymbol::E(alpha) if alpha.coords()[0] == 0 => {
                let gamma = alpha.tail();
                // μ'·κ is μ·(0,κ) in the ambient indeterminates
                let mut k = &Scalar::form(&LatticePoint::cons(0, kappa)) + self.params.a();
                if !gamma.is_zero() {
                    k = &k + &(&Scalar::form(alpha) * self.params.b());
                }
                vec![(kappa + &gamma, k)]
            }
            _ => Vec::new(),
        }
    }
}

/// `x·v`.
pub fn gvm_act(x: &AlgebraElement, v: &GvmVector, p: &DensityParams) -> GvmVector {
    induced::act(&GvmModule { params: p.clone() }, x, v)
}

/// Level of a monomial: minus the sum of first coordinates of its word.
pub fn level(m: &GvmMonomial) -> i64 {
    -m.word().iter().map(|g| g.coords()[0]).sum::<i64>()
}

/// Total `μ'`-shift of a monomial: the base index plus the word's tails.
pub fn total_shift(m: &GvmMonomial) -> LatticePoint {
    m.word().iter().fold(m.base().clone(), |acc, g| &acc + &g.tail())
}

/// All monomials of level `i` and total shift `κ` whose letters have tails
/// in the box of radius `r`; sorted.
///
/// The base index is determined by the word, so each weight space of `T`
/// contributes at most once per word.
pub fn level_weight_basis(i: i64, kappa: &LatticePoint, r: i64) -> Result<Vec<GvmMonomial>, GvmError> {
    if i < 1 {
        return Err(GvmError::InvalidLevel);
    }
    if r < 1 {
        return Err(GvmError::InvalidRadius(r));
    }
    let tails = box_points(kappa.rank(), r);
    let mut letters: Vec<LatticePoint> = Vec::new();
    for d in 1..=i {
        for t in &tails {
            letters.push(LatticePoint::cons(-d, t));
        }
    }
    letters.sort();
    let mut out = Vec::new();
    let mut word = Vec::new();
    complete(&letters, 0, i, kappa, &mut word, &mut out);
    out.sort();
    Ok(out)
}

fn complete(letters: &[LatticePoint], from: usize, level_left: i64, kappa: &LatticePoint, word: &mut Vec<LatticePoint>, out: &mut Vec<GvmMonomial>) {
    if level_left == 0 {
        let base = word.iter().fold(kappa.clone(), |acc, g| &acc - &g.tail());
        out.push(Monomial::new(word.clone(), base).expect("letters are appended in order"));
        return;
    }
    for j in from..letters.len() {
        let d = -letters[j].coords()[0];
        if d > level_left {
            continue;
        }
        word.push(letters[j].clone());
        complete(letters, j, level_left - d, kappa, word, out);
        word.pop();
    }
}

/// Irreducibility type of the base `T_{μ'}(a,b)` inside the rank-`n`
/// algebra.
///
/// `a` is written in the ambient indeterminates, so `a ∈ Γ_{μ'}` means
/// `a = μ·(0,γ)`; a value such as `μ₁` is generic for `T_{μ'}`.
pub fn base_class(p: &DensityParams, n: usize) -> DensityClass {
    let class = classify_density(p, n);
    match class.witness() {
        Some(w) if w.coords()[0] == 0 => match class {
            DensityClass::ReducibleTrivialSub { .. } => DensityClass::ReducibleTrivialSub { witness: w.tail() },
            DensityClass::ReducibleCodimOne { .. } => DensityClass::ReducibleCodimOne { witness: w.tail() },
            DensityClass::Irreducible => DensityClass::Irreducible,
        },
        _ => DensityClass::Irreducible,
    }
}

/// Rank of the level-1 pairing in one box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxRank {
    pub radius: i64,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
}

/// Result of [`quotient_dim_level1`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientReport {
    pub boxes: Vec<BoxRank>,
    /// The last three ranks agree (constant across two box increments).
    /// Evidence, not proof.
    pub stabilized: bool,
}

impl QuotientReport {
    pub fn max_rank(&self) -> usize {
        self.boxes.iter().map(|b| b.rank).max().unwrap_or(0)
    }

    pub fn is_monotone(&self) -> bool {
        self.boxes.windows(2).all(|w| w[0].rank <= w[1].rank)
    }
}

/// `1·3·5⋯(2i+1)` as text and value.
pub fn double_factorial_bound(i: u32) -> (String, u128) {
    let factors: Vec<u128> = (0..=i).map(|k| 2 * k as u128 + 1).collect();
    let text = factors.iter().map(u128::to_string).collect::<Vec<_>>().join("*");
    (text, factors.iter().product())
}

/// The pairing matrix: rows `E((1,γ'))`, columns the level-1 basis, entry
/// the coefficient of the single base vector `E((1,γ'))·w` lands on.
pub fn level1_pairing(kappa: &LatticePoint, p: &DensityParams, r: i64) -> Result<Vec<Vec<Scalar>>, GvmError> {
    let cols = level_weight_basis(1, kappa, r)?;
    let module = GvmModule { params: p.clone() };
    let rows: Vec<LatticePoint> = box_points(kappa.rank(), r).iter().map(|t| LatticePoint::cons(1, t)).collect();
    Ok(rows
        .par_iter()
        .map(|g| {
            let x = AlgebraElement::e(g.clone());
            let target = Monomial::base_vector(kappa + &g.tail());
            cols.iter()
                .map(|m| {
                    let out = induced::act(&module, &x, &GvmVector::monomial(m.clone()));
                    debug_assert!(out.terms().all(|(t, _)| *t == target));
                    out.coefficient(&target)
                })
                .collect()
        })
        .collect())
}

/// Level-1 weight-space dimension of the irreducible quotient at total shift
/// `κ`, as the exact rank of [`level1_pairing`] for each radius.
pub fn quotient_dim_level1(kappa: &LatticePoint, p: &DensityParams, radii: &[i64]) -> Result<QuotientReport, GvmError> {
    if kappa.rank() < 1 {
        return Err(GvmError::RankTooSmall);
    }
    let class = base_class(p, kappa.rank() + 1);
    if class != DensityClass::Irreducible {
        return Err(GvmError::NotFormalParams(class.name()));
    }
    let mut boxes = Vec::with_capacity(radii.len());
    for &r in radii {
        let m = level1_pairing(kappa, p, r)?;
        let cols = m.first().map_or(0, Vec::len);
        boxes.push(BoxRank { radius: r, rows: m.len(), cols, rank: rank_scalar(&m) });
    }
    let stabilized = boxes.len() >= 3 && boxes[boxes.len() - 3..].windows(2).all(|w| w[0].rank == w[1].rank);
    Ok(QuotientReport { boxes, stabilized })
}
