//! Exact rank and kernel computations.
//!
//! Two engines: Gaussian elimination over ℚ, and fraction-free (Bareiss)
//! elimination over the polynomial ring for matrices of [`Scalar`]s, which
//! computes the rank over the fraction field without ever dividing
//! inexactly.

use std::collections::BTreeMap;

use crate::lattice::LatticePoint;
use crate::scalars::{Polynomial, Rational, Scalar};

/// Row-reduced basis of a subspace of ℚᵐ, grown one vector at a time.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    ncols: usize,
    /// Reduced rows; `pivots[i]` is the pivot column of `rows[i]`, which is 1.
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    fn reduce(&self, v: &mut [Rational]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let k = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = &*x - &(&k * r);
                }
            }
        }
    }

    /// Whether `v` lies in the span.
    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(Rational::is_zero)
    }

    /// Adds `v`; returns `true` when it was independent of the rows so far.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ncols, "vector length");
        let mut v = v.to_vec();
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else { return false };
        let inv = v[p].recip().expect("nonzero pivot");
        for x in v.iter_mut() {
            *x = &*x * &inv;
        }
        // keep the basis fully reduced
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let k = row[p].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    if !r.is_zero() {
                        *x = &*x - &(&k * r);
                    }
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    /// Basis of `{x : r·x = 0 for every row r}`.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rational::zero(); self.ncols];
                x[f] = Rational::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    x[p] = -&row[f];
                }
                x
            })
            .collect()
    }
}

/// Rank over ℚ.
pub fn rank_rational(rows: &[Vec<Rational>]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let mut e = Echelon::new(first.len());
    for r in rows {
        e.insert(r);
        if e.is_full() {
            break;
        }
    }
    e.rank()
}

/// Rank of a matrix of scalars over the field of fractions
/// `ℚ(μ, a, b, λ, c)`.
///
/// Each row is multiplied by the product of its denominators, after which
/// Bareiss elimination runs on polynomial entries. All divisions in the
/// elimination are exact, being divisions of one minor by another.
pub fn rank_scalar(rows: &[Vec<Scalar>]) -> usize {
    let mut m: Vec<Vec<Polynomial>> = rows.iter().map(|r| clear_row_denominators(r)).collect();
    bareiss_rank(&mut m)
}

fn clear_row_denominators(row: &[Scalar]) -> Vec<Polynomial> {
    // lcm of the denominator forms: each form with its largest multiplicity
    let mut lcm: BTreeMap<&LatticePoint, usize> = BTreeMap::new();
    for x in row {
        let mut here: BTreeMap<&LatticePoint, usize> = BTreeMap::new();
        for d in x.denominator_forms() {
            *here.entry(d).or_default() += 1;
        }
        for (d, k) in here {
            let e = lcm.entry(d).or_default();
            *e = (*e).max(k);
        }
    }
    let mut mult = Scalar::one();
    for (d, k) in lcm {
        mult = &mult * &Scalar::form(d).pow(k as u32);
    }
    row.iter()
        .map(|x| {
            let cleared = x * &mult;
            debug_assert!(cleared.denominator_forms().is_empty());
            cleared.rational_numerator().clone()
        })
        .collect()
}

fn bareiss_rank(m: &mut [Vec<Polynomial>]) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut prev = Polynomial::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        // the sparsest nonzero candidate keeps intermediate entries small
        let Some(p) = (r..nrows).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| (m[i][c].len(), i)) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let num = m[r][c].mul(&m[i][j]).sub(&m[i][c].mul(&m[r][j]));
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][c] = Polynomial::zero();
        }
        // entries of the pivot row outside the processed block are not
        // needed again, and rows above are final
        prev = m[r][c].clone();
        r += 1;
    }
    r
}
