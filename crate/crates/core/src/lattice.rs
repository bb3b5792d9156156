//! Points of ℤⁿ with the lexicographic group order.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use smallvec::SmallVec;

/// A point `α ∈ ℤⁿ`. Indexes the basis vectors `e_{μ·α}` of the algebra and
/// the weight vectors of every module in this crate.
///
/// The derived `Ord` is the lexicographic order, which is a group order:
/// `α < β` implies `α + γ < β + γ`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LatticePoint(SmallVec<[i64; 4]>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("rank mismatch: expected {expected}, got {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("cannot parse lattice point `{0}`")]
    Parse(String),
}

impl LatticePoint {
    pub fn new(coords: &[i64]) -> Self {
        LatticePoint(SmallVec::from_slice(coords))
    }

    pub fn zero(rank: usize) -> Self {
        LatticePoint(SmallVec::from_elem(0, rank))
    }

    /// The `i`-th unit vector, 1-based.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut p = Self::zero(rank);
        p.0[i - 1] = 1;
        p
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Sign of the point in the lex order: `Less` for lex-negative points.
    pub fn lex_sign(&self) -> Ordering {
        self.0.iter().find(|&&c| c != 0).map_or(Ordering::Equal, |c| c.cmp(&0))
    }

    pub fn is_lex_negative(&self) -> bool {
        self.lex_sign() == Ordering::Less
    }

    pub fn is_lex_positive(&self) -> bool {
        self.lex_sign() == Ordering::Greater
    }

    pub fn scale(&self, k: i64) -> Self {
        LatticePoint(self.0.iter().map(|c| c * k).collect())
    }

    /// Max-norm; a point lies in the box of radius `r` iff `norm() <= r`.
    pub fn norm(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    /// Drops the first coordinate: `α ↦ α'`.
    pub fn tail(&self) -> LatticePoint {
        LatticePoint(self.0.iter().skip(1).copied().collect())
    }

    /// Prepends a coordinate: `(k, α')`.
    pub fn cons(head: i64, tail: &LatticePoint) -> LatticePoint {
        let mut v: SmallVec<[i64; 4]> = SmallVec::with_capacity(tail.rank() + 1);
        v.push(head);
        v.extend_from_slice(&tail.0);
        LatticePoint(v)
    }

    pub fn check_rank(&self, rank: usize) -> Result<(), LatticeError> {
        if self.rank() == rank {
            Ok(())
        } else {
            Err(LatticeError::RankMismatch { expected: rank, found: self.rank() })
        }
    }
}

/// Lexicographic comparison with a rank check.
pub fn lex_compare(a: &LatticePoint, b: &LatticePoint) -> Result<Ordering, LatticeError> {
    b.check_rank(a.rank())?;
    Ok(a.cmp(b))
}

/// All points of `[-r, r]ⁿ` in lexicographic order.
pub fn box_points(rank: usize, r: i64) -> Vec<LatticePoint> {
    let side = (2 * r + 1) as usize;
    let total = side.pow(rank as u32);
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![-r; rank];
    for _ in 0..total {
        out.push(LatticePoint::new(&cur));
        for i in (0..rank).rev() {
            if cur[i] < r {
                cur[i] += 1;
                break;
            }
            cur[i] = -r;
        }
    }
    out
}

impl Add for &LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: &LatticePoint) -> LatticePoint {
        debug_assert_eq!(self.rank(), rhs.rank());
        LatticePoint(self.0.iter().zip(rhs.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: &LatticePoint) -> LatticePoint {
        debug_assert_eq!(self.rank(), rhs.rank());
        LatticePoint(self.0.iter().zip(rhs.0.iter()).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for LatticePoint {
    type Err = LatticeError;

    /// Accepts `[1,-2]`, `(1,-2)` or a bare `1,-2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let t = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .or_else(|| t.strip_prefix('(').and_then(|x| x.strip_suffix(')')))
            .unwrap_or(t);
        let coords: Result<Vec<i64>, _> = t.split(',').map(|c| c.trim().parse::<i64>()).collect();
        match coords {
            Ok(c) if !c.is_empty() => Ok(LatticePoint::new(&c)),
            _ => Err(LatticeError::Parse(s.to_string())),
        }
    }
}
