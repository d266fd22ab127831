//! Integer lattice arithmetic for the cocharacter lattice N and the character
//! lattice M.
//!
//! All vectors are plain integer tuples; which lattice a vector lives in is a
//! matter of bookkeeping at the call site. Cones are stored by their generator
//! lists and dual-cone membership is checked generator-wise, which is exact
//! for rays and for the simplicial cones of a complete 2-d fan.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("cone has no generators")]
    EmptyCone,
    #[error("cone generator {0} is not primitive")]
    NonPrimitiveGenerator(LatticeVec),
    #[error("cone generators {0} and {1} do not span a strictly convex cone")]
    NotStrictlyConvex(LatticeVec, LatticeVec),
}

/// A vector in a rank-n lattice, stored as exact integer coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVec {
    coords: Vec<i64>,
}

impl LatticeVec {
    pub fn new(coords: Vec<i64>) -> Self {
        Self { coords }
    }

    /// Convenience constructor for the rank-2 case.
    pub fn xy(x: i64, y: i64) -> Self {
        Self { coords: vec![x, y] }
    }

    pub fn zero(rank: usize) -> Self {
        Self {
            coords: vec![0; rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.rank(), other.rank());
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.rank(), other.rank());
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coords.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, t: i64) -> Self {
        Self::new(self.coords.iter().map(|a| a * t).collect())
    }

    /// Rotate a rank-2 vector a quarter turn anticlockwise: (x, y) ↦ (−y, x).
    ///
    /// The result generates the annihilator of the ray through `self`.
    pub fn perp2(&self) -> Self {
        assert_eq!(self.rank(), 2, "perp2 is only defined in rank 2");
        Self::xy(-self.coords[1], self.coords[0])
    }
}

impl fmt::Debug for LatticeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LatticeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The canonical pairing Σ mᵢ vᵢ between a character `m` and a cocharacter `v`.
pub fn pair(m: &LatticeVec, v: &LatticeVec) -> Result<i64, LatticeError> {
    if m.rank() != v.rank() {
        return Err(LatticeError::DimensionMismatch(m.rank(), v.rank()));
    }
    let mut acc: i128 = 0;
    for (a, b) in m.coords().iter().zip(v.coords()) {
        acc += (*a as i128) * (*b as i128);
    }
    i64::try_from(acc).map_err(|_| LatticeError::Overflow)
}

/// Divide a nonzero vector by the gcd of its coordinates.
pub fn primitive(v: &LatticeVec) -> Result<LatticeVec, LatticeError> {
    if v.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    let g = v.coords().iter().fold(0i64, |acc, &c| gcd(acc, c.abs()));
    Ok(LatticeVec::new(v.coords().iter().map(|c| c / g).collect()))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn is_primitive(v: &LatticeVec) -> bool {
    !v.is_zero() && primitive(v).map(|p| p == *v).unwrap_or(false)
}

/// Generators of a strictly convex rational cone (a ray, or a 2-d cone).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeGens {
    rays: Vec<LatticeVec>,
}

impl ConeGens {
    /// A single ray.
    pub fn ray(v: LatticeVec) -> Result<Self, LatticeError> {
        Self::new(vec![v])
    }

    /// A cone spanned by two rays (rank 2).
    pub fn cone2(a: LatticeVec, b: LatticeVec) -> Result<Self, LatticeError> {
        Self::new(vec![a, b])
    }

    pub fn new(rays: Vec<LatticeVec>) -> Result<Self, LatticeError> {
        if rays.is_empty() {
            return Err(LatticeError::EmptyCone);
        }
        for r in &rays {
            if !is_primitive(r) {
                return Err(LatticeError::NonPrimitiveGenerator(r.clone()));
            }
        }
        if rays.len() == 2 && rays[0].rank() == 2 {
            // Minimality in rank 2: two generators must be linearly
            // independent (equal or antiparallel primitives are degenerate).
            let cross = rays[0].coords()[0] * rays[1].coords()[1]
                - rays[0].coords()[1] * rays[1].coords()[0];
            if cross == 0 {
                return Err(LatticeError::NotStrictlyConvex(
                    rays[0].clone(),
                    rays[1].clone(),
                ));
            }
        }
        Ok(Self { rays })
    }

    pub fn rays(&self) -> &[LatticeVec] {
        &self.rays
    }
}

/// Membership of `m` in the dual cone c^∨ = {x : ⟨x, ξ⟩ ≥ 0 ∀ξ ∈ c},
/// checked generator-wise.
pub fn in_dual_cone(m: &LatticeVec, c: &ConeGens) -> Result<bool, LatticeError> {
    for v in c.rays() {
        if pair(m, v)? < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership of `m` in the annihilator c^⊥ (pairing zero on every generator).
pub fn in_perp(m: &LatticeVec, c: &ConeGens) -> Result<bool, LatticeError> {
    for v in c.rays() {
        if pair(m, v)? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64, y: i64) -> LatticeVec {
        LatticeVec::xy(x, y)
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pair(&v(1, 0), &v(1, 0)).unwrap(), 1);
        assert_eq!(pair(&v(0, 0), &v(5, -3)).unwrap(), 0);
        assert_eq!(pair(&v(1, 1), &v(-1, -1)).unwrap(), -2);
        assert_eq!(
            pair(&v(1, 0), &LatticeVec::new(vec![1, 0, 0])),
            Err(LatticeError::DimensionMismatch(2, 3))
        );
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive(&v(2, 4)).unwrap(), v(1, 2));
        assert_eq!(primitive(&v(0, -3)).unwrap(), v(0, -1));
        assert_eq!(primitive(&v(7, 5)).unwrap(), v(7, 5));
        assert_eq!(primitive(&v(0, 0)), Err(LatticeError::ZeroVector));
    }

    #[test]
    fn primitive_is_idempotent() {
        for x in -6..=6i64 {
            for y in -6..=6 {
                if x == 0 && y == 0 {
                    continue;
                }
                let p = primitive(&v(x, y)).unwrap();
                assert_eq!(primitive(&p).unwrap(), p);
            }
        }
    }

    #[test]
    fn dual_cone_examples() {
        let quad = ConeGens::cone2(v(1, 0), v(0, 1)).unwrap();
        assert!(in_dual_cone(&v(1, 0), &quad).unwrap());
        assert!(!in_dual_cone(&v(-1, 0), &quad).unwrap());
        let ray = ConeGens::ray(v(1, 0)).unwrap();
        assert!(in_dual_cone(&v(1, -1), &ray).unwrap());
    }

    #[test]
    fn perp_examples() {
        let ray = ConeGens::ray(v(1, 0)).unwrap();
        assert!(in_perp(&v(0, 1), &ray).unwrap());
        assert!(!in_perp(&v(1, 1), &ray).unwrap());
        let quad = ConeGens::cone2(v(1, 0), v(0, 1)).unwrap();
        assert!(in_perp(&v(0, 0), &quad).unwrap());
    }

    #[test]
    fn perp_iff_dual_both_ways() {
        let cones = [
            ConeGens::ray(v(1, 0)).unwrap(),
            ConeGens::ray(v(-1, 2)).unwrap(),
            ConeGens::cone2(v(1, 0), v(0, 1)).unwrap(),
            ConeGens::cone2(v(0, 1), v(-1, -1)).unwrap(),
        ];
        for c in &cones {
            for x in -3..=3i64 {
                for y in -3..=3 {
                    let m = v(x, y);
                    let perp = in_perp(&m, c).unwrap();
                    let both = in_dual_cone(&m, c).unwrap() && in_dual_cone(&m.neg(), c).unwrap();
                    assert_eq!(perp, both, "m={m} cone={c:?}");
                }
            }
        }
    }

    #[test]
    fn degenerate_cones_rejected() {
        assert!(ConeGens::cone2(v(1, 0), v(-1, 0)).is_err());
        assert!(ConeGens::cone2(v(1, 0), v(1, 0)).is_err());
        assert!(ConeGens::ray(v(2, 4)).is_err());
        assert!(ConeGens::new(vec![]).is_err());
    }
}
