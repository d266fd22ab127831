//! Sparse Laurent polynomials over the character lattice M, and square
//! matrices of them.
//!
//! A term is a rational coefficient attached to an integer exponent vector;
//! a polynomial stores no zero coefficients. Matrix entries are indexed
//! (row, col) = (sheet of the first cone, sheet of the second cone), so the
//! transition product chains as `G₁₂ · G₂₃ = G₁₃` (exponents telescope).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::lattice::{in_dual_cone, pair, ConeGens, LatticeError, LatticeVec};
use crate::multisection::MultiSection;
use crate::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaurentError {
    #[error("matrix size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("polynomial is not regular on the given cone (term z^{0})")]
    NotRegular(LatticeVec),
    #[error("cones {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Finite sum of terms c·z^m with nonzero rational c and exponents m in M.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<LatticeVec, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rat, rank: usize) -> Self {
        Self::monomial(LatticeVec::zero(rank), c)
    }

    pub fn monomial(exp: LatticeVec, coeff: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticeVec, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &LatticeVec) -> Rat {
        self.terms.get(exp).cloned().unwrap_or_else(Rat::zero)
    }

    /// True when the polynomial is a single term `c·z^exp`.
    pub fn as_monomial(&self) -> Option<(&LatticeVec, &Rat)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn insert(&mut self, exp: LatticeVec, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }
}

/// Exact sum; canceling terms are removed.
pub fn lp_add(p: &LaurentPoly, q: &LaurentPoly) -> LaurentPoly {
    let mut out = p.clone();
    for (e, c) in q.terms() {
        out.insert(e.clone(), c.clone());
    }
    out
}

/// Exact product; canceling terms are removed.
pub fn lp_mul(p: &LaurentPoly, q: &LaurentPoly) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (e1, c1) in p.terms() {
        for (e2, c2) in q.terms() {
            out.insert(e1.add(e2), c1 * c2);
        }
    }
    out
}

pub fn lp_neg(p: &LaurentPoly) -> LaurentPoly {
    LaurentPoly {
        terms: p.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
    }
}

/// True iff every exponent of `p` lies in the dual cone of `c`.
pub fn is_regular_on(p: &LaurentPoly, c: &ConeGens) -> Result<bool, LaurentError> {
    for (e, _) in p.terms() {
        if !in_dual_cone(e, c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Drop every term whose exponent pairs strictly positively with some
/// generator of `c`; keep the c^⊥ terms. Requires `p` regular on `c`.
pub fn restrict_to_perp(p: &LaurentPoly, c: &ConeGens) -> Result<LaurentPoly, LaurentError> {
    let mut out = LaurentPoly::zero();
    'terms: for (e, coeff) in p.terms() {
        let mut in_perp = true;
        for v in c.rays() {
            let t = pair(e, v)?;
            if t < 0 {
                return Err(LaurentError::NotRegular(e.clone()));
            }
            if t > 0 {
                in_perp = false;
            }
        }
        if in_perp {
            out.insert(e.clone(), coeff.clone());
            continue 'terms;
        }
    }
    Ok(out)
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c} * z^{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Square matrix of Laurent polynomials.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentMatrix {
    size: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zero(size: usize) -> Self {
        Self {
            size,
            entries: vec![LaurentPoly::zero(); size * size],
        }
    }

    pub fn identity(size: usize, rank: usize) -> Self {
        let mut m = Self::zero(size);
        for i in 0..size {
            m[(i, i)] = LaurentPoly::constant(crate::rat(1), rank);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_identity(&self, rank: usize) -> bool {
        let one = LaurentPoly::constant(crate::rat(1), rank);
        (0..self.size).all(|i| {
            (0..self.size).all(|j| {
                if i == j {
                    self[(i, j)] == one
                } else {
                    self[(i, j)].is_zero()
                }
            })
        })
    }
}

impl std::ops::Index<(usize, usize)> for LaurentMatrix {
    type Output = LaurentPoly;
    fn index(&self, (i, j): (usize, usize)) -> &LaurentPoly {
        &self.entries[i * self.size + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for LaurentMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut LaurentPoly {
        &mut self.entries[i * self.size + j]
    }
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.size {
            if i > 0 {
                write!(f, " ; ")?;
            }
            for j in 0..self.size {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Exact matrix product.
pub fn mat_mul(a: &LaurentMatrix, b: &LaurentMatrix) -> Result<LaurentMatrix, LaurentError> {
    if a.size != b.size {
        return Err(LaurentError::SizeMismatch(a.size, b.size));
    }
    let mut out = LaurentMatrix::zero(a.size);
    for i in 0..a.size {
        for l in 0..a.size {
            if a[(i, l)].is_zero() {
                continue;
            }
            for j in 0..a.size {
                if b[(l, j)].is_zero() {
                    continue;
                }
                let t = lp_mul(&a[(i, l)], &b[(l, j)]);
                out[(i, j)] = lp_add(&out[(i, j)], &t);
            }
        }
    }
    Ok(out)
}

/// The monomial matrix of an adjacent cone pair: entry (α,β) carries
/// z^{m(σᵢ^{(α)}) − m(σⱼ^{(β)})} when the difference lies in the dual of the
/// shared ray, and 0 otherwise. Diagonal entries are forced nonzero by
/// continuity whenever the sheets are labeled compatibly with the matchings.
pub fn monomial_matrix(
    ms: &MultiSection,
    i: usize,
    j: usize,
) -> Result<LaurentMatrix, LaurentError> {
    let ray = ms
        .fan()
        .shared_ray_index(i, j)
        .ok_or(LaurentError::NotAdjacent(i, j))?;
    let ray_cone = ms.fan().ray_cone(ray);
    let si = ms.sheets_of_cone(i);
    let sj = ms.sheets_of_cone(j);
    if si.len() != sj.len() {
        return Err(LaurentError::SizeMismatch(si.len(), sj.len()));
    }
    let mut out = LaurentMatrix::zero(si.len());
    for (a, &sa) in si.iter().enumerate() {
        for (b, &sb) in sj.iter().enumerate() {
            let d = ms.sheet(sa).slope.sub(&ms.sheet(sb).slope);
            if in_dual_cone(&d, &ray_cone)? {
                out[(a, b)] = LaurentPoly::monomial(d, crate::rat(1));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multisection::test_fixtures::tp2_normalized;
    use crate::rat;

    fn v(x: i64, y: i64) -> LatticeVec {
        LatticeVec::xy(x, y)
    }

    fn z(x: i64, y: i64) -> LaurentPoly {
        LaurentPoly::monomial(v(x, y), rat(1))
    }

    #[test]
    fn monomials_multiply_and_cancel() {
        assert_eq!(lp_mul(&z(1, 0), &z(-1, 0)), z(0, 0));
        let p = lp_add(&z(0, 0), &lp_neg(&z(0, 0)));
        assert!(p.is_zero());
    }

    #[test]
    fn identity_is_neutral_and_mul_associative() {
        let a = {
            let mut m = LaurentMatrix::identity(2, 2);
            m[(0, 1)] = lp_neg(&z(2, -1));
            m
        };
        let id = LaurentMatrix::identity(2, 2);
        assert_eq!(mat_mul(&id, &a).unwrap(), a);
        assert_eq!(mat_mul(&a, &id).unwrap(), a);

        let b = {
            let mut m = LaurentMatrix::identity(2, 2);
            m[(0, 1)] = z(2, -1);
            m
        };
        // Unitriangular inverse pair.
        assert!(mat_mul(&a, &b).unwrap().is_identity(2));

        let c = {
            let mut m = LaurentMatrix::identity(2, 2);
            m[(1, 0)] = z(0, 3);
            m
        };
        let ab_c = mat_mul(&mat_mul(&a, &b).unwrap(), &c).unwrap();
        let a_bc = mat_mul(&a, &mat_mul(&b, &c).unwrap()).unwrap();
        assert_eq!(ab_c, a_bc);
    }

    #[test]
    fn regularity_examples() {
        let quad = ConeGens::cone2(v(1, 0), v(0, 1)).unwrap();
        assert!(is_regular_on(&z(1, 1), &quad).unwrap());
        assert!(!is_regular_on(&z(-1, 0), &quad).unwrap());
        assert!(is_regular_on(&LaurentPoly::constant(rat(1), 2), &quad).unwrap());
    }

    #[test]
    fn restriction_examples() {
        let ray = ConeGens::ray(v(1, 0)).unwrap();
        assert!(restrict_to_perp(&z(1, 1), &ray).unwrap().is_zero());
        assert_eq!(restrict_to_perp(&z(0, 1), &ray).unwrap(), z(0, 1));
        let p = lp_add(&z(0, 0), &z(1, 0));
        assert_eq!(restrict_to_perp(&p, &ray).unwrap(), z(0, 0));
        assert!(matches!(
            restrict_to_perp(&z(-1, 0), &ray),
            Err(LaurentError::NotRegular(_))
        ));
    }

    #[test]
    fn restriction_is_multiplicative_on_regular_inputs() {
        let ray = ConeGens::ray(v(1, 0)).unwrap();
        let ps = [z(0, 1), lp_add(&z(0, 0), &z(1, 0)), z(2, -3), z(0, 0)];
        for p in &ps {
            for q in &ps {
                let lhs = restrict_to_perp(&lp_mul(p, q), &ray).unwrap();
                let rhs = lp_mul(
                    &restrict_to_perp(p, &ray).unwrap(),
                    &restrict_to_perp(q, &ray).unwrap(),
                );
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn tangent_bundle_monomial_matrix_is_lower_triangular() {
        let ms = tp2_normalized();
        // Sheets over cone 0: (1,0) then (0,1); over cone 1: (-1,0) then (-1,1).
        let m = monomial_matrix(&ms, 0, 1).unwrap();
        assert_eq!(m[(0, 0)], z(2, 0));
        assert_eq!(m[(1, 1)], z(1, 0));
        assert_eq!(m[(1, 0)], z(1, 1));
        assert!(m[(0, 1)].is_zero());
    }

    #[test]
    fn rank1_monomial_matrix() {
        let fan = crate::fan::p2_fan();
        let ms = MultiSection::section(
            fan,
            vec![v(0, 0), v(1, 0), v(0, 1)], // the O(D_0) section
        )
        .unwrap();
        let m = monomial_matrix(&ms, 0, 1).unwrap();
        assert_eq!(m[(0, 0)], z(-1, 0));
    }
}
