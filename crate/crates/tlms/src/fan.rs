//! Complete fans in a rank-2 lattice.
//!
//! Rays are stored primitive, in anticlockwise order starting from the first
//! input ray. Maximal cones are implicit: σᵢ = cone(rᵢ, rᵢ₊₁ mod k), so ray
//! rⱼ is the wall shared by σⱼ₋₁ and σⱼ. All adjacency bookkeeping lives
//! here; higher modules only talk about cone and ray indices.

use thiserror::Error;

use crate::lattice::{pair, primitive, ConeGens, LatticeError, LatticeVec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FanError {
    #[error("a complete 2-d fan needs at least 3 rays, got {0}")]
    TooFewRays(usize),
    #[error("duplicate ray {0} after primitivization")]
    DuplicateRay(LatticeVec),
    #[error("rays leave an angular gap of at least π between {0} and {1}")]
    NotComplete(LatticeVec, LatticeVec),
    #[error("ray must be a nonzero rank-2 vector, got {0}")]
    BadRay(LatticeVec),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A complete fan on ℝ² given by its anticlockwise ray cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan2D {
    rays: Vec<LatticeVec>,
}

fn cross(a: &LatticeVec, b: &LatticeVec) -> i64 {
    a.coords()[0] * b.coords()[1] - a.coords()[1] * b.coords()[0]
}

fn dot(a: &LatticeVec, b: &LatticeVec) -> i64 {
    a.coords()[0] * b.coords()[0] + a.coords()[1] * b.coords()[1]
}

impl Fan2D {
    /// Build a complete fan from the given rays.
    ///
    /// Rays are primitivized, deduplicated (duplicates are an error) and
    /// sorted anticlockwise starting from the first input ray. Completeness
    /// means every consecutive pair spans an angle strictly less than π.
    pub fn build_complete_fan_2d(rays: &[LatticeVec]) -> Result<Self, FanError> {
        if rays.len() < 3 {
            return Err(FanError::TooFewRays(rays.len()));
        }
        let mut prim = Vec::with_capacity(rays.len());
        for r in rays {
            if r.rank() != 2 || r.is_zero() {
                return Err(FanError::BadRay(r.clone()));
            }
            prim.push(primitive(r)?);
        }
        let first = prim[0].clone();
        // Sort by angle relative to the first ray: the ray itself, then the
        // open half-plane above it, the opposite ray, the half-plane below.
        let sector = |v: &LatticeVec| -> u8 {
            let c = cross(&first, v);
            let d = dot(&first, v);
            if c == 0 {
                if d > 0 {
                    0
                } else {
                    2
                }
            } else if c > 0 {
                1
            } else {
                3
            }
        };
        let mut rest = prim.split_off(1);
        rest.sort_by(|a, b| {
            let (sa, sb) = (sector(a), sector(b));
            sa.cmp(&sb).then_with(|| 0.cmp(&cross(a, b)))
        });
        prim.extend(rest);
        for i in 0..prim.len() {
            let a = &prim[i];
            let b = &prim[(i + 1) % prim.len()];
            if a == b {
                return Err(FanError::DuplicateRay(a.clone()));
            }
            if cross(a, b) <= 0 {
                return Err(FanError::NotComplete(a.clone(), b.clone()));
            }
        }
        Ok(Self { rays: prim })
    }

    /// Number of rays (equals the number of maximal cones).
    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn cone_count(&self) -> usize {
        self.rays.len()
    }

    pub fn ray(&self, j: usize) -> &LatticeVec {
        &self.rays[j % self.rays.len()]
    }

    pub fn rays(&self) -> &[LatticeVec] {
        &self.rays
    }

    /// Maximal cone σᵢ = cone(rᵢ, rᵢ₊₁).
    pub fn max_cone(&self, i: usize) -> ConeGens {
        let k = self.rays.len();
        ConeGens::cone2(self.rays[i % k].clone(), self.rays[(i + 1) % k].clone())
            .expect("fan cones are strictly convex by construction")
    }

    /// The ray (as a single-generator cone) with index `j`.
    pub fn ray_cone(&self, j: usize) -> ConeGens {
        ConeGens::ray(self.ray(j).clone()).expect("fan rays are primitive")
    }

    /// Index of the ray shared by cones `i` and `j`, if they are adjacent.
    ///
    /// A cone shares no ray with itself by convention. In a fan with exactly
    /// three cones every distinct pair is adjacent.
    pub fn shared_ray_index(&self, i: usize, j: usize) -> Option<usize> {
        let k = self.rays.len();
        if i == j || i >= k || j >= k {
            return None;
        }
        if (i + 1) % k == j {
            Some(j)
        } else if (j + 1) % k == i {
            Some(i)
        } else {
            None
        }
    }

    /// The unique common ray of two adjacent maximal cones.
    pub fn shared_ray(&self, i: usize, j: usize) -> Option<&LatticeVec> {
        self.shared_ray_index(i, j).map(|r| self.ray(r))
    }

    /// Cones adjacent along ray `j`: (clockwise cone, anticlockwise cone).
    pub fn cones_of_ray(&self, j: usize) -> (usize, usize) {
        let k = self.rays.len();
        ((j + k - 1) % k, j % k)
    }

    /// Pairing of `m` with the primitive generator of ray `j`.
    pub fn restrict_to_ray(&self, m: &LatticeVec, j: usize) -> Result<i64, LatticeError> {
        pair(m, self.ray(j))
    }
}

/// The fan of the projective plane: rays (1,0), (0,1), (−1,−1).
pub fn p2_fan() -> Fan2D {
    Fan2D::build_complete_fan_2d(&[
        LatticeVec::xy(1, 0),
        LatticeVec::xy(0, 1),
        LatticeVec::xy(-1, -1),
    ])
    .expect("the plane fan is complete")
}

/// The product fan with rays (1,0), (0,1), (−1,0), (0,−1).
pub fn p1xp1_fan() -> Fan2D {
    Fan2D::build_complete_fan_2d(&[
        LatticeVec::xy(1, 0),
        LatticeVec::xy(0, 1),
        LatticeVec::xy(-1, 0),
        LatticeVec::xy(0, -1),
    ])
    .expect("the product fan is complete")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64, y: i64) -> LatticeVec {
        LatticeVec::xy(x, y)
    }

    #[test]
    fn p2_fan_convention() {
        let f = p2_fan();
        assert_eq!(f.rays(), &[v(1, 0), v(0, 1), v(-1, -1)]);
        assert_eq!(f.max_cone(0).rays(), &[v(1, 0), v(0, 1)]);
        assert_eq!(f.max_cone(1).rays(), &[v(0, 1), v(-1, -1)]);
        assert_eq!(f.max_cone(2).rays(), &[v(-1, -1), v(1, 0)]);
    }

    #[test]
    fn product_fan_has_four_cones() {
        let f = p1xp1_fan();
        assert_eq!(f.cone_count(), 4);
        // Opposite cones share nothing.
        assert_eq!(f.shared_ray(0, 2), None);
        assert_eq!(f.shared_ray(1, 3), None);
    }

    #[test]
    fn incomplete_inputs_rejected() {
        assert_eq!(
            Fan2D::build_complete_fan_2d(&[v(1, 0), v(0, 1)]),
            Err(FanError::TooFewRays(2))
        );
        // Three rays inside a half-plane leave a gap of more than π.
        assert!(matches!(
            Fan2D::build_complete_fan_2d(&[v(1, 0), v(1, 1), v(0, 1)]),
            Err(FanError::NotComplete(..))
        ));
        assert!(matches!(
            Fan2D::build_complete_fan_2d(&[v(1, 0), v(2, 0), v(0, 1), v(-1, -1)]),
            Err(FanError::DuplicateRay(..))
        ));
    }

    #[test]
    fn shared_rays_of_p2() {
        let f = p2_fan();
        assert_eq!(f.shared_ray(0, 1), Some(&v(0, 1)));
        assert_eq!(f.shared_ray(1, 0), Some(&v(0, 1)));
        assert_eq!(f.shared_ray(2, 0), Some(&v(1, 0)));
        assert_eq!(f.shared_ray(1, 1), None);
    }

    #[test]
    fn every_ray_is_shared_by_exactly_one_pair() {
        for f in [p2_fan(), p1xp1_fan()] {
            let k = f.cone_count();
            for j in 0..k {
                let mut pairs = vec![];
                for i in 0..k {
                    for l in 0..k {
                        if f.shared_ray_index(i, l) == Some(j) {
                            pairs.push((i, l));
                        }
                    }
                }
                // Ordered pairs: (cw, ccw) and (ccw, cw).
                assert_eq!(pairs.len(), 2);
                let (cw, ccw) = f.cones_of_ray(j);
                assert!(pairs.contains(&(cw, ccw)));
            }
        }
    }

    #[test]
    fn build_is_invariant_under_input_permutation() {
        let rays = [v(1, 0), v(2, 1), v(0, 1), v(-1, -1), v(0, -1)];
        let base = Fan2D::build_complete_fan_2d(&rays).unwrap();
        // Any rotation of the input produces the same ray cycle up to
        // cyclic relabeling.
        for s in 0..rays.len() {
            let mut rot = rays.to_vec();
            rot.rotate_left(s);
            let f = Fan2D::build_complete_fan_2d(&rot).unwrap();
            let k = f.ray_count();
            let shift = base.rays().iter().position(|r| r == f.ray(0)).unwrap();
            for j in 0..k {
                assert_eq!(f.ray(j), base.ray((j + shift) % k));
            }
        }
    }
}
