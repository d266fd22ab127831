//! Kaneyama transition data: rational coefficient matrices per ordered pair
//! of maximal cones, validated against the identity, support, and cocycle
//! conditions, and assembled into Laurent transition matrices.
//!
//! Matrix rows are indexed by the sheet labels of the first cone, columns by
//! the second cone's. "Lifts intersect" in the support condition is read as
//! "the two sheets share a vertex lift", i.e. lie in the same connected
//! component of the cover.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::laurent::{mat_mul, monomial_matrix, LaurentError, LaurentMatrix, LaurentPoly};
use crate::matrix::{MatrixError, RatMatrix};
use crate::multisection::{CoverMorphism, MsError, MultiSection};
use crate::Rat;

#[derive(Debug, Error)]
pub enum KaneyamaError {
    #[error("coefficient data has rank {0}, multi-section has rank {1}")]
    RankMismatch(usize, u64),
    #[error("matrix for cone pair ({0},{1}) is missing")]
    MissingPair(usize, usize),
    #[error("matrix for cone pair ({0},{1}) has the wrong shape")]
    BadShape(usize, usize),
    #[error("adjacent matrix for ({0},{1}) is singular; no inverse transition exists")]
    SingularAdjacent(usize, usize),
    #[error("support violation at pair ({i},{j}) entry ({row},{col})")]
    SupportViolation { i: usize, j: usize, row: usize, col: usize },
    #[error("cover morphism fails verification")]
    BadMorphism,
    #[error("direct sum requires weight-1 cells with no merging across summands")]
    MergedCells,
    #[error(transparent)]
    MultiSection(#[from] MsError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Lattice(#[from] crate::lattice::LatticeError),
}

/// A violated Kaneyama condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KDiag {
    /// g_{σσ} is not the identity.
    Identity { cone: usize },
    /// Nonzero entry outside the allowed support of an adjacent pair.
    Support { i: usize, j: usize, row: usize, col: usize },
    /// Nonzero entry between sheets that share no vertex lift.
    Disconnected { i: usize, j: usize, row: usize, col: usize },
    /// g_{σiσj}·g_{σjσl} ≠ g_{σiσl} as Laurent matrices.
    Cocycle { i: usize, j: usize, l: usize },
}

impl fmt::Display for KDiag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KDiag::Identity { cone } => write!(f, "(G1) g[{cone},{cone}] is not the identity"),
            KDiag::Support { i, j, row, col } => {
                write!(f, "(G2) g[{i},{j}] entry ({row},{col}) lies outside the allowed support")
            }
            KDiag::Disconnected { i, j, row, col } => write!(
                f,
                "(G2) g[{i},{j}] entry ({row},{col}) couples sheets with no common vertex lift"
            ),
            KDiag::Cocycle { i, j, l } => {
                write!(f, "(G3) g[{i},{j}]*g[{j},{l}] != g[{i},{l}]")
            }
        }
    }
}

/// Coefficient matrices g_{σiσj} for every ordered pair of maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KaneyamaData {
    rank: usize,
    cone_count: usize,
    mats: BTreeMap<(usize, usize), RatMatrix>,
}

impl KaneyamaData {
    /// Build full data from the anticlockwise adjacent transitions
    /// g_{σi σi+1}. Reverse adjacents may be supplied; missing ones are
    /// completed as inverses. Non-adjacent pairs are completed by chaining
    /// anticlockwise; [`validate_kaneyama`] is what certifies that the
    /// completion is consistent.
    pub fn from_adjacent(
        cone_count: usize,
        rank: usize,
        forward: Vec<RatMatrix>,
        reverse: Option<Vec<RatMatrix>>,
    ) -> Result<Self, KaneyamaError> {
        assert_eq!(forward.len(), cone_count);
        let mut mats = BTreeMap::new();
        for i in 0..cone_count {
            mats.insert((i, i), RatMatrix::identity(rank));
        }
        for (i, m) in forward.iter().enumerate() {
            let j = (i + 1) % cone_count;
            if m.rows() != rank || m.cols() != rank {
                return Err(KaneyamaError::BadShape(i, j));
            }
            mats.insert((i, j), m.clone());
        }
        match reverse {
            Some(rev) => {
                assert_eq!(rev.len(), cone_count);
                for (i, m) in rev.into_iter().enumerate() {
                    let j = (i + 1) % cone_count;
                    if m.rows() != rank || m.cols() != rank {
                        return Err(KaneyamaError::BadShape(j, i));
                    }
                    mats.insert((j, i), m);
                }
            }
            None => {
                for i in 0..cone_count {
                    let j = (i + 1) % cone_count;
                    let inv = forward[i]
                        .inverse()
                        .map_err(|_| KaneyamaError::SingularAdjacent(i, j))?;
                    mats.insert((j, i), inv);
                }
            }
        }
        for i in 0..cone_count {
            for j in 0..cone_count {
                if mats.contains_key(&(i, j)) {
                    continue;
                }
                let mut acc = RatMatrix::identity(rank);
                let mut c = i;
                while c != j {
                    let n = (c + 1) % cone_count;
                    acc = acc.mul(&mats[&(c, n)])?;
                    c = n;
                }
                mats.insert((i, j), acc);
            }
        }
        Ok(Self { rank, cone_count, mats })
    }

    /// Data given explicitly for every ordered pair (diagonal included).
    pub fn from_pairs(
        cone_count: usize,
        rank: usize,
        mats: BTreeMap<(usize, usize), RatMatrix>,
    ) -> Result<Self, KaneyamaError> {
        for i in 0..cone_count {
            for j in 0..cone_count {
                let m = mats.get(&(i, j)).ok_or(KaneyamaError::MissingPair(i, j))?;
                if m.rows() != rank || m.cols() != rank {
                    return Err(KaneyamaError::BadShape(i, j));
                }
            }
        }
        Ok(Self { rank, cone_count, mats })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cone_count(&self) -> usize {
        self.cone_count
    }

    pub fn pair(&self, i: usize, j: usize) -> &RatMatrix {
        &self.mats[&(i, j)]
    }

    /// The anticlockwise adjacent transitions g_{σ0σ1}, …, g_{σk−1σ0}.
    pub fn forward_adjacents(&self) -> Vec<RatMatrix> {
        (0..self.cone_count)
            .map(|i| self.pair(i, (i + 1) % self.cone_count).clone())
            .collect()
    }
}

fn check_preconditions(ms: &MultiSection, g: &KaneyamaData) -> Result<(), KaneyamaError> {
    if g.rank as u64 != ms.rank() || g.cone_count != ms.fan().cone_count() {
        return Err(KaneyamaError::RankMismatch(g.rank, ms.rank()));
    }
    if !ms.all_cell_weights_one() {
        return Err(KaneyamaError::MultiSection(MsError::UnsupportedWeights));
    }
    if !ms.check_separable(2)? {
        return Err(KaneyamaError::MultiSection(MsError::Invalid(
            "multi-section is not 2-separable".into(),
        )));
    }
    Ok(())
}

/// Check (G1), (G2) and (G3). Returns one diagnostic per violation; empty
/// means the data is a valid Kaneyama datum for `ms`.
///
/// (G3) is checked on the assembled Laurent matrices for every ordered
/// triple of maximal cones; over the origin's chart every character is
/// allowed, so this is exactly the cocycle of the full transition data.
pub fn validate_kaneyama(ms: &MultiSection, g: &KaneyamaData) -> Result<Vec<KDiag>, KaneyamaError> {
    check_preconditions(ms, g)?;
    let k = g.cone_count;
    let mut out = Vec::new();
    for i in 0..k {
        if !g.pair(i, i).is_identity() {
            out.push(KDiag::Identity { cone: i });
        }
    }
    for i in 0..k {
        for j in 0..k {
            if i != j {
                out.extend(support_diagnostics(ms, g, i, j)?);
            }
        }
    }
    let mut assembled = BTreeMap::new();
    for i in 0..k {
        for j in 0..k {
            assembled.insert((i, j), assemble_unchecked(ms, g, i, j));
        }
    }
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                let prod = mat_mul(&assembled[&(i, j)], &assembled[&(j, l)])?;
                if prod != assembled[&(i, l)] {
                    out.push(KDiag::Cocycle { i, j, l });
                }
            }
        }
    }
    Ok(out)
}

fn support_diagnostics(
    ms: &MultiSection,
    g: &KaneyamaData,
    i: usize,
    j: usize,
) -> Result<Vec<KDiag>, KaneyamaError> {
    let mut out = Vec::new();
    let m = g.pair(i, j);
    let si = ms.sheets_of_cone(i);
    let sj = ms.sheets_of_cone(j);
    let pattern = if ms.fan().shared_ray_index(i, j).is_some() {
        Some(monomial_matrix(ms, i, j)?)
    } else {
        // Non-adjacent cones meet only at the origin, whose dual cone is all
        // of M: no character constraint applies.
        None
    };
    for (row, &sa) in si.iter().enumerate() {
        for (col, &sb) in sj.iter().enumerate() {
            if m[(row, col)].is_zero() {
                continue;
            }
            if let Some(p) = &pattern {
                if p[(row, col)].is_zero() {
                    out.push(KDiag::Support { i, j, row, col });
                }
            }
            let shared_component = ms
                .vertex_lifts()
                .iter()
                .any(|v| v.sheets.contains(&sa) && v.sheets.contains(&sb));
            if !shared_component {
                out.push(KDiag::Disconnected { i, j, row, col });
            }
        }
    }
    Ok(out)
}

fn assemble_unchecked(ms: &MultiSection, g: &KaneyamaData, i: usize, j: usize) -> LaurentMatrix {
    let si = ms.sheets_of_cone(i);
    let sj = ms.sheets_of_cone(j);
    let m = g.pair(i, j);
    let mut out = LaurentMatrix::zero(si.len());
    for (row, &sa) in si.iter().enumerate() {
        for (col, &sb) in sj.iter().enumerate() {
            let c = m[(row, col)].clone();
            if c.is_zero() {
                continue;
            }
            let d = ms.sheet(sa).slope.sub(&ms.sheet(sb).slope);
            out[(row, col)] = LaurentPoly::monomial(d, c);
        }
    }
    out
}

/// The Laurent transition matrix of a cone pair: entry (α,β) is
/// g^{(αβ)}·z^{m(σi^{(α)}) − m(σj^{(β)})}. For adjacent pairs a nonzero
/// coefficient outside the monomial-matrix support is an error.
pub fn assemble_transition(
    ms: &MultiSection,
    g: &KaneyamaData,
    i: usize,
    j: usize,
) -> Result<LaurentMatrix, KaneyamaError> {
    check_preconditions(ms, g)?;
    for d in support_diagnostics(ms, g, i, j)? {
        if let KDiag::Support { i, j, row, col } = d {
            return Err(KaneyamaError::SupportViolation { i, j, row, col });
        }
    }
    Ok(assemble_unchecked(ms, g, i, j))
}

/// One invertible matrix h_σ per maximal cone, subject to the support
/// condition (H1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeFamily {
    pub mats: Vec<RatMatrix>,
}

impl GaugeFamily {
    pub fn identity(cone_count: usize, rank: usize) -> Self {
        Self { mats: vec![RatMatrix::identity(rank); cone_count] }
    }
}

/// Check that `h` realizes an equivalence from `g` to `g2`: (H1) support and
/// invertibility of every h_σ, and (H2) h_{σi}·g_{σiσj} = g2_{σiσj}·h_{σj}
/// for every adjacent pair.
pub fn verify_equivalence(
    ms: &MultiSection,
    g: &KaneyamaData,
    g2: &KaneyamaData,
    h: &GaugeFamily,
) -> Result<bool, KaneyamaError> {
    check_preconditions(ms, g)?;
    check_preconditions(ms, g2)?;
    let k = ms.fan().cone_count();
    if h.mats.len() != k {
        return Ok(false);
    }
    for (cone, m) in h.mats.iter().enumerate() {
        if m.rows() != g.rank || m.cols() != g.rank || m.det().is_zero() {
            return Ok(false);
        }
        let sheets = ms.sheets_of_cone(cone);
        let cone_gens = ms.fan().max_cone(cone);
        for (row, &sa) in sheets.iter().enumerate() {
            for (col, &sb) in sheets.iter().enumerate() {
                if m[(row, col)].is_zero() {
                    continue;
                }
                let d = ms.sheet(sa).slope.sub(&ms.sheet(sb).slope);
                if !crate::lattice::in_dual_cone(&d, &cone_gens)? {
                    return Ok(false);
                }
            }
        }
    }
    for i in 0..k {
        for j in 0..k {
            if ms.fan().shared_ray_index(i, j).is_none() {
                continue;
            }
            let lhs = h.mats[i].mul(g.pair(i, j))?;
            let rhs = g2.pair(i, j).mul(&h.mats[j])?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Block-diagonal direct sum of two data sets over the combinatorial union
/// of their multi-sections. The union must not merge any cells; its cell
/// order decides the block layout. Returns the union and the summed data.
pub fn direct_sum(
    ms1: &MultiSection,
    g1: &KaneyamaData,
    ms2: &MultiSection,
    g2: &KaneyamaData,
) -> Result<(MultiSection, KaneyamaData), KaneyamaError> {
    check_preconditions(ms1, g1)?;
    check_preconditions(ms2, g2)?;
    let union = ms1.union_c(ms2)?;
    if union.sheets().len() != ms1.sheets().len() + ms2.sheets().len()
        || union.ray_lifts().len() != ms1.ray_lifts().len() + ms2.ray_lifts().len()
        || !union.all_cell_weights_one()
    {
        return Err(KaneyamaError::MergedCells);
    }
    let k = union.fan().cone_count();
    let rank = g1.rank + g2.rank;
    // Union labels: per cone, all of ms1's sheets precede ms2's, preserving
    // each part's label order (first-occurrence merge order).
    let mut mats = BTreeMap::new();
    for i in 0..k {
        for j in 0..k {
            mats.insert((i, j), g1.pair(i, j).direct_sum(g2.pair(i, j)));
        }
    }
    let data = KaneyamaData::from_pairs(k, rank, mats)?;
    Ok((union, data))
}

/// Transport data along a cover morphism. The target's index set is its
/// sheets counted with multiplicity: a weight-w sheet owns w consecutive
/// slots, filled by its preimages in source label order (the choice among
/// equal-slope preimages is a gauge permutation). The pushed matrices are
/// the source matrices under this per-cone slot bijection.
pub fn push_forward(g: &KaneyamaData, f: &CoverMorphism) -> Result<KaneyamaData, KaneyamaError> {
    if !crate::multisection::verify_cover_morphism(f) {
        return Err(KaneyamaError::BadMorphism);
    }
    let src = &f.source;
    let tgt = &f.target;
    if !src.all_cell_weights_one() {
        return Err(KaneyamaError::MultiSection(MsError::UnsupportedWeights));
    }
    let k = tgt.fan().cone_count();
    let rank = g.rank;
    // slot[cone][source label] = index in the target's slot enumeration.
    let mut slot: Vec<Vec<usize>> = Vec::with_capacity(k);
    for cone in 0..k {
        let src_sheets = src.sheets_of_cone(cone);
        let tgt_sheets = tgt.sheets_of_cone(cone);
        let mut slot_base = Vec::with_capacity(tgt_sheets.len());
        let mut acc = 0usize;
        for &t in &tgt_sheets {
            slot_base.push(acc);
            acc += tgt.sheet(t).weight as usize;
        }
        let mut used = vec![0usize; tgt_sheets.len()];
        let mut map = Vec::with_capacity(src_sheets.len());
        for &s in &src_sheets {
            let t_pos = tgt_sheets
                .iter()
                .position(|&t| t == f.sheet_map[s])
                .expect("morphism maps cones to cones");
            map.push(slot_base[t_pos] + used[t_pos]);
            used[t_pos] += 1;
        }
        slot.push(map);
    }
    let mut mats = BTreeMap::new();
    for i in 0..k {
        for j in 0..k {
            let src_m = g.pair(i, j);
            let mut out = RatMatrix::zero(rank, rank);
            for (a, &sa) in slot[i].iter().enumerate() {
                for (b, &sb) in slot[j].iter().enumerate() {
                    let v: Rat = src_m[(a, b)].clone();
                    out[(sa, sb)] = v;
                }
            }
            mats.insert((i, j), out);
        }
    }
    KaneyamaData::from_pairs(k, rank, mats)
}

/// Identity data on a multi-section whose matchings are label-preserving
/// (e.g. a disjoint union of sections stacked in a fixed order).
pub fn identity_data(ms: &MultiSection) -> KaneyamaData {
    let k = ms.fan().cone_count();
    let r = ms.rank() as usize;
    KaneyamaData::from_adjacent(k, r, vec![RatMatrix::identity(r); k], None)
        .expect("identity matrices are invertible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multisection::test_fixtures::*;
    use crate::rat;

    #[test]
    fn identity_data_on_disjoint_sections_is_valid() {
        let ms = od_section(0).disjoint_union(&od_section(2)).unwrap();
        let g = identity_data(&ms);
        assert!(validate_kaneyama(&ms, &g).unwrap().is_empty());
    }

    #[test]
    fn support_violation_is_reported() {
        let ms = od_section(0).disjoint_union(&od_section(2)).unwrap();
        let mut fwd = vec![RatMatrix::identity(2); 3];
        // A cross-component entry is never allowed.
        fwd[0][(1, 0)] = rat(1);
        let g = KaneyamaData::from_adjacent(3, 2, fwd, None).unwrap();
        let diags = validate_kaneyama(&ms, &g).unwrap();
        assert!(diags
            .iter()
            .any(|d| matches!(d, KDiag::Support { .. } | KDiag::Disconnected { .. })));
    }

    #[test]
    fn broken_cocycle_is_reported() {
        let ms = zero_section();
        let mut fwd = vec![RatMatrix::identity(1); 3];
        fwd[1][(0, 0)] = rat(2);
        // Reverses that are not the inverses break the loop.
        let rev = vec![RatMatrix::identity(1); 3];
        let g = KaneyamaData::from_adjacent(3, 1, fwd, Some(rev)).unwrap();
        let diags = validate_kaneyama(&ms, &g).unwrap();
        assert!(diags.iter().any(|d| matches!(d, KDiag::Cocycle { .. })));
    }

    #[test]
    fn rank1_transition_of_a_line_bundle() {
        // Divisor on ray 0: slopes (1,0), (0,0), (1,-1).
        let ms = od_section(0);
        let g = identity_data(&ms);
        assert!(validate_kaneyama(&ms, &g).unwrap().is_empty());
        let t = assemble_transition(&ms, &g, 0, 1).unwrap();
        assert_eq!(t[(0, 0)], LaurentPoly::monomial(v(1, 0), rat(1)));
        // Every assembled entry is regular on the shared wall.
        let ray = ms.fan().ray_cone(1);
        assert!(crate::laurent::is_regular_on(&t[(0, 0)], &ray).unwrap());
    }

    #[test]
    fn equivalence_reflexive_and_diagonal_flip() {
        let ms = od_section(0).disjoint_union(&od_section(1)).unwrap();
        let g = identity_data(&ms);
        let h = GaugeFamily::identity(3, 2);
        assert!(verify_equivalence(&ms, &g, &g, &h).unwrap());

        // diag(1,−1) on every cone conjugates any data by flipping
        // off-diagonal signs; for diagonal data it is an auto-equivalence.
        let flip = RatMatrix::from_i64_2x2([[1, 0], [0, -1]]);
        let h = GaugeFamily { mats: vec![flip; 3] };
        assert!(verify_equivalence(&ms, &g, &g, &h).unwrap());

        // Symmetric: invert the gauge.
        let hinv = GaugeFamily { mats: h.mats.iter().map(|m| m.inverse().unwrap()).collect() };
        assert!(verify_equivalence(&ms, &g, &g, &hinv).unwrap());
    }

    #[test]
    fn gauge_violating_support_is_rejected() {
        let ms = od_section(0).disjoint_union(&od_section(1)).unwrap();
        let g = identity_data(&ms);
        // Sheet slopes over cone 0 are (1,0) and (0,1); neither difference
        // lies in the dual of cone 0, so any off-diagonal entry violates
        // (H1).
        let mut bad = RatMatrix::identity(2);
        bad[(0, 1)] = rat(1);
        let h = GaugeFamily { mats: vec![bad, RatMatrix::identity(2), RatMatrix::identity(2)] };
        assert!(!verify_equivalence(&ms, &g, &g, &h).unwrap());
    }

    #[test]
    fn direct_sum_of_rank1_data_is_valid_rank2() {
        // Zero section and the section with restriction 1 on every ray:
        // no cell of the union merges.
        let fan = crate::fan::p2_fan();
        let a = zero_section();
        let b = crate::multisection::MultiSection::section(
            fan.clone(),
            line_bundle_slopes(&fan, &[1, 1, 1]).unwrap(),
        )
        .unwrap();
        let ga = identity_data(&a);
        let gb = identity_data(&b);
        let (union, g) = direct_sum(&a, &ga, &b, &gb).unwrap();
        assert_eq!(g.rank(), 2);
        assert!(validate_kaneyama(&union, &g).unwrap().is_empty());
    }

    #[test]
    fn direct_sum_rejects_merged_cells() {
        let a = zero_section();
        let ga = identity_data(&a);
        assert!(matches!(
            direct_sum(&a, &ga, &a, &ga),
            Err(KaneyamaError::MergedCells)
        ));
    }

    #[test]
    fn push_forward_along_identity_and_separation() {
        let fan = crate::fan::p2_fan();
        let other = crate::multisection::MultiSection::section(
            fan.clone(),
            line_bundle_slopes(&fan, &[1, 1, 1]).unwrap(),
        )
        .unwrap();
        let ms = zero_section().disjoint_union(&other).unwrap();
        let g = identity_data(&ms);
        let id = CoverMorphism::identity(&ms);
        assert_eq!(push_forward(&g, &id).unwrap(), g);

        // Push along the separation of an already-separable cover: the
        // morphism relabels cells but the data is unchanged entrywise.
        let (sep, q) = ms.canonical_separation();
        let pushed = push_forward(&g, &q).unwrap();
        assert!(validate_kaneyama(&sep, &pushed).unwrap().is_empty());
    }

    #[test]
    fn push_forward_along_a_two_to_one_merge() {
        // Two equal-slope copies merged 2:1: well-defined because the
        // coefficients agree on preimage pairs.
        let two = zero_section().disjoint_union(&zero_section()).unwrap();
        let g2 = identity_data(&two);
        let (_sep, q) = two.canonical_separation();
        assert!(push_forward(&g2, &q).is_ok());
    }
}
