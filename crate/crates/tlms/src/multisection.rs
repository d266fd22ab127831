//! Tropical multi-sections over a complete 2-d fan.
//!
//! A multi-section is stored cell-explicitly: one [`Sheet`] per lifted
//! maximal cone (carrying a slope and a positive weight), one [`RayLift`] per
//! lifted wall (carrying the common restriction of its incident slopes), and
//! one [`VertexLift`] per connected component of the cell-incidence graph.
//! Weighted cells produced by the combinatorial union and by canonical
//! separation are first-class citizens; explicit ray matchings are a
//! convenience constructor for weight-1 covers.
//!
//! Conventions: ray `j` is the wall between cone `j-1` (clockwise side) and
//! cone `j` (anticlockwise side). Sheet labels are positions within their
//! cone's stored sheet list.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::fan::Fan2D;
use crate::lattice::{pair, LatticeError, LatticeVec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MsError {
    #[error("multi-sections live over different fans")]
    FanMismatch,
    #[error("cone {0} carries {1} slopes, expected {2}")]
    UnequalCardinalities(usize, usize, usize),
    #[error("restriction multisets disagree across ray {0}: splitting is inconsistent")]
    InconsistentSplitting(usize),
    #[error("operation requires all sheet weights equal to 1")]
    UnsupportedWeights,
    #[error("separability stratum k={0} is not supported in the 2-d implementation")]
    UnsupportedStratum(u8),
    #[error("matching at ray {0} is not a bijection of sheet labels")]
    NotBijective(usize),
    #[error("malformed cell data: {0}")]
    Malformed(String),
    #[error("multi-section fails validation: {0}")]
    Invalid(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A lifted maximal cone: which cone it covers, the slope of the piecewise
/// linear function on it, and its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sheet {
    pub cone: usize,
    pub slope: LatticeVec,
    pub weight: u64,
}

/// A lifted wall. `cw_sheets` are the attached sheets over the clockwise
/// cone of the ray, `ccw_sheets` over the anticlockwise cone; for weight-1
/// covers each side holds exactly one sheet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayLift {
    pub ray: usize,
    pub restriction: i64,
    pub weight: u64,
    pub cw_sheets: Vec<usize>,
    pub ccw_sheets: Vec<usize>,
}

/// A lift of the origin: one connected component of the cell-incidence
/// graph, with its constant trace over the maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexLift {
    pub sheets: BTreeSet<usize>,
    pub weight: u64,
}

/// A weighted branched cover of the fan with a piecewise-linear function,
/// stored as explicit lifted cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiSection {
    fan: Fan2D,
    rank: u64,
    sheets: Vec<Sheet>,
    ray_lifts: Vec<RayLift>,
    vertex_lifts: Vec<VertexLift>,
}

/// A violated invariant, naming the offending cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    ConeTrace { cone: usize, total: u64, rank: u64 },
    RayTrace { ray: usize, total: u64, rank: u64 },
    VertexTrace { total: u64, rank: u64 },
    Continuity { ray_lift: usize, sheet: usize, expected: i64, got: i64 },
    MissingAttachment { sheet: usize, ray: usize },
    SideWeight { ray_lift: usize, side: &'static str, total: u64, weight: u64 },
    VertexPartition { detail: String },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::ConeTrace { cone, total, rank } => {
                write!(f, "cone {cone}: sheet weights sum to {total}, rank is {rank}")
            }
            Diagnostic::RayTrace { ray, total, rank } => {
                write!(f, "ray {ray}: lift weights sum to {total}, rank is {rank}")
            }
            Diagnostic::VertexTrace { total, rank } => {
                write!(f, "vertex: lift weights sum to {total}, rank is {rank}")
            }
            Diagnostic::Continuity { ray_lift, sheet, expected, got } => write!(
                f,
                "ray lift {ray_lift}: sheet {sheet} restricts to {got}, lift carries {expected} (continuity broken)"
            ),
            Diagnostic::MissingAttachment { sheet, ray } => {
                write!(f, "sheet {sheet} is not attached to any lift of ray {ray}")
            }
            Diagnostic::SideWeight { ray_lift, side, total, weight } => write!(
                f,
                "ray lift {ray_lift}: {side} sheet weights sum to {total}, lift weight is {weight}"
            ),
            Diagnostic::VertexPartition { detail } => {
                write!(f, "vertex lifts do not match incidence components: {detail}")
            }
        }
    }
}

impl MultiSection {
    /// Core constructor from explicit cells. Vertex lifts are derived as the
    /// connected components of the incidence graph. Hard errors cover shapes
    /// that the model cannot represent (bad indices, duplicate attachments,
    /// zero weights); mathematical invariants are left to [`validate`].
    ///
    /// [`validate`]: MultiSection::validate
    pub fn from_cells(
        fan: Fan2D,
        sheets: Vec<Sheet>,
        ray_lifts: Vec<RayLift>,
    ) -> Result<Self, MsError> {
        let k = fan.cone_count();
        for (i, s) in sheets.iter().enumerate() {
            if s.cone >= k {
                return Err(MsError::Malformed(format!("sheet {i}: cone {} out of range", s.cone)));
            }
            if s.weight == 0 {
                return Err(MsError::Malformed(format!("sheet {i}: zero weight")));
            }
            if s.slope.rank() != 2 {
                return Err(MsError::Malformed(format!("sheet {i}: slope must have rank 2")));
            }
        }
        let mut seen_cw = BTreeSet::new();
        let mut seen_ccw = BTreeSet::new();
        for (l, rl) in ray_lifts.iter().enumerate() {
            if rl.ray >= k {
                return Err(MsError::Malformed(format!("ray lift {l}: ray {} out of range", rl.ray)));
            }
            if rl.weight == 0 {
                return Err(MsError::Malformed(format!("ray lift {l}: zero weight")));
            }
            let (cw_cone, ccw_cone) = fan.cones_of_ray(rl.ray);
            for &s in &rl.cw_sheets {
                let sheet = sheets
                    .get(s)
                    .ok_or_else(|| MsError::Malformed(format!("ray lift {l}: sheet {s} out of range")))?;
                if sheet.cone != cw_cone {
                    return Err(MsError::Malformed(format!(
                        "ray lift {l}: sheet {s} is over cone {}, clockwise side of ray {} is cone {cw_cone}",
                        sheet.cone, rl.ray
                    )));
                }
                if !seen_cw.insert(s) {
                    return Err(MsError::Malformed(format!(
                        "sheet {s} attached twice on its anticlockwise boundary ray"
                    )));
                }
            }
            for &s in &rl.ccw_sheets {
                let sheet = sheets
                    .get(s)
                    .ok_or_else(|| MsError::Malformed(format!("ray lift {l}: sheet {s} out of range")))?;
                if sheet.cone != ccw_cone {
                    return Err(MsError::Malformed(format!(
                        "ray lift {l}: sheet {s} is over cone {}, anticlockwise side of ray {} is cone {ccw_cone}",
                        sheet.cone, rl.ray
                    )));
                }
                if !seen_ccw.insert(s) {
                    return Err(MsError::Malformed(format!(
                        "sheet {s} attached twice on its clockwise boundary ray"
                    )));
                }
            }
        }
        let rank = sheets.iter().filter(|s| s.cone == 0).map(|s| s.weight).sum();
        let vertex_lifts = derive_vertex_lifts(&fan, &sheets, &ray_lifts);
        Ok(Self { fan, rank, sheets, ray_lifts, vertex_lifts })
    }

    /// Weight-1 constructor from per-cone slope lists and per-ray matchings.
    ///
    /// `matchings[j][a] = b` attaches sheet `a` of the clockwise cone of ray
    /// `j` and sheet `b` of its anticlockwise cone to a common lift.
    /// Continuity is not enforced here; [`validate`] reports violations.
    ///
    /// [`validate`]: MultiSection::validate
    pub fn from_matchings(
        fan: Fan2D,
        slopes: &[Vec<LatticeVec>],
        matchings: &[Vec<usize>],
    ) -> Result<Self, MsError> {
        let k = fan.cone_count();
        if slopes.len() != k {
            return Err(MsError::Malformed(format!(
                "expected slope lists for {k} cones, got {}",
                slopes.len()
            )));
        }
        if matchings.len() != k {
            return Err(MsError::Malformed(format!(
                "expected matchings for {k} rays, got {}",
                matchings.len()
            )));
        }
        let r = slopes[0].len();
        for (i, list) in slopes.iter().enumerate() {
            if list.len() != r {
                return Err(MsError::UnequalCardinalities(i, list.len(), r));
            }
        }
        let mut sheets = Vec::with_capacity(k * r);
        for (cone, list) in slopes.iter().enumerate() {
            for slope in list {
                sheets.push(Sheet { cone, slope: slope.clone(), weight: 1 });
            }
        }
        let global = |cone: usize, label: usize| cone * r + label;
        let mut ray_lifts = Vec::with_capacity(k * r);
        for (j, m) in matchings.iter().enumerate() {
            if m.len() != r {
                return Err(MsError::NotBijective(j));
            }
            let mut hit = vec![false; r];
            let (cw_cone, ccw_cone) = fan.cones_of_ray(j);
            for (a, &b) in m.iter().enumerate() {
                if b >= r || hit[b] {
                    return Err(MsError::NotBijective(j));
                }
                hit[b] = true;
                let restriction = pair(&slopes[cw_cone][a], fan.ray(j))?;
                ray_lifts.push(RayLift {
                    ray: j,
                    restriction,
                    weight: 1,
                    cw_sheets: vec![global(cw_cone, a)],
                    ccw_sheets: vec![global(ccw_cone, b)],
                });
            }
        }
        Self::from_cells(fan, sheets, ray_lifts)
    }

    /// The multi-section of an equivariant splitting: one sheet per distinct
    /// slope of each cone's multiset (weight = multiplicity), one ray lift
    /// per distinct restriction value, attachments by restriction.
    ///
    /// Errors when the restriction multisets from the two sides of a ray
    /// disagree (the splitting admits no continuous gluing).
    pub fn from_bundle_slopes(
        fan: Fan2D,
        multisets: &[Vec<LatticeVec>],
    ) -> Result<Self, MsError> {
        let k = fan.cone_count();
        if multisets.len() != k {
            return Err(MsError::Malformed(format!(
                "expected slope multisets for {k} cones, got {}",
                multisets.len()
            )));
        }
        let r = multisets[0].len();
        for (i, list) in multisets.iter().enumerate() {
            if list.len() != r {
                return Err(MsError::UnequalCardinalities(i, list.len(), r));
            }
            if r == 0 {
                return Err(MsError::UnequalCardinalities(i, 0, 0));
            }
        }
        // Distinct slopes in first-occurrence order, with multiplicities.
        let mut sheets = Vec::new();
        let mut cone_start = Vec::with_capacity(k);
        for (cone, list) in multisets.iter().enumerate() {
            cone_start.push(sheets.len());
            let mut order: Vec<(LatticeVec, u64)> = Vec::new();
            for m in list {
                match order.iter_mut().find(|(s, _)| s == m) {
                    Some((_, w)) => *w += 1,
                    None => order.push((m.clone(), 1)),
                }
            }
            for (slope, weight) in order {
                sheets.push(Sheet { cone, slope, weight });
            }
        }
        let mut ray_lifts = Vec::new();
        for j in 0..k {
            let (cw, ccw) = fan.cones_of_ray(j);
            let side = |cone: usize| -> Result<BTreeMap<i64, u64>, MsError> {
                let mut out = BTreeMap::new();
                for m in &multisets[cone] {
                    *out.entry(pair(m, fan.ray(j))?).or_insert(0) += 1;
                }
                Ok(out)
            };
            if side(cw)? != side(ccw)? {
                return Err(MsError::InconsistentSplitting(j));
            }
            for (restriction, weight) in side(cw)? {
                let attach = |cone: usize| -> Result<Vec<usize>, MsError> {
                    let mut out = Vec::new();
                    for (idx, s) in sheets.iter().enumerate() {
                        if s.cone == cone && pair(&s.slope, fan.ray(j))? == restriction {
                            out.push(idx);
                        }
                    }
                    Ok(out)
                };
                ray_lifts.push(RayLift {
                    ray: j,
                    restriction,
                    weight,
                    cw_sheets: attach(cw)?,
                    ccw_sheets: attach(ccw)?,
                });
            }
        }
        let _ = cone_start;
        Self::from_cells(fan, sheets, ray_lifts)
    }

    /// A rank-1 multi-section with the given slope per cone.
    pub fn section(fan: Fan2D, slopes: Vec<LatticeVec>) -> Result<Self, MsError> {
        let multisets: Vec<Vec<LatticeVec>> = slopes.into_iter().map(|s| vec![s]).collect();
        Self::from_bundle_slopes(fan, &multisets)
    }

    /// Disjoint union of cells with no identification at all.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self, MsError> {
        if self.fan != other.fan {
            return Err(MsError::FanMismatch);
        }
        let off = self.sheets.len();
        let mut sheets = self.sheets.clone();
        sheets.extend(other.sheets.iter().cloned());
        let mut ray_lifts = self.ray_lifts.clone();
        for rl in &other.ray_lifts {
            ray_lifts.push(RayLift {
                ray: rl.ray,
                restriction: rl.restriction,
                weight: rl.weight,
                cw_sheets: rl.cw_sheets.iter().map(|s| s + off).collect(),
                ccw_sheets: rl.ccw_sheets.iter().map(|s| s + off).collect(),
            });
        }
        Self::from_cells(self.fan.clone(), sheets, ray_lifts)
    }

    pub fn fan(&self) -> &Fan2D {
        &self.fan
    }

    pub fn rank(&self) -> u64 {
        self.rank
    }

    pub fn sheets(&self) -> &[Sheet] {
        &self.sheets
    }

    pub fn sheet(&self, id: usize) -> &Sheet {
        &self.sheets[id]
    }

    pub fn ray_lifts(&self) -> &[RayLift] {
        &self.ray_lifts
    }

    pub fn ray_lift(&self, id: usize) -> &RayLift {
        &self.ray_lifts[id]
    }

    pub fn vertex_lifts(&self) -> &[VertexLift] {
        &self.vertex_lifts
    }

    /// Sheet ids over cone `i`, in stored label order.
    pub fn sheets_of_cone(&self, i: usize) -> Vec<usize> {
        (0..self.sheets.len()).filter(|&s| self.sheets[s].cone == i).collect()
    }

    /// Label of a sheet within its cone.
    pub fn sheet_label(&self, id: usize) -> usize {
        self.sheets_of_cone(self.sheets[id].cone)
            .iter()
            .position(|&s| s == id)
            .expect("sheet belongs to its own cone list")
    }

    /// Ray-lift ids over ray `j`, in stored order.
    pub fn lifts_of_ray(&self, j: usize) -> Vec<usize> {
        (0..self.ray_lifts.len()).filter(|&l| self.ray_lifts[l].ray == j).collect()
    }

    /// True when every sheet and every ray lift has weight 1.
    pub fn all_cell_weights_one(&self) -> bool {
        self.sheets.iter().all(|s| s.weight == 1) && self.ray_lifts.iter().all(|l| l.weight == 1)
    }

    /// Check every structural invariant; an empty list means the
    /// multi-section is a valid weighted branched cover with a continuous
    /// piecewise-linear function.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let k = self.fan.cone_count();
        for cone in 0..k {
            let total: u64 = self.sheets.iter().filter(|s| s.cone == cone).map(|s| s.weight).sum();
            if total != self.rank {
                out.push(Diagnostic::ConeTrace { cone, total, rank: self.rank });
            }
        }
        for ray in 0..k {
            let total: u64 =
                self.ray_lifts.iter().filter(|l| l.ray == ray).map(|l| l.weight).sum();
            if total != self.rank {
                out.push(Diagnostic::RayTrace { ray, total, rank: self.rank });
            }
        }
        for (lid, rl) in self.ray_lifts.iter().enumerate() {
            let v = self.fan.ray(rl.ray);
            for &s in rl.cw_sheets.iter().chain(&rl.ccw_sheets) {
                let got = pair(&self.sheets[s].slope, v).expect("rank-2 pairing");
                if got != rl.restriction {
                    out.push(Diagnostic::Continuity {
                        ray_lift: lid,
                        sheet: s,
                        expected: rl.restriction,
                        got,
                    });
                }
            }
            let cw: u64 = rl.cw_sheets.iter().map(|&s| self.sheets[s].weight).sum();
            if cw != rl.weight {
                out.push(Diagnostic::SideWeight {
                    ray_lift: lid,
                    side: "clockwise",
                    total: cw,
                    weight: rl.weight,
                });
            }
            let ccw: u64 = rl.ccw_sheets.iter().map(|&s| self.sheets[s].weight).sum();
            if ccw != rl.weight {
                out.push(Diagnostic::SideWeight {
                    ray_lift: lid,
                    side: "anticlockwise",
                    total: ccw,
                    weight: rl.weight,
                });
            }
        }
        // Every sheet attaches once on each boundary ray; duplicates are
        // impossible by construction, so only absences can occur.
        for (sid, s) in self.sheets.iter().enumerate() {
            let ccw_boundary = s.cone; // ray j = cone index on the anticlockwise side
            let cw_boundary = (s.cone + 1) % k;
            let on_ccw = self
                .ray_lifts
                .iter()
                .any(|l| l.ray == ccw_boundary && l.ccw_sheets.contains(&sid));
            if !on_ccw {
                out.push(Diagnostic::MissingAttachment { sheet: sid, ray: ccw_boundary });
            }
            let on_cw = self
                .ray_lifts
                .iter()
                .any(|l| l.ray == cw_boundary && l.cw_sheets.contains(&sid));
            if !on_cw {
                out.push(Diagnostic::MissingAttachment { sheet: sid, ray: cw_boundary });
            }
        }
        let derived = derive_vertex_lifts(&self.fan, &self.sheets, &self.ray_lifts);
        if derived.len() != self.vertex_lifts.len()
            || derived
                .iter()
                .zip(&self.vertex_lifts)
                .any(|(a, b)| a.sheets != b.sheets)
        {
            out.push(Diagnostic::VertexPartition {
                detail: format!(
                    "stored {} classes, incidence graph has {}",
                    self.vertex_lifts.len(),
                    derived.len()
                ),
            });
        }
        for v in &self.vertex_lifts {
            let per_cone: Vec<u64> = (0..k)
                .map(|c| {
                    v.sheets
                        .iter()
                        .filter(|&&s| self.sheets[s].cone == c)
                        .map(|&s| self.sheets[s].weight)
                        .sum()
                })
                .collect();
            if per_cone.iter().any(|&w| w != v.weight) {
                out.push(Diagnostic::VertexPartition {
                    detail: format!("class trace {per_cone:?} is not constantly {}", v.weight),
                });
            }
        }
        let vertex_total: u64 = self.vertex_lifts.iter().map(|v| v.weight).sum();
        if vertex_total != self.rank {
            out.push(Diagnostic::VertexTrace { total: vertex_total, rank: self.rank });
        }
        out
    }

    fn require_valid(&self) -> Result<(), MsError> {
        let diags = self.validate();
        if diags.is_empty() {
            Ok(())
        } else {
            Err(MsError::Invalid(
                diags.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "),
            ))
        }
    }

    /// The matching across ray `j` of a weight-1 cover: label `a` of the
    /// clockwise cone goes to `matching[a]` of the anticlockwise cone.
    pub fn matching_at_ray(&self, j: usize) -> Result<Vec<usize>, MsError> {
        if !self.all_cell_weights_one() {
            return Err(MsError::UnsupportedWeights);
        }
        let (cw_cone, ccw_cone) = self.fan.cones_of_ray(j);
        let cw = self.sheets_of_cone(cw_cone);
        let ccw = self.sheets_of_cone(ccw_cone);
        let mut out = vec![usize::MAX; cw.len()];
        for &lid in &self.lifts_of_ray(j) {
            let l = &self.ray_lifts[lid];
            let (&s_cw, &s_ccw) = match (&l.cw_sheets[..], &l.ccw_sheets[..]) {
                ([a], [b]) => (a, b),
                _ => return Err(MsError::UnsupportedWeights),
            };
            let a = cw.iter().position(|&s| s == s_cw).ok_or(MsError::NotBijective(j))?;
            let b = ccw.iter().position(|&s| s == s_ccw).ok_or(MsError::NotBijective(j))?;
            out[a] = b;
        }
        if out.iter().any(|&b| b == usize::MAX) {
            return Err(MsError::NotBijective(j));
        }
        Ok(out)
    }

    /// Composite of the ray matchings around the full anticlockwise cycle of
    /// maximal cones, as a permutation of the sheet labels of cone 0.
    pub fn monodromy(&self) -> Result<Vec<usize>, MsError> {
        if !self.all_cell_weights_one() {
            return Err(MsError::UnsupportedWeights);
        }
        self.require_valid()?;
        let k = self.fan.cone_count();
        let r = self.rank as usize;
        let mut perm: Vec<usize> = (0..r).collect();
        // Crossing i goes from cone i to cone i+1 across ray i+1 (mod k).
        for step in 0..k {
            let m = self.matching_at_ray((step + 1) % k)?;
            perm = perm.into_iter().map(|a| m[a]).collect();
        }
        Ok(perm)
    }

    /// k-separability: distinct lifts of every k-dimensional cone carry
    /// distinct restrictions of the piecewise-linear function.
    pub fn check_separable(&self, stratum: u8) -> Result<bool, MsError> {
        match stratum {
            1 => {
                for j in 0..self.fan.cone_count() {
                    let lifts = self.lifts_of_ray(j);
                    let mut seen = BTreeSet::new();
                    for &l in &lifts {
                        if !seen.insert(self.ray_lifts[l].restriction) {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            2 => {
                for i in 0..self.fan.cone_count() {
                    let mut seen = BTreeSet::new();
                    for s in self.sheets_of_cone(i) {
                        if !seen.insert(self.sheets[s].slope.clone()) {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            other => Err(MsError::UnsupportedStratum(other)),
        }
    }

    /// True iff every sheet and ray lift is unramified (weight 1); only
    /// vertex lifts may carry multiplicity.
    pub fn ramification_in_codim2(&self) -> bool {
        self.all_cell_weights_one()
    }

    /// True iff the multi-section is connected (one vertex lift).
    pub fn is_connected(&self) -> bool {
        self.vertex_lifts.len() == 1
    }

    /// Nonempty proper subsets of sheets that are closed under attachment.
    ///
    /// Face-closed sub-covers are exactly unions of incidence components, so
    /// the exponential search over sheet subsets collapses to enumerating
    /// component groupings; a decomposition exists iff there are at least
    /// two components.
    pub fn decomposable_partition(&self) -> Option<(BTreeSet<usize>, BTreeSet<usize>)> {
        if self.vertex_lifts.len() < 2 {
            return None;
        }
        let first = self.vertex_lifts[0].sheets.clone();
        let rest: BTreeSet<usize> =
            self.vertex_lifts[1..].iter().flat_map(|v| v.sheets.iter().copied()).collect();
        Some((first, rest))
    }

    /// The dimension-2 combinatorial indecomposability criterion for weight-1
    /// covers: connected, 1-separable, ramified only at the vertex, and no
    /// face-closed bipartition of the sheets.
    pub fn is_indecomposable_dim2(&self) -> Result<bool, MsError> {
        if self.sheets.iter().any(|s| s.weight > 1) {
            return Err(MsError::UnsupportedWeights);
        }
        self.require_valid()?;
        Ok(self.is_connected()
            && self.ramification_in_codim2()
            && self.check_separable(1)?
            && self.decomposable_partition().is_none())
    }

    /// Identical cover with the piecewise-linear function negated.
    pub fn dual(&self) -> Self {
        let mut out = self.clone();
        for s in &mut out.sheets {
            s.slope = s.slope.neg();
        }
        for l in &mut out.ray_lifts {
            l.restriction = -l.restriction;
        }
        out
    }

    /// Combinatorial union: disjoint union of cells, then cells over the
    /// same cone with equal function restrictions identified; weights add.
    pub fn union_c(&self, other: &Self) -> Result<Self, MsError> {
        if self.fan != other.fan {
            return Err(MsError::FanMismatch);
        }
        Ok(quotient_by_restriction(&self.fan, &[self, other]).0)
    }

    /// The quotient identifying equal-slope lifts of every cone, together
    /// with the quotient morphism. Idempotent; the morphism always passes
    /// [`verify_cover_morphism`].
    pub fn canonical_separation(&self) -> (Self, CoverMorphism) {
        let (quotient, mut maps) = quotient_by_restriction(&self.fan, &[self]);
        let maps = maps.pop().expect("one input, one map");
        let morphism = CoverMorphism {
            source: self.clone(),
            target: quotient.clone(),
            sheet_map: maps.0,
            ray_map: maps.1,
            vertex_map: maps.2,
        };
        (quotient, morphism)
    }

    /// Fiberwise product of cells: slopes add, weights multiply. No
    /// separation is applied; rank is the product of the ranks.
    pub fn fiber_product_unseparated(&self, other: &Self) -> Result<Self, MsError> {
        if self.fan != other.fan {
            return Err(MsError::FanMismatch);
        }
        let mut sheets = Vec::new();
        let mut index = BTreeMap::new();
        for (i, a) in self.sheets.iter().enumerate() {
            for (j, b) in other.sheets.iter().enumerate() {
                if a.cone != b.cone {
                    continue;
                }
                index.insert((i, j), sheets.len());
                sheets.push(Sheet {
                    cone: a.cone,
                    slope: a.slope.add(&b.slope),
                    weight: a.weight * b.weight,
                });
            }
        }
        let mut ray_lifts = Vec::new();
        for (li, a) in self.ray_lifts.iter().enumerate() {
            for (lj, b) in other.ray_lifts.iter().enumerate() {
                if a.ray != b.ray {
                    continue;
                }
                let _ = (li, lj);
                let mut cw = Vec::new();
                for &s in &a.cw_sheets {
                    for &t in &b.cw_sheets {
                        cw.push(index[&(s, t)]);
                    }
                }
                let mut ccw = Vec::new();
                for &s in &a.ccw_sheets {
                    for &t in &b.ccw_sheets {
                        ccw.push(index[&(s, t)]);
                    }
                }
                ray_lifts.push(RayLift {
                    ray: a.ray,
                    restriction: a.restriction + b.restriction,
                    weight: a.weight * b.weight,
                    cw_sheets: cw,
                    ccw_sheets: ccw,
                });
            }
        }
        Self::from_cells(self.fan.clone(), sheets, ray_lifts)
    }

    /// Combinatorial fiber product: fiberwise product followed by canonical
    /// separation.
    pub fn product_c(&self, other: &Self) -> Result<Self, MsError> {
        let raw = self.fiber_product_unseparated(other)?;
        Ok(raw.canonical_separation().0)
    }

    /// Order-insensitive cell comparison: same fan and the same weighted
    /// cells with the same attachment structure, where cells are identified
    /// by their slope data.
    pub fn same_cells(&self, other: &Self) -> bool {
        self.fan == other.fan && self.cell_descriptor() == other.cell_descriptor()
    }

    fn cell_descriptor(&self) -> CellDescriptor {
        let sheet_key =
            |s: usize| (self.sheets[s].cone, self.sheets[s].slope.clone(), self.sheets[s].weight);
        let mut sheets: Vec<_> = self.sheets.iter().map(|s| (s.cone, s.slope.clone(), s.weight)).collect();
        sheets.sort();
        let mut lifts: Vec<_> = self
            .ray_lifts
            .iter()
            .map(|l| {
                let mut cw: Vec<_> = l.cw_sheets.iter().map(|&s| sheet_key(s)).collect();
                let mut ccw: Vec<_> = l.ccw_sheets.iter().map(|&s| sheet_key(s)).collect();
                cw.sort();
                ccw.sort();
                (l.ray, l.restriction, l.weight, cw, ccw)
            })
            .collect();
        lifts.sort();
        let mut vertices: Vec<_> = self
            .vertex_lifts
            .iter()
            .map(|v| {
                let mut sheets: Vec<_> = v.sheets.iter().map(|&s| sheet_key(s)).collect();
                sheets.sort();
                (v.weight, sheets)
            })
            .collect();
        vertices.sort();
        (sheets, lifts, vertices)
    }
}

type SheetKey = (usize, LatticeVec, u64);
type CellDescriptor = (
    Vec<SheetKey>,
    Vec<(usize, i64, u64, Vec<SheetKey>, Vec<SheetKey>)>,
    Vec<(u64, Vec<SheetKey>)>,
);

fn derive_vertex_lifts(fan: &Fan2D, sheets: &[Sheet], ray_lifts: &[RayLift]) -> Vec<VertexLift> {
    let n = sheets.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for rl in ray_lifts {
        let all: Vec<usize> = rl.cw_sheets.iter().chain(&rl.ccw_sheets).copied().collect();
        for w in all.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut classes: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for s in 0..n {
        let root = find(&mut parent, s);
        classes.entry(root).or_default().insert(s);
    }
    let mut out: Vec<VertexLift> = classes
        .into_values()
        .map(|set| {
            let per_cone: Vec<u64> = (0..fan.cone_count())
                .map(|c| set.iter().filter(|&&s| sheets[s].cone == c).map(|&s| sheets[s].weight).sum())
                .collect();
            let weight = per_cone.into_iter().max().unwrap_or(0);
            VertexLift { sheets: set, weight }
        })
        .collect();
    out.sort_by_key(|v| v.sheets.iter().next().copied());
    out
}

type CellMaps = (Vec<usize>, Vec<usize>, Vec<usize>);

/// Quotient of a disjoint union of multi-sections over one fan, identifying
/// sheets with equal (cone, slope) and ray lifts with equal
/// (ray, restriction); weights add and attachments merge. Returns the
/// quotient and, per input, the maps from its cells to the quotient's.
fn quotient_by_restriction(fan: &Fan2D, parts: &[&MultiSection]) -> (MultiSection, Vec<CellMaps>) {
    let mut sheet_index: Vec<(usize, LatticeVec)> = Vec::new(); // (cone, slope), first-occurrence order
    let mut sheet_weight: Vec<u64> = Vec::new();
    let mut sheet_maps: Vec<Vec<usize>> = Vec::new();
    for part in parts {
        let mut map = Vec::with_capacity(part.sheets.len());
        for s in &part.sheets {
            let key = (s.cone, s.slope.clone());
            let idx = match sheet_index.iter().position(|k| *k == key) {
                Some(i) => {
                    sheet_weight[i] += s.weight;
                    i
                }
                None => {
                    sheet_index.push(key);
                    sheet_weight.push(s.weight);
                    sheet_index.len() - 1
                }
            };
            map.push(idx);
        }
        sheet_maps.push(map);
    }
    let sheets: Vec<Sheet> = sheet_index
        .iter()
        .zip(&sheet_weight)
        .map(|((cone, slope), &weight)| Sheet { cone: *cone, slope: slope.clone(), weight })
        .collect();

    let mut lift_index: Vec<(usize, i64)> = Vec::new();
    let mut lift_weight: Vec<u64> = Vec::new();
    let mut lift_cw: Vec<BTreeSet<usize>> = Vec::new();
    let mut lift_ccw: Vec<BTreeSet<usize>> = Vec::new();
    let mut ray_maps: Vec<Vec<usize>> = Vec::new();
    for (p, part) in parts.iter().enumerate() {
        let mut map = Vec::with_capacity(part.ray_lifts.len());
        for l in &part.ray_lifts {
            let key = (l.ray, l.restriction);
            let idx = match lift_index.iter().position(|k| *k == key) {
                Some(i) => {
                    lift_weight[i] += l.weight;
                    i
                }
                None => {
                    lift_index.push(key);
                    lift_weight.push(l.weight);
                    lift_cw.push(BTreeSet::new());
                    lift_ccw.push(BTreeSet::new());
                    lift_index.len() - 1
                }
            };
            for &s in &l.cw_sheets {
                lift_cw[idx].insert(sheet_maps[p][s]);
            }
            for &s in &l.ccw_sheets {
                lift_ccw[idx].insert(sheet_maps[p][s]);
            }
            map.push(idx);
        }
        ray_maps.push(map);
    }
    let ray_lifts: Vec<RayLift> = lift_index
        .iter()
        .enumerate()
        .map(|(i, (ray, restriction))| RayLift {
            ray: *ray,
            restriction: *restriction,
            weight: lift_weight[i],
            cw_sheets: lift_cw[i].iter().copied().collect(),
            ccw_sheets: lift_ccw[i].iter().copied().collect(),
        })
        .collect();

    let quotient = MultiSection::from_cells(fan.clone(), sheets, ray_lifts)
        .expect("quotient of well-formed cells is well-formed");

    let maps = parts
        .iter()
        .enumerate()
        .map(|(p, part)| {
            let vertex_map: Vec<usize> = part
                .vertex_lifts
                .iter()
                .map(|v| {
                    let image = sheet_maps[p][*v.sheets.iter().next().expect("nonempty class")];
                    quotient
                        .vertex_lifts
                        .iter()
                        .position(|q| q.sheets.contains(&image))
                        .expect("image sheet lies in some quotient class")
                })
                .collect();
            (sheet_maps[p].clone(), ray_maps[p].clone(), vertex_map)
        })
        .collect();
    (quotient, maps)
}

/// A morphism of covers: cell maps from `source` to `target` that commute
/// with projection, preserve the function, and push weights forward.
#[derive(Clone, Debug)]
pub struct CoverMorphism {
    pub source: MultiSection,
    pub target: MultiSection,
    pub sheet_map: Vec<usize>,
    pub ray_map: Vec<usize>,
    pub vertex_map: Vec<usize>,
}

impl CoverMorphism {
    pub fn identity(ms: &MultiSection) -> Self {
        Self {
            source: ms.clone(),
            target: ms.clone(),
            sheet_map: (0..ms.sheets.len()).collect(),
            ray_map: (0..ms.ray_lifts.len()).collect(),
            vertex_map: (0..ms.vertex_lifts.len()).collect(),
        }
    }
}

/// True iff all cover-morphism invariants hold: projection compatibility,
/// slope/restriction preservation (the pulled-back function equals the
/// source's), attachment commutativity, and trace of weights.
pub fn verify_cover_morphism(f: &CoverMorphism) -> bool {
    let (src, tgt) = (&f.source, &f.target);
    if src.fan != tgt.fan
        || f.sheet_map.len() != src.sheets.len()
        || f.ray_map.len() != src.ray_lifts.len()
        || f.vertex_map.len() != src.vertex_lifts.len()
    {
        return false;
    }
    if f.sheet_map.iter().any(|&t| t >= tgt.sheets.len())
        || f.ray_map.iter().any(|&t| t >= tgt.ray_lifts.len())
        || f.vertex_map.iter().any(|&t| t >= tgt.vertex_lifts.len())
    {
        return false;
    }
    for (s, &t) in f.sheet_map.iter().enumerate() {
        let (a, b) = (&src.sheets[s], &tgt.sheets[t]);
        if a.cone != b.cone || a.slope != b.slope {
            return false;
        }
    }
    for (l, &t) in f.ray_map.iter().enumerate() {
        let (a, b) = (&src.ray_lifts[l], &tgt.ray_lifts[t]);
        if a.ray != b.ray || a.restriction != b.restriction {
            return false;
        }
        for &s in &a.cw_sheets {
            if !b.cw_sheets.contains(&f.sheet_map[s]) {
                return false;
            }
        }
        for &s in &a.ccw_sheets {
            if !b.ccw_sheets.contains(&f.sheet_map[s]) {
                return false;
            }
        }
    }
    for (v, &t) in f.vertex_map.iter().enumerate() {
        for &s in &src.vertex_lifts[v].sheets {
            if !tgt.vertex_lifts[t].sheets.contains(&f.sheet_map[s]) {
                return false;
            }
        }
    }
    // Trace of weights along the map equals the target weights.
    for (t, b) in tgt.sheets.iter().enumerate() {
        let total: u64 = f
            .sheet_map
            .iter()
            .enumerate()
            .filter(|(_, &img)| img == t)
            .map(|(s, _)| src.sheets[s].weight)
            .sum();
        if total != b.weight {
            return false;
        }
    }
    for (t, b) in tgt.ray_lifts.iter().enumerate() {
        let total: u64 = f
            .ray_map
            .iter()
            .enumerate()
            .filter(|(_, &img)| img == t)
            .map(|(l, _)| src.ray_lifts[l].weight)
            .sum();
        if total != b.weight {
            return false;
        }
    }
    for (t, b) in tgt.vertex_lifts.iter().enumerate() {
        let total: u64 = f
            .vertex_map
            .iter()
            .enumerate()
            .filter(|(_, &img)| img == t)
            .map(|(v, _)| src.vertex_lifts[v].weight)
            .sum();
        if total != b.weight {
            return false;
        }
    }
    true
}

/// Shared example data for tests and documentation.
#[doc(hidden)]
pub mod test_fixtures {
    use super::*;
    use crate::fan::p2_fan;

    pub fn v(x: i64, y: i64) -> LatticeVec {
        LatticeVec::xy(x, y)
    }

    /// The rank-2 multi-section of the plane's tangent bundle: the slopes on
    /// each maximal cone are the dual basis of its ray generators.
    pub fn tp2_multisection() -> MultiSection {
        MultiSection::from_bundle_slopes(
            p2_fan(),
            &[
                vec![v(1, 0), v(0, 1)],
                vec![v(-1, 1), v(-1, 0)],
                vec![v(0, -1), v(1, -1)],
            ],
        )
        .expect("tangent slopes are consistent")
    }

    /// The tangent multi-section with sheets in the normalized arrangement
    /// order: interior matchings preserve labels, the closing matching
    /// swaps them.
    pub fn tp2_normalized() -> MultiSection {
        MultiSection::from_matchings(
            p2_fan(),
            &[
                vec![v(1, 0), v(0, 1)],
                vec![v(-1, 0), v(-1, 1)],
                vec![v(0, -1), v(1, -1)],
            ],
            &[vec![1, 0], vec![0, 1], vec![0, 1]],
        )
        .expect("tangent matchings are bijections")
    }

    /// The constant-zero rank-1 section over the plane fan.
    pub fn zero_section() -> MultiSection {
        MultiSection::section(p2_fan(), vec![v(0, 0), v(0, 0), v(0, 0)]).unwrap()
    }

    /// Slopes of the line bundle with divisor coefficients `a` (one per
    /// ray): per maximal cone the unique solution of ⟨m, v_ρ⟩ = a_ρ on its
    /// two rays, when it is integral. This is the independent
    /// linear-condition oracle used to freeze expected values.
    pub fn line_bundle_slopes(fan: &Fan2D, a: &[i64]) -> Option<Vec<LatticeVec>> {
        let k = fan.cone_count();
        assert_eq!(a.len(), k);
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            let u = fan.ray(i);
            let w = fan.ray((i + 1) % k);
            let det = u.coords()[0] * w.coords()[1] - u.coords()[1] * w.coords()[0];
            // Solve ⟨m,u⟩ = a_i, ⟨m,w⟩ = a_{i+1} by Cramer's rule.
            let num_x = a[i] * w.coords()[1] - a[(i + 1) % k] * u.coords()[1];
            let num_y = a[(i + 1) % k] * u.coords()[0] - a[i] * w.coords()[0];
            if num_x % det != 0 || num_y % det != 0 {
                return None;
            }
            out.push(v(num_x / det, num_y / det));
        }
        Some(out)
    }

    /// O(D_i) over the plane fan: the section whose restriction to ray j is
    /// δ_{ij}.
    pub fn od_section(i: usize) -> MultiSection {
        let fan = p2_fan();
        let mut a = vec![0i64; 3];
        a[i] = 1;
        let slopes = line_bundle_slopes(&fan, &a).expect("the plane fan is smooth");
        MultiSection::section(fan, slopes).unwrap()
    }

    /// The obstructed rank-2 witness over the plane fan (triangularity
    /// sequence [upper, upper] after normalization).
    pub fn obstructed_witness() -> MultiSection {
        MultiSection::from_bundle_slopes(
            p2_fan(),
            &[
                vec![v(1, 1), v(0, 0)],
                vec![v(-1, 1), v(1, 0)],
                vec![v(0, 0), v(1, 0)],
            ],
        )
        .expect("witness slopes are consistent")
    }
}

#[cfg(test)]
mod tests {
    use super::test_fixtures::*;
    use super::*;
    use crate::fan::p2_fan;

    #[test]
    fn zero_section_is_valid() {
        let ms = zero_section();
        assert_eq!(ms.rank(), 1);
        assert!(ms.validate().is_empty());
    }

    #[test]
    fn perp_slope_change_is_continuous() {
        // Slopes (0,0) and (1,0) disagree across ray 1 = (0,1), but the jump
        // pairs to 0 with the ray generator, so continuity holds everywhere.
        let ms = MultiSection::from_matchings(
            p2_fan(),
            &[vec![v(0, 0)], vec![v(1, 0)], vec![v(0, 1)]],
            &[vec![0], vec![0], vec![0]],
        )
        .unwrap();
        assert!(ms.validate().is_empty());
    }

    #[test]
    fn broken_continuity_is_one_diagnostic() {
        // Slopes (0,0) and (1,0) meet across ray 0 = (1,0) where the jump
        // pairs to 1: exactly one crossing is discontinuous.
        let ms = MultiSection::from_matchings(
            p2_fan(),
            &[vec![v(0, 0)], vec![v(1, 0)], vec![v(1, 0)]],
            &[vec![0], vec![0], vec![0]],
        )
        .unwrap();
        let diags: Vec<_> = ms
            .validate()
            .into_iter()
            .filter(|d| matches!(d, Diagnostic::Continuity { .. }))
            .collect();
        assert_eq!(diags.len(), 1);
        assert!(matches!(
            diags[0],
            Diagnostic::Continuity { expected: 1, got: 0, .. }
        ));
    }

    #[test]
    fn tp2_is_valid_separable_connected() {
        let ms = tp2_multisection();
        assert_eq!(ms.rank(), 2);
        assert!(ms.validate().is_empty());
        assert!(ms.check_separable(1).unwrap());
        assert!(ms.check_separable(2).unwrap());
        assert!(ms.is_connected());
        assert!(ms.ramification_in_codim2());
        assert_eq!(ms.vertex_lifts().len(), 1);
        assert_eq!(ms.vertex_lifts()[0].weight, 2);
        assert!(ms.is_indecomposable_dim2().unwrap());
    }

    #[test]
    fn tp2_monodromy_is_a_transposition() {
        let ms = tp2_multisection();
        assert_eq!(ms.monodromy().unwrap(), vec![1, 0]);
    }

    #[test]
    fn disjoint_copies_have_identity_monodromy() {
        let a = zero_section();
        let b = zero_section();
        let d = a.disjoint_union(&b).unwrap();
        assert_eq!(d.monodromy().unwrap(), vec![0, 1]);
        assert_eq!(d.vertex_lifts().len(), 2);
        assert!(!d.is_indecomposable_dim2().unwrap());
        // Monodromy orbits partition the sheets; one vertex lift per orbit.
        assert!(!d.check_separable(2).unwrap());
    }

    #[test]
    fn cyclic_rank3_monodromy() {
        // Matchings id, id, 3-cycle produce a 3-cycle.
        let zs = vec![v(0, 0), v(0, 0), v(0, 0)];
        let ms = MultiSection::from_matchings(
            p2_fan(),
            &[zs.clone(), zs.clone(), zs],
            &[vec![1, 2, 0], vec![0, 1, 2], vec![0, 1, 2]],
        )
        .unwrap();
        assert_eq!(ms.monodromy().unwrap(), vec![1, 2, 0]);
        assert!(ms.is_connected());
    }

    #[test]
    fn weighted_sheet_fails_codim2_ramification() {
        let fan = p2_fan();
        let ms = MultiSection::from_bundle_slopes(
            fan,
            &[
                vec![v(0, 0), v(0, 0)],
                vec![v(0, 0), v(0, 0)],
                vec![v(0, 0), v(0, 0)],
            ],
        )
        .unwrap();
        assert_eq!(ms.rank(), 2);
        assert!(!ms.ramification_in_codim2());
        assert!(matches!(ms.monodromy(), Err(MsError::UnsupportedWeights)));
    }

    #[test]
    fn dual_is_an_involution() {
        for ms in [tp2_multisection(), zero_section(), od_section(1)] {
            assert_eq!(ms.dual().dual(), ms);
            assert!(ms.dual().validate().is_empty());
        }
        assert_eq!(zero_section().dual(), zero_section());
    }

    #[test]
    fn line_bundle_slopes_from_the_linear_oracle() {
        let fan = p2_fan();
        // Divisor supported on ray 0 = (1,0).
        let slopes = line_bundle_slopes(&fan, &[1, 0, 0]).unwrap();
        assert_eq!(slopes, vec![v(1, 0), v(0, 0), v(1, -1)]);
        let dual = od_section(0).dual();
        let expected: Vec<LatticeVec> = slopes.iter().map(|m| m.neg()).collect();
        assert_eq!(
            dual.sheets().iter().map(|s| s.slope.clone()).collect::<Vec<_>>(),
            expected
        );
        // Divisor supported on ray 1 = (0,1).
        assert_eq!(
            line_bundle_slopes(&fan, &[0, 1, 0]).unwrap(),
            vec![v(0, 1), v(-1, 1), v(0, 0)]
        );
    }

    #[test]
    fn union_of_equal_sections_is_one_weighted_chain() {
        let a = zero_section();
        let u = a.union_c(&a).unwrap();
        assert_eq!(u.rank(), 2);
        assert_eq!(u.sheets().len(), 3);
        assert!(u.sheets().iter().all(|s| s.weight == 2));
        assert!(u.validate().is_empty());
        assert!(u.check_separable(2).unwrap());
    }

    #[test]
    fn union_identifies_exactly_equal_restrictions() {
        let o0 = od_section(0);
        let o1 = od_section(1);
        let u = o0.union_c(&o1).unwrap();
        assert_eq!(u.rank(), 2);
        assert!(u.validate().is_empty());
        assert!(u.check_separable(2).unwrap());
        // O(D_0) and O(D_1) share the slope on no cone of the plane fan.
        assert_eq!(u.sheets().len(), 6);
    }

    #[test]
    fn product_with_zero_section_is_identity() {
        let z = zero_section();
        for ms in [tp2_multisection(), od_section(2)] {
            let p = ms.product_c(&z).unwrap();
            assert!(p.same_cells(&ms.canonical_separation().0));
        }
    }

    #[test]
    fn product_of_inverse_sections_is_zero_section() {
        let o1 = od_section(1);
        let p = o1.product_c(&o1.dual()).unwrap();
        assert!(p.same_cells(&zero_section()));
    }

    #[test]
    fn product_rank_multiplies_before_separation() {
        let ms = tp2_multisection();
        let raw = ms.fiber_product_unseparated(&ms).unwrap();
        assert_eq!(raw.rank(), 4);
    }

    #[test]
    fn separation_is_idempotent_and_morphism_valid() {
        let a = zero_section();
        let two = a.disjoint_union(&a).unwrap();
        let (sep, q) = two.canonical_separation();
        assert!(verify_cover_morphism(&q));
        assert_eq!(sep.rank(), 2);
        assert_eq!(sep.sheets().len(), 3);
        let (sep2, q2) = sep.canonical_separation();
        assert!(sep2.same_cells(&sep));
        assert!(verify_cover_morphism(&q2));
        assert_eq!(q2.sheet_map, (0..sep.sheets().len()).collect::<Vec<_>>());
    }

    #[test]
    fn separable_input_separates_to_itself() {
        let ms = tp2_multisection();
        let (sep, q) = ms.canonical_separation();
        assert!(sep.same_cells(&ms));
        assert!(verify_cover_morphism(&q));
    }

    #[test]
    fn slope_breaking_map_fails_verification() {
        let ms = tp2_multisection();
        let mut f = CoverMorphism::identity(&ms);
        // Send sheet 0 to a different-slope sheet.
        f.sheet_map[0] = 1;
        assert!(!verify_cover_morphism(&f));
    }

    #[test]
    fn indecomposability_examples() {
        assert!(tp2_multisection().is_indecomposable_dim2().unwrap());
        let zero = zero_section();
        let two = zero.disjoint_union(&zero).unwrap();
        assert!(!two.is_indecomposable_dim2().unwrap());
        // The union of the zero section and the section of D_1 + D_2 − 2D_0
        // is connected through no shared wall: decomposable.
        let fan = p2_fan();
        let other = MultiSection::section(
            fan.clone(),
            line_bundle_slopes(&fan, &[-2, 1, 1]).unwrap(),
        )
        .unwrap();
        let u = zero.union_c(&other).unwrap();
        assert!(u.validate().is_empty());
        assert!(u.check_separable(1).unwrap());
        assert!(!u.is_indecomposable_dim2().unwrap());
        assert!(u.decomposable_partition().is_some());
    }

    #[test]
    fn from_bundle_rejects_inconsistent_splitting() {
        let fan = p2_fan();
        let bad = MultiSection::from_bundle_slopes(
            fan,
            &[vec![v(1, 0)], vec![v(0, 0)], vec![v(0, 0)]],
        );
        assert!(matches!(bad, Err(MsError::InconsistentSplitting(_))));
    }

    #[test]
    fn monodromy_orbit_count_equals_vertex_lift_count() {
        for ms in [
            tp2_multisection(),
            zero_section().disjoint_union(&zero_section()).unwrap(),
            od_section(0).disjoint_union(&tp2_multisection()).unwrap(),
        ] {
            let perm = ms.monodromy().unwrap();
            // Count orbits of the permutation.
            let mut seen = vec![false; perm.len()];
            let mut orbits = 0;
            for start in 0..perm.len() {
                if seen[start] {
                    continue;
                }
                orbits += 1;
                let mut x = start;
                while !seen[x] {
                    seen[x] = true;
                    x = perm[x];
                }
            }
            assert_eq!(orbits, ms.vertex_lifts().len());
        }
    }
}
