//! Closed-form necessary conditions and structural relations.

use serde::{Deserialize, Serialize};

use super::{block_positive_2x2, BlockPosVerdict, SearchBudget};
use crate::choi::{apply_map, row_abs, ChoiBlocks, ChoiMatrix};
use crate::error::{Error, Result};
use crate::matkernel::{self, min_eigenvalue, psd_sqrt, ComplexMatrix, C64};
use crate::tol;

/// One inequality with its slack; `margin >= 0` means it holds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Relation {
    pub name: String,
    pub holds: bool,
    pub margin: f64,
}

impl Relation {
    fn new(name: &str, margin: f64, slack: f64) -> Self {
        Self { name: name.into(), holds: margin >= -slack, margin }
    }
}

/// `pP + sS + conj(s)S* + qQ` for admissible `p, q >= 0`, `|s|^2 <= pq`.
pub fn block_positive_equiv_form(
    p_mat: &ComplexMatrix,
    s_mat: &ComplexMatrix,
    q_mat: &ComplexMatrix,
    p: f64,
    q: f64,
    s: C64,
) -> Result<ComplexMatrix> {
    if p < 0.0 || q < 0.0 || s.norm_sqr() > p * q * (1.0 + 1e-12) + 1e-300 {
        return Err(Error::BadScalars { p, q, s_abs: s.norm() });
    }
    let sa = s_mat.adjoint();
    Ok(&(&(&p_mat.scale(p) + &s_mat.scale_c(s)) + &sa.scale_c(s.conj())) + &q_mat.scale(q))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop3Report {
    pub relations: Vec<Relation>,
    pub block_positivity: Option<BlockPosVerdict>,
}

impl Prop3Report {
    pub fn all_hold(&self) -> bool {
        self.relations.iter().all(|r| r.holds)
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.name == name)
    }
}

fn min_eig_or_nan(m: &ComplexMatrix) -> f64 {
    min_eigenvalue(&m.hermitian_part()).unwrap_or(f64::NAN)
}

/// Structural relations every positive map in the face satisfies.
pub fn check_prop3(blocks: &ChoiBlocks, budget: &SearchBudget) -> Prop3Report {
    let slack = tol::STRUCT_TOL;
    let mut relations = vec![
        Relation::new("a >= 0", blocks.a, slack),
        Relation::new("B >= 0", min_eig_or_nan(&blocks.b), slack),
        Relation::new("U >= 0", min_eig_or_nan(&blocks.u), slack),
    ];
    if blocks.a.abs() <= slack {
        relations.push(Relation::new("a = 0 implies C = 0", -blocks.c.norm(), slack));
    } else {
        let diff = &blocks.b.scale(blocks.a) - &blocks.c.gram();
        relations.push(Relation::new("C*C <= aB", min_eig_or_nan(&diff), slack));
    }
    relations.push(Relation::new("x = 0", -blocks.x.norm(), slack));
    let block_positivity = block_positive_2x2(&blocks.b, &blocks.t, &blocks.u, budget).ok();
    let bp_margin = match &block_positivity {
        Some(v) if v.is_violation() => v.margin,
        Some(v) => v.margin.max(0.0),
        None => min_eig_or_nan(&blocks.b).min(min_eig_or_nan(&blocks.u)),
    };
    relations.push(Relation {
        name: "[[B, T], [T*, U]] block-positive".into(),
        holds: block_positivity.as_ref().is_some_and(|v| !v.is_violation()),
        margin: bp_margin,
    });
    Prop3Report { relations, block_positivity }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thm7Report {
    pub holds: bool,
    /// Least eigenvalue of `a^{1/2} U^{1/2} - |Y| - |Z|`.
    pub margin: f64,
    pub strict: bool,
}

/// The operator inequality `|Y| + |Z| <= a^{1/2} U^{1/2}`.
pub fn thm7_inequality(blocks: &ChoiBlocks) -> Result<Thm7Report> {
    if blocks.a < -tol::STRUCT_TOL {
        return Err(Error::NotPsd { what: "a".into(), min_eigenvalue: blocks.a });
    }
    let root_u = psd_sqrt(&blocks.u).map_err(|e| match e {
        Error::NotPsd { min_eigenvalue, .. } => Error::NotPsd { what: "U".into(), min_eigenvalue },
        other => other,
    })?;
    let lhs = &row_abs(&blocks.y) + &row_abs(&blocks.z);
    let diff = &root_u.scale(blocks.a.max(0.0).sqrt()) - &lhs;
    let margin = min_eigenvalue(&diff.hermitian_part())?;
    let slack = tol::STRUCT_TOL * blocks.u.frobenius_norm().max(1.0);
    Ok(Thm7Report { holds: margin >= -slack, margin, strict: margin > tol::STRICT_TOL })
}

/// The scalars of a Choi matrix `[[a, c, 0, y], [c̄, b, z̄, t], [0, z, 0, 0], [ȳ, t̄, 0, u]]`
/// of a map `M_2 -> M_2` in the face.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Choi22Scalars {
    pub a: f64,
    pub b: f64,
    pub u: f64,
    pub c: C64,
    pub y: C64,
    pub z: C64,
    pub t: C64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionsReport {
    /// `|c|^2 <= ab`.
    pub i: Relation,
    /// `|t|^2 <= bu`.
    pub ii: Relation,
    /// `|y| + |z| <= (au)^{1/2}`.
    pub iii: Relation,
}

impl ConditionsReport {
    pub fn all_hold(&self) -> bool {
        self.i.holds && self.ii.holds && self.iii.holds
    }
}

pub fn conditions_i_iii(s: &Choi22Scalars) -> ConditionsReport {
    let slack = tol::SEARCH_TOL;
    ConditionsReport {
        i: Relation::new("|c|^2 <= ab", s.a * s.b - s.c.norm_sqr(), slack),
        ii: Relation::new("|t|^2 <= bu", s.b * s.u - s.t.norm_sqr(), slack),
        iii: Relation::new("|y| + |z| <= (au)^(1/2)", (s.a * s.u).max(0.0).sqrt() - s.y.norm() - s.z.norm(), slack),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceReport {
    pub member: bool,
    /// `||phi(P_xi) eta||`.
    pub residual: f64,
}

/// Whether `phi(P_xi) eta = 0`, i.e. the map lies in the face `F_{xi, eta}`.
pub fn face_membership(h: &ChoiMatrix, xi: &[C64], eta: &[C64]) -> Result<FaceReport> {
    if xi.len() != 2 || eta.len() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "xi must lie in C^2 and eta in C^{}, got {} and {}",
            h.dim(),
            xi.len(),
            eta.len()
        )));
    }
    for v in [xi, eta] {
        let norm = matkernel::norm(v);
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnit { norm });
        }
    }
    let image = apply_map(h, &ComplexMatrix::projector(xi))?;
    let residual = matkernel::norm(&image.mul_vec(eta));
    Ok(FaceReport { member: residual <= tol::FACE_TOL, residual })
}

/// `(2B, T, U - |Y|^2 - |Z|^2)`, whose block-positivity is necessary for
/// positivity of a unital face-form map with invertible `B`.
pub fn prop12_matrix(blocks: &ChoiBlocks) -> Result<(ComplexMatrix, ComplexMatrix, ComplexMatrix)> {
    let bmin = min_eigenvalue(&blocks.b.hermitian_part())?;
    if bmin <= tol::RANK_TOL {
        return Err(Error::SingularB { min_eigenvalue: bmin });
    }
    let q = &(&blocks.u - &blocks.y.gram()) - &blocks.z.gram();
    Ok((blocks.b.scale(2.0), blocks.t.clone(), q))
}

pub fn prop12_check(blocks: &ChoiBlocks, budget: &SearchBudget) -> Result<BlockPosVerdict> {
    let (p, s, q) = prop12_matrix(blocks)?;
    block_positive_2x2(&p, &s, &q, budget)
}
