//! Unital face-form maps in the equality case `|Y| + |Z| = U^{1/2}`.
//!
//! For a positive map in this case `Y` and `Z` are linearly dependent, with
//! common direction `eta0`. Rotating the codomain so that `eta0` becomes the
//! last basis vector brings the Choi matrix to the canonical shape
//!
//! ```text
//! [ 1  0   0   |  0  0  y  ]
//! [ 0  I   0   |  0  0  W* ]
//! [ 0  0  1-u  |  z̄  V  t  ]
//! [------------+-----------]
//! [ 0  0   z   |  0  0  0  ]
//! [ 0  0   V*  |  0  0  0  ]
//! [ ȳ  W   t̄   |  0  0  u  ]
//! ```
//!
//! with `u = (|y| + |z|)^2`. Compressing by `V_rho` gives maps
//! `M_2 -> M_2` whose scalars obey `|<rho, Y1*>| + |<rho, Z1*>| <= u^{1/2}`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::choi::{extract_blocks, ChoiBlocks, ChoiMatrix, RowVector};
use crate::cpdecomp::{ccp_check, cp_check, CpReport};
use crate::error::{Error, Result};
use crate::matkernel::{
    self, basis_vector, inner, min_eigenvalue, psd_sqrt, ComplexMatrix, C64, ONE, ZERO,
};
use crate::positivity::{
    conditions_i_iii, face_membership, positivity_prop11, prop11_evaluate, Choi22Scalars, ConditionsReport,
    FaceReport, Relation, SearchBudget,
};
use crate::rng;
use crate::tol;

fn require_unital(blocks: &ChoiBlocks) -> Result<()> {
    blocks.ensure_unital_face_form()
}

fn scale_tol(m: &ComplexMatrix) -> f64 {
    tol::STRUCT_TOL * m.frobenius_norm().max(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EqualityReport {
    pub equality: bool,
    /// `|| |Y| + |Z| - U^{1/2} ||_F`.
    pub gap: f64,
}

/// Tests `|Y| + |Z| = U^{1/2}` up to `tol` in Frobenius norm.
pub fn equality_case_detect(blocks: &ChoiBlocks, tol: f64) -> Result<EqualityReport> {
    require_unital(blocks)?;
    let root_u = psd_sqrt(&blocks.u).map_err(|e| match e {
        Error::NotPsd { min_eigenvalue, .. } => Error::NotPsd { what: "U".into(), min_eigenvalue },
        other => other,
    })?;
    let lhs = &crate::choi::row_abs(&blocks.y) + &crate::choi::row_abs(&blocks.z);
    let gap = (&lhs - &root_u).frobenius_norm();
    Ok(EqualityReport { equality: gap <= tol, gap })
}

/// A point `(p, q, s)` with `|s|^2 = pq` and a vector on which the Schur
/// matrix `D` is negative, following the independence argument.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop13Counterexample {
    pub p: f64,
    pub q: f64,
    pub s: C64,
    /// `xi_Y + xi_Z`.
    pub xi0: Vec<C64>,
    /// `<xi0, D xi0> / ||xi0||^2`.
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop13Report {
    pub dependent: bool,
    pub sigma1: f64,
    pub sigma2: f64,
    /// Common unit direction with `Y* = ȳ eta0`, `Z* = z̄ eta0`.
    pub eta0: Option<Vec<C64>>,
    pub y: C64,
    pub z: C64,
    /// Only searched for when `Y` and `Z` are independent.
    pub counterexample: Option<Prop13Counterexample>,
}

/// Singular values of the `2 x n` stack `[Y; Z]`. The smaller one comes from
/// `sigma1 sigma2 = ||Y ∧ Z||`, which stays accurate when it is tiny.
fn stack_singular_values(y: &RowVector, z: &RowVector) -> (f64, f64) {
    let yy = y.norm().powi(2);
    let zz = z.norm().powi(2);
    let yz = inner(&y.adjoint_vector(), &z.adjoint_vector()).norm();
    let half_tr = 0.5 * (yy + zz);
    let disc = (0.25 * (yy - zz).powi(2) + yz * yz).sqrt();
    let sigma1 = (half_tr + disc).sqrt();
    let n = y.len();
    let mut wedge = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            wedge += (y.0[i] * z.0[j] - y.0[j] * z.0[i]).norm_sqr();
        }
    }
    let sigma2 = if sigma1 > 0.0 { wedge.sqrt() / sigma1 } else { 0.0 };
    (sigma1, sigma2)
}

/// `<xi, D xi>` for `D = p^2 B + p(sT + s̄T*) + pqU - (s̄Y* + sZ*)(sY + s̄Z)`.
fn schur_form(blocks: &ChoiBlocks, p: f64, q: f64, s: C64, xi: &[C64]) -> f64 {
    let middle = &(&(&blocks.b.scale(p) + &blocks.t.scale_c(s)) + &blocks.t.adjoint().scale_c(s.conj()))
        + &blocks.u.scale(q);
    let bvec: Vec<C64> = blocks
        .y
        .adjoint_vector()
        .iter()
        .zip(blocks.z.adjoint_vector())
        .map(|(ys, zs)| s.conj() * ys + s * zs)
        .collect();
    let proj = inner(&bvec, xi).norm_sqr();
    (p * middle.quad_form_re(xi) - proj) / matkernel::norm_sqr(xi)
}

fn search_counterexample(blocks: &ChoiBlocks) -> Option<Prop13Counterexample> {
    let xi_y = blocks.y.direction()?;
    let xi_z = blocks.z.direction()?;
    let xi0: Vec<C64> = xi_y.iter().zip(&xi_z).map(|(a, b)| a + b).collect();
    let mut best: Option<Prop13Counterexample> = None;
    for k in 1..=12 {
        let p = 10f64.powi(-k);
        let q = 1.0 - p;
        for j in 0..256 {
            let theta = std::f64::consts::TAU * j as f64 / 256.0;
            let s = C64::from_polar((p * q).sqrt(), theta);
            let value = schur_form(blocks, p, q, s, &xi0);
            if best.as_ref().is_none_or(|b| value < b.value) {
                best = Some(Prop13Counterexample { p, q, s, xi0: xi0.clone(), value });
            }
        }
    }
    best.filter(|b| b.value < 0.0)
}

/// Linear dependence of `Y` and `Z`: `sigma2 <= RANK_TOL (sigma1 + 1)`. On
/// dependence the common direction `eta0` is extracted; otherwise a negative
/// value of the Schur form is searched for along `xi_Y + xi_Z`.
pub fn prop13_check(blocks: &ChoiBlocks) -> Prop13Report {
    let (sigma1, sigma2) = stack_singular_values(&blocks.y, &blocks.z);
    let dependent = sigma2 <= tol::RANK_TOL * (sigma1 + 1.0);
    if !dependent {
        return Prop13Report {
            dependent,
            sigma1,
            sigma2,
            eta0: None,
            y: ZERO,
            z: ZERO,
            counterexample: search_counterexample(blocks),
        };
    }
    let lead = if blocks.y.norm() >= blocks.z.norm() { &blocks.y } else { &blocks.z };
    let eta0 = lead.direction();
    // Y* = ȳ eta0 means y = Y eta0.
    let project = |x: &RowVector, e: &[C64]| x.0.iter().zip(e).map(|(a, b)| a * b).sum::<C64>();
    let (y, z) = match &eta0 {
        Some(e) => (project(&blocks.y, e), project(&blocks.z, e)),
        None => (ZERO, ZERO),
    };
    Prop13Report { dependent, sigma1, sigma2, eta0, y, z, counterexample: None }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prop14Verdict {
    Cp,
    Ccp,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop14Report {
    pub verdict: Prop14Verdict,
    /// The verdict's case applies, its structural consequences hold and the
    /// condensed matrix test agrees.
    pub confirmed: bool,
    /// `U = |Y|^2`, `B = 1 - |Y|^2` invertible and `T = 0` (or the mirrored set).
    pub evidence: Vec<Relation>,
    pub cp: Option<CpReport>,
}

fn zero_relation(name: &str, residual: f64, tol: f64) -> Relation {
    Relation { name: name.into(), holds: residual <= tol, margin: -residual }
}

/// The degenerate cases `Z = 0, ||Y|| < 1` (completely positive) and
/// `Y = 0, ||Z|| < 1` (completely copositive).
pub fn prop14_check(blocks: &ChoiBlocks) -> Result<Prop14Report> {
    let (verdict, row) = if blocks.z.norm() <= tol::STRUCT_TOL && blocks.y.norm() < 1.0 {
        (Prop14Verdict::Cp, &blocks.y)
    } else if blocks.y.norm() <= tol::STRUCT_TOL && blocks.z.norm() < 1.0 {
        (Prop14Verdict::Ccp, &blocks.z)
    } else {
        return Ok(Prop14Report { verdict: Prop14Verdict::NotApplicable, confirmed: false, evidence: vec![], cp: None });
    };
    let n = blocks.n();
    let gram = row.gram();
    let label = if verdict == Prop14Verdict::Cp { "Y" } else { "Z" };
    let u_res = (&blocks.u - &gram).frobenius_norm();
    let b_expected = &ComplexMatrix::identity(n) - &gram;
    let b_res = (&blocks.b - &b_expected).frobenius_norm();
    let bmin = min_eigenvalue(&blocks.b.hermitian_part())?;
    let evidence = vec![
        zero_relation(&format!("U = |{label}|^2"), u_res, scale_tol(&blocks.u)),
        zero_relation(&format!("B = 1 - |{label}|^2"), b_res, scale_tol(&blocks.b)),
        Relation { name: "B invertible".into(), holds: bmin > tol::RANK_TOL, margin: bmin },
        zero_relation("T = 0", blocks.t.frobenius_norm(), scale_tol(&blocks.t)),
    ];
    let cp = match verdict {
        Prop14Verdict::Cp => cp_check(blocks)?,
        _ => ccp_check(blocks)?,
    };
    let confirmed = evidence.iter().all(|r| r.holds) && cp.holds;
    Ok(Prop14Report { verdict, confirmed, evidence, cp: Some(cp) })
}

/// The canonical shape of an equality-case map together with the basis change
/// that produces it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalForm {
    /// Real and nonnegative unless `y = 0`, in which case `z` carries the phase convention.
    pub y: C64,
    pub z: C64,
    /// `(|y| + |z|)^2`.
    pub u: f64,
    pub t: C64,
    /// `W`, so that the column `W*` sits above `t` in `T`.
    pub w_row: RowVector,
    /// `V`, the row to the left of `t` in `T`.
    pub v_row: RowVector,
    /// `G = 1 ⊕ Q`, unitary on `C^{n+1}`, with `phi_canonical(A) = G* phi(A) G`.
    pub basis_change: ComplexMatrix,
    /// Frobenius distance between the rotated input and the canonical matrix.
    pub residual: f64,
}

impl CanonicalForm {
    pub fn n(&self) -> usize {
        self.w_row.len() + 1
    }

    pub fn blocks(&self) -> ChoiBlocks {
        let n = self.n();
        let last = n - 1;
        let mut y = RowVector::zeros(n);
        y.0[last] = self.y;
        let mut z = RowVector::zeros(n);
        z.0[last] = self.z;
        let mut u = ComplexMatrix::zeros(n, n);
        u[(last, last)] = C64::new(self.u, 0.0);
        let b = &ComplexMatrix::identity(n) - &u;
        let mut t = ComplexMatrix::zeros(n, n);
        for k in 0..last {
            t[(k, last)] = self.w_row.0[k].conj();
            t[(last, k)] = self.v_row.0[k];
        }
        t[(last, last)] = self.t;
        ChoiBlocks::unital(y, z, b, t, u)
    }

    pub fn choi_matrix(&self) -> Result<ChoiMatrix> {
        self.blocks().assemble()
    }

    /// `Y1* = (y, W*)` in `C^n`.
    pub fn y1_adjoint(&self) -> Vec<C64> {
        std::iter::once(self.y).chain(self.w_row.adjoint_vector()).collect()
    }

    /// `Z1* = (z, V*)` in `C^n`.
    pub fn z1_adjoint(&self) -> Vec<C64> {
        std::iter::once(self.z).chain(self.v_row.adjoint_vector()).collect()
    }
}

/// Householder reflection `H` on `C^n` with `H eta = alpha e_last`, `|alpha| = 1`.
fn householder_to_last(eta: &[C64]) -> ComplexMatrix {
    let n = eta.len();
    let last = n - 1;
    let phase = if eta[last].norm() > 0.0 { eta[last] / eta[last].norm() } else { ONE };
    let alpha = -phase;
    let mut v = eta.to_vec();
    v[last] -= alpha;
    let vv = matkernel::norm_sqr(&v);
    if vv < 1e-300 {
        return ComplexMatrix::identity(n);
    }
    &ComplexMatrix::identity(n) - &ComplexMatrix::outer(&v, &v).scale(2.0 / vv)
}

/// Rotates an equality-case map into the canonical shape.
///
/// The input must pass the dependence test; forced zeros (the leading
/// `(n-1)`-square corner of `T` and everything outside the canonical pattern)
/// are checked and reported through [`Error::ZeroPatternViolation`].
pub fn canonicalize(blocks: &ChoiBlocks) -> Result<CanonicalForm> {
    require_unital(blocks)?;
    let n = blocks.n();
    let last = n - 1;
    let dep = prop13_check(blocks);
    if !dep.dependent {
        return Err(Error::NotDependent { sigma2: dep.sigma2 });
    }
    let eta0 = dep.eta0.unwrap_or_else(|| basis_vector(n, last));
    let mut q = householder_to_last(&eta0);
    // H e_last = eta0 / alpha; fix the phase so that y (or z) is real and nonnegative.
    let col = q.mul_vec(&basis_vector(n, last));
    let y0: C64 = blocks.y.0.iter().zip(&col).map(|(a, b)| a * b).sum();
    let z0: C64 = blocks.z.0.iter().zip(&col).map(|(a, b)| a * b).sum();
    let anchor = if y0.norm() > tol::STRUCT_TOL { y0 } else { z0 };
    if anchor.norm() > 0.0 {
        let phase = anchor.conj() / anchor.norm();
        for i in 0..n {
            q[(i, last)] *= phase;
        }
    }
    let rotated = blocks.conjugate(&q);

    let corner = rotated.t.submatrix(0, 0, last, last).frobenius_norm();
    if corner > scale_tol(&blocks.t) {
        return Err(Error::ZeroPatternViolation { what: "leading corner of T".into(), residual: corner });
    }
    let (mut y, mut z) = (rotated.y.0[last], rotated.z.0[last]);
    // Remove the rounding left in the phase-fixed coefficient.
    if y0.norm() > tol::STRUCT_TOL {
        y = C64::new(y.norm(), 0.0);
    } else {
        z = C64::new(z.norm(), 0.0);
    }
    let canon = CanonicalForm {
        y,
        z,
        u: (y.norm() + z.norm()).powi(2),
        t: rotated.t[(last, last)],
        w_row: RowVector((0..last).map(|k| rotated.t[(k, last)].conj()).collect()),
        v_row: RowVector((0..last).map(|k| rotated.t[(last, k)]).collect()),
        basis_change: {
            let mut g = ComplexMatrix::identity(n + 1);
            g.set_submatrix(1, 1, &q);
            g
        },
        residual: 0.0,
    };
    let residual = (&rotated.assemble_matrix()? - &canon.blocks().assemble_matrix()?).frobenius_norm();
    if residual > scale_tol(&blocks.u).max(scale_tol(&blocks.b)) {
        return Err(Error::ZeroPatternViolation { what: "canonical shape".into(), residual });
    }
    Ok(CanonicalForm { residual, ..canon })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Compression {
    pub rho: Vec<C64>,
    /// Scalars read off the compressed Choi matrix.
    pub scalars: Choi22Scalars,
    /// Distance of the compressed Choi matrix from the predicted
    /// `a = 1, c = 0, b = 1 - u, y' = <rho, Y1*>, z' = <rho, Z1*>, t, u`.
    pub display_residual: f64,
    /// `u^{1/2} - |y'| - |z'|`.
    pub margin: f64,
    pub conditions: ConditionsReport,
}

/// Compresses the canonical map by `A -> V_rho A V_rho*` with the coisometry
/// `V_rho = [[conj(rho), 0], [0, 1]]` (2 x (n+1)).
pub fn compress(canon: &CanonicalForm, rho: &[C64]) -> Result<Compression> {
    let n = canon.n();
    if rho.len() != n {
        return Err(Error::DimensionMismatch(format!("rho must lie in C^{n}, got length {}", rho.len())));
    }
    let norm = matkernel::norm(rho);
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnit { norm });
    }
    let mut v = ComplexMatrix::zeros(2, n + 1);
    for (k, r) in rho.iter().enumerate() {
        v[(0, k)] = r.conj();
    }
    v[(1, n)] = ONE;
    let h = canon.choi_matrix()?;
    let mut lift = ComplexMatrix::zeros(4, 2 * (n + 1));
    lift.set_submatrix(0, 0, &v);
    lift.set_submatrix(2, n + 1, &v);
    let compressed = ChoiMatrix::new(&(&lift * h.matrix()) * &lift.adjoint())?;

    let y1 = inner(rho, &canon.y1_adjoint());
    let z1 = inner(rho, &canon.z1_adjoint());
    let predicted = ChoiBlocks::unital(
        RowVector(vec![y1]),
        RowVector(vec![z1]),
        ComplexMatrix::from_diag(&[1.0 - canon.u]),
        ComplexMatrix::from_fn(1, 1, |_, _| canon.t),
        ComplexMatrix::from_diag(&[canon.u]),
    );
    let display_residual = (compressed.matrix() - &predicted.assemble_matrix()?).frobenius_norm();
    let b = extract_blocks(&compressed)?;
    let scalars = Choi22Scalars {
        a: b.a,
        b: b.b[(0, 0)].re,
        u: b.u[(0, 0)].re,
        c: b.c.0[0],
        y: b.y.0[0],
        z: b.z.0[0],
        t: b.t[(0, 0)],
    };
    Ok(Compression {
        rho: rho.to_vec(),
        margin: canon.u.sqrt() - y1.norm() - z1.norm(),
        conditions: conditions_i_iii(&scalars),
        scalars,
        display_residual,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceIntersectionReport {
    pub holds: bool,
    /// One membership test per basis vector of the orthogonal complement of `eta0`.
    pub members: Vec<FaceReport>,
}

/// Whether `phi(P_{e2}) eta = 0` for every `eta ⊥ eta0` (`eta0` in `C^{n+1}`).
pub fn face_intersection_check(h: &ChoiMatrix, eta0: &[C64]) -> Result<FaceIntersectionReport> {
    let d = h.dim();
    if eta0.len() != d {
        return Err(Error::DimensionMismatch(format!("eta0 must lie in C^{d}, got length {}", eta0.len())));
    }
    let norm = matkernel::norm(eta0);
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnit { norm });
    }
    // The reflection maps eta0 to the last axis, so its other columns span eta0's complement.
    let reflect = householder_to_last(eta0);
    let e2 = basis_vector(2, 1);
    let members = (0..d - 1)
        .map(|k| {
            let eta = matkernel::normalized(&reflect.column(k)).expect("unitary column");
            face_membership(h, &e2, &eta)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FaceIntersectionReport { holds: members.iter().all(|m| m.member), members })
}

/// `eta0` in `C^n` embedded in `C^{n+1}` after the face vector `f_1`.
pub fn embed_direction(eta0: &[C64]) -> Vec<C64> {
    std::iter::once(ZERO).chain(eta0.iter().copied()).collect()
}

/// A randomly generated equality-case map and the unitary that scrambled it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EqualityFixture {
    pub canonical: CanonicalForm,
    /// `Q` on `C^n`; `blocks = canonical.blocks().conjugate(Q)`.
    pub scramble: ComplexMatrix,
    pub blocks: ChoiBlocks,
}

fn random_canonical<R: Rng + ?Sized>(r: &mut R, n: usize) -> CanonicalForm {
    let root_u: f64 = r.random_range(0.2..0.9);
    let share: f64 = r.random_range(0.15..0.85);
    let (ym, zm) = (root_u * share, root_u * (1.0 - share));
    let y = C64::new(ym, 0.0);
    let z = C64::from_polar(zm, r.random_range(0.0..std::f64::consts::TAU));
    let u = root_u * root_u;
    let zhat = z / zm;
    // conj(yhat) W* + conj(zhat) V* = 0 keeps the compressions tight at first order.
    let w_len = r.random_range(0.0..0.5) * (ym * zm).sqrt();
    let w_adj: Vec<C64> = rng::unit_vector(r, n - 1).into_iter().map(|x| x * w_len).collect();
    let v_adj: Vec<C64> = w_adj.iter().map(|w| -zhat * w).collect();
    // On the last coordinate alone, u - |y + e^{2i theta} z|^2 = 4|y||z| sin^2(theta - theta0)
    // vanishes at theta0 = (arg y - arg z) / 2; positivity then needs Re(e^{-i theta0} t) = 0
    // and |t|^2 <= 4 (1 - u) |y| |z|.
    let theta0 = 0.5 * (y.arg() - z.arg());
    let t_len = r.random_range(-0.9..0.9) * 2.0 * ((1.0 - u) * ym * zm).sqrt();
    let t = C64::from_polar(t_len, theta0) * C64::i();
    CanonicalForm {
        y,
        z,
        u,
        t,
        w_row: RowVector(w_adj.iter().map(|w| w.conj()).collect()),
        v_row: RowVector(v_adj.iter().map(|v| v.conj()).collect()),
        basis_change: ComplexMatrix::identity(n + 1),
        residual: 0.0,
    }
}

/// Draws canonical-shape maps until one is certified positive, then scrambles
/// it by a random unitary fixing `f_1`. Deterministic in `(seed, index)`.
pub fn equality_case_fixture(n: usize, seed: u64, index: u64, budget: &SearchBudget) -> Result<EqualityFixture> {
    if n < 1 {
        return Err(Error::DimensionMismatch("equality-case fixtures need n >= 1".into()));
    }
    let mut r = rng::stream(seed, "equality-fixture", index);
    loop {
        let canonical = random_canonical(&mut r, n);
        let verdict = positivity_prop11(&canonical.blocks(), &budget.with_seed(seed))?;
        if !verdict.is_certified() {
            continue;
        }
        let scramble = rng::unitary(&mut r, n);
        let blocks = canonical.blocks().conjugate(&scramble);
        return Ok(EqualityFixture { canonical, scramble, blocks });
    }
}

/// Completely positive (`Cp`) or copositive (`Ccp`) equality-case blocks with
/// `W = V = t = 0`, scrambled by a random unitary fixing `f_1`.
pub fn prop14_fixture(n: usize, variant: Prop14Verdict, seed: u64, index: u64) -> Result<ChoiBlocks> {
    if n < 1 || variant == Prop14Verdict::NotApplicable {
        return Err(Error::DimensionMismatch("prop14 fixtures need n >= 1 and a CP or coCP variant".into()));
    }
    let mut r = rng::stream(seed, "prop14-fixture", index);
    let mag: f64 = r.random_range(0.1..0.95);
    let phase = r.random_range(0.0..std::f64::consts::TAU);
    let mut row = RowVector::zeros(n);
    row.0[n - 1] = C64::from_polar(mag, phase);
    let u = row.gram();
    let b = &ComplexMatrix::identity(n) - &u;
    let zero = RowVector::zeros(n);
    let blocks = match variant {
        Prop14Verdict::Cp => ChoiBlocks::unital(row, zero, b, ComplexMatrix::zeros(n, n), u),
        _ => ChoiBlocks::unital(zero, row, b, ComplexMatrix::zeros(n, n), u),
    };
    Ok(blocks.conjugate(&rng::unitary(&mut r, n)))
}

/// The parametric positivity objective at the point used to refute independence, exposed
/// for cross-checks of [`Prop13Counterexample::value`].
pub fn counterexample_objective(blocks: &ChoiBlocks, c: &Prop13Counterexample) -> f64 {
    prop11_evaluate(blocks, c.p, c.s).objective()
}
