//! Tang's two-parameter family of nondecomposable maps `M_2 -> M_4` and its
//! normalization to a unital map in the face `F_{e2,f1}`.
//!
//! `phi0` is normalized by the congruence `R = phi0(I)^{-1/2}` and then
//! conjugated by the real unitary `W`, giving `phi(A) = W* R phi0(A) R W`.

use serde::{Deserialize, Serialize};

use crate::choi::{choi_from_map, extract_blocks, ChoiBlocks, ChoiMatrix};
use crate::cpdecomp::{ccp_check, cp_check, witness_search, WitnessOptions, WitnessOutcome};
use crate::error::{Error, Result};
use crate::matkernel::{basis_vector, inner, min_eigenvalue, psd_inv_sqrt, ComplexMatrix, C64};
use crate::positivity::{
    face_membership, map_positivity, positivity_prop11, MapPosVerdict, Prop11Verdict, SearchBudget, Thm7Report,
};
use crate::tol;

/// `(mu, eps)` with `0 < mu < 1` and `0 < eps <= mu^2 / 6`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangParams {
    mu: f64,
    eps: f64,
}

impl TangParams {
    pub fn new(mu: f64, eps: f64) -> Result<Self> {
        // A relative slack lets eps = mu^2/6 computed in floating point pass.
        let valid = mu > 0.0 && mu < 1.0 && eps > 0.0 && eps <= mu * mu / 6.0 * (1.0 + 1e-12);
        if valid && mu.is_finite() && eps.is_finite() {
            Ok(Self { mu, eps })
        } else {
            Err(Error::BadParams { mu, eps })
        }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `rho = sqrt(1 - eps + mu^2)`.
    pub fn rho(&self) -> f64 {
        (1.0 - self.eps + self.mu * self.mu).sqrt()
    }

    /// `delta = det([[rho^2, -mu], [-mu, 2]])^{1/2} = sqrt(2 - 2 eps + mu^2)`.
    pub fn delta(&self) -> f64 {
        (2.0 - 2.0 * self.eps + self.mu * self.mu).sqrt()
    }

    /// `k x k` grid over the valid region: `mu` evenly in `[0.2, 0.9]` and
    /// `eps` from `mu^2/60` up to the boundary `mu^2/6`.
    pub fn grid(k: usize) -> Vec<TangParams> {
        let k = k.max(1);
        let frac = |i: usize| if k == 1 { 0.5 } else { i as f64 / (k - 1) as f64 };
        let mut out = Vec::with_capacity(k * k);
        for i in 0..k {
            let mu = 0.2 + 0.7 * frac(i);
            for j in 0..k {
                let top = mu * mu / 6.0;
                let eps = if k == 1 { top / 2.0 } else { top * (0.1 + 0.9 * frac(j)) };
                out.push(TangParams { mu, eps });
            }
        }
        out
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `phi0` applied to a `2 x 2` matrix `[[a, b], [c, d]]`.
pub fn phi0_apply(params: &TangParams, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::DimensionMismatch(format!("phi0 acts on 2x2 matrices, got {}x{}", m.rows(), m.cols())));
    }
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let mu = params.mu;
    let z = C64::new(0.0, 0.0);
    let rows = [
        [a * (1.0 - params.eps) + d * (mu * mu), -b, c * mu, -d * mu],
        [-c, a + d * 2.0, -b * 2.0, z],
        [b * mu, -c * 2.0, (a + d) * 2.0, -b * 2.0],
        [-d * mu, z, -c * 2.0, a + d],
    ];
    Ok(ComplexMatrix::from_fn(4, 4, |i, j| rows[i][j]))
}

fn unit(i: usize, j: usize) -> ComplexMatrix {
    let mut e = ComplexMatrix::zeros(2, 2);
    e[(i, j)] = real(1.0);
    e
}

/// Choi matrix of `phi0`, written out entry by entry.
pub fn tang_choi(params: &TangParams) -> ChoiMatrix {
    let (mu, eps) = (params.mu, params.eps);
    #[rustfmt::skip]
    let entries = [
        1.0 - eps, 0.0, 0.0, 0.0,  0.0, -1.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0,        0.0, 0.0, -2.0, 0.0,
        0.0, 0.0, 2.0, 0.0,        mu, 0.0, 0.0, -2.0,
        0.0, 0.0, 0.0, 1.0,        0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, mu, 0.0,         mu * mu, 0.0, 0.0, -mu,
        -1.0, 0.0, 0.0, 0.0,       0.0, 2.0, 0.0, 0.0,
        0.0, -2.0, 0.0, 0.0,       0.0, 0.0, 2.0, 0.0,
        0.0, 0.0, -2.0, 0.0,       -mu, 0.0, 0.0, 1.0,
    ];
    ChoiMatrix::new(ComplexMatrix::from_real(8, 8, &entries)).expect("symmetric by construction")
}

/// `(alpha, beta, gamma)` with `alpha, beta > 0`, `gamma < 0` solving
/// `alpha^2 + gamma^2 = rho^2`, `beta^2 + gamma^2 = 2`, `(alpha + beta) gamma = -mu`.
///
/// Eliminating `alpha` and `beta` leaves `f(gamma) = (sqrt(rho^2 - gamma^2) +
/// sqrt(2 - gamma^2)) gamma + mu`. It can have two roots in `(-rho, 0)`; the
/// one wanted makes `[[alpha, gamma], [gamma, beta]]` positive definite (it is
/// the square root of the corner of `phi0(I)`), i.e. `alpha beta > gamma^2`,
/// which means `gamma^2 < 2 rho^2 / (rho^2 + 2)`. On that bracket `f` goes from
/// negative to `f(0) = mu`; bisection isolates the root and Newton polishes it.
pub fn solve_abc(params: &TangParams) -> Result<(f64, f64, f64)> {
    let rho2 = params.rho().powi(2);
    let mu = params.mu;
    let parts = |g: f64| {
        let alpha = (rho2 - g * g).max(0.0).sqrt();
        let beta = (2.0 - g * g).max(0.0).sqrt();
        (alpha, beta)
    };
    let f = |g: f64| {
        let (alpha, beta) = parts(g);
        (alpha + beta) * g + mu
    };
    let (mut lo, mut hi) = (-(2.0 * rho2 / (rho2 + 2.0)).sqrt(), 0.0);
    if f(lo) >= 0.0 || f(hi) <= 0.0 {
        return Err(Error::NoConvergence { sweeps: 0, off: f(lo) });
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-6 {
            break;
        }
    }
    let mut g = 0.5 * (lo + hi);
    for it in 0..50 {
        let (alpha, beta) = parts(g);
        let fp = alpha + beta - g * g * (1.0 / alpha + 1.0 / beta);
        let step = f(g) / fp;
        let next = (g - step).clamp(lo, hi);
        if (next - g).abs() <= 1e-15 * g.abs().max(1e-300) || it == 49 {
            g = next;
            break;
        }
        g = next;
    }
    let (alpha, beta) = parts(g);
    let residual = abc_residual(params, alpha, beta, g);
    if residual > 1e-12 {
        return Err(Error::NoConvergence { sweeps: 50, off: residual });
    }
    Ok((alpha, beta, g))
}

fn abc_residual(params: &TangParams, alpha: f64, beta: f64, gamma: f64) -> f64 {
    let rho2 = params.rho().powi(2);
    (alpha * alpha + gamma * gamma - rho2)
        .abs()
        .max((beta * beta + gamma * gamma - 2.0).abs())
        .max(((alpha + beta) * gamma + params.mu).abs())
}

/// Every intermediate object of the normalization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangPipeline {
    pub params: TangParams,
    pub rho: f64,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `phi0(I)`.
    pub phi0_identity: ComplexMatrix,
    /// `phi0(I)^{-1/2}` assembled from `(alpha, beta, gamma, delta)`.
    pub r: ComplexMatrix,
    pub w: ComplexMatrix,
    pub h0: ChoiMatrix,
    /// Choi matrix of `A -> W* R phi0(A) R W`.
    pub hfinal: ChoiMatrix,
}

/// `phi0(I)^{-1/2}` in closed form.
fn inv_sqrt_closed_form(delta: f64, alpha: f64, beta: f64, gamma: f64) -> ComplexMatrix {
    #[rustfmt::skip]
    let e = [
        beta / delta, 0.0, 0.0, -gamma / delta,
        0.0, 1.0 / 3f64.sqrt(), 0.0, 0.0,
        0.0, 0.0, 0.5, 0.0,
        -gamma / delta, 0.0, 0.0, alpha / delta,
    ];
    ComplexMatrix::from_real(4, 4, &e)
}

fn unitary_w(params: &TangParams, alpha: f64, beta: f64, gamma: f64) -> ComplexMatrix {
    let rho = params.rho();
    let (p, q) = ((params.mu * gamma + alpha) / rho, (params.mu * beta + gamma) / rho);
    #[rustfmt::skip]
    let e = [
        p, 0.0, 0.0, q,
        0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 1.0, 0.0,
        q, 0.0, 0.0, -p,
    ];
    ComplexMatrix::from_real(4, 4, &e)
}

pub fn build_pipeline(params: &TangParams) -> Result<TangPipeline> {
    let (alpha, beta, gamma) = solve_abc(params)?;
    let (rho, delta) = (params.rho(), params.delta());
    let r = inv_sqrt_closed_form(delta, alpha, beta, gamma);
    let w = unitary_w(params, alpha, beta, gamma);
    let g = &r * &w;
    let ga = g.adjoint();
    let hfinal = choi_from_map(|i, j| &(&ga * &phi0_apply(params, &unit(i, j)).expect("2x2")) * &g, 3)?;
    Ok(TangPipeline {
        params: *params,
        rho,
        delta,
        alpha,
        beta,
        gamma,
        phi0_identity: phi0_apply(params, &ComplexMatrix::identity(2))?,
        r,
        w,
        h0: tang_choi(params),
        hfinal,
    })
}

impl TangPipeline {
    /// `Hfinal` by conjugating each `4 x 4` block of `H0` with `G = R W`.
    pub fn hfinal_blockwise(&self) -> ChoiMatrix {
        let g = &self.r * &self.w;
        let ga = g.adjoint();
        let blocks: Vec<Vec<ComplexMatrix>> =
            (0..2).map(|i| (0..2).map(|j| &(&ga * &self.h0.block(i, j)) * &g).collect()).collect();
        let h = ComplexMatrix::from_blocks(&[
            vec![&blocks[0][0], &blocks[0][1]],
            vec![&blocks[1][0], &blocks[1][1]],
        ])
        .expect("consistent blocks");
        ChoiMatrix::new(h.hermitian_part()).expect("Hermitian")
    }

    /// `phi(I)` of the normalized map.
    pub fn final_identity(&self) -> ComplexMatrix {
        self.hfinal.apply_identity()
    }

    pub fn abc_residual(&self) -> f64 {
        abc_residual(&self.params, self.alpha, self.beta, self.gamma)
    }

    /// `|(mu gamma + alpha)^2 + (mu beta + gamma)^2 - rho^2|`.
    pub fn w_identity_residual(&self) -> f64 {
        let mu = self.params.mu;
        ((mu * self.gamma + self.alpha).powi(2) + (mu * self.beta + self.gamma).powi(2) - self.rho.powi(2)).abs()
    }

    pub fn w_unitarity_residual(&self) -> f64 {
        (&(&self.w.adjoint() * &self.w) - &ComplexMatrix::identity(4)).frobenius_norm()
    }

    /// `||R phi0(I) R - I||_F`.
    pub fn r_residual(&self) -> f64 {
        (&(&(&self.r * &self.phi0_identity) * &self.r) - &ComplexMatrix::identity(4)).frobenius_norm()
    }

    /// The normalized Choi matrix as printed, from `(mu, eps)` alone.
    pub fn printed_final(&self) -> ComplexMatrix {
        printed_final(&self.params)
    }
}

/// 0-based positions of the nonzero entries in the printed normalized Choi
/// matrix (upper triangle and diagonal; the matrix is symmetric).
pub const PRINTED_NONZEROS: [(usize, usize); 13] =
    [(0, 0), (1, 1), (2, 2), (3, 3), (5, 5), (6, 6), (7, 7), (0, 5), (1, 6), (2, 4), (2, 7), (3, 5), (4, 4)];

/// The normalized Choi matrix with the entries as printed (using the
/// `-1/(sqrt(3) rho)` form for the `(1, 6)` entry).
pub fn printed_final(params: &TangParams) -> ComplexMatrix {
    let (mu, eps, rho, delta) = (params.mu, params.eps, params.rho(), params.delta());
    let s3 = 3f64.sqrt();
    let mut m = ComplexMatrix::zeros(8, 8);
    let mut set = |i: usize, j: usize, v: f64| {
        m[(i, j)] = real(v);
        m[(j, i)] = real(v);
    };
    set(0, 0, 1.0);
    set(1, 1, 1.0 / 3.0);
    set(2, 2, 0.5);
    set(3, 3, (1.0 - eps) / (delta * delta));
    set(4, 4, 0.0);
    set(5, 5, 2.0 / 3.0);
    set(6, 6, 0.5);
    set(7, 7, rho * rho / (delta * delta));
    set(0, 5, -1.0 / (s3 * rho));
    set(1, 6, -1.0 / s3);
    set(2, 4, -mu / (2.0 * rho));
    set(2, 7, delta / (2.0 * rho));
    set(3, 5, -mu / (s3 * delta * rho));
    m
}

/// Largest magnitude in the normalized Choi matrix at a position printed as zero.
pub fn zero_pattern_violation(h: &ComplexMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..8 {
        for j in 0..8 {
            let printed = PRINTED_NONZEROS.iter().any(|&(a, b)| (a, b) == (i, j) || (b, a) == (i, j));
            if !printed || (i, j) == (4, 4) {
                worst = worst.max(h[(i, j)].norm());
            }
        }
    }
    worst
}

/// Which printed closed form the computed `Y_1` entry equals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct YVariant {
    pub computed: f64,
    /// `-1/(sqrt(3) rho)`, as in the matrix display.
    pub rho_form: f64,
    /// `-1/(sqrt(3) delta)`, as in the block list.
    pub delta_form: f64,
    pub matches_rho_form: bool,
    pub matches_delta_form: bool,
}

pub fn y_variant(pipeline: &TangPipeline) -> YVariant {
    let computed = pipeline.hfinal.matrix()[(0, 5)].re;
    let s3 = 3f64.sqrt();
    let rho_form = -1.0 / (s3 * pipeline.rho);
    let delta_form = -1.0 / (s3 * pipeline.delta);
    YVariant {
        computed,
        rho_form,
        delta_form,
        matches_rho_form: (computed - rho_form).abs() <= 1e-9,
        matches_delta_form: (computed - delta_form).abs() <= 1e-9,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangCheck {
    pub name: String,
    pub passed: bool,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangReport {
    pub params: TangParams,
    pub rho: f64,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub y_variant: YVariant,
    pub thm7: Thm7Report,
    pub prop11: Prop11Verdict,
    pub raw_positivity: MapPosVerdict,
    pub h0_min_eigenvalue: f64,
    pub h0_pt_min_eigenvalue: f64,
    pub witness: Option<WitnessOutcome>,
    pub checks: Vec<TangCheck>,
}

impl TangReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&TangCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub budget: SearchBudget,
    /// `None` skips the witness search.
    pub witness: Option<WitnessOptions>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { budget: SearchBudget::default(), witness: Some(WitnessOptions::default()) }
    }
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let mut s = 0.0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Runs the full set of claims about the family at one parameter point.
pub fn verify_tang(params: &TangParams, options: &VerifyOptions) -> Result<TangReport> {
    let pl = build_pipeline(params)?;
    let blocks: ChoiBlocks = extract_blocks(&pl.hfinal)?;
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, value: f64| checks.push(TangCheck { name: name.into(), passed, value });

    push("abc system", pl.abc_residual() <= 1e-10, pl.abc_residual());
    push("w identity", pl.w_identity_residual() <= 1e-10, pl.w_identity_residual());
    push("W unitary", pl.w_unitarity_residual() <= 1e-10, pl.w_unitarity_residual());
    push("R phi0(I) R = I", pl.r_residual() <= 1e-9, pl.r_residual());
    let oracle = psd_inv_sqrt(&pl.phi0_identity, tol::RANK_TOL)?;
    let r_diff = (&oracle - &pl.r).frobenius_norm();
    push("R equals spectral inverse square root", r_diff <= 1e-9, r_diff);
    let unital = (&pl.final_identity() - &ComplexMatrix::identity(4)).frobenius_norm();
    push("phi(I) = I", unital <= 1e-9, unital);
    let routes = (pl.hfinal.matrix() - pl.hfinal_blockwise().matrix()).frobenius_norm();
    push("two routes agree", routes <= 1e-9, routes);
    let pattern = zero_pattern_violation(pl.hfinal.matrix());
    push("printed zero pattern", pattern <= 1e-9, pattern);
    let printed = (pl.hfinal.matrix() - &pl.printed_final()).max_abs();
    push("printed entries", printed <= 1e-9, printed);

    push("C = 0", blocks.c.norm() <= tol::STRUCT_TOL, blocks.c.norm());
    let orth = inner(&blocks.y.0, &blocks.z.0)
        .norm()
        .max(inner(&blocks.y.0, &blocks.c.0).norm())
        .max(inner(&blocks.z.0, &blocks.c.0).norm());
    push("C, Y, Z orthogonal", orth <= 1e-12, orth);
    push("B diagonal", off_diagonal_norm(&blocks.b) <= 1e-12, off_diagonal_norm(&blocks.b));
    push("U diagonal", off_diagonal_norm(&blocks.u) <= 1e-12, off_diagonal_norm(&blocks.u));
    let t_nonzero = blocks.t.data().iter().filter(|z| z.norm() > 1e-12).count();
    let t_positions = [(0, 1), (1, 2), (2, 0)].iter().all(|&(i, j)| blocks.t[(i, j)].norm() > 1e-12);
    push("T has three printed nonzeros", t_nonzero == 3 && t_positions, t_nonzero as f64);

    let e2 = [real(0.0), real(1.0)];
    let face = face_membership(&pl.hfinal, &e2, &basis_vector(4, 0))?;
    push("face membership", face.member, face.residual);
    let thm7 = crate::positivity::thm7_inequality(&blocks)?;
    push("strict operator inequality", thm7.strict, thm7.margin);
    let prop11 = positivity_prop11(&blocks, &options.budget)?;
    push("positivity certified", prop11.is_certified(), prop11.margin);
    let raw_positivity = map_positivity(&pl.h0, &options.budget)?;
    push("raw map positivity agrees", raw_positivity.is_certified() == prop11.is_certified(), raw_positivity.margin);
    let cp = cp_check(&blocks)?;
    push("not completely positive", !cp.holds && cp.consistent, cp.full.min_eigenvalue());
    let ccp = ccp_check(&blocks)?;
    push("not completely copositive", !ccp.holds && ccp.consistent, ccp.full.min_eigenvalue());
    let h0_min_eigenvalue = min_eigenvalue(pl.h0.matrix())?;
    let h0_pt_min_eigenvalue = min_eigenvalue(pl.h0.partial_transpose().matrix())?;
    let y_variant = y_variant(&pl);
    push("Y entry matches a printed form", y_variant.matches_rho_form || y_variant.matches_delta_form, y_variant.computed);

    let witness = match &options.witness {
        Some(w) => {
            let out = witness_search(&pl.hfinal, w)?;
            let value = match &out {
                WitnessOutcome::Witness(c) => c.value,
                WitnessOutcome::NoneFound { best_value } => *best_value,
            };
            push("PPT witness found", out.witness().is_some(), value);
            Some(out)
        }
        None => None,
    };

    Ok(TangReport {
        params: *params,
        rho: pl.rho,
        delta: pl.delta,
        alpha: pl.alpha,
        beta: pl.beta,
        gamma: pl.gamma,
        y_variant,
        thm7,
        prop11,
        raw_positivity,
        h0_min_eigenvalue,
        h0_pt_min_eigenvalue,
        witness,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(mu: f64, eps: f64) -> TangParams {
        TangParams::new(mu, eps).unwrap()
    }

    #[test]
    fn parameter_region() {
        assert!(TangParams::new(0.9, 0.12).is_ok());
        assert!(TangParams::new(0.9, 0.135).is_ok());
        assert!(matches!(TangParams::new(0.9, 0.2), Err(Error::BadParams { .. })));
        assert!(TangParams::new(1.0, 0.1).is_err());
        assert!(TangParams::new(0.5, 0.0).is_err());
        assert!(TangParams::new(0.5, 0.5 * 0.5 / 6.0).is_ok());
    }

    #[test]
    fn phi0_matrix_units() {
        let t = p(0.5, 1.0 / 24.0);
        let e11 = phi0_apply(&t, &unit(0, 0)).unwrap();
        assert_eq!(e11.diagonal().iter().map(|z| z.re).collect::<Vec<_>>(), vec![23.0 / 24.0, 1.0, 2.0, 1.0]);
        assert_eq!(phi0_apply(&t, &ComplexMatrix::zeros(2, 2)).unwrap().frobenius_norm(), 0.0);
        let id = phi0_apply(&t, &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(id[(0, 0)].re, 1.0 - 1.0 / 24.0 + 0.25);
        assert_eq!(id[(0, 3)].re, -0.5);
        assert_eq!(id[(1, 1)].re, 3.0);
        assert_eq!(id[(2, 2)].re, 4.0);
        assert_eq!(id[(3, 3)].re, 2.0);
    }

    #[test]
    fn choi_matches_map_action() {
        for (mu, eps) in [(0.9, 0.12), (0.5, 1.0 / 24.0), (0.3, 0.01)] {
            let t = p(mu, eps);
            let from_map = choi_from_map(|i, j| phi0_apply(&t, &unit(i, j)).unwrap(), 3).unwrap();
            assert_eq!(from_map.matrix(), tang_choi(&t).matrix());
        }
        let h = tang_choi(&p(0.5, 1.0 / 24.0));
        assert_eq!(h.matrix()[(0, 0)].re, 23.0 / 24.0);
        assert_eq!(h.matrix()[(4, 4)].re, 0.25);
        assert_eq!(h.matrix()[(2, 4)].re, 0.5);
        assert_eq!(h.matrix()[(3, 7)].re, 0.0);
    }

    #[test]
    fn abc_known_values() {
        let (a, b, g) = solve_abc(&p(0.5, 1.0 / 24.0)).unwrap();
        assert!((a - 1.0806006743539274).abs() < 1e-12);
        assert!((b - 1.3997730116275384).abs() < 1e-12);
        assert!((g + 0.20158252880438615).abs() < 1e-12);
    }

    #[test]
    fn abc_matches_closed_form_square_root() {
        // The corner [[rho^2, -mu], [-mu, 2]] has square root (M + delta I) / tau
        // with tau = sqrt(tr M + 2 delta).
        for t in TangParams::grid(5) {
            let (a, b, g) = solve_abc(&t).unwrap();
            let (rho2, delta) = (t.rho().powi(2), t.delta());
            let tau = (rho2 + 2.0 + 2.0 * delta).sqrt();
            assert!((a - (rho2 + delta) / tau).abs() < 1e-12);
            assert!((b - (2.0 + delta) / tau).abs() < 1e-12);
            assert!((g + t.mu() / tau).abs() < 1e-12);
            assert!((a * b - g * g - delta).abs() < 1e-12);
        }
    }

    #[test]
    fn abc_small_mu_limit() {
        let (_, _, g) = solve_abc(&p(1e-4, 1e-9)).unwrap();
        assert!(g < 0.0 && g.abs() < 1e-4);
    }

    #[test]
    fn pipeline_matches_printed_matrix() {
        for (mu, eps) in [(0.9, 0.12), (0.5, 1.0 / 24.0), (0.3, 0.01)] {
            let pl = build_pipeline(&p(mu, eps)).unwrap();
            assert!((pl.hfinal.matrix() - &pl.printed_final()).max_abs() < 1e-12);
            assert!(zero_pattern_violation(pl.hfinal.matrix()) < 1e-12);
            let v = y_variant(&pl);
            assert!(v.matches_rho_form && !v.matches_delta_form);
        }
    }

    #[test]
    fn grid_stays_in_region() {
        for t in TangParams::grid(5) {
            assert!(TangParams::new(t.mu(), t.eps()).is_ok());
        }
        assert_eq!(TangParams::grid(3).len(), 9);
    }
}
