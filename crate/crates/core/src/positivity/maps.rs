//! Positivity of a map `M_2 -> M_{n+1}` from its Choi matrix.
//!
//! A map is positive iff it sends every rank-one projector to a PSD matrix,
//! so both searches below scan a two-parameter family of rank-one inputs and
//! take the smallest eigenvalue of the image.

use serde::{Deserialize, Serialize};

use super::{compass_minimize, MapPosVerdict, Prop11Verdict, SearchBudget, Verdict, VerdictStatus};
use crate::choi::{ChoiBlocks, ChoiMatrix};
use crate::error::Result;
use crate::matkernel::{min_eigenpair, ComplexMatrix, C64};
use crate::par;
use crate::rng;
use rand::Rng;

use std::f64::consts::{FRAC_PI_2, PI};

/// Which half of the criterion failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prop11Condition {
    /// `pB + sT + conj(s)T* + qU >= 0`.
    Middle,
    /// `p(pB + sT + conj(s)T* + qU) - (conj(s)Y* + sZ*)(sY + conj(s)Z) >= 0`.
    Schur,
}

/// Both conditions evaluated at one admissible `(p, q, s)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop11Evaluation {
    pub p: f64,
    pub q: f64,
    pub s: C64,
    pub middle_min: f64,
    pub middle_vector: Vec<C64>,
    pub schur_min: f64,
    pub schur_vector: Vec<C64>,
}

impl Prop11Evaluation {
    pub fn objective(&self) -> f64 {
        self.middle_min.min(self.schur_min)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop11Witness {
    pub p: f64,
    pub q: f64,
    pub s: C64,
    pub condition: Prop11Condition,
    /// Unit vector with `<eta, M eta> = value` for the failing matrix `M`.
    pub eta: Vec<C64>,
    pub value: f64,
}

/// Evaluates both matrices of the criterion at `(p, 1 - p, s)`; requires
/// `0 <= p <= 1` and `|s|^2 <= p(1-p)`, which callers guarantee.
pub fn prop11_evaluate(blocks: &ChoiBlocks, p: f64, s: C64) -> Prop11Evaluation {
    let q = 1.0 - p;
    let n = blocks.n();
    let t = &blocks.t;
    let middle = ComplexMatrix::from_fn(n, n, |i, j| {
        blocks.b[(i, j)] * p + t[(i, j)] * s + t[(j, i)].conj() * s.conj() + blocks.u[(i, j)] * q
    });
    // b = conj(s) Y* + s Z*, a column vector.
    let bvec: Vec<C64> =
        (0..n).map(|k| s.conj() * blocks.y.0[k].conj() + s * blocks.z.0[k].conj()).collect();
    let schur = ComplexMatrix::from_fn(n, n, |i, j| middle[(i, j)] * p - bvec[i] * bvec[j].conj());
    let (middle_min, middle_vector) = min_eigenpair(&middle.hermitian_part()).expect("Hermitian by construction");
    let (schur_min, schur_vector) = min_eigenpair(&schur.hermitian_part()).expect("Hermitian by construction");
    Prop11Evaluation { p, q, s, middle_min, middle_vector, schur_min, schur_vector }
}

/// Boundary parametrization `p = cos^2 a`, `q = sin^2 a`, `s = cos a sin a e^{i theta}`.
fn boundary_point(a: f64, theta: f64) -> (f64, C64) {
    let (c, sn) = (a.cos(), a.sin());
    (c * c, C64::from_polar(c * sn, theta))
}

fn prop11_grid() -> Vec<(f64, C64)> {
    let mut ps = vec![0.0, 1.0];
    for k in 0..61 {
        let ratio = 10f64.powf(-3.0 + 6.0 * k as f64 / 60.0);
        ps.push(ratio / (1.0 + ratio));
    }
    let mut points = Vec::new();
    for &p in &ps {
        let r = (p * (1.0 - p)).max(0.0).sqrt();
        points.push((p, C64::new(0.0, 0.0)));
        for k in 0..64 {
            let theta = 2.0 * PI * k as f64 / 64.0;
            for radial in [0.5, 0.9, 1.0] {
                points.push((p, C64::from_polar(radial * r, theta)));
            }
        }
    }
    points
}

/// Positivity of a unital face-form map through the two-condition criterion
/// on admissible `(p, q, s)`.
///
/// A log-spaced grid in `p/q` with boundary and interior `s` runs first; the
/// best grid points and random boundary starts are then refined by compass
/// search on the boundary `|s|^2 = pq`, which suffices because every PSD
/// input is a sum of rank-one ones.
pub fn positivity_prop11(blocks: &ChoiBlocks, budget: &SearchBudget) -> Result<Prop11Verdict> {
    blocks.ensure_unital_face_form()?;
    let h = blocks.assemble_matrix()?;
    let scale = h.frobenius_norm().powi(2).max(1.0);
    let eff_tol = budget.tol * scale;

    let mut starts: Vec<(f64, f64)> = Vec::new();
    let mut evaluations = 0;
    let mut best: Option<Prop11Evaluation> = None;
    if budget.grid {
        let grid = prop11_grid();
        evaluations += grid.len();
        let evals = par::map_indexed(budget.execution, grid.len(), |i| prop11_evaluate(blocks, grid[i].0, grid[i].1));
        let mut order: Vec<usize> = (0..evals.len()).collect();
        order.sort_by(|&a, &b| evals[a].objective().total_cmp(&evals[b].objective()).then(a.cmp(&b)));
        for &i in order.iter().take(8) {
            let e = &evals[i];
            starts.push((e.p.sqrt().clamp(0.0, 1.0).acos(), e.s.arg()));
        }
        best = Some(evals[order[0]].clone());
    }
    for i in 0..budget.restarts {
        let mut r = rng::stream(budget.seed, "prop11", i as u64);
        starts.push((r.random_range(0.0..FRAC_PI_2), r.random_range(-PI..PI)));
    }
    let objective = |x: &[f64]| {
        let (p, s) = boundary_point(x[0], x[1]);
        prop11_evaluate(blocks, p, s).objective()
    };
    let refined = par::map_indexed(budget.execution, starts.len(), |i| {
        let (a, theta) = starts[i];
        compass_minimize(vec![a, theta], &[0.0, -4.0 * PI], &[FRAC_PI_2, 4.0 * PI], 0.1, budget.iterations, objective)
    });
    for (x, _, count) in &refined {
        evaluations += count;
        let (p, s) = boundary_point(x[0], x[1]);
        let e = prop11_evaluate(blocks, p, s);
        if best.as_ref().is_none_or(|b| e.objective() < b.objective()) {
            best = Some(e);
        }
    }
    let best = best.expect("grid or restarts produce a candidate");
    let margin = best.objective();
    let status = if margin < -eff_tol {
        VerdictStatus::ViolationFound
    } else if budget.grid {
        VerdictStatus::Certified
    } else {
        VerdictStatus::Inconclusive
    };
    let (condition, eta, value) = if best.middle_min <= best.schur_min {
        (Prop11Condition::Middle, best.middle_vector.clone(), best.middle_min)
    } else {
        (Prop11Condition::Schur, best.schur_vector.clone(), best.schur_min)
    };
    let witness = Some(Prop11Witness { p: best.p, q: best.q, s: best.s, condition, eta, value });
    Ok(Verdict { status, margin, witness, evaluations })
}

/// A rank-one input `lambda lambda*` and the eigenvector of its image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapWitness {
    pub lambda: [C64; 2],
    pub eta: Vec<C64>,
    /// `<eta, phi(lambda lambda*) eta>`.
    pub value: f64,
}

fn bloch(theta: f64, phi: f64) -> [C64; 2] {
    [C64::new((theta / 2.0).cos(), 0.0), C64::from_polar((theta / 2.0).sin(), phi)]
}

fn image_min(h: &ChoiMatrix, lambda: &[C64; 2]) -> (f64, Vec<C64>) {
    let d = h.dim();
    let m = h.matrix();
    let img = ComplexMatrix::from_fn(d, d, |r, c| {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                acc += lambda[i] * lambda[j].conj() * m[(i * d + r, j * d + c)];
            }
        }
        acc
    });
    min_eigenpair(&img.hermitian_part()).expect("Hermitian by construction")
}

/// Positivity of an arbitrary Hermiticity-preserving map: minimizes the least
/// eigenvalue of `phi(lambda lambda*)` over the Bloch sphere.
pub fn map_positivity(h: &ChoiMatrix, budget: &SearchBudget) -> Result<MapPosVerdict> {
    let eff_tol = budget.tol * h.matrix().frobenius_norm().max(1.0);
    let mut starts: Vec<(f64, f64)> = Vec::new();
    let mut evaluations = 0;
    let mut best: Option<(f64, [C64; 2], Vec<C64>)> = None;
    if budget.grid {
        let thetas: Vec<f64> = (0..=63).map(|k| PI * k as f64 / 63.0).collect();
        let phis: Vec<f64> = (0..126).map(|k| 2.0 * PI * k as f64 / 126.0).collect();
        let points: Vec<(f64, f64)> = thetas.iter().flat_map(|&t| phis.iter().map(move |&p| (t, p))).collect();
        evaluations += points.len();
        let values = par::map_indexed(budget.execution, points.len(), |i| image_min(h, &bloch(points[i].0, points[i].1)).0);
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        starts.extend(order.iter().take(8).map(|&i| points[i]));
    }
    for i in 0..budget.restarts {
        let mut r = rng::stream(budget.seed, "map-positivity", i as u64);
        starts.push((r.random_range(0.0..PI), r.random_range(-PI..PI)));
    }
    let refined = par::map_indexed(budget.execution, starts.len(), |i| {
        let (t, p) = starts[i];
        compass_minimize(vec![t, p], &[0.0, -4.0 * PI], &[PI, 4.0 * PI], 0.1, budget.iterations, |x| {
            image_min(h, &bloch(x[0], x[1])).0
        })
    });
    for (x, _, count) in &refined {
        evaluations += count;
        let lambda = bloch(x[0], x[1]);
        let (v, eta) = image_min(h, &lambda);
        if best.as_ref().is_none_or(|b| v < b.0) {
            best = Some((v, lambda, eta));
        }
    }
    let (margin, lambda, eta) = best.expect("grid or restarts produce a candidate");
    let status = if margin < -eff_tol {
        VerdictStatus::ViolationFound
    } else if budget.grid {
        VerdictStatus::Certified
    } else {
        VerdictStatus::Inconclusive
    };
    Ok(Verdict { status, margin, witness: Some(MapWitness { lambda, eta, value: margin }), evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choi::{apply_map, RowVector};

    fn quick() -> SearchBudget {
        SearchBudget { restarts: 4, iterations: 200, ..SearchBudget::default() }
    }

    fn cp_blocks() -> ChoiBlocks {
        let y = RowVector::from_real(&[0.6, 0.0]);
        let u = y.gram();
        let b = &ComplexMatrix::identity(2) - &u;
        ChoiBlocks::unital(y, RowVector::zeros(2), b, ComplexMatrix::zeros(2, 2), u)
    }

    #[test]
    fn evaluation_matches_image_of_rank_one_input() {
        let blocks = cp_blocks();
        let h = blocks.assemble().unwrap();
        let (p, s) = boundary_point(0.7, 1.3);
        let e = prop11_evaluate(&blocks, p, s);
        let a = ComplexMatrix::from_vec(2, 2, vec![C64::new(p, 0.0), s, s.conj(), C64::new(1.0 - p, 0.0)]).unwrap();
        let img = apply_map(&h, &a).unwrap();
        let middle = img.submatrix(1, 1, 2, 2);
        assert!((crate::matkernel::min_eigenvalue(&middle).unwrap() - e.middle_min).abs() < 1e-12);
    }

    #[test]
    fn completely_positive_blocks_are_certified() {
        let v = positivity_prop11(&cp_blocks(), &quick()).unwrap();
        assert_eq!(v.status, VerdictStatus::Certified);
        assert!(v.margin > -1e-9);
    }

    #[test]
    fn inflated_rows_violate() {
        let mut blocks = cp_blocks();
        blocks.y = blocks.y.scale(C64::new(10.0, 0.0));
        blocks.z = RowVector::from_real(&[0.0, 3.0]);
        let v = positivity_prop11(&blocks, &quick()).unwrap();
        assert!(v.is_violation());
        let w = v.witness.unwrap();
        let e = prop11_evaluate(&blocks, w.p, w.s);
        assert!(e.objective() < -1e-9);
    }

    #[test]
    fn transpose_map_is_positive_but_swap_is_checked() {
        // Choi matrix of the transpose map on M_2: the swap operator.
        let mut h = ComplexMatrix::zeros(4, 4);
        h[(0, 0)] = C64::new(1.0, 0.0);
        h[(3, 3)] = C64::new(1.0, 0.0);
        h[(1, 2)] = C64::new(1.0, 0.0);
        h[(2, 1)] = C64::new(1.0, 0.0);
        let v = map_positivity(&ChoiMatrix::new(h).unwrap(), &quick()).unwrap();
        assert_eq!(v.status, VerdictStatus::Certified);
        assert!(v.margin > -1e-9);
    }

    #[test]
    fn non_positive_map_is_found() {
        let mut h = ComplexMatrix::identity(4);
        h[(0, 0)] = C64::new(-0.5, 0.0);
        let v = map_positivity(&ChoiMatrix::new(h).unwrap(), &quick()).unwrap();
        assert!(v.is_violation());
        assert!((v.margin + 0.5).abs() < 1e-8);
    }
}
