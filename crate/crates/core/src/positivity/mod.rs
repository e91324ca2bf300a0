//! Positivity and block-positivity criteria.
//!
//! Searches report a [`Verdict`]: a violation is exact evidence (the witness
//! reproduces a negative value when plugged back in); `Certified` only means
//! that neither the deterministic grid nor any restart found one.

mod criteria;
mod maps;
mod sphere;

use serde::{Deserialize, Serialize};

use crate::par::Execution;
use crate::rng::DEFAULT_SEED;
use crate::tol;

pub use criteria::{
    block_positive_equiv_form, check_prop3, conditions_i_iii, face_membership, prop12_check, prop12_matrix,
    thm7_inequality, Choi22Scalars, ConditionsReport, FaceReport, Prop3Report, Relation, Thm7Report,
};
pub use maps::{
    map_positivity, positivity_prop11, prop11_evaluate, MapWitness, Prop11Condition, Prop11Evaluation,
    Prop11Witness,
};
pub use sphere::{block_positive_2x2, block_positive_value, BlockPosWitness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Certified,
    ViolationFound,
    Inconclusive,
}

/// Outcome of a positivity search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict<W> {
    pub status: VerdictStatus,
    /// Smallest objective value seen.
    pub margin: f64,
    pub witness: Option<W>,
    pub evaluations: usize,
}

impl<W> Verdict<W> {
    pub fn is_certified(&self) -> bool {
        self.status == VerdictStatus::Certified
    }

    pub fn is_violation(&self) -> bool {
        self.status == VerdictStatus::ViolationFound
    }
}

pub type BlockPosVerdict = Verdict<BlockPosWitness>;
pub type Prop11Verdict = Verdict<Prop11Witness>;
pub type MapPosVerdict = Verdict<MapWitness>;

/// Knobs shared by the multistart searches.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub restarts: usize,
    pub iterations: usize,
    /// Values below `-tol` (scaled per search) count as violations.
    pub tol: f64,
    /// Run the deterministic grid where one is defined.
    pub grid: bool,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            restarts: 64,
            iterations: 500,
            tol: tol::SEARCH_TOL,
            grid: true,
            seed: DEFAULT_SEED,
            execution: Execution::Parallel,
        }
    }
}

impl SearchBudget {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

/// Derivative-free compass search on a box; returns the best point and value.
pub(crate) fn compass_minimize(
    mut x: Vec<f64>,
    lower: &[f64],
    upper: &[f64],
    initial_step: f64,
    max_iters: usize,
    f: impl Fn(&[f64]) -> f64,
) -> (Vec<f64>, f64, usize) {
    let mut fx = f(&x);
    let mut step = initial_step;
    let mut evals = 1;
    let mut iters = 0;
    while step > 1e-10 && iters < max_iters {
        iters += 1;
        let mut improved = false;
        for k in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut y = x.clone();
                y[k] = (y[k] + dir * step).clamp(lower[k], upper[k]);
                if y[k] == x[k] {
                    continue;
                }
                let fy = f(&y);
                evals += 1;
                if fy < fx {
                    x = y;
                    fx = fy;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, fx, evals)
}
