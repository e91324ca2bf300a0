//! One-shot classification of a Choi matrix.
//!
//! Runs the positivity test suited to the input (the `(p, q, s)` criterion
//! for unital face-form maps, a Bloch-sphere search otherwise), complete
//! (co)positivity, decomposability with a certificate or a PPT witness, the
//! structural relations for face-form maps, and the equality-case analysis.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::choi::{extract_blocks, ChoiBlocks, ChoiMatrix};
use crate::cpdecomp::{
    certify_split, decompose, is_completely_copositive, is_completely_positive, witness_search, DecomposeOptions,
    DecompositionCertificate, DecompositionOutcome, WitnessCertificate, WitnessOptions, WitnessOutcome,
};
use crate::error::Result;
use crate::extremal::{
    canonicalize, embed_direction, equality_case_detect, face_intersection_check, prop13_check, prop14_check,
    CanonicalForm, EqualityReport, FaceIntersectionReport, Prop13Report, Prop14Report,
};
use crate::io::input_digest;
use crate::matkernel::{ComplexMatrix, PsdVerdict};
use crate::positivity::{
    check_prop3, map_positivity, positivity_prop11, thm7_inequality, MapWitness, Prop11Witness, Prop3Report,
    SearchBudget, Thm7Report, VerdictStatus,
};
use crate::rng::DEFAULT_SEED;
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decomposable {
    Yes,
    /// Not decomposable, certified by a PPT witness.
    NoWitness,
    /// Neither a decomposition nor a witness was found within the budget.
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositivityMethod {
    /// Unital face form: the `(p, q, s)` criterion.
    FaceForm,
    /// Generic input: minimum of `phi(P_lambda)` over the Bloch sphere.
    BlochSphere,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityFlag {
    pub status: VerdictStatus,
    pub margin: f64,
    pub method: PositivityMethod,
    pub evaluations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Flags {
    pub positive: PositivityFlag,
    pub cp: bool,
    pub ccp: bool,
    pub decomposable: Decomposable,
}

/// Evidence behind the flags.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Certificates {
    pub cp: Option<PsdVerdict>,
    pub ccp: Option<PsdVerdict>,
    pub decomposition: Option<DecompositionCertificate>,
    pub witness: Option<WitnessCertificate>,
    pub face_form_violation: Option<Prop11Witness>,
    pub map_violation: Option<MapWitness>,
    /// Search effort spent when the decomposability verdict is unknown.
    pub exhausted_budget: Option<ExhaustedBudget>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExhaustedBudget {
    pub decompose_iterations: usize,
    pub decompose_residual: f64,
    pub witness_restarts: usize,
    pub witness_best_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EqualityCaseAnalysis {
    pub detect: EqualityReport,
    pub prop13: Option<Prop13Report>,
    pub prop14: Option<Prop14Report>,
    pub canonical: Option<CanonicalForm>,
    pub canonical_error: Option<String>,
    pub face_intersection: Option<FaceIntersectionReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub input_digest: String,
    /// `(2, n+1)`: maps `M_2 -> M_{n+1}`.
    pub shape: (usize, usize),
    pub seed: u64,
    pub face_form: bool,
    pub unital_face_form: bool,
    pub flags: Flags,
    pub prop3: Option<Prop3Report>,
    pub thm7: Option<Thm7Report>,
    pub equality_case: bool,
    pub equality: Option<EqualityCaseAnalysis>,
    pub certificates: Certificates,
    /// Wall-clock time per stage; the only nondeterministic field.
    pub timings: Vec<StageTiming>,
}

impl ClassificationReport {
    /// The report with timings removed, for determinism comparisons.
    pub fn without_timings(&self) -> Self {
        Self { timings: Vec::new(), ..self.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub seed: u64,
    pub budget: SearchBudget,
    pub decompose: DecomposeOptions,
    pub witness: WitnessOptions,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self::with_seed(DEFAULT_SEED)
    }
}

impl ClassifyOptions {
    /// Default budgets with every stochastic stage driven by `seed`.
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            budget: SearchBudget::default().with_seed(seed),
            decompose: DecomposeOptions::default(),
            witness: WitnessOptions { seed, ..WitnessOptions::default() },
        }
    }
}

struct Stopwatch(Vec<StageTiming>);

impl Stopwatch {
    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.0.push(StageTiming { stage: stage.into(), seconds: start.elapsed().as_secs_f64() });
        out
    }
}

fn unital_blocks(h: &ChoiMatrix) -> Result<Option<ChoiBlocks>> {
    match extract_blocks(h) {
        Ok(b) if b.ensure_unital_face_form().is_ok() => Ok(Some(b)),
        Ok(_) | Err(crate::Error::NotInFaceForm { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn equality_analysis(
    h: &ChoiMatrix,
    blocks: &ChoiBlocks,
    positive: bool,
) -> Result<(bool, Option<EqualityCaseAnalysis>)> {
    let detect = match equality_case_detect(blocks, tol::EQUALITY_TOL * blocks.u.frobenius_norm().max(1.0)) {
        Ok(d) => d,
        Err(crate::Error::NotPsd { .. }) => return Ok((false, None)),
        Err(e) => return Err(e),
    };
    if !detect.equality {
        return Ok((false, Some(EqualityCaseAnalysis {
            detect,
            prop13: None,
            prop14: None,
            canonical: None,
            canonical_error: None,
            face_intersection: None,
        })));
    }
    let prop13 = prop13_check(blocks);
    let prop14 = prop14_check(blocks)?;
    let (canonical, canonical_error) = if positive || prop13.dependent {
        match canonicalize(blocks) {
            Ok(c) => (Some(c), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, Some("Y and Z are independent and the map is not certified positive".into()))
    };
    let face_intersection = match &prop13.eta0 {
        Some(eta) => Some(face_intersection_check(h, &embed_direction(eta))?),
        None => None,
    };
    Ok((true, Some(EqualityCaseAnalysis {
        detect,
        prop13: Some(prop13),
        prop14: Some(prop14),
        canonical,
        canonical_error,
        face_intersection,
    })))
}

/// Classifies the map with Choi matrix `h`.
pub fn classify(h: &ChoiMatrix, options: &ClassifyOptions) -> Result<ClassificationReport> {
    let mut clock = Stopwatch(Vec::new());
    let mut certs = Certificates::default();
    let face_form = extract_blocks(h).is_ok();
    let blocks = unital_blocks(h)?;

    let positive = clock.time("positivity", || -> Result<PositivityFlag> {
        Ok(match &blocks {
            Some(b) => {
                let v = positivity_prop11(b, &options.budget)?;
                certs.face_form_violation = v.witness.clone();
                PositivityFlag {
                    status: v.status,
                    margin: v.margin,
                    method: PositivityMethod::FaceForm,
                    evaluations: v.evaluations,
                }
            }
            None => {
                let v = map_positivity(h, &options.budget)?;
                certs.map_violation = v.witness.clone();
                PositivityFlag {
                    status: v.status,
                    margin: v.margin,
                    method: PositivityMethod::BlochSphere,
                    evaluations: v.evaluations,
                }
            }
        })
    })?;

    let (cp, ccp) = clock.time("complete positivity", || -> Result<(PsdVerdict, PsdVerdict)> {
        Ok((is_completely_positive(h)?, is_completely_copositive(h)?))
    })?;
    let size = h.matrix().rows();
    let decomposable = clock.time("decomposability", || -> Result<Decomposable> {
        if cp.is_psd() {
            certs.decomposition = Some(certify_split(h, h.matrix().clone(), ComplexMatrix::zeros(size, size))?);
            return Ok(Decomposable::Yes);
        }
        if ccp.is_psd() {
            certs.decomposition = Some(certify_split(h, ComplexMatrix::zeros(size, size), h.matrix().clone())?);
            return Ok(Decomposable::Yes);
        }
        let (iterations, residual) = match decompose(h, &options.decompose)? {
            DecompositionOutcome::Decomposed(cert) => {
                certs.decomposition = Some(cert);
                return Ok(Decomposable::Yes);
            }
            DecompositionOutcome::NotDecomposed { iterations, residual, .. } => (iterations, residual),
        };
        match witness_search(h, &options.witness)? {
            WitnessOutcome::Witness(w) => {
                certs.witness = Some(w);
                Ok(Decomposable::NoWitness)
            }
            WitnessOutcome::NoneFound { best_value } => {
                certs.exhausted_budget = Some(ExhaustedBudget {
                    decompose_iterations: iterations,
                    decompose_residual: residual,
                    witness_restarts: options.witness.restarts,
                    witness_best_value: best_value,
                });
                Ok(Decomposable::Unknown)
            }
        }
    })?;
    certs.cp = Some(cp.clone());
    certs.ccp = Some(ccp.clone());

    let (prop3, thm7, equality_case, equality) = clock.time("structure", || -> Result<_> {
        let Some(b) = &blocks else {
            let prop3 = match extract_blocks(h) {
                Ok(b) => Some(check_prop3(&b, &options.budget)),
                Err(_) => None,
            };
            return Ok((prop3, None, false, None));
        };
        let prop3 = Some(check_prop3(b, &options.budget));
        let thm7 = thm7_inequality(b).ok();
        let (eq, analysis) = equality_analysis(h, b, positive.status == VerdictStatus::Certified)?;
        Ok((prop3, thm7, eq, analysis))
    })?;

    Ok(ClassificationReport {
        input_digest: input_digest(h.matrix()),
        shape: (2, h.dim()),
        seed: options.seed,
        face_form,
        unital_face_form: blocks.is_some(),
        flags: Flags { positive, cp: cp.is_psd(), ccp: ccp.is_psd(), decomposable },
        prop3,
        thm7,
        equality_case,
        equality,
        certificates: certs,
        timings: clock.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::{equality_case_fixture, prop14_fixture, Prop14Verdict};
    use crate::rng;

    fn quick() -> ClassifyOptions {
        let mut o = ClassifyOptions::with_seed(9);
        o.budget.restarts = 8;
        o.decompose.max_iters = 2000;
        o.witness.restarts = 4;
        o
    }

    #[test]
    fn psd_input_is_cp_and_decomposable_with_zero_copositive_part() {
        let mut r = rng::stream(9, "report-test", 0);
        let h = ChoiMatrix::new(rng::psd(&mut r, 6, 6)).unwrap();
        let rep = classify(&h, &quick()).unwrap();
        assert!(rep.flags.cp);
        assert_eq!(rep.flags.decomposable, Decomposable::Yes);
        let cert = rep.certificates.decomposition.unwrap();
        assert_eq!(cert.h2.frobenius_norm(), 0.0);
        assert_eq!(rep.flags.positive.method, PositivityMethod::BlochSphere);
        assert_eq!(rep.flags.positive.status, VerdictStatus::Certified);
    }

    #[test]
    fn equality_fixture_gets_a_canonical_form() {
        let fx = equality_case_fixture(2, 9, 0, &quick().budget).unwrap();
        let rep = classify(&fx.blocks.assemble().unwrap(), &quick()).unwrap();
        assert!(rep.unital_face_form && rep.equality_case);
        let eq = rep.equality.unwrap();
        assert!(eq.canonical.is_some(), "{:?}", eq.canonical_error);
        assert!(eq.prop13.unwrap().dependent);
        assert!(eq.face_intersection.unwrap().holds);
    }

    #[test]
    fn prop14_fixture_is_cp() {
        let b = prop14_fixture(2, Prop14Verdict::Cp, 9, 0).unwrap();
        let rep = classify(&b.assemble().unwrap(), &quick()).unwrap();
        assert!(rep.flags.cp && !rep.flags.ccp);
        assert_eq!(rep.equality.unwrap().prop14.unwrap().verdict, Prop14Verdict::Cp);
    }

    #[test]
    fn reports_are_deterministic_for_a_seed() {
        let mut r = rng::stream(9, "report-test", 1);
        let h = ChoiMatrix::new(rng::hermitian(&mut r, 4)).unwrap();
        let a = classify(&h, &quick()).unwrap().without_timings();
        let b = classify(&h, &quick()).unwrap().without_timings();
        assert_eq!(a, b);
    }
}
