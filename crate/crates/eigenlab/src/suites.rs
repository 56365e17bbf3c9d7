//! Seeded verification sweeps shared by the command-line tool and the
//! acceptance tests.
//!
//! Every suite draws its instances from a ChaCha stream seeded by the
//! caller, compares raw deviations against a [`Tolerances`] bundle, and
//! returns a serializable report with a single `pass` flag. The same seed
//! and tolerances always produce the same report, byte for byte.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cpsemigroup::{verify_absorbing, CpSemigroup, GeneratorSpec};
use crate::densop::{
    check_weyl, random_density, singular_list_check, DensityOperator, HermitianMatrix,
};
use crate::eigenlist::{tensor_square_report, EigenvalueList};
use crate::interaction::{
    uniform_pair_crosscheck, ChainInteractionModel, InteractionBoundReport, TrivialityWitness,
    UniformPairReport,
};
use crate::intertwiner::{
    verify_defect_bilinear, verify_defect_gram, verify_restriction_spectrum,
    verify_sandwich_spectrum, IntertwinerModel,
};
use crate::linalg::{ginibre, random_psd};
use crate::{tol, Error, Result};

/// Named tolerances a run can override; defaults mirror [`crate::tol`].
#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    /// Slack for trace-norm domination checks.
    pub weyl_slack: f64,
    /// l1 slack when two spectra must coincide.
    pub spectrum_gap: f64,
    /// Entrywise slack for operator identities.
    pub entrywise: f64,
    /// Slack for semigroup functional equations.
    pub semigroup_dev: f64,
    /// Trace-norm slack for invariance of a stationary state.
    pub invariance: f64,
    /// Final trace distance an absorbing sweep must reach.
    pub absorb_final: f64,
    /// Jitter allowed in monotone sequences.
    pub monotone_jitter: f64,
    /// Slack for moment comparisons of eigenvalue lists.
    pub moment_gap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            weyl_slack: tol::WEYL_SLACK,
            spectrum_gap: tol::SPECTRUM_GAP,
            entrywise: tol::ENTRYWISE,
            semigroup_dev: tol::SEMIGROUP_DEV,
            invariance: tol::INVARIANCE,
            absorb_final: tol::ABSORB_FINAL,
            monotone_jitter: tol::MONOTONE_JITTER,
            moment_gap: 1e-10,
        }
    }
}

impl Tolerances {
    /// Every overridable name, in the order reports echo them.
    pub const NAMES: [&'static str; 8] = [
        "weyl_slack",
        "spectrum_gap",
        "entrywise",
        "semigroup_dev",
        "invariance",
        "absorb_final",
        "monotone_jitter",
        "moment_gap",
    ];

    /// Override one tolerance by name; unknown names are rejected.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::BadArgs {
                reason: format!("tolerance {name} must be a nonnegative finite number"),
            });
        }
        match name {
            "weyl_slack" => self.weyl_slack = value,
            "spectrum_gap" => self.spectrum_gap = value,
            "entrywise" => self.entrywise = value,
            "semigroup_dev" => self.semigroup_dev = value,
            "invariance" => self.invariance = value,
            "absorb_final" => self.absorb_final = value,
            "monotone_jitter" => self.monotone_jitter = value,
            "moment_gap" => self.moment_gap = value,
            _ => {
                return Err(Error::BadArgs {
                    reason: format!(
                        "unknown tolerance {name:?}; known names: {}",
                        Self::NAMES.join(", ")
                    ),
                })
            }
        }
        Ok(())
    }
}

/// Trace-norm domination sweep over random PSD pairs.
#[derive(Debug, Clone, Serialize)]
pub struct WeylSuiteReport {
    /// Number of pairs drawn.
    pub trials: usize,
    /// Largest matrix dimension drawn.
    pub max_dim: usize,
    /// Per-trial `l1(spectra) - trace_norm` margins (negative is good).
    pub margins: Vec<f64>,
    /// The largest margin seen.
    pub worst_margin: f64,
    /// Trials whose margin exceeded the slack.
    pub violations: usize,
    /// Whether no trial violated the bound.
    pub pass: bool,
}

/// Spectra distance between lists never exceeds trace-norm distance.
pub fn weyl_suite(trials: usize, seed: u64, tols: &Tolerances) -> Result<WeylSuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_dim = 16;
    let mut margins = Vec::with_capacity(trials);
    for _ in 0..trials {
        let dim = rng.gen_range(1..=max_dim);
        let a = HermitianMatrix::new(random_psd(&mut rng, dim))?;
        let b = HermitianMatrix::new(random_psd(&mut rng, dim))?;
        let report = check_weyl(&a, &b)?;
        margins.push(report.lhs - report.rhs);
    }
    let worst_margin = margins.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let violations = margins.iter().filter(|&&m| m > tols.weyl_slack).count();
    Ok(WeylSuiteReport {
        trials,
        max_dim,
        margins,
        worst_margin,
        violations,
        pass: violations == 0,
    })
}

/// Correlation-operator spectrum sweep.
#[derive(Debug, Clone, Serialize)]
pub struct RestrictionSuiteReport {
    /// Number of `(k, d, rho)` instances drawn.
    pub instances: usize,
    /// Per-instance l1 gap between the two spectra.
    pub distances: Vec<f64>,
    /// The largest gap seen.
    pub worst_distance: f64,
    /// Instances whose gap exceeded the tolerance.
    pub violations: usize,
    /// Whether no instance violated.
    pub pass: bool,
}

/// The correlation operator of a random state carries exactly the
/// spectrum of the state's restriction to the multiplicity factor.
pub fn restriction_suite(
    instances: usize,
    seed: u64,
    tols: &Tolerances,
) -> Result<RestrictionSuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut distances = Vec::with_capacity(instances);
    for _ in 0..instances {
        let k = rng.gen_range(1..=6);
        let d = rng.gen_range(1..=6);
        let model = IntertwinerModel::new(k, d)?;
        let rho = random_density(k * d, None, rng.gen())?;
        let report = verify_restriction_spectrum(&model, &rho)?;
        distances.push(report.distance);
    }
    let worst_distance = distances.iter().cloned().fold(0.0, f64::max);
    let violations = distances.iter().filter(|&&g| g > tols.spectrum_gap).count();
    Ok(RestrictionSuiteReport {
        instances,
        distances,
        worst_distance,
        violations,
        pass: violations == 0,
    })
}

/// Defect-operator identity sweep.
#[derive(Debug, Clone, Serialize)]
pub struct DefectSuiteReport {
    /// Number of `(k, d, rho)` instances drawn.
    pub instances: usize,
    /// Random vector quadruples sampled per instance.
    pub quadruples_per_instance: usize,
    /// Largest entrywise Gram deviation seen.
    pub worst_gram: f64,
    /// Largest bilinear-identity deviation seen.
    pub worst_bilinear: f64,
    /// Instances where either deviation exceeded the tolerance.
    pub violations: usize,
    /// Whether no instance violated.
    pub pass: bool,
}

/// The defect operator's Gram matrix reproduces the correlation operator,
/// and its cogram satisfies the sampled bilinear identity.
pub fn defect_suite(
    instances: usize,
    quadruples: usize,
    seed: u64,
    tols: &Tolerances,
) -> Result<DefectSuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_gram: f64 = 0.0;
    let mut worst_bilinear: f64 = 0.0;
    let mut violations = 0;
    for _ in 0..instances {
        let k = rng.gen_range(1..=6);
        let d = rng.gen_range(1..=6);
        let model = IntertwinerModel::new(k, d)?;
        let rho = random_density(k * d, None, rng.gen())?;
        let gram = verify_defect_gram(&model, &rho)?;
        let bilinear = verify_defect_bilinear(&model, &rho, quadruples, rng.gen())?;
        worst_gram = worst_gram.max(gram.max_deviation);
        worst_bilinear = worst_bilinear.max(bilinear.max_deviation);
        if gram.max_deviation > tols.entrywise || bilinear.max_deviation > tols.entrywise {
            violations += 1;
        }
    }
    Ok(DefectSuiteReport {
        instances,
        quadruples_per_instance: quadruples,
        worst_gram,
        worst_bilinear,
        violations,
        pass: violations == 0,
    })
}

/// Sandwich-spectrum and singular-list sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichSuiteReport {
    /// Number of instances drawn.
    pub instances: usize,
    /// Largest gap between sandwich and tensor spectra.
    pub worst_sandwich: f64,
    /// Largest gap between Gram and cogram spectra.
    pub worst_singular: f64,
    /// Instances where either gap exceeded the tolerance.
    pub violations: usize,
    /// Whether no instance violated.
    pub pass: bool,
}

/// `Lambda(T -> A T B)` equals `Lambda(A) (x) Lambda(B)`, and `L^* L`
/// shares its nonzero spectrum with `L L^*`, over random instances.
pub fn sandwich_suite(
    instances: usize,
    seed: u64,
    tols: &Tolerances,
) -> Result<SandwichSuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_sandwich: f64 = 0.0;
    let mut worst_singular: f64 = 0.0;
    let mut violations = 0;
    for _ in 0..instances {
        let dim = rng.gen_range(1..=6);
        let a = HermitianMatrix::new(random_psd(&mut rng, dim))?;
        let b = HermitianMatrix::new(random_psd(&mut rng, dim))?;
        let sandwich = verify_sandwich_spectrum(&a, &b)?;
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let l = ginibre(&mut rng, rows, cols);
        let singular = singular_list_check(&l)?;
        let singular_gap = singular.gram.l1_distance(&singular.cogram);
        worst_sandwich = worst_sandwich.max(sandwich.distance);
        worst_singular = worst_singular.max(singular_gap);
        if sandwich.distance > tols.spectrum_gap || singular_gap > tols.spectrum_gap {
            violations += 1;
        }
    }
    Ok(SandwichSuiteReport {
        instances,
        worst_sandwich,
        worst_singular,
        violations,
        pass: violations == 0,
    })
}

/// Detailed-balance semigroup sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SemigroupSuiteReport {
    /// The generator under test.
    pub generator: GeneratorSpec,
    /// Times at which invariance of the stationary state is checked.
    pub invariance_grid: Vec<f64>,
    /// Largest motion of the stationary state across the grid.
    pub worst_invariance: f64,
    /// Largest deviation of `phi_s phi_t` from `phi_{s+t}`.
    pub worst_semigroup: f64,
    /// Largest duality gap between the two pictures.
    pub worst_duality: f64,
    /// Distances of each random initial state to the target over time.
    pub absorbing: crate::cpsemigroup::AbsorbingReport,
    /// Largest final distance across trials.
    pub worst_final: f64,
    /// Whether every check passed.
    pub pass: bool,
}

/// Fixed two-level detailed-balance semigroup: the stationary state stays
/// put, the semigroup law holds, both pictures agree, and random states
/// are absorbed.
pub fn semigroup_suite(
    trials: usize,
    seed: u64,
    tols: &Tolerances,
) -> Result<SemigroupSuiteReport> {
    let spec = GeneratorSpec {
        dim: 2,
        omega: vec![0.75, 0.25],
        rate_scale: 1.0,
        dephasing: 0.5,
    };
    let gen = spec.build()?;
    let sg = CpSemigroup::new(gen);
    let target = DensityOperator::diagonal(&[0.75, 0.25])?;
    let invariance_grid = vec![0.1, 0.5, 1.0, 2.0, 5.0, 10.0];
    let mut worst_invariance: f64 = 0.0;
    for &t in &invariance_grid {
        let moved = sg.evolve_state(&target, t)?;
        worst_invariance = worst_invariance.max(moved.distance(&target)?);
    }
    let pairs = [(0.1, 0.4), (0.5, 0.5), (1.0, 2.0), (2.5, 3.0), (5.0, 5.0)];
    let worst_semigroup = sg.semigroup_property_deviation(&pairs)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_duality: f64 = 0.0;
    for _ in 0..5 {
        let rho = random_density(2, None, rng.gen())?;
        let x = HermitianMatrix::new(crate::linalg::random_hermitian(&mut rng, 2))?;
        let t = rng.gen_range(0.1..5.0);
        worst_duality = worst_duality.max(sg.duality_deviation(&rho, &x, t)?);
    }
    let absorbing = verify_absorbing(&sg, &target, trials, &[1.0, 5.0, 10.0, 25.0, 50.0], seed)?;
    let worst_final = absorbing
        .trials
        .iter()
        .map(|r| r.final_distance)
        .fold(0.0, f64::max);
    let pass = worst_invariance <= tols.invariance
        && worst_semigroup <= tols.semigroup_dev
        && worst_duality <= tols.semigroup_dev
        && worst_final <= tols.absorb_final;
    Ok(SemigroupSuiteReport {
        generator: spec,
        invariance_grid,
        worst_invariance,
        worst_semigroup,
        worst_duality,
        absorbing,
        worst_final,
        pass,
    })
}

/// Chain interaction-bound sweep.
#[derive(Debug, Clone, Serialize)]
pub struct InteractionSuiteReport {
    /// The windowed bound report.
    pub bound: InteractionBoundReport,
    /// Closed-form crosscheck when the pair is a uniform `(p, q)`.
    pub crosscheck: Option<UniformPairReport>,
    /// Spectral triviality verdict for the pair.
    pub witness: TrivialityWitness,
    /// Whether monotonicity, floors, the supremum inequality, and the
    /// crosscheck all hold.
    pub pass: bool,
}

/// Run the interaction bound on a model, recomputing the pass flags
/// against the supplied tolerances.
pub fn interaction_suite(
    model: &ChainInteractionModel,
    n_max: usize,
    pq: Option<(usize, usize)>,
    tols: &Tolerances,
) -> Result<InteractionSuiteReport> {
    let bound = model.verify_interaction_bound(n_max)?;
    let monotone = bound
        .rows
        .windows(2)
        .all(|w| w[1].lhs >= w[0].lhs - tols.monotone_jitter);
    let floors = bound
        .rows
        .iter()
        .all(|r| r.lhs >= r.floor - tols.weyl_slack);
    let sup = bound
        .rows
        .last()
        .map(|r| r.lhs.max(bound.certified_limit))
        .unwrap_or(bound.certified_limit);
    let at_sup = sup >= bound.rhs - tols.weyl_slack;
    let crosscheck = match pq {
        Some((p, q)) => Some(uniform_pair_crosscheck(p, q)?),
        None => None,
    };
    let witness = model.triviality_witness()?;
    let pass = monotone && floors && at_sup && crosscheck.as_ref().is_none_or(|c| c.matches);
    Ok(InteractionSuiteReport {
        bound,
        crosscheck,
        witness,
        pass,
    })
}

/// Tensor-square separation sweep.
#[derive(Debug, Clone, Serialize)]
pub struct InjectivitySuiteReport {
    /// Number of random lists drawn.
    pub trials: usize,
    /// Number of ordered pairs compared.
    pub pairs: usize,
    /// Pairs where tensor-square equality disagreed with list equality.
    pub separation_failures: usize,
    /// Largest deviation of tensor moments from products of moments.
    pub worst_moment_multiplicativity: f64,
    /// Whether separation held on every pair within the moment slack.
    pub pass: bool,
}

/// Distinct unit-sum lists have distinct tensor squares, witnessed
/// through multiplicative moments.
pub fn injectivity_suite(
    trials: usize,
    seed: u64,
    tols: &Tolerances,
) -> Result<InjectivitySuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lists = Vec::with_capacity(trials);
    for _ in 0..trials {
        let support = rng.gen_range(1..=6);
        let mut v: Vec<f64> = (0..support).map(|_| rng.gen_range(0.05..1.0)).collect();
        let sum: f64 = v.iter().sum();
        v.iter_mut().for_each(|x| *x /= sum);
        v.sort_by(|x, y| y.partial_cmp(x).unwrap());
        lists.push(EigenvalueList::from_values(&v)?);
    }
    let mut pairs = 0;
    let mut separation_failures = 0;
    let mut worst_mult: f64 = 0.0;
    for i in 0..lists.len() {
        for j in (i + 1)..lists.len() {
            pairs += 1;
            let a = &lists[i];
            let b = &lists[j];
            let report = tensor_square_report(a, b)?;
            if report.squares_equal != report.lists_equal {
                separation_failures += 1;
            }
            let product = a.tensor(b)?;
            for n in 1..=4u32 {
                let dev = (product.moment(n) - a.moment(n) * b.moment(n)).abs();
                worst_mult = worst_mult.max(dev);
            }
        }
    }
    let pass = separation_failures == 0 && worst_mult <= tols.moment_gap;
    Ok(InjectivitySuiteReport {
        trials,
        pairs,
        separation_failures,
        worst_moment_multiplicativity: worst_mult,
        pass,
    })
}

/// The named sweeps the verification front end can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    /// Trace-norm domination of spectra distance.
    Weyl,
    /// Correlation-operator restriction spectrum.
    Restriction,
    /// Defect Gram and bilinear identities.
    Defect,
    /// Sandwich spectra and singular lists.
    Sandwich,
    /// Detailed-balance semigroup behavior.
    Semigroup,
    /// Chain interaction bound.
    InteractionBound,
}

impl SuiteKind {
    /// Parse a command-line suite token.
    pub fn from_token(token: &str) -> Option<Self> {
        match token {
            "weyl" => Some(Self::Weyl),
            "lemma43" => Some(Self::Restriction),
            "lemma46" => Some(Self::Defect),
            "lemma48" => Some(Self::Sandwich),
            "semigroup" => Some(Self::Semigroup),
            "theoremb" => Some(Self::InteractionBound),
            _ => None,
        }
    }

    /// The command-line token for this suite.
    pub fn token(&self) -> &'static str {
        match self {
            Self::Weyl => "weyl",
            Self::Restriction => "lemma43",
            Self::Defect => "lemma46",
            Self::Sandwich => "lemma48",
            Self::Semigroup => "semigroup",
            Self::InteractionBound => "theoremb",
        }
    }

    /// All tokens, for diagnostics.
    pub const TOKENS: [&'static str; 6] = [
        "weyl",
        "lemma43",
        "lemma46",
        "lemma48",
        "semigroup",
        "theoremb",
    ];

    /// Trial count used when the caller does not override it.
    pub fn default_trials(&self) -> usize {
        match self {
            Self::Weyl => 1000,
            Self::Restriction => 200,
            Self::Defect => 200,
            Self::Sandwich => 200,
            Self::Semigroup => 20,
            Self::InteractionBound => 5,
        }
    }
}

/// A finished suite: its token, overall verdict, and serialized report.
#[derive(Debug, Clone)]
pub struct SuiteRun {
    /// The suite token.
    pub suite: &'static str,
    /// Overall verdict.
    pub pass: bool,
    /// The full report as a JSON value.
    pub results: serde_json::Value,
}

fn to_value<T: Serialize>(pass: bool, suite: &'static str, report: &T) -> SuiteRun {
    SuiteRun {
        suite,
        pass,
        results: serde_json::to_value(report).expect("suite reports serialize"),
    }
}

/// Run one suite with `trials` instances (the suite default when `None`).
///
/// For the interaction suite `trials` is the maximum window half-width.
pub fn run_suite(
    kind: SuiteKind,
    trials: Option<usize>,
    seed: u64,
    tols: &Tolerances,
) -> Result<SuiteRun> {
    let n = trials.unwrap_or_else(|| kind.default_trials());
    match kind {
        SuiteKind::Weyl => {
            let r = weyl_suite(n, seed, tols)?;
            Ok(to_value(r.pass, kind.token(), &r))
        }
        SuiteKind::Restriction => {
            let r = restriction_suite(n, seed, tols)?;
            Ok(to_value(r.pass, kind.token(), &r))
        }
        SuiteKind::Defect => {
            let r = defect_suite(n, 100, seed, tols)?;
            Ok(to_value(r.pass, kind.token(), &r))
        }
        SuiteKind::Sandwich => {
            let r = sandwich_suite(n, seed, tols)?;
            Ok(to_value(r.pass, kind.token(), &r))
        }
        SuiteKind::Semigroup => {
            let r = semigroup_suite(n, seed, tols)?;
            Ok(to_value(r.pass, kind.token(), &r))
        }
        SuiteKind::InteractionBound => {
            let model = ChainInteractionModel::diagonal(
                2,
                &EigenvalueList::uniform(1),
                &EigenvalueList::uniform(2),
            )?;
            let r = interaction_suite(&model, n, Some((1, 2)), tols)?;
            Ok(to_value(r.pass, kind.token(), &r))
        }
    }
}
