//! Seeded Monte Carlo power studies.
//!
//! Every trial owns an independent ChaCha8 stream derived from the master
//! seed and the trial coordinates `(scheme, n index, trial)`, so results do
//! not depend on how trials are scheduled across threads.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::adversary::{
    intercept_resend_state, lhv_bc_draw_from, lhv_bc_expectation, lhv_rm_draw, transformed_state,
    LhvModel,
};
use crate::correlations::{bc_set, rm_draw, BcMeasurementSet, BcSampler};
use crate::hypotest::{
    binom_tail, clt_power, Quantile, Scheme, SchemeConfig, SchemeKind, TestOutcome,
};
use crate::qstate::{singlet, werner_state, TwoQubitState};
use crate::{Error, Outcome, Result};

/// Default master seed used by the command line tool.
pub const DEFAULT_SEED: u64 = 7;

/// Default number of repeated tests per sample size.
pub const DEFAULT_TRIALS: u32 = 400;

/// Default test size.
pub const DEFAULT_ALPHA: f64 = 0.01;

/// What produces the measurement outcomes.
#[derive(Clone)]
pub enum Scenario {
    Singlet,
    /// Eve measures Bob's qubit in `cos ψ|0⟩ + e^{iβ} sin ψ|1⟩` and resends.
    InterceptResend {
        psi: f64,
        beta: f64,
    },
    /// Bell-diagonal state with singlet fidelity `1 − ε` and Φ⁺ fidelity `f`.
    Transformed {
        epsilon: f64,
        phi_plus: f64,
    },
    Werner {
        delta: f64,
    },
    /// A local hidden variable model in place of any quantum state.
    Lhv(Arc<dyn LhvModel>),
}

impl fmt::Debug for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scenario::Singlet => write!(f, "Singlet"),
            Scenario::InterceptResend { psi, beta } => {
                write!(f, "InterceptResend {{ psi: {psi}, beta: {beta} }}")
            }
            Scenario::Transformed { epsilon, phi_plus } => {
                write!(
                    f,
                    "Transformed {{ epsilon: {epsilon}, phi_plus: {phi_plus} }}"
                )
            }
            Scenario::Werner { delta } => write!(f, "Werner {{ delta: {delta} }}"),
            Scenario::Lhv(_) => write!(f, "Lhv(..)"),
        }
    }
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Singlet => "singlet",
            Scenario::InterceptResend { .. } => "intercept",
            Scenario::Transformed { .. } => "transform",
            Scenario::Werner { .. } => "werner",
            Scenario::Lhv(_) => "lhv",
        }
    }

    /// The two-qubit state, or `None` for LHV scenarios.
    pub fn state(&self) -> Result<Option<TwoQubitState>> {
        Ok(Some(match *self {
            Scenario::Singlet => singlet(),
            Scenario::InterceptResend { psi, beta } => intercept_resend_state(psi, beta),
            Scenario::Transformed { epsilon, phi_plus } => transformed_state(epsilon, phi_plus)?,
            Scenario::Werner { delta } => werner_state(delta)?,
            Scenario::Lhv(_) => return Ok(None),
        }))
    }

    /// Analytic `E[sample]` under `scheme`.
    pub fn expectation(&self, scheme: &Scheme) -> Result<f64> {
        scheme.validate()?;
        if let Scenario::Lhv(model) = self {
            let value = match *scheme {
                Scheme::Bc { n_param } => lhv_bc_expectation(model.as_ref(), n_param)?,
                Scheme::Rm { theta_sep } => model.rm_expectation(theta_sep),
            };
            return value.ok_or(Error::NoAnalyticExpectation(scheme.kind().label()));
        }
        let rho = self.state()?.expect("quantum scenario");
        scheme.expectation(&rho)
    }

    /// `P(sample = +1)` under `scheme`.
    pub fn success_probability(&self, scheme: &Scheme) -> Result<f64> {
        Ok(((1.0 + self.expectation(scheme)?) / 2.0).clamp(0.0, 1.0))
    }

    fn sampler(&self, scheme: &Scheme) -> Result<Sampler> {
        scheme.validate()?;
        Ok(match (self, *scheme) {
            (Scenario::Lhv(model), Scheme::Bc { n_param }) => {
                Sampler::LhvBc(Arc::clone(model), bc_set(n_param)?)
            }
            (Scenario::Lhv(model), Scheme::Rm { theta_sep }) => {
                Sampler::LhvRm(Arc::clone(model), theta_sep)
            }
            (_, Scheme::Bc { n_param }) => {
                let rho = self.state()?.expect("quantum scenario");
                Sampler::Bc(BcSampler::new(&rho, n_param)?)
            }
            (_, Scheme::Rm { theta_sep }) => Sampler::Rm(
                Box::new(self.state()?.expect("quantum scenario")),
                theta_sep,
            ),
        })
    }
}

enum Sampler {
    Bc(BcSampler),
    Rm(Box<TwoQubitState>, f64),
    LhvBc(Arc<dyn LhvModel>, BcMeasurementSet),
    LhvRm(Arc<dyn LhvModel>, f64),
}

impl Sampler {
    fn draw<R: Rng>(&self, rng: &mut R) -> Result<Outcome> {
        Ok(match self {
            Sampler::Bc(s) => s.draw(rng),
            Sampler::Rm(rho, theta) => rm_draw(rng, rho, *theta)?,
            Sampler::LhvBc(model, set) => lhv_bc_draw_from(rng, model.as_ref(), set),
            Sampler::LhvRm(model, theta) => lhv_rm_draw(rng, model.as_ref(), *theta),
        })
    }

    fn count_successes<R: Rng>(&self, rng: &mut R, n: u64) -> Result<u64> {
        (0..n).try_fold(0, |acc, _| Ok(acc + u64::from(self.draw(rng)? == 1)))
    }
}

/// Runs one test of `n` samples from a generator seeded with `seed`.
pub fn run_single_test(
    scenario: &Scenario,
    config: &SchemeConfig,
    seed: u64,
) -> Result<TestOutcome> {
    let sampler = scenario.sampler(&config.scheme)?;
    let quantile = config.quantile()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let successes = sampler.count_successes(&mut rng, config.n_samples)?;
    Ok(TestOutcome::from_count(
        successes,
        config.n_samples,
        quantile,
    ))
}

/// One point of a power curve.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerRecord {
    pub n: u64,
    pub scheme: SchemeKind,
    pub empirical_rejection: f64,
    /// `None` when the scenario has no closed-form success probability.
    pub exact_power: Option<f64>,
    pub asymptotic_power: Option<f64>,
    pub trials: u32,
    pub master_seed: u64,
}

impl PowerRecord {
    /// `4·√(P(1 − P)/trials)` around the exact power.
    pub fn noise_band(&self) -> Option<f64> {
        self.exact_power
            .map(|p| 4.0 * (p * (1.0 - p) / self.trials as f64).sqrt())
    }

    /// Whether the empirical rejection rate lies inside [`Self::noise_band`].
    pub fn within_band(&self) -> Option<bool> {
        let band = self.noise_band()?;
        Some((self.empirical_rejection - self.exact_power?).abs() <= band)
    }
}

fn stream_id(scheme: SchemeKind, n_index: usize, trial: u32) -> u64 {
    let tag = match scheme {
        SchemeKind::Bc => 1u64,
        SchemeKind::Rm => 2u64,
    };
    (tag << 56) | ((n_index as u64 & 0xff_ffff) << 32) | trial as u64
}

/// Generator for a single trial of a power study.
pub fn trial_rng(master_seed: u64, scheme: SchemeKind, n_index: usize, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream_id(scheme, n_index, trial));
    rng
}

/// Empirical, exact and CLT power of `scheme` against `scenario` at each
/// sample size in `n_grid`.
pub fn power_curve(
    scenario: &Scenario,
    scheme: &Scheme,
    alpha: f64,
    n_grid: &[u64],
    trials: u32,
    master_seed: u64,
) -> Result<Vec<PowerRecord>> {
    if trials == 0 {
        return Err(Error::domain("trials", 0.0, "trials ≥ 1"));
    }
    if n_grid.is_empty() {
        return Err(Error::domain("n_grid", 0.0, "non-empty grid"));
    }
    let sampler = scenario.sampler(scheme)?;
    let p_alt = match scenario.success_probability(scheme) {
        Ok(p) => Some(p),
        Err(Error::NoAnalyticExpectation(_)) => None,
        Err(e) => return Err(e),
    };
    let kind = scheme.kind();
    n_grid
        .iter()
        .enumerate()
        .map(|(n_index, &n)| {
            let config = SchemeConfig::new(*scheme, alpha, n)?;
            let Quantile { z, .. } = config.quantile()?;
            let rejected = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(master_seed, kind, n_index, t);
                    Ok(sampler.count_successes(&mut rng, n)? > z)
                })
                .collect::<Result<Vec<bool>>>()?;
            let rejections = rejected.iter().filter(|&&r| r).count();
            Ok(PowerRecord {
                n,
                scheme: kind,
                empirical_rejection: rejections as f64 / trials as f64,
                exact_power: p_alt.map(|p| binom_tail(n, z, p)),
                asymptotic_power: p_alt.map(|p| clt_power(n, z, p)),
                trials,
                master_seed,
            })
        })
        .collect()
}

/// `count` logarithmically spaced sample sizes from `lo` to `hi`, rounded
/// and deduplicated.
pub fn log_grid(lo: u64, hi: u64, count: usize) -> Vec<u64> {
    if count <= 1 || lo >= hi {
        return vec![lo];
    }
    let ratio = (hi as f64 / lo as f64).ln();
    let mut grid: Vec<u64> = (0..count)
        .map(|i| (lo as f64 * (ratio * i as f64 / (count - 1) as f64).exp()).round() as u64)
        .collect();
    grid.dedup();
    grid
}

/// Sixteen points from 10 to 5000.
pub fn default_n_grid() -> Vec<u64> {
    log_grid(10, 5000, 16)
}

/// Which test has the larger power, decided by `p` against `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Bc,
    Rm,
    Equal,
}

impl Verdict {
    pub const TOLERANCE: f64 = 1e-12;

    pub fn from_params(p: f64, q: f64) -> Self {
        if (p - q).abs() <= Self::TOLERANCE {
            Verdict::Equal
        } else if p > q {
            Verdict::Bc
        } else {
            Verdict::Rm
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Bc => "bc",
            Verdict::Rm => "rm",
            Verdict::Equal => "equal",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub scenario: Scenario,
    pub e_bc: f64,
    /// At `θ = π/2N`.
    pub e_rm: f64,
    pub p: f64,
    pub q: f64,
    pub verdict: Verdict,
}

/// Analytic expectations and the power verdict for each scenario.
pub fn scheme_comparison_table(scenarios: &[Scenario], n_param: u32) -> Result<Vec<ComparisonRow>> {
    let bc = Scheme::Bc { n_param };
    let rm = Scheme::rm_matched(n_param);
    bc.validate()?;
    scenarios
        .iter()
        .map(|s| {
            let e_bc = s.expectation(&bc)?;
            let e_rm = s.expectation(&rm)?;
            let (p, q) = ((1.0 + e_bc) / 2.0, (1.0 + e_rm) / 2.0);
            Ok(ComparisonRow {
                scenario: s.clone(),
                e_bc,
                e_rm,
                p,
                q,
                verdict: Verdict::from_params(p, q),
            })
        })
        .collect()
}
