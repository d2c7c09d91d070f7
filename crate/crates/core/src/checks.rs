//! Oracle cross-checks: each closed form against an independent route.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::correlations::{
    bc_expectation, bc_expectation_by_summation, bc_set, rm_expectation, rm_expectation_numeric,
    Resolution,
};
use crate::qstate::{
    apply_local, haar_su2, random_density_matrix, singlet, twirl_analytic, TwoQubitState,
};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    /// Largest observed disagreement.
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(name: &'static str, deviation: f64, tolerance: f64) -> Self {
        CheckResult {
            name,
            deviation,
            tolerance,
            passed: deviation <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub resolution: Resolution,
    pub seed: u64,
    /// Added to every closed-form value before comparison. Zero in normal
    /// use; nonzero to confirm that the checks can fail.
    pub perturbation: f64,
    pub twirl_draws: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            resolution: Resolution::default(),
            seed: crate::simlab::DEFAULT_SEED,
            perturbation: 0.0,
            twirl_draws: 10_000,
        }
    }
}

fn random_states(rng: &mut ChaCha8Rng, count: usize) -> Vec<TwoQubitState> {
    (0..count)
        .map(|i| random_density_matrix(rng, 1 + i % 4))
        .collect()
}

/// Closed-form `E[Ĉ]` against the explicit sum over the `2N` pairs.
pub fn check_bc_closed_form(config: &VerifyConfig) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut worst: f64 = 0.0;
    for rho in random_states(&mut rng, 100) {
        for n in 2..=8 {
            let closed = bc_expectation(&rho, n)? + config.perturbation;
            let summed = bc_expectation_by_summation(&rho, &bc_set(n)?);
            worst = worst.max((closed - summed).abs());
        }
    }
    Ok(CheckResult::new(
        "bc_expectation_vs_summation",
        worst,
        1e-10,
    ))
}

/// Closed-form `E[Ô]` against quadrature over the sphere and Bob's phase.
pub fn check_rm_numeric(config: &VerifyConfig) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5eed);
    let thetas = [
        0.0,
        0.3,
        std::f64::consts::FRAC_PI_4,
        1.1,
        std::f64::consts::FRAC_PI_2,
    ];
    let mut worst: f64 = 0.0;
    for rho in random_states(&mut rng, 20) {
        for &theta in &thetas {
            let closed = rm_expectation(&rho, theta) + config.perturbation;
            let numeric = rm_expectation_numeric(&rho, theta, config.resolution)?;
            worst = worst.max((closed - numeric).abs());
        }
    }
    Ok(CheckResult::new("rm_expectation_vs_numeric", worst, 1e-3))
}

/// Analytic twirl against a Monte Carlo average of `U ⊗ U` conjugations.
pub fn check_twirl(config: &VerifyConfig) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x7e1);
    let rho = random_density_matrix(&mut rng, 4);
    let mut sum = nalgebra::Matrix4::zeros();
    for _ in 0..config.twirl_draws {
        let u = haar_su2(&mut rng);
        sum += apply_local(&rho, &u, &u)?.matrix();
    }
    let average = sum / crate::qstate::C64::from(config.twirl_draws as f64);
    let analytic = twirl_analytic(&rho)
        .matrix()
        .map(|x| x + config.perturbation);
    let worst = (average - analytic)
        .iter()
        .map(|x| x.norm())
        .fold(0.0, f64::max);
    Ok(CheckResult::new("twirl_monte_carlo", worst, 0.05))
}

/// The singlet is unchanged by `U ⊗ U` for Haar-random `U`.
pub fn check_singlet_invariance(config: &VerifyConfig) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x51);
    let s = singlet();
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let u = haar_su2(&mut rng);
        let rotated = apply_local(&s, &u, &u)?;
        let diff = rotated.matrix() - s.matrix().map(|x| x + config.perturbation);
        worst = worst.max(diff.iter().map(|x| x.norm()).fold(0.0, f64::max));
    }
    Ok(CheckResult::new("singlet_uu_invariance", worst, 1e-12))
}

pub fn run_all(config: &VerifyConfig) -> Result<Vec<CheckResult>> {
    Ok(vec![
        check_bc_closed_form(config)?,
        check_rm_numeric(config)?,
        check_twirl(config)?,
        check_singlet_invariance(config)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> VerifyConfig {
        VerifyConfig {
            resolution: Resolution::cube(48),
            twirl_draws: 4000,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn clean_run_passes() {
        for check in run_all(&quick()).unwrap() {
            assert!(check.passed, "{check:?}");
        }
    }

    #[test]
    fn perturbation_fails_every_check() {
        let config = VerifyConfig {
            perturbation: 0.1,
            ..quick()
        };
        for check in run_all(&config).unwrap() {
            assert!(!check.passed, "{check:?}");
        }
    }
}
