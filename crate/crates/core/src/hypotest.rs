//! Hypothesis tests for `H₀: ρ = |Ψ⁻⟩⟨Ψ⁻|`.
//!
//! Both samples are shifted Bernoulli variables, `Ĉ ~ 2·Bern(p) − 1` and
//! `Ô ~ 2·Bern(q) − 1`, so with `X` the number of `+1` outcomes in `n`
//! samples the test rejects when `X > z`, where `z` is the upper
//! `α`-quantile of `X` under the singlet. The quantile is non-randomised:
//! the smallest `z` with `P(X > z | H₀) ≤ α`, so the achieved size never
//! exceeds `α`.
//!
//! The second half of the module holds the local-hidden-variable gap
//! functions and the calibration-error bounds.

use std::f64::consts::{FRAC_PI_2, PI};

use statrs::function::erf::erfc;

use crate::correlations::{
    bc_expectation, bc_set, check_n_param, planar_correlation, rm_expectation,
};
use crate::qstate::{singlet, TwoQubitState};
use crate::{Error, Result};

/// Which test statistic is used, with its measurement parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// Braunstein-Caves with `2N` measurement pairs.
    Bc { n_param: u32 },
    /// Random measurements at Bloch separation `θ`.
    Rm { theta_sep: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    Bc,
    Rm,
}

impl SchemeKind {
    pub fn label(self) -> &'static str {
        match self {
            SchemeKind::Bc => "bc",
            SchemeKind::Rm => "rm",
        }
    }
}

impl Scheme {
    /// The RM scheme matched to `Bc { n_param }`: `θ = π/2N`, which makes
    /// both null distributions identical.
    pub fn rm_matched(n_param: u32) -> Self {
        Scheme::Rm {
            theta_sep: PI / (2.0 * n_param as f64),
        }
    }

    pub fn kind(&self) -> SchemeKind {
        match self {
            Scheme::Bc { .. } => SchemeKind::Bc,
            Scheme::Rm { .. } => SchemeKind::Rm,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Scheme::Bc { n_param } => check_n_param(n_param),
            Scheme::Rm { theta_sep } => {
                if (0.0..=FRAC_PI_2).contains(&theta_sep) {
                    Ok(())
                } else {
                    Err(Error::domain("theta", theta_sep, "[0, π/2]"))
                }
            }
        }
    }

    /// `P(sample = +1)` for the singlet: `(1 − cos(π/2N))/2` or `(1 − cos θ)/2`.
    pub fn null_success_probability(&self) -> f64 {
        let singlet_correlation = match *self {
            Scheme::Bc { n_param } => -(PI / (2.0 * n_param as f64)).cos(),
            Scheme::Rm { theta_sep } => -theta_sep.cos(),
        };
        (1.0 + singlet_correlation) / 2.0
    }

    /// `E[sample]` for a quantum state.
    pub fn expectation(&self, rho: &TwoQubitState) -> Result<f64> {
        match *self {
            Scheme::Bc { n_param } => bc_expectation(rho, n_param),
            Scheme::Rm { theta_sep } => Ok(rm_expectation(rho, theta_sep)),
        }
    }
}

/// Test parameters: scheme, size `α` and sample count `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    pub alpha: f64,
    pub n_samples: u64,
}

impl SchemeConfig {
    pub fn new(scheme: Scheme, alpha: f64, n_samples: u64) -> Result<Self> {
        scheme.validate()?;
        check_alpha(alpha)?;
        if n_samples == 0 {
            return Err(Error::domain("n_samples", 0.0, "n ≥ 1"));
        }
        Ok(SchemeConfig {
            scheme,
            alpha,
            n_samples,
        })
    }

    /// BC with parameter `N` and RM with `θ = π/2N`, sharing `α` and `n`.
    pub fn paired(n_param: u32, alpha: f64, n_samples: u64) -> Result<(Self, Self)> {
        Ok((
            SchemeConfig::new(Scheme::Bc { n_param }, alpha, n_samples)?,
            SchemeConfig::new(Scheme::rm_matched(n_param), alpha, n_samples)?,
        ))
    }

    pub fn quantile(&self) -> Result<Quantile> {
        binom_upper_quantile(
            self.alpha,
            self.n_samples,
            self.scheme.null_success_probability(),
        )
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("alpha", alpha, "(0, 1)"))
    }
}

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(name, p, "[0, 1]"))
    }
}

/// Critical value `z` of the rejection region `X > z` and the exact size
/// `P(X > z | H₀)` it achieves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantile {
    pub z: u64,
    pub achieved_size: f64,
}

/// Result of one fixed-`n` test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestOutcome {
    /// Sample mean, in `[−1, 1]`.
    pub statistic: f64,
    pub success_count: u64,
    pub quantile_z: u64,
    pub rejected: bool,
    pub achieved_size: f64,
}

impl TestOutcome {
    pub fn from_count(success_count: u64, n_samples: u64, quantile: Quantile) -> Self {
        debug_assert!(success_count <= n_samples);
        TestOutcome {
            statistic: 2.0 * success_count as f64 / n_samples as f64 - 1.0,
            success_count,
            quantile_z: quantile.z,
            rejected: success_count > quantile.z,
            achieved_size: quantile.achieved_size,
        }
    }

    /// Lower edge of the critical region in statistic units, `2z/n − 1`.
    pub fn critical_statistic(&self, n_samples: u64) -> f64 {
        2.0 * self.quantile_z as f64 / n_samples as f64 - 1.0
    }
}

/// `(p, q)`: success probabilities of `Ĉ` with parameter `N` and of `Ô` at
/// `θ = π/2N`.
pub fn bernoulli_params(rho: &TwoQubitState, n_param: u32) -> Result<(f64, f64)> {
    let p = (1.0 + bc_expectation(rho, n_param)?) / 2.0;
    let q = (1.0 + rm_expectation(rho, PI / (2.0 * n_param as f64))) / 2.0;
    Ok((p, q))
}

/// Upper tail probabilities of `B(n, p)`: entry `z` is `P(X > z)` for
/// `z = 0..=n`.
///
/// The pmf is built by the ratio recurrence outward from the mode, where it
/// is largest, dropping terms once they fall below `1e-300` of the peak.
/// The weights are then normalised by their own sum, which keeps the tails
/// accurate to a few ulps for `n` up to `10⁵` and beyond. Each tail is
/// accumulated from the top, smallest terms first.
pub fn binomial_upper_tails(n: u64, p: f64) -> Vec<f64> {
    let len = n as usize + 1;
    let mut tails = vec![0.0; len];
    if p <= 0.0 {
        return tails;
    }
    if p >= 1.0 {
        tails.iter_mut().take(n as usize).for_each(|t| *t = 1.0);
        return tails;
    }
    let nf = n as f64;
    let ratio = p / (1.0 - p);
    let mode = (((nf + 1.0) * p).floor() as usize).min(n as usize);
    let mut weights = vec![0.0; len];
    weights[mode] = 1.0;
    for k in mode..n as usize {
        let next = weights[k] * (nf - k as f64) / (k as f64 + 1.0) * ratio;
        if next < 1e-300 {
            break;
        }
        weights[k + 1] = next;
    }
    for k in (1..=mode).rev() {
        let prev = weights[k] * k as f64 / (nf - k as f64 + 1.0) / ratio;
        if prev < 1e-300 {
            break;
        }
        weights[k - 1] = prev;
    }
    let mut acc = 0.0;
    for k in (1..len).rev() {
        acc += weights[k];
        tails[k - 1] = acc;
    }
    let total = acc + weights[0];
    tails.iter_mut().for_each(|t| *t = (*t / total).min(1.0));
    tails
}

/// `P(X > z)` for `X ~ B(n, p)`.
pub fn binom_tail(n: u64, z: u64, p: f64) -> f64 {
    if z >= n {
        return 0.0;
    }
    binomial_upper_tails(n, p)[z as usize]
}

/// Smallest `z` with `P(X > z | X ~ B(n, p0)) ≤ α`.
pub fn binom_upper_quantile(alpha: f64, n: u64, p0: f64) -> Result<Quantile> {
    check_alpha(alpha)?;
    check_probability("p0", p0)?;
    if n == 0 {
        return Err(Error::domain("n", 0.0, "n ≥ 1"));
    }
    let tails = binomial_upper_tails(n, p0);
    let z = tails
        .iter()
        .position(|&t| t <= alpha)
        .expect("P(X > n) = 0 is always below alpha");
    Ok(Quantile {
        z: z as u64,
        achieved_size: tails[z],
    })
}

/// Exact rejection probability when the samples are `Bern(p_alt)` and the
/// null is `Bern(p_null)`.
pub fn exact_power_against(n: u64, alpha: f64, p_null: f64, p_alt: f64) -> Result<f64> {
    check_probability("p_alt", p_alt)?;
    let q = binom_upper_quantile(alpha, n, p_null)?;
    Ok(binom_tail(n, q.z, p_alt))
}

/// Exact power of the test with the Braunstein-Caves null for parameter `N`.
pub fn exact_power(n: u64, alpha: f64, n_param: u32, p_alt: f64) -> Result<f64> {
    check_n_param(n_param)?;
    exact_power_against(
        n,
        alpha,
        Scheme::Bc { n_param }.null_success_probability(),
        p_alt,
    )
}

/// Standard normal CDF via `erfc` (accurate to double precision).
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// CLT approximation `1 − Φ((z − n p)/√(n p (1 − p)))` for a known
/// critical value. Degenerate `p ∈ {0, 1}` is answered exactly.
pub fn clt_power(n: u64, z: u64, p_alt: f64) -> f64 {
    if p_alt <= 0.0 || p_alt >= 1.0 {
        return if p_alt >= 1.0 && n > z { 1.0 } else { 0.0 };
    }
    let nf = n as f64;
    let sd = (nf * p_alt * (1.0 - p_alt)).sqrt();
    1.0 - normal_cdf((z as f64 - nf * p_alt) / sd)
}

pub fn asymptotic_power_against(n: u64, alpha: f64, p_null: f64, p_alt: f64) -> Result<f64> {
    check_probability("p_alt", p_alt)?;
    let q = binom_upper_quantile(alpha, n, p_null)?;
    Ok(clt_power(n, q.z, p_alt))
}

pub fn asymptotic_power(n: u64, alpha: f64, n_param: u32, p_alt: f64) -> Result<f64> {
    check_n_param(n_param)?;
    asymptotic_power_against(
        n,
        alpha,
        Scheme::Bc { n_param }.null_success_probability(),
        p_alt,
    )
}

/// `D(N) = cos(π/2N) + 1/N − 1`: singlet correlation magnitude minus the
/// LHV bound `1 − 1/N`.
pub fn lhv_gap(n_param: u32) -> Result<f64> {
    check_n_param(n_param)?;
    let n = n_param as f64;
    Ok((PI / (2.0 * n)).cos() + 1.0 / n - 1.0)
}

/// `D̃(θ) = cos θ + 2θ/π − 1`: singlet versus Bell's hemisphere model.
pub fn bell_model_gap(theta: f64) -> f64 {
    theta.cos() + 2.0 * theta / PI - 1.0
}

/// The maximiser of [`bell_model_gap`], `arcsin(2/π)`.
pub fn optimal_bell_theta() -> f64 {
    (2.0 / PI).asin()
}

/// Golden-section search for the maximum of a unimodal function on
/// `[lo, hi]`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    (lo + hi) / 2.0
}

fn check_delta(delta: f64) -> Result<()> {
    if delta >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain("delta", delta, "δ ≥ 0"))
    }
}

/// Assured singlet/LHV gap for the RM test at `θ = π/2N + 2δ` when every
/// measurement angle may be off by up to `δ`:
/// `cos(π/2N + 4δ) − (1 − 1/N)`.
pub fn rm_error_gap(n_param: u32, delta: f64) -> Result<f64> {
    check_n_param(n_param)?;
    check_delta(delta)?;
    let n = n_param as f64;
    Ok((PI / (2.0 * n) + 4.0 * delta).cos() - (1.0 - 1.0 / n))
}

/// Assured singlet/LHV gap for the BC test under `δ`-bounded errors:
/// `cos(π/2N) cos(4δ) − (1 − 1/N)`.
pub fn bc_error_gap(n_param: u32, delta: f64) -> Result<f64> {
    check_n_param(n_param)?;
    check_delta(delta)?;
    let n = n_param as f64;
    Ok((PI / (2.0 * n)).cos() * (4.0 * delta).cos() - (1.0 - 1.0 / n))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaThreshold {
    /// `(arccos(1 − 1/N) − π/2N)/4`, where [`rm_error_gap`] reaches zero.
    pub threshold: f64,
    /// `π/(8N(N − 1))`, the largest error for which the RM LHV bound at
    /// `θ = π/2N + 2δ` is known to hold.
    pub rm_validity_cap: f64,
}

impl DeltaThreshold {
    /// Largest tolerable error for the RM test: the smaller of the two.
    pub fn rm_tolerance(&self) -> f64 {
        self.threshold.min(self.rm_validity_cap)
    }
}

pub fn delta_threshold(n_param: u32) -> Result<DeltaThreshold> {
    check_n_param(n_param)?;
    let n = n_param as f64;
    Ok(DeltaThreshold {
        threshold: ((1.0 - 1.0 / n).acos() - PI / (2.0 * n)) / 4.0,
        rm_validity_cap: PI / (8.0 * n * (n - 1.0)),
    })
}

/// Where [`bc_error_gap`] actually changes sign:
/// `arccos((1 − 1/N)/cos(π/2N))/4`. It always lies above
/// [`DeltaThreshold::threshold`], since `cos a cos b ≥ cos(a + b)` on
/// `[0, π/2]`.
pub fn bc_error_gap_root(n_param: u32) -> Result<f64> {
    check_n_param(n_param)?;
    let n = n_param as f64;
    Ok(((1.0 - 1.0 / n) / (PI / (2.0 * n)).cos()).acos() / 4.0)
}

/// Singlet `E[Ĉ]` when all of Alice's angles are shifted by `ε_A` and all
/// of Bob's by `ε_B`: `−cos(π/2N) cos(2(ε_A − ε_B))`.
pub fn bc_singlet_with_calibration_error(n_param: u32, eps_a: f64, eps_b: f64) -> Result<f64> {
    check_n_param(n_param)?;
    Ok(-(PI / (2.0 * n_param as f64)).cos() * (2.0 * (eps_a - eps_b)).cos())
}

/// The same quantity evaluated pair by pair from [`planar_correlation`].
pub fn bc_singlet_with_calibration_error_by_summation(
    n_param: u32,
    eps_a: f64,
    eps_b: f64,
) -> Result<f64> {
    let set = bc_set(n_param)?;
    let s = singlet();
    let total: f64 = set
        .pairs()
        .iter()
        .map(|p| {
            p.sign as f64
                * planar_correlation(&s, p.alice.theta_plane + eps_a, p.bob.theta_plane + eps_b)
        })
        .sum();
    Ok(total / set.pairs().len() as f64)
}
