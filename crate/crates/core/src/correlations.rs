//! Measurement sets, Born-rule sampling, and the expectations of the two
//! test samples.
//!
//! * `Ĉ` (Braunstein-Caves sample): a pair drawn uniformly from the `2N`
//!   planar measurement pairs, product of outcomes, sign-flipped on the
//!   wrap-around pair `(a₀, b_{N−1})`.
//! * `Ô` (random measurement sample): Alice measures along a uniformly random
//!   Bloch direction, Bob along a direction at Bloch angle `θ` from hers,
//!   product of outcomes.
//!
//! `θ` here is always the angle between Bloch vectors, so the two `+1`
//! states overlap as `|⟨ψ_A|ψ_B⟩| = cos(θ/2)` and the singlet gives
//! `E[Ô] = −cos θ`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::{Vector2, Vector3, Vector4};
use rand::Rng;

use crate::qstate::{kron2, quad, BellLabel, QubitPure, TwoQubitState, C64};
use crate::{Error, Outcome, Result};

const PROB_TOL: f64 = 1e-10;

/// The real-plane measurement `{|m_θ⟩, |m_{θ+π/2}⟩}` with
/// `|m_θ⟩ = cos θ|0⟩ + sin θ|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarBasis {
    pub theta_plane: f64,
}

impl PlanarBasis {
    pub fn new(theta_plane: f64) -> Self {
        PlanarBasis { theta_plane }
    }

    pub fn basis(&self) -> MeasurementBasis {
        let (s, c) = self.theta_plane.sin_cos();
        MeasurementBasis {
            plus: Vector2::new(C64::new(c, 0.0), C64::new(s, 0.0)),
            minus: Vector2::new(C64::new(-s, 0.0), C64::new(c, 0.0)),
        }
    }

    /// Bloch direction of `|m_θ⟩`: polar angle `2θ` in the x–z plane.
    pub fn bloch(&self) -> Vector3<f64> {
        let (s, c) = (2.0 * self.theta_plane).sin_cos();
        Vector3::new(s, 0.0, c)
    }
}

/// A projective qubit measurement: `plus` is the `+1` outcome vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    pub plus: Vector2<C64>,
    pub minus: Vector2<C64>,
}

impl From<&QubitPure> for MeasurementBasis {
    fn from(q: &QubitPure) -> Self {
        MeasurementBasis {
            plus: q.amplitudes(),
            minus: q.orthogonal(),
        }
    }
}

impl From<QubitPure> for MeasurementBasis {
    fn from(q: QubitPure) -> Self {
        (&q).into()
    }
}

/// One entry of the Braunstein-Caves set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcPair {
    pub alice_index: u32,
    pub bob_index: u32,
    pub alice: PlanarBasis,
    pub bob: PlanarBasis,
    /// `−1` only on the wrap-around pair `(a₀, b_{N−1})`.
    pub sign: Outcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BcMeasurementSet {
    n_param: u32,
    pairs: Vec<BcPair>,
}

impl BcMeasurementSet {
    pub fn n_param(&self) -> u32 {
        self.n_param
    }

    pub fn pairs(&self) -> &[BcPair] {
        &self.pairs
    }
}

pub(crate) fn check_n_param(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::domain("N", n as f64, "integers N ≥ 2"));
    }
    Ok(())
}

/// Alice's planar angle `a_k = kπ/2N`.
pub fn alice_angle(k: u32, n: u32) -> f64 {
    k as f64 * PI / (2.0 * n as f64)
}

/// Bob's planar angle `b_k = (2k+1)π/4N`.
pub fn bob_angle(k: u32, n: u32) -> f64 {
    (2 * k + 1) as f64 * PI / (4.0 * n as f64)
}

/// The `2N` measurement pairs `{(a_k, b_k)} ∪ {(a_{k+1}, b_k)} ∪ {(a₀, b_{N−1})}`.
pub fn bc_set(n: u32) -> Result<BcMeasurementSet> {
    check_n_param(n)?;
    let pair = |ia: u32, ib: u32, sign: Outcome| BcPair {
        alice_index: ia,
        bob_index: ib,
        alice: PlanarBasis::new(alice_angle(ia, n)),
        bob: PlanarBasis::new(bob_angle(ib, n)),
        sign,
    };
    let mut pairs = Vec::with_capacity(2 * n as usize);
    pairs.extend((0..n).map(|k| pair(k, k, 1)));
    pairs.extend((0..n - 1).map(|k| pair(k + 1, k, 1)));
    pairs.push(pair(0, n - 1, -1));
    Ok(BcMeasurementSet { n_param: n, pairs })
}

/// `P(same) − P(differ)` for planar measurements at angles `θ` (Alice) and
/// `φ` (Bob), written in terms of the matrix elements `a_ijpq`.
pub fn planar_correlation(rho: &TwoQubitState, theta: f64, phi: f64) -> f64 {
    let a = |i, j, p, q| rho.entry(i, j, p, q);
    let (s2t, c2t) = (2.0 * theta).sin_cos();
    let (s2p, c2p) = (2.0 * phi).sin_cos();
    let zz = (a(0, 0, 0, 0) + a(1, 1, 1, 1) - a(0, 1, 0, 1) - a(1, 0, 1, 0)).re;
    let zx = (a(0, 0, 0, 1) - a(1, 0, 1, 1)).re;
    let xz = (a(0, 0, 1, 0) - a(0, 1, 1, 1)).re;
    let xx = (a(0, 0, 1, 1) + a(0, 1, 1, 0)).re;
    c2t * c2p * zz + 2.0 * c2t * s2p * zx + 2.0 * s2t * c2p * xz + 2.0 * s2t * s2p * xx
}

/// `E[Ĉ] = cos(π/2N) (⟨Φ⁺|ρ|Φ⁺⟩ − ⟨Ψ⁻|ρ|Ψ⁻⟩)`.
pub fn bc_expectation(rho: &TwoQubitState, n: u32) -> Result<f64> {
    check_n_param(n)?;
    let value = (PI / (2.0 * n as f64)).cos()
        * (rho.fidelity(BellLabel::PhiPlus) - rho.fidelity(BellLabel::PsiMinus));
    #[cfg(debug_assertions)]
    {
        let summed = bc_expectation_by_summation(rho, &bc_set(n)?);
        debug_assert!(
            (summed - value).abs() <= 1e-10,
            "closed form {value} disagrees with pair average {summed}"
        );
    }
    Ok(value)
}

/// `E[Ĉ]` as the signed average of [`planar_correlation`] over the set.
pub fn bc_expectation_by_summation(rho: &TwoQubitState, set: &BcMeasurementSet) -> f64 {
    let total: f64 = set
        .pairs()
        .iter()
        .map(|p| p.sign as f64 * planar_correlation(rho, p.alice.theta_plane, p.bob.theta_plane))
        .sum();
    total / set.pairs().len() as f64
}

/// A θ-separated pair of measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RmPair {
    pub alice: QubitPure,
    pub bob: QubitPure,
    /// Bloch-sphere angle between the two `+1` states.
    pub theta_sep: f64,
    pub alpha: f64,
}

/// `|ψ_B⟩ = cos(θ/2)|ψ_A⟩ + e^{iα} sin(θ/2)|ψ_A⊥⟩` together with
/// `|ψ_B⊥⟩ = −sin(θ/2)|ψ_A⟩ + e^{iα} cos(θ/2)|ψ_A⊥⟩`.
pub fn bob_basis(alice: &QubitPure, alpha: f64, theta_sep: f64) -> MeasurementBasis {
    let (s, c) = (theta_sep / 2.0).sin_cos();
    let phase = C64::from_polar(1.0, alpha);
    let a = alice.amplitudes();
    let ap = alice.orthogonal();
    MeasurementBasis {
        plus: a * C64::new(c, 0.0) + ap * (phase * s),
        minus: a * C64::new(-s, 0.0) + ap * (phase * c),
    }
}

impl RmPair {
    pub fn new(alice: QubitPure, alpha: f64, theta_sep: f64) -> Self {
        let b = bob_basis(&alice, alpha, theta_sep);
        let bob = QubitPure::from_amplitudes(b.plus[0], b.plus[1])
            .expect("rotation of a unit vector is a unit vector");
        RmPair {
            alice,
            bob,
            theta_sep,
            alpha,
        }
    }
}

/// A uniformly random Bloch direction: `cos ω` uniform on `[−1, 1]`, `β`
/// uniform on `[0, 2π)`.
pub fn uniform_qubit<R: Rng + ?Sized>(rng: &mut R) -> QubitPure {
    let cos_omega: f64 = rng.random_range(-1.0..=1.0);
    let beta: f64 = rng.random_range(0.0..TAU);
    QubitPure::from_angles(cos_omega.acos(), beta)
}

pub fn sample_rm_pair<R: Rng + ?Sized>(rng: &mut R, theta_sep: f64) -> RmPair {
    let alice = uniform_qubit(rng);
    let alpha = rng.random_range(0.0..TAU);
    RmPair::new(alice, alpha, theta_sep)
}

/// The six Alice-dependent matrix elements that determine `E_AB[Ô]` for
/// every Bob measurement θ-separated from a fixed `|ψ_A⟩`.
#[derive(Debug, Clone, Copy)]
pub struct AliceTerms {
    aa: f64,
    a_ap: f64,
    ap_a: f64,
    ap_ap: f64,
    /// `⟨ψ_A ψ_A|ρ|ψ_A ψ_A⊥⟩`
    cross_plus: C64,
    /// `⟨ψ_A⊥ ψ_A|ρ|ψ_A⊥ ψ_A⊥⟩`
    cross_minus: C64,
}

impl AliceTerms {
    pub fn new(rho: &TwoQubitState, alice: &QubitPure) -> Self {
        let a = alice.amplitudes();
        let ap = alice.orthogonal();
        let m = rho.matrix();
        let v_aa = kron2(&a, &a);
        let v_a_ap = kron2(&a, &ap);
        let v_ap_a = kron2(&ap, &a);
        let v_ap_ap = kron2(&ap, &ap);
        AliceTerms {
            aa: quad(m, &v_aa, &v_aa).re,
            a_ap: quad(m, &v_a_ap, &v_a_ap).re,
            ap_a: quad(m, &v_ap_a, &v_ap_a).re,
            ap_ap: quad(m, &v_ap_ap, &v_ap_ap).re,
            cross_plus: quad(m, &v_aa, &v_a_ap),
            cross_minus: quad(m, &v_ap_a, &v_ap_ap),
        }
    }

    /// `E_AB[Ô] = 2P(same) − 1` expanded through the decomposition of
    /// `|ψ_B⟩`, `|ψ_B⊥⟩` in the `{|ψ_A⟩, |ψ_A⊥⟩}` basis.
    pub fn pair_expectation(&self, alpha: f64, theta_sep: f64) -> f64 {
        let (sa, ca) = alpha.sin_cos();
        self.pair_expectation_with(ca, sa, theta_sep)
    }

    fn pair_expectation_with(&self, cos_alpha: f64, sin_alpha: f64, theta_sep: f64) -> f64 {
        let c2 = (theta_sep / 2.0).cos().powi(2);
        let s2 = 1.0 - c2;
        let sin_t = theta_sep.sin();
        // Re[e^{iα} z] = cos α Re z − sin α Im z
        let re_phase = |z: C64| cos_alpha * z.re - sin_alpha * z.im;
        2.0 * c2 * (self.aa + self.ap_ap)
            + 2.0 * s2 * (self.a_ap + self.ap_a)
            + 2.0 * sin_t * (re_phase(self.cross_plus) - re_phase(self.cross_minus))
            - 1.0
    }
}

/// Expected `Ô` for a fixed Alice basis and Bob basis at phase `α`.
pub fn rm_pair_expectation(
    rho: &TwoQubitState,
    alice: &QubitPure,
    alpha: f64,
    theta_sep: f64,
) -> f64 {
    AliceTerms::new(rho, alice).pair_expectation(alpha, theta_sep)
}

/// `E[Ô] = cos θ (1/3 − (4/3)⟨Ψ⁻|ρ|Ψ⁻⟩)`.
pub fn rm_expectation(rho: &TwoQubitState, theta_sep: f64) -> f64 {
    theta_sep.cos() * (1.0 / 3.0 - 4.0 / 3.0 * rho.fidelity(BellLabel::PsiMinus))
}

/// Grid sizes for [`rm_expectation_numeric`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    pub omega: usize,
    pub beta: usize,
    pub alpha: usize,
}

impl Resolution {
    pub const MIN: usize = 4;

    pub fn cube(n: usize) -> Self {
        Resolution {
            omega: n,
            beta: n,
            alpha: n,
        }
    }
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution::cube(200)
    }
}

/// Brute-force `E[Ô]`: average of [`rm_pair_expectation`] over Alice's
/// Bloch sphere (midpoint rule in `ω` with the `sin ω` Jacobian, uniform
/// grid in `β`) and over Bob's phase `α ∈ [0, 2π)`.
pub fn rm_expectation_numeric(
    rho: &TwoQubitState,
    theta_sep: f64,
    resolution: Resolution,
) -> Result<f64> {
    let Resolution { omega, beta, alpha } = resolution;
    if omega.min(beta).min(alpha) < Resolution::MIN {
        return Err(Error::domain(
            "resolution",
            omega.min(beta).min(alpha) as f64,
            "at least 4 points per axis",
        ));
    }
    let alpha_trig: Vec<(f64, f64)> = (0..alpha)
        .map(|k| {
            let (s, c) = (TAU * k as f64 / alpha as f64).sin_cos();
            (c, s)
        })
        .collect();
    let d_omega = PI / omega as f64;
    let mut weighted = 0.0;
    let mut weights = 0.0;
    for i in 0..omega {
        let om = (i as f64 + 0.5) * d_omega;
        let w = om.sin();
        let mut row = 0.0;
        for j in 0..beta {
            let alice = QubitPure::from_angles(om, TAU * j as f64 / beta as f64);
            let terms = AliceTerms::new(rho, &alice);
            row += alpha_trig
                .iter()
                .map(|&(c, s)| terms.pair_expectation_with(c, s, theta_sep))
                .sum::<f64>();
        }
        weighted += w * row / (beta * alpha) as f64;
        weights += w;
    }
    Ok(weighted / weights)
}

/// Joint outcome probabilities in the order `(+,+), (+,−), (−,+), (−,−)`.
pub fn outcome_probabilities(
    rho: &TwoQubitState,
    alice: &MeasurementBasis,
    bob: &MeasurementBasis,
) -> Result<[f64; 4]> {
    let vectors: [Vector4<C64>; 4] = [
        kron2(&alice.plus, &bob.plus),
        kron2(&alice.plus, &bob.minus),
        kron2(&alice.minus, &bob.plus),
        kron2(&alice.minus, &bob.minus),
    ];
    let probs = vectors.map(|v| rho.expectation(&v));
    let total: f64 = probs.iter().sum();
    if let Some(p) = probs.iter().find(|&&p| p < -PROB_TOL) {
        return Err(Error::Probability(format!("negative probability {p:.3e}")));
    }
    if (total - 1.0).abs() > PROB_TOL {
        return Err(Error::Probability(format!("probabilities sum to {total}")));
    }
    Ok(probs.map(|p| p.max(0.0)))
}

const OUTCOMES: [(Outcome, Outcome); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

fn sample_index<R: Rng + ?Sized>(rng: &mut R, probs: &[f64; 4]) -> usize {
    let total: f64 = probs.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate().take(3) {
        acc += p;
        if u < acc {
            return i;
        }
    }
    3
}

/// Samples Alice's and Bob's outcomes from the four-outcome Born
/// distribution.
pub fn born_sample<R: Rng + ?Sized>(
    rng: &mut R,
    rho: &TwoQubitState,
    alice: &MeasurementBasis,
    bob: &MeasurementBasis,
) -> Result<(Outcome, Outcome)> {
    let probs = outcome_probabilities(rho, alice, bob)?;
    Ok(OUTCOMES[sample_index(rng, &probs)])
}

/// Precomputed outcome distributions for every pair of a BC set, so that
/// repeated draws on the same state cost two uniforms each.
#[derive(Debug, Clone)]
pub struct BcSampler {
    tables: Vec<([f64; 4], Outcome)>,
}

impl BcSampler {
    pub fn new(rho: &TwoQubitState, n: u32) -> Result<Self> {
        let set = bc_set(n)?;
        let tables = set
            .pairs()
            .iter()
            .map(|p| {
                Ok((
                    outcome_probabilities(rho, &p.alice.basis(), &p.bob.basis())?,
                    p.sign,
                ))
            })
            .collect::<Result<_>>()?;
        Ok(BcSampler { tables })
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Outcome {
        let (probs, sign) = &self.tables[rng.random_range(0..self.tables.len())];
        let (a, b) = OUTCOMES[sample_index(rng, probs)];
        sign * a * b
    }
}

/// One Braunstein-Caves sample `Ĉ`.
pub fn bc_draw<R: Rng + ?Sized>(rng: &mut R, rho: &TwoQubitState, n: u32) -> Result<Outcome> {
    Ok(BcSampler::new(rho, n)?.draw(rng))
}

/// One random measurement sample `Ô`.
pub fn rm_draw<R: Rng + ?Sized>(
    rng: &mut R,
    rho: &TwoQubitState,
    theta_sep: f64,
) -> Result<Outcome> {
    debug_assert!((0.0..=FRAC_PI_2).contains(&theta_sep));
    let alice = uniform_qubit(rng);
    let alpha = rng.random_range(0.0..TAU);
    let bob = bob_basis(&alice, alpha, theta_sep);
    let (a, b) = born_sample(rng, rho, &MeasurementBasis::from(&alice), &bob)?;
    Ok(a * b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{
        bell_diagonal, pure_from_angles, random_density_matrix, singlet, werner_state,
    };
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_4;

    /// Correlation from the four Born probabilities, independent of the
    /// closed-form expressions under test.
    fn born_correlation(rho: &TwoQubitState, a: &MeasurementBasis, b: &MeasurementBasis) -> f64 {
        let p = outcome_probabilities(rho, a, b).unwrap();
        p[0] - p[1] - p[2] + p[3]
    }

    fn mean_and_sigma(samples: impl Iterator<Item = Outcome>, n: usize) -> (f64, f64) {
        let sum: i64 = samples.take(n).map(i64::from).sum();
        let mean = sum as f64 / n as f64;
        (mean, ((1.0 - mean * mean) / n as f64).sqrt())
    }

    #[test]
    fn bc_set_n2() {
        let set = bc_set(2).unwrap();
        assert_eq!(set.pairs().len(), 4);
        let alice: Vec<f64> = set.pairs().iter().map(|p| p.alice.theta_plane).collect();
        let bob: Vec<f64> = set.pairs().iter().map(|p| p.bob.theta_plane).collect();
        for a in alice {
            assert!([0.0, FRAC_PI_4].iter().any(|x| (x - a).abs() < 1e-15));
        }
        for b in bob {
            assert!([PI / 8.0, 3.0 * PI / 8.0]
                .iter()
                .any(|x| (x - b).abs() < 1e-15));
        }
        assert_eq!(set.pairs().iter().filter(|p| p.sign == -1).count(), 1);
    }

    #[test]
    fn bc_set_n3_and_structure() {
        let set = bc_set(3).unwrap();
        assert_eq!(set.pairs().len(), 6);
        assert_abs_diff_eq!(bob_angle(0, 3), PI / 12.0, epsilon = 1e-15);
        for (idx, p) in set.pairs().iter().enumerate() {
            let last = idx == set.pairs().len() - 1;
            if last {
                assert_eq!((p.alice_index, p.bob_index, p.sign), (0, 2, -1));
            } else {
                assert_eq!(p.sign, 1);
                assert!(p.alice_index == p.bob_index || p.alice_index == p.bob_index + 1);
            }
        }
        assert!(bc_set(1).is_err());
        assert!(bc_set(0).is_err());
    }

    #[test]
    fn planar_correlation_matches_born_rule() {
        let s = singlet();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let (t, p) = (rng.random_range(-PI..PI), rng.random_range(-PI..PI));
            let direct = born_correlation(
                &s,
                &PlanarBasis::new(t).basis(),
                &PlanarBasis::new(p).basis(),
            );
            assert_abs_diff_eq!(direct, -(2.0 * (t - p)).cos(), epsilon = 1e-12);
            assert_abs_diff_eq!(planar_correlation(&s, t, p), direct, epsilon = 1e-12);

            let rho = random_density_matrix(&mut rng, 4);
            let direct = born_correlation(
                &rho,
                &PlanarBasis::new(t).basis(),
                &PlanarBasis::new(p).basis(),
            );
            assert_abs_diff_eq!(planar_correlation(&rho, t, p), direct, epsilon = 1e-12);
        }
        let mixed = TwoQubitState::maximally_mixed();
        assert_abs_diff_eq!(planar_correlation(&mixed, 0.3, 1.1), 0.0, epsilon = 1e-15);
        let zero = pure_from_angles(0.0, 0.0);
        let up_up = TwoQubitState::product(&zero, &zero);
        assert_abs_diff_eq!(planar_correlation(&up_up, 0.0, 0.0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn bc_expectation_examples() {
        for n in 2..=6 {
            let c = (PI / (2.0 * n as f64)).cos();
            assert_abs_diff_eq!(bc_expectation(&singlet(), n).unwrap(), -c, epsilon = 1e-12);
            for delta in [0.0, 0.3, 0.7, 1.0] {
                let w = werner_state(delta).unwrap();
                assert_abs_diff_eq!(
                    bc_expectation(&w, n).unwrap(),
                    -(1.0 - delta) * c,
                    epsilon = 1e-12
                );
            }
        }
        assert!(bc_expectation(&singlet(), 1).is_err());
    }

    #[test]
    fn closed_form_matches_summation_for_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for i in 0..100 {
            let rho = random_density_matrix(&mut rng, 1 + i % 4);
            for n in 2..=8 {
                let closed = bc_expectation(&rho, n).unwrap();
                let summed = bc_expectation_by_summation(&rho, &bc_set(n).unwrap());
                assert_abs_diff_eq!(closed, summed, epsilon = 1e-10);
                // quantum bound
                assert!(closed.abs() <= (PI / (2.0 * n as f64)).cos() + 1e-10);
            }
        }
    }

    #[test]
    fn rm_pair_is_theta_separated() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let theta = rng.random_range(0.0..=FRAC_PI_2);
            let pair = sample_rm_pair(&mut rng, theta);
            let overlap = pair.alice.amplitudes().dotc(&pair.bob.amplitudes()).norm();
            assert_abs_diff_eq!(overlap, (theta / 2.0).cos(), epsilon = 1e-10);
            let bloch_angle = pair
                .alice
                .bloch()
                .dot(&pair.bob.bloch())
                .clamp(-1.0, 1.0)
                .acos();
            assert_abs_diff_eq!(bloch_angle, theta, epsilon = 1e-6);
        }
        let pair = sample_rm_pair(&mut rng, 0.0);
        let overlap = pair.alice.amplitudes().dotc(&pair.bob.amplitudes()).norm();
        assert_abs_diff_eq!(overlap, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn alice_is_uniform_on_bloch_sphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let n = 100_000;
        let mean = (0..n)
            .map(|_| sample_rm_pair(&mut rng, FRAC_PI_4).alice.bloch())
            .sum::<Vector3<f64>>()
            / n as f64;
        assert!(mean.norm() <= 0.02, "mean {mean}");
    }

    #[test]
    fn rm_pair_expectation_matches_born_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..200 {
            let rho = random_density_matrix(&mut rng, 1 + i % 4);
            let alice = uniform_qubit(&mut rng);
            let alpha = rng.random_range(0.0..TAU);
            let theta = rng.random_range(0.0..=FRAC_PI_2);
            let direct = born_correlation(
                &rho,
                &MeasurementBasis::from(&alice),
                &bob_basis(&alice, alpha, theta),
            );
            assert_abs_diff_eq!(
                rm_pair_expectation(&rho, &alice, alpha, theta),
                direct,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn rm_pair_expectation_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mixed = TwoQubitState::maximally_mixed();
        for _ in 0..50 {
            let alice = uniform_qubit(&mut rng);
            let alpha = rng.random_range(0.0..TAU);
            let theta = rng.random_range(0.0..=FRAC_PI_2);
            assert_abs_diff_eq!(
                rm_pair_expectation(&singlet(), &alice, alpha, theta),
                -theta.cos(),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                rm_pair_expectation(&mixed, &alice, alpha, theta),
                0.0,
                epsilon = 1e-12
            );
        }
        let zero = pure_from_angles(0.0, 0.0);
        let up_up = TwoQubitState::product(&zero, &zero);
        assert_abs_diff_eq!(
            rm_pair_expectation(&up_up, &zero, 1.0, 0.0),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn rm_expectation_examples() {
        for theta in [0.0, 0.3, FRAC_PI_4, 1.2, FRAC_PI_2] {
            assert_abs_diff_eq!(
                rm_expectation(&singlet(), theta),
                -theta.cos(),
                epsilon = 1e-15
            );
            assert_abs_diff_eq!(
                rm_expectation(&TwoQubitState::maximally_mixed(), theta),
                0.0,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn numeric_oracle_examples() {
        let res = Resolution::default();
        let c = FRAC_PI_4.cos();
        let v = rm_expectation_numeric(&singlet(), FRAC_PI_4, res).unwrap();
        assert_abs_diff_eq!(v, -c, epsilon = 1e-3);
        let v = rm_expectation_numeric(&werner_state(0.4).unwrap(), FRAC_PI_4, res).unwrap();
        assert_abs_diff_eq!(v, -0.6 * c, epsilon = 1e-3);
        let v = rm_expectation_numeric(
            &bell_diagonal(0.9, 0.0, 0.05, 0.05).unwrap(),
            FRAC_PI_4,
            res,
        )
        .unwrap();
        assert_abs_diff_eq!(v, c * (1.0 / 3.0 - 4.0 * 0.9 / 3.0), epsilon = 1e-3);
        assert!(rm_expectation_numeric(&singlet(), 0.1, Resolution::cube(3)).is_err());
    }

    #[test]
    fn born_sample_deterministic_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = singlet();
        for _ in 0..1000 {
            let alice = uniform_qubit(&mut rng);
            let basis = MeasurementBasis::from(&alice);
            let (a, b) = born_sample(&mut rng, &s, &basis, &basis).unwrap();
            assert_eq!(a * b, -1);
        }
        let zero = pure_from_angles(0.0, 0.0);
        let up_up = TwoQubitState::product(&zero, &zero);
        let comp = PlanarBasis::new(0.0).basis();
        for _ in 0..100 {
            assert_eq!(born_sample(&mut rng, &up_up, &comp, &comp).unwrap(), (1, 1));
        }
    }

    #[test]
    fn born_sample_mean_matches_pair_expectation() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let theta = 0.9;
        let pair = sample_rm_pair(&mut rng, theta);
        let bob = bob_basis(&pair.alice, pair.alpha, theta);
        let alice = MeasurementBasis::from(&pair.alice);
        let n = 100_000;
        let s = singlet();
        let (mean, sigma) = mean_and_sigma(
            std::iter::repeat_with(|| {
                let (a, b) = born_sample(&mut rng, &s, &alice, &bob).unwrap();
                a * b
            }),
            n,
        );
        assert!((mean + theta.cos()).abs() <= 4.0 * sigma, "mean {mean}");
    }

    #[test]
    fn bc_draw_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let n = 100_000;
        let sampler = BcSampler::new(&singlet(), 2).unwrap();
        let (mean, sigma) = mean_and_sigma(std::iter::repeat_with(|| sampler.draw(&mut rng)), n);
        assert!(
            (mean + FRAC_PI_4.cos()).abs() <= 4.0 * sigma,
            "singlet mean {mean}"
        );

        let sampler = BcSampler::new(&TwoQubitState::maximally_mixed(), 2).unwrap();
        let (mean, sigma) = mean_and_sigma(std::iter::repeat_with(|| sampler.draw(&mut rng)), n);
        assert!(mean.abs() <= 4.0 * sigma, "mixed mean {mean}");

        // |01⟩/|10⟩ mixture left by a computational-basis intercept.
        let zero = pure_from_angles(0.0, 0.0);
        let one = pure_from_angles(PI, 0.0);
        let (a, b) = (
            TwoQubitState::product(&zero, &one),
            TwoQubitState::product(&one, &zero),
        );
        let ir = TwoQubitState::mixture(&[(0.5, &a), (0.5, &b)]).unwrap();
        let (mean, sigma) = mean_and_sigma(
            std::iter::repeat_with(|| bc_draw(&mut rng, &ir, 2).unwrap()),
            n,
        );
        assert!(
            (mean + 0.5 * FRAC_PI_4.cos()).abs() <= 4.0 * sigma,
            "intercept mean {mean}"
        );
    }

    #[test]
    fn rm_draw_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let n = 100_000;
        let s = singlet();
        let (mean, sigma) = mean_and_sigma(
            std::iter::repeat_with(|| rm_draw(&mut rng, &s, FRAC_PI_4).unwrap()),
            n,
        );
        assert!(
            (mean + FRAC_PI_4.cos()).abs() <= 4.0 * sigma,
            "singlet mean {mean}"
        );

        let mixed = TwoQubitState::maximally_mixed();
        let (mean, sigma) = mean_and_sigma(
            std::iter::repeat_with(|| rm_draw(&mut rng, &mixed, FRAC_PI_4).unwrap()),
            n,
        );
        assert!(mean.abs() <= 4.0 * sigma, "mixed mean {mean}");
    }
}
