//! Qubit pure states, two-qubit density matrices and Bell-basis analytics.
//!
//! Two-qubit matrices use the product basis order `|00⟩, |01⟩, |10⟩, |11⟩`,
//! so the element `a_ijpq = ⟨ij|ρ|pq⟩` lives at row `2i + j`, column `2p + q`.
//! Alice holds the first qubit.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use nalgebra::{Matrix2, Matrix4, Vector2, Vector3, Vector4};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

pub type C64 = Complex64;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-10;
const WEIGHT_SUM_TOL: f64 = 1e-12;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn wrap_phase(beta: f64) -> f64 {
    let b = beta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs.
    if b >= TAU {
        0.0
    } else {
        b
    }
}

/// A qubit pure state `cos(ω/2)|0⟩ + e^{iβ} sin(ω/2)|1⟩` with its
/// orthogonal partner `sin(ω/2)|0⟩ − e^{iβ} cos(ω/2)|1⟩`.
///
/// As a measurement basis, the state itself is the `+1` outcome and the
/// partner is the `−1` outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitPure {
    omega: f64,
    beta: f64,
    amps: Vector2<C64>,
}

impl QubitPure {
    /// Builds the state from Bloch angles. Angles outside `ω ∈ [0, π]`,
    /// `β ∈ [0, 2π)` are folded back into those ranges; this can change the
    /// global phase of the stored amplitudes but never the ray.
    pub fn from_angles(omega: f64, beta: f64) -> Self {
        if (0.0..=PI).contains(&omega) {
            let beta = wrap_phase(beta);
            let (s, co) = (omega / 2.0).sin_cos();
            return QubitPure {
                omega,
                beta,
                amps: Vector2::new(c(co), C64::from_polar(s, beta)),
            };
        }
        let (s, co) = (omega / 2.0).sin_cos();
        Self::from_amplitudes(c(co), C64::from_polar(s, beta))
            .expect("trigonometric amplitudes are never both zero")
    }

    /// Normalises `a|0⟩ + b|1⟩` and strips the global phase so that the
    /// `|0⟩` amplitude is real and non-negative.
    pub fn from_amplitudes(a: C64, b: C64) -> Result<Self> {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if norm.is_nan() || norm <= 1e-150 || norm.is_infinite() {
            return Err(Error::InvalidState(format!(
                "qubit amplitude vector has norm {norm}"
            )));
        }
        let (a, b) = (a / norm, b / norm);
        let (a, b) = if a.norm() > 0.0 {
            let phase = a / a.norm();
            (c(a.norm()), b * phase.conj())
        } else {
            (c(0.0), c(b.norm()))
        };
        let omega = 2.0 * b.norm().atan2(a.re);
        let beta = if b.norm() > 0.0 {
            wrap_phase(b.arg())
        } else {
            0.0
        };
        Ok(QubitPure {
            omega,
            beta,
            amps: Vector2::new(a, b),
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn amplitudes(&self) -> Vector2<C64> {
        self.amps
    }

    /// The orthogonal partner `|ψ⊥⟩`.
    pub fn orthogonal(&self) -> Vector2<C64> {
        let (s, co) = (self.omega / 2.0).sin_cos();
        Vector2::new(c(s), -C64::from_polar(co, self.beta))
    }

    /// Unit Bloch vector `(sin ω cos β, sin ω sin β, cos ω)`.
    pub fn bloch(&self) -> Vector3<f64> {
        let (so, co) = self.omega.sin_cos();
        let (sb, cb) = self.beta.sin_cos();
        Vector3::new(so * cb, so * sb, co)
    }
}

pub fn pure_from_angles(omega: f64, beta: f64) -> QubitPure {
    QubitPure::from_angles(omega, beta)
}

/// The four maximally entangled Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellLabel {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [
        BellLabel::PhiPlus,
        BellLabel::PhiMinus,
        BellLabel::PsiPlus,
        BellLabel::PsiMinus,
    ];

    pub fn vector(self) -> Vector4<C64> {
        let h = FRAC_1_SQRT_2;
        let v = match self {
            BellLabel::PhiPlus => [h, 0.0, 0.0, h],
            BellLabel::PhiMinus => [h, 0.0, 0.0, -h],
            BellLabel::PsiPlus => [0.0, h, h, 0.0],
            BellLabel::PsiMinus => [0.0, h, -h, 0.0],
        };
        Vector4::new(c(v[0]), c(v[1]), c(v[2]), c(v[3]))
    }
}

/// A validated two-qubit density matrix: Hermitian, unit trace, positive
/// semidefinite. Every constructor goes through [`TwoQubitState::new`], so a
/// value of this type is always a physical state.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    rho: Matrix4<C64>,
}

impl TwoQubitState {
    pub fn new(rho: Matrix4<C64>) -> Result<Self> {
        validate(&rho)?;
        Ok(TwoQubitState { rho })
    }

    /// The projector onto a (not necessarily normalised) pure state.
    pub fn from_pure(v: &Vector4<C64>) -> Result<Self> {
        let norm = v.norm();
        if norm.is_nan() || norm <= 1e-150 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v = v.unscale(norm);
        Self::new(v * v.adjoint())
    }

    /// `|a⟩⟨a| ⊗ |b⟩⟨b|`.
    pub fn product(alice: &QubitPure, bob: &QubitPure) -> Self {
        Self::from_pure(&kron2(&alice.amplitudes(), &bob.amplitudes()))
            .expect("product of unit vectors is a unit vector")
    }

    pub fn maximally_mixed() -> Self {
        TwoQubitState {
            rho: Matrix4::identity().scale(0.25),
        }
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.rho
    }

    /// `a_ijpq = ⟨ij|ρ|pq⟩` for bits `i, j, p, q`.
    pub fn entry(&self, i: usize, j: usize, p: usize, q: usize) -> C64 {
        debug_assert!(i < 2 && j < 2 && p < 2 && q < 2);
        self.rho[(2 * i + j, 2 * p + q)]
    }

    /// `⟨v|ρ|v⟩` for a (normalised) vector `v`.
    pub fn expectation(&self, v: &Vector4<C64>) -> f64 {
        quad(&self.rho, v, v).re
    }

    pub fn fidelity(&self, label: BellLabel) -> f64 {
        let f = quad(&self.rho, &label.vector(), &label.vector());
        debug_assert!(f.im.abs() <= 1e-12, "⟨b|ρ|b⟩ has imaginary part {}", f.im);
        f.re
    }

    /// Fidelities with Φ⁺, Φ⁻, Ψ⁺, Ψ⁻ in that order.
    pub fn bell_fidelities(&self) -> [f64; 4] {
        BellLabel::ALL.map(|l| self.fidelity(l))
    }

    /// Convex combination `Σ wᵢ ρᵢ`.
    pub fn mixture(parts: &[(f64, &TwoQubitState)]) -> Result<Self> {
        let mut rho = Matrix4::zeros();
        for (w, s) in parts {
            if *w < 0.0 {
                return Err(Error::domain("mixture weight", *w, "[0, 1]"));
            }
            rho += s.rho.scale(*w);
        }
        Self::new(rho)
    }
}

/// `⟨u|M|v⟩`.
pub(crate) fn quad(m: &Matrix4<C64>, u: &Vector4<C64>, v: &Vector4<C64>) -> C64 {
    u.dotc(&(m * v))
}

/// `|a⟩ ⊗ |b⟩` in the product basis order.
pub fn kron2(a: &Vector2<C64>, b: &Vector2<C64>) -> Vector4<C64> {
    Vector4::new(a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
}

/// Checks the density-matrix invariants: `max|ρ − ρ†| ≤ 1e-12`,
/// `|tr ρ − 1| ≤ 1e-12` and smallest eigenvalue `≥ −1e-10`.
pub fn validate(rho: &Matrix4<C64>) -> Result<()> {
    if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidState("non-finite entry".into()));
    }
    let herm = (rho - rho.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if herm > HERMITIAN_TOL {
        return Err(Error::InvalidState(format!(
            "not Hermitian (max |ρ − ρ†| = {herm:.3e})"
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::InvalidState(format!("trace is {tr}")));
    }
    let min_eig = min_eigenvalue(rho);
    if min_eig < -PSD_TOL {
        return Err(Error::InvalidState(format!(
            "negative eigenvalue {min_eig:.3e}"
        )));
    }
    Ok(())
}

fn min_eigenvalue(rho: &Matrix4<C64>) -> f64 {
    // The eigen solver assumes exact Hermiticity.
    let h = (rho + rho.adjoint()).scale(0.5);
    h.symmetric_eigenvalues().min()
}

pub fn bell_state(label: BellLabel) -> TwoQubitState {
    TwoQubitState::from_pure(&label.vector()).expect("Bell vectors are normalised")
}

pub fn singlet() -> TwoQubitState {
    bell_state(BellLabel::PsiMinus)
}

pub fn fidelity(rho: &TwoQubitState, label: BellLabel) -> f64 {
    rho.fidelity(label)
}

/// `(1 − δ)|Ψ⁻⟩⟨Ψ⁻| + (δ/4) I`, the rotationally invariant noisy singlet.
/// Its singlet fidelity is `1 − 3δ/4`.
pub fn werner_state(delta: f64) -> Result<TwoQubitState> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::domain("delta", delta, "[0, 1]"));
    }
    TwoQubitState::mixture(&[
        (1.0 - delta, &singlet()),
        (delta, &TwoQubitState::maximally_mixed()),
    ])
}

/// Convex mixture of the four Bell projectors. Note the argument order puts
/// the singlet weight first.
pub fn bell_diagonal(
    w_psi_minus: f64,
    w_phi_plus: f64,
    w_phi_minus: f64,
    w_psi_plus: f64,
) -> Result<TwoQubitState> {
    let weights = [
        ("w_psi_minus", w_psi_minus),
        ("w_phi_plus", w_phi_plus),
        ("w_phi_minus", w_phi_minus),
        ("w_psi_plus", w_psi_plus),
    ];
    for (name, w) in weights {
        if w.is_nan() || w < 0.0 {
            return Err(Error::domain(name, w, "[0, 1]"));
        }
    }
    let sum: f64 = weights.iter().map(|(_, w)| w).sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::domain("sum of Bell weights", sum, "1 ± 1e-12"));
    }
    let mut rho = Matrix4::zeros();
    for (w, label) in [
        (w_psi_minus, BellLabel::PsiMinus),
        (w_phi_plus, BellLabel::PhiPlus),
        (w_phi_minus, BellLabel::PhiMinus),
        (w_psi_plus, BellLabel::PsiPlus),
    ] {
        let v = label.vector();
        rho += (v * v.adjoint()).scale(w);
    }
    TwoQubitState::new(rho)
}

/// Draws a Haar-random element of SU(2) from a uniformly random point on
/// the 3-sphere (normalised complex Gaussian pair).
pub fn haar_su2<R: Rng + ?Sized>(rng: &mut R) -> Matrix2<C64> {
    loop {
        let a = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        let b = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if norm > 1e-12 {
            let (a, b) = (a / norm, b / norm);
            return Matrix2::new(a, -b.conj(), b, a.conj());
        }
    }
}

/// Closed form of the `U ⊗ U` twirl: the singlet weight `1 − ε` is kept and
/// the rest is spread evenly, `(1 − ε)|Ψ⁻⟩⟨Ψ⁻| + (ε/3)(I − |Ψ⁻⟩⟨Ψ⁻|)`.
pub fn twirl_analytic(rho: &TwoQubitState) -> TwoQubitState {
    let f = rho.fidelity(BellLabel::PsiMinus).clamp(0.0, 1.0);
    let eps = 1.0 - f;
    bell_diagonal(f, eps / 3.0, eps / 3.0, eps / 3.0)
        .expect("twirl weights are a probability vector")
}

pub fn unitary_deviation(u: &Matrix2<C64>) -> f64 {
    (u.adjoint() * u - Matrix2::identity())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†`.
pub fn apply_local(
    rho: &TwoQubitState,
    u_a: &Matrix2<C64>,
    u_b: &Matrix2<C64>,
) -> Result<TwoQubitState> {
    for u in [u_a, u_b] {
        let dev = unitary_deviation(u);
        if dev.is_nan() || dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
    }
    let k: Matrix4<C64> = u_a.kronecker(u_b);
    let out = k * rho.matrix() * k.adjoint();
    // Restore exact Hermiticity lost to rounding.
    TwoQubitState::new((out + out.adjoint()).scale(0.5))
}

/// A random density matrix of the given rank (1 to 4), drawn from the
/// induced Ginibre ensemble `G G† / tr(G G†)`.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> TwoQubitState {
    let rank = rank.clamp(1, 4);
    let mut rho = Matrix4::<C64>::zeros();
    for _ in 0..rank {
        let g = Vector4::from_fn(|_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        rho += g * g.adjoint();
    }
    let tr = rho.trace().re;
    let rho = rho.unscale(tr);
    TwoQubitState::new((rho + rho.adjoint()).scale(0.5))
        .expect("Ginibre construction is a density matrix")
}
