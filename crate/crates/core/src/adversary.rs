//! Attack scenarios: intercept-resend, bipartite transformation, local
//! hidden variable replacement.
//!
//! Rotationally invariant channel noise is [`crate::qstate::werner_state`].

use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;
use rand::{Rng, RngCore};
use rand_distr::{Distribution, UnitSphere};

use crate::correlations::{bc_set, uniform_qubit, BcMeasurementSet};
use crate::qstate::{bell_diagonal, kron2, TwoQubitState, C64};
use crate::{Error, Outcome, Result};

/// State left behind when Eve measures Bob's half of a singlet in the basis
/// `{|α⟩ = cos ψ|0⟩ + e^{iβ} sin ψ|1⟩, |α⊥⟩}` and forwards the result.
///
/// Averaged over Eve's two equally likely outcomes:
/// `½|α α⊥⟩⟨α α⊥| + ½|α⊥ α⟩⟨α⊥ α|`. The singlet fidelity is always ½.
pub fn intercept_resend_state(psi: f64, beta_phase: f64) -> TwoQubitState {
    let (s, c) = psi.sin_cos();
    let e = C64::from_polar(1.0, beta_phase);
    let alpha = nalgebra::Vector2::new(C64::new(c, 0.0), e * s);
    let alpha_perp = nalgebra::Vector2::new(C64::new(s, 0.0), -e * c);
    let first = TwoQubitState::from_pure(&kron2(&alpha, &alpha_perp)).expect("unit vector");
    let second = TwoQubitState::from_pure(&kron2(&alpha_perp, &alpha)).expect("unit vector");
    TwoQubitState::mixture(&[(0.5, &first), (0.5, &second)]).expect("equal mixture of two states")
}

/// A Bell-diagonal state with singlet fidelity `1 − ε` and Φ⁺ fidelity `f`.
/// The remaining weight `ε − f` is split evenly between Φ⁻ and Ψ⁺.
pub fn transformed_state(epsilon: f64, phi_plus_weight: f64) -> Result<TwoQubitState> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::domain("epsilon", epsilon, "[0, 1]"));
    }
    if !(0.0..=epsilon).contains(&phi_plus_weight) {
        return Err(Error::domain(
            "phi_plus_weight",
            phi_plus_weight,
            "[0, epsilon]",
        ));
    }
    let rest = (epsilon - phi_plus_weight) / 2.0;
    bell_diagonal(1.0 - epsilon, phi_plus_weight, rest, rest)
}

/// A deterministic local hidden variable model. The hidden variable is a
/// unit vector; each party's `±1` response depends only on it and on that
/// party's own measurement direction (a unit Bloch vector).
///
/// Directions `d` and `−d` name the same basis with its outcomes swapped,
/// so responses must be odd: `respond(λ, −d) = −respond(λ, d)`.
pub trait LhvModel: Send + Sync {
    /// Draws the hidden variable. Uniform on the sphere unless overridden.
    fn sample_hidden(&self, rng: &mut dyn RngCore) -> Vector3<f64> {
        Vector3::from(UnitSphere.sample(rng))
    }

    fn respond_alice(&self, hidden: &Vector3<f64>, direction: &Vector3<f64>) -> Outcome;

    fn respond_bob(&self, hidden: &Vector3<f64>, direction: &Vector3<f64>) -> Outcome;

    /// Closed-form `E[A·B]` for fixed directions, when known.
    fn pair_correlation(&self, _alice: &Vector3<f64>, _bob: &Vector3<f64>) -> Option<f64> {
        None
    }

    /// Closed-form `E[Ô]` at Bloch separation `θ`, when known.
    fn rm_expectation(&self, _theta_sep: f64) -> Option<f64> {
        None
    }
}

fn sign(x: f64) -> Outcome {
    if x >= 0.0 {
        1
    } else {
        -1
    }
}

/// Bell's hemisphere model: Alice answers `sign(λ·a)`, Bob `−sign(λ·b)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BellHemisphereModel;

impl LhvModel for BellHemisphereModel {
    fn respond_alice(&self, hidden: &Vector3<f64>, direction: &Vector3<f64>) -> Outcome {
        sign(hidden.dot(direction))
    }

    fn respond_bob(&self, hidden: &Vector3<f64>, direction: &Vector3<f64>) -> Outcome {
        -sign(hidden.dot(direction))
    }

    /// `−1 + 2φ/π` where `φ` is the angle between the directions.
    fn pair_correlation(&self, alice: &Vector3<f64>, bob: &Vector3<f64>) -> Option<f64> {
        let cos = alice.dot(bob) / (alice.norm() * bob.norm());
        Some(-1.0 + 2.0 * cos.clamp(-1.0, 1.0).acos() / PI)
    }

    fn rm_expectation(&self, theta_sep: f64) -> Option<f64> {
        Some(-1.0 + 2.0 * theta_sep / PI)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Response {
    /// `flip · sign(n·d − t)`
    Halfspace {
        normal: Vector3<f64>,
        offset: f64,
        flip: Outcome,
    },
    /// `flip · sign(λ·d)`
    FollowHidden {
        flip: Outcome,
    },
    Constant(Outcome),
}

impl Response {
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let flip = if rng.random::<bool>() { 1 } else { -1 };
        match rng.random_range(0..4) {
            0 | 1 => Response::Halfspace {
                normal: Vector3::from(UnitSphere.sample(rng)),
                offset: rng.random_range(-0.5..0.5),
                flip,
            },
            2 => Response::FollowHidden { flip },
            _ => Response::Constant(flip),
        }
    }

    /// The rule applied to the canonical half of the sphere and extended
    /// to the other half by oddness.
    fn eval(&self, hidden: &Vector3<f64>, direction: &Vector3<f64>) -> Outcome {
        if is_canonical(direction) {
            self.eval_raw(hidden, direction)
        } else {
            -self.eval_raw(hidden, &-direction)
        }
    }

    fn eval_raw(&self, hidden: &Vector3<f64>, direction: &Vector3<f64>) -> Outcome {
        match *self {
            Response::Halfspace {
                normal,
                offset,
                flip,
            } => flip * sign(normal.dot(direction) - offset),
            Response::FollowHidden { flip } => flip * sign(hidden.dot(direction)),
            Response::Constant(o) => o,
        }
    }
}

/// Picks one direction from each antipodal pair: `z > 0`, ties broken by
/// `y`, then `x`.
fn is_canonical(d: &Vector3<f64>) -> bool {
    (d.z, d.y, d.x) > (0.0, 0.0, 0.0)
}

/// A randomly generated deterministic LHV model. The sphere of hidden
/// variables is cut into Voronoi cells around random centres and each cell
/// carries its own pair of local response rules.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomCellModel {
    centres: Vec<Vector3<f64>>,
    alice: Vec<Response>,
    bob: Vec<Response>,
}

impl RandomCellModel {
    pub fn generate<R: Rng + ?Sized>(rng: &mut R, cells: usize) -> Self {
        let cells = cells.max(1);
        RandomCellModel {
            centres: (0..cells)
                .map(|_| Vector3::from(UnitSphere.sample(rng)))
                .collect(),
            alice: (0..cells).map(|_| Response::random(rng)).collect(),
            bob: (0..cells).map(|_| Response::random(rng)).collect(),
        }
    }

    fn cell(&self, hidden: &Vector3<f64>) -> usize {
        self.centres
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.dot(hidden).total_cmp(&b.dot(hidden)))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }
}

impl LhvModel for RandomCellModel {
    fn respond_alice(&self, hidden: &Vector3<f64>, direction: &Vector3<f64>) -> Outcome {
        self.alice[self.cell(hidden)].eval(hidden, direction)
    }

    fn respond_bob(&self, hidden: &Vector3<f64>, direction: &Vector3<f64>) -> Outcome {
        self.bob[self.cell(hidden)].eval(hidden, direction)
    }
}

/// A unit vector at angle `theta` from `axis`, with uniformly random
/// azimuth about it.
pub fn rotate_away<R: Rng + ?Sized>(rng: &mut R, axis: &Vector3<f64>, theta: f64) -> Vector3<f64> {
    let helper = if axis.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let e1 = axis.cross(&helper).normalize();
    let e2 = axis.cross(&e1);
    let phi = rng.random_range(0.0..TAU);
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    axis * ct + (e1 * cp + e2 * sp) * st
}

/// One random measurement sample `Ô` from an LHV model: Alice's direction
/// uniform on the sphere, Bob's at Bloch angle `θ` from it.
pub fn lhv_rm_draw<R: Rng, M: LhvModel + ?Sized>(
    rng: &mut R,
    model: &M,
    theta_sep: f64,
) -> Outcome {
    let hidden = model.sample_hidden(rng);
    let a = uniform_qubit(rng).bloch();
    let b = rotate_away(rng, &a, theta_sep);
    model.respond_alice(&hidden, &a) * model.respond_bob(&hidden, &b)
}

/// One Braunstein-Caves sample from an LHV model over a prepared set.
pub fn lhv_bc_draw_from<R: Rng, M: LhvModel + ?Sized>(
    rng: &mut R,
    model: &M,
    set: &BcMeasurementSet,
) -> Outcome {
    let hidden = model.sample_hidden(rng);
    let pair = &set.pairs()[rng.random_range(0..set.pairs().len())];
    pair.sign
        * model.respond_alice(&hidden, &pair.alice.bloch())
        * model.respond_bob(&hidden, &pair.bob.bloch())
}

pub fn lhv_bc_draw<R: Rng, M: LhvModel + ?Sized>(
    rng: &mut R,
    model: &M,
    n: u32,
) -> Result<Outcome> {
    Ok(lhv_bc_draw_from(rng, model, &bc_set(n)?))
}

/// Closed-form `E[Ĉ]` for a model that knows its pair correlations.
pub fn lhv_bc_expectation<M: LhvModel + ?Sized>(model: &M, n: u32) -> Result<Option<f64>> {
    let set = bc_set(n)?;
    let mut total = 0.0;
    for p in set.pairs() {
        match model.pair_correlation(&p.alice.bloch(), &p.bob.bloch()) {
            Some(c) => total += p.sign as f64 * c,
            None => return Ok(None),
        }
    }
    Ok(Some(total / set.pairs().len() as f64))
}
