use std::f64::consts::FRAC_PI_4;
use std::sync::Arc;

use approx::assert_abs_diff_eq;
use singlet_core::hypotest::{bernoulli_params, exact_power_against, optimal_bell_theta};
use singlet_core::simlab::{power_curve, Scenario};
use singlet_core::{BellHemisphereModel, Scheme};

#[test]
fn scenario_probabilities_match_bernoulli_params() {
    for scenario in [
        Scenario::Singlet,
        Scenario::InterceptResend {
            psi: 0.4,
            beta: 2.2,
        },
        Scenario::Transformed {
            epsilon: 0.25,
            phi_plus: 0.05,
        },
        Scenario::Werner { delta: 0.3 },
    ] {
        let rho = scenario.state().unwrap().unwrap();
        for n in 2..=5 {
            let (p, q) = bernoulli_params(&rho, n).unwrap();
            assert_abs_diff_eq!(
                scenario
                    .success_probability(&Scheme::Bc { n_param: n })
                    .unwrap(),
                p,
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                scenario
                    .success_probability(&Scheme::rm_matched(n))
                    .unwrap(),
                q,
                epsilon = 1e-12
            );
        }
    }
}

#[test]
fn power_study_parameters() {
    let transformed = Scenario::Transformed {
        epsilon: 0.1,
        phi_plus: 0.0,
    };
    assert_abs_diff_eq!(
        transformed
            .success_probability(&Scheme::Bc { n_param: 2 })
            .unwrap(),
        0.181802,
        epsilon = 1e-6
    );
    assert_abs_diff_eq!(
        transformed
            .success_probability(&Scheme::rm_matched(2))
            .unwrap(),
        0.193587,
        epsilon = 1e-6
    );

    let bell = Scenario::Lhv(Arc::new(BellHemisphereModel));
    let bc = Scheme::Bc { n_param: 2 };
    let rm = Scheme::Rm {
        theta_sep: optimal_bell_theta(),
    };
    assert_abs_diff_eq!(
        bell.success_probability(&bc).unwrap(),
        0.25,
        epsilon = 1e-12
    );
    assert_abs_diff_eq!(
        bell.success_probability(&rm).unwrap(),
        0.219668,
        epsilon = 1e-6
    );
    assert_abs_diff_eq!(bc.null_success_probability(), 0.146447, epsilon = 1e-6);
    assert_abs_diff_eq!(rm.null_success_probability(), 0.114411, epsilon = 1e-6);
}

#[test]
fn rm_beats_bc_on_computational_intercept() {
    let scenario = Scenario::InterceptResend {
        psi: 0.0,
        beta: 0.0,
    };
    let bc = Scheme::Bc { n_param: 2 };
    let rm = Scheme::Rm {
        theta_sep: FRAC_PI_4,
    };
    let p = scenario.success_probability(&bc).unwrap();
    let q = scenario.success_probability(&rm).unwrap();
    let p0 = bc.null_success_probability();
    for n in [20, 60, 150, 400] {
        assert!(
            exact_power_against(n, 0.01, p0, q).unwrap()
                > exact_power_against(n, 0.01, p0, p).unwrap()
        );
    }
}

#[test]
fn power_curves_are_reproducible_and_seed_sensitive() {
    let scenario = Scenario::Werner { delta: 0.3 };
    let scheme = Scheme::Bc { n_param: 3 };
    let run = |seed| power_curve(&scenario, &scheme, 0.05, &[30, 90], 100, seed).unwrap();
    assert_eq!(run(11), run(11));
    let (a, b) = (run(11), run(12));
    assert_eq!(a[0].exact_power, b[0].exact_power);
    assert!(a
        .iter()
        .zip(&b)
        .any(|(x, y)| x.empirical_rejection != y.empirical_rejection));
}

#[test]
fn empirical_ordering_follows_success_probabilities() {
    let scenario = Scenario::Transformed {
        epsilon: 0.3,
        phi_plus: 0.3,
    };
    let bc = power_curve(&scenario, &Scheme::Bc { n_param: 2 }, 0.01, &[60], 400, 3).unwrap();
    let rm = power_curve(&scenario, &Scheme::rm_matched(2), 0.01, &[60], 400, 3).unwrap();
    let (pb, pr) = (bc[0].exact_power.unwrap(), rm[0].exact_power.unwrap());
    let noise = 4.0 * ((pb * (1.0 - pb) + pr * (1.0 - pr)) / 400.0).sqrt();
    assert!(pb - pr > noise, "bc {pb} rm {pr}");
    assert!(bc[0].empirical_rejection > rm[0].empirical_rejection);
}
