use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};
use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::sync::Arc;

use anyhow::Context;
use singlet_core::checks::{run_all, VerifyConfig};
use singlet_core::correlations::Resolution;
use singlet_core::hypotest::{
    bc_error_gap_root, bell_model_gap, delta_threshold, lhv_gap, optimal_bell_theta,
};
use singlet_core::simlab::{default_n_grid, power_curve, scheme_comparison_table};
use singlet_core::{BellHemisphereModel, Scenario, Scheme};

use crate::args::{
    GapsArgs, PowerArgs, ScenarioChoice, SchemeChoice, TablesArgs, ThetaPolicy, VerifyArgs,
};
use crate::format::{opt, sig9};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Verification(usize),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Other(e.into())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Other(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn csv_writer(path: Option<&Path>) -> anyhow::Result<csv::Writer<Box<dyn Write>>> {
    let sink: Box<dyn Write> = match path {
        Some(p) => {
            Box::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)
        }
        None => Box::new(io::stdout().lock()),
    };
    Ok(csv::Writer::from_writer(sink))
}

fn report_written(path: Option<&Path>, rows: usize) {
    if let Some(p) = path {
        println!("wrote {rows} rows to {}", p.display());
    }
}

pub fn tables(args: &TablesArgs) -> Outcome {
    let n = args.n_param;
    let mut scenarios = vec![Scenario::Singlet];
    for psi in [0.0, FRAC_PI_8, FRAC_PI_4] {
        for beta in [0.0, FRAC_PI_4, FRAC_PI_2] {
            scenarios.push(Scenario::InterceptResend { psi, beta });
        }
    }
    for epsilon in [0.1, 0.2, 0.3] {
        for phi_plus in [0.0, epsilon / 3.0, epsilon] {
            scenarios.push(Scenario::Transformed { epsilon, phi_plus });
        }
    }
    for i in 0..=5 {
        scenarios.push(Scenario::Werner {
            delta: 0.2 * i as f64,
        });
    }
    let table =
        scheme_comparison_table(&scenarios, n).map_err(|e| Failure::Usage(e.to_string()))?;

    let out = args.out.out.as_deref();
    let mut w = csv_writer(out)?;
    w.write_record([
        "scenario", "psi", "beta", "epsilon", "phi_plus", "delta", "n_param", "e_bc", "e_rm", "p",
        "q", "verdict",
    ])?;
    for row in &table {
        let mut params = [None::<f64>; 5];
        match row.scenario {
            Scenario::InterceptResend { psi, beta } => {
                params[0] = Some(psi);
                params[1] = Some(beta);
            }
            Scenario::Transformed { epsilon, phi_plus } => {
                params[2] = Some(epsilon);
                params[3] = Some(phi_plus);
            }
            Scenario::Werner { delta } => params[4] = Some(delta),
            _ => {}
        }
        let mut record = vec![row.scenario.name().to_string()];
        record.extend(params.iter().map(|&p| opt(p)));
        record.push(n.to_string());
        record.extend([row.e_bc, row.e_rm, row.p, row.q].map(sig9));
        record.push(row.verdict.label().to_string());
        w.write_record(&record)?;
    }
    w.flush()?;
    report_written(out, table.len());
    Ok(())
}

fn scenario(args: &PowerArgs) -> Result<Scenario, Failure> {
    Ok(match args.scenario {
        ScenarioChoice::Singlet => Scenario::Singlet,
        ScenarioChoice::Intercept => Scenario::InterceptResend {
            psi: args.psi,
            beta: args.beta,
        },
        ScenarioChoice::Transform => {
            if args.phi_plus > args.epsilon {
                return Err(Failure::Usage(format!(
                    "--phi-plus {} must not exceed --epsilon {}",
                    args.phi_plus, args.epsilon
                )));
            }
            Scenario::Transformed {
                epsilon: args.epsilon,
                phi_plus: args.phi_plus,
            }
        }
        ScenarioChoice::Werner => Scenario::Werner { delta: args.delta },
        ScenarioChoice::LhvBell => Scenario::Lhv(Arc::new(BellHemisphereModel)),
    })
}

pub fn power(args: &PowerArgs) -> Outcome {
    let scenario = scenario(args)?;
    let theta = match (args.theta, args.theta_policy) {
        (Some(t), _) => t,
        (None, Some(ThetaPolicy::Arcsin2Pi)) => optimal_bell_theta(),
        (None, _) => PI / (2.0 * args.n_param as f64),
    };
    let bc = Scheme::Bc {
        n_param: args.n_param,
    };
    let rm = Scheme::Rm { theta_sep: theta };
    let schemes = match args.scheme {
        SchemeChoice::Bc => vec![bc],
        SchemeChoice::Rm => vec![rm],
        SchemeChoice::Both => vec![bc, rm],
    };
    let grid = args.samples.map(|n| vec![n]).unwrap_or_else(default_n_grid);

    let out = args.out.out.as_deref();
    let mut w = csv_writer(out)?;
    w.write_record([
        "scheme",
        "n",
        "empirical",
        "exact",
        "asymptotic",
        "trials",
        "seed",
    ])?;
    let mut rows = 0;
    for scheme in &schemes {
        let records = power_curve(&scenario, scheme, args.alpha, &grid, args.trials, args.seed)
            .context("power study failed")?;
        for r in &records {
            w.write_record([
                r.scheme.label().to_string(),
                r.n.to_string(),
                sig9(r.empirical_rejection),
                opt(r.exact_power),
                opt(r.asymptotic_power),
                r.trials.to_string(),
                r.master_seed.to_string(),
            ])?;
        }
        rows += records.len();
    }
    w.flush()?;
    report_written(out, rows);
    Ok(())
}

pub fn gaps(args: &GapsArgs) -> Outcome {
    let out = args.out.out.as_deref();
    let mut w = csv_writer(out)?;
    w.write_record(["quantity", "argument", "value"])?;
    let mut rows = 0;
    let mut emit = |q: &str, arg: String, v: f64| -> Result<(), csv::Error> {
        rows += 1;
        w.write_record([q.to_string(), arg, sig9(v)])
    };
    let core = |e: singlet_core::Error| Failure::Other(e.into());
    for n in 2..=args.max_n {
        emit("D", n.to_string(), lhv_gap(n).map_err(core)?)?;
    }
    for i in 0..args.theta_points {
        let theta = FRAC_PI_2 * i as f64 / (args.theta_points - 1) as f64;
        emit("D_tilde", sig9(theta), bell_model_gap(theta))?;
    }
    let star = optimal_bell_theta();
    emit("theta_star", String::new(), star)?;
    emit("D_tilde_max", sig9(star), bell_model_gap(star))?;
    for n in 2..=args.max_n {
        let t = delta_threshold(n).map_err(core)?;
        emit("delta_threshold", n.to_string(), t.threshold)?;
        emit("rm_validity_cap", n.to_string(), t.rm_validity_cap)?;
        emit("rm_delta_tolerance", n.to_string(), t.rm_tolerance())?;
        emit(
            "bc_gap_root",
            n.to_string(),
            bc_error_gap_root(n).map_err(core)?,
        )?;
    }
    w.flush()?;
    report_written(out, rows);
    Ok(())
}

pub fn verify(args: &VerifyArgs) -> Outcome {
    let config = VerifyConfig {
        resolution: Resolution::cube(args.resolution as usize),
        seed: args.seed,
        perturbation: args.perturb,
        ..VerifyConfig::default()
    };
    let results = run_all(&config).context("verification could not run")?;
    for r in &results {
        println!(
            "{} {}: deviation {} (tolerance {})",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            sig9(r.deviation),
            sig9(r.tolerance)
        );
    }
    if let Some(path) = args.out.out.as_deref() {
        let mut w = csv_writer(Some(path))?;
        w.write_record(["check", "deviation", "tolerance", "passed"])?;
        for r in &results {
            w.write_record([
                r.name.to_string(),
                sig9(r.deviation),
                sig9(r.tolerance),
                r.passed.to_string(),
            ])?;
        }
        w.flush()?;
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!(
        "{} of {} checks passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Verification(failed))
    }
}
