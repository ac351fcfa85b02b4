use devex_core::concentration::{
    azuma_bound_uniform, quad_cubic_floor, refined_bound, refined_exponent,
};
use devex_core::exponents::{chernoff_information, compare_report, ComponentTable, Event};
use devex_core::fisher::{
    bernoulli_family, limit_ratios_toward, ternary_family, Direction, LimitRatios,
};
use devex_core::montecarlo::{exact_binary_tail, simulate_test, Estimate};
use devex_core::{Hypothesis, MartingaleParams, ParametricFamily, SimConfig, Thresholds};
use log::{debug, info};
use serde_json::Value;

use crate::cli::{BoundsArgs, ExponentsArgs, FamilyName, FisherArgs, SimulateArgs, ThresholdArgs};
use crate::error::CliError;
use crate::obj;
use crate::pair_spec::PairSpec;
use crate::report::{num, opt_num, Object, Report};

/// Name of the probability a component exponent governs.
fn component_name(h: Hypothesis, e: Event) -> &'static str {
    match (h, e) {
        (Hypothesis::H1, Event::ErrorOrErasure) => "alpha1",
        (Hypothesis::H1, Event::Error) => "alpha2",
        (Hypothesis::H2, Event::ErrorOrErasure) => "beta1",
        (Hypothesis::H2, Event::Error) => "beta2",
    }
}

fn indexed(table: &ComponentTable) -> Value {
    let mut m = Object::new();
    for (h, e, v) in table.iter() {
        m.insert(format!("{}{}", h.index(), e.index()), num(v));
    }
    Value::Object(m)
}

fn per_hypothesis(values: [f64; 2]) -> Value {
    Value::Object(obj! {"1" => num(values[0]), "2" => num(values[1])})
}

fn pair_inputs(path: &std::path::Path, spec: &PairSpec) -> Object {
    obj! {
        "pair_file" => path.display().to_string(),
        "alphabet" => spec.alphabet.clone(),
        "p1" => spec.p1.iter().map(|&v| num(v)).collect::<Vec<_>>(),
        "p2" => spec.p2.iter().map(|&v| num(v)).collect::<Vec<_>>(),
    }
}

fn thresholds(args: &ThresholdArgs, inputs: &mut Object) -> Thresholds {
    inputs.insert("lambda_upper".into(), num(args.lambda_upper));
    inputs.insert("lambda_lower".into(), num(args.lambda_lower));
    Thresholds::new(args.lambda_upper, args.lambda_lower)
}

pub fn exponents(args: &ExponentsArgs) -> Result<Report, CliError> {
    let spec = PairSpec::load(&args.pair_file)?;
    let pair = spec.to_pair()?;
    let mut inputs = pair_inputs(&args.pair_file, &spec);
    let th = thresholds(&args.thresholds, &mut inputs);
    let report = compare_report(&pair, &th)?;
    let chernoff = chernoff_information(&pair);
    info!(
        "exact P_e exponent {:.6e}, chernoff {:.6e}",
        report.exact.pe2, chernoff.value
    );

    let mut components = Object::new();
    for (h, e, refined) in report.refined.components.iter() {
        components.insert(
            component_name(h, e).into(),
            Value::Object(obj! {
                "exact" => num(report.exact.component(h, e)),
                "refined_lb" => num(refined),
                "azuma_lb" => num(report.azuma.components.get(h, e)),
                "improvement" => num(report.improvement.get(h, e)),
                "epsilon" => num(report.inputs.epsilons.get(h, e)),
                "delta" => num(report.inputs.deltas.get(h, e)),
            }),
        );
    }
    let stats = &report.inputs.stats;
    let mut results = obj! {
        "exact_pe" => num(report.exact.pe2),
        "exact_pe_erasure" => num(report.exact.pe1),
        "refined_lb" => num(report.refined.pe2),
        "refined_lb_erasure" => num(report.refined.pe1),
        "azuma_lb" => num(report.azuma.pe2),
        "azuma_lb_erasure" => num(report.azuma.pe1),
        "chernoff" => num(chernoff.value),
        "chernoff_t_star" => num(chernoff.t_star),
        "d12" => num(pair.d12()),
        "d21" => num(pair.d21()),
        "t_star" => Value::Object(obj! {
            "lambda1" => num(report.exact.rate_at_lambda1.t_star),
            "lambda2" => num(report.exact.rate_at_lambda2.t_star),
        }),
        "components" => Value::Object(components),
        "gammas" => per_hypothesis(report.gammas()),
        "jump_bounds" => per_hypothesis([stats[0].d, stats[1].d]),
        "sigma_sq" => per_hypothesis([stats[0].sigma_sq, stats[1].sigma_sq]),
        "second_order_factor" => per_hypothesis(report.second_order_factor),
        "deltas" => indexed(&report.inputs.deltas),
        "epsilons" => indexed(&report.inputs.epsilons),
    };
    if let Some(r) = report.reference {
        results.insert(
            "reference".into(),
            Value::Object(obj! {
                "chernoff" => num(r.chernoff),
                "refined_lb" => num(r.refined_lb),
                "azuma_lb" => num(r.azuma_lb),
                "gamma1" => num(r.gamma1),
                "gamma2" => num(r.gamma2),
                "note" => "reference values; gamma2 there weights the second jump variance by p1",
            }),
        );
    }
    Ok(Report {
        command: "exponents",
        inputs,
        results,
    })
}

pub fn bounds(args: &BoundsArgs) -> Result<Report, CliError> {
    let params = MartingaleParams::new(args.d, args.sigma_sq)?;
    let refined = refined_bound(&params, args.n, args.alpha, args.sided)?;
    let (delta, gamma) = (params.delta(args.alpha), params.gamma());
    let azuma = azuma_bound_uniform(args.d, args.n, args.alpha * args.n as f64)? / 2.0
        * args.sided.factor();
    let floor = if delta <= 1.0 {
        num(quad_cubic_floor(delta, gamma)?)
    } else {
        Value::Null
    };
    Ok(Report {
        command: "bounds",
        inputs: obj! {
            "d" => num(args.d),
            "sigma_sq" => num(args.sigma_sq),
            "n" => args.n,
            "alpha" => num(args.alpha),
            "sided" => args.sided.to_string(),
        },
        results: obj! {
            "azuma" => num(azuma),
            "refined" => num(refined),
            "azuma_exponent" => num(delta * delta / 2.0),
            "refined_exponent" => num(refined_exponent(delta, gamma)?),
            "quad_cubic_floor" => floor,
            "delta" => num(delta),
            "gamma" => num(gamma),
        },
    })
}

fn ratios(r: &LimitRatios) -> Value {
    Value::Object(obj! {
        "divergence" => num(r.divergence),
        "chernoff" => num(r.chernoff),
        "el" => num(r.el),
        "loosened" => num(r.loosened),
    })
}

pub fn fisher(args: &FisherArgs) -> Result<Report, CliError> {
    let family: Box<dyn ParametricFamily> = match args.family {
        FamilyName::Bernoulli => {
            if args.alpha.is_some() {
                return Err(CliError::Usage(
                    "--alpha applies to the ternary family only".into(),
                ));
            }
            Box::new(bernoulli_family())
        }
        FamilyName::Ternary => {
            let alpha = args
                .alpha
                .ok_or_else(|| CliError::Usage("the ternary family requires --alpha".into()))?;
            Box::new(ternary_family(alpha)?)
        }
    };
    let direction = if args.below {
        Direction::Below
    } else {
        Direction::Above
    };
    let report = limit_ratios_toward(family.as_ref(), args.theta, &args.offsets, direction)?;
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|row| Value::Object(obj! {"h" => num(row.h), "ratios" => ratios(&row.ratios)}))
        .collect();
    let mut inputs = obj! {
        "family" => family.name().to_string(),
        "theta" => num(args.theta),
        "offsets" => args.offsets.iter().map(|&h| num(h)).collect::<Vec<_>>(),
        "direction" => if args.below { "below" } else { "above" },
    };
    if let Some(a) = args.alpha {
        inputs.insert("alpha".into(), num(a));
    }
    Ok(Report {
        command: "fisher",
        inputs,
        results: obj! {
            "j" => num(report.j),
            "j_over_2" => num(report.j_over_2()),
            "j_over_8" => num(report.j_over_8()),
            "rows" => rows,
            "limits" => ratios(&report.limits),
            "a_theta" => num(report.a_theta),
        },
    })
}

fn estimate(e: &Estimate, exact: Option<f64>) -> Value {
    let mut m = obj! {
        "estimate" => num(e.value),
        "ci_lower" => num(e.interval.lower),
        "ci_upper" => num(e.interval.upper),
        "trials" => e.trials,
        "empirical_exponent" => opt_num(e.empirical_exponent),
        "rule_of_three_upper" => opt_num(e.rule_of_three),
    };
    if let Some(c) = e.count {
        m.insert("count".into(), c.into());
    }
    if let Some(x) = exact {
        m.insert("exact".into(), num(x));
        m.insert("exact_in_ci".into(), e.interval.contains(x).into());
    }
    Value::Object(m)
}

pub fn simulate(args: &SimulateArgs) -> Result<Report, CliError> {
    let spec = PairSpec::load(&args.pair_file)?;
    let pair = spec.to_pair()?;
    let mut inputs = pair_inputs(&args.pair_file, &spec);
    let th = thresholds(&args.thresholds, &mut inputs);
    inputs.insert("n".into(), args.n.into());
    inputs.insert("trials".into(), args.trials.into());
    inputs.insert("seed".into(), args.seed.into());
    inputs.insert("pi1".into(), num(args.pi1));

    let config = SimConfig::new(args.n, args.trials, args.seed, th, args.pi1);
    debug!(
        "simulating on {} worker threads",
        rayon::current_num_threads()
    );
    let sim = simulate_test(&pair, &config)?;
    let exact = if pair.len() == 2 {
        Some(exact_binary_tail(&pair, args.n, &th)?)
    } else {
        None
    };
    let pi1 = args.pi1;
    let pick =
        |f: fn(&devex_core::montecarlo::ExactTail, f64) -> f64| exact.as_ref().map(|t| f(t, pi1));
    Ok(Report {
        command: "simulate",
        inputs,
        results: obj! {
            "alpha1" => estimate(&sim.alpha1, pick(|t, _| t.alpha1)),
            "alpha2" => estimate(&sim.alpha2, pick(|t, _| t.alpha2)),
            "beta1" => estimate(&sim.beta1, pick(|t, _| t.beta1)),
            "beta2" => estimate(&sim.beta2, pick(|t, _| t.beta2)),
            "pe_erasure" => estimate(&sim.pe1, pick(|t, p| t.pe1(p))),
            "pe" => estimate(&sim.pe2, pick(|t, p| t.pe2(p))),
            "exact_oracle" => exact.is_some(),
        },
    })
}
