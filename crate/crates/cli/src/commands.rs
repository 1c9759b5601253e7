use std::path::Path;

use eelkit::sim::{coverage_run, length_run, CoverageReport, LengthReport, RunOptions};
use eelkit::{
    bartlett_constant, chisq_quantile, confidence_interval_1d, contour_polyline_2d, region_contains_at,
    resolve_bartlett, statistic, LogLik, MomentSet, Sample,
};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::input::{parse_vector, read_rows};
use crate::output::{fmt_num, render_csv, render_json};
use crate::{BartlettArgs, CiArgs, ContourArgs, EvalArgs, Format, RegionArgs, SimArgs};

fn load_sample(path: Option<&Path>) -> Result<Sample, CliError> {
    let rows = read_rows(path)?;
    if rows.is_empty() {
        return Err(CliError::Data("input contains no observations".into()));
    }
    Ok(Sample::from_rows(&rows)?)
}

fn check_level(level: f64) -> Result<(), CliError> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--level must lie in (0, 1), got {level}")))
    }
}

fn document(command: &str, inputs: Value, results: Value) -> String {
    render_json(json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "inputs": inputs,
        "results": results,
    }))
}

fn loglik_json(v: LogLik) -> Value {
    match v {
        LogLik::Finite(x) => json!({ "value": x, "infinite": false }),
        LogLik::Infinite => json!({ "value": null, "infinite": true }),
    }
}

fn loglik_cell(v: LogLik) -> String {
    v.finite().map_or_else(|| "inf".to_string(), fmt_num)
}

fn vector_cell(v: &[f64]) -> String {
    v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(" ")
}

pub fn eval(a: EvalArgs) -> Result<String, CliError> {
    let theta = parse_vector(&a.theta)?;
    let s = load_sample(a.common.input.as_deref())?;
    let b = resolve_bartlett(&s, a.method, a.common.b)?;
    let v = statistic(&s, a.method, &theta, b)?;
    Ok(match a.common.format {
        Format::Json => document(
            "eval",
            json!({ "method": a.method, "theta": theta, "b": a.common.b, "n": s.n(), "d": s.dim() }),
            json!({ "loglik": loglik_json(v), "b_used": b }),
        ),
        Format::Csv => render_csv(
            &["method", "theta", "loglik", "b_used"],
            &[vec![a.method.to_string(), vector_cell(&theta), loglik_cell(v), b.map(fmt_num).unwrap_or_default()]],
        ),
    })
}

pub fn ci(a: CiArgs) -> Result<String, CliError> {
    check_level(a.level)?;
    let s = load_sample(a.common.input.as_deref())?;
    let results =
        a.method.iter().map(|&m| confidence_interval_1d(&s, m, a.level, a.common.b)).collect::<Result<Vec<_>, _>>()?;
    Ok(match a.common.format {
        Format::Json => {
            let items: Vec<Value> = results
                .iter()
                .map(|r| {
                    let (lo, hi) = r.interval.expect("scalar interval");
                    json!({ "method": r.method, "level": r.level, "critical": r.critical,
                            "lower": lo, "upper": hi, "b_used": r.b_used })
                })
                .collect();
            document(
                "ci",
                json!({ "methods": a.method, "level": a.level, "b": a.common.b, "n": s.n(), "mean": s.mean()[0] }),
                Value::Array(items),
            )
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| {
                    let (lo, hi) = r.interval.expect("scalar interval");
                    vec![
                        r.method.to_string(),
                        fmt_num(r.level),
                        fmt_num(r.critical),
                        fmt_num(lo),
                        fmt_num(hi),
                        r.b_used.map(fmt_num).unwrap_or_default(),
                    ]
                })
                .collect();
            render_csv(&["method", "level", "critical", "lower", "upper", "b_used"], &rows)
        }
    })
}

pub fn region(a: RegionArgs) -> Result<String, CliError> {
    let s = load_sample(a.common.input.as_deref())?;
    let critical = match (a.level, a.critical) {
        (Some(level), _) => {
            check_level(level)?;
            chisq_quantile(s.dim(), level)?
        }
        (None, Some(c)) => c,
        (None, None) => unreachable!("clap requires --level or --critical"),
    };
    let points = match (&a.theta, &a.points) {
        (Some(t), _) => vec![parse_vector(t)?],
        (None, Some(p)) => read_rows(Some(p))?,
        (None, None) => unreachable!("clap requires --theta or --points"),
    };
    let b = resolve_bartlett(&s, a.method, a.common.b)?;
    let inside =
        points.iter().map(|p| region_contains_at(&s, a.method, critical, p, b)).collect::<Result<Vec<bool>, _>>()?;
    Ok(match a.common.format {
        Format::Json => {
            let items: Vec<Value> =
                points.iter().zip(&inside).map(|(p, i)| json!({ "theta": p, "inside": i })).collect();
            let all = inside.iter().all(|&i| i);
            document(
                "region",
                json!({ "method": a.method, "level": a.level, "critical": critical, "b": a.common.b,
                        "n": s.n(), "d": s.dim() }),
                json!({ "all_inside": all, "points": items, "b_used": b }),
            )
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> =
                points.iter().zip(&inside).map(|(p, i)| vec![vector_cell(p), i.to_string()]).collect();
            render_csv(&["theta", "inside"], &rows)
        }
    })
}

pub fn contour(a: ContourArgs) -> Result<String, CliError> {
    let s = load_sample(a.common.input.as_deref())?;
    let tau = match (a.tau, a.level) {
        (Some(t), _) => t,
        (None, Some(level)) => {
            check_level(level)?;
            chisq_quantile(2, level)?
        }
        (None, None) => unreachable!("clap requires --tau or --level"),
    };
    let pts = contour_polyline_2d(&s, a.method, tau, a.rays, a.common.b)?;
    Ok(match a.common.format {
        Format::Json => document(
            "contour",
            json!({ "method": a.method, "tau": tau, "rays": a.rays, "b": a.common.b, "n": s.n() }),
            json!({ "center": s.mean(), "points": pts }),
        ),
        Format::Csv => {
            let rows: Vec<Vec<String>> = pts.iter().map(|p| vec![fmt_num(p[0]), fmt_num(p[1])]).collect();
            render_csv(&["x", "y"], &rows)
        }
    })
}

fn sim_inputs(a: &SimArgs) -> Value {
    json!({ "dist": a.dist.name(), "n": a.n, "level": a.level, "methods": a.methods,
            "reps": a.reps, "seed": a.seed, "b": a.b })
}

fn check_sim(a: &SimArgs) -> Result<(), CliError> {
    check_level(a.level)?;
    if a.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    Ok(())
}

pub fn coverage(a: SimArgs, threads: Option<usize>) -> Result<String, CliError> {
    check_sim(&a)?;
    let r: CoverageReport =
        coverage_run(&a.dist, a.n, a.level, &a.methods, a.b, a.reps, a.seed, RunOptions { threads })?;
    Ok(match a.format {
        Format::Json => document("coverage", sim_inputs(&a), serde_json::to_value(&r).expect("report serializes")),
        Format::Csv => {
            let rows: Vec<Vec<String>> = r
                .methods
                .iter()
                .map(|m| {
                    vec![
                        m.method.to_string(),
                        m.hits.to_string(),
                        m.reps.to_string(),
                        fmt_num(m.coverage),
                        fmt_num(m.mc_se),
                        m.undefined.to_string(),
                    ]
                })
                .collect();
            render_csv(&["method", "hits", "reps", "coverage", "mc_se", "undefined"], &rows)
        }
    })
}

pub fn lengths(a: SimArgs, threads: Option<usize>) -> Result<String, CliError> {
    check_sim(&a)?;
    let r: LengthReport = length_run(&a.dist, a.n, a.level, &a.methods, a.b, a.reps, a.seed, RunOptions { threads })?;
    Ok(match a.format {
        Format::Json => document("lengths", sim_inputs(&a), serde_json::to_value(&r).expect("report serializes")),
        Format::Csv => {
            let rows: Vec<Vec<String>> = r
                .methods
                .iter()
                .map(|m| {
                    vec![m.method.to_string(), fmt_num(m.mean_length), m.reps.to_string(), m.undefined.to_string()]
                })
                .collect();
            render_csv(&["method", "mean_length", "reps", "undefined"], &rows)
        }
    })
}

pub fn bartlett(a: BartlettArgs) -> Result<String, CliError> {
    let (inputs, moments) = match a.dist {
        Some(dist) => {
            let m = dist.moments().ok_or_else(|| {
                CliError::Usage(format!("no theoretical Bartlett constant for {dist}; it must be scalar"))
            })?;
            (json!({ "dist": dist.name() }), m)
        }
        None => {
            let s = load_sample(a.input.as_deref())?;
            if s.dim() != 1 {
                return Err(CliError::Data(format!("Bartlett estimate needs scalar data, got {} columns", s.dim())));
            }
            let b = eelkit::bartlett_plugin(&s)?;
            let m = MomentSet::from_values(s.as_flat())?;
            debug_assert_eq!(bartlett_constant(&m)?, b);
            (json!({ "n": s.n() }), m)
        }
    };
    let b = bartlett_constant(&moments)?;
    Ok(match a.format {
        Format::Json => {
            document("bartlett", inputs, json!({ "mu2": moments.mu2, "mu3": moments.mu3, "mu4": moments.mu4, "b": b }))
        }
        Format::Csv => render_csv(
            &["mu2", "mu3", "mu4", "b"],
            &[vec![fmt_num(moments.mu2), fmt_num(moments.mu3), fmt_num(moments.mu4), fmt_num(b)]],
        ),
    })
}
