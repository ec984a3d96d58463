use std::path::Path;

use nitm_core::analysis::{rubel_check, series_check, SERIES_CHECK_STEP};
use nitm_core::solvers::{
    find_critical_b, find_star_for_target, solve_classic, solve_variant, sweep, CriticalScan, TARGET_TOL,
};
use nitm_core::{Error, NitmResult, Sign, Variant};

use crate::args::{Common, CriticalArgs, Format, RubelArgs, SeriesArgs, StarArgs, SweepArgs, TargetArgs};
use crate::config::RunConfig;
use crate::output::{profile_csv, render_history, render_report, render_row, render_rows, Field, OutputRow};
use crate::CliError;

fn solver_error(e: Error) -> CliError {
    match e {
        Error::InvalidInput(_) | Error::UnsupportedVariant(_) => CliError::Usage(e.to_string()),
        _ => CliError::Numerical(e.to_string()),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Numerical(format!("cannot write {}: {e}", path.display())))
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_profile(common: &Common, r: &NitmResult) -> Result<(), CliError> {
    match &common.profile {
        Some(path) => write_file(path, &profile_csv(&r.table)),
        None => Ok(()),
    }
}

fn sign(common: &Common) -> Result<Sign, CliError> {
    common.sign.as_deref().map_or(Ok(Sign::Plus), |s| s.parse().map_err(solver_error))
}

fn parameterised(problem: &str) -> Result<Variant, CliError> {
    match problem.parse().map_err(solver_error)? {
        Variant::Classic => Err(CliError::Usage("classic Blasius has no star parameter; use `blasius`".into())),
        v => Ok(v),
    }
}

pub fn blasius(common: &Common, cfg: &RunConfig) -> Result<(), CliError> {
    match solve_classic(sign(common)?, &cfg.nitm) {
        Ok(r) => {
            emit(cfg, &render_history(&r.lambda_history, r.lambda_history.last().copied(), cfg.format))?;
            write_profile(common, &r)
        }
        Err(e @ Error::NoConvergence { .. }) => {
            if let Error::NoConvergence { lambdas } = &e {
                emit(cfg, &render_history(lambdas, None, cfg.format))?;
            }
            Err(solver_error(e))
        }
        Err(e) => Err(solver_error(e)),
    }
}

fn star_values(args: &SweepArgs) -> Result<Vec<f64>, CliError> {
    match (&args.values, &args.range) {
        (Some(v), None) if !v.is_empty() => Ok(v.clone()),
        (None, Some(r)) => {
            let [a, b, n] = r[..] else {
                return Err(CliError::Usage("--range takes start,end,count".into()));
            };
            if n.fract() != 0.0 || n < 1.0 || !(a.is_finite() && b.is_finite()) {
                return Err(CliError::Usage("--range count must be a positive integer".into()));
            }
            let n = n as usize;
            if n == 1 {
                return Ok(vec![a]);
            }
            Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
        }
        _ => Err(CliError::Usage("sweep needs --values or --range".into())),
    }
}

pub fn sweep_cmd(args: &SweepArgs, common: &Common, cfg: &RunConfig) -> Result<(), CliError> {
    let variant = parameterised(&args.problem)?;
    let values = star_values(args)?;
    let rows: Vec<_> = sweep(variant, &values, sign(common)?, &cfg.nitm)
        .into_iter()
        .map(|row| (row.star_param, row.outcome.as_ref().map(OutputRow::from_result).map_err(|e| e.to_string())))
        .collect();
    emit(cfg, &render_rows(&rows, cfg.format))?;
    if rows.iter().all(|r| r.1.is_err()) {
        return Err(CliError::Numerical("every row of the sweep failed".into()));
    }
    Ok(())
}

pub fn single(variant: Variant, args: &StarArgs, common: &Common, cfg: &RunConfig) -> Result<(), CliError> {
    let r = solve_variant(variant, args.star, sign(common)?, &cfg.nitm).map_err(solver_error)?;
    emit(cfg, &render_row(&OutputRow::from_result(&r), cfg.format))?;
    write_profile(common, &r)
}

pub fn critical_b(args: &CriticalArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let d = CriticalScan::default();
    let scan = CriticalScan {
        b_star_min: args.b_star_min.unwrap_or(d.b_star_min),
        b_star_max: args.b_star_max.unwrap_or(d.b_star_max),
        points: args.points.unwrap_or(d.points),
        tol: args.tol.unwrap_or(d.tol),
    };
    let c = find_critical_b(&cfg.nitm, &scan).map_err(solver_error)?;
    let format = if args.json { Format::Json } else { cfg.format };
    emit(cfg, &render_report(&[("b_c", Field::Num(c.b_c)), ("b_star", Field::Num(c.b_star))], format))
}

pub fn target(args: &TargetArgs, common: &Common, cfg: &RunConfig) -> Result<(), CliError> {
    let variant = parameterised(&args.problem)?;
    let (letter, goal) = match (args.b, args.c, args.s, args.target) {
        (Some(v), ..) => ("b", v),
        (_, Some(v), ..) => ("c", v),
        (_, _, Some(v), _) => ("s", v),
        (.., Some(v)) => ("", v),
        _ => return Err(CliError::Usage("target needs --b, --c, --s or --target".into())),
    };
    let expected = match variant {
        Variant::MovingWall => "b",
        Variant::Slip => "c",
        _ => "s",
    };
    if !letter.is_empty() && letter != expected {
        return Err(CliError::Usage(format!("{} is targeted with --{expected}", variant.name())));
    }
    let start = match args.from.as_deref() {
        None => None,
        Some(&[a, b]) => Some((a, b)),
        Some(_) => return Err(CliError::Usage("--from takes two values x0,x1".into())),
    };
    let r = find_star_for_target(variant, goal, sign(common)?, &cfg.nitm, start).map_err(solver_error)?;
    let row = OutputRow::from_result(&r);
    let residual = (row.physical_param - goal).abs();
    let mut fields: Vec<(&str, Field)> = crate::output::ROW_HEADER
        .iter()
        .zip(row.values())
        .map(|(k, v)| (*k, Field::Num(v)))
        .collect();
    fields.push(("target", Field::Num(goal)));
    fields.push(("residual", Field::Num(residual)));
    let status = if residual < TARGET_TOL { "PASS" } else { "FAIL" };
    fields.push(("status", Field::Text(status.into())));
    emit(cfg, &render_report(&fields, cfg.format))?;
    write_profile(common, &r)
}

pub fn series(args: &SeriesArgs, common: &Common, cfg: &RunConfig) -> Result<(), CliError> {
    let step = common.step.unwrap_or(SERIES_CHECK_STEP);
    let c = series_check(args.eta_max, step).map_err(solver_error)?;
    let status = if c.fitted_order >= 13.0 { "PASS" } else { "FAIL" };
    let fields = [
        ("eta_max", Field::Num(c.eta_max)),
        ("step", Field::Num(c.step)),
        ("max_deviation", Field::Num(c.max_deviation)),
        ("fitted_order", Field::Num(c.fitted_order)),
        ("fit_from", Field::Num(c.fit_from)),
        ("fitted_constant", Field::Num(c.fitted_constant)),
        ("status", Field::Text(status.into())),
    ];
    emit(cfg, &render_report(&fields, cfg.format))
}

pub fn rubel(args: &RubelArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let c = rubel_check(args.m, cfg.nitm.step).map_err(solver_error)?;
    let status = if c.is_valid() { "VALID" } else { "INVALID" };
    let fields = [
        ("m_star", Field::Num(c.m_star)),
        ("M", Field::Num(c.bound.m)),
        ("f_M", Field::Num(c.bound.f_at_m)),
        ("fpp_M", Field::Num(c.bound.fpp_at_m)),
        ("bound", Field::Num(c.bound.bound)),
        ("max_error", Field::Num(c.max_error)),
        ("status", Field::Text(status.into())),
    ];
    emit(cfg, &render_report(&fields, cfg.format))
}
