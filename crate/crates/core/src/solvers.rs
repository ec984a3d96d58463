//! Problem-level drivers for the non-iterative transformation method.
//!
//! One auxiliary initial-value problem is integrated in star variables, the
//! group parameter λ is read off the computed asymptote, and the star table is
//! mapped back to the physical problem. The truncated boundary is chosen by
//! walking an increasing schedule until λ at two successive boundaries agree.
//!
//! Star grids are measured in units of the seeded state's group magnitude
//! `μ = max(1, |f(0)|, |f'(0)|^½, |f''(0)|^⅓)`: the schedule boundaries and the
//! step are divided by μ. The equations are invariant under the group and RK4
//! commutes with it, so this is the same as integrating the normalised IVP
//! with the configured step; it keeps large |b*| or |c*| from turning the
//! auxiliary problem stiff on a fixed grid.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::BlasiusFamilyRhs;
use crate::ode::{March, SolutionTable, State3};
use crate::scaling::{lambda_from_asymptote, lambda_moving_wall, map_parameter, rescale, ScalingGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Classic,
    MovingWall,
    Slip,
    Gasification,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Classic => "classic",
            Variant::MovingWall => "moving-wall",
            Variant::Slip => "slip",
            Variant::Gasification => "gasification",
        }
    }

    /// Exponent k in `param* = λ^k param`.
    pub fn param_exponent(&self) -> Option<f64> {
        match self {
            Variant::Classic => None,
            Variant::MovingWall => Some(2.0),
            Variant::Slip => Some(-1.0),
            Variant::Gasification => Some(-2.0),
        }
    }

    pub fn beta(&self) -> f64 {
        match self {
            Variant::Gasification => 1.0,
            _ => 0.5,
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classic" | "blasius" => Ok(Variant::Classic),
            "moving-wall" => Ok(Variant::MovingWall),
            "slip" => Ok(Variant::Slip),
            "gasification" => Ok(Variant::Gasification),
            other => Err(Error::InvalidInput(format!("unknown problem '{other}'"))),
        }
    }
}

/// Sign of the seeded second derivative `f*''(0) = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(&self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// Moving wall: positive skin friction below b = 1/2, negative above.
    pub fn for_moving_wall(b: f64) -> Sign {
        if b < 0.5 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+1" | "1" | "+" | "plus" => Ok(Sign::Plus),
            "-1" | "-" | "minus" => Ok(Sign::Minus),
            other => Err(Error::InvalidInput(format!("sign must be +1 or -1, got '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    variant: Variant,
    star_param: Option<f64>,
    sign: Sign,
}

impl ProblemSpec {
    pub fn new(variant: Variant, star_param: Option<f64>, sign: Sign) -> Result<Self> {
        match (variant, star_param) {
            (Variant::Classic, Some(_)) => {
                return Err(Error::InvalidInput("classic Blasius takes no star parameter".into()))
            }
            (Variant::Classic, None) => {}
            (_, None) => {
                return Err(Error::InvalidInput(format!("{} needs a star parameter", variant.name())))
            }
            (_, Some(v)) if !v.is_finite() => {
                return Err(Error::InvalidInput("star parameter must be finite".into()))
            }
            (Variant::Slip | Variant::Gasification, Some(v)) if v < 0.0 => {
                return Err(Error::InvalidInput(format!("{} star parameter must be >= 0", variant.name())))
            }
            (Variant::Gasification, Some(_)) if sign == Sign::Minus => {
                return Err(Error::InvalidInput("gasification is seeded with f''(0) = +1 only".into()))
            }
            _ => {}
        }
        Ok(Self { variant, star_param, sign })
    }

    pub fn classic(sign: Sign) -> Self {
        Self { variant: Variant::Classic, star_param: None, sign }
    }

    pub fn moving_wall(b_star: f64, sign: Sign) -> Result<Self> {
        Self::new(Variant::MovingWall, Some(b_star), sign)
    }

    pub fn slip(c_star: f64) -> Result<Self> {
        Self::new(Variant::Slip, Some(c_star), Sign::Plus)
    }

    pub fn gasification(s_star: f64) -> Result<Self> {
        Self::new(Variant::Gasification, Some(s_star), Sign::Plus)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn star_param(&self) -> Option<f64> {
        self.star_param
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn beta(&self) -> f64 {
        self.variant.beta()
    }

    /// Initial state of the auxiliary problem in star variables.
    pub fn initial_state(&self) -> State3 {
        let p = self.sign.value();
        let v = self.star_param.unwrap_or(0.0);
        match self.variant {
            Variant::Classic => State3::new(0.0, 0.0, p),
            Variant::MovingWall => State3::new(0.0, v, p),
            // f'(0) = c f''(0)
            Variant::Slip => State3::new(0.0, v * p, p),
            // f(0) = −s f''(0) with f''(0) = 1
            Variant::Gasification => State3::new(-v, 0.0, 1.0),
        }
    }

    fn lambda(&self, fp_inf_star: f64) -> Result<f64> {
        match self.variant {
            Variant::MovingWall => lambda_moving_wall(fp_inf_star, self.star_param.unwrap_or(0.0)),
            _ => lambda_from_asymptote(fp_inf_star, &ScalingGroup::blasius()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NitmConfig {
    pub step: f64,
    pub boundary_schedule: Vec<f64>,
    pub lambda_tol: f64,
}

impl Default for NitmConfig {
    fn default() -> Self {
        Self {
            step: 0.01,
            boundary_schedule: (2..=25).map(|i| 2.0 * i as f64).collect(),
            lambda_tol: 1e-6,
        }
    }
}

impl NitmConfig {
    /// Single fixed truncated boundary: no agreement test.
    pub fn fixed(step: f64, boundary: f64) -> Self {
        Self { step, boundary_schedule: vec![boundary], lambda_tol: 1e-6 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidInput(format!("step must be positive, got {}", self.step)));
        }
        if !(self.lambda_tol.is_finite() && self.lambda_tol > 0.0) {
            return Err(Error::InvalidInput(format!("lambda_tol must be positive, got {}", self.lambda_tol)));
        }
        if self.boundary_schedule.is_empty() {
            return Err(Error::InvalidInput("boundary schedule is empty".into()));
        }
        if self.boundary_schedule.iter().any(|b| !(b.is_finite() && *b >= self.step)) {
            return Err(Error::InvalidInput("boundaries must be finite and at least one step".into()));
        }
        if self.boundary_schedule.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("boundary schedule must be strictly increasing".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NitmResult {
    pub variant: Variant,
    pub sign: Sign,
    pub star_param: Option<f64>,
    /// Group parameter.
    pub lambda: f64,
    /// Accepted truncated boundary, star variables.
    pub eta_inf_star: f64,
    pub fp_inf_star: f64,
    /// Recovered b, c or s.
    pub physical_param: Option<f64>,
    /// Asymptotic slope of the physical solution.
    pub d: f64,
    pub f0: f64,
    pub fp0: f64,
    pub fpp0: f64,
    /// `(star boundary, λ)` for every boundary visited; NaN where λ broke down.
    pub lambda_history: Vec<(f64, f64)>,
    pub star_table: SolutionTable,
    pub table: SolutionTable,
}

impl NitmResult {
    pub fn wall_shear(&self) -> f64 {
        self.fpp0
    }

    pub fn group(&self) -> ScalingGroup {
        ScalingGroup::new(-1.0, self.variant.param_exponent(), self.d).expect("d is nonzero")
    }
}

/// Group magnitude of a seeded state; star grids are scaled by its inverse.
fn state_scale(s: State3) -> f64 {
    1f64.max(s.f.abs()).max(s.fp.abs().sqrt()).max(s.fpp.abs().cbrt())
}

pub fn solve_auxiliary(spec: &ProblemSpec, config: &NitmConfig) -> Result<NitmResult> {
    config.validate()?;
    let rhs = BlasiusFamilyRhs::new(spec.beta())?;
    let initial = spec.initial_state();
    let scale = state_scale(initial);
    let step = config.step / scale;
    let mut march = March::new(&rhs, initial, step)?;

    let fixed = config.boundary_schedule.len() == 1;
    let mut history = Vec::with_capacity(config.boundary_schedule.len());
    let mut previous: Option<f64> = None;
    let mut last_error = None;
    let mut accepted = None;

    for &boundary in &config.boundary_schedule {
        let node = (boundary / config.step).round() as usize;
        let state = march.advance_to(node)?;
        let eta_star = node as f64 * step;
        match spec.lambda(state.fp) {
            Ok(lambda) => {
                history.push((eta_star, lambda));
                let agrees = previous.is_some_and(|prev| (lambda - prev).abs() <= config.lambda_tol * lambda);
                if fixed || agrees {
                    accepted = Some((node, lambda));
                    break;
                }
                previous = Some(lambda);
                last_error = None;
            }
            Err(e) => {
                if fixed {
                    return Err(e);
                }
                history.push((eta_star, f64::NAN));
                previous = None;
                last_error = Some(e);
            }
        }
    }

    let Some((node, lambda)) = accepted else {
        return Err(last_error.unwrap_or(Error::NoConvergence { lambdas: history }));
    };

    let star_table = march.table_to(node)?;
    let fp_inf_star = star_table.fp_inf();
    let physical_param = match (spec.star_param, spec.variant.param_exponent()) {
        (Some(v), Some(k)) => Some(map_parameter(v, lambda, k)),
        _ => None,
    };
    let d = match spec.variant {
        Variant::MovingWall => 1.0 - physical_param.unwrap_or(0.0),
        _ => 1.0,
    };
    let group = ScalingGroup::new(-1.0, spec.variant.param_exponent(), d).map_err(|_| {
        Error::ScalingBreakdown("moving wall with b = 1 has zero asymptotic slope".into())
    })?;
    let table = rescale(&star_table, lambda, &group)?;
    let wall = table.first();

    Ok(NitmResult {
        variant: spec.variant,
        sign: spec.sign,
        star_param: spec.star_param,
        lambda,
        eta_inf_star: star_table.grid().eta_max(),
        fp_inf_star,
        physical_param,
        d,
        f0: wall.f,
        fp0: wall.fp,
        fpp0: wall.fpp,
        lambda_history: history,
        star_table,
        table,
    })
}

pub fn solve_classic(sign: Sign, config: &NitmConfig) -> Result<NitmResult> {
    solve_auxiliary(&ProblemSpec::classic(sign), config)
}

pub fn solve_moving_wall(b_star: f64, sign: Sign, config: &NitmConfig) -> Result<NitmResult> {
    solve_auxiliary(&ProblemSpec::moving_wall(b_star, sign)?, config)
}

pub fn solve_slip(c_star: f64, config: &NitmConfig) -> Result<NitmResult> {
    solve_auxiliary(&ProblemSpec::slip(c_star)?, config)
}

pub fn solve_gasification(s_star: f64, config: &NitmConfig) -> Result<NitmResult> {
    solve_auxiliary(&ProblemSpec::gasification(s_star)?, config)
}

/// One solve per star value; `star_param` is ignored for the classic problem.
pub fn solve_variant(variant: Variant, star_param: f64, sign: Sign, config: &NitmConfig) -> Result<NitmResult> {
    let spec = match variant {
        Variant::Classic => ProblemSpec::classic(sign),
        _ => ProblemSpec::new(variant, Some(star_param), sign)?,
    };
    solve_auxiliary(&spec, config)
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub star_param: f64,
    pub outcome: Result<NitmResult>,
}

/// Rows are solved in parallel and returned in input order; a failing row
/// carries its error and does not stop the others.
pub fn sweep(variant: Variant, star_values: &[f64], sign: Sign, config: &NitmConfig) -> Vec<SweepRow> {
    star_values
        .par_iter()
        .map(|&star_param| SweepRow { star_param, outcome: solve_variant(variant, star_param, sign, config) })
        .collect()
}

/// Scan and refinement settings for the critical moving-wall parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalScan {
    pub b_star_min: f64,
    pub b_star_max: f64,
    pub points: usize,
    pub tol: f64,
}

impl Default for CriticalScan {
    fn default() -> Self {
        Self { b_star_min: -5.0, b_star_max: -1e-3, points: 200, tol: 1e-6 }
    }
}

impl CriticalScan {
    pub fn validate(&self) -> Result<()> {
        if !(self.b_star_min < self.b_star_max && self.b_star_max < 0.0) {
            return Err(Error::InvalidInput(format!(
                "scan range must satisfy min < max < 0, got [{}, {}]",
                self.b_star_min, self.b_star_max
            )));
        }
        if self.points < 3 {
            return Err(Error::InvalidInput("scan needs at least 3 points".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidInput("tolerance must be positive".into()));
        }
        Ok(())
    }

    /// Log-spaced in |b*|, increasing in b*.
    pub fn points(&self) -> Vec<f64> {
        let (lo, hi) = (self.b_star_max.abs().ln(), self.b_star_min.abs().ln());
        let n = self.points;
        (0..n)
            .rev()
            .map(|i| -(lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalB {
    pub b_c: f64,
    pub b_star: f64,
}

/// Physical b reached from b* on the `f*''(0) = +1` branch.
pub fn moving_wall_b(b_star: f64, config: &NitmConfig) -> Result<f64> {
    solve_moving_wall(b_star, Sign::Plus, config)?
        .physical_param
        .ok_or_else(|| Error::InvalidInput("moving wall without parameter".into()))
}

fn scan_moving_wall(scan: &CriticalScan, config: &NitmConfig) -> Vec<(f64, f64)> {
    scan.points()
        .par_iter()
        .map(|&bs| (bs, moving_wall_b(bs, config).unwrap_or(f64::NAN)))
        .collect()
}

/// Most negative b reachable on the plus branch: coarse scan over b* < 0,
/// then golden-section refinement of the bracketing triple.
pub fn find_critical_b(config: &NitmConfig, scan: &CriticalScan) -> Result<CriticalB> {
    config.validate()?;
    scan.validate()?;
    let samples = scan_moving_wall(scan, config);
    let best = samples
        .iter()
        .enumerate()
        .filter(|(_, (_, b))| b.is_finite())
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i);
    let Some(i) = best.filter(|&i| i > 0 && i + 1 < samples.len()) else {
        return Err(Error::Bracketing { scanned: samples });
    };
    if !(samples[i - 1].1.is_finite() && samples[i + 1].1.is_finite()) {
        return Err(Error::Bracketing { scanned: samples });
    }
    let objective = |bs: f64| moving_wall_b(bs, config).unwrap_or(f64::INFINITY);
    let (b_star, b_c) = golden_section_minimize(objective, samples[i - 1].0, samples[i + 1].0, scan.tol);
    if !b_c.is_finite() {
        return Err(Error::Bracketing { scanned: samples });
    }
    Ok(CriticalB { b_c, b_star })
}

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`,
/// stopping once the bracket is narrower than `tol`. Returns `(x, f(x))`.
pub fn golden_section_minimize<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = if a < b { (a, b) } else { (b, a) };
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// All b* on the plus branch (within the scan range) that map to `b_target`.
/// Negative b below b_c has none; between b_c and 0 there are two.
pub fn moving_wall_preimages(b_target: f64, config: &NitmConfig, scan: &CriticalScan) -> Result<Vec<f64>> {
    config.validate()?;
    scan.validate()?;
    let samples = scan_moving_wall(scan, config);
    let mut roots = Vec::new();
    for w in samples.windows(2) {
        let ((x0, b0), (x1, b1)) = (w[0], w[1]);
        if !(b0.is_finite() && b1.is_finite()) || (b0 - b_target).signum() == (b1 - b_target).signum() {
            continue;
        }
        let g = |x: f64| moving_wall_b(x, config).map(|b| b - b_target);
        roots.push(bisect(g, x0, x1, scan.tol)?);
    }
    Ok(roots)
}

fn bisect<G: Fn(f64) -> Result<f64>>(g: G, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut g_lo = g(lo)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol {
            return Ok(mid);
        }
        let g_mid = g(mid)?;
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Residual tolerance on the physical parameter for target solves.
pub const TARGET_TOL: f64 = 1e-6;
const TARGET_MAX_ITER: usize = 100;

/// Default secant starting pair for each variant and branch.
pub fn default_target_start(variant: Variant, sign: Sign) -> Option<(f64, f64)> {
    match (variant, sign) {
        (Variant::Classic, _) => None,
        (Variant::MovingWall, Sign::Plus) => Some((0.5, 1.5)),
        (Variant::MovingWall, Sign::Minus) => Some((2.5, 2.0)),
        (Variant::Slip, _) | (Variant::Gasification, _) => Some((0.5, 1.5)),
    }
}

/// Secant iteration over the star parameter until the recovered physical
/// parameter matches `target`. Every inner evaluation is a single
/// non-iterative solve. An iterate whose solve fails is pulled halfway back
/// toward the previous iterate.
pub fn find_star_for_target(
    variant: Variant,
    target: f64,
    sign: Sign,
    config: &NitmConfig,
    start: Option<(f64, f64)>,
) -> Result<NitmResult> {
    if variant == Variant::Classic {
        return Err(Error::UnsupportedVariant("classic Blasius has no parameter to target".into()));
    }
    if !target.is_finite() {
        return Err(Error::InvalidInput("target must be finite".into()));
    }
    config.validate()?;
    let (x0, x1) = start
        .or_else(|| default_target_start(variant, sign))
        .ok_or_else(|| Error::UnsupportedVariant(variant.name().into()))?;
    if x0 == x1 {
        return Err(Error::InvalidInput("secant needs two distinct starting values".into()));
    }

    let eval = |x: f64| -> Result<(f64, NitmResult)> {
        let r = solve_variant(variant, x, sign, config)?;
        let p = r.physical_param.ok_or_else(|| Error::UnsupportedVariant(variant.name().into()))?;
        Ok((p - target, r))
    };

    let (mut g0, _) = eval(x0)?;
    let (mut g1, mut r1) = eval(x1)?;
    let (mut x0, mut x1) = (x0, x1);
    for _ in 0..TARGET_MAX_ITER {
        if g1.abs() < TARGET_TOL {
            return Ok(r1);
        }
        if g1 == g0 {
            break;
        }
        let mut x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
        let mut next = eval(x2);
        let mut retries = 0;
        while next.is_err() && retries < 50 {
            x2 = 0.5 * (x1 + x2);
            next = eval(x2);
            retries += 1;
        }
        let (g2, r2) = next?;
        x0 = x1;
        g0 = g1;
        x1 = x2;
        g1 = g2;
        r1 = r2;
    }
    if g1.abs() < TARGET_TOL {
        return Ok(r1);
    }
    Err(Error::MaxIterations { iterations: TARGET_MAX_ITER, residual: g1 })
}
