//! Independent checks on the computed solutions: the small-η power series of
//! the classic problem and the truncated-boundary error bound.

use crate::error::{Error, Result};
use crate::models::BlasiusFamilyRhs;
use crate::ode::{integrate, GridConfig, SolutionTable, State3};
use crate::solvers::{solve_gasification, NitmConfig};

/// Power series of `f''' + ½ f f'' = 0`, `f(0) = f'(0) = 0`, `f''(0) = shear`,
/// through η¹¹. Only C₂, C₅, C₈, C₁₁ are nonzero at this order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlasiusSeries {
    pub shear: f64,
    pub c2: f64,
    pub c5: f64,
    pub c8: f64,
    pub c11: f64,
}

const FACT_5: f64 = 120.0;
const FACT_8: f64 = 40_320.0;
const FACT_11: f64 = 39_916_800.0;

pub fn series_coefficients(shear: f64) -> Result<BlasiusSeries> {
    if !shear.is_finite() || shear == 0.0 {
        return Err(Error::InvalidInput("series needs a finite nonzero wall shear".into()));
    }
    Ok(BlasiusSeries {
        shear,
        c2: shear / 2.0,
        c5: -shear.powi(2) / (2.0 * FACT_5),
        c8: 11.0 * shear.powi(3) / (4.0 * FACT_8),
        c11: -375.0 * shear.powi(4) / (8.0 * FACT_11),
    })
}

impl BlasiusSeries {
    /// Coefficient of ηⁿ (zero outside the four retained terms).
    pub fn coefficient(&self, n: usize) -> f64 {
        match n {
            2 => self.c2,
            5 => self.c5,
            8 => self.c8,
            11 => self.c11,
            _ => 0.0,
        }
    }

    pub fn eval(&self, eta: f64) -> f64 {
        let e3 = eta.powi(3);
        // Horner in η³.
        eta * eta * (self.c2 + e3 * (self.c5 + e3 * (self.c8 + e3 * self.c11)))
    }
}

pub fn series_eval(series: &BlasiusSeries, eta: f64) -> f64 {
    series.eval(eta)
}

/// Series versus integrated star solution on `(0, eta_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCheck {
    pub eta_max: f64,
    pub step: f64,
    pub max_deviation: f64,
    /// Least-squares slope of log|deviation| against log η.
    pub fitted_order: f64,
    /// Smallest η used in the fit.
    pub fit_from: f64,
    /// Max of |deviation| / η¹⁴ over the fit window.
    pub fitted_constant: f64,
}

/// Step used by [`series_check`] unless told otherwise. The series remainder
/// at η = 0.5 is about 1e-12, so the RK4 error has to sit well below it.
pub const SERIES_CHECK_STEP: f64 = 2e-4;

/// Compares the unit-shear series with the RK4 solution of the star IVP and
/// fits the decay order of the difference. The fit uses the upper half of the
/// range, where the η¹⁴ remainder dominates round-off.
pub fn series_check(eta_max: f64, step: f64) -> Result<SeriesCheck> {
    let grid = GridConfig::new(step, eta_max)?;
    let table = integrate(&BlasiusFamilyRhs::HALF, State3::new(0.0, 0.0, 1.0), grid)?;
    let series = series_coefficients(1.0)?;
    let fit_from = 0.5 * eta_max;

    let deviations: Vec<(f64, f64)> = table
        .iter()
        .skip(1)
        .map(|(eta, s)| (eta, (s.f - series.eval(eta)).abs()))
        .collect();
    let max_deviation = deviations.iter().map(|d| d.1).fold(0.0, f64::max);

    let fit: Vec<(f64, f64)> = deviations
        .iter()
        .filter(|(eta, d)| *eta >= fit_from && *d > 0.0)
        .map(|(eta, d)| (eta.ln(), d.ln()))
        .collect();
    if fit.len() < 2 {
        return Err(Error::InvalidInput("too few nonzero deviations to fit an order".into()));
    }
    let n = fit.len() as f64;
    let mean_x = fit.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = fit.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = fit.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = fit.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let fitted_constant = deviations
        .iter()
        .filter(|(eta, _)| *eta >= fit_from)
        .map(|(eta, d)| d / eta.powi(14))
        .fold(0.0, f64::max);

    Ok(SeriesCheck { eta_max, step, max_deviation, fitted_order: sxy / sxx, fit_from, fitted_constant })
}

/// Computable truncation error bound `M f_M''(M) / f_M(M)` for the problem
/// `f''' + f f'' = 0`, `f(0) = f'(0) = 0`, `f'(M) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RubelBound {
    pub m: f64,
    pub f_at_m: f64,
    pub fpp_at_m: f64,
    pub bound: f64,
}

/// `table` must solve the unit-coefficient truncated problem on `[0, M]`
/// with `f'(M) = 1`; M is its last node.
pub fn rubel_bound(table: &SolutionTable) -> Result<RubelBound> {
    let last = table.last();
    let m = table.grid().eta_max();
    if (last.fp - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!("table does not satisfy f'(M) = 1 (got {})", last.fp)));
    }
    if last.f.is_nan() || last.f <= 0.0 {
        return Err(Error::InvalidInput(format!("f(M) must be positive, got {}", last.f)));
    }
    Ok(RubelBound { m, f_at_m: last.f, fpp_at_m: last.fpp, bound: m * last.fpp / last.f })
}

/// Truncated-boundary solution produced by the non-iterative method: the unit
/// coefficient star IVP is integrated to `m_star` and rescaled so that
/// `f'(M) = 1`, landing on `M = λ m_star`.
pub fn truncated_solution(m_star: f64, step: f64) -> Result<SolutionTable> {
    Ok(solve_gasification(0.0, &NitmConfig::fixed(step, m_star))?.table)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RubelCheck {
    pub m_star: f64,
    pub bound: RubelBound,
    /// `max |f_{2M} − f_M|` over the nodes of `[0, M]`.
    pub max_error: f64,
}

impl RubelCheck {
    pub fn is_valid(&self) -> bool {
        self.max_error <= self.bound.bound
    }
}

/// Bound at star boundary `m_star` checked against the solution truncated at
/// twice that boundary, used as a proxy for the infinite-domain solution.
/// The proxy is evaluated on the grid of `f_M` by integrating its own initial
/// value problem there, so no interpolation enters the comparison.
pub fn rubel_check(m_star: f64, step: f64) -> Result<RubelCheck> {
    let short = truncated_solution(m_star, step)?;
    let long = truncated_solution(2.0 * m_star, step)?;
    let bound = rubel_bound(&short)?;
    let proxy = integrate(&BlasiusFamilyRhs::UNIT, long.first(), *short.grid())?;
    let max_error = short
        .states()
        .iter()
        .zip(proxy.states())
        .map(|(a, b)| (a.f - b.f).abs())
        .fold(0.0, f64::max);
    Ok(RubelCheck { m_star, bound, max_error })
}
