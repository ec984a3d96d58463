//! Scaling-group algebra.
//!
//! The one-parameter group acts as `f* = λ f`, `η* = λ^δ η` and, for a
//! physical parameter carried along, `param* = λ^k param`. Derivatives pick up
//! `f*^(n) = λ^(1 − nδ) f^(n)`. All problems in this crate use δ = −1.

use crate::error::{Error, Result};
use crate::ode::{GridConfig, Rhs, SolutionTable, State3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingGroup {
    delta: f64,
    param_exponent: Option<f64>,
    target_slope: f64,
}

impl ScalingGroup {
    pub fn new(delta: f64, param_exponent: Option<f64>, target_slope: f64) -> Result<Self> {
        if !delta.is_finite() || delta == 1.0 {
            return Err(Error::InvalidInput(format!("group exponent delta must differ from 1, got {delta}")));
        }
        if !target_slope.is_finite() || target_slope == 0.0 {
            return Err(Error::InvalidInput("asymptotic slope d must be nonzero".into()));
        }
        if param_exponent.is_some_and(|k| !k.is_finite()) {
            return Err(Error::InvalidInput("parameter exponent must be finite".into()));
        }
        Ok(Self { delta, param_exponent, target_slope })
    }

    /// `f* = λ f`, `η* = λ⁻¹ η`, `f'(∞) = 1`.
    pub fn blasius() -> Self {
        Self { delta: -1.0, param_exponent: None, target_slope: 1.0 }
    }

    /// `b* = λ² b`; the slope target `1 − b` is only known after λ.
    pub fn moving_wall(target_slope: f64) -> Result<Self> {
        Self::new(-1.0, Some(2.0), target_slope)
    }

    /// `c* = λ⁻¹ c`.
    pub fn slip() -> Self {
        Self { delta: -1.0, param_exponent: Some(-1.0), target_slope: 1.0 }
    }

    /// `s* = λ⁻² s`.
    pub fn gasification() -> Self {
        Self { delta: -1.0, param_exponent: Some(-2.0), target_slope: 1.0 }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn param_exponent(&self) -> Option<f64> {
        self.param_exponent
    }

    pub fn target_slope(&self) -> f64 {
        self.target_slope
    }

    /// Forward action on a point `(η, f, f', f'')`.
    pub fn transform(&self, lambda: f64, eta: f64, s: State3) -> (f64, State3) {
        let d = self.delta;
        (
            lambda.powf(d) * eta,
            State3::new(lambda * s.f, lambda.powf(1.0 - d) * s.fp, lambda.powf(1.0 - 2.0 * d) * s.fpp),
        )
    }
}

/// `λ = (f*'(η∞*) / d)^(1 / (1 − δ))`.
pub fn lambda_from_asymptote(fp_inf_star: f64, group: &ScalingGroup) -> Result<f64> {
    let ratio = fp_inf_star / group.target_slope;
    if !(ratio.is_finite() && ratio > 0.0) {
        return Err(Error::ScalingBreakdown(format!(
            "asymptote ratio f*'(inf)/d = {ratio} is not positive"
        )));
    }
    Ok(ratio.powf(1.0 / (1.0 - group.delta)))
}

/// Moving wall: `λ = (f*'(η∞*) + b*)^(1/2)`.
pub fn lambda_moving_wall(fp_inf_star: f64, b_star: f64) -> Result<f64> {
    let base = fp_inf_star + b_star;
    if !(base.is_finite() && base > 0.0) {
        return Err(Error::ScalingBreakdown(format!(
            "f*'(inf) + b* = {base} is not positive"
        )));
    }
    Ok(base.sqrt())
}

/// Inverse group action on a whole table: star variables to physical ones.
pub fn rescale(table: &SolutionTable, lambda: f64, group: &ScalingGroup) -> Result<SolutionTable> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidInput(format!("lambda must be positive, got {lambda}")));
    }
    let d = group.delta;
    let eta_factor = lambda.powf(-d);
    let f_factor = 1.0 / lambda;
    let fp_factor = lambda.powf(d - 1.0);
    let fpp_factor = lambda.powf(2.0 * d - 1.0);
    let grid = GridConfig::with_steps(eta_factor * table.grid().step(), table.grid().steps())?;
    let states = table
        .states()
        .iter()
        .map(|s| State3::new(f_factor * s.f, fp_factor * s.fp, fpp_factor * s.fpp))
        .collect();
    SolutionTable::new(grid, states)
}

/// `param = param* · λ^(−k)`.
pub fn map_parameter(star_value: f64, lambda: f64, exponent: f64) -> f64 {
    star_value * lambda.powf(-exponent)
}

/// Linear conditions on the exponents of an extended scaling group.
///
/// Each row `a` with right-hand side `b` states `a · α = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentSystem {
    pub matrix: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

impl ExponentSystem {
    pub fn new(matrix: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        let unknowns = matrix.first().map_or(0, Vec::len);
        if unknowns == 0 || matrix.iter().any(|r| r.len() != unknowns) || rhs.len() != matrix.len() {
            return Err(Error::InvalidInput("exponent system is not rectangular".into()));
        }
        Ok(Self { matrix, rhs })
    }

    /// Invariance of an equation whose terms scale as `λ^(w_j · α)`: every
    /// term must pick up the same power, so `(w_0 − w_j) · α = 0`.
    pub fn from_term_weights(weights: &[Vec<f64>]) -> Result<Self> {
        let Some((first, rest)) = weights.split_first() else {
            return Err(Error::InvalidInput("equation has no terms".into()));
        };
        let matrix: Vec<Vec<f64>> = rest
            .iter()
            .map(|w| first.iter().zip(w).map(|(a, b)| a - b).collect())
            .collect();
        if matrix.is_empty() {
            return Self::new(vec![vec![0.0; first.len()]], vec![0.0]);
        }
        let rows = matrix.len();
        Self::new(matrix, vec![0.0; rows])
    }

    /// `f''' + f f'' + P (1 − f'²) = 0` under `η* = λ^α₁ η`, `f* = λ^α₂ f`,
    /// `P* = λ^α₃ P`.
    pub fn falkner_skan() -> Self {
        Self::from_term_weights(&[
            vec![-3.0, 1.0, 0.0],
            vec![-2.0, 2.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![-2.0, 2.0, 1.0],
        ])
        .expect("well-formed")
    }

    /// `f''' + β f f'' = 0` under `η* = λ^α₁ η`, `f* = λ^α₂ f`.
    pub fn blasius() -> Self {
        Self::from_term_weights(&[vec![-3.0, 1.0], vec![-2.0, 2.0]]).expect("well-formed")
    }

    pub fn unknowns(&self) -> usize {
        self.matrix[0].len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InvarianceClass {
    /// Only `α = 0` satisfies the conditions.
    TrivialOnly,
    /// Solutions form a family of the given dimension; one generator per
    /// free exponent, normalised so that exponent equals one.
    Family { dimension: usize, generators: Vec<Vec<f64>> },
    /// The conditions contradict each other.
    Inconsistent,
}

const PIVOT_TOL: f64 = 1e-12;

pub fn solve_invariance_exponents(system: &ExponentSystem) -> InvarianceClass {
    let n = system.unknowns();
    let mut rows: Vec<Vec<f64>> = system
        .matrix
        .iter()
        .zip(&system.rhs)
        .map(|(r, b)| r.iter().copied().chain(std::iter::once(*b)).collect())
        .collect();

    // Reduced row echelon form with partial pivoting.
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(best) = (row..rows.len())
            .max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs()))
            .filter(|&r| rows[r][col].abs() > PIVOT_TOL)
        else {
            continue;
        };
        rows.swap(row, best);
        let p = rows[row][col];
        rows[row].iter_mut().for_each(|v| *v /= p);
        let pivot_row = rows[row].clone();
        for (r, other) in rows.iter_mut().enumerate() {
            let factor = other[col];
            if r != row && factor != 0.0 {
                other.iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= factor * p);
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows.len() {
            break;
        }
    }

    if rows[row..].iter().any(|r| r[n].abs() > PIVOT_TOL) {
        return InvarianceClass::Inconsistent;
    }
    if rows.iter().any(|r| r[n].abs() > PIVOT_TOL) {
        // Affine solution set: not a scaling symmetry classification.
        return InvarianceClass::Inconsistent;
    }

    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return InvarianceClass::TrivialOnly;
    }
    let generators = free
        .iter()
        .map(|&fc| {
            let mut g = vec![0.0; n];
            g[fc] = 1.0;
            for (i, &pc) in pivots.iter().enumerate() {
                g[pc] = -rows[i][fc];
            }
            g.iter().map(|v| if *v == 0.0 { 0.0 } else { *v }).collect()
        })
        .collect();
    InvarianceClass::Family { dimension: free.len(), generators }
}

/// Max over samples of `|F(η*, s*) − λ^(1−3δ) F(η, s)|`, the residual of the
/// third-derivative equation after moving each sample through the group.
/// Vanishes (to rounding) iff the equation is invariant.
pub fn numeric_invariance_check<R: Rhs + ?Sized>(
    rhs: &R,
    group: &ScalingGroup,
    lambda_test: f64,
    samples: &[(f64, State3)],
) -> f64 {
    let third_factor = lambda_test.powf(1.0 - 3.0 * group.delta);
    samples
        .iter()
        .map(|&(eta, s)| {
            let (eta_star, s_star) = group.transform(lambda_test, eta, s);
            (rhs.eval(eta_star, s_star).fpp - third_factor * rhs.eval(eta, s).fpp).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{BlasiusFamilyRhs, FalknerSkanRhs};

    fn single_node(eta_step: f64, states: Vec<State3>) -> SolutionTable {
        let steps = states.len() - 1;
        SolutionTable::new(GridConfig::with_steps(eta_step, steps).unwrap(), states).unwrap()
    }

    #[test]
    fn lambda_identity_and_square_root() {
        let g = ScalingGroup::blasius();
        assert_eq!(lambda_from_asymptote(1.0, &g).unwrap(), 1.0);
        assert_eq!(lambda_from_asymptote(4.0, &g).unwrap(), 2.0);
        let g3 = ScalingGroup::new(-2.0, None, 2.5).unwrap();
        assert!((lambda_from_asymptote(2.5, &g3).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lambda_blasius_table_row() {
        let lambda = lambda_from_asymptote(2.085393, &ScalingGroup::blasius()).unwrap();
        assert!((lambda - 1.444089).abs() < 1e-6);
        assert!((lambda.powi(-3) - 0.332061).abs() < 1e-6);
    }

    #[test]
    fn lambda_breakdown() {
        let g = ScalingGroup::blasius();
        assert!(matches!(lambda_from_asymptote(-1.0, &g), Err(Error::ScalingBreakdown(_))));
        assert!(matches!(lambda_from_asymptote(0.0, &g), Err(Error::ScalingBreakdown(_))));
        assert!(matches!(lambda_moving_wall(0.5, -0.5), Err(Error::ScalingBreakdown(_))));
    }

    #[test]
    fn moving_wall_lambda_rows() {
        let lambda = lambda_moving_wall(2.440648, 1.0).unwrap();
        assert!((lambda - 1.854899).abs() < 1e-6);
        assert!((lambda.powi(-3) - 0.156689).abs() < 1e-6);
        assert_eq!(lambda_moving_wall(1.0, 0.0).unwrap(), 1.0);
        let lambda = lambda_moving_wall(1.55e4, -500.0).unwrap();
        assert!((lambda * lambda - 1.5e4).abs() < 1e-9);
        assert!((map_parameter(-500.0, lambda, 2.0) + 0.033393).abs() < 1e-4);
    }

    #[test]
    fn map_parameter_rows() {
        assert!((map_parameter(1.0, 1.854899, 2.0) - 0.290643).abs() < 1e-6);
        assert!((map_parameter(1.0, 1.562257, -1.0) - 1.562257).abs() < 1e-12);
        assert!((map_parameter(1.0, 3.726397f64.sqrt(), -2.0) - 3.726397).abs() < 1e-12);
    }

    #[test]
    fn rescale_identity() {
        let t = single_node(0.1, vec![State3::new(0.0, 0.0, 1.0), State3::new(0.3, 0.7, 0.9)]);
        assert_eq!(rescale(&t, 1.0, &ScalingGroup::blasius()).unwrap(), t);
    }

    #[test]
    fn rescale_exponent_arithmetic() {
        let t = single_node(1.0, vec![State3::new(0.0, 0.0, 0.0), State3::new(4.0, 8.0, 16.0)]);
        let r = rescale(&t, 2.0, &ScalingGroup::blasius()).unwrap();
        // η = λ^(−δ) η*
        assert_eq!(r.eta(1), 2.0);
        assert_eq!(r.last(), State3::new(2.0, 2.0, 2.0));
    }

    #[test]
    fn rescale_rejects_nonpositive_lambda() {
        let t = single_node(1.0, vec![State3::default(), State3::default()]);
        assert!(rescale(&t, 0.0, &ScalingGroup::blasius()).is_err());
        assert!(rescale(&t, -1.0, &ScalingGroup::blasius()).is_err());
    }

    #[test]
    fn group_constructor_validates() {
        assert!(ScalingGroup::new(1.0, None, 1.0).is_err());
        assert!(ScalingGroup::new(-1.0, None, 0.0).is_err());
        assert!(ScalingGroup::moving_wall(0.7).is_ok());
    }

    #[test]
    fn falkner_skan_exponents_trivial() {
        assert_eq!(solve_invariance_exponents(&ExponentSystem::falkner_skan()), InvarianceClass::TrivialOnly);
    }

    #[test]
    fn blasius_exponents_one_parameter_family() {
        match solve_invariance_exponents(&ExponentSystem::blasius()) {
            InvarianceClass::Family { dimension, generators } => {
                assert_eq!(dimension, 1);
                // (α₁, α₂) ∝ (δ, 1) with δ = −1.
                assert_eq!(generators, vec![vec![-1.0, 1.0]]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degenerate_system_everything_invariant() {
        let sys = ExponentSystem::new(vec![vec![0.0; 3]], vec![0.0]).unwrap();
        match solve_invariance_exponents(&sys) {
            InvarianceClass::Family { dimension, .. } => assert_eq!(dimension, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inconsistent_system() {
        let sys = ExponentSystem::new(vec![vec![1.0, 0.0], vec![1.0, 0.0]], vec![0.0, 1.0]).unwrap();
        assert_eq!(solve_invariance_exponents(&sys), InvarianceClass::Inconsistent);
    }

    fn sample_states() -> Vec<(f64, State3)> {
        (0..25)
            .map(|i| {
                let x = i as f64;
                (0.3 * x, State3::new((0.7 * x).sin() * 2.0, 0.0, (1.3 * x).cos() + 0.2))
            })
            .collect()
    }

    #[test]
    fn blasius_numerically_invariant() {
        let r = numeric_invariance_check(&BlasiusFamilyRhs::HALF, &ScalingGroup::blasius(), 2.0, &sample_states());
        assert!(r <= 1e-12, "residual {r}");
    }

    #[test]
    fn falkner_skan_not_invariant() {
        let rhs = FalknerSkanRhs::new(1.0).unwrap();
        for delta in [-1.0, -0.5, 0.0, 2.0] {
            let g = ScalingGroup::new(delta, None, 1.0).unwrap();
            assert!(numeric_invariance_check(&rhs, &g, 2.0, &sample_states()) > 0.1);
        }
    }

    #[test]
    fn identity_element_has_zero_residual() {
        let rhs = FalknerSkanRhs::new(3.0).unwrap();
        assert_eq!(numeric_invariance_check(&rhs, &ScalingGroup::blasius(), 1.0, &sample_states()), 0.0);
    }
}
