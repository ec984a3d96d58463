//! Fixed-step classical Runge–Kutta integration of third-order scalar ODEs
//! written as first-order systems in `(f, f', f'')`.
//!
//! Grid nodes are always `i * step`, never accumulated by repeated addition,
//! so identical inputs produce bit-identical tables and the last node of a
//! grid sits exactly on `n * step`.

use std::ops::{Add, Mul};

use crate::error::{Error, Result};

/// Components with magnitude above this abort the integration.
pub const BLOWUP_THRESHOLD: f64 = 1e12;

/// `(f, df/dη, d²f/dη²)` at one grid node.
///
/// The same type carries derivatives: `rhs(η, s)` returns
/// `(f', f'', f''')` in the three slots.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State3 {
    pub f: f64,
    pub fp: f64,
    pub fpp: f64,
}

impl State3 {
    pub const fn new(f: f64, fp: f64, fpp: f64) -> Self {
        Self { f, fp, fpp }
    }

    pub fn is_finite(&self) -> bool {
        self.f.is_finite() && self.fp.is_finite() && self.fpp.is_finite()
    }

    fn max_abs(&self) -> f64 {
        self.f.abs().max(self.fp.abs()).max(self.fpp.abs())
    }
}

impl Add for State3 {
    type Output = State3;

    fn add(self, rhs: State3) -> State3 {
        State3::new(self.f + rhs.f, self.fp + rhs.fp, self.fpp + rhs.fpp)
    }
}

impl Mul<f64> for State3 {
    type Output = State3;

    fn mul(self, rhs: f64) -> State3 {
        State3::new(self.f * rhs, self.fp * rhs, self.fpp * rhs)
    }
}

/// Right-hand side of a first-order system in `State3`.
pub trait Rhs {
    fn eval(&self, eta: f64, state: State3) -> State3;
}

impl<F> Rhs for F
where
    F: Fn(f64, State3) -> State3,
{
    fn eval(&self, eta: f64, state: State3) -> State3 {
        self(eta, state)
    }
}

/// Uniform grid `0, step, 2 step, …, steps * step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    step: f64,
    steps: usize,
}

impl GridConfig {
    /// `eta_max` must be a positive integer multiple of `step` (to 1e-9 relative).
    pub fn new(step: f64, eta_max: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidInput(format!("grid step must be positive, got {step}")));
        }
        if !(eta_max.is_finite() && eta_max >= step) {
            return Err(Error::InvalidInput(format!(
                "eta_max must be at least one step, got {eta_max} with step {step}"
            )));
        }
        let ratio = eta_max / step;
        let steps = ratio.round();
        if (ratio - steps).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::InvalidInput(format!(
                "eta_max {eta_max} is not an integer multiple of step {step}"
            )));
        }
        Ok(Self { step, steps: steps as usize })
    }

    pub fn with_steps(step: f64, steps: usize) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidInput(format!("grid step must be positive, got {step}")));
        }
        if steps == 0 {
            return Err(Error::InvalidInput("grid needs at least one step".into()));
        }
        Ok(Self { step, steps })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn node_count(&self) -> usize {
        self.steps + 1
    }

    pub fn eta(&self, node: usize) -> f64 {
        node as f64 * self.step
    }

    pub fn eta_max(&self) -> f64 {
        self.eta(self.steps)
    }
}

/// Dense output of one integration: a state per grid node.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTable {
    grid: GridConfig,
    states: Vec<State3>,
}

impl SolutionTable {
    pub fn new(grid: GridConfig, states: Vec<State3>) -> Result<Self> {
        if states.len() != grid.node_count() {
            return Err(Error::InvalidInput(format!(
                "table has {} states for {} grid nodes",
                states.len(),
                grid.node_count()
            )));
        }
        if let Some(i) = states.iter().position(|s| !s.is_finite()) {
            return Err(Error::IntegrationBlowup { eta: grid.eta(i) });
        }
        Ok(Self { grid, states })
    }

    pub fn grid(&self) -> &GridConfig {
        &self.grid
    }

    pub fn states(&self) -> &[State3] {
        &self.states
    }

    pub fn eta(&self, node: usize) -> f64 {
        self.grid.eta(node)
    }

    pub fn first(&self) -> State3 {
        self.states[0]
    }

    pub fn last(&self) -> State3 {
        self.states[self.states.len() - 1]
    }

    /// Slope at the last node, the estimate of `f'(∞)`.
    pub fn fp_inf(&self) -> f64 {
        self.last().fp
    }

    /// `(η, state)` pairs in grid order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, State3)> + '_ {
        self.states.iter().enumerate().map(|(i, s)| (self.grid.eta(i), *s))
    }

    /// Keeps nodes `0..=node`.
    pub fn truncated(&self, node: usize) -> Result<Self> {
        let grid = GridConfig::with_steps(self.grid.step, node)?;
        Self::new(grid, self.states[..=node].to_vec())
    }

    /// Piecewise-linear value at `eta`, clamped to the grid.
    pub fn interpolate(&self, eta: f64) -> State3 {
        let h = self.grid.step;
        let pos = (eta / h).clamp(0.0, self.grid.steps as f64);
        let i = (pos.floor() as usize).min(self.grid.steps.saturating_sub(1));
        let t = pos - i as f64;
        let a = self.states[i];
        let b = self.states[(i + 1).min(self.grid.steps)];
        a * (1.0 - t) + b * t
    }
}

/// One classical four-stage RK4 step from `eta` to `eta + h`.
pub fn rk4_step<R: Rhs + ?Sized>(rhs: &R, eta: f64, state: State3, h: f64) -> Result<State3> {
    let half = 0.5 * h;
    let k1 = rhs.eval(eta, state);
    let k2 = rhs.eval(eta + half, state + k1 * half);
    let k3 = rhs.eval(eta + half, state + k2 * half);
    let k4 = rhs.eval(eta + h, state + k3 * h);
    let next = state + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    if !next.is_finite() || next.max_abs() > BLOWUP_THRESHOLD {
        return Err(Error::IntegrationBlowup { eta: eta + h });
    }
    Ok(next)
}

/// Integrates from `initial` at η = 0 over every node of `grid`.
pub fn integrate<R: Rhs + ?Sized>(rhs: &R, initial: State3, grid: GridConfig) -> Result<SolutionTable> {
    let mut march = March::new(rhs, initial, grid.step())?;
    march.advance_to(grid.steps())?;
    march.into_table()
}

/// Incremental fixed-step integration, used when the stopping node is
/// decided along the way.
pub struct March<'a, R: Rhs + ?Sized> {
    rhs: &'a R,
    step: f64,
    states: Vec<State3>,
}

impl<'a, R: Rhs + ?Sized> March<'a, R> {
    pub fn new(rhs: &'a R, initial: State3, step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidInput(format!("grid step must be positive, got {step}")));
        }
        if !initial.is_finite() {
            return Err(Error::InvalidInput("initial state is not finite".into()));
        }
        Ok(Self { rhs, step, states: vec![initial] })
    }

    /// Index of the last computed node.
    pub fn node(&self) -> usize {
        self.states.len() - 1
    }

    pub fn state(&self, node: usize) -> State3 {
        self.states[node]
    }

    pub fn current(&self) -> State3 {
        self.states[self.node()]
    }

    pub fn advance_to(&mut self, node: usize) -> Result<State3> {
        self.states.reserve(node.saturating_sub(self.node()));
        while self.node() < node {
            let i = self.node();
            let eta = i as f64 * self.step;
            let next = rk4_step(self.rhs, eta, self.states[i], self.step)?;
            self.states.push(next);
        }
        Ok(self.current())
    }

    pub fn into_table(self) -> Result<SolutionTable> {
        let grid = GridConfig::with_steps(self.step, self.node())?;
        SolutionTable::new(grid, self.states)
    }

    /// Table of nodes `0..=node` (already computed).
    pub fn table_to(&self, node: usize) -> Result<SolutionTable> {
        let grid = GridConfig::with_steps(self.step, node)?;
        SolutionTable::new(grid, self.states[..=node].to_vec())
    }
}
