//! Right-hand sides of the similarity equations as first-order systems.

use crate::error::{Error, Result};
use crate::ode::{Rhs, State3};

/// `f''' = −β f f''`. β = 1/2 is the classic Blasius form (also used for the
/// moving-wall and slip problems), β = 1 the form used for surface
/// gasification and the truncated-boundary problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlasiusFamilyRhs {
    beta: f64,
}

impl BlasiusFamilyRhs {
    pub const HALF: BlasiusFamilyRhs = BlasiusFamilyRhs { beta: 0.5 };
    pub const UNIT: BlasiusFamilyRhs = BlasiusFamilyRhs { beta: 1.0 };

    pub fn new(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidInput(format!("beta must be positive, got {beta}")));
        }
        Ok(Self { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl Rhs for BlasiusFamilyRhs {
    fn eval(&self, eta: f64, state: State3) -> State3 {
        blasius_rhs(eta, state, self.beta)
    }
}

/// `f''' + f f'' + P (1 − f'²) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FalknerSkanRhs {
    pressure_gradient: f64,
}

impl FalknerSkanRhs {
    pub fn new(pressure_gradient: f64) -> Result<Self> {
        if !pressure_gradient.is_finite() {
            return Err(Error::InvalidInput("pressure-gradient parameter must be finite".into()));
        }
        Ok(Self { pressure_gradient })
    }

    pub fn pressure_gradient(&self) -> f64 {
        self.pressure_gradient
    }
}

impl Rhs for FalknerSkanRhs {
    fn eval(&self, eta: f64, state: State3) -> State3 {
        falkner_skan_rhs(eta, state, self.pressure_gradient)
    }
}

pub fn blasius_rhs(_eta: f64, s: State3, beta: f64) -> State3 {
    State3::new(s.fp, s.fpp, -beta * s.f * s.fpp)
}

pub fn falkner_skan_rhs(_eta: f64, s: State3, pressure_gradient: f64) -> State3 {
    State3::new(s.fp, s.fpp, -s.f * s.fpp - pressure_gradient * (1.0 - s.fp * s.fp))
}
