//! Bose-Einstein occupations, thermal jump rates and the asymmetric
//! reservoir coupling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which reservoir is held at the hot temperature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    HotLeft,
    HotRight,
}

/// Reservoir side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

/// Reservoir temperatures (k_B = 1) and the bias direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalScenario {
    pub t_hot: f64,
    pub t_cold: f64,
    pub orientation: Orientation,
}

impl ThermalScenario {
    pub fn new(t_hot: f64, t_cold: f64, orientation: Orientation) -> Result<Self> {
        let s = Self {
            t_hot,
            t_cold,
            orientation,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        for t in [self.t_hot, self.t_cold] {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::NonPositiveTemperature(t));
            }
        }
        if self.t_hot < self.t_cold {
            return Err(Error::InvalidScenario(format!(
                "T_h = {} below T_c = {}",
                self.t_hot, self.t_cold
            )));
        }
        Ok(())
    }

    pub fn with_orientation(self, orientation: Orientation) -> Self {
        Self {
            orientation,
            ..self
        }
    }

    pub fn temperature(&self, side: Side) -> f64 {
        match (self.orientation, side) {
            (Orientation::HotLeft, Side::L) | (Orientation::HotRight, Side::R) => self.t_hot,
            _ => self.t_cold,
        }
    }
}

/// Bare coupling rate and left-right asymmetry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingConfig {
    pub gamma: f64,
    pub chi: f64,
}

impl CouplingConfig {
    pub fn new(gamma: f64, chi: f64) -> Result<Self> {
        let c = Self { gamma, chi };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidCoupling(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if !(self.chi.abs() <= 1.0) {
            return Err(Error::InvalidCoupling(format!(
                "chi must lie in [-1, 1], got {}",
                self.chi
            )));
        }
        Ok(())
    }

    pub fn side(&self, side: Side) -> f64 {
        let (l, r) = side_couplings(self);
        match side {
            Side::L => l,
            Side::R => r,
        }
    }
}

/// `n_B(E, T) = 1 / (e^{E/T} − 1)`, evaluated without overflow.
pub fn bose_einstein(energy: f64, temperature: f64) -> Result<f64> {
    if !(energy > 0.0) {
        return Err(Error::NonPositiveEnergy(energy));
    }
    if !(temperature > 0.0) {
        return Err(Error::NonPositiveTemperature(temperature));
    }
    let x = energy / temperature;
    Ok(if x > 30.0 {
        let e = (-x).exp();
        e / (1.0 - e)
    } else if x < 1e-6 {
        1.0 / x - 0.5 + x / 12.0
    } else {
        1.0 / x.exp_m1()
    })
}

/// Absorption and emission rates `(γ⁺, γ⁻) = (γ_σ n_B, γ_σ (1 + n_B))`.
pub fn rates(energy: f64, temperature: f64, gamma_side: f64) -> Result<(f64, f64)> {
    let n = bose_einstein(energy, temperature)?;
    Ok((gamma_side * n, gamma_side * (1.0 + n)))
}

/// `(γ_L, γ_R) = (γ(1 − χ), γ(1 + χ))`.
pub fn side_couplings(c: &CouplingConfig) -> (f64, f64) {
    (c.gamma * (1.0 - c.chi), c.gamma * (1.0 + c.chi))
}
