//! Steady-state heat flows, bidirectional currents and the performance
//! measures `R`, `J` and `η_α`.
//!
//! All currents produced here are in units of `γε`. `Q̇_σ` is the heat
//! delivered into reservoir `σ`, so the cold reservoir receives positive
//! heat and `J = Q̇_R − Q̇_L` is positive when the left reservoir is hot.

use serde::{Deserialize, Serialize};

use crate::devices::{
    analytic_currents, analytic_rectification, build_model, rated_operators, DeviceFamily,
    DeviceSpec, LindbladModel,
};
use crate::error::{Error, Result};
use crate::operator::{
    build_liouvillian, dissipator_apply, steady_state, DensityMatrix, SteadyState,
};
use crate::thermal::{CouplingConfig, Orientation, Side, ThermalScenario};

/// Currents with magnitude below this (in `γε`) count as zero.
pub const ZERO_CURRENT: f64 = 1e-14;

/// Ratio between the engine current `Q̇_R − Q̇_L` and the closed-form
/// currents of the device module, identical for all three devices.
pub const CURRENT_CALIBRATION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurrentPair {
    pub j_hc: f64,
    pub j_ch: f64,
}

/// Heat delivered into reservoir `side`, in units of `γε`.
///
/// Returns 0 when the side has no channels.
pub fn heat_flow(
    model: &LindbladModel,
    side: Side,
    rho: &DensityMatrix,
    scenario: &ThermalScenario,
    coupling: &CouplingConfig,
) -> Result<f64> {
    let terms = rated_operators(&model.channels, coupling, scenario)?;
    let mut power = 0.0;
    for term in terms.iter().filter(|t| t.side == side && t.rate != 0.0) {
        let d = dissipator_apply(&term.operator, rho.matrix())?;
        power += term.rate * (&model.hamiltonian * &d).trace().re;
    }
    Ok(-power / (coupling.gamma * model.energy_scale))
}

/// Diagnostics of one steady-state current evaluation.
#[derive(Debug, Clone)]
pub struct SolvedCurrent {
    /// `Q̇_R − Q̇_L` in `γε`, estimated from the more weakly coupled side.
    pub current: f64,
    pub q_left: f64,
    pub q_right: f64,
    pub steady: SteadyState,
}

impl SolvedCurrent {
    pub fn energy_balance(&self) -> f64 {
        (self.q_left + self.q_right).abs()
    }
}

pub fn solve_current(
    model: &LindbladModel,
    scenario: &ThermalScenario,
    coupling: &CouplingConfig,
) -> Result<SolvedCurrent> {
    let terms = rated_operators(&model.channels, coupling, scenario)?;
    let pairs: Vec<_> = terms.iter().map(|t| t.as_pair()).collect();
    let l = build_liouvillian(&model.hamiltonian, &pairs)?;
    let steady = steady_state(&l)?;
    let q_left = heat_flow(model, Side::L, &steady.rho, scenario, coupling)?;
    let q_right = heat_flow(model, Side::R, &steady.rho, scenario, coupling)?;
    // Q̇_R − Q̇_L = 2Q̇_R = −2Q̇_L at the steady state. The rounding error of
    // Q̇_σ scales with γ_σ, so the weaker side gives the cleaner estimate;
    // with one side decoupled the current is then exactly zero.
    let current = if coupling.side(Side::L) <= coupling.side(Side::R) {
        -2.0 * q_left
    } else {
        2.0 * q_right
    };
    Ok(SolvedCurrent {
        current,
        q_left,
        q_right,
        steady,
    })
}

/// `J = Q̇_R − Q̇_L` at the steady state, in `γε`.
pub fn current(
    model: &LindbladModel,
    scenario: &ThermalScenario,
    coupling: &CouplingConfig,
) -> Result<f64> {
    Ok(solve_current(model, scenario, coupling)?.current)
}

/// Both bias directions, solved numerically.
pub fn bidirectional_detailed(
    spec: &DeviceSpec,
    scenario: &ThermalScenario,
    coupling: &CouplingConfig,
) -> Result<(SolvedCurrent, SolvedCurrent)> {
    let hot_left = scenario.with_orientation(Orientation::HotLeft);
    let (model, _) = build_model(spec, coupling, &hot_left)?;
    let hc = solve_current(&model, &hot_left, coupling)?;
    let ch = solve_current(&model, &scenario.with_orientation(Orientation::HotRight), coupling)?;
    Ok((hc, ch))
}

pub fn bidirectional(
    spec: &DeviceSpec,
    scenario: &ThermalScenario,
    coupling: &CouplingConfig,
) -> Result<CurrentPair> {
    let (hc, ch) = bidirectional_detailed(spec, scenario, coupling)?;
    Ok(CurrentPair {
        j_hc: hc.current,
        j_ch: ch.current,
    })
}

/// Closed-form currents converted to engine units (`γε`, scaled by
/// [`CURRENT_CALIBRATION`]).
pub fn analytic_pair(
    spec: &DeviceSpec,
    scenario: &ThermalScenario,
    coupling: &CouplingConfig,
) -> Result<CurrentPair> {
    let (hc, ch) = analytic_currents(spec, coupling, scenario)?;
    let unit = CURRENT_CALIBRATION / (coupling.gamma * spec.epsilon());
    Ok(CurrentPair {
        j_hc: hc * unit,
        j_ch: ch * unit,
    })
}

/// `R = |(J_hc + J_ch)/(J_hc − J_ch)|`.
pub fn rectification_factor(c: &CurrentPair) -> Result<f64> {
    let diff = c.j_hc - c.j_ch;
    if (c.j_hc.abs() < ZERO_CURRENT && c.j_ch.abs() < ZERO_CURRENT) || diff.abs() <= ZERO_CURRENT {
        return Err(Error::NoThermalBias);
    }
    Ok(((c.j_hc + c.j_ch) / diff).abs())
}

/// `J = max(|J_hc|, |J_ch|)`.
pub fn max_current(c: &CurrentPair) -> f64 {
    c.j_hc.abs().max(c.j_ch.abs())
}

/// `η_α = αR + (1 − α)J`.
pub fn cop(r: f64, j: f64, alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(alpha * r + (1.0 - alpha) * j)
}

/// Which route produces currents for a performance evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineMode {
    /// Closed forms where they exist (A, degenerate B, C); detuned B falls
    /// back to the steady-state engine.
    Analytic,
    /// Steady-state engine everywhere.
    Numeric,
}

/// Full parameter vector of an operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub epsilon: f64,
    pub gamma: f64,
    pub chi: f64,
    pub delta: f64,
    pub g: f64,
    pub t_hot: f64,
    pub t_cold: f64,
}

impl OperatingPoint {
    pub fn spec(&self, family: DeviceFamily) -> DeviceSpec {
        match family {
            DeviceFamily::A => DeviceSpec::A {
                epsilon: self.epsilon,
            },
            DeviceFamily::B => DeviceSpec::B {
                epsilon: self.epsilon,
                delta: self.delta,
                g: self.g,
            },
            DeviceFamily::C => DeviceSpec::C {
                epsilon: self.epsilon,
                g: self.g,
            },
        }
    }

    pub fn coupling(&self) -> CouplingConfig {
        CouplingConfig {
            gamma: self.gamma,
            chi: self.chi,
        }
    }

    pub fn scenario(&self) -> ThermalScenario {
        ThermalScenario {
            t_hot: self.t_hot,
            t_cold: self.t_cold,
            orientation: Orientation::HotLeft,
        }
    }
}

/// `(J, R)` of one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerformancePoint {
    pub device: DeviceFamily,
    /// Maximum current, `γε`.
    pub j: f64,
    pub r: f64,
    pub params: OperatingPoint,
}

impl PerformancePoint {
    pub fn eta(&self, alpha: f64) -> f64 {
        alpha * self.r + (1.0 - alpha) * self.j
    }
}

/// Evaluates `(J, R)` for `family` at `params`.
///
/// In analytic mode `R` comes from the closed-form rectification factor, so
/// points with vanishing current (e.g. `χ = ±1`) keep a finite `R`; the
/// numeric route reports [`Error::NoThermalBias`] there.
pub fn evaluate(
    family: DeviceFamily,
    params: &OperatingPoint,
    mode: EngineMode,
) -> Result<PerformancePoint> {
    let spec = params.spec(family);
    let coupling = params.coupling();
    let scenario = params.scenario();
    let use_numeric = mode == EngineMode::Numeric || (family == DeviceFamily::B && params.delta != 0.0);
    let (j, r) = if use_numeric {
        let pair = bidirectional(&spec, &scenario, &coupling)?;
        (max_current(&pair), rectification_factor(&pair)?)
    } else {
        let pair = analytic_pair(&spec, &scenario, &coupling)?;
        (max_current(&pair), analytic_rectification(&spec, &coupling, &scenario)?)
    };
    if !(r <= 1.0 + 1e-9) || !j.is_finite() {
        return Err(Error::NumericalFailure(format!(
            "currents not flowing hot to cold (R = {r})"
        )));
    }
    Ok(PerformancePoint {
        device: family,
        j,
        r: r.min(1.0),
        params: *params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::expectation;
    use crate::thermal::bose_einstein;

    fn point(chi: f64, t_hot: f64) -> OperatingPoint {
        OperatingPoint {
            epsilon: 1.0,
            gamma: 0.001,
            chi,
            delta: 0.0,
            g: 0.0,
            t_hot,
            t_cold: 0.01,
        }
    }

    #[test]
    fn rectification_factor_examples() {
        let r = |a, b| rectification_factor(&CurrentPair { j_hc: a, j_ch: b });
        assert_eq!(r(2.0, -2.0).unwrap(), 0.0);
        assert_eq!(r(2.0, 0.0).unwrap(), 1.0);
        assert_eq!(r(3.0, -1.0).unwrap(), 0.5);
        assert_eq!(r(0.0, 0.0), Err(Error::NoThermalBias));
        assert_eq!(r(1e-15, -1e-15), Err(Error::NoThermalBias));
    }

    #[test]
    fn max_current_and_cop_examples() {
        let m = |a, b| max_current(&CurrentPair { j_hc: a, j_ch: b });
        assert_eq!(m(2.0, -1.0), 2.0);
        assert_eq!(m(0.0, 0.0), 0.0);
        assert_eq!(m(1.0, -3.0), 3.0);
        assert_eq!(cop(0.4, 1.2, 1.0).unwrap(), 0.4);
        assert_eq!(cop(0.4, 1.2, 0.0).unwrap(), 1.2);
        assert!((cop(0.4, 1.2, 0.5).unwrap() - 0.8).abs() < 1e-15);
        assert_eq!(cop(0.4, 1.2, 1.5), Err(Error::AlphaOutOfRange(1.5)));
        assert!(cop(0.4, 1.2, -0.1).is_err());
    }

    #[test]
    fn decoupled_side_carries_no_current() {
        for family in [DeviceFamily::A, DeviceFamily::B, DeviceFamily::C] {
            for chi in [-1.0, 1.0] {
                let p = OperatingPoint {
                    chi,
                    g: 0.9,
                    delta: 0.05,
                    ..point(0.0, 2.0)
                };
                let pair = bidirectional(&p.spec(family), &p.scenario(), &p.coupling()).unwrap();
                assert_eq!((pair.j_hc, pair.j_ch), (0.0, 0.0));
                assert_eq!(evaluate(family, &p, EngineMode::Numeric).unwrap_err(), Error::NoThermalBias);
            }
        }
    }

    #[test]
    fn device_a_steady_populations() {
        let spec = DeviceSpec::A { epsilon: 1.0 };
        let coupling = CouplingConfig::new(0.001, 0.4).unwrap();
        let scenario = ThermalScenario::new(2.0, 0.01, Orientation::HotLeft).unwrap();
        let (model, _) = build_model(&spec, &coupling, &scenario).unwrap();
        let solved = solve_current(&model, &scenario, &coupling).unwrap();
        // oracle: Γ± summed over the hot (left) and cold (right) couplings
        let (gl, gr) = (0.001 * 0.6, 0.001 * 1.4);
        let (nh, nc) = (bose_einstein(1.0, 2.0).unwrap(), bose_einstein(1.0, 0.01).unwrap());
        let up = gl * nh + gr * nc;
        let down = gl * (1.0 + nh) + gr * (1.0 + nc);
        let p = solved.steady.rho.populations();
        assert!((p[1] - up / (up + down)).abs() < 1e-12);
        assert!((p[0] - down / (up + down)).abs() < 1e-12);
        let energy = expectation(&model.hamiltonian, &solved.steady.rho).unwrap();
        assert!((energy.re - up / (up + down)).abs() < 1e-12 && energy.im.abs() < 1e-12);
        assert!(solved.q_right > 0.0);
        assert!(solved.energy_balance() < 1e-10);
    }

    #[test]
    fn equilibrium_heat_flows_vanish() {
        let spec = DeviceSpec::C { epsilon: 1.0, g: 0.3 };
        let coupling = CouplingConfig::new(0.001, 0.2).unwrap();
        let scenario = ThermalScenario::new(0.8, 0.8, Orientation::HotLeft).unwrap();
        let (model, _) = build_model(&spec, &coupling, &scenario).unwrap();
        let solved = solve_current(&model, &scenario, &coupling).unwrap();
        assert!(solved.q_left.abs() < 1e-12 && solved.q_right.abs() < 1e-12);
        let pair = bidirectional(&spec, &scenario, &coupling).unwrap();
        assert_eq!(rectification_factor(&pair), Err(Error::NoThermalBias));
    }

    #[test]
    fn full_asymmetry_blocks_current() {
        let spec = DeviceSpec::A { epsilon: 1.0 };
        let scenario = ThermalScenario::new(2.0, 0.01, Orientation::HotLeft).unwrap();
        for chi in [-1.0, 1.0] {
            let pair = bidirectional(&spec, &scenario, &CouplingConfig::new(0.001, chi).unwrap()).unwrap();
            assert!(pair.j_hc.abs() < 1e-12 && pair.j_ch.abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_devices_conduct_equally_both_ways() {
        let scenario = ThermalScenario::new(1.5, 0.1, Orientation::HotLeft).unwrap();
        let coupling = CouplingConfig::new(0.001, 0.0).unwrap();
        for spec in [DeviceSpec::A { epsilon: 1.0 }, DeviceSpec::C { epsilon: 1.0, g: 0.4 }] {
            let pair = bidirectional(&spec, &scenario, &coupling).unwrap();
            assert!(pair.j_hc > 0.0);
            assert!((pair.j_hc + pair.j_ch).abs() < 1e-12 * pair.j_hc);
        }
    }

    #[test]
    fn analytic_and_numeric_evaluations_agree() {
        for family in [DeviceFamily::A, DeviceFamily::B, DeviceFamily::C] {
            let mut p = point(0.45, 1.4);
            p.g = 0.2;
            let a = evaluate(family, &p, EngineMode::Analytic).unwrap();
            let n = evaluate(family, &p, EngineMode::Numeric).unwrap();
            assert!((a.r - n.r).abs() < 1e-10, "{family}");
            assert!((a.j - n.j).abs() < 1e-10 * a.j, "{family}");
        }
    }

    #[test]
    fn analytic_mode_keeps_r_at_full_asymmetry() {
        let p = point(1.0, 2.0);
        let a = evaluate(DeviceFamily::A, &p, EngineMode::Analytic).unwrap();
        assert_eq!(a.j, 0.0);
        let n = bose_einstein(1.0, 2.0).unwrap() - bose_einstein(1.0, 0.01).unwrap();
        let s = bose_einstein(1.0, 2.0).unwrap() + bose_einstein(1.0, 0.01).unwrap();
        assert!((a.r - n / (1.0 + s)).abs() < 1e-15);
        assert_eq!(evaluate(DeviceFamily::A, &p, EngineMode::Numeric), Err(Error::NoThermalBias));
    }

    #[test]
    fn detuned_b_uses_engine_in_analytic_mode() {
        let mut p = point(0.2, 2.0);
        p.delta = 0.03;
        p.g = 0.01;
        let a = evaluate(DeviceFamily::B, &p, EngineMode::Analytic).unwrap();
        let n = evaluate(DeviceFamily::B, &p, EngineMode::Numeric).unwrap();
        assert_eq!(a, n);
    }
}
