//! Lindblad models of the three spin-boson rectifiers and their closed-form
//! currents and rectification factors.
//!
//! Qubit states are indexed by occupation (0 = ground, 1 = excited). For two
//! qubits the index of `|ab⟩` is `2a + b`, the left qubit being `a`.
//!
//! Every channel carries a lowering operator `A` at transition energy `E`.
//! Absorption `γ⁺(E)` drives `D[A†]` and emission `γ⁻(E)` drives `D[A]`,
//! which makes the equilibrium state thermal.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{sigma_minus, sigma_plus, Complex64, ComplexMatrix};
use crate::thermal::{bose_einstein, rates, CouplingConfig, Side, ThermalScenario};

/// Largest detuning accepted for device B, relative to `ε`.
pub const MAX_RELATIVE_DETUNING: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DeviceFamily {
    A,
    B,
    C,
}

impl fmt::Display for DeviceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DeviceFamily::A => "A",
            DeviceFamily::B => "B",
            DeviceFamily::C => "C",
        };
        f.write_str(s)
    }
}

/// Device parameters. Energies share the units of the temperatures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DeviceSpec {
    /// Single qubit with gap `epsilon`.
    A { epsilon: f64 },
    /// Two weakly coupled qubits with gaps `epsilon`, `epsilon + delta` and
    /// flip-flop coupling `g`, local dissipators.
    B { epsilon: f64, delta: f64, g: f64 },
    /// Two degenerate strongly coupled qubits, global dissipators.
    C { epsilon: f64, g: f64 },
}

impl DeviceSpec {
    pub fn family(&self) -> DeviceFamily {
        match self {
            DeviceSpec::A { .. } => DeviceFamily::A,
            DeviceSpec::B { .. } => DeviceFamily::B,
            DeviceSpec::C { .. } => DeviceFamily::C,
        }
    }

    pub fn epsilon(&self) -> f64 {
        match *self {
            DeviceSpec::A { epsilon } | DeviceSpec::B { epsilon, .. } | DeviceSpec::C { epsilon, .. } => {
                epsilon
            }
        }
    }

    /// Checks the parameter domain. Device C with `g ≥ ε` passes here and
    /// fails later with [`Error::NonPositiveEnergy`] for its lower Bohr
    /// frequency.
    pub fn validate(&self) -> Result<()> {
        let eps = self.epsilon();
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::InvalidSpec(format!("epsilon must be positive, got {eps}")));
        }
        match *self {
            DeviceSpec::A { .. } => Ok(()),
            DeviceSpec::B { delta, g, .. } => {
                if !(delta >= 0.0 && delta <= MAX_RELATIVE_DETUNING * eps) {
                    return Err(Error::InvalidSpec(format!(
                        "detuning must lie in [0, {MAX_RELATIVE_DETUNING}·epsilon], got {delta}"
                    )));
                }
                if !(g >= 0.0) || !g.is_finite() {
                    return Err(Error::InvalidSpec(format!("g must be non-negative, got {g}")));
                }
                Ok(())
            }
            DeviceSpec::C { g, .. } => {
                if !(g > 0.0) || !g.is_finite() {
                    return Err(Error::InvalidSpec(format!("g must be positive, got {g}")));
                }
                Ok(())
            }
        }
    }

    /// True for device B with equal qubit gaps.
    pub fn is_degenerate_b(&self) -> bool {
        matches!(self, DeviceSpec::B { delta, .. } if *delta == 0.0)
    }
}

/// A lowering operator exchanging one quantum of `transition_energy` with the
/// reservoir on `side`.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpChannel {
    pub operator: ComplexMatrix,
    pub transition_energy: f64,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LindbladModel {
    pub hamiltonian: ComplexMatrix,
    pub channels: Vec<JumpChannel>,
    /// `ε` of the device; currents are normalized by `γ·ε`.
    pub energy_scale: f64,
}

/// One dissipator term `rate · D[operator]` of the master equation.
#[derive(Debug, Clone, PartialEq)]
pub struct RatedOperator {
    pub rate: f64,
    pub operator: ComplexMatrix,
    pub side: Side,
}

impl RatedOperator {
    pub fn as_pair(&self) -> (f64, ComplexMatrix) {
        (self.rate, self.operator.clone())
    }
}

/// Rate-operator pairs of `channels` for the given coupling and temperatures.
pub fn rated_operators(
    channels: &[JumpChannel],
    coupling: &CouplingConfig,
    scenario: &ThermalScenario,
) -> Result<Vec<RatedOperator>> {
    let mut out = Vec::with_capacity(2 * channels.len());
    for ch in channels {
        let (up, down) = rates(
            ch.transition_energy,
            scenario.temperature(ch.side),
            coupling.side(ch.side),
        )?;
        out.push(RatedOperator {
            rate: up,
            operator: ch.operator.adjoint(),
            side: ch.side,
        });
        out.push(RatedOperator {
            rate: down,
            operator: ch.operator.clone(),
            side: ch.side,
        });
    }
    Ok(out)
}

fn number() -> ComplexMatrix {
    &sigma_plus() * &sigma_minus()
}

fn two_qubit_hamiltonian(eps_left: f64, eps_right: f64, g: f64) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let n = number();
    let local = &n.kron(&id).scale_real(eps_left) + &id.kron(&n).scale_real(eps_right);
    let hop = &sigma_plus().kron(&sigma_minus()) + &sigma_minus().kron(&sigma_plus());
    &local + &hop.scale_real(g)
}

fn lowering(side: Side) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    match side {
        Side::L => sigma_minus().kron(&id),
        Side::R => id.kron(&sigma_minus()),
    }
}

/// Energy eigenstates of device C: `|00⟩`, `|ε₋⟩`, `|ε₊⟩`, `|11⟩` with
/// `|ε±⟩ = (|10⟩ ± |01⟩)/√2`.
fn device_c_eigenbasis(epsilon: f64, g: f64) -> Vec<(f64, Vec<Complex64>)> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = |v: [f64; 4]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
    vec![
        (0.0, c([1.0, 0.0, 0.0, 0.0])),
        (epsilon - g, c([0.0, -s, s, 0.0])),
        (epsilon + g, c([0.0, s, s, 0.0])),
        (2.0 * epsilon, c([0.0, 0.0, 0.0, 1.0])),
    ]
}

/// Splits `op` into lowering eigenoperators `A(ω) = Σ_{E'−E=ω} |E⟩⟨E|op|E'⟩⟨E'|`
/// of the Hamiltonian with the given eigenbasis, grouping equal positive
/// Bohr frequencies. Returned in ascending frequency.
pub fn lowering_eigenoperators(
    eigenbasis: &[(f64, Vec<Complex64>)],
    op: &ComplexMatrix,
) -> Result<Vec<(f64, ComplexMatrix)>> {
    let scale = eigenbasis.iter().map(|(e, _)| e.abs()).fold(1.0, f64::max);
    let tol = 1e-12 * scale;
    let mut groups: Vec<(f64, ComplexMatrix)> = Vec::new();
    for (e_low, low) in eigenbasis {
        for (e_high, high) in eigenbasis {
            let omega = e_high - e_low;
            if omega <= tol {
                continue;
            }
            let amp: Complex64 = {
                let v = op.apply(high)?;
                low.iter().zip(&v).map(|(a, b)| a.conj() * b).sum()
            };
            if amp.norm() <= 1e-14 {
                continue;
            }
            let term = ComplexMatrix::outer(low, high)?.scale(amp);
            match groups.iter_mut().find(|(w, _)| (w - omega).abs() <= tol) {
                Some((_, acc)) => *acc = &*acc + &term,
                None => groups.push((omega, term)),
            }
        }
    }
    groups.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(groups)
}

/// Hamiltonian and jump channels of a device.
pub fn device_model(spec: &DeviceSpec) -> Result<LindbladModel> {
    spec.validate()?;
    let epsilon = spec.epsilon();
    let model = match *spec {
        DeviceSpec::A { epsilon } => LindbladModel {
            hamiltonian: number().scale_real(epsilon),
            channels: [Side::L, Side::R]
                .into_iter()
                .map(|side| JumpChannel {
                    operator: sigma_minus(),
                    transition_energy: epsilon,
                    side,
                })
                .collect(),
            energy_scale: epsilon,
        },
        DeviceSpec::B { epsilon, delta, g } => LindbladModel {
            hamiltonian: two_qubit_hamiltonian(epsilon, epsilon + delta, g),
            channels: vec![
                JumpChannel {
                    operator: lowering(Side::L),
                    transition_energy: epsilon,
                    side: Side::L,
                },
                JumpChannel {
                    operator: lowering(Side::R),
                    transition_energy: epsilon + delta,
                    side: Side::R,
                },
            ],
            energy_scale: epsilon,
        },
        DeviceSpec::C { epsilon, g } => {
            if epsilon - g <= 0.0 {
                return Err(Error::NonPositiveEnergy(epsilon - g));
            }
            let basis = device_c_eigenbasis(epsilon, g);
            let mut channels = Vec::with_capacity(4);
            for side in [Side::L, Side::R] {
                for (omega, operator) in lowering_eigenoperators(&basis, &lowering(side))? {
                    channels.push(JumpChannel {
                        operator,
                        transition_energy: omega,
                        side,
                    });
                }
            }
            LindbladModel {
                hamiltonian: two_qubit_hamiltonian(epsilon, epsilon, g),
                channels,
                energy_scale: epsilon,
            }
        }
    };
    debug_assert_eq!(model.energy_scale, epsilon);
    Ok(model)
}

/// Device model plus the dissipator terms for the given coupling and bias.
pub fn build_model(
    spec: &DeviceSpec,
    coupling: &CouplingConfig,
    scenario: &ThermalScenario,
) -> Result<(LindbladModel, Vec<RatedOperator>)> {
    coupling.validate()?;
    scenario.validate()?;
    let model = device_model(spec)?;
    let terms = rated_operators(&model.channels, coupling, scenario)?;
    Ok((model, terms))
}

/// `(Δ_hc, Σ) = (n_B(E,T_h) − n_B(E,T_c), n_B(E,T_h) + n_B(E,T_c))`.
pub fn bias_functions(energy: f64, scenario: &ThermalScenario) -> Result<(f64, f64)> {
    let hot = bose_einstein(energy, scenario.t_hot)?;
    let cold = bose_einstein(energy, scenario.t_cold)?;
    Ok((hot - cold, hot + cold))
}

/// Single-qubit-shaped current pair `±E(1−χ²)Δ/(1+Σ ∓ χΔ)` at energy `E`.
fn qubit_terms(energy: f64, chi: f64, scenario: &ThermalScenario) -> Result<(f64, f64)> {
    let (delta, sigma) = bias_functions(energy, scenario)?;
    let num = energy * (1.0 - chi * chi) * delta;
    Ok((num / (1.0 + sigma - chi * delta), -num / (1.0 + sigma + chi * delta)))
}

/// Closed-form `(J_hc, J_ch)` in physical units (energy × rate).
pub fn analytic_currents(
    spec: &DeviceSpec,
    coupling: &CouplingConfig,
    scenario: &ThermalScenario,
) -> Result<(f64, f64)> {
    spec.validate()?;
    coupling.validate()?;
    scenario.validate()?;
    let (gamma, chi) = (coupling.gamma, coupling.chi);
    match *spec {
        DeviceSpec::A { epsilon } => {
            let (hc, ch) = qubit_terms(epsilon, chi, scenario)?;
            Ok((2.0 * gamma * hc, 2.0 * gamma * ch))
        }
        DeviceSpec::B { epsilon, delta, g } => {
            if delta != 0.0 {
                return Err(Error::NoAnalyticForm);
            }
            let (hc, ch) = analytic_currents(&DeviceSpec::A { epsilon }, coupling, scenario)?;
            let (gl, gr) = crate::thermal::side_couplings(coupling);
            let n_hot = bose_einstein(epsilon, scenario.t_hot)?;
            let n_cold = bose_einstein(epsilon, scenario.t_cold)?;
            // Γ_σ = γ_σ⁺ + γ_σ⁻ = γ_σ(1 + 2n_B) at the side's temperature
            let suppression = |n_left: f64, n_right: f64| {
                if g == 0.0 {
                    return 0.0;
                }
                let big_l = gl * (1.0 + 2.0 * n_left);
                let big_r = gr * (1.0 + 2.0 * n_right);
                1.0 / (1.0 + big_l * big_r / (4.0 * g * g))
            };
            Ok((hc * suppression(n_hot, n_cold), ch * suppression(n_cold, n_hot)))
        }
        DeviceSpec::C { epsilon, g } => {
            let (lo_hc, lo_ch) = qubit_terms(epsilon - g, chi, scenario)?;
            let (hi_hc, hi_ch) = qubit_terms(epsilon + g, chi, scenario)?;
            Ok((gamma * (lo_hc + hi_hc), gamma * (lo_ch + hi_ch)))
        }
    }
}

/// Closed-form rectification factor.
pub fn analytic_rectification(
    spec: &DeviceSpec,
    coupling: &CouplingConfig,
    scenario: &ThermalScenario,
) -> Result<f64> {
    spec.validate()?;
    coupling.validate()?;
    scenario.validate()?;
    let chi = coupling.chi;
    match *spec {
        DeviceSpec::A { epsilon } => {
            let (delta, sigma) = bias_functions(epsilon, scenario)?;
            if delta == 0.0 {
                return Err(Error::EquilibriumUndefined);
            }
            Ok(chi.abs() * delta / (1.0 + sigma))
        }
        DeviceSpec::B { epsilon, delta, .. } => {
            if delta != 0.0 {
                return Err(Error::NoAnalyticForm);
            }
            analytic_rectification(&DeviceSpec::A { epsilon }, coupling, scenario)
        }
        DeviceSpec::C { epsilon, g } => {
            let mut num = 0.0;
            let mut den = 0.0;
            let mut biased = false;
            for energy in [epsilon - g, epsilon + g] {
                let (delta, sigma) = bias_functions(energy, scenario)?;
                biased |= delta != 0.0;
                let common = (1.0 + sigma).powi(2) - chi * chi * delta * delta;
                num += energy * chi * delta * delta / common;
                den += energy * delta * (1.0 + sigma) / common;
            }
            if !biased {
                return Err(Error::EquilibriumUndefined);
            }
            Ok((num / den).abs())
        }
    }
}

/// Non-fatal notes about the validity regime of a configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum RegimeWarning {
    /// Device B outside `g ≤ γ`.
    WeakCouplingViolated { g: f64, gamma: f64 },
    /// Device C outside `g ≥ 10γ`.
    StrongCouplingViolated { g: f64, gamma: f64 },
}

impl fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegimeWarning::WeakCouplingViolated { g, gamma } => write!(
                f,
                "device B: g = {g} exceeds gamma = {gamma}; local master equation may be inaccurate"
            ),
            RegimeWarning::StrongCouplingViolated { g, gamma } => write!(
                f,
                "device C: g = {g} below 10·gamma = {}; global master equation may be inaccurate",
                10.0 * gamma
            ),
        }
    }
}

pub fn regime_check(spec: &DeviceSpec, coupling: &CouplingConfig) -> Vec<RegimeWarning> {
    let gamma = coupling.gamma;
    match *spec {
        DeviceSpec::A { .. } => Vec::new(),
        DeviceSpec::B { g, .. } if g > gamma => {
            vec![RegimeWarning::WeakCouplingViolated { g, gamma }]
        }
        DeviceSpec::C { g, .. } if g < 10.0 * gamma => {
            vec![RegimeWarning::StrongCouplingViolated { g, gamma }]
        }
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermal::Orientation;

    fn scenario(th: f64, tc: f64) -> ThermalScenario {
        ThermalScenario::new(th, tc, Orientation::HotLeft).unwrap()
    }

    fn coupling(chi: f64) -> CouplingConfig {
        CouplingConfig::new(0.001, chi).unwrap()
    }

    #[test]
    fn device_a_structure() {
        let (model, terms) =
            build_model(&DeviceSpec::A { epsilon: 1.0 }, &coupling(0.4), &scenario(2.0, 0.01)).unwrap();
        assert_eq!(model.channels.len(), 2);
        assert!(model.channels.iter().all(|c| c.transition_energy == 1.0));
        assert_eq!(terms.len(), 4);
        // absorption pairs with the raising operator
        assert_eq!(terms[0].operator, sigma_plus());
        assert_eq!(terms[1].operator, sigma_minus());
        assert!(terms[0].rate < terms[1].rate);
    }

    #[test]
    fn device_b_channels() {
        let spec = DeviceSpec::B { epsilon: 1.0, delta: 0.0, g: 0.01 };
        let model = device_model(&spec).unwrap();
        assert!(model.channels.iter().all(|c| c.transition_energy == 1.0));
        let detuned = device_model(&DeviceSpec::B { epsilon: 1.0, delta: 0.05, g: 0.01 }).unwrap();
        assert_eq!(detuned.channels[1].transition_energy, 1.05);
        assert!(detuned.hamiltonian.is_hermitian(0.0));
        assert!(DeviceSpec::B { epsilon: 1.0, delta: 0.3, g: 0.0 }.validate().is_err());
        assert!(DeviceSpec::B { epsilon: 1.0, delta: -0.01, g: 0.0 }.validate().is_err());
    }

    #[test]
    fn device_c_channel_energies_and_elements() {
        let model = device_model(&DeviceSpec::C { epsilon: 1.0, g: 0.3 }).unwrap();
        let energies: Vec<(Side, f64)> = model
            .channels
            .iter()
            .map(|c| (c.side, c.transition_energy))
            .collect();
        assert_eq!(energies.len(), 4);
        for (i, side) in [Side::L, Side::R].into_iter().enumerate() {
            assert_eq!(energies[2 * i].0, side);
            assert!((energies[2 * i].1 - 0.7).abs() < 1e-15);
            assert!((energies[2 * i + 1].1 - 1.3).abs() < 1e-15);
        }
        // ⟨00|A_L(ω)|ε±⟩ = 1/√2 for ω = ε ± g
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let minus = [0.0, -s, s, 0.0];
        let plus = [0.0, s, s, 0.0];
        for (ch, state) in model.channels[..2].iter().zip([minus, plus]) {
            let elem: Complex64 = (0..4).map(|k| ch.operator[(0, k)] * state[k]).sum();
            assert!((elem.re - s).abs() < 1e-15 && elem.im == 0.0);
        }
    }

    #[test]
    fn channels_are_lowering_eigenoperators() {
        let specs = [
            DeviceSpec::A { epsilon: 1.3 },
            DeviceSpec::B { epsilon: 1.0, delta: 0.07, g: 0.0 },
            DeviceSpec::C { epsilon: 1.0, g: 0.45 },
            DeviceSpec::C { epsilon: 2.0, g: 1e-6 },
        ];
        for spec in specs {
            let model = device_model(&spec).unwrap();
            for ch in &model.channels {
                let lhs = model.hamiltonian.commutator(&ch.operator);
                let rhs = ch.operator.scale_real(-ch.transition_energy);
                assert!((&lhs - &rhs).max_abs() < 1e-10, "{spec:?}");
            }
        }
    }

    #[test]
    fn device_c_rejects_large_coupling() {
        let err = device_model(&DeviceSpec::C { epsilon: 1.0, g: 1.2 }).unwrap_err();
        assert!(matches!(err, Error::NonPositiveEnergy(e) if e < 0.0));
        let err = analytic_currents(&DeviceSpec::C { epsilon: 1.0, g: 1.0 }, &coupling(0.1), &scenario(1.0, 0.1))
            .unwrap_err();
        assert_eq!(err, Error::NonPositiveEnergy(0.0));
    }

    #[test]
    fn bias_function_examples() {
        let (d, s) = bias_functions(1.0, &scenario(0.7, 0.7)).unwrap();
        assert_eq!(d, 0.0);
        assert!(s > 0.0);
        let (d, s) = bias_functions(1.0, &scenario(1.0, 0.01)).unwrap();
        assert!((d - 0.581_976_706_869_326_4).abs() < 1e-15);
        assert!((s - 0.581_976_706_869_326_4).abs() < 1e-15);
        let (d, s) = bias_functions(1.0, &scenario(1e4, 0.5)).unwrap();
        let n_hot = bose_einstein(1.0, 1e4).unwrap();
        assert!((d - n_hot).abs() / n_hot < 1e-3 && (s - n_hot).abs() / n_hot < 1e-3);
    }

    #[test]
    fn currents_vanish_at_full_asymmetry() {
        for chi in [-1.0, 1.0] {
            for spec in [DeviceSpec::A { epsilon: 1.0 }, DeviceSpec::C { epsilon: 1.0, g: 0.5 }] {
                let (hc, ch) = analytic_currents(&spec, &coupling(chi), &scenario(2.0, 0.01)).unwrap();
                assert_eq!((hc, ch), (0.0, 0.0));
            }
        }
    }

    #[test]
    fn high_temperature_limit_of_device_a() {
        let chi = 0.3;
        let (hc, ch) = analytic_currents(&DeviceSpec::A { epsilon: 1.0 }, &coupling(chi), &scenario(1e4, 0.01))
            .unwrap();
        let gamma = 0.001;
        assert!((hc - 2.0 * gamma * (1.0 + chi)).abs() / (2.0 * gamma * (1.0 + chi)) < 1e-3);
        assert!((ch + 2.0 * gamma * (1.0 - chi)).abs() / (2.0 * gamma * (1.0 - chi)) < 1e-3);
        let r = analytic_rectification(&DeviceSpec::A { epsilon: 1.0 }, &coupling(chi), &scenario(1e4, 0.01))
            .unwrap();
        assert!((r - chi).abs() < 1e-3);
    }

    #[test]
    fn rectification_is_linear_in_asymmetry_for_a() {
        let s = scenario(1.7, 0.2);
        let a = DeviceSpec::A { epsilon: 1.0 };
        let half = analytic_rectification(&a, &coupling(0.5), &s).unwrap();
        let full = analytic_rectification(&a, &coupling(1.0), &s).unwrap();
        assert!((2.0 * half - full).abs() < 1e-15);
        assert!(full <= 1.0);
    }

    #[test]
    fn symmetric_coupling_has_no_rectification() {
        let s = scenario(2.0, 0.3);
        for spec in [
            DeviceSpec::A { epsilon: 1.0 },
            DeviceSpec::B { epsilon: 1.0, delta: 0.0, g: 0.002 },
            DeviceSpec::C { epsilon: 1.0, g: 0.6 },
        ] {
            assert_eq!(analytic_rectification(&spec, &coupling(0.0), &s).unwrap(), 0.0);
        }
    }

    #[test]
    fn device_c_approaches_device_a_for_small_g() {
        let s = scenario(1.3, 0.05);
        let c = coupling(0.35);
        let a = analytic_currents(&DeviceSpec::A { epsilon: 1.0 }, &c, &s).unwrap();
        let cc = analytic_currents(&DeviceSpec::C { epsilon: 1.0, g: 1e-7 }, &c, &s).unwrap();
        assert!(((a.0 - cc.0) / a.0).abs() < 1e-6);
        assert!(((a.1 - cc.1) / a.1).abs() < 1e-6);
    }

    #[test]
    fn detuned_b_has_no_closed_form() {
        let spec = DeviceSpec::B { epsilon: 1.0, delta: 0.02, g: 0.001 };
        assert_eq!(analytic_currents(&spec, &coupling(0.2), &scenario(1.0, 0.1)), Err(Error::NoAnalyticForm));
        assert_eq!(analytic_rectification(&spec, &coupling(0.2), &scenario(1.0, 0.1)), Err(Error::NoAnalyticForm));
    }

    #[test]
    fn equilibrium_rectification_is_undefined() {
        for spec in [DeviceSpec::A { epsilon: 1.0 }, DeviceSpec::C { epsilon: 1.0, g: 0.2 }] {
            assert_eq!(
                analytic_rectification(&spec, &coupling(0.3), &scenario(0.5, 0.5)),
                Err(Error::EquilibriumUndefined)
            );
        }
    }

    #[test]
    fn degenerate_b_never_outconducts_a() {
        let s = scenario(2.0, 0.01);
        for chi in [-0.7, 0.0, 0.4] {
            let a = analytic_currents(&DeviceSpec::A { epsilon: 1.0 }, &coupling(chi), &s).unwrap();
            let b = analytic_currents(&DeviceSpec::B { epsilon: 1.0, delta: 0.0, g: 0.001 }, &coupling(chi), &s)
                .unwrap();
            assert!(b.0.abs() <= a.0.abs() && b.1.abs() <= a.1.abs());
            let b0 = analytic_currents(&DeviceSpec::B { epsilon: 1.0, delta: 0.0, g: 0.0 }, &coupling(chi), &s)
                .unwrap();
            assert_eq!(b0, (0.0, 0.0));
        }
    }

    #[test]
    fn regime_warnings() {
        let c = CouplingConfig::new(0.001, 0.2).unwrap();
        assert_eq!(regime_check(&DeviceSpec::B { epsilon: 1.0, delta: 0.0, g: 0.01 }, &c).len(), 1);
        assert!(regime_check(&DeviceSpec::B { epsilon: 1.0, delta: 0.0, g: 0.001 }, &c).is_empty());
        assert!(regime_check(&DeviceSpec::C { epsilon: 1.0, g: 0.8 }, &c).is_empty());
        assert_eq!(regime_check(&DeviceSpec::C { epsilon: 1.0, g: 0.005 }, &c).len(), 1);
        assert!(regime_check(&DeviceSpec::A { epsilon: 1.0 }, &c).is_empty());
    }
}
