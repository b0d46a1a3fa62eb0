//! Heat rectification in spin-boson devices: Lindblad steady states, heat
//! currents, rectification factors and Pareto optimization of the
//! rectification/conduction trade-off.

pub mod devices;
pub mod error;
pub mod operator;
pub mod pareto;
pub mod rectification;
pub mod thermal;

pub use devices::{DeviceFamily, DeviceSpec};
pub use error::{Error, Result};
pub use rectification::{evaluate, EngineMode, OperatingPoint, PerformancePoint};
pub use thermal::{CouplingConfig, Orientation, Side, ThermalScenario};
