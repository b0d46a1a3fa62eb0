use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::front::DOMINANCE_TOL;
use crate::devices::DeviceFamily;
use crate::error::{Error, Result};
use crate::rectification::{evaluate, EngineMode, OperatingPoint, PerformancePoint};

/// Parameter swept along the second region-map axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionAxis {
    Delta,
    G,
}

impl RegionAxis {
    pub fn name(&self) -> &'static str {
        match self {
            RegionAxis::Delta => "delta",
            RegionAxis::G => "g",
        }
    }

    fn apply(&self, p: &mut OperatingPoint, v: f64) {
        match self {
            RegionAxis::Delta => p.delta = v,
            RegionAxis::G => p.g = v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    FirstDominates,
    SecondDominates,
    AlphaDependent,
}

impl RegionLabel {
    pub fn code(&self) -> &'static str {
        match self {
            RegionLabel::FirstDominates => "FIRST",
            RegionLabel::SecondDominates => "SECOND",
            RegionLabel::AlphaDependent => "ALPHA",
        }
    }

    pub fn swapped(self) -> Self {
        match self {
            RegionLabel::FirstDominates => RegionLabel::SecondDominates,
            RegionLabel::SecondDominates => RegionLabel::FirstDominates,
            RegionLabel::AlphaDependent => RegionLabel::AlphaDependent,
        }
    }
}

/// Labels a cell from the two devices' performance there.
pub fn classify(first: &PerformancePoint, second: &PerformancePoint, tol: f64) -> RegionLabel {
    if first.j > second.j + tol && first.r > second.r + tol {
        RegionLabel::FirstDominates
    } else if second.j > first.j + tol && second.r > first.r + tol {
        RegionLabel::SecondDominates
    } else {
        RegionLabel::AlphaDependent
    }
}

/// Dominance labels over a `(T_h, axis)` grid. `cells[i][k]` belongs to
/// `t_hot[i]` and `values[k]`; `None` marks cells where either device could
/// not be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMap {
    pub first: DeviceFamily,
    pub second: DeviceFamily,
    pub axis: RegionAxis,
    pub t_hot: Vec<f64>,
    pub values: Vec<f64>,
    pub cells: Vec<Vec<Option<RegionLabel>>>,
}

impl RegionMap {
    pub fn count(&self, label: RegionLabel) -> usize {
        self.cells.iter().flatten().filter(|c| **c == Some(label)).count()
    }

    pub fn infeasible(&self) -> usize {
        self.cells.iter().flatten().filter(|c| c.is_none()).count()
    }
}

/// Compares two devices cell by cell. `base` supplies every parameter not
/// swept; `T_h` and the `axis` parameter are overwritten per cell.
pub fn region_compare(
    first: DeviceFamily,
    second: DeviceFamily,
    base: &OperatingPoint,
    t_hot: &[f64],
    axis: RegionAxis,
    values: &[f64],
    mode: EngineMode,
) -> Result<RegionMap> {
    if t_hot.is_empty() || values.is_empty() {
        return Err(Error::InvalidBox("region grid is empty".into()));
    }
    let cells: Vec<(usize, usize)> = (0..t_hot.len())
        .flat_map(|i| (0..values.len()).map(move |k| (i, k)))
        .collect();
    let labels: Vec<Option<RegionLabel>> = cells
        .par_iter()
        .map(|&(i, k)| {
            let mut p = *base;
            p.t_hot = t_hot[i];
            axis.apply(&mut p, values[k]);
            let a = evaluate(first, &p, mode).ok()?;
            let b = evaluate(second, &p, mode).ok()?;
            Some(classify(&a, &b, DOMINANCE_TOL))
        })
        .collect();
    Ok(RegionMap {
        first,
        second,
        axis,
        t_hot: t_hot.to_vec(),
        values: values.to_vec(),
        cells: labels.chunks(values.len()).map(|c| c.to_vec()).collect(),
    })
}
