use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::front::{better, nondominated_filter, DOMINANCE_TOL};
use crate::devices::{DeviceFamily, MAX_RELATIVE_DETUNING};
use crate::error::{Error, Result};
use crate::rectification::{evaluate, EngineMode, OperatingPoint, PerformancePoint};

/// Closed interval; `lo == hi` pins the parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// `n` evenly spaced values including both ends.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        if self.lo == self.hi || n <= 1 {
            return vec![if n == 0 { self.lo } else { 0.5 * (self.lo + self.hi) }];
        }
        let step = self.width() / (n - 1) as f64;
        (0..n)
            .map(|k| if k == n - 1 { self.hi } else { self.lo + step * k as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    Chi,
    Delta,
    G,
}

/// Search domain for one device at fixed `ε`, `γ` and temperatures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterBox {
    pub family: DeviceFamily,
    pub epsilon: f64,
    pub gamma: f64,
    pub t_hot: f64,
    pub t_cold: f64,
    pub chi: Interval,
    /// Used by device B only.
    pub delta: Interval,
    /// Used by devices B and C.
    pub g: Interval,
}

impl ParameterBox {
    /// Ranges of the reference study: `0 ≤ χ ≤ 1`, `0 ≤ δ/ε ≤ 0.1`,
    /// `0 ≤ g/ε ≤ 0.05` for B and `0.1 ≤ g/ε ≤ 0.95` for C, with `ε = 1`,
    /// `γ = 0.001`, `T_c = 0.01`.
    pub fn reference(family: DeviceFamily, t_hot: f64) -> Self {
        let (delta, g) = match family {
            DeviceFamily::A => (Interval::point(0.0), Interval::point(0.0)),
            DeviceFamily::B => (Interval::new(0.0, 0.1), Interval::new(0.0, 0.05)),
            DeviceFamily::C => (Interval::point(0.0), Interval::new(0.1, 0.95)),
        };
        Self {
            family,
            epsilon: 1.0,
            gamma: 0.001,
            t_hot,
            t_cold: 0.01,
            chi: Interval::new(0.0, 1.0),
            delta,
            g,
        }
    }

    pub fn with_t_hot(self, t_hot: f64) -> Self {
        Self { t_hot, ..self }
    }

    fn axes(&self) -> &'static [Axis] {
        match self.family {
            DeviceFamily::A => &[Axis::Chi],
            DeviceFamily::B => &[Axis::Chi, Axis::Delta, Axis::G],
            DeviceFamily::C => &[Axis::Chi, Axis::G],
        }
    }

    fn interval(&self, axis: Axis) -> Interval {
        match axis {
            Axis::Chi => self.chi,
            Axis::Delta => self.delta,
            Axis::G => self.g,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidBox(msg));
        for (name, v) in [
            ("epsilon", self.epsilon),
            ("gamma", self.gamma),
            ("t_hot", self.t_hot),
            ("t_cold", self.t_cold),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if self.t_hot < self.t_cold {
            return bad(format!("t_hot {} below t_cold {}", self.t_hot, self.t_cold));
        }
        for &axis in self.axes() {
            let iv = self.interval(axis);
            if !(iv.lo <= iv.hi) || !iv.lo.is_finite() || !iv.hi.is_finite() {
                return bad(format!("{axis:?} interval [{}, {}] is empty", iv.lo, iv.hi));
            }
            let ok = match (axis, self.family) {
                (Axis::Chi, _) => iv.lo >= -1.0 && iv.hi <= 1.0,
                (Axis::Delta, _) => iv.lo >= 0.0 && iv.hi <= MAX_RELATIVE_DETUNING * self.epsilon,
                (Axis::G, DeviceFamily::C) => iv.lo > 0.0,
                (Axis::G, _) => iv.lo >= 0.0,
            };
            if !ok {
                return bad(format!(
                    "{axis:?} interval [{}, {}] leaves the device domain",
                    iv.lo, iv.hi
                ));
            }
        }
        Ok(())
    }

    fn operating_point(&self, coords: &[(Axis, f64)]) -> OperatingPoint {
        let mut p = OperatingPoint {
            epsilon: self.epsilon,
            gamma: self.gamma,
            chi: self.chi.lo,
            delta: if self.family == DeviceFamily::B { self.delta.lo } else { 0.0 },
            g: if self.family == DeviceFamily::A { 0.0 } else { self.g.lo },
            t_hot: self.t_hot,
            t_cold: self.t_cold,
        };
        for &(axis, v) in coords {
            match axis {
                Axis::Chi => p.chi = v,
                Axis::Delta => p.delta = v,
                Axis::G => p.g = v,
            }
        }
        p
    }
}

/// Grid search with iterative local refinement.
///
/// A uniform grid of `coarse_points` per free dimension is followed by
/// `rounds` refinement passes. Each pass lays `refine_points` per dimension
/// over one previous grid step on either side of the incumbent, so with 9
/// points the step and the box shrink by 1/4 per round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSettings {
    pub coarse_points: usize,
    pub refine_points: usize,
    pub rounds: usize,
    pub mode: EngineMode,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            coarse_points: 64,
            refine_points: 9,
            rounds: 6,
            mode: EngineMode::Analytic,
        }
    }
}

impl OptimizerSettings {
    pub fn validate(&self) -> Result<()> {
        if self.coarse_points == 0 {
            return Err(Error::InvalidBox("coarse_points must be at least 1".into()));
        }
        if self.rounds > 0 && self.refine_points < 2 {
            return Err(Error::InvalidBox("refine_points must be at least 2".into()));
        }
        Ok(())
    }
}

/// Counts of grid evaluations; infeasible points are skipped.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub evaluated: usize,
    pub infeasible: usize,
}

impl SearchStats {
    fn merge(&mut self, other: SearchStats) {
        self.evaluated += other.evaluated;
        self.infeasible += other.infeasible;
    }
}

/// Result of one scalarized optimization.
#[derive(Debug, Clone)]
pub struct CopOptimum {
    pub alpha: f64,
    pub best: PerformancePoint,
    pub eta: f64,
    pub stats: SearchStats,
    /// Every feasible point evaluated along the way.
    pub cloud: Vec<PerformancePoint>,
}

/// Result of maximizing `R` under a current floor.
#[derive(Debug, Clone)]
pub struct ConstrainedOptimum {
    pub j_min: f64,
    pub best: PerformancePoint,
    pub stats: SearchStats,
}

type Objective<'a> = &'a (dyn Fn(&PerformancePoint) -> Option<f64> + Sync);

pub(crate) struct Search<'a> {
    bx: &'a ParameterBox,
    settings: &'a OptimizerSettings,
    free: Vec<(Axis, Interval)>,
}

impl<'a> Search<'a> {
    pub(crate) fn new(bx: &'a ParameterBox, settings: &'a OptimizerSettings) -> Result<Self> {
        bx.validate()?;
        settings.validate()?;
        let free = bx
            .axes()
            .iter()
            .map(|&a| (a, bx.interval(a)))
            .filter(|(_, iv)| iv.lo < iv.hi)
            .collect();
        Ok(Self { bx, settings, free })
    }

    fn evaluate_all(&self, points: Vec<OperatingPoint>) -> (Vec<PerformancePoint>, SearchStats) {
        let family = self.bx.family;
        let mode = self.settings.mode;
        let results: Vec<Option<PerformancePoint>> = points
            .par_iter()
            .map(|p| evaluate(family, p, mode).ok())
            .collect();
        let stats = SearchStats {
            evaluated: results.len(),
            infeasible: results.iter().filter(|r| r.is_none()).count(),
        };
        (results.into_iter().flatten().collect(), stats)
    }

    fn product(&self, axes: &[(Axis, Vec<f64>)]) -> Vec<OperatingPoint> {
        let mut coords: Vec<Vec<(Axis, f64)>> = vec![Vec::new()];
        for (axis, values) in axes {
            coords = coords
                .into_iter()
                .flat_map(|c| {
                    values.iter().map(move |&v| {
                        let mut next = c.clone();
                        next.push((*axis, v));
                        next
                    })
                })
                .collect();
        }
        coords.iter().map(|c| self.bx.operating_point(c)).collect()
    }

    pub(crate) fn coarse(&self) -> (Vec<PerformancePoint>, SearchStats) {
        let axes: Vec<(Axis, Vec<f64>)> = self
            .free
            .iter()
            .map(|&(a, iv)| (a, iv.grid(self.settings.coarse_points)))
            .collect();
        self.evaluate_all(self.product(&axes))
    }

    fn coarse_steps(&self) -> Vec<f64> {
        let n = self.settings.coarse_points;
        self.free
            .iter()
            .map(|(_, iv)| if n > 1 { iv.width() / (n - 1) as f64 } else { iv.width() })
            .collect()
    }

    /// Local refinement around `start`, appending evaluated points to `cloud`.
    pub(crate) fn refine(
        &self,
        start: (f64, PerformancePoint),
        objective: Objective<'_>,
        cloud: &mut Vec<PerformancePoint>,
    ) -> ((f64, PerformancePoint), SearchStats) {
        let mut stats = SearchStats::default();
        let mut best = start;
        if self.free.is_empty() {
            return (best, stats);
        }
        let mut steps = self.coarse_steps();
        let k = self.settings.refine_points;
        for _ in 0..self.settings.rounds {
            let center = best.1.params;
            let axes: Vec<(Axis, Vec<f64>)> = self
                .free
                .iter()
                .zip(&steps)
                .map(|(&(axis, iv), &s)| {
                    let x = match axis {
                        Axis::Chi => center.chi,
                        Axis::Delta => center.delta,
                        Axis::G => center.g,
                    };
                    let local = Interval::new((x - s).max(iv.lo), (x + s).min(iv.hi));
                    (axis, local.grid(k))
                })
                .collect();
            let (points, s) = self.evaluate_all(self.product(&axes));
            stats.merge(s);
            if let Some(candidate) = argmax(&points, objective) {
                if better((candidate.0, &candidate.1), (best.0, &best.1)) {
                    best = candidate;
                }
            }
            cloud.extend(points);
            for s in steps.iter_mut() {
                *s *= 2.0 / (k - 1) as f64;
            }
        }
        (best, stats)
    }
}

pub(crate) fn argmax(
    points: &[PerformancePoint],
    objective: Objective<'_>,
) -> Option<(f64, PerformancePoint)> {
    let mut best: Option<(f64, PerformancePoint)> = None;
    for p in points {
        if let Some(v) = objective(p) {
            let replace = match &best {
                None => true,
                Some((bv, bp)) => better((v, p), (*bv, bp)),
            };
            if replace {
                best = Some((v, *p));
            }
        }
    }
    best
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(())
}

/// Maximizes `η_α = αR + (1−α)J` over the box.
pub fn maximize_cop(bx: &ParameterBox, alpha: f64, settings: &OptimizerSettings) -> Result<CopOptimum> {
    check_alpha(alpha)?;
    let search = Search::new(bx, settings)?;
    let (mut cloud, mut stats) = search.coarse();
    let objective = move |p: &PerformancePoint| Some(p.eta(alpha));
    let start = argmax(&cloud, &objective).ok_or(Error::AllInfeasible {
        evaluated: stats.evaluated,
    })?;
    let ((eta, best), s) = search.refine(start, &objective, &mut cloud);
    stats.merge(s);
    Ok(CopOptimum {
        alpha,
        best,
        eta,
        stats,
        cloud,
    })
}

/// Maximizes `R` subject to `J ≥ j_min` (`J` in `γε`).
pub fn max_r_given_j(bx: &ParameterBox, j_min: f64, settings: &OptimizerSettings) -> Result<ConstrainedOptimum> {
    if !(j_min >= 0.0) {
        return Err(Error::InvalidBox(format!("j_min must be non-negative, got {j_min}")));
    }
    let search = Search::new(bx, settings)?;
    let (mut cloud, mut stats) = search.coarse();
    if cloud.is_empty() {
        return Err(Error::AllInfeasible {
            evaluated: stats.evaluated,
        });
    }
    let objective = move |p: &PerformancePoint| (p.j >= j_min).then_some(p.r);
    let start = argmax(&cloud, &objective).ok_or(Error::Infeasible { j_min })?;
    let ((_, best), s) = search.refine(start, &objective, &mut cloud);
    stats.merge(s);
    Ok(ConstrainedOptimum { j_min, best, stats })
}

/// One point of the optimal-operation locus.
#[derive(Debug, Clone)]
pub struct TradeoffSample {
    pub t_hot: f64,
    pub optimum: Result<PerformancePoint>,
}

/// `maximize_cop` at fixed `alpha` for each hot temperature.
pub fn tradeoff_curve(
    template: &ParameterBox,
    t_hot_values: &[f64],
    alpha: f64,
    settings: &OptimizerSettings,
) -> Vec<TradeoffSample> {
    t_hot_values
        .iter()
        .map(|&t| TradeoffSample {
            t_hot: t,
            optimum: maximize_cop(&template.with_t_hot(t), alpha, settings).map(|o| o.best),
        })
        .collect()
}

/// A front point and the `α` values whose optimum it is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontPoint {
    pub point: PerformancePoint,
    pub winning_alphas: Vec<f64>,
}

/// Non-dominated `(J, R)` points in ascending `J`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoFront {
    pub device: DeviceFamily,
    pub points: Vec<FrontPoint>,
}

impl ParetoFront {
    /// Largest `R` among front points with `J ≥ j`; `None` beyond the front.
    pub fn best_r_at(&self, j: f64) -> Option<f64> {
        self.points
            .iter()
            .filter(|p| p.point.j >= j)
            .map(|p| p.point.r)
            .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.max(r))))
    }

    pub fn max_j(&self) -> Option<f64> {
        self.points.last().map(|p| p.point.j)
    }
}

/// Best `η_α` found for one `α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaOptimum {
    pub alpha: f64,
    pub eta: f64,
    pub point: PerformancePoint,
}

#[derive(Debug, Clone)]
pub struct ParetoRun {
    pub front: ParetoFront,
    pub optima: Vec<AlphaOptimum>,
    /// Every feasible point evaluated, coarse grid first.
    pub cloud: Vec<PerformancePoint>,
    pub stats: SearchStats,
}

/// `n` evenly spaced `α` values on `[0, 1]`.
pub fn uniform_alphas(n: usize) -> Vec<f64> {
    Interval::new(0.0, 1.0).grid(n.max(1))
}

/// Pareto front from the union of the coarse grid, every refinement pass and
/// the `η_α` optima over `alphas`.
pub fn pareto_front(bx: &ParameterBox, alphas: &[f64], settings: &OptimizerSettings) -> Result<ParetoRun> {
    if alphas.is_empty() {
        return Err(Error::InvalidBox("alpha grid is empty".into()));
    }
    for &a in alphas {
        check_alpha(a)?;
    }
    let search = Search::new(bx, settings)?;
    let (coarse, mut stats) = search.coarse();
    if coarse.is_empty() {
        return Err(Error::AllInfeasible {
            evaluated: stats.evaluated,
        });
    }

    let refined: Vec<(AlphaOptimum, Vec<PerformancePoint>, SearchStats)> = alphas
        .iter()
        .map(|&alpha| {
            let objective = move |p: &PerformancePoint| Some(p.eta(alpha));
            let start = argmax(&coarse, &objective).expect("coarse cloud is non-empty");
            let mut local = Vec::new();
            let ((eta, point), s) = search.refine(start, &objective, &mut local);
            (AlphaOptimum { alpha, eta, point }, local, s)
        })
        .collect();

    let mut cloud = coarse;
    let mut optima = Vec::with_capacity(alphas.len());
    for (opt, local, s) in refined {
        stats.merge(s);
        cloud.extend(local);
        optima.push(opt);
    }
    // another α's refinement may have found a better point
    for opt in optima.iter_mut() {
        let alpha = opt.alpha;
        let objective = move |p: &PerformancePoint| Some(p.eta(alpha));
        let (eta, point) = argmax(&cloud, &objective).expect("cloud is non-empty");
        *opt = AlphaOptimum { alpha, eta, point };
    }

    // refinement boxes overlap, so the cloud revisits points
    let mut seen = HashSet::new();
    let front_pts: Vec<PerformancePoint> = nondominated_filter(&cloud, DOMINANCE_TOL)
        .into_iter()
        .filter(|p| {
            let q = p.params;
            seen.insert([p.j, p.r, q.chi, q.delta, q.g].map(f64::to_bits))
        })
        .collect();
    let points = front_pts
        .into_iter()
        .map(|p| FrontPoint {
            winning_alphas: optima
                .iter()
                .filter(|o| o.point.params == p.params)
                .map(|o| o.alpha)
                .collect(),
            point: p,
        })
        .collect();

    Ok(ParetoRun {
        front: ParetoFront {
            device: bx.family,
            points,
        },
        optima,
        cloud,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermal::bose_einstein;

    fn small() -> OptimizerSettings {
        OptimizerSettings {
            coarse_points: 33,
            refine_points: 9,
            rounds: 6,
            mode: EngineMode::Analytic,
        }
    }

    #[test]
    fn interval_grid_includes_ends() {
        let g = Interval::new(0.1, 0.95).grid(64);
        assert_eq!(g.len(), 64);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[63], 0.95);
        assert_eq!(Interval::point(0.3).grid(64), vec![0.3]);
    }

    #[test]
    fn device_a_pure_rectification_sits_at_full_asymmetry() {
        let bx = ParameterBox::reference(DeviceFamily::A, 2.0);
        let opt = maximize_cop(&bx, 1.0, &small()).unwrap();
        assert_eq!(opt.best.params.chi, 1.0);
        let (nh, nc) = (bose_einstein(1.0, 2.0).unwrap(), bose_einstein(1.0, 0.01).unwrap());
        assert!((opt.best.r - (nh - nc) / (1.0 + nh + nc)).abs() < 1e-14);
    }

    #[test]
    fn single_point_box_returns_that_point() {
        let mut bx = ParameterBox::reference(DeviceFamily::C, 1.0);
        bx.chi = Interval::point(0.3);
        bx.g = Interval::point(0.5);
        let opt = maximize_cop(&bx, 0.4, &OptimizerSettings::default()).unwrap();
        assert_eq!(opt.stats.evaluated, 1);
        assert_eq!((opt.best.params.chi, opt.best.params.g), (0.3, 0.5));
    }

    #[test]
    fn equilibrium_box_is_all_infeasible() {
        let mut bx = ParameterBox::reference(DeviceFamily::A, 0.5);
        bx.t_cold = 0.5;
        let err = maximize_cop(&bx, 0.5, &small()).unwrap_err();
        assert!(matches!(err, Error::AllInfeasible { evaluated: 33 }));
    }

    #[test]
    fn more_rounds_never_lose_ground() {
        let bx = ParameterBox::reference(DeviceFamily::C, 1.0);
        let mut prev = f64::NEG_INFINITY;
        for rounds in 0..5 {
            let s = OptimizerSettings { rounds, ..small() };
            let eta = maximize_cop(&bx, 0.3, &s).unwrap().eta;
            assert!(eta >= prev);
            prev = eta;
        }
    }

    #[test]
    fn optimum_is_not_dominated_in_its_cloud() {
        let bx = ParameterBox::reference(DeviceFamily::C, 0.4);
        let opt = maximize_cop(&bx, 0.6, &small()).unwrap();
        assert!(!opt.cloud.iter().any(|q| super::super::front::dominates(q, &opt.best, DOMINANCE_TOL)));
    }

    #[test]
    fn constraint_infeasible_and_unconstrained() {
        let bx = ParameterBox::reference(DeviceFamily::A, 0.4);
        assert!(matches!(max_r_given_j(&bx, 10.0, &small()), Err(Error::Infeasible { .. })));
        let free = max_r_given_j(&bx, 0.0, &small()).unwrap();
        let best_r = maximize_cop(&bx, 1.0, &small()).unwrap().best.r;
        assert!((free.best.r - best_r).abs() < 1e-15);
    }

    #[test]
    fn front_is_sorted_and_labelled() {
        let bx = ParameterBox::reference(DeviceFamily::A, 2.0);
        let run = pareto_front(&bx, &uniform_alphas(11), &small()).unwrap();
        assert!(run.front.points.windows(2).all(|w| w[0].point.j <= w[1].point.j));
        assert_eq!(run.optima.len(), 11);
        for opt in &run.optima {
            assert!(run.front.points.iter().any(|p| p.winning_alphas.contains(&opt.alpha)));
        }
        let mut keys: Vec<_> = run.front.points.iter().map(|p| (p.point.j.to_bits(), p.point.params.chi.to_bits())).collect();
        let n = keys.len();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), n, "front lists a point twice");
        let single = pareto_front(&bx, &[0.5], &small()).unwrap();
        assert!(!single.front.points.is_empty());
    }

    #[test]
    fn rejects_bad_inputs() {
        let bx = ParameterBox::reference(DeviceFamily::B, 1.0);
        assert!(pareto_front(&bx, &[], &small()).is_err());
        assert_eq!(maximize_cop(&bx, 1.2, &small()).unwrap_err(), Error::AlphaOutOfRange(1.2));
        let mut bad = bx;
        bad.delta = Interval::new(0.0, 0.5);
        assert!(matches!(bad.validate(), Err(Error::InvalidBox(_))));
        bad = bx;
        bad.chi = Interval::new(0.5, 0.2);
        assert!(bad.validate().is_err());
    }
}
