//! Scalarized optimization of `(J, R)`, Pareto fronts and device-dominance
//! maps.

mod front;
mod optimizer;
mod regions;

pub use front::{dominates, nondominated_filter, DOMINANCE_TOL};
pub use optimizer::{
    max_r_given_j, maximize_cop, pareto_front, tradeoff_curve, uniform_alphas, AlphaOptimum,
    ConstrainedOptimum, CopOptimum, FrontPoint, Interval, OptimizerSettings, ParameterBox,
    ParetoFront, ParetoRun, SearchStats, TradeoffSample,
};
pub use regions::{classify, region_compare, RegionAxis, RegionLabel, RegionMap};
