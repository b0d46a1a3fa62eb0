use std::cmp::Ordering;

use crate::rectification::PerformancePoint;

/// Dominance tolerance in both `J` (`γε`) and `R`.
pub const DOMINANCE_TOL: f64 = 1e-9;

/// True when `q` dominates `p`: at least `tol` better in both coordinates.
pub fn dominates(q: &PerformancePoint, p: &PerformancePoint, tol: f64) -> bool {
    q.j >= p.j + tol && q.r >= p.r + tol && (q.j > p.j || q.r > p.r)
}

/// Non-dominated subset of `points`, in ascending `J` (stable for ties).
///
/// `tol` must be positive. Runs in `O(n log n)`: points are visited by
/// decreasing `J` while a running maximum of `R` is kept over the points that
/// lead by at least `tol` in `J`.
pub fn nondominated_filter(points: &[PerformancePoint], tol: f64) -> Vec<PerformancePoint> {
    debug_assert!(tol > 0.0);
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[b].j.total_cmp(&points[a].j).then(a.cmp(&b)));

    let mut keep = vec![false; points.len()];
    let mut best_r = f64::NEG_INFINITY;
    let mut lead = 0;
    for &idx in &order {
        let p = &points[idx];
        while lead < order.len() && points[order[lead]].j >= p.j + tol {
            best_r = best_r.max(points[order[lead]].r);
            lead += 1;
        }
        keep[idx] = best_r < p.r + tol;
    }

    let mut out: Vec<(usize, PerformancePoint)> = points
        .iter()
        .enumerate()
        .filter(|(i, _)| keep[*i])
        .map(|(i, p)| (i, *p))
        .collect();
    out.sort_by(|a, b| a.1.j.total_cmp(&b.1.j).then(a.0.cmp(&b.0)));
    out.into_iter().map(|(_, p)| p).collect()
}

/// Deterministic preference between two candidates with objective values:
/// higher objective first, then lexicographically smaller `(χ, δ, g)`.
pub(crate) fn better(a: (f64, &PerformancePoint), b: (f64, &PerformancePoint)) -> bool {
    match a.0.total_cmp(&b.0) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => param_key(a.1) < param_key(b.1),
    }
}

fn param_key(p: &PerformancePoint) -> (u64, u64, u64) {
    // order-preserving map of f64 onto u64
    let key = |x: f64| {
        let bits = x.to_bits();
        if bits >> 63 == 1 {
            !bits
        } else {
            bits | (1 << 63)
        }
    };
    (key(p.params.chi), key(p.params.delta), key(p.params.g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::devices::DeviceFamily;
    use crate::rectification::OperatingPoint;
    use proptest::prelude::*;

    fn pt(j: f64, r: f64) -> PerformancePoint {
        PerformancePoint {
            device: DeviceFamily::A,
            j,
            r,
            params: OperatingPoint {
                epsilon: 1.0,
                gamma: 0.001,
                chi: r,
                delta: 0.0,
                g: 0.0,
                t_hot: 1.0,
                t_cold: 0.01,
            },
        }
    }

    fn coords(v: &[PerformancePoint]) -> Vec<(f64, f64)> {
        v.iter().map(|p| (p.j, p.r)).collect()
    }

    #[test]
    fn mutually_nondominating_points_survive() {
        let pts = [pt(1.0, 0.5), pt(2.0, 0.4), pt(1.5, 0.45)];
        assert_eq!(
            coords(&nondominated_filter(&pts, DOMINANCE_TOL)),
            vec![(1.0, 0.5), (1.5, 0.45), (2.0, 0.4)]
        );
    }

    #[test]
    fn dominated_point_is_removed() {
        let pts = [pt(1.0, 0.5), pt(2.0, 0.6)];
        assert_eq!(coords(&nondominated_filter(&pts, DOMINANCE_TOL)), vec![(2.0, 0.6)]);
        assert!(nondominated_filter(&[], DOMINANCE_TOL).is_empty());
    }

    #[test]
    fn ties_within_tolerance_are_kept() {
        let pts = [pt(1.0, 0.5), pt(1.0 + 1e-12, 0.5 + 1e-12), pt(1.0, 0.5)];
        assert_eq!(nondominated_filter(&pts, DOMINANCE_TOL).len(), 3);
    }

    proptest! {
        #[test]
        fn filter_matches_quadratic_definition(raw in prop::collection::vec((0u8..20, 0u8..20), 0..60)) {
            let pts: Vec<_> = raw.iter().map(|&(j, r)| pt(j as f64 * 0.1, r as f64 * 0.05)).collect();
            let fast = nondominated_filter(&pts, DOMINANCE_TOL);
            let slow = pts
                .iter()
                .filter(|p| !pts.iter().any(|q| dominates(q, p, DOMINANCE_TOL)))
                .count();
            prop_assert_eq!(fast.len(), slow);
            for p in &fast {
                prop_assert!(!pts.iter().any(|q| dominates(q, p, DOMINANCE_TOL)));
            }
            prop_assert!(fast.windows(2).all(|w| w[0].j <= w[1].j));
        }
    }

    #[test]
    fn better_breaks_ties_by_parameters() {
        let a = pt(1.0, 0.2);
        let b = pt(1.0, 0.3);
        assert!(better((1.0, &a), (1.0, &b)));
        assert!(!better((1.0, &b), (1.0, &a)));
        assert!(better((1.1, &b), (1.0, &a)));
    }
}
