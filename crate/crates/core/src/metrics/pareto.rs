//! Non-dominated subset of (error, cost) points, both minimized.

use std::cmp::Ordering;

/// Indices of the non-dominated points, ordered by error, then cost, then
/// input position. Exact duplicates of a front point are all kept.
pub fn pareto_front(points: &[(f64, f64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (points[i], points[j]);
        a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal).then(a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal)).then(i.cmp(&j))
    });
    let mut front = Vec::new();
    let mut best: Option<(f64, f64)> = None;
    for i in order {
        let p = points[i];
        let keep = match best {
            None => true,
            Some(b) => p.1 < b.1 || p == b,
        };
        if keep {
            front.push(i);
            best = Some(p);
        }
    }
    front
}

/// Quadratic dominance check; the reference the sweep above is tested against.
pub fn dominated(p: (f64, f64), q: (f64, f64)) -> bool {
    q.0 <= p.0 && q.1 <= p.1 && (q.0 < p.0 || q.1 < p.1)
}
