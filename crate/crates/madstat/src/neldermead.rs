//! Minimal two-dimensional Nelder-Mead simplex, used by the GLD shape fit.

#[derive(Debug, Clone, Copy)]
pub(crate) struct NmResult {
    pub x: [f64; 2],
    pub fx: f64,
    pub converged: bool,
}

/// Minimizes `f` over R^2 from `start`, stepping `step` along each axis for
/// the initial simplex. Stops when the objective spread across the simplex
/// drops below `ftol` relative to the best value, or after `max_iter`
/// iterations. The relative stop keeps the optimizer trajectory invariant
/// under rescaling of the objective.
///
/// The objective may return `f64::INFINITY` for invalid regions; NaN is
/// treated as infinity.
pub(crate) fn minimize2<F>(
    mut f: F,
    start: [f64; 2],
    step: f64,
    ftol: f64,
    max_iter: usize,
) -> NmResult
where
    F: FnMut(f64, f64) -> f64,
{
    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    let mut eval = |x: [f64; 2]| -> f64 {
        let v = f(x[0], x[1]);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut pts = [
        (start, eval(start)),
        ([start[0] + step, start[1]], 0.0),
        ([start[0], start[1] + step], 0.0),
    ];
    pts[1].1 = eval(pts[1].0);
    pts[2].1 = eval(pts[2].0);

    let mut converged = false;
    for _ in 0..max_iter {
        pts.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (pts[0], pts[2]);
        let spread = worst.1 - best.1;
        if best.1.is_finite() && (spread == 0.0 || spread < ftol * best.1.abs()) {
            converged = true;
            break;
        }

        let centroid = [
            0.5 * (pts[0].0[0] + pts[1].0[0]),
            0.5 * (pts[0].0[1] + pts[1].0[1]),
        ];
        let reflect = [
            centroid[0] + ALPHA * (centroid[0] - worst.0[0]),
            centroid[1] + ALPHA * (centroid[1] - worst.0[1]),
        ];
        let f_reflect = eval(reflect);

        if f_reflect < pts[0].1 {
            let expand = [
                centroid[0] + GAMMA * (reflect[0] - centroid[0]),
                centroid[1] + GAMMA * (reflect[1] - centroid[1]),
            ];
            let f_expand = eval(expand);
            pts[2] = if f_expand < f_reflect {
                (expand, f_expand)
            } else {
                (reflect, f_reflect)
            };
        } else if f_reflect < pts[1].1 {
            pts[2] = (reflect, f_reflect);
        } else {
            let contract = [
                centroid[0] + RHO * (worst.0[0] - centroid[0]),
                centroid[1] + RHO * (worst.0[1] - centroid[1]),
            ];
            let f_contract = eval(contract);
            if f_contract < worst.1 {
                pts[2] = (contract, f_contract);
            } else {
                // shrink toward the best vertex
                for i in 1..3 {
                    let x = [
                        pts[0].0[0] + SIGMA * (pts[i].0[0] - pts[0].0[0]),
                        pts[0].0[1] + SIGMA * (pts[i].0[1] - pts[0].0[1]),
                    ];
                    pts[i] = (x, eval(x));
                }
            }
        }
    }

    pts.sort_by(|a, b| a.1.total_cmp(&b.1));
    NmResult {
        x: pts[0].0,
        fx: pts[0].1,
        converged: converged && pts[0].1.is_finite(),
    }
}
