//! Independent oracles for the two proximal subproblems.

use malachite_base::num::basic::traits::{One, Zero};
use malachite_base::num::conversion::traits::RoundingFrom;
use malachite_base::rounding_modes::RoundingMode;
use wmvsp::Rat;

fn hinge_obj(x: &Rat, y: &Rat, x0: &Rat, y0: &Rat, c: &Rat) -> Rat {
    let gap = x - y;
    let h = if gap > Rat::ZERO { c * gap } else { Rat::ZERO };
    let dx = x - x0;
    let dy = y - y0;
    h + (&dx * &dx + &dy * &dy) / Rat::from(2)
}

fn in_box(v: &Rat) -> bool {
    *v >= Rat::ZERO && *v <= Rat::ONE
}

/// Minimizer of `c·max{0, x − y} + ½((x−x0)² + (y−y0)²)` on `[0,1]²` by
/// enumerating every activity pattern: the hinge inactive (`x < y`), active
/// (`x > y`) or on its kink (`x = y`), each with every box face fixed or free,
/// and keeping the best feasible stationary point.
pub fn hinge_kkt(x0: &Rat, y0: &Rat, c: &Rat) -> (Rat, Rat) {
    let faces = [None, Some(Rat::ZERO), Some(Rat::ONE)];
    let mut cands: Vec<(Rat, Rat)> = Vec::new();
    // smooth pieces: gradient of the active piece is (x − x0 + c, y − y0 − c)
    for active in [false, true] {
        let sx = if active { x0 - c } else { x0.clone() };
        let sy = if active { y0 + c } else { y0.clone() };
        for fx in &faces {
            for fy in &faces {
                let x = fx.clone().unwrap_or_else(|| sx.clone());
                let y = fy.clone().unwrap_or_else(|| sy.clone());
                let ok = if active { x >= y } else { x <= y };
                if ok {
                    cands.push((x, y));
                }
            }
        }
    }
    // kink x = y = s: ½(s−x0)² + ½(s−y0)² is minimized at the average
    for f in &faces {
        let s = f.clone().unwrap_or_else(|| (x0 + y0) / Rat::from(2));
        cands.push((s.clone(), s));
    }
    cands
        .into_iter()
        .filter(|(x, y)| in_box(x) && in_box(y))
        .min_by(|a, b| hinge_obj(&a.0, &a.1, x0, y0, c).cmp(&hinge_obj(&b.0, &b.1, x0, y0, c)))
        .expect("the box corners are always candidates")
}

pub const GRID: usize = 1000;

fn grid_point(i: usize) -> f64 {
    i as f64 / GRID as f64
}

/// Best point of the `1/GRID` lattice in `[0,1]²` by exhaustive search.
pub fn hinge_grid(x0: f64, y0: f64, c: f64) -> (f64, f64) {
    let g: Vec<f64> = (0..=GRID).map(grid_point).collect();
    let ax: Vec<f64> = g.iter().map(|x| 0.5 * (x - x0) * (x - x0)).collect();
    let ay: Vec<f64> = g.iter().map(|y| 0.5 * (y - y0) * (y - y0)).collect();
    let mut best = (f64::INFINITY, 0, 0);
    for (i, (&x, &qx)) in g.iter().zip(&ax).enumerate() {
        for (j, (&y, &qy)) in g.iter().zip(&ay).enumerate() {
            let v = qx + qy + c * (x - y).max(0.0);
            if v < best.0 {
                best = (v, i, j);
            }
        }
    }
    (grid_point(best.1), grid_point(best.2))
}

/// Best grid point of `sign·w·u + ε u² + (u − u0)² / 2λ` on `[0, 1]`.
pub fn linear_quad_grid(u0: f64, sign: f64, w: f64, eps: f64, lambda: f64) -> f64 {
    (0..=GRID)
        .map(grid_point)
        .map(|u| {
            (
                sign * w * u + eps * u * u + (u - u0) * (u - u0) / (2.0 * lambda),
                u,
            )
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap()
        .1
}

pub fn to_f64(r: &Rat) -> f64 {
    f64::rounding_from(r, RoundingMode::Nearest).0
}
