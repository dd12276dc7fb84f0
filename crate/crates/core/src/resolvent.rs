//! Closed-form resolvents of the SPPA summands: the linear-plus-quadratic
//! term of a single lattice and the hinge term `M·R̄` of a block.

use malachite_base::num::basic::traits::{One, Zero};

use crate::bilinear::Bilinear;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::frame::{
    a_orthogonal_frame, coords_l, coords_m, frame_for_chain_l, frame_for_chain_m, recover_l,
    recover_m,
};
use crate::orthoscheme::ComplexPoint;
use crate::subspace::Orientation;
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProxParams {
    pub lambda: Rat,
    pub epsilon: Rat,
    pub weight: Rat,
}

impl ProxParams {
    pub fn new(lambda: Rat, epsilon: Rat, weight: Rat) -> Result<Self> {
        if lambda <= Rat::ZERO {
            return Err(Error::OutOfRange(format!(
                "step size {lambda} must be positive"
            )));
        }
        if epsilon < Rat::ZERO || weight < Rat::ZERO {
            return Err(Error::OutOfRange(
                "epsilon and weight must be nonnegative".into(),
            ));
        }
        Ok(ProxParams {
            lambda,
            epsilon,
            weight,
        })
    }
}

fn clamp01(v: Rat) -> Rat {
    if v < Rat::ZERO {
        Rat::ZERO
    } else if v > Rat::ONE {
        Rat::ONE
    } else {
        v
    }
}

/// Resolvent of `−w·dim + ε d²` (Lovász extensions) at `x0`.
///
/// In a frame adapted to the support, `dim` is `Σ x_i` on L and `n − Σ y_i`
/// on M̌, so each coordinate moves to `(x0_i ± λw) / (1 + 2ελ)`, clamped.
pub fn prox_linear_quad<F: Field>(
    x0: &ComplexPoint<F>,
    params: &ProxParams,
) -> Result<ComplexPoint<F>> {
    let n = x0.ambient();
    let ctx = x0.ctx().clone();
    let chain = x0.support().extend_to_maximal(&ctx, n);
    let denom = Rat::ONE + Rat::from(2) * &params.epsilon * &params.lambda;
    let shift = &params.lambda * &params.weight;
    let step = |c: &Rat, up: bool| clamp01(if up { c + &shift } else { c - &shift } / &denom);
    match x0.orientation() {
        Orientation::Ascending => {
            let fr = frame_for_chain_l(&chain)?;
            let c: Vec<Rat> = coords_l(x0, &fr)?.iter().map(|c| step(c, true)).collect();
            recover_l(&c, &fr)
        }
        Orientation::Descending => {
            let fr = frame_for_chain_m(&chain)?;
            let c: Vec<Rat> = coords_m(x0, &fr)?.iter().map(|c| step(c, false)).collect();
            recover_m(&c, &fr)
        }
    }
}

/// Minimizer of `c·max{0, x − y} + ½((x − x0)² + (y − y0)²)` over `[0,1]²`.
pub fn prox_hinge_coord(x0: &Rat, y0: &Rat, c: &Rat) -> Result<(Rat, Rat)> {
    for v in [x0, y0] {
        if *v < Rat::ZERO || *v > Rat::ONE {
            return Err(Error::OutOfRange(format!("hinge input {v} outside [0,1]")));
        }
    }
    let half_gap = (x0 - y0) / Rat::from(2);
    let t = if half_gap <= Rat::ZERO {
        Rat::ZERO
    } else if *c < half_gap {
        c.clone()
    } else {
        half_gap
    };
    Ok((x0 - &t, y0 + &t))
}

/// Joint resolvent of `w·R̄` for the block `a` at `(x0, y0)`, solved inside an
/// A-orthogonal frame adapted to both supports.
pub fn prox_r<F: Field>(
    x0: &ComplexPoint<F>,
    y0: &ComplexPoint<F>,
    a: &Bilinear<F>,
    params: &ProxParams,
) -> Result<(ComplexPoint<F>, ComplexPoint<F>)> {
    if x0.ambient() != a.rows() || y0.ambient() != a.cols() {
        return Err(Error::ShapeMismatch(format!(
            "points in F^{} x F^{} for a {}x{} block",
            x0.ambient(),
            y0.ambient(),
            a.rows(),
            a.cols()
        )));
    }
    if x0.orientation() != Orientation::Ascending || y0.orientation() != Orientation::Descending {
        return Err(Error::InvalidPoint(
            "expected an L point and an M̌ point".into(),
        ));
    }
    let ctx = a.ctx().clone();
    let xc = x0.support().extend_to_maximal(&ctx, a.rows());
    let yc = y0.support().extend_to_maximal(&ctx, a.cols());
    let fr = a_orthogonal_frame(a, &xc, &yc)?;
    let mut xs = coords_l(x0, &fr.e)?;
    let mut ys = coords_m(y0, &fr.f)?;
    let c = &params.weight * &params.lambda;
    let mut moved = false;
    for i in 0..fr.r {
        let (x, y) = prox_hinge_coord(&xs[i], &ys[i], &c)?;
        moved |= x != xs[i];
        xs[i] = x;
        ys[i] = y;
    }
    if !moved {
        return Ok((x0.clone(), y0.clone()));
    }
    Ok((recover_l(&xs, &fr.e)?, recover_m(&ys, &fr.f)?))
}
