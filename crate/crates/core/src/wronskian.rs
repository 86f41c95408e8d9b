//! Wronskian identities between eigenfunctions.
//!
//! For two eigenfunctions at energies E1, E2 the Wronskian
//! W = psi1' psi2 - psi2' psi1 satisfies W' = (E2 - E1) psi1 psi2 pointwise,
//! and integrating that over a consecutive-zero interval of the lower state
//! gives the identity whose sign structure forces a zero of the higher state
//! inside the interval. Both checks use central differences on the shared
//! grid, not re-integration of the ODE, so they are external to the Numerov
//! internals.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::nodes::find_nodes;
use crate::scalar::{real, Real};
use crate::solver::{derivative_samples, Eigenpair};

/// Sampled Wronskian of two eigenfunctions on their common grid.
#[derive(Debug, Clone)]
pub struct WronskianSeries<T> {
    pub n1: usize,
    pub n2: usize,
    pub values: Vec<T>,
    pub grid: Grid<T>,
}

fn require_same_grid<T: Real>(p1: &Eigenpair<T>, p2: &Eigenpair<T>) -> Result<()> {
    if p1.grid != p2.grid {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// W_i = psi1'_i psi2_i - psi2'_i psi1_i, central differences at interior
/// points and second-order one-sided stencils at the walls.
///
/// Swapping the arguments negates every sample exactly (same products,
/// reversed subtraction).
pub fn wronskian_series<T: Real>(p1: &Eigenpair<T>, p2: &Eigenpair<T>) -> Result<WronskianSeries<T>> {
    require_same_grid(p1, p2)?;
    let d1 = derivative_samples(&p1.psi, p1.grid.dx());
    let d2 = derivative_samples(&p2.psi, p2.grid.dx());
    let values = (0..p1.psi.len())
        .map(|i| d1[i] * p2.psi[i] - d2[i] * p1.psi[i])
        .collect();
    Ok(WronskianSeries {
        n1: p1.n,
        n2: p2.n,
        values,
        grid: p1.grid.clone(),
    })
}

/// Result of the pointwise derivative-identity check.
#[derive(Debug, Clone)]
pub struct DerivativeResidual<T> {
    pub n1: usize,
    pub n2: usize,
    /// max over interior points of |dW/dx - (E2 - E1) psi1 psi2|
    pub max_residual: T,
    pub dx: T,
}

/// Check W' = (E2 - E1) psi1 psi2 pointwise, with W' taken by central
/// differences of the sampled Wronskian.
pub fn check_derivative_identity<T: Real>(
    p1: &Eigenpair<T>,
    p2: &Eigenpair<T>,
) -> Result<DerivativeResidual<T>> {
    if p1.n == p2.n {
        return Err(Error::precondition(
            "derivative identity needs two distinct states",
        ));
    }
    let w = wronskian_series(p1, p2)?;
    let dw = derivative_samples(&w.values, w.grid.dx());
    let de = p2.energy - p1.energy;
    let mut max_residual = T::zero();
    for i in 1..w.values.len() - 1 {
        let r = (dw[i] - de * p1.psi[i] * p2.psi[i]).abs();
        max_residual = max_residual.max(r);
    }
    Ok(DerivativeResidual {
        n1: p1.n,
        n2: p2.n,
        max_residual,
        dx: w.grid.dx(),
    })
}

/// One consecutive-zero interval of the lower state with both sides of the
/// integrated identity evaluated on it.
#[derive(Debug, Clone)]
pub struct IntervalIdentity<T> {
    pub x_left: T,
    pub x_right: T,
    /// psi1'(x_right) psi2(x_right) - psi1'(x_left) psi2(x_left)
    pub lhs: T,
    /// (E2 - E1) * integral of psi1 psi2 over the interval
    pub rhs: T,
    pub abs_diff: T,
    /// Whether the higher state has a node inside the interval; the sign
    /// structure of the identity forces one.
    pub witness_found: bool,
}

/// Report of [`check_integral_identity`] over all intervals.
#[derive(Debug, Clone)]
pub struct IntegralIdentityReport<T> {
    pub n1: usize,
    pub n2: usize,
    pub intervals: Vec<IntervalIdentity<T>>,
}

impl<T: Real> IntegralIdentityReport<T> {
    pub fn max_abs_diff(&self) -> T {
        self.intervals
            .iter()
            .fold(T::zero(), |m, iv| m.max(iv.abs_diff))
    }

    pub fn all_witnesses_found(&self) -> bool {
        self.intervals.iter().all(|iv| iv.witness_found)
    }
}

/// Linear interpolation of grid samples at x.
fn interp<T: Real>(samples: &[T], grid: &Grid<T>, x: T) -> T {
    let a = grid.half_width();
    let dx = grid.dx();
    let t = (x + a) / dx;
    let i = t
        .floor()
        .to_usize()
        .unwrap_or(0)
        .min(grid.n_points() - 2);
    let frac = t - crate::scalar::real_of_usize::<T>(i);
    samples[i] + frac * (samples[i + 1] - samples[i])
}

/// Trapezoid integral of the piecewise-linear interpolant of `q` over
/// [x1, x2], with fractional end segments.
fn trapezoid_between<T: Real>(q: &[T], grid: &Grid<T>, x1: T, x2: T) -> T {
    let dx = grid.dx();
    let half = T::one() / real::<T>(2.0);
    let a = grid.half_width();
    let n = grid.n_points();
    let idx_after = |x: T| {
        // first grid index with grid.x(i) > x
        let t = ((x + a) / dx).floor().to_usize().unwrap_or(0);
        (t + 1).min(n - 1)
    };
    let i1 = idx_after(x1);
    let i2 = idx_after(x2);
    if i1 >= i2 {
        // both endpoints in one cell
        return (x2 - x1) * half * (interp(q, grid, x1) + interp(q, grid, x2));
    }
    let mut acc = (grid.x(i1) - x1) * half * (interp(q, grid, x1) + q[i1]);
    for i in i1..i2 - 1 {
        acc += dx * half * (q[i] + q[i + 1]);
    }
    acc += (x2 - grid.x(i2 - 1)) * half * (q[i2 - 1] + interp(q, grid, x2));
    acc
}

/// Integrated identity on every consecutive-zero interval of the lower
/// state, boundary zeros included.
pub fn check_integral_identity<T: Real>(
    p1: &Eigenpair<T>,
    p2: &Eigenpair<T>,
) -> Result<IntegralIdentityReport<T>> {
    if p1.n >= p2.n {
        return Err(Error::precondition(format!(
            "integral identity requires n1 < n2, got n1={} n2={}",
            p1.n, p2.n
        )));
    }
    require_same_grid(p1, p2)?;

    let grid = &p1.grid;
    let a = grid.half_width();
    let mut zeros = vec![-a];
    zeros.extend(find_nodes(p1).positions.iter().copied());
    zeros.push(a);

    let d1 = derivative_samples(&p1.psi, grid.dx());
    let q: Vec<T> = p1.psi.iter().zip(&p2.psi).map(|(&u, &v)| u * v).collect();
    let de = p2.energy - p1.energy;
    let upper_nodes = find_nodes(p2).positions;

    let mut intervals = Vec::new();
    for w in zeros.windows(2) {
        let (x1, x2) = (w[0], w[1]);
        let term = |x: T| interp(&d1, grid, x) * interp(&p2.psi, grid, x);
        let lhs = term(x2) - term(x1);
        let rhs = de * trapezoid_between(&q, grid, x1, x2);
        intervals.push(IntervalIdentity {
            x_left: x1,
            x_right: x2,
            lhs,
            rhs,
            abs_diff: (lhs - rhs).abs(),
            witness_found: upper_nodes.iter().any(|&z| x1 < z && z < x2),
        });
    }
    Ok(IntegralIdentityReport {
        n1: p1.n,
        n2: p2.n,
        intervals,
    })
}
