//! Uniform sampling of a walled domain.

use crate::error::{Error, Result};
use crate::potential::WalledPotential;
use crate::scalar::{real, real_of_usize, Real};

/// Uniform grid on [-a, a] with the potential sampled at every point.
///
/// The point count is odd so that x = 0 is always a grid point; this keeps
/// symmetric potentials sampled symmetrically and puts the midpoint node of
/// odd states exactly on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    half_width: T,
    n_points: usize,
    dx: T,
    v_samples: Vec<T>,
}

/// Default point count used by the CLI and sweeps.
pub const DEFAULT_N_POINTS: usize = 4001;

impl<T: Real> Grid<T> {
    /// Sample a walled potential on `n_points` uniformly spaced points
    /// (odd, at least 3).
    pub fn new(wp: &WalledPotential<T>, n_points: usize) -> Result<Self> {
        if n_points < 3 || n_points.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "n_points must be odd and >= 3, got {n_points}"
            )));
        }
        let a = wp.half_width();
        let dx = (a + a) / real_of_usize::<T>(n_points - 1);
        let mut v_samples = Vec::with_capacity(n_points);
        for i in 0..n_points {
            let x = Self::x_at(a, n_points, i);
            // x is clamped to [-a, a] by construction, so this cannot fail
            v_samples.push(wp.evaluate(x).expect("grid point inside walls"));
        }
        // A sample landing exactly on a jump of V takes the mean of the
        // one-sided limits; pointwise sampling there would bias the
        // discretization by O(dx) instead of O(dx^2).
        for (loc, mean) in wp.base().jump_points() {
            if loc.abs() >= a {
                continue;
            }
            let idx = ((loc + a) / dx).round();
            if let Some(i) = idx.to_usize() {
                if i < n_points && (Self::x_at(a, n_points, i) - loc).abs() <= dx * real::<T>(1e-9) {
                    v_samples[i] = mean;
                }
            }
        }
        Ok(Grid {
            half_width: a,
            n_points,
            dx,
            v_samples,
        })
    }

    #[inline]
    fn x_at(a: T, n_points: usize, i: usize) -> T {
        // (2i/(N-1) - 1) * a hits -a, 0, a exactly
        let t = real_of_usize::<T>(2 * i) / real_of_usize::<T>(n_points - 1) - T::one();
        t * a
    }

    /// Coordinate of grid point `i`; x(0) = -a and x(n-1) = a exactly.
    #[inline]
    pub fn x(&self, i: usize) -> T {
        Self::x_at(self.half_width, self.n_points, i)
    }

    #[inline]
    pub fn dx(&self) -> T {
        self.dx
    }

    #[inline]
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    #[inline]
    pub fn half_width(&self) -> T {
        self.half_width
    }

    /// Sampled potential values, one per grid point.
    #[inline]
    pub fn v(&self) -> &[T] {
        &self.v_samples
    }

    /// Smallest sampled potential value.
    pub fn v_min(&self) -> T {
        self.v_samples
            .iter()
            .copied()
            .fold(T::infinity(), |m, v| m.min(v))
    }

    /// Trapezoid integral of `f` sampled on this grid.
    pub fn trapezoid(&self, f: &[T]) -> T {
        debug_assert_eq!(f.len(), self.n_points);
        let half = T::one() / (T::one() + T::one());
        let interior: T = f[1..self.n_points - 1].iter().copied().sum();
        (interior + half * (f[0] + f[self.n_points - 1])) * self.dx
    }

    /// Trapezoid inner product of two sample vectors.
    pub fn inner(&self, f: &[T], g: &[T]) -> T {
        debug_assert_eq!(f.len(), self.n_points);
        debug_assert_eq!(g.len(), self.n_points);
        let half = T::one() / (T::one() + T::one());
        let mut acc = half * (f[0] * g[0] + f[self.n_points - 1] * g[self.n_points - 1]);
        for i in 1..self.n_points - 1 {
            acc += f[i] * g[i];
        }
        acc * self.dx
    }
}

/// Nudge a half-width so that any interior jump of the potential lands on a
/// grid point of the `n_points` grid on [-a, a].
///
/// With a jump between grid points the discretization error oscillates with
/// the jump's offset inside its cell, which ruins eigenvalue accuracy and
/// smoothness of energy curves in the half-width. Snapping costs a relative
/// shift of at most one cell (~1/n_points) and restores clean O(dx^4)
/// behaviour. Potentials without jumps are returned unchanged.
pub fn snap_half_width<T: Real>(
    spec: &crate::potential::PotentialSpec<T>,
    half_width: T,
    n_points: usize,
) -> T {
    let two = T::one() + T::one();
    let b = spec
        .jump_points()
        .into_iter()
        .map(|(loc, _)| loc)
        .find(|&loc| loc > T::zero() && loc < half_width);
    let Some(b) = b else {
        return half_width;
    };
    // Choose integer i = number of cells between the jump and the wall, then
    // solve (a - b) / dx = i with dx = 2a / (n_points - 1) for the new a.
    let m = real_of_usize::<T>(n_points - 1);
    let i = ((half_width - b) * m / (two * half_width))
        .round()
        .max(T::one())
        .min(m / two - T::one());
    b * m / (m - two * i)
}
