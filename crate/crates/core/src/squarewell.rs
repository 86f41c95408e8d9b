//! Transcendental bound-state oracle for the finite square well.
//!
//! For V = -V0 on |x| < b (and 0 outside, infinite domain), bound energies
//! solve the standard matching equations. With z = b sqrt(V0 + E) and
//! z0 = b sqrt(V0):
//!
//!   even parity:  z tan(z) = sqrt(z0^2 - z^2)
//!   odd parity:  -z cot(z) = sqrt(z0^2 - z^2)
//!
//! Each branch m (z in (m pi/2, (m+1) pi/2), parity alternating with m) holds
//! exactly one root while m pi/2 < z0. This solver is independent of the grid
//! discretization and pins the reference energies the sweep tests compare
//! against.

use crate::error::{Error, Result};
use crate::scalar::{real, real_of_usize, Real};

/// Parity of a square-well bound state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// One bound state of the finite square well.
#[derive(Debug, Clone, Copy)]
pub struct SquareWellState<T> {
    /// 1-based index in order of increasing energy.
    pub n: usize,
    pub energy: T,
    pub parity: Parity,
}

/// Number of bound states supported by the well.
pub fn bound_state_count<T: Real>(depth: T, half_width: T) -> Result<usize> {
    let z0 = well_strength(depth, half_width)?;
    let half_pi = T::FRAC_PI_2();
    Ok((z0 / half_pi).floor().to_usize().unwrap_or(0) + 1)
}

fn well_strength<T: Real>(depth: T, half_width: T) -> Result<T> {
    if !(depth > T::zero()) || !(half_width > T::zero()) {
        return Err(Error::invalid("square well needs depth > 0 and half-width > 0"));
    }
    Ok(half_width * depth.sqrt())
}

/// All bound states, energies ascending, solved by bisection on each parity
/// branch to a relative tolerance of 1e-10 or better.
pub fn bound_states<T: Real>(depth: T, half_width: T) -> Result<Vec<SquareWellState<T>>> {
    let z0 = well_strength(depth, half_width)?;
    let half_pi = T::FRAC_PI_2();
    let count = bound_state_count(depth, half_width)?;

    let mut states = Vec::with_capacity(count);
    for m in 0..count {
        let parity = if m % 2 == 0 { Parity::Even } else { Parity::Odd };
        let left = real_of_usize::<T>(m) * half_pi;
        let right = (real_of_usize::<T>(m + 1) * half_pi).min(z0);
        let f = |z: T| {
            let outside = (z0 * z0 - z * z).max(T::zero()).sqrt();
            match parity {
                Parity::Even => z * z.tan() - outside,
                Parity::Odd => -z / z.tan() - outside,
            }
        };
        // shrink the bracket off the branch endpoints where tan/cot degenerate
        let delta = (right - left) * real::<T>(1e-9);
        let mut lo = left + delta;
        let mut hi = right - delta;
        if !(f(lo) < T::zero() && f(hi) > T::zero()) {
            return Err(Error::NonConvergence {
                n: m + 1,
                iterations: 0,
            });
        }
        let tol = real::<T>(1e-12).max(real::<T>(4.0) * T::epsilon()) * z0;
        let two = real::<T>(2.0);
        for _ in 0..200 {
            if hi - lo < tol {
                break;
            }
            let mid = (lo + hi) / two;
            if f(mid) < T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let z = (lo + hi) / two;
        let energy = z * z / (half_width * half_width) - depth;
        states.push(SquareWellState {
            n: m + 1,
            energy,
            parity,
        });
    }
    Ok(states)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_well_has_two_bound_states() {
        // 2 b sqrt(V0) / pi = 4/pi ~ 1.27 -> two states
        let states = bound_states(4.0f64, 1.0).unwrap();
        assert_eq!(states.len(), 2);
        assert_eq!(bound_state_count(4.0f64, 1.0).unwrap(), 2);
        assert_eq!(states[0].parity, Parity::Even);
        assert_eq!(states[1].parity, Parity::Odd);
        assert!(states[0].energy < states[1].energy);
        assert!(states.iter().all(|s| s.energy > -4.0 && s.energy < 0.0));
    }

    #[test]
    fn roots_satisfy_matching_equations() {
        let states = bound_states(4.0f64, 1.0).unwrap();
        for s in &states {
            let z = (s.energy + 4.0).sqrt();
            let kappa = (-s.energy).sqrt();
            let residual = match s.parity {
                Parity::Even => z * z.tan() - kappa,
                Parity::Odd => -z / z.tan() - kappa,
            };
            assert!(residual.abs() < 1e-8, "residual = {residual}");
        }
    }

    #[test]
    fn deep_well_approaches_infinite_well_levels() {
        // very deep well: E_n + V0 ~ n^2 pi^2 / (2b)^2
        let depth = 1.0e6f64;
        let states = bound_states(depth, 1.0).unwrap();
        for s in states.iter().take(3) {
            let expect = (s.n * s.n) as f64 * std::f64::consts::PI.powi(2) / 4.0;
            let got = s.energy + depth;
            assert!(
                ((got - expect) / expect).abs() < 1e-2,
                "n={}: {got} vs {expect}",
                s.n
            );
        }
    }

    #[test]
    fn shallow_well_has_exactly_one_even_state() {
        let states = bound_states(0.1f64, 0.5).unwrap();
        assert_eq!(states.len(), 1);
        assert_eq!(states[0].parity, Parity::Even);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(bound_states(-1.0f64, 1.0).is_err());
        assert!(bound_states(1.0f64, 0.0).is_err());
    }
}
