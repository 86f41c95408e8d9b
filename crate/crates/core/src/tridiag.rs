//! Finite-difference matrix eigensolver.
//!
//! Discretizes -psi'' + V psi on the interior grid points as a symmetric
//! tridiagonal matrix (diagonal 2/dx^2 + V_i, off-diagonal -1/dx^2) and
//! extracts its lowest eigenvalues by Sturm-sequence bisection, with inverse
//! iteration for the eigenvectors. This solver never looks at node counts,
//! which makes it an independent cross-check of the shooting solver: the
//! shooting method brackets energies by counting sign changes, i.e. it
//! presupposes the oscillation property the rest of the crate verifies.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::{real, Real};
use crate::solver::{normalize_and_fix_sign, Eigenpair, SolverTag};

/// Number of eigenvalues of the symmetric tridiagonal matrix (diagonal `d`,
/// constant off-diagonal `e`) strictly below `lambda`, via the signs of the
/// LDL^T pivots.
pub fn sturm_count_below<T: Real>(d: &[T], e: T, lambda: T) -> usize {
    let n = d.len();
    if n == 0 {
        return 0;
    }
    // pivot guard keeps the recurrence finite when a pivot lands on zero
    let pivot_min = T::min_positive_value().sqrt() * (T::one() + e.abs());
    let e2 = e * e;
    let mut count = 0;
    let mut q = d[0] - lambda;
    if q < T::zero() {
        count += 1;
    }
    for &di in &d[1..] {
        let q_safe = if q.abs() < pivot_min {
            if q < T::zero() {
                -pivot_min
            } else {
                pivot_min
            }
        } else {
            q
        };
        q = (di - lambda) - e2 / q_safe;
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

/// The `k` lowest eigenvalues by bisection on the Sturm count, ascending.
pub fn lowest_eigenvalues<T: Real>(d: &[T], e: T, k: usize) -> Vec<T> {
    // Gershgorin bounds
    let two_e = e.abs() + e.abs();
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for &di in d {
        lo = lo.min(di - two_e);
        hi = hi.max(di + two_e);
    }
    let scale = lo.abs().max(hi.abs()).max(T::one());
    let tol = real::<T>(8.0) * T::epsilon() * scale;
    let two = real::<T>(2.0);

    let mut out = Vec::with_capacity(k);
    for j in 1..=k {
        let (mut a, mut b) = (lo, hi);
        while b - a > tol {
            let mid = (a + b) / two;
            if sturm_count_below(d, e, mid) >= j {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push((a + b) / two);
    }
    out
}

/// Solve (T - shift I) x = b for a symmetric tridiagonal T with constant
/// off-diagonal, by LU with partial pivoting (dgtsv-style). Near-zero pivots
/// are replaced by a tiny guard value, which is exactly what inverse
/// iteration wants when the shift sits on an eigenvalue.
fn solve_shifted<T: Real>(d: &[T], e: T, shift: T, rhs: &mut [T]) {
    let n = d.len();
    let tiny = T::min_positive_value().sqrt() * (T::one() + e.abs());
    let guard = |p: T| {
        if p.abs() < tiny {
            if p < T::zero() {
                -tiny
            } else {
                tiny
            }
        } else {
            p
        }
    };
    if n == 1 {
        rhs[0] /= guard(d[0] - shift);
        return;
    }
    let mut dd: Vec<T> = d.iter().map(|&di| di - shift).collect();
    let mut du1 = vec![e; n - 1];
    let mut du2 = vec![T::zero(); n - 2];

    for i in 0..n - 1 {
        // the subdiagonal entry of row i+1 is still the original e here
        if dd[i].abs() >= e.abs() {
            let fact = e / guard(dd[i]);
            dd[i + 1] -= fact * du1[i];
            rhs[i + 1] -= fact * rhs[i];
        } else {
            let fact = dd[i] / e;
            dd[i] = e;
            let temp = du1[i];
            let old_dip1 = dd[i + 1];
            du1[i] = old_dip1;
            dd[i + 1] = temp - fact * old_dip1;
            if i + 2 < n {
                du2[i] = du1[i + 1];
                du1[i + 1] = -fact * du2[i];
            }
            rhs.swap(i, i + 1);
            rhs[i + 1] -= fact * rhs[i];
        }
    }

    for i in (0..n).rev() {
        let mut acc = rhs[i];
        if i + 1 < n {
            acc -= du1[i] * rhs[i + 1];
        }
        if i + 2 < n {
            acc -= du2[i] * rhs[i + 2];
        }
        rhs[i] = acc / guard(dd[i]);
    }
}

/// Eigenvector for `lambda` by inverse iteration (at most 10 iterations),
/// re-orthogonalized against `previous` when eigenvalues cluster.
fn inverse_iteration<T: Real>(d: &[T], e: T, lambda: T, previous: &[(T, Vec<T>)], scale: T) -> Vec<T> {
    let n = d.len();
    // deterministic pseudo-random start vector (LCG); a structured start can
    // be accidentally orthogonal to the target eigenvector
    let mut seed: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut x: Vec<T> = (0..n)
        .map(|_| {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            real::<T>(((seed >> 11) as f64) / ((1u64 << 53) as f64) - 0.5)
        })
        .collect();
    let shift = lambda + real::<T>(10.0) * T::epsilon() * scale;
    let cluster_tol = real::<T>(1e-8) * scale;

    for _ in 0..10 {
        solve_shifted(d, e, shift, &mut x);
        for (mu, v) in previous {
            if (*mu - lambda).abs() < cluster_tol {
                let dot: T = x.iter().zip(v).map(|(&a, &b)| a * b).sum();
                for (xi, &vi) in x.iter_mut().zip(v) {
                    *xi -= dot * vi;
                }
            }
        }
        let norm = x.iter().map(|&v| v * v).sum::<T>().sqrt();
        if norm == T::zero() || !norm.is_finite() {
            // restart from ones if the iterate collapsed
            for xi in x.iter_mut() {
                *xi = T::one();
            }
            continue;
        }
        let inv = norm.recip();
        for xi in x.iter_mut() {
            *xi *= inv;
        }
        // converged when the residual is at roundoff level
        let mut res = T::zero();
        for i in 0..n {
            let mut r = (d[i] - lambda) * x[i];
            if i > 0 {
                r += e * x[i - 1];
            }
            if i + 1 < n {
                r += e * x[i + 1];
            }
            res = res.max(r.abs());
        }
        if res < real::<T>(100.0) * T::epsilon() * scale {
            break;
        }
    }
    x
}

/// The `k` lowest eigenpairs of the finite-difference discretization on the
/// grid's interior points, embedded with boundary zeros, normalized, and
/// sign-fixed like the shooting solver's output.
pub fn matrix_oracle<T: Real>(grid: &Grid<T>, k: usize) -> Result<Vec<Eigenpair<T>>> {
    let interior = grid.n_points() - 2;
    if k < 1 || k > interior {
        return Err(Error::invalid(format!(
            "k must be in 1..={interior} for this grid, got {k}"
        )));
    }
    let dx = grid.dx();
    let inv_dx2 = (dx * dx).recip();
    let d: Vec<T> = grid.v()[1..grid.n_points() - 1]
        .iter()
        .map(|&v| real::<T>(2.0) * inv_dx2 + v)
        .collect();
    let e = -inv_dx2;

    let eigenvalues = lowest_eigenvalues(&d, e, k);
    let scale = eigenvalues
        .iter()
        .fold(T::one(), |m, l| m.max(l.abs()))
        .max(real::<T>(4.0) * inv_dx2);

    let mut found: Vec<(T, Vec<T>)> = Vec::with_capacity(k);
    let mut pairs = Vec::with_capacity(k);
    for (idx, &lambda) in eigenvalues.iter().enumerate() {
        let vec = inverse_iteration(&d, e, lambda, &found, scale);
        found.push((lambda, vec.clone()));

        let mut psi = vec![T::zero(); grid.n_points()];
        psi[1..=interior].copy_from_slice(&vec);
        normalize_and_fix_sign(&mut psi, grid)
            .map_err(|err| err.for_state(idx + 1))?;
        pairs.push(Eigenpair {
            n: idx + 1,
            energy: lambda,
            psi,
            grid: grid.clone(),
            solver_tag: SolverTag::FiniteDifference,
        });
    }
    Ok(pairs)
}
