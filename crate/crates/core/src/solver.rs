//! Numerov shooting solver for bound states on a walled domain.
//!
//! The wavefunction is integrated from the left wall with the three-point
//! Numerov recurrence for psi'' = (V - E) psi. Energies are bracketed by the
//! node count of the shooting solution and refined by bisection. The
//! independent finite-difference eigensolver lives in [`crate::tridiag`] and
//! cross-checks these results at the linear-algebra level.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::{real, Real};

/// Which method produced an eigenpair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverTag {
    /// Numerov shooting with node-count bracketing.
    NumerovShooting,
    /// Symmetric tridiagonal finite-difference eigensolver.
    FiniteDifference,
    /// Closed-form infinite-well solution.
    Analytic,
}

impl std::fmt::Display for SolverTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolverTag::NumerovShooting => write!(f, "numerov"),
            SolverTag::FiniteDifference => write!(f, "matrix"),
            SolverTag::Analytic => write!(f, "analytic"),
        }
    }
}

/// One bound state: 1-based index, energy, and normalized samples.
///
/// Invariants maintained by the constructors: psi vanishes at both walls,
/// the trapezoid integral of psi^2 is 1, and the first nonzero sample after
/// the left wall is positive (discrete form of psi'(-a) > 0).
#[derive(Debug, Clone)]
pub struct Eigenpair<T> {
    pub n: usize,
    pub energy: T,
    pub psi: Vec<T>,
    pub grid: Grid<T>,
    pub solver_tag: SolverTag,
}

impl<T: Real> Eigenpair<T> {
    /// Central-difference derivative samples of psi, second-order one-sided
    /// at the walls.
    pub fn derivative(&self) -> Vec<T> {
        derivative_samples(&self.psi, self.grid.dx())
    }
}

/// Central differences at interior points, second-order one-sided at the ends.
pub(crate) fn derivative_samples<T: Real>(f: &[T], dx: T) -> Vec<T> {
    let n = f.len();
    let two = real::<T>(2.0);
    let half = T::one() / two;
    let mut d = vec![T::zero(); n];
    d[0] = (-real::<T>(3.0) * f[0] + real::<T>(4.0) * f[1] - f[2]) / (two * dx);
    for i in 1..n - 1 {
        d[i] = (f[i + 1] - f[i - 1]) * half / dx;
    }
    d[n - 1] = (real::<T>(3.0) * f[n - 1] - real::<T>(4.0) * f[n - 2] + f[n - 3]) / (two * dx);
    d
}

/// Controls for the shooting solver.
#[derive(Debug, Clone)]
pub struct SolveOptions<T> {
    /// Cap on the number of doublings of the energy search window.
    pub bracket_expansion_limit: usize,
    /// Bisection stops when the bracket width drops below
    /// `bisection_rel_tol * max(1, |E|)`.
    pub bisection_rel_tol: T,
    /// Hard cap on bisection iterations.
    pub max_bisection_iters: usize,
    /// Optional upper edge for the initial energy window, e.g. seeded from a
    /// previous solve on a nearby domain.
    pub window_hint: Option<T>,
}

impl<T: Real> Default for SolveOptions<T> {
    fn default() -> Self {
        SolveOptions {
            bracket_expansion_limit: 60,
            bisection_rel_tol: real(1e-12),
            max_bisection_iters: 200,
            window_hint: None,
        }
    }
}

/// Integrate psi'' = (V - E) psi across the grid with the Numerov recurrence.
///
/// Seeds psi[0] = 0, psi[1] = dx; no normalization is applied. When the
/// running amplitude exceeds a rescale threshold the whole tail is scaled
/// down, so the output is always finite (the overall scale carries no
/// information).
pub fn numerov_integrate<T: Real>(grid: &Grid<T>, energy: T) -> Vec<T> {
    numerov_integrate_seeded(grid, energy, T::zero(), grid.dx())
}

/// Numerov recurrence from arbitrary seed values at the first two grid
/// points; shares the overflow rescale guard with [`numerov_integrate`].
pub fn numerov_integrate_seeded<T: Real>(grid: &Grid<T>, energy: T, psi0: T, psi1: T) -> Vec<T> {
    numerov_raw(grid.v(), grid.dx(), energy, psi0, psi1)
}

fn numerov_raw<T: Real>(v: &[T], dx: T, energy: T, psi0: T, psi1: T) -> Vec<T> {
    let n = v.len();
    let h2_12 = dx * dx / real::<T>(12.0);
    let two = real::<T>(2.0);
    let five = real::<T>(5.0);
    let rescale_at = real::<T>(1e100).min(T::max_value().sqrt());

    let mut psi = vec![T::zero(); n];
    psi[0] = psi0;
    psi[1] = psi1;
    let f = |i: usize| v[i] - energy;
    for i in 1..n - 1 {
        let num = two * psi[i] * (T::one() + five * h2_12 * f(i))
            - psi[i - 1] * (T::one() - h2_12 * f(i - 1));
        let next = num / (T::one() - h2_12 * f(i + 1));
        psi[i + 1] = next;
        if next.abs() > rescale_at {
            let s = rescale_at.recip();
            for p in psi[..=i + 1].iter_mut() {
                *p *= s;
            }
        }
    }
    psi
}

fn sign_changes<T: Real>(samples: &[T]) -> usize {
    let mut count = 0;
    let mut last = T::zero();
    for &s in samples {
        if s == T::zero() {
            continue;
        }
        if last != T::zero() && (s > T::zero()) != (last > T::zero()) {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of strict sign changes between consecutive nonzero samples,
/// ignoring the first and last samples (boundary zeros are not nodes).
/// An exact interior zero between two like signs does not count; between
/// opposite signs it counts once.
pub fn count_sign_changes<T: Real>(psi: &[T]) -> usize {
    if psi.len() < 3 {
        return 0;
    }
    sign_changes(&psi[1..psi.len() - 1])
}

/// Node count of a raw shooting solution, endpoint included: this equals the
/// number of eigenvalues below the trial energy and is what the bracketing
/// bisects on.
fn shooting_count<T: Real>(psi: &[T]) -> usize {
    sign_changes(&psi[1..])
}

/// Trapezoid-normalize and fix the sign so the first nonzero sample is
/// positive.
pub fn normalize_and_fix_sign<T: Real>(psi: &mut [T], grid: &Grid<T>) -> Result<()> {
    let norm_sq = grid.inner(psi, psi);
    if norm_sq <= T::zero() || !norm_sq.is_finite() {
        return Err(Error::DegenerateInput(
            "cannot normalize an identically zero wavefunction".into(),
        ));
    }
    let mut scale = norm_sq.sqrt().recip();
    if let Some(&first) = psi.iter().find(|&&p| p != T::zero()) {
        if first < T::zero() {
            scale = -scale;
        }
    }
    for p in psi.iter_mut() {
        *p *= scale;
    }
    Ok(())
}

/// Assemble the wavefunction at a converged energy from two Numerov sweeps,
/// one from each wall, joined near the outermost right classical turning
/// point.
///
/// The left sweep alone is fine for bracketing (only the sign pattern
/// matters) but its values in a deep outer forbidden region are swamped by
/// growing-mode contamination: the residual at the far wall is amplified by
/// exp(integral of sqrt(V - E)) on the way in, which for a quartic tail can
/// exceed the interior amplitude by many orders of magnitude. Each sweep is
/// used only on the side where its growing mode points inward.
fn reconstruct_two_sided<T: Real>(grid: &Grid<T>, energy: T) -> Vec<T> {
    let n = grid.n_points();
    let v = grid.v();
    let dx = grid.dx();
    let psi_l = numerov_integrate(grid, energy);

    // backward sweep = forward sweep on the mirrored potential
    let v_rev: Vec<T> = v.iter().rev().copied().collect();
    let mut psi_r = numerov_raw(&v_rev, dx, energy, T::zero(), dx);
    psi_r.reverse();

    // match where the amplitude is large: near the last classically allowed
    // sample, at the local maximum of |psi_l| to stay clear of nodes
    let turn = v
        .iter()
        .rposition(|&vi| vi <= energy)
        .unwrap_or(n / 2)
        .clamp(1, n - 2);
    let lo = turn.saturating_sub(16).max(1);
    let m = (lo..=turn)
        .max_by(|&i, &j| {
            psi_l[i]
                .abs()
                .partial_cmp(&psi_l[j].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(turn);
    if psi_r[m] == T::zero() || psi_l[m] == T::zero() {
        // degenerate match point; keep the single sweep with a clamped wall
        let mut psi = psi_l;
        psi[n - 1] = T::zero();
        return psi;
    }
    let s = psi_l[m] / psi_r[m];
    let mut psi = psi_l;
    for i in m + 1..n {
        psi[i] = s * psi_r[i];
    }
    psi[n - 1] = T::zero();
    // pre-scale by the peak so normalization squares stay in range
    let max = psi.iter().fold(T::zero(), |acc, p| acc.max(p.abs()));
    if max > T::zero() {
        let inv = max.recip();
        for p in psi.iter_mut() {
            *p *= inv;
        }
    }
    psi
}

/// Solve for the n-th eigenpair (n = 1 is the ground state) by node-count
/// bracketing and bisection on the energy.
pub fn solve_state<T: Real>(grid: &Grid<T>, n: usize, options: &SolveOptions<T>) -> Result<Eigenpair<T>> {
    if n < 1 {
        return Err(Error::invalid("state index n must be >= 1"));
    }
    let count_at = |e: T| shooting_count(&numerov_integrate(grid, e));

    let v_min = grid.v_min();
    let mut e_lo = v_min - T::one();
    // below min(V) the solution is convex and nodeless
    debug_assert_eq!(count_at(e_lo), 0);

    let mut width = match options.window_hint {
        Some(hint) => (hint - v_min).max(T::one()),
        None => T::one(),
    };
    let mut e_hi = v_min + width;
    let mut expansions = 0;
    while count_at(e_hi) < n {
        expansions += 1;
        if expansions > options.bracket_expansion_limit {
            return Err(Error::BracketNotFound {
                n,
                e_lo: e_lo.to_f64().unwrap_or(f64::NAN),
                e_hi: e_hi.to_f64().unwrap_or(f64::NAN),
                expansions: expansions - 1,
            });
        }
        width = width + width;
        e_hi = v_min + width;
    }

    let two = real::<T>(2.0);
    let mut converged = false;
    for _ in 0..options.max_bisection_iters {
        let mid = (e_lo + e_hi) / two;
        if e_hi - e_lo < options.bisection_rel_tol * T::one().max(mid.abs()) {
            converged = true;
            break;
        }
        if count_at(mid) >= n {
            e_hi = mid;
        } else {
            e_lo = mid;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            n,
            iterations: options.max_bisection_iters,
        });
    }

    let energy = (e_lo + e_hi) / two;
    let mut psi = reconstruct_two_sided(grid, energy);
    normalize_and_fix_sign(&mut psi, grid)?;
    Ok(Eigenpair {
        n,
        energy,
        psi,
        grid: grid.clone(),
        solver_tag: SolverTag::NumerovShooting,
    })
}

/// Eigenpairs n = 1..k in order of strictly increasing energy.
///
/// Errors from individual states are annotated with the state index.
pub fn solve_lowest<T: Real>(grid: &Grid<T>, k: usize, options: &SolveOptions<T>) -> Result<Vec<Eigenpair<T>>> {
    if k < 1 {
        return Err(Error::invalid("state count k must be >= 1"));
    }
    let mut pairs = Vec::with_capacity(k);
    for n in 1..=k {
        let pair = solve_state(grid, n, options).map_err(|e| e.for_state(n))?;
        pairs.push(pair);
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::PotentialSpec;
    use std::f64::consts::PI;

    fn zero_grid(a: f64, n: usize) -> Grid<f64> {
        let wp = PotentialSpec::Zero.wall(a).unwrap();
        Grid::new(&wp, n).unwrap()
    }

    #[test]
    fn numerov_ground_state_energy_closes_shooting() {
        let g = zero_grid(1.0, 2001);
        let psi = numerov_integrate(&g, PI * PI / 4.0);
        let max = psi.iter().fold(0.0f64, |m, p| m.max(p.abs()));
        assert!((psi[2000] / max).abs() < 1e-8, "psi(a)/max = {}", psi[2000] / max);
    }

    #[test]
    fn numerov_zero_energy_is_linear() {
        let g = zero_grid(1.0, 2001);
        let psi = numerov_integrate(&g, 0.0);
        // psi'' = 0 gives psi proportional to (x + 1)
        let max = psi.iter().fold(0.0f64, |m, p| m.max(p.abs()));
        assert!((psi[2000] / max - 1.0).abs() < 1e-12);
        let mid = psi[1000] / max;
        assert!((mid - 0.5).abs() < 1e-10);
    }

    #[test]
    fn numerov_matches_sine_solution() {
        // E = 1 on V = 0: psi proportional to sin(x + 1)
        let g = zero_grid(1.0, 2001);
        let psi = numerov_integrate(&g, 1.0);
        // psi seeded with slope ~1, so psi(x) ~ sin(x+1); at x = 1: sin(2)
        let scale = psi[1000] / (1.0f64).sin(); // x=0 -> sin(1)
        assert!((psi[2000] / scale - (2.0f64).sin()).abs() < 1e-8);
    }

    #[test]
    fn sign_change_counting_rules() {
        assert_eq!(count_sign_changes(&[0.0, 0.5, 1.0, 0.5, 0.0]), 0);
        assert_eq!(count_sign_changes(&[0.0, 1.0, -1.0, 1.0, 0.0]), 2);
        assert_eq!(count_sign_changes(&[0.0, 1.0, 0.0, 1.0, 0.0]), 0);
        assert_eq!(count_sign_changes(&[0.0, 1.0, 0.0, -1.0, 0.0]), 1);
    }

    #[test]
    fn infinite_well_spectrum() {
        let g = zero_grid(1.0, 4001);
        let opts = SolveOptions::default();
        for n in [1usize, 3] {
            let pair = solve_state(&g, n, &opts).unwrap();
            let exact = (n * n) as f64 * PI * PI / 4.0;
            assert!(
                ((pair.energy - exact) / exact).abs() < 1e-8,
                "n={n}: {} vs {exact}",
                pair.energy
            );
        }
    }

    #[test]
    fn harmonic_first_excited() {
        let wp = PotentialSpec::harmonic(1.0f64).unwrap().wall(8.0).unwrap();
        let g = Grid::new(&wp, 4001).unwrap();
        let pair = solve_state(&g, 2, &SolveOptions::default()).unwrap();
        assert!((pair.energy - 3.0).abs() < 1e-6, "E2 = {}", pair.energy);
    }

    #[test]
    fn solve_lowest_is_ordered_and_normalized() {
        let g = zero_grid(1.0, 4001);
        let pairs = solve_lowest(&g, 3, &SolveOptions::default()).unwrap();
        assert_eq!(pairs.len(), 3);
        for w in pairs.windows(2) {
            assert!(w[0].energy < w[1].energy);
        }
        for (i, p) in pairs.iter().enumerate() {
            let exact = ((i + 1) * (i + 1)) as f64 * PI * PI / 4.0;
            assert!(((p.energy - exact) / exact).abs() < 1e-8);
            let norm = p.grid.inner(&p.psi, &p.psi);
            assert!((norm - 1.0).abs() < 1e-10);
            assert_eq!(p.psi[0], 0.0);
            assert_eq!(p.psi[4000], 0.0);
            let first = p.psi.iter().find(|&&v| v != 0.0).unwrap();
            assert!(*first > 0.0);
        }
    }

    #[test]
    fn square_well_bound_energies_negative() {
        let wp = PotentialSpec::square_well(4.0, 1.0).unwrap().wall(10.0).unwrap();
        let g = Grid::new(&wp, 4001).unwrap();
        let pairs = solve_lowest(&g, 2, &SolveOptions::default()).unwrap();
        assert!(pairs[0].energy < 0.0);
        assert!(pairs[1].energy < 0.0);
    }

    #[test]
    fn normalize_flips_sign_and_scales() {
        let g = zero_grid(1.0, 3);
        let mut psi = vec![0.0, -1.0, 0.0];
        normalize_and_fix_sign(&mut psi, &g).unwrap();
        assert!(psi[1] > 0.0);
        assert!((g.inner(&psi, &psi) - 1.0).abs() < 1e-14);
        // idempotent
        let before = psi.clone();
        normalize_and_fix_sign(&mut psi, &g).unwrap();
        for (a, b) in psi.iter().zip(&before) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn normalize_rejects_zero_input() {
        let g = zero_grid(1.0, 3);
        let mut psi = vec![0.0, 0.0, 0.0];
        assert!(matches!(
            normalize_and_fix_sign(&mut psi, &g),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn bracket_failure_reports_window() {
        let g = zero_grid(1.0, 101);
        let opts = SolveOptions {
            bracket_expansion_limit: 0,
            ..SolveOptions::default()
        };
        // state 40 needs a window far beyond min(V)+1
        match solve_state(&g, 40, &opts) {
            Err(Error::BracketNotFound { n: 40, .. }) => {}
            other => panic!("expected BracketNotFound, got {other:?}"),
        }
    }

    #[test]
    fn numerov_convergence_is_fourth_order() {
        let exact = PI * PI / 4.0;
        let err = |n: usize| {
            let g = zero_grid(1.0, n);
            (solve_state(&g, 1, &SolveOptions::default()).unwrap().energy - exact).abs()
        };
        // moderate sizes: on finer grids the O(dx^4) term drops below the
        // bisection-tolerance floor and the ratio is no longer clean
        let coarse = err(101);
        let fine = err(201);
        let ratio = coarse / fine;
        assert!((12.0..=20.0).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn rescale_guard_keeps_samples_finite() {
        // deep classically forbidden region: exponential growth over a wide box
        let wp = PotentialSpec::harmonic(1.0f64).unwrap().wall(40.0).unwrap();
        let g = Grid::new(&wp, 4001).unwrap();
        let psi = numerov_integrate(&g, 1.0);
        assert!(psi.iter().all(|p| p.is_finite()));
    }

    #[test]
    fn works_in_f32() {
        // single precision: coarse grid keeps roundoff accumulation low, and
        // the tolerance reflects f32 bisection resolution, not O(dx^4)
        let wp = PotentialSpec::<f32>::Zero.wall(1.0).unwrap();
        let g = Grid::new(&wp, 201).unwrap();
        let opts = SolveOptions {
            bisection_rel_tol: 1e-6,
            ..SolveOptions::default()
        };
        let pair = solve_state(&g, 1, &opts).unwrap();
        assert!((pair.energy - (std::f32::consts::PI.powi(2) / 4.0)).abs() < 1e-2);
    }
}
