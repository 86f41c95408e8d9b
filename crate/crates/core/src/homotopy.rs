//! Wall-separation continuation: sweep the half-width a, track each
//! eigenvalue branch by spectral index, and verify that node counts stay
//! constant while the energies relax toward the open-domain spectrum.
//!
//! Branch identity is by index n at each a; 1D walled spectra are simple, so
//! no eigenvector-overlap matching is needed.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::nodes::find_nodes;
use crate::potential::PotentialSpec;
use crate::scalar::{real, real_of_usize, Real};
use crate::solver::{normalize_and_fix_sign, solve_state, Eigenpair, SolveOptions, SolverTag};

/// Fate of an eigenvalue branch as the walls separate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Energy converged below the continuum threshold.
    Bound,
    /// Energy approaches the threshold from above; the state dissolves into
    /// the continuum as a grows.
    Escaping,
    Undetermined,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::Bound => write!(f, "bound"),
            Classification::Escaping => write!(f, "escaping"),
            Classification::Undetermined => write!(f, "undetermined"),
        }
    }
}

/// One tracked point of a branch.
#[derive(Debug, Clone, Copy)]
pub struct BranchSample<T> {
    pub a: T,
    pub energy: T,
    pub node_count: usize,
}

/// One eigenvalue index followed across the wall-separation schedule.
#[derive(Debug, Clone)]
pub struct Branch<T> {
    /// 1-based spectral index.
    pub n: usize,
    /// Samples in schedule order; a strictly increasing.
    pub samples: Vec<BranchSample<T>>,
    pub classification: Classification,
    /// Set when a solve failed partway; the branch stops at the last good a.
    pub aborted: Option<String>,
}

/// Sweep controls.
#[derive(Debug, Clone)]
pub struct SweepConfig<T> {
    /// Wall half-widths, strictly increasing, all positive.
    pub a_schedule: Vec<T>,
    /// Number of branches (lowest states) to track.
    pub n_max: usize,
    /// Grid points at the largest scheduled half-width. The sweep holds the
    /// grid spacing fixed across the schedule (smaller a gets proportionally
    /// fewer points), so the discretization offset in each energy is constant
    /// in a and the exact Dirichlet monotonicity E_n(a2) <= E_n(a1) survives
    /// discretization. A fixed point count instead would make the offset grow
    /// with a and show up as spurious energy increases at the converged tail.
    pub n_points: usize,
    /// Energy margin for the bound/escaping verdict.
    pub classification_margin: T,
}

/// Geometric schedule from `a_min` to `a_max` inclusive.
pub fn geometric_schedule<T: Real>(a_min: T, a_max: T, count: usize) -> Result<Vec<T>> {
    if !(a_min > T::zero()) || !(a_max > a_min) {
        return Err(Error::invalid("schedule needs 0 < a_min < a_max"));
    }
    if count < 2 {
        return Err(Error::invalid("schedule needs at least 2 points"));
    }
    let ratio = (a_max / a_min).powf(T::one() / real_of_usize::<T>(count - 1));
    let mut out = Vec::with_capacity(count);
    let mut a = a_min;
    for i in 0..count {
        out.push(if i == count - 1 { a_max } else { a });
        a *= ratio;
    }
    Ok(out)
}

/// Default verdict margin: walled approximants only reach the threshold
/// algebraically (E - threshold ~ a^-2), so exact attainment never happens.
pub fn default_classification_margin<T: Real>(spec: &PotentialSpec<T>) -> T {
    let depth = match spec {
        PotentialSpec::SquareWell { depth, .. } => depth.abs(),
        _ => T::one(),
    };
    real::<T>(1e-3) * T::one().max(depth)
}

impl<T: Real> SweepConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.a_schedule.len() < 2 {
            return Err(Error::invalid("sweep schedule needs at least 2 points"));
        }
        if self.a_schedule[0] <= T::zero() {
            return Err(Error::invalid("sweep half-widths must be positive"));
        }
        for w in self.a_schedule.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::invalid("sweep schedule must be strictly increasing"));
            }
        }
        if self.n_max < 1 {
            return Err(Error::invalid("n_max must be >= 1"));
        }
        Ok(())
    }
}

/// Exact infinite-well eigenpair on [-eps, eps]: the closed-form anchor for
/// the small-a end of every sweep. State n has energy n^2 pi^2 / (4 eps^2)
/// and n - 1 nodes; even and odd parity states interleave automatically in
/// the unified form sin(n pi (x + eps) / (2 eps)).
pub fn analytic_small_a<T: Real>(n: usize, eps: T, n_points: usize) -> Result<Eigenpair<T>> {
    if n < 1 {
        return Err(Error::invalid("state index n must be >= 1"));
    }
    if !(eps > T::zero()) {
        return Err(Error::invalid("half-width eps must be > 0"));
    }
    let wp = PotentialSpec::Zero.wall(eps)?;
    let grid = Grid::new(&wp, n_points)?;
    let k = real_of_usize::<T>(n) * T::PI() / (eps + eps);
    let mut psi: Vec<T> = (0..n_points).map(|i| (k * (grid.x(i) + eps)).sin()).collect();
    psi[0] = T::zero();
    psi[n_points - 1] = T::zero();
    normalize_and_fix_sign(&mut psi, &grid)?;
    let energy = k * k;
    Ok(Eigenpair {
        n,
        energy,
        psi,
        grid,
        solver_tag: SolverTag::Analytic,
    })
}

/// A request to solve one state at the current half-width.
#[derive(Debug, Clone)]
pub struct StateRequest<T> {
    pub n: usize,
    pub options: SolveOptions<T>,
}

/// Energy and node count of one solved state.
pub type StateOutcome<T> = Result<(T, usize)>;

/// Solve one sweep cell; used by both the sequential sweep and any parallel
/// driver, so results are identical regardless of scheduling.
pub fn solve_state_request<T: Real>(grid: &Grid<T>, req: &StateRequest<T>) -> StateOutcome<T> {
    let pair = solve_state(grid, req.n, &req.options).map_err(|e| e.for_state(req.n))?;
    let count = find_nodes(&pair).count();
    Ok((pair.energy, count))
}

/// Sweep with a caller-supplied executor for the per-a batch of states.
/// The executor must preserve request order; beyond that it is free to run
/// the requests concurrently.
pub fn sweep_with<T, M>(spec: &PotentialSpec<T>, config: &SweepConfig<T>, run_batch: M) -> Result<Vec<Branch<T>>>
where
    T: Real,
    M: Fn(&Grid<T>, &[StateRequest<T>]) -> Vec<StateOutcome<T>>,
{
    config.validate()?;
    let mut branches: Vec<Branch<T>> = (1..=config.n_max)
        .map(|n| Branch {
            n,
            samples: Vec::with_capacity(config.a_schedule.len()),
            classification: Classification::Undetermined,
            aborted: None,
        })
        .collect();

    // One grid spacing for the whole sweep, set by the largest half-width.
    // If V has a jump, nudge dx so the jump is a grid point at every a;
    // off-grid jumps make the discretization error oscillate with the jump's
    // offset inside its cell, destroying both accuracy and monotonicity.
    let a_last = *config.a_schedule.last().expect("validated non-empty");
    let two = T::one() + T::one();
    let mut dx = (a_last + a_last) / real_of_usize::<T>(config.n_points - 1);
    let jump = spec
        .jump_points()
        .into_iter()
        .map(|(loc, _)| loc)
        .find(|&loc| loc > T::zero());
    if let Some(b) = jump {
        let m = (b / dx).round().max(T::one());
        dx = b / m;
    }

    let mut prev_energies: Vec<Option<T>> = vec![None; config.n_max];
    for &scheduled_a in &config.a_schedule {
        // Snap each half-width to the shared grid: a = k dx keeps the cell
        // count even (point count odd) and any jump on-grid. The recorded a
        // is the snapped (actually solved) half-width.
        let mut k = (scheduled_a / dx).round().max(T::one());
        if let Some(b) = jump {
            // walls must sit strictly outside the jump
            k = k.max(b / dx + T::one());
        }
        let a = k * dx;
        let n_pts = match (k * two).to_usize() {
            Some(c) => c + 1,
            None => return Err(Error::invalid("schedule produces an oversized grid")),
        };
        let wp = spec.wall(a)?;
        let grid = Grid::new(&wp, n_pts)?;
        let requests: Vec<StateRequest<T>> = branches
            .iter()
            .filter(|b| b.aborted.is_none())
            .map(|b| StateRequest {
                n: b.n,
                options: SolveOptions {
                    window_hint: prev_energies[b.n - 1],
                    ..SolveOptions::default()
                },
            })
            .collect();
        let outcomes = run_batch(&grid, &requests);
        debug_assert_eq!(outcomes.len(), requests.len());
        for (req, outcome) in requests.iter().zip(outcomes) {
            let branch = &mut branches[req.n - 1];
            match outcome {
                Ok((energy, node_count)) => {
                    prev_energies[req.n - 1] = Some(energy);
                    branch.samples.push(BranchSample {
                        a,
                        energy,
                        node_count,
                    });
                }
                Err(e) => {
                    branch.aborted = Some(format!("at a = {a}: {e}"));
                }
            }
        }
    }

    let threshold = spec.continuum_threshold();
    for branch in &mut branches {
        branch.classification = classify_branch(branch, threshold, config.classification_margin);
    }
    Ok(branches)
}

/// Sequential sweep over the schedule, seeding each solve's energy window
/// from the previous half-width's energies.
pub fn sweep<T: Real>(spec: &PotentialSpec<T>, config: &SweepConfig<T>) -> Result<Vec<Branch<T>>> {
    sweep_with(spec, config, |grid, reqs| {
        reqs.iter().map(|r| solve_state_request(grid, r)).collect()
    })
}

/// Result of checking a branch's invariants.
#[derive(Debug, Clone)]
pub struct BranchReport {
    pub n: usize,
    /// Node count constant along the branch and equal to n - 1.
    pub node_count_ok: bool,
    /// Energies non-increasing as a increases (Dirichlet domain
    /// monotonicity).
    pub monotone_ok: bool,
    pub violations: Vec<String>,
}

impl BranchReport {
    pub fn passed(&self) -> bool {
        self.node_count_ok && self.monotone_ok
    }
}

/// Check node-count invariance and energy monotonicity along a branch.
pub fn verify_branch<T: Real>(branch: &Branch<T>) -> BranchReport {
    let expected = branch.n - 1;
    let mut violations = Vec::new();
    let mut node_count_ok = branch.samples.len() >= 2;
    if !node_count_ok {
        violations.push("branch has fewer than 2 samples".into());
    }
    for (i, s) in branch.samples.iter().enumerate() {
        if s.node_count != expected {
            node_count_ok = false;
            violations.push(format!(
                "sample {} (a = {}): node count {} != {}",
                i + 1,
                s.a,
                s.node_count,
                expected
            ));
        }
    }
    let mut monotone_ok = true;
    let slack = real::<T>(1e-10);
    for (i, w) in branch.samples.windows(2).enumerate() {
        if w[1].energy > w[0].energy + slack {
            monotone_ok = false;
            violations.push(format!(
                "sample {}: energy rose from {} to {} as a increased",
                i + 2,
                w[0].energy,
                w[1].energy
            ));
        }
    }
    BranchReport {
        n: branch.n,
        node_count_ok,
        monotone_ok,
        violations,
    }
}

/// Bound/escaping verdict for a branch given the potential's continuum
/// threshold.
pub fn classify_branch<T: Real>(branch: &Branch<T>, threshold: T, margin: T) -> Classification {
    if threshold.is_infinite() && threshold > T::zero() {
        return Classification::Bound;
    }
    let k = branch.samples.len();
    if k < 2 {
        return Classification::Undetermined;
    }
    let last = branch.samples[k - 1].energy;
    if last < threshold - margin {
        // bound needs the tail to have converged
        if k >= 3 {
            let tail = &branch.samples[k - 3..];
            let spread = tail[0].energy - tail[2].energy;
            if spread.abs() <= margin {
                return Classification::Bound;
            }
        }
        return Classification::Undetermined;
    }
    // at or above the threshold: escaping while still decreasing toward it
    if branch.samples[k - 2].energy >= last {
        Classification::Escaping
    } else {
        Classification::Undetermined
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn analytic_well_states() {
        let p1 = analytic_small_a::<f64>(1, 1.0, 2001).unwrap();
        assert!((p1.energy - PI * PI / 4.0).abs() < 1e-12);
        assert_eq!(find_nodes(&p1).count(), 0);

        let p3 = analytic_small_a::<f64>(3, 1.0, 2001).unwrap();
        assert!((p3.energy - 9.0 * PI * PI / 4.0).abs() < 1e-11);
        let ns = find_nodes(&p3);
        assert_eq!(ns.count(), 2);
        assert!((ns.positions[0] + 1.0 / 3.0).abs() < 1e-6);

        let p2 = analytic_small_a::<f64>(2, 0.1, 2001).unwrap();
        assert!((p2.energy - 4.0 * PI * PI / 0.04).abs() / p2.energy < 1e-12);

        assert!(analytic_small_a::<f64>(1, -1.0, 2001).is_err());
    }

    #[test]
    fn analytic_states_are_sign_fixed_and_normalized() {
        for n in 1..=5 {
            let p = analytic_small_a::<f64>(n, 2.0, 1001).unwrap();
            let norm = p.grid.inner(&p.psi, &p.psi);
            assert!((norm - 1.0).abs() < 1e-10);
            assert!(*p.psi.iter().find(|&&v| v != 0.0).unwrap() > 0.0);
            assert_eq!(find_nodes(&p).count(), n - 1);
        }
    }

    #[test]
    fn geometric_schedule_endpoints() {
        let s = geometric_schedule(1.5f64, 30.0, 40).unwrap();
        assert_eq!(s.len(), 40);
        assert_eq!(s[0], 1.5);
        assert_eq!(s[39], 30.0);
        assert!(s.windows(2).all(|w| w[1] > w[0]));
        assert!(geometric_schedule(1.0f64, 2.0, 1).is_err());
        assert!(geometric_schedule(2.0f64, 1.0, 5).is_err());
    }

    #[test]
    fn zero_potential_sweep_tracks_well_formula() {
        let config = SweepConfig {
            a_schedule: vec![1.0, 2.0, 4.0],
            n_max: 1,
            n_points: 4001,
            classification_margin: 1e-3,
        };
        let branches = sweep(&PotentialSpec::Zero, &config).unwrap();
        assert_eq!(branches.len(), 1);
        let b = &branches[0];
        for (s, a) in b.samples.iter().zip([1.0, 2.0, 4.0]) {
            let exact = PI * PI / (4.0 * a * a);
            assert!(((s.energy - exact) / exact).abs() < 1e-8, "a={a}: {}", s.energy);
            assert_eq!(s.node_count, 0);
        }
        assert_eq!(b.classification, Classification::Escaping);
        assert!(verify_branch(b).passed());
    }

    #[test]
    fn harmonic_sweep_approaches_oscillator_levels() {
        let spec = PotentialSpec::harmonic(1.0f64).unwrap();
        let config = SweepConfig {
            a_schedule: vec![4.0, 6.0, 8.0],
            n_max: 3,
            n_points: 2001,
            classification_margin: 1e-3,
        };
        let branches = sweep(&spec, &config).unwrap();
        for (b, limit) in branches.iter().zip([1.0, 3.0, 5.0]) {
            // walled energies exceed the open-domain limit and decrease toward it
            for s in &b.samples {
                assert!(s.energy > limit - 1e-6);
            }
            let last = b.samples.last().unwrap().energy;
            assert!((last - limit).abs() < 1e-5, "branch {}: {last}", b.n);
            assert_eq!(b.classification, Classification::Bound);
            assert!(verify_branch(b).passed());
        }
    }

    #[test]
    fn square_well_branch_census() {
        let spec = PotentialSpec::square_well(4.0, 1.0).unwrap();
        let config = SweepConfig {
            a_schedule: geometric_schedule(1.5, 30.0, 12).unwrap(),
            n_max: 3,
            n_points: 2001,
            classification_margin: default_classification_margin(&spec),
        };
        let branches = sweep(&spec, &config).unwrap();
        assert_eq!(branches[0].classification, Classification::Bound);
        assert_eq!(branches[1].classification, Classification::Bound);
        assert_eq!(branches[2].classification, Classification::Escaping);
        assert!(branches[0].samples.last().unwrap().energy < 0.0);
        assert!(branches[1].samples.last().unwrap().energy < 0.0);
        assert!(branches[2].samples.last().unwrap().energy > 0.0);
    }

    #[test]
    fn verify_branch_negative_control() {
        let branch = Branch {
            n: 2,
            samples: vec![
                BranchSample { a: 1.0, energy: 5.0, node_count: 1 },
                BranchSample { a: 2.0, energy: 3.0, node_count: 2 },
            ],
            classification: Classification::Undetermined,
            aborted: None,
        };
        let report = verify_branch(&branch);
        assert!(!report.passed());
        assert!(report.violations.iter().any(|v| v.contains("sample 2")));
    }

    #[test]
    fn classify_infinite_threshold_is_bound() {
        let branch = Branch::<f64> {
            n: 1,
            samples: vec![],
            classification: Classification::Undetermined,
            aborted: None,
        };
        assert_eq!(
            classify_branch(&branch, f64::INFINITY, 1e-3),
            Classification::Bound
        );
    }

    #[test]
    fn small_a_anchor_matches_sweep() {
        // walled zero potential IS the infinite well at every a
        let config = SweepConfig {
            a_schedule: vec![0.5, 1.0, 3.0],
            n_max: 2,
            n_points: 4001,
            classification_margin: 1e-3,
        };
        let branches = sweep(&PotentialSpec::Zero, &config).unwrap();
        for b in &branches {
            for s in &b.samples {
                let exact = analytic_small_a::<f64>(b.n, s.a, 101).unwrap().energy;
                assert!(((s.energy - exact) / exact).abs() < 1e-8);
            }
        }
    }
}
