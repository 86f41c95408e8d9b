//! Zero structure of eigenfunctions: node location and the oscillation,
//! comparison, and separation properties.
//!
//! A node is a strict interior sign change. Tangential touches are never
//! counted as nodes; a genuine eigenfunction cannot touch zero without
//! vanishing identically (value and derivative zero at one point force the
//! trivial solution), so near-touches are numerical artifacts and are
//! surfaced separately by [`detect_critical_touch`].

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::{real, Real};
use crate::solver::{numerov_integrate, numerov_integrate_seeded, Eigenpair};

/// Interior zeros of one eigenfunction.
#[derive(Debug, Clone)]
pub struct NodeSet<T> {
    /// 1-based eigenstate index the nodes belong to.
    pub eigen_index: usize,
    /// Sorted node positions, strictly inside (-a, a).
    pub positions: Vec<T>,
    /// Positions are refined by linear interpolation; accurate to O(dx^2).
    pub refinement_tol: T,
}

impl<T> NodeSet<T> {
    pub fn count(&self) -> usize {
        self.positions.len()
    }
}

/// Interior sign-change positions of a sample vector, linearly interpolated,
/// with zeros closer than `min_sep` collapsed to the first one. Boundary
/// samples are excluded. Samples with magnitude at or below `floor` are
/// treated as exact zeros; callers working with converged eigenfunctions use
/// a small relative floor so that roundoff-scale oscillation in the decaying
/// tails is not mistaken for nodes.
fn zero_crossings<T: Real>(samples: &[T], grid: &Grid<T>, min_sep: T, floor: T) -> Vec<T> {
    let n = samples.len();
    let mut zeros: Vec<T> = Vec::new();
    let mut last_nonzero: Option<(usize, T)> = None;
    for i in 1..n - 1 {
        let s = samples[i];
        if s.abs() <= floor {
            continue;
        }
        if let Some((j, prev)) = last_nonzero {
            if (s > T::zero()) != (prev > T::zero()) {
                // root of the secant through (x_j, prev) and (x_i, s)
                let xj = grid.x(j);
                let xi = grid.x(i);
                let x0 = xj + prev / (prev - s) * (xi - xj);
                match zeros.last() {
                    Some(&z) if x0 - z < min_sep => {}
                    _ => zeros.push(x0),
                }
            }
        }
        last_nonzero = Some((i, s));
    }
    zeros
}

/// Locate the interior nodes of an eigenfunction.
pub fn find_nodes<T: Real>(pair: &Eigenpair<T>) -> NodeSet<T> {
    let dx = pair.grid.dx();
    let min_sep = dx + dx;
    // Relative noise floor: a normalized eigenfunction decays monotonically
    // in the forbidden tails, so sign flips at roundoff scale there are
    // solver artifacts, not nodes.
    let max_amp = pair.psi.iter().fold(T::zero(), |m, p| m.max(p.abs()));
    let floor = real::<T>(1e-8) * max_amp;
    let mut positions = zero_crossings(&pair.psi, &pair.grid, min_sep, floor);

    // No nodes exist beyond the outermost classical turning points: there
    // psi'' = (V - E) psi keeps the solution convex away from the axis, so it
    // decays to the wall without crossing. Crossings found out there are
    // growing-mode contamination from the one-directional shooting sweep.
    let v = pair.grid.v();
    let first_allowed = v.iter().position(|&vi| vi <= pair.energy);
    let last_allowed = v.iter().rposition(|&vi| vi <= pair.energy);
    if let (Some(lo), Some(hi)) = (first_allowed, last_allowed) {
        let margin = min_sep;
        let (x_lo, x_hi) = (pair.grid.x(lo) - margin, pair.grid.x(hi) + margin);
        positions.retain(|&x| x_lo <= x && x <= x_hi);
    }
    NodeSet {
        eigen_index: pair.n,
        positions,
        refinement_tol: dx * dx,
    }
}

/// Outcome of the node-count check for one eigenpair.
#[derive(Debug, Clone)]
pub struct NodeCountReport {
    pub eigen_index: usize,
    pub expected: usize,
    pub found: usize,
    pub passed: bool,
}

/// Check that state n has exactly n - 1 interior nodes.
pub fn verify_node_count<T: Real>(pair: &Eigenpair<T>) -> NodeCountReport {
    let found = find_nodes(pair).count();
    let expected = pair.n - 1;
    NodeCountReport {
        eigen_index: pair.n,
        expected,
        found,
        passed: found == expected,
    }
}

/// Result of the interlacing (comparison-theorem) check between two states.
#[derive(Debug, Clone)]
pub struct InterlacingReport<T> {
    pub n1: usize,
    pub n2: usize,
    /// Consecutive-zero intervals of the lower state, walls included.
    pub intervals_checked: Vec<(T, T)>,
    /// One witness node of the higher state per interval, where found.
    pub witnesses: Vec<Option<T>>,
    pub passed: bool,
}

fn require_same_grid<T: Real>(p1: &Eigenpair<T>, p2: &Eigenpair<T>) -> Result<()> {
    if p1.grid != p2.grid {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// Between every two consecutive zeros of the lower state (boundary zeros
/// at +-a included) there must lie a node of the higher state.
pub fn verify_interlacing<T: Real>(p1: &Eigenpair<T>, p2: &Eigenpair<T>) -> Result<InterlacingReport<T>> {
    if p1.n >= p2.n {
        return Err(Error::precondition(format!(
            "interlacing requires n1 < n2, got n1={} n2={}",
            p1.n, p2.n
        )));
    }
    require_same_grid(p1, p2)?;

    let a = p1.grid.half_width();
    let mut lower_zeros = vec![-a];
    lower_zeros.extend(find_nodes(p1).positions.iter().copied());
    lower_zeros.push(a);

    let upper_nodes = find_nodes(p2).positions;
    let mut intervals = Vec::new();
    let mut witnesses = Vec::new();
    let mut passed = true;
    for w in lower_zeros.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let witness = upper_nodes.iter().copied().find(|&z| lo < z && z < hi);
        passed &= witness.is_some();
        intervals.push((lo, hi));
        witnesses.push(witness);
    }
    Ok(InterlacingReport {
        n1: p1.n,
        n2: p2.n,
        intervals_checked: intervals,
        witnesses,
        passed,
    })
}

/// Verdict of the separation-theorem check at one energy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeparationVerdict {
    /// Zeros of the two independent solutions strictly alternate.
    Alternating,
    /// One solution has fewer than two interior zeros; nothing to check.
    Vacuous,
    /// Alternation failed.
    Failed,
}

/// Full result of a separation check, zero lists included.
#[derive(Debug, Clone)]
pub struct SeparationReport<T> {
    pub energy: T,
    pub zeros_u: Vec<T>,
    pub zeros_w: Vec<T>,
    pub verdict: SeparationVerdict,
}

/// Integrate two linearly independent solutions at energy E (u with
/// u(-a)=0, u'(-a)=1; w with w(-a)=1, w'(-a)=0) and check that their
/// interior zeros strictly alternate.
pub fn verify_separation<T: Real>(grid: &Grid<T>, energy: T) -> SeparationReport<T> {
    let u = numerov_integrate(grid, energy);

    // w seeded by a Taylor step: w(x0+dx) = 1 + dx^2/2 (V0 - E) + O(dx^4)
    let dx = grid.dx();
    let two = real::<T>(2.0);
    let w1 = T::one() + dx * dx / two * (grid.v()[0] - energy);
    let w = numerov_integrate_seeded(grid, energy, T::one(), w1);

    // No noise floor here: raw shooting solutions grow toward the wall, so
    // a max-relative floor would mask genuine zeros where the amplitude is
    // still small.
    let min_sep = dx + dx;
    let zeros_u = zero_crossings(&u, grid, min_sep, T::zero());
    let zeros_w = zero_crossings(&w, grid, min_sep, T::zero());

    let verdict = if zeros_u.len() < 2 || zeros_w.len() < 2 {
        SeparationVerdict::Vacuous
    } else {
        // Alternation with a coincidence tolerance. When the walls sit deep
        // in a classically forbidden region, both solutions in the allowed
        // region are dominated by the same grown mode and their zeros can
        // agree to near machine precision; exact alternation still holds in
        // exact arithmetic, so a zero of one solution within tol of a zero
        // of the other is accepted as an (unresolvable) alternation point.
        let tol = dx * dx;
        let alternates = |za: &[T], zb: &[T]| {
            za.windows(2).all(|p| {
                let (lo, hi) = (p[0], p[1]);
                let strict = zb.iter().filter(|&&z| lo + tol < z && z < hi - tol).count();
                let near = zb
                    .iter()
                    .any(|&z| (z - lo).abs() <= tol || (z - hi).abs() <= tol);
                strict == 1 || (strict == 0 && near)
            })
        };
        if alternates(&zeros_u, &zeros_w) && alternates(&zeros_w, &zeros_u) {
            SeparationVerdict::Alternating
        } else {
            SeparationVerdict::Failed
        }
    };
    SeparationReport {
        energy,
        zeros_u,
        zeros_w,
        verdict,
    }
}

/// Flag grid points where the wavefunction and its derivative are both near
/// zero relative to their maxima. For a genuine eigenfunction this list is
/// empty: value and slope vanishing together force the identically zero
/// solution.
pub fn detect_critical_touch<T: Real>(pair: &Eigenpair<T>, tol: T) -> Vec<T> {
    let psi = &pair.psi;
    let deriv = pair.derivative();
    let n = psi.len();
    let max_psi = psi.iter().fold(T::zero(), |m, p| m.max(p.abs()));
    let max_d = deriv.iter().fold(T::zero(), |m, p| m.max(p.abs()));
    if max_psi == T::zero() {
        return (1..n - 1).map(|i| pair.grid.x(i)).collect();
    }
    // A touch is an interior *dip*: value and slope both near zero with the
    // function rising above the tolerance on both sides. The decaying tails
    // near the walls sit below tolerance too, but with nothing beyond them
    // they are ordinary boundary decay, not a tangential touch.
    let cut = tol * max_psi;
    let above_left: Vec<bool> = {
        let mut seen = false;
        psi.iter()
            .map(|p| {
                let was = seen;
                seen |= p.abs() > cut;
                was
            })
            .collect()
    };
    let mut seen = false;
    let above_right: Vec<bool> = {
        let mut v: Vec<bool> = psi
            .iter()
            .rev()
            .map(|p| {
                let was = seen;
                seen |= p.abs() > cut;
                was
            })
            .collect();
        v.reverse();
        v
    };
    let mut flagged = Vec::new();
    for i in 1..n - 1 {
        if psi[i].abs() <= cut
            && deriv[i].abs() <= tol * max_d
            && above_left[i]
            && above_right[i]
        {
            flagged.push(pair.grid.x(i));
        }
    }
    flagged
}

/// Default relative tolerance for [`detect_critical_touch`].
pub fn default_touch_tol<T: Real>() -> T {
    real(1e-5)
}
