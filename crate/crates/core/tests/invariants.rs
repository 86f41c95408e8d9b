//! Cross-module invariants on the full catalog of potentials: node counts,
//! interlacing, orthonormality, cross-solver agreement, separation at random
//! energies, and the integrated Wronskian identity.

use std::sync::LazyLock;

use sturmwell::grid::Grid;
use sturmwell::nodes::{
    detect_critical_touch, find_nodes, verify_interlacing, verify_separation, SeparationVerdict,
};
use sturmwell::potential::PotentialSpec;
use sturmwell::solver::{solve_state, Eigenpair, SolveOptions};
use sturmwell::tridiag::matrix_oracle;
use sturmwell::wronskian::{check_integral_identity, wronskian_series};

const N_POINTS: usize = 4001;
const N_STATES: usize = 10;

struct Setup {
    name: &'static str,
    grid: Grid<f64>,
    /// Numerov eigenpairs for n = 1..=N_STATES.
    shooting: Vec<Eigenpair<f64>>,
    /// Finite-difference oracle eigenpairs for the same states.
    matrix: Vec<Eigenpair<f64>>,
}

fn build(name: &'static str, spec: PotentialSpec<f64>, a: f64) -> Setup {
    let wp = spec.wall(a).unwrap();
    let grid = Grid::new(&wp, N_POINTS).unwrap();
    let shooting = (1..=N_STATES)
        .map(|n| solve_state(&grid, n, &SolveOptions::default()).unwrap())
        .collect();
    let matrix = matrix_oracle(&grid, N_STATES).unwrap();
    Setup {
        name,
        grid,
        shooting,
        matrix,
    }
}

static CATALOG: LazyLock<Vec<Setup>> = LazyLock::new(|| {
    vec![
        build("zero", PotentialSpec::Zero, 1.0),
        build("harmonic", PotentialSpec::harmonic(1.0).unwrap(), 8.0),
        build("square_well", PotentialSpec::square_well(4.0, 1.0).unwrap(), 10.0),
        build("double_well", PotentialSpec::double_well(1.0, 5.0).unwrap(), 6.0),
    ]
});

#[test]
fn node_theorem_for_both_solvers() {
    for s in CATALOG.iter() {
        for pair in s.shooting.iter().chain(&s.matrix) {
            let count = find_nodes(pair).count();
            assert_eq!(
                count,
                pair.n - 1,
                "{}: state {} ({}) has {} nodes",
                s.name,
                pair.n,
                pair.solver_tag,
                count
            );
        }
    }
}

#[test]
fn interlacing_for_all_pairs() {
    for s in CATALOG.iter() {
        for n1 in 1..8 {
            for n2 in (n1 + 1)..=8 {
                let rep = verify_interlacing(&s.shooting[n1 - 1], &s.shooting[n2 - 1]).unwrap();
                assert!(rep.passed, "{}: pair ({n1}, {n2}) failed interlacing", s.name);
            }
        }
    }
}

#[test]
fn energies_strictly_ordered() {
    for s in CATALOG.iter() {
        for states in [&s.shooting, &s.matrix] {
            for w in states.windows(2) {
                assert!(
                    w[0].energy < w[1].energy,
                    "{}: E_{} = {} !< E_{} = {}",
                    s.name,
                    w[0].n,
                    w[0].energy,
                    w[1].n,
                    w[1].energy
                );
            }
        }
    }
}

#[test]
fn lowest_states_orthonormal() {
    for s in CATALOG.iter() {
        for i in 0..5 {
            for j in 0..5 {
                let g = s.grid.inner(&s.shooting[i].psi, &s.shooting[j].psi);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (g - expect).abs() < 1e-6,
                    "{}: <psi_{}|psi_{}> = {}",
                    s.name,
                    i + 1,
                    j + 1,
                    g
                );
            }
        }
    }
}

#[test]
fn solvers_agree_on_energies_and_nodes() {
    for s in CATALOG.iter() {
        let dx2 = s.grid.dx() * s.grid.dx();
        for (p, q) in s.shooting.iter().zip(&s.matrix).take(5) {
            let e = p.energy.abs();
            // Leading discretization gap of the second-order oracle vs the
            // fourth-order shooting solver is E^2 dx^2 / 12; the flat
            // 5 (|E| + 1) dx^2 term covers the potential-dependent remainder.
            let tol = dx2 * (e * e / 12.0 + 5.0 * (e + 1.0));
            assert!(
                (p.energy - q.energy).abs() < tol,
                "{}: state {}: shooting {} vs matrix {} (tol {tol:.3e})",
                s.name,
                p.n,
                p.energy,
                q.energy
            );
            let np = find_nodes(p);
            let nq = find_nodes(q);
            assert_eq!(np.count(), nq.count(), "{}: state {} node sets differ", s.name, p.n);
            for (a, b) in np.positions.iter().zip(&nq.positions) {
                assert!(
                    (a - b).abs() < 2.0 * np.refinement_tol + 1e-6,
                    "{}: state {}: node {a} vs {b}",
                    s.name,
                    p.n
                );
            }
        }
    }
}

#[test]
fn separation_holds_at_random_energies() {
    // deterministic LCG (numerical recipes constants); energies span
    // [v_min, v_min + 40] which covers several oscillatory states everywhere
    let mut state: u64 = 0x9e3779b97f4a7c15;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for s in CATALOG.iter() {
        let v_min = s.grid.v_min();
        for _ in 0..20 {
            let e = v_min + 40.0 * next();
            let rep = verify_separation(&s.grid, e);
            assert_ne!(
                rep.verdict,
                SeparationVerdict::Failed,
                "{}: separation failed at E = {e}",
                s.name
            );
        }
    }
}

#[test]
fn integral_identity_on_every_interval() {
    for s in CATALOG.iter() {
        for n1 in 1..5 {
            for n2 in (n1 + 1)..=5 {
                let rep =
                    check_integral_identity(&s.shooting[n1 - 1], &s.shooting[n2 - 1]).unwrap();
                assert!(
                    rep.max_abs_diff() < 1e-4,
                    "{}: pair ({n1}, {n2}) max |LHS - RHS| = {:.3e}",
                    s.name,
                    rep.max_abs_diff()
                );
                assert!(
                    rep.all_witnesses_found(),
                    "{}: pair ({n1}, {n2}) missing an interlacing witness",
                    s.name
                );
            }
        }
    }
}

#[test]
fn wronskian_vanishes_at_walls() {
    for s in CATALOG.iter() {
        let w = wronskian_series(&s.shooting[0], &s.shooting[1]).unwrap();
        assert!(w.values[0].abs() < 1e-8, "{}: W(-a) = {}", s.name, w.values[0]);
        assert!(
            w.values[N_POINTS - 1].abs() < 1e-8,
            "{}: W(a) = {}",
            s.name,
            w.values[N_POINTS - 1]
        );
    }
}

#[test]
fn no_critical_touches_on_catalog_states() {
    for s in CATALOG.iter() {
        for pair in s.shooting.iter().chain(&s.matrix) {
            let flagged = detect_critical_touch(pair, 1e-5);
            assert!(
                flagged.is_empty(),
                "{}: state {} ({}) flagged at {:?}",
                s.name,
                pair.n,
                pair.solver_tag,
                &flagged[..flagged.len().min(3)]
            );
        }
    }
}
