//! Base potentials and the walled family V_a.
//!
//! A [`PotentialSpec`] is an analytic description of V(x) on the whole real
//! line. A [`WalledPotential`] restricts it to [-a, a] with hard walls,
//! represented as Dirichlet boundary conditions rather than large finite
//! potential values. All quantities use units where hbar^2/2m = 1, so energy
//! carries units of 1/length^2.

use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Analytic description of a base potential V(x).
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec<T> {
    /// V(x) = 0 everywhere (the free particle; walled, it is the infinite well).
    Zero,
    /// V(x) = k x^2, k > 0 in units of 1/length^4.
    Harmonic { stiffness: T },
    /// V(x) = -depth for |x| < half_width, 0 otherwise.
    SquareWell { depth: T, half_width: T },
    /// V(x) = c4 x^4 - c2 x^2 (symmetric double well).
    DoubleWell { c4: T, c2: T },
    /// Linear interpolation through ordered (x, V) points, clamped to the
    /// endpoint values outside the data range.
    PiecewiseLinear { points: Vec<(T, T)> },
}

impl<T: Real> PotentialSpec<T> {
    pub fn harmonic(stiffness: T) -> Result<Self> {
        if !(stiffness > T::zero()) {
            return Err(Error::invalid("harmonic stiffness must be > 0"));
        }
        Ok(PotentialSpec::Harmonic { stiffness })
    }

    pub fn square_well(depth: T, half_width: T) -> Result<Self> {
        if !(depth > T::zero()) {
            return Err(Error::invalid("square well depth must be > 0"));
        }
        if !(half_width > T::zero()) {
            return Err(Error::invalid("square well half-width must be > 0"));
        }
        Ok(PotentialSpec::SquareWell { depth, half_width })
    }

    pub fn double_well(c4: T, c2: T) -> Result<Self> {
        if !(c4 > T::zero()) || !(c2 > T::zero()) {
            return Err(Error::invalid("double well coefficients must be > 0"));
        }
        Ok(PotentialSpec::DoubleWell { c4, c2 })
    }

    /// Build a piecewise-linear potential. Requires at least two points and
    /// strictly increasing x-coordinates; malformed data is rejected here so
    /// that evaluation is total.
    pub fn piecewise_linear(points: Vec<(T, T)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("piecewise potential needs at least 2 points"));
        }
        for pair in points.windows(2) {
            if !(pair[1].0 > pair[0].0) {
                return Err(Error::invalid(
                    "piecewise potential x-coordinates must be strictly increasing",
                ));
            }
        }
        if points.iter().any(|&(x, v)| !x.is_finite() || !v.is_finite()) {
            return Err(Error::invalid("piecewise potential data must be finite"));
        }
        Ok(PotentialSpec::PiecewiseLinear { points })
    }

    /// Load a piecewise-linear potential from a two-column CSV file (x, V).
    /// A header line is allowed and skipped when its first field is not a number.
    pub fn piecewise_from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split(',').map(str::trim);
            let (xs, vs) = match (fields.next(), fields.next()) {
                (Some(x), Some(v)) => (x, v),
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: expected two comma-separated columns",
                        lineno + 1
                    )))
                }
            };
            match (xs.parse::<f64>(), vs.parse::<f64>()) {
                (Ok(x), Ok(v)) => points.push((crate::scalar::real(x), crate::scalar::real(v))),
                _ if lineno == 0 => continue, // header
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: could not parse '{}' as numbers",
                        lineno + 1,
                        line
                    )))
                }
            }
        }
        Self::piecewise_linear(points)
    }

    /// Evaluate V(x). Total over all real x; piecewise data is clamped to its
    /// endpoint values outside the tabulated range.
    pub fn evaluate(&self, x: T) -> T {
        match self {
            PotentialSpec::Zero => T::zero(),
            PotentialSpec::Harmonic { stiffness } => *stiffness * x * x,
            PotentialSpec::SquareWell { depth, half_width } => {
                if x.abs() < *half_width {
                    -*depth
                } else {
                    T::zero()
                }
            }
            PotentialSpec::DoubleWell { c4, c2 } => {
                let x2 = x * x;
                *c4 * x2 * x2 - *c2 * x2
            }
            PotentialSpec::PiecewiseLinear { points } => {
                let first = points[0];
                let last = points[points.len() - 1];
                if x <= first.0 {
                    return first.1;
                }
                if x >= last.0 {
                    return last.1;
                }
                // invariant: first.0 < x < last.0, x-coords strictly increasing
                let idx = points.partition_point(|&(px, _)| px < x);
                let (x0, v0) = points[idx - 1];
                let (x1, v1) = points[idx];
                let t = (x - x0) / (x1 - x0);
                v0 + t * (v1 - v0)
            }
        }
    }

    /// liminf of V(x) as |x| -> infinity; energies below it are bound.
    /// Returns `T::infinity()` for confining potentials.
    pub fn continuum_threshold(&self) -> T {
        match self {
            PotentialSpec::Zero | PotentialSpec::SquareWell { .. } => T::zero(),
            PotentialSpec::Harmonic { .. } | PotentialSpec::DoubleWell { .. } => T::infinity(),
            PotentialSpec::PiecewiseLinear { points } => {
                let left = points[0].1;
                let right = points[points.len() - 1].1;
                left.min(right)
            }
        }
    }

    /// Restrict the potential to [-a, a] with hard walls.
    pub fn wall(&self, half_width: T) -> Result<WalledPotential<T>> {
        WalledPotential::new(self.clone(), half_width)
    }

    /// Jump discontinuities of V as (location, mean of one-sided limits).
    /// Grid sampling replaces a sample landing exactly on a jump by the mean,
    /// which keeps the discretization second-order accurate across it.
    pub fn jump_points(&self) -> Vec<(T, T)> {
        match self {
            PotentialSpec::SquareWell { depth, half_width } => {
                let mean = -*depth / (T::one() + T::one());
                vec![(-*half_width, mean), (*half_width, mean)]
            }
            _ => Vec::new(),
        }
    }
}

/// A base potential truncated by infinite walls at x = +-a.
///
/// The walls are realized as the Dirichlet conditions psi(-a) = psi(a) = 0;
/// the potential itself is only meaningful on [-a, a].
#[derive(Debug, Clone, PartialEq)]
pub struct WalledPotential<T> {
    base: PotentialSpec<T>,
    half_width: T,
}

impl<T: Real> WalledPotential<T> {
    pub fn new(base: PotentialSpec<T>, half_width: T) -> Result<Self> {
        if !(half_width > T::zero()) || !half_width.is_finite() {
            return Err(Error::invalid("wall half-width must be finite and > 0"));
        }
        Ok(WalledPotential { base, half_width })
    }

    pub fn base(&self) -> &PotentialSpec<T> {
        &self.base
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    /// Evaluate the potential inside the walls. Queries outside [-a, a] are
    /// errors: the exterior is not part of the domain.
    pub fn evaluate(&self, x: T) -> Result<T> {
        if x.abs() > self.half_width {
            return Err(Error::precondition(format!(
                "x = {x} is outside the walled domain [-{a}, {a}]",
                a = self.half_width
            )));
        }
        Ok(self.base.evaluate(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type P = PotentialSpec<f64>;

    #[test]
    fn harmonic_evaluate() {
        let p = P::harmonic(1.0).unwrap();
        assert_eq!(p.evaluate(2.0), 4.0);
    }

    #[test]
    fn square_well_inside() {
        let p = P::square_well(4.0, 1.0).unwrap();
        assert_eq!(p.evaluate(0.5), -4.0);
        assert_eq!(p.evaluate(1.5), 0.0);
    }

    #[test]
    fn zero_everywhere() {
        assert_eq!(P::Zero.evaluate(17.3), 0.0);
    }

    #[test]
    fn wall_interior_matches_base() {
        let w = P::Zero.wall(1.0).unwrap();
        assert_eq!(w.evaluate(0.0).unwrap(), 0.0);
        let w = P::harmonic(1.0).unwrap().wall(8.0).unwrap();
        assert_eq!(w.evaluate(3.0).unwrap(), 9.0);
    }

    #[test]
    fn wall_rejects_bad_width() {
        assert!(P::Zero.wall(-1.0).is_err());
        assert!(P::Zero.wall(0.0).is_err());
    }

    #[test]
    fn wall_rejects_exterior_query() {
        let w = P::Zero.wall(1.0).unwrap();
        assert!(w.evaluate(1.5).is_err());
    }

    #[test]
    fn continuum_thresholds() {
        assert_eq!(P::square_well(4.0, 1.0).unwrap().continuum_threshold(), 0.0);
        assert_eq!(P::Zero.continuum_threshold(), 0.0);
        assert!(P::harmonic(1.0).unwrap().continuum_threshold().is_infinite());
        assert!(P::double_well(1.0, 5.0).unwrap().continuum_threshold().is_infinite());
        let pw = P::piecewise_linear(vec![(-1.0, 2.0), (0.0, -5.0), (1.0, 3.0)]).unwrap();
        assert_eq!(pw.continuum_threshold(), 2.0);
    }

    #[test]
    fn piecewise_interpolation_and_clamp() {
        let pw = P::piecewise_linear(vec![(-1.0, 2.0), (0.0, -5.0), (1.0, 3.0)]).unwrap();
        assert_eq!(pw.evaluate(-0.5), -1.5);
        assert_eq!(pw.evaluate(0.5), -1.0);
        assert_eq!(pw.evaluate(-10.0), 2.0);
        assert_eq!(pw.evaluate(10.0), 3.0);
    }

    #[test]
    fn piecewise_rejects_non_increasing() {
        assert!(P::piecewise_linear(vec![(0.0, 1.0), (0.0, 2.0)]).is_err());
        assert!(P::piecewise_linear(vec![(1.0, 1.0), (0.0, 2.0)]).is_err());
        assert!(P::piecewise_linear(vec![(0.0, 1.0)]).is_err());
    }

    #[test]
    fn piecewise_csv_roundtrip() {
        let dir = std::env::temp_dir();
        let path = dir.join("sturmwell_test_potential.csv");
        std::fs::write(&path, "x,V\n-1.0,2.0\n0.0,-5.0\n1.0,3.0\n").unwrap();
        let pw = P::piecewise_from_csv(&path).unwrap();
        assert_eq!(pw.evaluate(0.0), -5.0);
        std::fs::write(&path, "-1.0,2.0\n0.5,-5.0\n").unwrap();
        let pw = P::piecewise_from_csv(&path).unwrap();
        assert_eq!(pw.evaluate(0.5), -5.0);
        std::fs::write(&path, "0.0,1.0\n-1.0,2.0\n").unwrap();
        assert!(P::piecewise_from_csv(&path).is_err());
        std::fs::remove_file(&path).ok();
    }

    proptest! {
        #[test]
        fn catalog_variants_are_even(x in -50.0f64..50.0) {
            let specs = [
                P::Zero,
                P::harmonic(1.3).unwrap(),
                P::square_well(4.0, 1.0).unwrap(),
                P::double_well(1.0, 5.0).unwrap(),
            ];
            for p in &specs {
                prop_assert_eq!(p.evaluate(x), p.evaluate(-x));
            }
        }

        #[test]
        fn wall_then_evaluate_is_bit_identical(x in -1.0f64..=1.0) {
            let specs = [
                P::Zero,
                P::harmonic(2.0).unwrap(),
                P::square_well(4.0, 0.5).unwrap(),
                P::double_well(1.0, 5.0).unwrap(),
            ];
            for p in &specs {
                let w = p.wall(1.0).unwrap();
                prop_assert_eq!(w.evaluate(x).unwrap().to_bits(), p.evaluate(x).to_bits());
            }
        }
    }
}
