//! Closed-form Cauchy transforms, Stieltjes inversion and quadrature checks.
//!
//! The only floating-point module; nothing here feeds back into the exact code.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{moments_of, CatalogMeasure};
use crate::series::{format_rational, rational_to_f64, Rational};

/// Default `ε` for density samples and atom estimates.
pub const DEFAULT_EPSILON: f64 = 1e-6;
/// Absolute tolerance handed to adaptive Simpson (scaled by the size of the integral).
pub const QUADRATURE_TOL: f64 = 1e-9;
const MAX_DEPTH: u32 = 48;
// Levels subdivided unconditionally, so symmetric integrands cannot fake convergence.
const MIN_DEPTH: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClosedFormG {
    G2,
    G3,
    G4Plus,
    Cube,
    TwoRectangles,
}

impl ClosedFormG {
    pub const ALL: [ClosedFormG; 5] =
        [ClosedFormG::G2, ClosedFormG::G3, ClosedFormG::G4Plus, ClosedFormG::Cube, ClosedFormG::TwoRectangles];

    pub fn name(self) -> &'static str {
        match self {
            ClosedFormG::G2 => "g2",
            ClosedFormG::G3 => "g3",
            ClosedFormG::G4Plus => "g4plus",
            ClosedFormG::Cube => "cube",
            ClosedFormG::TwoRectangles => "two_rectangles",
        }
    }

    /// The catalog measure whose exact moments this transform generates.
    pub fn measure(self) -> CatalogMeasure {
        match self {
            ClosedFormG::G2 => CatalogMeasure::Eta(2),
            ClosedFormG::G3 => CatalogMeasure::Eta(3),
            ClosedFormG::G4Plus => CatalogMeasure::Eta(4),
            ClosedFormG::Cube => CatalogMeasure::Cube,
            ClosedFormG::TwoRectangles => CatalogMeasure::TwoRectangles,
        }
    }

    /// Atoms `(location, weight)`, read off as residues of the closed form.
    pub fn atoms(self) -> Vec<(f64, f64)> {
        match self {
            ClosedFormG::G2 => vec![(0.0, 0.5), (2.0, 0.5)],
            ClosedFormG::G3 => vec![(0.0, 2.0 / 6.0), (1.0, 3.0 / 6.0), (3.0, 1.0 / 6.0)],
            ClosedFormG::G4Plus => Vec::new(),
            ClosedFormG::Cube => vec![(0.0, 0.5)],
            ClosedFormG::TwoRectangles => vec![(0.0, 0.75)],
        }
    }

    /// Interval carrying the absolutely continuous part, if any.
    pub fn continuous_support(self) -> Option<(f64, f64)> {
        let r12 = 12f64.sqrt();
        match self {
            ClosedFormG::G2 | ClosedFormG::G3 => None,
            ClosedFormG::G4Plus => Some((0.0, 4.0)),
            ClosedFormG::Cube => Some((0.0, 8.0)),
            ClosedFormG::TwoRectangles => Some((4.0 - r12, 4.0 + r12)),
        }
    }

    /// Smallest interval containing every atom and the continuous support.
    pub fn support_hull(self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, _) in self.atoms() {
            lo = lo.min(a);
            hi = hi.max(a);
        }
        if let Some((a, b)) = self.continuous_support() {
            lo = lo.min(a);
            hi = hi.max(b);
        }
        (lo, hi)
    }

    fn on_support(self, x: f64) -> bool {
        self.atoms().iter().any(|(a, _)| *a == x)
            || self.continuous_support().is_some_and(|(a, b)| a <= x && x <= b)
    }

    /// Raw evaluation. Square roots of quadratics are written as products of
    /// principal roots, `sqrt(ξ-a)·sqrt(ξ-b)`, which is the branch with `G ~ 1/ξ`.
    fn eval_raw(self, xi: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match self {
            ClosedFormG::G2 => 0.5 * (one / xi + one / (xi - 2.0)),
            ClosedFormG::G3 => (2.0 / xi + 3.0 / (xi - 1.0) + 1.0 / (xi - 3.0)) / 6.0,
            ClosedFormG::G4Plus => (xi - xi.sqrt() * (xi - 4.0).sqrt()) / (2.0 * xi),
            ClosedFormG::Cube => (xi + 4.0 - xi.sqrt() * (xi - 8.0).sqrt()) / (8.0 * xi),
            ClosedFormG::TwoRectangles => {
                let r12 = 12f64.sqrt();
                let root = (xi - (4.0 - r12)).sqrt() * (xi - (4.0 + r12)).sqrt();
                (10.0 - xi - root) / (2.0 * xi * (8.0 - xi))
            }
        }
    }
}

impl fmt::Display for ClosedFormG {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClosedFormG {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ClosedFormG::ALL
            .into_iter()
            .find(|g| g.name() == s.trim())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown closed form `{s}` (g2, g3, g4plus, cube, two_rectangles)")))
    }
}

/// `G(ξ)`; real `ξ` on the support is rejected.
pub fn eval_cauchy(g: ClosedFormG, xi: Complex64) -> Result<Complex64> {
    if xi.im == 0.0 && g.on_support(xi.re) {
        return Err(Error::EvaluationOnSupport(xi.re));
    }
    Ok(g.eval_raw(xi))
}

/// `-Im G(x + iε) / π`.
pub fn stieltjes_density(g: ClosedFormG, x: f64, epsilon: f64) -> f64 {
    -g.eval_raw(Complex64::new(x, epsilon)).im / std::f64::consts::PI
}

/// Boundary value `-Im G(x + i0⁺) / π` of the continuous part.
pub fn boundary_density(g: ClosedFormG, x: f64) -> f64 {
    match g.continuous_support() {
        Some((a, b)) if a < x && x < b => -g.eval_raw(Complex64::new(x, 0.0)).im / std::f64::consts::PI,
        _ => 0.0,
    }
}

/// Atom weight at `a` from the simple-pole residue, `ε |G(a + iε)|`.
pub fn estimate_atom(g: ClosedFormG, a: f64, epsilon: f64) -> f64 {
    epsilon * g.eval_raw(Complex64::new(a, epsilon)).norm()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DensitySample {
    pub x: f64,
    pub density: f64,
}

/// `samples` equally spaced points over the support hull, density at `epsilon`.
pub fn sample_density(g: ClosedFormG, samples: usize, epsilon: f64) -> Vec<DensitySample> {
    let (lo, hi) = g.support_hull();
    let step = if samples > 1 { (hi - lo) / (samples - 1) as f64 } else { 0.0 };
    (0..samples)
        .map(|i| {
            let x = lo + step * i as f64;
            DensitySample { x, density: stieltjes_density(g, x, epsilon) }
        })
        .collect()
}

pub fn samples_to_csv(samples: &[DensitySample]) -> String {
    let mut out = String::from("x,density\n");
    for s in samples {
        out.push_str(&format!("{},{}\n", s.x, s.density));
    }
    out
}

/// Largest `Im G(x + iε)` over the grid; the chosen branch is Herglotz iff this is `<= 0`.
pub fn herglotz_max_imag(g: ClosedFormG, xs: &[f64], epsilons: &[f64]) -> f64 {
    xs.iter()
        .flat_map(|&x| epsilons.iter().map(move |&e| g.eval_raw(Complex64::new(x, e)).im))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Adaptive Simpson on `[a, b]`; the tolerance is absolute, scaled by the
/// magnitude of the coarse estimate when that exceeds one.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let tol = tol * whole.abs().max(1.0);
    simpson_step(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(Error::QuadratureNonConvergence);
    }
    if MAX_DEPTH - depth >= MIN_DEPTH && delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureNonConvergence);
    }
    Ok(simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

/// `∫ x^k dμ_ac` over the continuous support, after `x = a + (b-a) sin²θ`,
/// which turns both square-root endpoint behaviours into smooth integrands.
pub fn continuous_moment(g: ClosedFormG, k: u32) -> Result<f64> {
    let Some((a, b)) = g.continuous_support() else {
        return Ok(0.0);
    };
    let integrand = |theta: f64| {
        let s = theta.sin();
        let x = a + (b - a) * s * s;
        let jac = (b - a) * (2.0 * theta).sin();
        x.powi(k as i32) * boundary_density(g, x) * jac
    };
    // Stay a hair inside the endpoints so the pole at x = 0 is never evaluated.
    let margin = 1e-9;
    adaptive_simpson(integrand, margin, std::f64::consts::FRAC_PI_2 - margin, QUADRATURE_TOL)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentCheck {
    pub closed_form: &'static str,
    pub k: u32,
    pub numeric: f64,
    #[serde(serialize_with = "ser_rational")]
    pub exact: Rational,
    pub pass: bool,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

/// Quadrature moment plus atom contributions, against the exact moment.
pub fn density_moment_check(g: ClosedFormG, k: u32, tol: f64) -> Result<MomentCheck> {
    if k > 8 {
        return Err(Error::InvalidParameter(format!("moment check limited to k <= 8, got {k}")));
    }
    let atoms: f64 = g.atoms().iter().map(|(a, w)| w * a.powi(k as i32)).sum();
    let numeric = continuous_moment(g, k)? + atoms;
    let exact = moments_of(&g.measure(), k as usize)?.get(k as usize).clone();
    let pass = (numeric - rational_to_f64(&exact)).abs() < tol;
    Ok(MomentCheck { closed_form: g.name(), k, numeric, exact, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluation_examples() {
        let v = eval_cauchy(ClosedFormG::G4Plus, c(1e6, 0.0)).unwrap();
        assert!((v.re - 1e-6).abs() < 1e-9 && v.im.abs() < 1e-12);
        let v = eval_cauchy(ClosedFormG::G2, c(4.0, 0.0)).unwrap();
        assert!((v.re - 0.375).abs() < 1e-12);
        let v = eval_cauchy(ClosedFormG::Cube, c(-1.0, 0.0)).unwrap();
        assert!((v.re + 0.75).abs() < 1e-12 && v.im.abs() < 1e-12, "{v}");
        assert_eq!(eval_cauchy(ClosedFormG::Cube, c(3.0, 0.0)), Err(Error::EvaluationOnSupport(3.0)));
        assert_eq!(eval_cauchy(ClosedFormG::G2, c(2.0, 0.0)), Err(Error::EvaluationOnSupport(2.0)));
        assert!(eval_cauchy(ClosedFormG::G2, c(1.0, 0.0)).is_ok());
    }

    #[test]
    fn one_over_xi_at_infinity() {
        for g in ClosedFormG::ALL {
            let v = g.eval_raw(c(1e6, 0.0));
            assert!((v.re * 1e6 - 1.0).abs() < 1e-3, "{g}: {v}");
        }
    }

    #[test]
    fn density_examples() {
        let d = stieltjes_density(ClosedFormG::G4Plus, 1.0, 1e-8);
        assert!((d - 3f64.sqrt() / (2.0 * PI)).abs() < 1e-4);
        let d = stieltjes_density(ClosedFormG::Cube, 4.0, 1e-8);
        assert!((d - 1.0 / (8.0 * PI)).abs() < 1e-4, "{d}");
        assert!(stieltjes_density(ClosedFormG::TwoRectangles, 10.0, 1e-8).abs() < 1e-4);
        assert!((boundary_density(ClosedFormG::Cube, 4.0) - 1.0 / (8.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn atoms_by_residue() {
        for g in [ClosedFormG::G2, ClosedFormG::G3] {
            for (a, w) in g.atoms() {
                assert!((estimate_atom(g, a, DEFAULT_EPSILON) - w).abs() < 1e-4, "{g} at {a}");
            }
            let (lo, hi) = g.support_hull();
            let mut x = lo - 0.5;
            while x <= hi + 0.5 {
                if g.atoms().iter().all(|(a, _)| (x - a).abs() >= 0.1) {
                    assert!(stieltjes_density(g, x, DEFAULT_EPSILON) < 1e-3);
                }
                x += 0.01;
            }
        }
        let w = estimate_atom(ClosedFormG::TwoRectangles, 0.0, DEFAULT_EPSILON);
        assert!((w - 0.75).abs() < 1e-4, "{w}");
    }

    #[test]
    fn moment_examples() {
        assert!(density_moment_check(ClosedFormG::G4Plus, 2, 1e-6).unwrap().pass);
        assert!(density_moment_check(ClosedFormG::Cube, 0, 1e-6).unwrap().pass);
        assert!(density_moment_check(ClosedFormG::TwoRectangles, 3, 1e-5).unwrap().pass);
        assert!(density_moment_check(ClosedFormG::Cube, 9, 1e-6).is_err());
    }

    #[test]
    fn moments_up_to_six() {
        for g in ClosedFormG::ALL {
            for k in 0..=6 {
                let r = density_moment_check(g, k, 1e-5).unwrap();
                assert!(r.pass, "{g} k={k}: {} vs {}", r.numeric, r.exact);
            }
        }
    }

    #[test]
    fn herglotz_and_samples() {
        let xs: Vec<f64> = (0..1000).map(|i| -2.0 + 14.0 * i as f64 / 999.0).collect();
        for g in ClosedFormG::ALL {
            assert!(herglotz_max_imag(g, &xs, &[1e-6, 1e-3, 1.0]) <= 0.0, "{g}");
            let s = sample_density(g, 1000, DEFAULT_EPSILON);
            assert_eq!(s.len(), 1000);
            assert!(s.iter().all(|p| p.density >= -1e-9));
        }
        let csv = samples_to_csv(&sample_density(ClosedFormG::Cube, 3, DEFAULT_EPSILON));
        assert!(csv.starts_with("x,density\n0,"));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn simpson_on_polynomial() {
        let v = adaptive_simpson(|x| x * x, 0.0, 3.0, 1e-12).unwrap();
        assert!((v - 9.0).abs() < 1e-12);
    }
}
