//! Second-order Taylor approximation of the equal-power boundary as a conic
//! a x² + 2b xy + c y² + 2d x + 2f y + g = 0, and ellipse extraction.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::shapes::{Ellipse, Point2};

/// How the conic coefficients are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ConicMode {
    /// Quadratic Taylor polynomial substituted into the boundary equation
    /// and expanded monomial by monomial.
    #[default]
    Expansion,
    /// The published closed-form coefficient list, taken verbatim.
    Paper,
}

impl ConicMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConicMode::Expansion => "expansion",
            ConicMode::Paper => "paper",
        }
    }
}

impl fmt::Display for ConicMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConicMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "expansion" => Ok(ConicMode::Expansion),
            "paper" => Ok(ConicMode::Paper),
            other => Err(Error::Config(format!("unknown conic mode `{other}`"))),
        }
    }
}

/// Conic coefficients plus the quantities derived from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConicCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub f: f64,
    pub g: f64,
    /// Stationary point of the quadratic, ((cd - bf), (af - bd)) / (b² - ac).
    pub center: Point2,
    /// Constant term after translating to the center.
    pub h: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

impl ConicCoefficients {
    /// Completes the derived fields. Fails unless b² - ac < 0.
    pub fn from_general(a: f64, b: f64, c: f64, d: f64, f: f64, g: f64) -> Result<Self> {
        let disc = b * b - a * c;
        if !(disc < 0.0) {
            return Err(Error::NotAnEllipse(disc));
        }
        let center = Point2::new((c * d - b * f) / disc, (a * f - b * d) / disc);
        let h = g - a * center.x * center.x - 2.0 * b * center.x * center.y - c * center.y * center.y;
        let (lambda_min, lambda_max) = quadratic_form_eigen(a, b, c);
        Ok(Self {
            a,
            b,
            c,
            d,
            f,
            g,
            center,
            h,
            lambda_min,
            lambda_max,
        })
    }

    pub fn evaluate(&self, p: Point2) -> f64 {
        self.a * p.x * p.x
            + 2.0 * self.b * p.x * p.y
            + self.c * p.y * p.y
            + 2.0 * self.d * p.x
            + 2.0 * self.f * p.y
            + self.g
    }
}

/// Eigenvalues of [[a, b], [b, c]] from λ = [(a + c) ± √((a - c)² + 4b²)]/2,
/// ascending. The root of smaller magnitude is recovered from the
/// determinant to avoid cancellation.
pub fn quadratic_form_eigen(a: f64, b: f64, c: f64) -> (f64, f64) {
    let trace = a + c;
    let root = ((a - c) * (a - c) + 4.0 * b * b).sqrt();
    let det = a * c - b * b;
    let (big, small) = if trace >= 0.0 {
        let big = 0.5 * (trace + root);
        (big, if big != 0.0 { det / big } else { 0.5 * (trace - root) })
    } else {
        let big = 0.5 * (trace - root);
        (big, det / big)
    };
    if big >= small {
        (small, big)
    } else {
        (big, small)
    }
}

/// Quadratic polynomial in (x, y): [x², xy, y², x, y, 1].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
struct Poly2([f64; 6]);

impl Poly2 {
    const XX: usize = 0;
    const XY: usize = 1;
    const YY: usize = 2;
    const X: usize = 3;
    const Y: usize = 4;
    const ONE: usize = 5;

    fn constant(k: f64) -> Self {
        let mut p = Self::default();
        p.0[Self::ONE] = k;
        p
    }

    /// x - shift
    fn x_minus(shift: f64) -> Self {
        let mut p = Self::constant(-shift);
        p.0[Self::X] = 1.0;
        p
    }

    /// y - shift
    fn y_minus(shift: f64) -> Self {
        let mut p = Self::constant(-shift);
        p.0[Self::Y] = 1.0;
        p
    }

    fn scale(self, k: f64) -> Self {
        Self(self.0.map(|v| v * k))
    }

    fn add(self, other: Self) -> Self {
        let mut out = self.0;
        for (o, v) in out.iter_mut().zip(other.0) {
            *o += v;
        }
        Self(out)
    }

    /// Product of two affine polynomials.
    fn mul_affine(self, other: Self) -> Self {
        debug_assert!(self.0[..3].iter().chain(&other.0[..3]).all(|&v| v == 0.0));
        let (ax, ay, a1) = (self.0[Self::X], self.0[Self::Y], self.0[Self::ONE]);
        let (bx, by, b1) = (other.0[Self::X], other.0[Self::Y], other.0[Self::ONE]);
        let mut p = Self::default();
        p.0[Self::XX] = ax * bx;
        p.0[Self::XY] = ax * by + ay * bx;
        p.0[Self::YY] = ay * by;
        p.0[Self::X] = ax * b1 + a1 * bx;
        p.0[Self::Y] = ay * b1 + a1 * by;
        p.0[Self::ONE] = a1 * b1;
        p
    }
}

/// Value and derivatives up to second order of (x² + y²)^α̂ at a point.
#[derive(Debug, Clone, Copy)]
struct PowerLawJet {
    f: f64,
    fx: f64,
    fy: f64,
    fxx: f64,
    fxy: f64,
    fyy: f64,
}

impl PowerLawJet {
    fn at(alpha_hat: f64, p: Point2) -> Self {
        let (i, j) = (p.x, p.y);
        let s = i * i + j * j;
        let s1 = s.powf(alpha_hat - 1.0);
        let s2 = s.powf(alpha_hat - 2.0);
        let k = 2.0 * alpha_hat;
        Self {
            f: s.powf(alpha_hat),
            fx: k * i * s1,
            fy: k * j * s1,
            fxx: k * (s1 + 2.0 * (alpha_hat - 1.0) * i * i * s2),
            fxy: 2.0 * k * (alpha_hat - 1.0) * i * j * s2,
            fyy: k * (s1 + 2.0 * (alpha_hat - 1.0) * j * j * s2),
        }
    }
}

/// Raw (a, b, c, d, f, g) for either mode, with no ellipse checks.
pub(crate) fn raw_coefficients(
    w: f64,
    alpha_hat: f64,
    d_v: f64,
    expansion_point: Point2,
    mode: ConicMode,
) -> [f64; 6] {
    let (i, j) = (expansion_point.x, expansion_point.y);
    match mode {
        ConicMode::Expansion => {
            let jet = PowerLawJet::at(alpha_hat, expansion_point);
            let dx = Poly2::x_minus(i);
            let dy = Poly2::y_minus(j);
            let taylor = Poly2::constant(jet.f)
                .add(dx.scale(jet.fx))
                .add(dy.scale(jet.fy))
                .add(dx.mul_affine(dx).scale(0.5 * jet.fxx))
                .add(dx.mul_affine(dy).scale(jet.fxy))
                .add(dy.mul_affine(dy).scale(0.5 * jet.fyy));
            // (x - d_v)² + y²
            let drv_dist = Poly2::x_minus(d_v)
                .mul_affine(Poly2::x_minus(d_v))
                .add(Poly2::y_minus(0.0).mul_affine(Poly2::y_minus(0.0)));
            let conic = taylor.scale(w).add(drv_dist.scale(-1.0)).0;
            [
                conic[Poly2::XX],
                0.5 * conic[Poly2::XY],
                conic[Poly2::YY],
                0.5 * conic[Poly2::X],
                0.5 * conic[Poly2::Y],
                conic[Poly2::ONE],
            ]
        }
        ConicMode::Paper => {
            let s = i * i + j * j;
            let s1 = s.powf(alpha_hat - 1.0);
            let s2 = s.powf(alpha_hat - 2.0);
            let wa = w * alpha_hat;
            [
                wa * s1 + wa * (alpha_hat - 1.0) * 2.0 * i * i * s2 - 1.0,
                wa * (alpha_hat - 1.0) * i * j * s2,
                wa * s1 + wa * (alpha_hat - 1.0) * 2.0 * j * j * s2 - 1.0,
                wa * i * s1 + d_v,
                wa * j * s1,
                w * s.powf(alpha_hat) - d_v * d_v,
            ]
        }
    }
}

/// Conic approximating the sensing boundary of a DRV at (d_v, 0) by a
/// second-order Taylor expansion of (x² + y²)^α̂ about `expansion_point`.
pub fn taylor_conic(
    w: f64,
    alpha_hat: f64,
    d_v: f64,
    expansion_point: Point2,
    mode: ConicMode,
) -> Result<ConicCoefficients> {
    if !(alpha_hat > 0.0 && alpha_hat < 1.0) {
        return Err(Error::invalid("alpha_hat", format!("{alpha_hat} must lie in (0, 1)")));
    }
    if !(w > 0.0 && w < 1.0) {
        return Err(Error::invalid("w", format!("{w} must lie in (0, 1)")));
    }
    if !(d_v.is_finite() && d_v > 0.0) {
        return Err(Error::invalid("d_v", format!("{d_v} must be > 0")));
    }
    if expansion_point == Point2::ORIGIN || !expansion_point.is_finite() {
        return Err(Error::invalid("expansion_point", "must be finite and away from the BS"));
    }
    let [a, b, c, d, f, g] = raw_coefficients(w, alpha_hat, d_v, expansion_point, mode);
    let coeffs = ConicCoefficients::from_general(a, b, c, d, f, g)?;
    normalized_radicands(&coeffs)?;
    Ok(coeffs)
}

/// (|h|/λ_max, |h|/λ_min) once the quadratic form is made positive definite
/// and the translated constant negative.
fn normalized_radicands(k: &ConicCoefficients) -> Result<(f64, f64)> {
    let sign = if k.lambda_max > 0.0 { 1.0 } else { -1.0 };
    let (lmin, lmax) = if sign > 0.0 {
        (k.lambda_min, k.lambda_max)
    } else {
        (-k.lambda_max, -k.lambda_min)
    };
    if !(lmin > 0.0) {
        return Err(Error::NotAnEllipse(k.b * k.b - k.a * k.c));
    }
    let h = sign * k.h;
    if !(h < 0.0) {
        return Err(Error::DegenerateConic(format!(
            "translated constant {h} has no real ellipse (need h < 0 after normalisation)"
        )));
    }
    Ok((-h / lmax, -h / lmin))
}

/// Center, semi-axes √(|h|/λ_max) ≤ √(|h|/λ_min) and orientation of the
/// ellipse described by the conic.
pub fn conic_to_ellipse(coeffs: &ConicCoefficients) -> Result<Ellipse> {
    let (r1, r2) = normalized_radicands(coeffs)?;
    // eigenvector of λ_max, i.e. the s1 direction; sign of the form does not
    // change the eigenvectors
    let (a, b, c) = if coeffs.lambda_max > 0.0 {
        (coeffs.a, coeffs.b, coeffs.c)
    } else {
        (-coeffs.a, -coeffs.b, -coeffs.c)
    };
    let rotation = 0.5 * (2.0 * b).atan2(a - c);
    Ellipse::new(coeffs.center, r1.sqrt(), r2.sqrt().max(r1.sqrt()), rotation)
}

/// One coefficient compared across the two modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientDivergence {
    pub name: &'static str,
    pub paper: f64,
    pub expansion: f64,
    /// paper - expansion
    pub difference: f64,
    /// The difference predicted term by term from the Taylor derivatives.
    pub predicted: f64,
}

impl CoefficientDivergence {
    pub fn matches_prediction(&self, rel_tol: f64) -> bool {
        let scale = self.paper.abs().max(self.expansion.abs()).max(f64::MIN_POSITIVE);
        (self.difference - self.predicted).abs() <= rel_tol * scale
    }
}

/// Coefficient-by-coefficient comparison of the published closed form with
/// the machine expansion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub w: f64,
    pub alpha_hat: f64,
    pub d_v: f64,
    pub expansion_point: Point2,
    pub rows: Vec<CoefficientDivergence>,
}

impl DivergenceReport {
    pub fn all_match_prediction(&self, rel_tol: f64) -> bool {
        self.rows.iter().all(|r| r.matches_prediction(rel_tol))
    }

    pub fn row(&self, name: &str) -> Option<&CoefficientDivergence> {
        self.rows.iter().find(|r| r.name == name)
    }
}

/// Builds the divergence report.
///
/// With s = i² + j², the published list differs from the full expansion by:
/// b: -Wα̂(α̂-1) ij s^{α̂-2} (cross term halved);
/// d: Wα̂ i s^{α̂-1} (linear Taylor term) + 2Wα̂(α̂-1) i s^{α̂-1} (quadratic terms);
/// f: the same with j in place of i;
/// g: Wα̂(3 - 2α̂) s^{α̂} (constant parts of the Taylor terms).
pub fn conic_divergence(
    w: f64,
    alpha_hat: f64,
    d_v: f64,
    expansion_point: Point2,
) -> Result<DivergenceReport> {
    if expansion_point == Point2::ORIGIN {
        return Err(Error::invalid("expansion_point", "must be away from the BS"));
    }
    let paper = raw_coefficients(w, alpha_hat, d_v, expansion_point, ConicMode::Paper);
    let expansion = raw_coefficients(w, alpha_hat, d_v, expansion_point, ConicMode::Expansion);
    let (i, j) = (expansion_point.x, expansion_point.y);
    let s = i * i + j * j;
    let wa = w * alpha_hat;
    let lin = s.powf(alpha_hat - 1.0);
    let quad = s.powf(alpha_hat - 2.0);
    let predicted = [
        0.0,
        -wa * (alpha_hat - 1.0) * i * j * quad,
        0.0,
        wa * i * lin + 2.0 * wa * (alpha_hat - 1.0) * i * lin,
        wa * j * lin + 2.0 * wa * (alpha_hat - 1.0) * j * lin,
        wa * (3.0 - 2.0 * alpha_hat) * s.powf(alpha_hat),
    ];
    let names = ["a", "b", "c", "d", "f", "g"];
    let rows = (0..6)
        .map(|k| CoefficientDivergence {
            name: names[k],
            paper: paper[k],
            expansion: expansion[k],
            difference: paper[k] - expansion[k],
            predicted: predicted[k],
        })
        .collect();
    Ok(DivergenceReport {
        w,
        alpha_hat,
        d_v,
        expansion_point,
        rows,
    })
}
