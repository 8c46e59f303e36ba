//! Symmetric hypothetical laws.
//!
//! The five built-in laws carry closed forms for
//! `v(x) = ∫_{-∞}^x u f(u) du` and `q(s) = ∫_{-∞}^s v(x) f(x) dx`. Any other
//! symmetric, finite-variance density can be wrapped in [`NumericDensity`] and
//! falls back to quadrature through [`NumericVq`].

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{quad, Tolerance};
use crate::roots::{bisect, newton_bracketed};
use crate::special::{norm_cdf, norm_cdf_centered, norm_pdf, norm_quantile, INV_SQRT_2PI};

/// Support of a symmetric law: either `[-b, b]` or the whole line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Support {
    Bounded(f64),
    Real,
}

impl Support {
    pub fn lower(&self) -> f64 {
        match *self {
            Support::Bounded(b) => -b,
            Support::Real => f64::NEG_INFINITY,
        }
    }

    pub fn upper(&self) -> f64 {
        match *self {
            Support::Bounded(b) => b,
            Support::Real => f64::INFINITY,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower() && x <= self.upper()
    }
}

/// A continuous law symmetric about zero with finite variance.
///
/// `quantile` must keep relative accuracy for small `p`; the slope engine
/// evaluates both tails through `quantile(p)` and `-quantile(p)`.
pub trait Density: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;
    fn pdf(&self, x: f64) -> f64;
    fn cdf(&self, x: f64) -> f64;
    /// `cdf(x) - 1/2`, accurate for small `|x|`.
    fn centered_cdf(&self, x: f64) -> f64 {
        self.cdf(x) - 0.5
    }
    fn quantile(&self, p: f64) -> f64;
    fn variance(&self) -> f64;
    fn support(&self) -> Support;
    fn density_at_zero(&self) -> f64 {
        self.pdf(0.0)
    }
    fn v_closed(&self, _x: f64) -> Option<f64> {
        None
    }
    fn q_closed(&self, _s: f64) -> Option<f64> {
        None
    }
}

pub type SharedDensity = Arc<dyn Density>;

/// The five built-in laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityKind {
    Normal,
    Logistic,
    Arcsine,
    Uniform,
    /// `8 / (3π (1 + x²)³)`, the non-standardized Student law with five
    /// degrees of freedom (variance 1/3).
    Student5,
}

impl DensityKind {
    pub const ALL: [DensityKind; 5] = [
        DensityKind::Normal,
        DensityKind::Logistic,
        DensityKind::Arcsine,
        DensityKind::Uniform,
        DensityKind::Student5,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DensityKind::Normal => "normal",
            DensityKind::Logistic => "logistic",
            DensityKind::Arcsine => "arcsine",
            DensityKind::Uniform => "uniform",
            DensityKind::Student5 => "student5",
        }
    }

    pub fn shared(self) -> SharedDensity {
        Arc::new(self)
    }
}

impl fmt::Display for DensityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DensityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        DensityKind::ALL
            .into_iter()
            .find(|k| k.as_str() == lower)
            .ok_or_else(|| {
                let names: Vec<_> = DensityKind::ALL.iter().map(|k| k.as_str()).collect();
                Error::Config(format!("unknown density `{s}`; expected one of {}", names.join(", ")))
            })
    }
}

/// Look up a built-in law by name.
pub fn make_density(kind: &str) -> Result<DensityKind> {
    kind.parse()
}

const STUDENT5_NORM: f64 = 8.0 / (3.0 * PI);

/// `∫_0^φ sin⁴ψ dψ`, accurate as φ → 0 where it behaves like φ⁵/5.
fn sin4_integral(phi: f64) -> f64 {
    if phi < 0.5 {
        // Σ_k (-1)^k (16^k - 4^{k+1}) φ^{2k+1} / (8 (2k)! (2k+1)), k ≥ 2.
        let phi2 = phi * phi;
        let mut sum = 0.0;
        let mut pow_phi = phi.powi(5);
        let mut fact = 24.0; // (2k)! at k = 2
        let mut p16 = 256.0;
        let mut p4 = 64.0;
        let mut sign = 1.0;
        for k in 2..30 {
            let term = sign * (p16 - p4) * pow_phi / (8.0 * fact * (2 * k + 1) as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            pow_phi *= phi2;
            fact *= ((2 * k + 1) * (2 * k + 2)) as f64;
            p16 *= 16.0;
            p4 *= 4.0;
            sign = -sign;
        }
        sum
    } else {
        3.0 * phi / 8.0 - (2.0 * phi).sin() / 4.0 + (4.0 * phi).sin() / 32.0
    }
}

/// Lower-tail probability of the Student-5 law at `x ≤ 0`.
fn student5_lower(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    let phi = if x == 0.0 { FRAC_PI_2 } else { (1.0 / -x).atan() };
    STUDENT5_NORM * sin4_integral(phi)
}

fn student5_quantile_lower(p: f64) -> f64 {
    // Solve sin4_integral(φ) = 3πp/8 for φ ∈ (0, π/2], then x = -cot φ.
    let target = p / STUDENT5_NORM;
    let phi = newton_bracketed(
        |phi| sin4_integral(phi) - target,
        |phi| phi.sin().powi(4),
        0.0,
        FRAC_PI_2,
        1e-16,
    )
    .unwrap_or_else(|_| (5.0 * target).powf(0.2));
    -phi.cos() / phi.sin()
}

/// `ln(1+e) - e` for small positive `e`.
fn log1p_minus(e: f64) -> f64 {
    if e < 0.1 {
        let mut sum = 0.0;
        let mut pow = e * e;
        for k in 2..40 {
            let term = if k % 2 == 0 { -pow / k as f64 } else { pow / k as f64 };
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            pow *= e;
        }
        sum
    } else {
        e.ln_1p() - e
    }
}

fn logistic_v(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    let a = x.abs();
    let e = (-a).exp();
    -e.ln_1p() - a * e / (1.0 + e)
}

fn logistic_q(s: f64) -> f64 {
    if s == f64::NEG_INFINITY {
        return 0.0;
    }
    if s == f64::INFINITY {
        return -0.5;
    }
    if s <= 0.0 {
        let e = s.exp();
        let l = e.ln_1p();
        let num = s * e * e - e * e - e * e * l + log1p_minus(e);
        num / (2.0 * (1.0 + e) * (1.0 + e))
    } else {
        let eps = (-s).exp();
        let l = s + eps.ln_1p();
        (-1.0 - eps.ln_1p() - eps + l * eps * eps) / (2.0 * (1.0 + eps) * (1.0 + eps))
    }
}

fn student5_q(s: f64) -> f64 {
    if s == f64::NEG_INFINITY {
        return 0.0;
    }
    let s = s.clamp(-1e40, 1e40);
    let s2 = s * s;
    let r = 1.0 / (1.0 + s2);
    let poly = s * (279.0 + s2 * (511.0 + s2 * (385.0 + 105.0 * s2)));
    -(poly * r.powi(4) + 105.0 * s.atan()) / (216.0 * PI * PI) - 35.0 / (144.0 * PI)
}

impl Density for DensityKind {
    fn name(&self) -> &str {
        self.as_str()
    }

    fn pdf(&self, x: f64) -> f64 {
        match self {
            DensityKind::Normal => norm_pdf(x),
            DensityKind::Logistic => {
                let e = (-x.abs()).exp();
                e / ((1.0 + e) * (1.0 + e))
            }
            DensityKind::Arcsine => {
                if x.abs() < 1.0 {
                    1.0 / (PI * (1.0 - x * x).sqrt())
                } else {
                    0.0
                }
            }
            DensityKind::Uniform => {
                if x.abs() <= 1.0 {
                    0.5
                } else {
                    0.0
                }
            }
            DensityKind::Student5 => STUDENT5_NORM / (1.0 + x * x).powi(3),
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        match self {
            DensityKind::Normal => norm_cdf(x),
            DensityKind::Logistic => 1.0 / (1.0 + (-x).exp()),
            DensityKind::Arcsine | DensityKind::Uniform => 0.5 + self.centered_cdf(x),
            DensityKind::Student5 => {
                if x <= 0.0 {
                    student5_lower(x)
                } else {
                    1.0 - student5_lower(-x)
                }
            }
        }
    }

    fn centered_cdf(&self, x: f64) -> f64 {
        match self {
            DensityKind::Normal => norm_cdf_centered(x),
            DensityKind::Logistic => 0.5 * (0.5 * x).tanh(),
            DensityKind::Arcsine => x.clamp(-1.0, 1.0).asin() / PI,
            DensityKind::Uniform => 0.5 * x.clamp(-1.0, 1.0),
            DensityKind::Student5 => {
                if x.abs() < 1.0 {
                    let t = x.atan();
                    STUDENT5_NORM * (3.0 * t / 8.0 + (2.0 * t).sin() / 4.0 + (4.0 * t).sin() / 32.0)
                } else if x < 0.0 {
                    student5_lower(x) - 0.5
                } else {
                    0.5 - student5_lower(-x)
                }
            }
        }
    }

    fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return self.support().lower();
        }
        if p >= 1.0 {
            return self.support().upper();
        }
        match self {
            DensityKind::Normal => norm_quantile(p),
            DensityKind::Logistic => p.ln() - (-p).ln_1p(),
            DensityKind::Arcsine => {
                if p <= 0.5 {
                    -(PI * p).cos()
                } else {
                    (PI * (1.0 - p)).cos()
                }
            }
            DensityKind::Uniform => 2.0 * p - 1.0,
            DensityKind::Student5 => {
                if p <= 0.5 {
                    student5_quantile_lower(p)
                } else {
                    -student5_quantile_lower(1.0 - p)
                }
            }
        }
    }

    fn variance(&self) -> f64 {
        match self {
            DensityKind::Normal => 1.0,
            DensityKind::Logistic => PI * PI / 3.0,
            DensityKind::Arcsine => 0.5,
            DensityKind::Uniform | DensityKind::Student5 => 1.0 / 3.0,
        }
    }

    fn support(&self) -> Support {
        match self {
            DensityKind::Arcsine | DensityKind::Uniform => Support::Bounded(1.0),
            _ => Support::Real,
        }
    }

    fn density_at_zero(&self) -> f64 {
        match self {
            DensityKind::Arcsine => 1.0 / PI,
            _ => self.pdf(0.0),
        }
    }

    fn v_closed(&self, x: f64) -> Option<f64> {
        Some(match self {
            DensityKind::Normal => -INV_SQRT_2PI * (-0.5 * x * x).exp(),
            DensityKind::Logistic => logistic_v(x),
            DensityKind::Arcsine => {
                if x.abs() < 1.0 {
                    -(1.0 - x * x).sqrt() / PI
                } else {
                    0.0
                }
            }
            DensityKind::Uniform => {
                if x.abs() < 1.0 {
                    -(1.0 - x * x) / 4.0
                } else {
                    0.0
                }
            }
            DensityKind::Student5 => {
                if x.is_infinite() {
                    0.0
                } else {
                    -2.0 / (3.0 * PI * (1.0 + x * x).powi(2))
                }
            }
        })
    }

    fn q_closed(&self, s: f64) -> Option<f64> {
        Some(match self {
            DensityKind::Normal => -norm_cdf(s * std::f64::consts::SQRT_2) / (2.0 * PI.sqrt()),
            DensityKind::Logistic => logistic_q(s),
            DensityKind::Arcsine => -(s.clamp(-1.0, 1.0) + 1.0) / (PI * PI),
            DensityKind::Uniform => {
                let s = s.clamp(-1.0, 1.0);
                (s * s * s - 3.0 * s - 2.0) / 24.0
            }
            DensityKind::Student5 => student5_q(s),
        })
    }
}

/// `v(x) = ∫_{-∞}^x u f(u) du`: closed form when the law provides one,
/// quadrature otherwise.
pub fn v(d: &dyn Density, x: f64) -> Result<f64> {
    match d.v_closed(x) {
        Some(val) => Ok(val),
        None => NumericVq::new(d)?.v(x),
    }
}

/// `q(s) = ∫_{-∞}^s v(x) f(x) dx`.
pub fn q(d: &dyn Density, s: f64) -> Result<f64> {
    match d.q_closed(s) {
        Some(val) => Ok(val),
        None => NumericVq::new(d)?.q(s),
    }
}

fn check_symmetry(name: &str, pdf: &dyn Fn(f64) -> f64, support: Support) -> Result<()> {
    let reach = match support {
        Support::Bounded(b) => b,
        Support::Real => 20.0,
    };
    for i in 1..200 {
        let x = reach * i as f64 / 200.0;
        let (a, b) = (pdf(x), pdf(-x));
        if !a.is_finite() || !b.is_finite() || a < 0.0 || b < 0.0 {
            return Err(Error::Validation(format!(
                "density `{name}` is not a finite nonnegative function at ±{x}"
            )));
        }
        if (a - b).abs() > 1e-9 * a.abs().max(b.abs()).max(1e-300) {
            return Err(Error::Validation(format!(
                "density `{name}` is not symmetric: f({x}) = {a}, f(-{x}) = {b}"
            )));
        }
    }
    Ok(())
}

/// Quadrature-backed `v` and `q` for any symmetric law.
#[derive(Debug, Clone, Copy)]
pub struct NumericVq<'a> {
    density: &'a dyn Density,
    tol: Tolerance,
}

/// Build quadrature-backed `v` and `q` callables, rejecting asymmetric laws.
pub fn numeric_v_q(d: &dyn Density) -> Result<NumericVq<'_>> {
    check_symmetry(d.name(), &|x| d.pdf(x), d.support())?;
    NumericVq::new(d)
}

impl<'a> NumericVq<'a> {
    fn new(density: &'a dyn Density) -> Result<Self> {
        Ok(Self {
            density,
            tol: Tolerance::new(1e-13, 1e-12),
        })
    }

    /// `v(x) = -∫_{|x|}^{b} u f(u) du` by symmetry.
    pub fn v(&self, x: f64) -> Result<f64> {
        let sup = self.density.support();
        let a = x.abs();
        if a >= sup.upper() {
            return Ok(0.0);
        }
        let d = self.density;
        Ok(-quad(|u| u * d.pdf(u), a, sup.upper(), self.tol)?)
    }

    /// `q(s) = F(s) v(s) - ∫_{-∞}^s u F(u) f(u) du`, the by-parts form of the
    /// nested integral.
    pub fn q(&self, s: f64) -> Result<f64> {
        let sup = self.density.support();
        let d = self.density;
        if s <= sup.lower() {
            return Ok(0.0);
        }
        let s = s.min(sup.upper());
        let boundary = if s >= sup.upper() { 0.0 } else { d.cdf(s) * self.v(s)? };
        let lower = sup.lower();
        let integral = if s > 0.0 {
            quad(|u| u * d.cdf(u) * d.pdf(u), lower, 0.0, self.tol)?
                + quad(|u| u * d.cdf(u) * d.pdf(u), 0.0, s, self.tol)?
        } else {
            quad(|u| u * d.cdf(u) * d.pdf(u), lower, s, self.tol)?
        };
        Ok(boundary - integral)
    }
}

type PdfFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A user-supplied symmetric density; cdf, quantile and variance are
/// computed numerically.
pub struct NumericDensity {
    name: String,
    pdf: Box<PdfFn>,
    support: Support,
    variance: f64,
}

impl fmt::Debug for NumericDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumericDensity")
            .field("name", &self.name)
            .field("support", &self.support)
            .field("variance", &self.variance)
            .finish()
    }
}

impl NumericDensity {
    pub fn new<F>(name: impl Into<String>, pdf: F, support: Support) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let name = name.into();
        check_symmetry(&name, &pdf, support)?;
        let tol = Tolerance::new(1e-12, 1e-11);
        let mass = 2.0 * quad(&pdf, 0.0, support.upper(), tol)?;
        if (mass - 1.0).abs() > 1e-6 {
            return Err(Error::Validation(format!("density `{name}` integrates to {mass}, not 1")));
        }
        let variance = 2.0 * quad(|x| x * x * pdf(x), 0.0, support.upper(), tol)?;
        if !variance.is_finite() || variance <= 0.0 {
            return Err(Error::Validation(format!("density `{name}` has no finite positive variance")));
        }
        Ok(Self {
            name,
            pdf: Box::new(pdf),
            support,
            variance,
        })
    }
}

impl Density for NumericDensity {
    fn name(&self) -> &str {
        &self.name
    }

    fn pdf(&self, x: f64) -> f64 {
        if self.support.contains(x) {
            (self.pdf)(x)
        } else {
            0.0
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        0.5 + self.centered_cdf(x)
    }

    fn centered_cdf(&self, x: f64) -> f64 {
        let a = x.abs().min(self.support.upper());
        let half = quad(|u| (self.pdf)(u), 0.0, a, Tolerance::new(1e-14, 1e-12)).unwrap_or(f64::NAN);
        half.copysign(x).clamp(-0.5, 0.5)
    }

    fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return self.support.lower();
        }
        if p >= 1.0 {
            return self.support.upper();
        }
        if p > 0.5 {
            return -self.quantile(1.0 - p);
        }
        let mut lo = match self.support {
            Support::Bounded(b) => -b,
            Support::Real => -1.0,
        };
        while self.cdf(lo) > p && lo > -1e300 {
            lo *= 2.0;
        }
        bisect(|x| self.cdf(x) - p, lo, 0.0, 1e-14 * (1.0 + lo.abs())).unwrap_or(f64::NAN)
    }

    fn variance(&self) -> f64 {
        self.variance
    }

    fn support(&self) -> Support {
        self.support
    }
}
