//! The generalized skew alternative `h(x, θ) = 2 f(x) G(θx)`.
//!
//! Besides density, distribution function, sampler and Kullback-Leibler
//! information, this module carries [`ExcessProfile`]: the cumulative
//! functionals of `H(·, θ) − F` in the uniform scale `w = F(x)`, which the
//! slope computations in [`crate::local_efficiency`] are built on.

use std::fmt;

use rand::distributions::Open01;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distributions::{Density, SharedDensity, Support};
use crate::error::{Error, Result};
use crate::quadrature::{quad, Tolerance};
use crate::roots::golden_section_max;

#[derive(Clone)]
pub struct SkewAlternative {
    f: SharedDensity,
    g: SharedDensity,
    theta: f64,
}

impl fmt::Debug for SkewAlternative {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt.debug_struct("SkewAlternative")
            .field("f", &self.f.name())
            .field("g", &self.g.name())
            .field("theta", &self.theta)
            .finish()
    }
}

impl SkewAlternative {
    /// Construct the alternative for `θ ≥ 0`.
    pub fn new(f: SharedDensity, g: SharedDensity, theta: f64) -> Result<Self> {
        if theta.is_nan() || theta < 0.0 || !theta.is_finite() {
            return Err(Error::Validation(format!("theta must be finite and nonnegative, got {theta}")));
        }
        Self::with_signed_theta(f, g, theta)
    }

    /// Internal constructor admitting negative `θ` (reflection checks).
    pub(crate) fn with_signed_theta(f: SharedDensity, g: SharedDensity, theta: f64) -> Result<Self> {
        let g0 = g.density_at_zero();
        if g0.is_nan() || g0 <= 0.0 || !g0.is_finite() {
            return Err(Error::Validation(format!(
                "skewing law `{}` needs a finite positive density at zero, got {g0}",
                g.name()
            )));
        }
        Ok(Self { f, g, theta })
    }

    pub fn base(&self) -> &dyn Density {
        self.f.as_ref()
    }

    pub fn skewing(&self) -> &dyn Density {
        self.g.as_ref()
    }

    pub fn base_shared(&self) -> SharedDensity {
        self.f.clone()
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(self.f.clone(), self.g.clone(), theta)
    }

    /// `h(x, θ) = 2 f(x) G(θx)`.
    pub fn pdf(&self, x: f64) -> f64 {
        2.0 * self.f.pdf(x) * self.g.cdf(self.theta * x)
    }

    /// `H(x, θ) − F(x) = 2 ∫_{-∞}^{x} f(u) (G(θu) − 1/2) du`.
    ///
    /// The integrand is odd, so the excess is even in `x` and is integrated
    /// over the left tail only.
    pub fn cdf_excess(&self, x: f64) -> Result<f64> {
        if self.theta == 0.0 || x.is_infinite() {
            return Ok(0.0);
        }
        let lower = self.f.support().lower();
        let upper = -x.abs();
        if upper <= lower {
            return Ok(0.0);
        }
        let (f, g, t) = (&self.f, &self.g, self.theta);
        let tol = Tolerance::new(1e-300, 1e-12);
        let val = match f.support() {
            // In w = F(u) the edge singularities of bounded laws disappear.
            Support::Bounded(_) => quad(|w| g.centered_cdf(t * f.quantile(w)), 0.0, f.cdf(upper), tol)?,
            Support::Real => quad(|u| f.pdf(u) * g.centered_cdf(t * u), lower, upper, tol)?,
        };
        Ok(2.0 * val)
    }

    /// `H(x, θ) = 2 ∫_{-∞}^x f(u) G(θu) du`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok((self.f.cdf(x) + self.cdf_excess(x)?).clamp(0.0, 1.0))
    }

    /// Draw `n` values using the sign-flip construction: `Z ~ f`, keep `Z`
    /// with probability `G(θZ)`, otherwise return `−Z`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with(&mut rng, n)
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n)
            .map(|_| {
                let z = self.f.quantile(rng.sample(Open01));
                let u: f64 = rng.sample(Open01);
                if u <= self.g.cdf(self.theta * z) {
                    z
                } else {
                    -z
                }
            })
            .collect()
    }

    /// `K(θ) = ∫ h ln(h / f) = ∫ f(x) · 2G(θx) ln 2G(θx) dx`.
    ///
    /// Pairs `x` with `−x` so the integrand is `f(x) ψ(2G(θx) − 1)` on the
    /// positive half-line with `ψ(e) = (1+e)ln(1+e) + (1−e)ln(1−e) ≥ 0`.
    pub fn kullback_leibler(&self) -> Result<f64> {
        if self.theta == 0.0 {
            return Ok(0.0);
        }
        let (f, g, t) = (&self.f, &self.g, self.theta);
        quad(
            |x| f.pdf(x) * paired_xlogx(2.0 * g.centered_cdf(t * x)),
            0.0,
            f.support().upper(),
            Tolerance::new(1e-300, 1e-12),
        )
    }

    /// Tabulate the cumulative excess functionals on `steps` RK4 steps.
    pub fn excess_profile(&self, steps: usize) -> ExcessProfile {
        ExcessProfile::build(self, steps)
    }
}

/// `(1+e)ln(1+e) + (1−e)ln(1−e)`, with `0 ln 0 = 0`.
pub fn paired_xlogx(e: f64) -> f64 {
    let e = e.abs().min(1.0);
    if e < 0.5 {
        // Σ_{k≥1} e^{2k} / (k (2k − 1))
        let e2 = e * e;
        let mut pow = e2;
        let mut sum = 0.0;
        for k in 1..60 {
            let term = pow / (k as f64 * (2 * k - 1) as f64);
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
            pow *= e2;
        }
        sum
    } else {
        let right = if e < 1.0 { (1.0 - e) * (-e).ln_1p() } else { 0.0 };
        (1.0 + e) * e.ln_1p() + right
    }
}

const PROFILE_REACH: f64 = 4.0;
pub const DEFAULT_PROFILE_STEPS: usize = 4096;

/// Excess `D(w) = H(F⁻¹(w), θ) − w` and its running integral, tabulated on a
/// double-exponential grid in `w`.
///
/// The state `(D, I, J₁, J₂, E₂)` solves `dD/dw = 2G(θF⁻¹(w)) − 1`,
/// `dI/dw = D`, `dJ₁/dw = I`, `dJ₂/dw = I²`, `dE₂/dw = D²` from `w = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct ExcessProfile {
    pub nodes: Vec<ProfileNode>,
    /// `∫ D dw`, also `I(1)`.
    pub int_excess: f64,
    /// `∫ D² dw`.
    pub int_excess_sq: f64,
    /// `∫ I dw`.
    pub int_integrated: f64,
    /// `∫ I² dw`.
    pub int_integrated_sq: f64,
    /// `sup |D|`.
    pub sup_excess: f64,
    /// `sup |I|`.
    pub sup_integrated: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProfileNode {
    pub w: f64,
    pub x: f64,
    pub excess: f64,
    pub integrated: f64,
    /// `v(x)` integrated alongside, so `excess − 2θ g(0) v` shares the
    /// discretisation and is free of endpoint cancellation.
    pub v: f64,
}

struct Point {
    w: f64,
    x: f64,
    dw: f64,
    slope: f64,
}

type State = [f64; 6];

struct Engine<'a> {
    alt: &'a SkewAlternative,
}

impl Engine<'_> {
    fn point(&self, tau: f64) -> Point {
        let s = std::f64::consts::PI * tau.sinh();
        let tail = 1.0 / (1.0 + s.abs().exp());
        let f = self.alt.base();
        let (w, x) = if tau < 0.0 {
            (tail, f.quantile(tail))
        } else if tau > 0.0 {
            (1.0 - tail, -f.quantile(tail))
        } else {
            (0.5, 0.0)
        };
        let dw = tail * (1.0 - tail) * std::f64::consts::PI * tau.cosh();
        let slope = 2.0 * self.alt.skewing().centered_cdf(self.alt.theta * x);
        Point { w, x, dw, slope }
    }

    fn rhs(p: &Point, y: &State) -> State {
        [
            p.dw * p.slope,
            p.dw * y[0],
            p.dw * y[1],
            p.dw * y[1] * y[1],
            p.dw * y[0] * y[0],
            p.dw * p.x,
        ]
    }

    fn step(a: &Point, mid: &Point, b: &Point, y: &State, h: f64) -> State {
        let add = |y: &State, k: &State, c: f64| -> State {
            let mut out = *y;
            for i in 0..6 {
                out[i] += c * k[i];
            }
            out
        };
        let k1 = Self::rhs(a, y);
        let k2 = Self::rhs(mid, &add(y, &k1, 0.5 * h));
        let k3 = Self::rhs(mid, &add(y, &k2, 0.5 * h));
        let k4 = Self::rhs(b, &add(y, &k3, h));
        let mut out = *y;
        for i in 0..6 {
            out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        out
    }

    /// State at `tau` starting from `(tau0, y0)` with `sub` RK4 steps.
    fn advance(&self, tau0: f64, y0: &State, tau: f64, sub: usize) -> State {
        let h = (tau - tau0) / sub as f64;
        let mut y = *y0;
        let mut a = self.point(tau0);
        for i in 0..sub {
            let t = tau0 + i as f64 * h;
            let mid = self.point(t + 0.5 * h);
            let b = self.point(t + h);
            y = Self::step(&a, &mid, &b, &y, h);
            a = b;
        }
        y
    }
}

impl ExcessProfile {
    fn build(alt: &SkewAlternative, steps: usize) -> Self {
        // Even step count puts a node at τ = 0, i.e. w = 1/2.
        let steps = steps.max(8) & !1;
        let engine = Engine { alt };
        let h = 2.0 * PROFILE_REACH / steps as f64;
        let taus: Vec<f64> = (0..=steps).map(|k| -PROFILE_REACH + k as f64 * h).collect();
        let mut states: Vec<State> = Vec::with_capacity(steps + 1);
        let mut nodes = Vec::with_capacity(steps + 1);
        let mut y: State = [0.0; 6];
        let mut a = engine.point(taus[0]);
        states.push(y);
        nodes.push(ProfileNode {
            w: a.w,
            x: a.x,
            excess: 0.0,
            integrated: 0.0,
            v: 0.0,
        });
        for k in 0..steps {
            let mid = engine.point(taus[k] + 0.5 * h);
            let b = engine.point(taus[k + 1]);
            y = Engine::step(&a, &mid, &b, &y, h);
            states.push(y);
            nodes.push(ProfileNode {
                w: b.w,
                x: b.x,
                excess: y[0],
                integrated: y[1],
                v: y[5],
            });
            a = b;
        }

        let refine = |component: usize| -> f64 {
            let (k, best) = states
                .iter()
                .enumerate()
                .map(|(k, s)| (k, s[component].abs()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("non-empty profile");
            if k == 0 || k == steps {
                return best;
            }
            let (lo, hi) = (taus[k - 1], taus[k + 1]);
            let start = states[k - 1];
            let (_, refined) = golden_section_max(
                |tau| engine.advance(lo, &start, tau, 8)[component].abs(),
                lo,
                hi,
                1e-10,
            );
            refined.max(best)
        };
        let sup_excess = refine(0);
        let sup_integrated = refine(1);
        let last = states[steps];
        ExcessProfile {
            nodes,
            int_excess: last[1],
            int_integrated: last[2],
            int_integrated_sq: last[3],
            int_excess_sq: last[4],
            sup_excess,
            sup_integrated,
        }
    }
}

/// Empirical check of `H(x,θ) − F(x) ≈ 2θ g(0) v(x)`.
#[derive(Debug, Clone, Serialize)]
pub struct Condition2Report {
    pub f: String,
    pub g: String,
    /// `(θ, sup_x |H − F − 2θ g(0) v| / θ)`; the ratio should shrink with θ.
    pub ratios: Vec<(f64, f64)>,
    pub decreasing: bool,
}

pub const DEFAULT_THETA_GRID: [f64; 3] = [1e-1, 1e-2, 1e-3];

pub fn verify_condition2(f: SharedDensity, g: SharedDensity, theta_grid: &[f64]) -> Result<Condition2Report> {
    let g0 = g.density_at_zero();
    let mut ratios = Vec::with_capacity(theta_grid.len());
    for &theta in theta_grid {
        let alt = SkewAlternative::new(f.clone(), g.clone(), theta)?;
        if theta == 0.0 {
            ratios.push((0.0, 0.0));
            continue;
        }
        let profile = alt.excess_profile(DEFAULT_PROFILE_STEPS);
        let mut worst: f64 = 0.0;
        for node in &profile.nodes {
            let lead = 2.0 * theta * g0 * node.v;
            worst = worst.max((node.excess - lead).abs());
        }
        ratios.push((theta, worst / theta));
    }
    let decreasing = ratios
        .windows(2)
        .filter(|w| w[0].0 > 0.0 && w[1].0 > 0.0)
        .all(|w| w[1].1 <= w[0].1 || w[1].1 < 1e-12);
    Ok(Condition2Report {
        f: f.name().to_string(),
        g: g.name().to_string(),
        ratios,
        decreasing,
    })
}

/// Empirical check of `K(θ) ≈ 2 g(0)² σ²(f) θ²`.
#[derive(Debug, Clone, Serialize)]
pub struct Condition3Report {
    pub f: String,
    pub g: String,
    pub limit: f64,
    /// `(θ, K(θ)/θ²)`.
    pub ratios: Vec<(f64, f64)>,
}

pub fn verify_condition3(f: SharedDensity, g: SharedDensity, theta_grid: &[f64]) -> Result<Condition3Report> {
    let limit = 2.0 * g.density_at_zero().powi(2) * f.variance();
    let mut ratios = Vec::with_capacity(theta_grid.len());
    for &theta in theta_grid {
        if theta == 0.0 {
            continue;
        }
        let k = SkewAlternative::new(f.clone(), g.clone(), theta)?.kullback_leibler()?;
        ratios.push((theta, k / (theta * theta)));
    }
    Ok(Condition3Report {
        f: f.name().to_string(),
        g: g.name().to_string(),
        limit,
        ratios,
    })
}
