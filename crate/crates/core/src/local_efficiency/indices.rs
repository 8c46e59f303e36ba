//! Local indices `l(T, f)` from the density functionals of `v` and `q`.

use std::cell::RefCell;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use super::eigen::mu0;
use crate::distributions::{numeric_v_q, q, v, Density, Support};
use crate::error::Result;
use crate::gof_statistics::StatisticKind;
use crate::quadrature::{quad, Tolerance};

/// `sup|v|, ∫vf, ∫v²f` and `sup|q|, ∫qf, ∫q²f` for one law. Signs are kept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Functionals {
    pub sup_v: f64,
    pub int_vf: f64,
    pub int_v2f: f64,
    pub sup_q: f64,
    pub int_qf: f64,
    pub int_q2f: f64,
}

/// `∫ g f` over the support. Bounded supports use `x = b sin ψ`, which
/// absorbs inverse-square-root endpoint behaviour such as the arcsine law's.
pub(crate) fn expect<G: Fn(f64) -> f64>(d: &dyn Density, g: G) -> Result<f64> {
    let tol = Tolerance::new(1e-15, 1e-13);
    match d.support() {
        Support::Bounded(b) => {
            let h = |psi: f64| {
                let x = b * psi.sin();
                g(x) * d.pdf(x) * b * psi.cos()
            };
            Ok(quad(h, -FRAC_PI_2, 0.0, tol)? + quad(h, 0.0, FRAC_PI_2, tol)?)
        }
        Support::Real => {
            let h = |x: f64| g(x) * d.pdf(x);
            Ok(quad(h, f64::NEG_INFINITY, 0.0, tol)? + quad(h, 0.0, f64::INFINITY, tol)?)
        }
    }
}

fn scan_sup<F: Fn(f64) -> Result<f64>>(d: &dyn Density, g: F, anchor: f64) -> Result<f64> {
    let mut best = g(anchor)?.abs();
    for i in 1..512 {
        let x = d.quantile(i as f64 / 512.0);
        best = best.max(g(x)?.abs());
    }
    Ok(best)
}

impl Functionals {
    pub fn compute(d: &dyn Density) -> Result<Self> {
        let numeric = match d.q_closed(0.0) {
            Some(_) => None,
            None => Some(numeric_v_q(d)?),
        };
        let vf = |x: f64| match &numeric {
            Some(n) => n.v(x),
            None => v(d, x),
        };
        let qf = |s: f64| match &numeric {
            Some(n) => n.q(s),
            None => q(d, s),
        };
        // v is even with its minimum at 0; q is nonincreasing, so |q| peaks at
        // the right end. The grid scans only confirm those shapes.
        let sup_v = scan_sup(d, vf, 0.0)?;
        let sup_q = scan_sup(d, qf, d.support().upper())?;
        let with = |h: &dyn Fn(f64) -> Result<f64>, sq: bool| -> Result<f64> {
            let err = RefCell::new(None);
            let val = expect(d, |x| match h(x) {
                Ok(y) if sq => y * y,
                Ok(y) => y,
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    0.0
                }
            });
            match err.into_inner() {
                Some(e) => Err(e),
                None => val,
            }
        };
        Ok(Self {
            sup_v,
            int_vf: with(&vf, false)?,
            int_v2f: with(&vf, true)?,
            sup_q,
            int_qf: with(&qf, false)?,
            int_q2f: with(&qf, true)?,
        })
    }
}

/// `c(T, θ) ≈ coefficient · b(T, θ)^power` locally.
pub fn slope_coefficient(kind: StatisticKind) -> (f64, i32) {
    match kind {
        StatisticKind::D => (4.0, 2),
        StatisticKind::W1 => (12.0, 2),
        StatisticKind::W2 => (PI * PI, 1),
        StatisticKind::U2 => (4.0 * PI * PI, 1),
        StatisticKind::Dbar => (12.0, 2),
        StatisticKind::W1bar => (45.0, 2),
        StatisticKind::W2bar => (mu0(), 1),
        StatisticKind::U2bar => (PI.powi(4), 1),
    }
}

/// Local index `l(T, f)`.
pub fn index_from(kind: StatisticKind, fx: &Functionals) -> f64 {
    let (coef, _) = slope_coefficient(kind);
    match kind {
        StatisticKind::D => coef * fx.sup_v * fx.sup_v,
        StatisticKind::W1 => coef * fx.int_vf * fx.int_vf,
        StatisticKind::W2 => coef * fx.int_v2f,
        StatisticKind::U2 => coef * (fx.int_v2f - fx.int_vf * fx.int_vf),
        StatisticKind::Dbar => coef * fx.sup_q * fx.sup_q,
        StatisticKind::W1bar => coef * fx.int_qf * fx.int_qf,
        StatisticKind::W2bar => coef * fx.int_q2f,
        StatisticKind::U2bar => coef * (fx.int_q2f - fx.int_qf * fx.int_qf),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalIndexReport {
    pub statistic: StatisticKind,
    pub density: String,
    #[serde(flatten)]
    pub functionals: Functionals,
    pub index: f64,
    pub variance: f64,
    pub efficiency: f64,
}

pub fn report_from(kind: StatisticKind, d: &dyn Density, fx: Functionals) -> LocalIndexReport {
    let index = index_from(kind, &fx);
    let variance = d.variance();
    LocalIndexReport {
        statistic: kind,
        density: d.name().to_string(),
        functionals: fx,
        index,
        variance,
        efficiency: index / variance,
    }
}

/// Local index and efficiency for any of the eight statistics.
pub fn local_index(kind: StatisticKind, d: &dyn Density) -> Result<LocalIndexReport> {
    Ok(report_from(kind, d, Functionals::compute(d)?))
}

/// `D̄, ω̄¹, ω̄², Ū²`: `12 sup q²`, `45 (∫qf)²`, `μ₀ ∫q²f`, `π⁴ [∫q²f − (∫qf)²]`.
pub fn local_index_integrated(kind: StatisticKind, d: &dyn Density) -> Result<LocalIndexReport> {
    if !kind.is_integrated() {
        return Err(crate::Error::Config(format!("{kind} is not an integrated statistic")));
    }
    local_index(kind, d)
}

/// `D, ω¹, ω², U²`: `4 sup v²`, `12 (∫vf)²`, `π² ∫v²f`, `4π² [∫v²f − (∫vf)²]`.
pub fn local_index_classical(kind: StatisticKind, d: &dyn Density) -> Result<LocalIndexReport> {
    if kind.is_integrated() {
        return Err(crate::Error::Config(format!("{kind} is not a classical statistic")));
    }
    local_index(kind, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{DensityKind::*, NumericDensity};
    use crate::gof_statistics::StatisticKind::*;

    #[test]
    fn closed_form_functionals() {
        let u = Functionals::compute(&Uniform).unwrap();
        assert!((u.sup_q - 1.0 / 6.0).abs() < 1e-15);
        assert!((u.int_qf + 1.0 / 12.0).abs() < 1e-14);
        assert!((u.int_q2f - 13.0 / 1260.0).abs() < 1e-14);
        assert!((u.int_vf + 1.0 / 6.0).abs() < 1e-14);
        assert!((u.int_v2f - 1.0 / 30.0).abs() < 1e-14);

        let a = Functionals::compute(&Arcsine).unwrap();
        let pi2 = PI * PI;
        assert!((a.sup_q - 2.0 / pi2).abs() < 1e-15);
        assert!((a.int_qf + 1.0 / pi2).abs() < 1e-14);
        assert!((a.int_q2f - 1.5 / (pi2 * pi2)).abs() < 1e-14);

        let n = Functionals::compute(&Normal).unwrap();
        assert!((n.sup_q - 0.5 / PI.sqrt()).abs() < 1e-15);
        assert!((n.int_qf + 0.25 / PI.sqrt()).abs() < 1e-13);
        assert!((n.int_q2f - 0.029136476619670074).abs() < 1e-13);
        // ∫φ³ = 1 / (2π√3)
        assert!((n.int_v2f - 1.0 / (2.0 * PI * 3f64.sqrt())).abs() < 1e-14);

        let s = Functionals::compute(&Student5).unwrap();
        assert!((s.sup_q - 35.0 / (72.0 * PI)).abs() < 1e-14);
        assert!((s.int_qf + 35.0 / (144.0 * PI)).abs() < 1e-13);
        assert!((s.int_q2f - 0.008695469211256697).abs() < 1e-13);

        let l = Functionals::compute(&Logistic).unwrap();
        assert!((l.sup_q - 0.5).abs() < 1e-15);
        assert!((l.int_qf + 0.25).abs() < 1e-13);
        assert!((l.int_q2f - 0.091_072_975_188_211_18).abs() < 1e-13);
        assert!((l.int_v2f - 0.285_021_977_717_257_85).abs() < 1e-13);
    }

    #[test]
    fn monotone_q_identity() {
        for d in crate::distributions::DensityKind::ALL {
            let fx = Functionals::compute(&d).unwrap();
            assert!((fx.sup_q - fx.int_vf.abs()).abs() < 1e-9, "{d}");
        }
    }

    #[test]
    fn index_spot_values() {
        assert!((local_index(Dbar, &Logistic).unwrap().index - 3.0).abs() < 1e-14);
        assert!((local_index(Dbar, &Arcsine).unwrap().index - 48.0 / PI.powi(4)).abs() < 1e-14);
        assert!((local_index(Dbar, &Uniform).unwrap().index - 1.0 / 3.0).abs() < 1e-14);
        assert!((local_index(W1bar, &Uniform).unwrap().index - 5.0 / 16.0).abs() < 1e-12);
        assert!((local_index(W2bar, &Normal).unwrap().index - 0.91154).abs() < 5e-5);
        let u2 = local_index(U2bar, &Uniform).unwrap();
        let expected = PI.powi(4) * (13.0 / 1260.0 - 1.0 / 144.0);
        assert!((u2.index - expected).abs() < 1e-12);
        assert!((u2.efficiency - 0.986).abs() < 5e-4);
    }

    #[test]
    fn classical_spot_values() {
        assert!((local_index(D, &Normal).unwrap().efficiency - 2.0 / PI).abs() < 1e-14);
        assert!((local_index(W2, &Uniform).unwrap().efficiency - PI * PI / 10.0).abs() < 1e-12);
        assert!((local_index(U2, &Uniform).unwrap().efficiency - PI * PI / 15.0).abs() < 1e-12);
    }

    #[test]
    fn kind_guards() {
        assert!(local_index_integrated(D, &Normal).is_err());
        assert!(local_index_classical(W2bar, &Normal).is_err());
        assert!(local_index_integrated(W2bar, &Normal).is_ok());
    }

    #[test]
    fn numeric_density_route() {
        // Uniform law re-entered without closed forms.
        let u = NumericDensity::new("uniform-numeric", |_x: f64| 0.5, Support::Bounded(1.0)).unwrap();
        let fx = Functionals::compute(&u).unwrap();
        assert!((fx.int_q2f - 13.0 / 1260.0).abs() < 1e-8);
        assert!((index_from(Dbar, &fx) / u.variance() - 1.0).abs() < 1e-7);
    }
}
