//! Norms on `H^p` and `A^p_mu`, the reproducing kernel of `A^2_mu`, and
//! norms of point-evaluation functionals.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{Measure, MeasureKind};
use crate::primes::sieve;
use crate::qmc::{torus_replicates, QmcConfig, QmcEstimate};
use crate::quadrature::gauss_laguerre;
use crate::series::{n_pow_neg, BohrMonomial, DirichletSeries};
use crate::zeta::zeta;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateKind {
    Exact,
    UpperBound,
    RatioUpToConstant,
    Quadrature,
    QuasiMonteCarlo,
}

/// CLI-facing result record `{"value", "kind", "tail", "stderr"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub value: f64,
    pub kind: EstimateKind,
    pub tail: Option<f64>,
    pub stderr: Option<f64>,
}

impl NormReport {
    fn exact(value: f64) -> Self {
        NormReport {
            value,
            kind: EstimateKind::Exact,
            tail: None,
            stderr: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalNormEstimate {
    pub value: f64,
    pub kind: EstimateKind,
    /// Known lower bound, when one is available.
    pub lower: Option<f64>,
    /// Truncation tail already included in `value`.
    pub tail: Option<f64>,
    pub space: String,
    pub point: (f64, f64),
}

/// How `H^p` norms are obtained for a given `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HpMethod {
    /// Exact for even integer `p`; quasi-Monte Carlo otherwise.
    Auto(QmcConfig),
    /// Always quasi-Monte Carlo.
    Qmc(QmcConfig),
}

impl Default for HpMethod {
    fn default() -> Self {
        HpMethod::Auto(QmcConfig::default())
    }
}

impl HpMethod {
    fn config(&self) -> &QmcConfig {
        match self {
            HpMethod::Auto(c) | HpMethod::Qmc(c) => c,
        }
    }
}

const MAX_EXACT_POWER: u32 = 8;

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

/// `q` with `p = 2q`, when `p` is an even integer small enough for exact powers.
fn even_half(p: f64) -> Option<u32> {
    let q = p / 2.0;
    if q.fract() == 0.0 && q >= 1.0 && q <= MAX_EXACT_POWER as f64 {
        Some(q as u32)
    } else {
        None
    }
}

/// `l^2` norm of the stored coefficients, exact or not.
pub fn coefficient_norm(f: &DirichletSeries) -> f64 {
    f.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// `||f||_{H^2} = (sum |a_n|^2)^{1/2}`.
pub fn norm_h2(f: &DirichletSeries) -> Result<f64> {
    if !f.is_exact() {
        return Err(Error::NotExact { op: "norm_h2" });
    }
    Ok(coefficient_norm(f))
}

/// Exact `f^q` as a sparse map `n -> coefficient`.
fn sparse_power(f: &DirichletSeries, q: u32) -> Result<BTreeMap<u64, Complex64>> {
    let base: Vec<(u64, Complex64)> = f.terms().map(|(n, c)| (n as u64, c)).collect();
    let mut acc: BTreeMap<u64, Complex64> = BTreeMap::from([(1, Complex64::new(1.0, 0.0))]);
    for _ in 0..q {
        let mut next: BTreeMap<u64, Complex64> = BTreeMap::new();
        for (&m, &a) in &acc {
            for &(n, b) in &base {
                let k = m.checked_mul(n).ok_or(Error::NonFinite(
                    "index overflow in exact H^p power".into(),
                ))?;
                *next.entry(k).or_default() += a * b;
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// `||f||_{H^p}`: exact via `||f^q||_{H^2}^{1/q}` for `p = 2q`, otherwise a
/// randomized QMC estimate of `int |D(f)|^p dm` on the finite polytorus.
pub fn norm_hp(f: &DirichletSeries, p: f64, method: HpMethod) -> Result<NormReport> {
    check_p(p)?;
    if !f.is_exact() {
        return Err(Error::NotExact { op: "norm_hp" });
    }
    let mut terms = f.terms();
    match (terms.next(), terms.next()) {
        (None, _) => return Ok(NormReport::exact(0.0)),
        // |c n^{-s}| is constant on the torus
        (Some((_, c)), None) => return Ok(NormReport::exact(c.norm())),
        _ => {}
    }
    if let (HpMethod::Auto(_), Some(q)) = (method, even_half(p)) {
        let power = sparse_power(f, q)?;
        let sq: f64 = power.values().map(|c| c.norm_sqr()).sum();
        return Ok(NormReport::exact(sq.powf(0.5 / q as f64)));
    }
    let lift = TorusTerms::new(f)?;
    let cfg = method.config();
    let reps = torus_replicates(lift.dim, cfg, |theta| lift.evaluate(theta).norm().powf(p));
    finish_qmc(QmcEstimate::from_replicates(reps), p, cfg)
}

fn finish_qmc(est: QmcEstimate, p: f64, cfg: &QmcConfig) -> Result<NormReport> {
    if !est.mean.is_finite() || est.mean < 0.0 {
        return Err(Error::NonFinite("QMC moment".into()));
    }
    if est.mean == 0.0 {
        return Ok(NormReport {
            value: 0.0,
            kind: EstimateKind::QuasiMonteCarlo,
            tail: None,
            stderr: Some(0.0),
        });
    }
    if est.stderr > cfg.max_rel_stderr * est.mean {
        return Err(Error::QmcNonConvergence {
            estimate: est.mean,
            stderr: est.stderr,
            spread: est.spread(),
        });
    }
    let value = est.mean.powf(1.0 / p);
    // delta method for the p-th root
    let stderr = value * est.stderr / (p * est.mean);
    Ok(NormReport {
        value,
        kind: EstimateKind::QuasiMonteCarlo,
        tail: None,
        stderr: Some(stderr),
    })
}

fn unit(phase: f64) -> Complex64 {
    let (s, c) = (TAU * phase.fract()).sin_cos();
    Complex64::new(c, s)
}

/// Bohr lift laid out for fast evaluation: per-term sparse exponents.
struct TorusTerms {
    dim: usize,
    exps: Vec<Vec<(usize, f64)>>,
    coeffs: Vec<Complex64>,
    indices: Vec<usize>,
}

impl TorusTerms {
    fn new(f: &DirichletSeries) -> Result<Self> {
        let sv = sieve(f.truncation());
        let mut dim = 0;
        let mut exps = Vec::new();
        let mut coeffs = Vec::new();
        let mut indices = Vec::new();
        for (n, c) in f.terms() {
            let m = BohrMonomial::of_index(n, &sv);
            dim = dim.max(m.dimension());
            exps.push(m.sparse().map(|(k, e)| (k, e as f64)).collect());
            coeffs.push(c);
            indices.push(n);
        }
        Ok(TorusTerms {
            dim: dim.max(1),
            exps,
            coeffs,
            indices,
        })
    }

    fn phase(&self, term: usize, theta: &[f64]) -> Complex64 {
        unit(self.exps[term].iter().map(|&(k, x)| theta[k] * x).sum())
    }

    fn evaluate(&self, theta: &[f64]) -> Complex64 {
        (0..self.coeffs.len())
            .map(|t| self.coeffs[t] * self.phase(t, theta))
            .sum()
    }
}

/// `||f||_{A^2_mu} = (sum |a_n|^2 w_h(n))^{1/2}`.
pub fn norm_a2(f: &DirichletSeries, mu: &Measure) -> Result<f64> {
    if !f.is_exact() {
        return Err(Error::NotExact { op: "norm_a2" });
    }
    let w = mu.weights(f.degree())?;
    Ok(f
        .terms()
        .map(|(n, c)| c.norm_sqr() * w[n - 1])
        .sum::<f64>()
        .sqrt())
}

/// `<f, g>_{A^2_mu} = sum f_n conj(g_n) w_h(n)` over the common truncation.
pub fn inner_a2(f: &DirichletSeries, g: &DirichletSeries, mu: &Measure) -> Result<Complex64> {
    let n = f.truncation().min(g.truncation());
    let w = mu.weights(n)?;
    Ok((0..n)
        .map(|i| f.coeffs()[i] * g.coeffs()[i].conj() * w[i])
        .sum())
}

/// `||f||_{A^p_mu} = (int ||f_sigma||_{H^p}^p d mu(sigma))^{1/p}`, computed by
/// integrating translates rather than through the weights.
pub fn norm_ap(f: &DirichletSeries, p: f64, mu: &Measure, method: HpMethod) -> Result<NormReport> {
    check_p(p)?;
    if !f.is_exact() {
        return Err(Error::NotExact { op: "norm_ap" });
    }
    if f.is_zero() {
        return Ok(NormReport::exact(0.0));
    }
    if let [(n, c)] = f.terms().collect::<Vec<_>>()[..] {
        // ||f_sigma||_{H^p} = |c| n^{-sigma} for a monomial
        let log_n = (n as f64).ln();
        let moment = mu.integrate(|sigma| (-p * sigma * log_n).exp())?;
        return Ok(NormReport {
            value: c.norm() * moment.powf(1.0 / p),
            kind: EstimateKind::Quadrature,
            tail: None,
            stderr: None,
        });
    }
    let exact_half = match method {
        HpMethod::Auto(_) => even_half(p),
        HpMethod::Qmc(_) => None,
    };
    if let Some(q) = exact_half {
        // ||f_sigma||_p^p = ||(f^q)_sigma||_2^2 since translation is multiplicative
        let terms: Vec<(f64, f64)> = sparse_power(f, q)?
            .iter()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(&n, c)| ((n as f64).ln(), c.norm_sqr()))
            .collect();
        let integral = mu.integrate(|sigma| {
            terms
                .iter()
                .map(|&(log_n, a2)| a2 * (-2.0 * sigma * log_n).exp())
                .sum()
        })?;
        return Ok(NormReport {
            value: integral.powf(0.5 / q as f64),
            kind: EstimateKind::Quadrature,
            tail: None,
            stderr: None,
        });
    }

    // QMC on the torus of sum_i W_i |D(f_{sigma_i})|^p (Fubini)
    let lift = TorusTerms::new(f)?;
    let rule = mu.rule();
    let nodes: Vec<(f64, Vec<Complex64>)> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .filter(|(_, w)| **w > 0.0)
        .map(|(&sigma, &w)| {
            let row = lift
                .indices
                .iter()
                .zip(&lift.coeffs)
                .map(|(&n, c)| c * (n as f64).powf(-sigma))
                .collect();
            (w, row)
        })
        .collect();
    let cfg = method.config();
    let reps = torus_replicates(lift.dim, cfg, |theta| {
        let phases: Vec<Complex64> = (0..lift.coeffs.len()).map(|t| lift.phase(t, theta)).collect();
        nodes
            .iter()
            .map(|(w, row)| {
                let v: Complex64 = row.iter().zip(&phases).map(|(c, z)| c * z).sum();
                w * v.norm().powf(p)
            })
            .sum()
    });
    finish_qmc(QmcEstimate::from_replicates(reps), p, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    pub value: Complex64,
    /// Bound on `sum_{n > N} n^{-Re s - Re w} / w_h(n)`.
    pub tail: f64,
}

/// `K_mu(s, .)` as a series in the second variable: coefficient `n^{-conj s} / w_h(n)`.
pub fn kernel_series(mu: &Measure, s: Complex64, truncation: usize) -> Result<DirichletSeries> {
    if !(s.re > 0.5) {
        return Err(Error::UnboundedFunctional(s.re));
    }
    let w = mu.weights(truncation)?;
    let coeffs = (1..=truncation)
        .map(|n| n_pow_neg(n, s.conj()) / w[n - 1])
        .collect();
    DirichletSeries::from_coeffs(coeffs, false)
}

/// Partial sum `sum_{n <= N} n^{-conj s - w} / w_h(n)` with an integral-comparison tail.
pub fn kernel(mu: &Measure, s: Complex64, w: Complex64, truncation: usize) -> Result<KernelValue> {
    if !(s.re > 0.5) {
        return Err(Error::UnboundedFunctional(s.re));
    }
    if !(w.re > 0.5) {
        return Err(Error::UnboundedFunctional(w.re));
    }
    let a = s.re + w.re;
    if !(a > 1.0) {
        return Err(Error::Divergent {
            what: "kernel",
            abscissa: 1.0,
        });
    }
    let weights = mu.weights(truncation)?;
    let z = s.conj() + w;
    let value = (1..=truncation)
        .map(|n| n_pow_neg(n, z) / weights[n - 1])
        .sum();
    Ok(KernelValue {
        value,
        tail: dirichlet_tail(mu, a, truncation)?,
    })
}

/// `int_N^inf x^{-a} / w_h(x) dx`, which dominates `sum_{n > N} n^{-a} / w_h(n)`
/// once the summand is decreasing.
pub fn dirichlet_tail(mu: &Measure, a: f64, truncation: usize) -> Result<f64> {
    if !(a > 1.0) {
        return Err(Error::Divergent {
            what: "sum n^{-a}/w(n)",
            abscissa: 1.0,
        });
    }
    let big_n = truncation.max(1) as f64;
    let log_n = big_n.ln();
    let rate = a - 1.0;
    // x = exp(L + t / (a - 1)), then Gauss–Laguerre in t
    let (t, wt) = gauss_laguerre(48, 0.0);
    let mut integral = 0.0;
    for (ti, wi) in t.iter().zip(&wt) {
        if *wi == 0.0 {
            continue;
        }
        let u = log_n + ti / rate;
        let inv_w = match mu.kind() {
            MeasureKind::Alpha { alpha } => (1.0 + u).powf(alpha + 1.0),
            MeasureKind::Density { .. } => 1.0 / mu.weight_real(u.exp())?,
        };
        integral += wi * inv_w;
    }
    let tail = big_n.powf(1.0 - a) / rate * integral;
    if !tail.is_finite() {
        return Err(Error::NonFinite("kernel tail".into()));
    }
    Ok(tail)
}

/// `||delta_s||_{(H^p)^*} = zeta(2 Re s)^{1/p}`.
pub fn point_eval_norm_hp(s: Complex64, p: f64) -> Result<FunctionalNormEstimate> {
    check_p(p)?;
    if !(s.re > 0.5) {
        return Err(Error::UnboundedFunctional(s.re));
    }
    Ok(FunctionalNormEstimate {
        value: zeta(2.0 * s.re)?.powf(1.0 / p),
        kind: EstimateKind::Exact,
        lower: Some(1.0),
        tail: None,
        space: format!("H^{p}"),
        point: (s.re, s.im),
    })
}

/// Upper bound `sum_n n^{-Re s} / w_h(n)` for `||delta_s||` on `A^1_mu`, with tail.
pub fn point_eval_bound_a1(
    mu: &Measure,
    s: Complex64,
    truncation: usize,
) -> Result<FunctionalNormEstimate> {
    let sigma = s.re;
    if !(sigma > 1.0) {
        return Err(Error::Divergent {
            what: "sum n^{-Re s}/w(n)",
            abscissa: 1.0,
        });
    }
    let w = mu.weights(truncation)?;
    // summed from the small end so the leading 1 does not swallow the tail
    let partial: f64 = (2..=truncation)
        .rev()
        .map(|n| (n as f64).powf(-sigma) / w[n - 1])
        .sum::<f64>()
        + 1.0;
    let tail = dirichlet_tail(mu, sigma, truncation)?;
    Ok(FunctionalNormEstimate {
        value: partial + tail,
        kind: EstimateKind::UpperBound,
        lower: Some(1.0),
        tail: Some(tail),
        space: format!("A^1[{}]", mu.label()),
        point: (s.re, s.im),
    })
}

/// `(Re s / (2 Re s - 1))^{(2 + alpha)/p}`: the shape of the `A^p_alpha` point
/// evaluation bound, without its unspecified constant.
pub fn point_eval_ratio_alpha(alpha: f64, p: f64, s: Complex64) -> Result<FunctionalNormEstimate> {
    check_p(p)?;
    if !(alpha > -1.0) {
        return Err(Error::InvalidMeasure(format!("alpha must be > -1, got {alpha}")));
    }
    if !(s.re > 0.5) {
        return Err(Error::Pole {
            what: "point evaluation ratio",
            at: s.re,
        });
    }
    let ratio = s.re / (2.0 * s.re - 1.0);
    Ok(FunctionalNormEstimate {
        value: ratio.powf((2.0 + alpha) / p),
        kind: EstimateKind::RatioUpToConstant,
        lower: None,
        tail: None,
        space: format!("A^{p}_{alpha}"),
        point: (s.re, s.im),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(terms: &[(i64, Complex64)], n: usize) -> DirichletSeries {
        DirichletSeries::from_terms(terms.iter().copied(), n).unwrap()
    }

    fn small_qmc() -> QmcConfig {
        QmcConfig {
            points: 1 << 12,
            ..QmcConfig::default()
        }
    }

    #[test]
    fn h2_examples() {
        assert_eq!(norm_h2(&DirichletSeries::one(4)).unwrap(), 1.0);
        let f = poly(&[(1, c(1.0, 0.0)), (2, c(2.0, 0.0))], 4);
        assert_relative_eq!(norm_h2(&f).unwrap(), 5f64.sqrt());
        let g = DirichletSeries::from_terms((1..=8).map(|k| (k, c(1.0, 0.0))), 8).unwrap();
        assert_relative_eq!(norm_h2(&g).unwrap(), 8f64.sqrt());
        assert!(norm_h2(&g.with_exact(false)).is_err());
    }

    #[test]
    fn hp_examples() {
        let mono = poly(&[(6, c(3.0, -4.0))], 8);
        for p in [1.0, 1.5, 2.0, 3.0, 4.0] {
            let r = norm_hp(&mono, p, HpMethod::default()).unwrap();
            assert_relative_eq!(r.value, 5.0, max_relative = 1e-14);
        }
        let f = poly(&[(1, c(1.0, 0.0)), (2, c(1.0, 0.0))], 2);
        let r4 = norm_hp(&f, 4.0, HpMethod::default()).unwrap();
        assert_eq!(r4.kind, EstimateKind::Exact);
        assert_relative_eq!(r4.value, 6f64.powf(0.25), max_relative = 1e-14);
        let r2 = norm_hp(&f, 2.0, HpMethod::default()).unwrap();
        assert_relative_eq!(r2.value, 2f64.sqrt(), max_relative = 1e-14);
        let q2 = norm_hp(&f, 2.0, HpMethod::Qmc(small_qmc())).unwrap();
        let se = q2.stderr.unwrap();
        assert!((q2.value - 2f64.sqrt()).abs() <= 3.0 * se + 1e-12, "{q2:?}");
        assert!(norm_hp(&f, 0.5, HpMethod::default()).is_err());
    }

    #[test]
    fn hp_p1_of_binomial() {
        // ||1 + z||_{L^1(T)} = 4 / pi
        let f = poly(&[(1, c(1.0, 0.0)), (2, c(1.0, 0.0))], 2);
        let r = norm_hp(&f, 1.0, HpMethod::default()).unwrap();
        assert!((r.value - 4.0 / std::f64::consts::PI).abs() < 5.0 * r.stderr.unwrap() + 1e-9);
        assert!((r.value - 4.0 / std::f64::consts::PI).abs() < 1e-4);
    }

    #[test]
    fn qmc_rejects_tight_tolerance() {
        let f = poly(&[(1, c(1.0, 0.0)), (2, c(1.0, 0.0)), (3, c(0.5, 0.0))], 3);
        let cfg = QmcConfig {
            points: 16,
            max_rel_stderr: 1e-12,
            ..QmcConfig::default()
        };
        assert!(matches!(
            norm_hp(&f, 3.0, HpMethod::Qmc(cfg)),
            Err(Error::QmcNonConvergence { .. })
        ));
    }

    #[test]
    fn a2_examples() {
        let mu = Measure::alpha(0.0).unwrap();
        assert_eq!(norm_a2(&DirichletSeries::one(3), &mu).unwrap(), 1.0);
        let two = poly(&[(2, c(1.0, 0.0))], 2);
        assert_relative_eq!(norm_a2(&two, &mu).unwrap(), 0.768_515, max_relative = 1e-6);
        let f = poly(&[(1, c(1.0, 0.0)), (2, c(1.0, 0.0))], 2);
        assert_relative_eq!(norm_a2(&f, &mu).unwrap(), 1.261_197, max_relative = 1e-6);
    }

    #[test]
    fn ap_examples() {
        let mu = Measure::alpha(0.0).unwrap();
        let two = poly(&[(2, c(1.0, 0.0))], 2);
        let r = norm_ap(&two, 2.0, &mu, HpMethod::default()).unwrap();
        assert_relative_eq!(r.value, norm_a2(&two, &mu).unwrap(), max_relative = 1e-10);
        for p in [1.0, 2.0, 3.5] {
            let one = norm_ap(&DirichletSeries::one(2), p, &mu, HpMethod::default()).unwrap();
            assert_relative_eq!(one.value, 1.0, max_relative = 1e-12);
        }
        let f = poly(&[(1, c(1.0, 0.5)), (3, c(-2.0, 0.0)), (10, c(0.0, 0.7))], 10);
        let r = norm_ap(&f, 2.0, &mu, HpMethod::default()).unwrap();
        assert_relative_eq!(r.value, norm_a2(&f, &mu).unwrap(), max_relative = 1e-10);
    }

    #[test]
    fn ap_qmc_agrees_with_exact_even_p() {
        let mu = Measure::alpha_with(1.0, 24).unwrap();
        let f = poly(&[(1, c(1.0, 0.0)), (2, c(0.5, 0.5)), (3, c(-0.3, 0.0))], 3);
        let exact = norm_ap(&f, 4.0, &mu, HpMethod::default()).unwrap();
        let qmc = norm_ap(&f, 4.0, &mu, HpMethod::Qmc(small_qmc())).unwrap();
        assert!((exact.value - qmc.value).abs() < 4.0 * qmc.stderr.unwrap() + 1e-9);
        // contractive inclusion
        let hp = norm_hp(&f, 4.0, HpMethod::default()).unwrap();
        assert!(exact.value <= hp.value);
    }

    #[test]
    fn kernel_examples() {
        let mu = Measure::alpha(0.0).unwrap();
        let k = kernel(&mu, c(1.0, 0.0), c(1.0, 0.0), 2).unwrap();
        let direct = 1.0 + 0.25 * (1.0 + 2f64.ln());
        assert_relative_eq!(k.value.re, direct, max_relative = 1e-14);
        assert!(k.value.im.abs() < 1e-15);
        assert!(k.tail > 0.0);
        // tail must dominate the true remainder
        let far = kernel(&mu, c(1.0, 0.0), c(1.0, 0.0), 200_000).unwrap();
        assert!(far.value.re - k.value.re <= k.tail);
        let big = kernel(&mu, c(30.0, 1.0), c(30.0, -1.0), 16).unwrap();
        assert!((big.value - c(1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(
            kernel(&mu, c(0.5, 0.0), c(1.0, 0.0), 4),
            Err(Error::UnboundedFunctional(_))
        ));
    }

    #[test]
    fn reproducing_property() {
        let mu = Measure::alpha(1.0).unwrap();
        let f = poly(&[(1, c(0.3, 0.0)), (4, c(1.0, -2.0)), (9, c(0.0, 1.5))], 12);
        let s = c(0.8, 3.1);
        let k = kernel_series(&mu, s, 12).unwrap();
        let via_kernel = inner_a2(&f, &k, &mu).unwrap();
        assert!((via_kernel - f.evaluate(s)).norm() < 1e-12);
    }

    #[test]
    fn point_eval_hp_examples() {
        let r = point_eval_norm_hp(c(1.0, 5.0), 2.0).unwrap();
        assert_relative_eq!(r.value, 1.282_549_830_2, max_relative = 1e-9);
        let big_p = point_eval_norm_hp(c(1.0, 0.0), 1e6).unwrap();
        assert!((big_p.value - 1.0).abs() < 1e-6);
        let far = point_eval_norm_hp(c(60.0, 0.0), 1.0).unwrap();
        assert!((far.value - 1.0).abs() < 1e-15);
        assert!(point_eval_norm_hp(c(0.5, 0.0), 2.0).is_err());
    }

    #[test]
    fn point_eval_a1_examples() {
        let mu = Measure::alpha(0.0).unwrap();
        let r = point_eval_bound_a1(&mu, c(10.0, 0.0), 10_000).unwrap();
        let direct: f64 = 1.0
            + (2..=100_000)
                .rev()
                .map(|n| (n as f64).powi(-10) * (1.0 + (n as f64).ln()))
                .sum::<f64>();
        assert!((r.value - direct).abs() < 1e-5);
        assert!((r.value - 1.001_69).abs() < 1e-5);
        assert!(r.value >= 1.0);
        let far = point_eval_bound_a1(&mu, c(80.0, 0.0), 100).unwrap();
        assert!((far.value - 1.0).abs() < 1e-15);
        assert!(matches!(
            point_eval_bound_a1(&mu, c(1.0, 0.0), 100),
            Err(Error::Divergent { abscissa, .. }) if abscissa == 1.0
        ));
    }

    #[test]
    fn ratio_alpha_examples() {
        assert_relative_eq!(point_eval_ratio_alpha(0.0, 2.0, c(1.0, 0.0)).unwrap().value, 1.0);
        assert_relative_eq!(
            point_eval_ratio_alpha(0.0, 2.0, c(0.75, 2.0)).unwrap().value,
            1.5,
            max_relative = 1e-14
        );
        let near = point_eval_ratio_alpha(1.0, 1.0, c(0.5 + 1e-8, 0.0)).unwrap();
        assert!(near.value > 1e20);
        assert!(matches!(
            point_eval_ratio_alpha(0.0, 2.0, c(0.5, 0.0)),
            Err(Error::Pole { .. })
        ));
    }
}
