//! Probability measures `d mu = h(sigma) d sigma` on `(0, inf)` and the weights
//! `w_h(n) = int n^{-2 sigma} h(sigma) d sigma` they induce on `A^2_mu`.

use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::quadrature::{
    composite_rule, gauss_laguerre, laguerre_rule, truncation_point, QuadratureRule, QuadratureSpec, Scheme,
};

pub type DensityFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

const MASS_TOLERANCE: f64 = 1e-8;

#[derive(Clone)]
pub enum MeasureKind {
    /// `mu_alpha`: density `2^{alpha+1} / Gamma(alpha+1) sigma^alpha e^{-2 sigma}`.
    Alpha { alpha: f64 },
    Density { label: String, h: DensityFn },
}

impl fmt::Debug for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureKind::Alpha { alpha } => write!(f, "Alpha({alpha})"),
            MeasureKind::Density { label, .. } => write!(f, "Density({label})"),
        }
    }
}

struct Inner {
    kind: MeasureKind,
    spec: QuadratureSpec,
    rule: QuadratureRule,
    refined: QuadratureRule,
    /// Raw Laguerre nodes/weights at `nodes` and `2 nodes`, for rescaled weight rules.
    laguerre: Option<[(Vec<f64>, Vec<f64>); 2]>,
    weights: Mutex<Vec<f64>>,
}

/// An immutable probability measure with a shared weight cache.
#[derive(Clone)]
pub struct Measure {
    inner: Arc<Inner>,
}

impl fmt::Debug for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.inner.kind)
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Measure {
    pub fn alpha(alpha: f64) -> Result<Self> {
        Self::alpha_with(alpha, 64)
    }

    /// `mu_alpha` integrated with a matched `nodes`-point generalized Laguerre rule.
    pub fn alpha_with(alpha: f64, nodes: usize) -> Result<Self> {
        if !(alpha > -1.0) || !alpha.is_finite() {
            return Err(Error::InvalidMeasure(format!(
                "alpha must be > -1, got {alpha}"
            )));
        }
        let spec = QuadratureSpec::laguerre(nodes, alpha, 2.0);
        spec.validate()?;
        // the density ratio against sigma^alpha e^{-2 sigma} is 2^{alpha+1} / Gamma(alpha+1)
        let c = ((alpha + 1.0) * std::f64::consts::LN_2 - ln_gamma(alpha + 1.0)).exp();
        let rule = laguerre_rule(nodes, alpha, 2.0, |_| c);
        let refined = laguerre_rule(2 * nodes, alpha, 2.0, |_| c);
        Ok(Self::assemble(MeasureKind::Alpha { alpha }, spec, rule, refined, None))
    }

    /// Measure with a user density. `h` must be a probability density on `(0, inf)`.
    pub fn density<F>(label: impl Into<String>, h: F, spec: QuadratureSpec) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::density_with_breaks(label.into(), Arc::new(h), spec, &[])
    }

    fn density_with_breaks(
        label: String,
        h: DensityFn,
        spec: QuadratureSpec,
        breaks: &[f64],
    ) -> Result<Self> {
        spec.validate()?;
        let mut laguerre = None;
        let (rule, refined) = match spec.scheme {
            Scheme::Laguerre { alpha, rate } => {
                let ratio = |s: f64| h(s) / (s.powf(alpha) * (-rate * s).exp());
                laguerre = Some([
                    gauss_laguerre(spec.nodes, alpha),
                    gauss_laguerre(2 * spec.nodes, alpha),
                ]);
                (
                    laguerre_rule(spec.nodes, alpha, rate, ratio),
                    laguerre_rule(2 * spec.nodes, alpha, rate, ratio),
                )
            }
            Scheme::Composite { sigma_max } => {
                let hf = |s: f64| h(s);
                let top = sigma_max.unwrap_or_else(|| truncation_point(&hf));
                (
                    composite_rule(&hf, top, breaks, spec.nodes, spec.tol, 0),
                    composite_rule(&hf, top, breaks, spec.nodes, spec.tol, 1),
                )
            }
        };
        validate_density(&*h, &rule)?;
        Ok(Self::assemble(
            MeasureKind::Density { label, h },
            spec,
            rule,
            refined,
            laguerre,
        ))
    }

    /// Density interpolated log-linearly through `(sigma, h)` samples, constant
    /// below the first sample and extrapolated with the last log-slope beyond
    /// the final one. With `normalize` the table is rescaled to unit mass.
    pub fn from_samples(
        samples: &[(f64, f64)],
        spec: QuadratureSpec,
        normalize: bool,
    ) -> Result<Self> {
        let table = SampledDensity::new(samples)?;
        let breaks: Vec<f64> = table.sigma.clone();
        let label = format!("samples[{}]", samples.len());
        if !normalize {
            return Self::density_with_breaks(label, sampled_fn(table), spec, &breaks);
        }
        let raw = sampled_fn(table.clone());
        let mass = match spec.scheme {
            Scheme::Laguerre { alpha, rate } => laguerre_rule(spec.nodes, alpha, rate, |s| {
                raw(s) / (s.powf(alpha) * (-rate * s).exp())
            })
            .total_mass(),
            Scheme::Composite { sigma_max } => {
                let hf = |s: f64| raw(s);
                let top = sigma_max.unwrap_or_else(|| truncation_point(&hf));
                composite_rule(&hf, top, &breaks, spec.nodes, spec.tol, 0).total_mass()
            }
        };
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidMeasure(format!(
                "sampled density has mass {mass}"
            )));
        }
        Self::density_with_breaks(label, sampled_fn(table.scaled(1.0 / mass)), spec, &breaks)
    }

    fn assemble(
        kind: MeasureKind,
        spec: QuadratureSpec,
        rule: QuadratureRule,
        refined: QuadratureRule,
        laguerre: Option<[(Vec<f64>, Vec<f64>); 2]>,
    ) -> Self {
        Measure {
            inner: Arc::new(Inner {
                kind,
                spec,
                rule,
                refined,
                laguerre,
                weights: Mutex::new(vec![1.0]),
            }),
        }
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.inner.kind
    }

    pub fn quadrature_spec(&self) -> &QuadratureSpec {
        &self.inner.spec
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.inner.rule
    }

    pub fn label(&self) -> String {
        match &self.inner.kind {
            MeasureKind::Alpha { alpha } => format!("alpha={alpha}"),
            MeasureKind::Density { label, .. } => format!("density:{label}"),
        }
    }

    /// Density value `h(sigma)`.
    pub fn density_at(&self, sigma: f64) -> f64 {
        match &self.inner.kind {
            MeasureKind::Alpha { alpha } => {
                if sigma <= 0.0 {
                    return 0.0;
                }
                let log = (alpha + 1.0) * std::f64::consts::LN_2 - ln_gamma(alpha + 1.0)
                    + alpha * sigma.ln()
                    - 2.0 * sigma;
                log.exp()
            }
            MeasureKind::Density { h, .. } => h(sigma),
        }
    }

    /// `int g d mu` with the base rule.
    pub fn integrate<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        self.inner.rule.apply(g)
    }

    /// `int g d mu`, failing if node doubling moves the estimate by more than the tolerance.
    pub fn integrate_checked<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        let estimate = self.inner.rule.apply(&g)?;
        let refined = self.inner.refined.apply(&g)?;
        let tolerance = self.inner.spec.tol;
        if (estimate - refined).abs() > tolerance * refined.abs().max(1e-300) {
            return Err(Error::QuadratureNonConvergence {
                estimate,
                refined,
                tolerance,
            });
        }
        Ok(refined)
    }

    /// `w_h(n)`; closed form for `mu_alpha`, quadrature otherwise.
    pub fn weight(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::InvalidIndex {
                index: 0,
                truncation: usize::MAX,
            });
        }
        Ok(self.weights(n)?[n - 1])
    }

    /// `w_h(1..=n)`, memoized.
    pub fn weights(&self, n: usize) -> Result<Vec<f64>> {
        let mut cache = self.inner.weights.lock().expect("weight cache poisoned");
        while cache.len() < n {
            let k = cache.len() + 1;
            let w = self.compute_weight(k as f64)?;
            cache.push(w);
        }
        Ok(cache[..n].to_vec())
    }

    /// `w_h(x) = int x^{-2 sigma} d mu` for real `x >= 1` (not cached).
    pub fn weight_real(&self, x: f64) -> Result<f64> {
        if !(x >= 1.0) {
            return Err(Error::InvalidMeasure(format!("weight at x = {x} < 1")));
        }
        self.compute_weight(x)
    }

    fn compute_weight(&self, x: f64) -> Result<f64> {
        if x == 1.0 {
            return Ok(1.0);
        }
        match &self.inner.kind {
            MeasureKind::Alpha { alpha } => Ok(alpha_weight_real(*alpha, x)),
            MeasureKind::Density { h, .. } => {
                let log = x.ln();
                match (self.inner.spec.scheme, &self.inner.laguerre) {
                    (Scheme::Laguerre { alpha, rate }, Some([base, doubled])) => {
                        // fold x^{-2 sigma} into the exponential factor of the rule
                        let shifted = rate + 2.0 * log;
                        let ratio = |s: f64| h(s) / (s.powf(alpha) * (-rate * s).exp());
                        let apply = |(nodes, weights): &(Vec<f64>, Vec<f64>)| -> Result<f64> {
                            let scale = shifted.powf(-(alpha + 1.0));
                            let mut total = 0.0;
                            for (xi, wi) in nodes.iter().zip(weights) {
                                if *wi == 0.0 {
                                    continue;
                                }
                                let v = ratio(xi / shifted);
                                if !v.is_finite() {
                                    return Err(Error::NonFinite(format!(
                                        "density ratio at sigma = {}",
                                        xi / shifted
                                    )));
                                }
                                total += wi * v;
                            }
                            Ok(scale * total)
                        };
                        let estimate = apply(base)?;
                        let refined = apply(doubled)?;
                        let tolerance = self.inner.spec.tol;
                        if (estimate - refined).abs() > tolerance * refined.abs() {
                            return Err(Error::QuadratureNonConvergence {
                                estimate,
                                refined,
                                tolerance,
                            });
                        }
                        Ok(refined)
                    }
                    _ => self.integrate_checked(|s| (-2.0 * s * log).exp()),
                }
            }
        }
    }
}

/// Closed-form weight of `mu_alpha`: `1 / (log n + 1)^{alpha + 1}`.
pub fn alpha_weight(alpha: f64, n: usize) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::InvalidMeasure(format!(
            "alpha must be > -1, got {alpha}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidIndex {
            index: 0,
            truncation: usize::MAX,
        });
    }
    Ok(alpha_weight_real(alpha, n as f64))
}

fn alpha_weight_real(alpha: f64, x: f64) -> f64 {
    (x.ln() + 1.0).powf(-(alpha + 1.0))
}

fn validate_density(h: &dyn Fn(f64) -> f64, rule: &QuadratureRule) -> Result<()> {
    let mut positive = 0usize;
    for &s in &rule.nodes {
        let v = h(s);
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidMeasure(format!(
                "density value {v} at sigma = {s}"
            )));
        }
        if v > 0.0 {
            positive += 1;
        }
    }
    // positivity on a sampled subinterval suffices
    if positive < 2 {
        return Err(Error::InvalidMeasure(
            "density is not positive on any sampled subinterval".into(),
        ));
    }
    let near_zero = [1e-8, 1e-6, 1e-4, 1e-2]
        .iter()
        .chain(rule.nodes.iter().take(4))
        .any(|&s| h(s) > 0.0);
    if !near_zero {
        return Err(Error::InvalidMeasure(
            "density vanishes near 0, so 0 is not in the support".into(),
        ));
    }
    let mass = rule.total_mass();
    if (mass - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::InvalidMeasure(format!(
            "total mass {mass} differs from 1 by more than {MASS_TOLERANCE:e}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone)]
struct SampledDensity {
    sigma: Vec<f64>,
    log_h: Vec<f64>,
    tail_slope: f64,
}

impl SampledDensity {
    fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidMeasure(
                "a sampled density needs at least two samples".into(),
            ));
        }
        let mut pts = samples.to_vec();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in pts.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidMeasure(format!(
                    "duplicate sample position {}",
                    w[0].0
                )));
            }
        }
        for &(s, v) in &pts {
            if !(s >= 0.0) || !(v > 0.0) || !v.is_finite() || !s.is_finite() {
                return Err(Error::InvalidMeasure(format!(
                    "sample ({s}, {v}) must have sigma >= 0 and h > 0"
                )));
            }
        }
        let sigma: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let log_h: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
        let k = sigma.len();
        let tail_slope = (log_h[k - 1] - log_h[k - 2]) / (sigma[k - 1] - sigma[k - 2]);
        if !(tail_slope < 0.0) {
            return Err(Error::InvalidMeasure(
                "sampled density must decay after its last sample".into(),
            ));
        }
        Ok(SampledDensity {
            sigma,
            log_h,
            tail_slope,
        })
    }

    fn scaled(&self, factor: f64) -> Self {
        let shift = factor.ln();
        SampledDensity {
            sigma: self.sigma.clone(),
            log_h: self.log_h.iter().map(|v| v + shift).collect(),
            tail_slope: self.tail_slope,
        }
    }

    fn eval(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let k = self.sigma.len();
        if s <= self.sigma[0] {
            return self.log_h[0].exp();
        }
        if s >= self.sigma[k - 1] {
            return (self.log_h[k - 1] + self.tail_slope * (s - self.sigma[k - 1])).exp();
        }
        let i = self.sigma.partition_point(|&x| x <= s) - 1;
        let t = (s - self.sigma[i]) / (self.sigma[i + 1] - self.sigma[i]);
        (self.log_h[i] * (1.0 - t) + self.log_h[i + 1] * t).exp()
    }
}

fn sampled_fn(table: SampledDensity) -> DensityFn {
    Arc::new(move |s| table.eval(s))
}

/// Measure config: `{"type":"alpha","alpha":0.0}` or
/// `{"type":"density","samples":[[sigma,h],...],"quadrature":{"nodes":64,"tol":1e-8}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MeasureConfig {
    Alpha {
        alpha: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        nodes: Option<usize>,
    },
    Density {
        samples: Vec<(f64, f64)>,
        #[serde(default = "composite_default")]
        quadrature: QuadratureSpec,
        #[serde(default = "yes")]
        normalize: bool,
    },
}

fn composite_default() -> QuadratureSpec {
    QuadratureSpec::composite(64, None)
}

fn yes() -> bool {
    true
}

impl MeasureConfig {
    pub fn build(&self) -> Result<Measure> {
        match self {
            MeasureConfig::Alpha { alpha, nodes } => Measure::alpha_with(*alpha, nodes.unwrap_or(64)),
            MeasureConfig::Density {
                samples,
                quadrature,
                normalize,
            } => Measure::from_samples(samples, *quadrature, *normalize),
        }
    }
}
