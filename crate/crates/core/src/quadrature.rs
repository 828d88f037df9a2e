//! Gauss rules on `(0, inf)` for integrals against a density `h`.
//!
//! Nodes and weights of the classical rules come from the Golub–Welsch
//! eigenvalue method on the Jacobi matrix of the orthogonal family.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// A rule `int_0^inf g(sigma) h(sigma) d sigma ~ sum_i w_i g(x_i)`, with `h` folded into `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn apply<F: Fn(f64) -> f64>(&self, g: F) -> Result<f64> {
        let mut total = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            if w == 0.0 {
                continue;
            }
            let v = g(x);
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("integrand at sigma = {x}")));
            }
            total += w * v;
        }
        Ok(total)
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// Generalized Gauss–Laguerre for the factor `sigma^alpha e^{-rate sigma}`.
    Laguerre { alpha: f64, rate: f64 },
    /// Composite Gauss–Legendre on `(0, sigma_max]`, graded towards 0.
    Composite { sigma_max: Option<f64> },
}

fn default_rate() -> f64 {
    2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "SpecJson", into = "SpecJson")]
pub struct QuadratureSpec {
    pub nodes: usize,
    pub tol: f64,
    pub scheme: Scheme,
}

/// Wire form: `{"nodes":64,"tol":1e-8,"scheme":"laguerre","alpha":0,"rate":2}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct SpecJson {
    #[serde(default = "default_nodes")]
    nodes: usize,
    #[serde(default = "default_tol", alias = "tolerance")]
    tol: f64,
    #[serde(default = "default_scheme_name")]
    scheme: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma_max: Option<f64>,
}

fn default_scheme_name() -> String {
    "laguerre".into()
}

impl From<SpecJson> for QuadratureSpec {
    fn from(j: SpecJson) -> Self {
        let scheme = if j.scheme.eq_ignore_ascii_case("composite") {
            Scheme::Composite {
                sigma_max: j.sigma_max,
            }
        } else {
            Scheme::Laguerre {
                alpha: j.alpha.unwrap_or(0.0),
                rate: j.rate.unwrap_or_else(default_rate),
            }
        };
        QuadratureSpec {
            nodes: j.nodes,
            tol: j.tol,
            scheme,
        }
    }
}

impl From<QuadratureSpec> for SpecJson {
    fn from(q: QuadratureSpec) -> Self {
        let (scheme, alpha, rate, sigma_max) = match q.scheme {
            Scheme::Laguerre { alpha, rate } => ("laguerre", Some(alpha), Some(rate), None),
            Scheme::Composite { sigma_max } => ("composite", None, None, sigma_max),
        };
        SpecJson {
            nodes: q.nodes,
            tol: q.tol,
            scheme: scheme.into(),
            alpha,
            rate,
            sigma_max,
        }
    }
}

fn default_nodes() -> usize {
    64
}

fn default_tol() -> f64 {
    1e-8
}

fn default_scheme() -> Scheme {
    Scheme::Laguerre {
        alpha: 0.0,
        rate: 2.0,
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes: default_nodes(),
            tol: default_tol(),
            scheme: default_scheme(),
        }
    }
}

impl QuadratureSpec {
    pub fn laguerre(nodes: usize, alpha: f64, rate: f64) -> Self {
        QuadratureSpec {
            nodes,
            tol: default_tol(),
            scheme: Scheme::Laguerre { alpha, rate },
        }
    }

    pub fn composite(nodes: usize, sigma_max: Option<f64>) -> Self {
        QuadratureSpec {
            nodes,
            tol: default_tol(),
            scheme: Scheme::Composite { sigma_max },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 2 {
            return Err(Error::InvalidQuadrature(format!(
                "node count {} < 2",
                self.nodes
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidQuadrature(format!(
                "tolerance {} must be positive",
                self.tol
            )));
        }
        match self.scheme {
            Scheme::Laguerre { alpha, rate } => {
                if !(alpha > -1.0) || !(rate > 0.0) {
                    return Err(Error::InvalidQuadrature(format!(
                        "Laguerre factor needs alpha > -1 and rate > 0 (got {alpha}, {rate})"
                    )));
                }
            }
            Scheme::Composite { sigma_max } => {
                if let Some(m) = sigma_max {
                    if !(m > 0.0) || !m.is_finite() {
                        return Err(Error::InvalidQuadrature(format!("sigma_max {m}")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Gauss rule from the Jacobi matrix (diagonal `a`, off-diagonal `b`) and total mass `mu0`.
fn golub_welsch(a: &[f64], b: &[f64], mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = a[i];
    }
    for i in 0..n - 1 {
        j[(i, i + 1)] = b[i];
        j[(i + 1, i)] = b[i];
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs.into_iter().unzip()
}

/// Generalized Gauss–Laguerre for `int_0^inf x^alpha e^{-x} g(x) dx`.
pub fn gauss_laguerre(n: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    let a: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 + alpha + 1.0).collect();
    let b: Vec<f64> = (1..n)
        .map(|i| (i as f64 * (i as f64 + alpha)).sqrt())
        .collect();
    golub_welsch(&a, &b, ln_gamma(alpha + 1.0).exp())
}

/// Gauss–Legendre on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let a = vec![0.0; n];
    let b: Vec<f64> = (1..n)
        .map(|i| {
            let i = i as f64;
            i / (4.0 * i * i - 1.0).sqrt()
        })
        .collect();
    golub_welsch(&a, &b, 2.0)
}

/// Laguerre rule for `int h g` where `h / (sigma^alpha e^{-rate sigma})` is evaluated by `ratio`.
pub(crate) fn laguerre_rule<F: Fn(f64) -> f64>(
    n: usize,
    alpha: f64,
    rate: f64,
    ratio: F,
) -> QuadratureRule {
    let (x, w) = gauss_laguerre(n, alpha);
    let scale = rate.powf(-(alpha + 1.0));
    let nodes: Vec<f64> = x.iter().map(|xi| xi / rate).collect();
    let weights = nodes
        .iter()
        .zip(&w)
        .map(|(&s, &wi)| {
            if wi == 0.0 {
                0.0
            } else {
                scale * wi * ratio(s)
            }
        })
        .collect();
    QuadratureRule { nodes, weights }
}

const PANEL_ORDER: usize = 16;

/// Composite Gauss–Legendre rule for `int_0^{sigma_max} h g`.
///
/// Panels are graded geometrically towards 0, cut at `breaks`, and split
/// adaptively until the panel mass of `h` is stable to `tol`. `levels` extra
/// uniform halvings are applied afterwards (used for node doubling).
pub(crate) fn composite_rule<F: Fn(f64) -> f64>(
    h: &F,
    sigma_max: f64,
    breaks: &[f64],
    min_nodes: usize,
    tol: f64,
    levels: u32,
) -> QuadratureRule {
    let (gx, gw) = gauss_legendre(PANEL_ORDER);
    let panel = |lo: f64, hi: f64| -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        gx.iter()
            .zip(&gw)
            .map(|(x, w)| w * half * h(mid + half * x))
            .sum()
    };

    let mut cuts: Vec<f64> = Vec::new();
    let mut g = sigma_max.min(1.0);
    for _ in 0..60 {
        cuts.push(g);
        g *= 0.5;
    }
    let mut unit = 1.0;
    while unit < sigma_max {
        cuts.push(unit);
        unit += 1.0;
    }
    cuts.push(sigma_max);
    cuts.extend(breaks.iter().copied().filter(|&b| b > 0.0 && b < sigma_max));
    cuts.push(0.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * sigma_max);

    let mut panels: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
    // adaptive refinement on the mass of h
    for _ in 0..12 {
        let mut next = Vec::with_capacity(panels.len());
        let mut changed = false;
        for &(lo, hi) in &panels {
            let mid = 0.5 * (lo + hi);
            let whole = panel(lo, hi);
            let split = panel(lo, mid) + panel(mid, hi);
            if (whole - split).abs() > 0.1 * tol * (hi - lo).min(1.0) && hi - lo > 1e-9 {
                next.push((lo, mid));
                next.push((mid, hi));
                changed = true;
            } else {
                next.push((lo, hi));
            }
        }
        panels = next;
        if !changed {
            break;
        }
    }
    while panels.len() * PANEL_ORDER < min_nodes {
        panels = halve(&panels);
    }
    for _ in 0..levels {
        panels = halve(&panels);
    }

    let mut nodes = Vec::with_capacity(panels.len() * PANEL_ORDER);
    let mut weights = Vec::with_capacity(panels.len() * PANEL_ORDER);
    for (lo, hi) in panels {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for (x, w) in gx.iter().zip(&gw) {
            let s = mid + half * x;
            nodes.push(s);
            weights.push(w * half * h(s));
        }
    }
    QuadratureRule { nodes, weights }
}

fn halve(panels: &[(f64, f64)]) -> Vec<(f64, f64)> {
    panels
        .iter()
        .flat_map(|&(lo, hi)| {
            let mid = 0.5 * (lo + hi);
            [(lo, mid), (mid, hi)]
        })
        .collect()
}

/// Smallest `2^k >= 8` beyond which `h` carries less than `1e-12` mass.
pub(crate) fn truncation_point<F: Fn(f64) -> f64>(h: &F) -> f64 {
    let (gx, gw) = gauss_legendre(PANEL_ORDER);
    let mass = |lo: f64, hi: f64| -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        gx.iter()
            .zip(&gw)
            .map(|(x, w)| w * half * h(mid + half * x))
            .sum()
    };
    let mut upper = 8.0;
    while upper < 4096.0 {
        // crude tail estimate over the next four doublings
        let tail: f64 = (0..4)
            .map(|k| {
                let lo = upper * f64::powi(2.0, k);
                mass(lo, 2.0 * lo)
            })
            .sum();
        if tail < 1e-12 {
            break;
        }
        upper *= 2.0;
    }
    upper
}
