//! Reproducible experiments around the characterization of isometric
//! composition operators: point-evaluation profiles, the lower bound that rules
//! out constant-like symbols, norm profiles of `2^{-Phi}`, and a classifier that
//! combines them.

use num_complex::Complex64;
use serde::Serialize;

use crate::compose::{compose_basis, contraction_lower_bound, isometry_defect, DefectReport};
use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::qmc::QmcConfig;
use crate::spaces::{coefficient_norm, norm_hp, point_eval_bound_a1, HpMethod};
use crate::symbol::{Certificate, Lemma1Region, Symbol, DEFAULT_EPS_GRID};
use crate::zeta::zeta;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma2Point {
    pub sigma: f64,
    pub value: Option<f64>,
    pub tail: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma2Profile {
    pub measure: String,
    #[serde(rename = "N")]
    pub truncation: usize,
    pub points: Vec<Lemma2Point>,
    /// `S` nonincreasing in `sigma` over the convergent points.
    pub nonincreasing: bool,
    pub bounded_below_by_one: bool,
    /// `S(sigma_max) - 1`.
    pub excess_at_max: Option<f64>,
    /// `2 * 2^{-sigma_max} / w(2)`: twice the leading term of `S - 1`.
    pub threshold: Option<f64>,
    pub within_threshold: bool,
}

impl Lemma2Profile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sigma,S,tail\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{}\n",
                p.sigma,
                p.value.map(|v| v.to_string()).unwrap_or_default(),
                p.tail.map(|v| v.to_string()).unwrap_or_default()
            ));
        }
        out
    }
}

/// `S(sigma) = sum_n n^{-sigma} / w(n)` plus tail, the `A^1_mu` point-evaluation
/// bound, along a list of abscissas. Divergent points are reported, not fatal.
pub fn lemma2_profile(mu: &Measure, sigmas: &[f64], truncation: usize) -> Result<Lemma2Profile> {
    let mut points = Vec::with_capacity(sigmas.len());
    for &sigma in sigmas {
        match point_eval_bound_a1(mu, Complex64::new(sigma, 0.0), truncation) {
            Ok(est) => points.push(Lemma2Point {
                sigma,
                value: Some(est.value),
                tail: est.tail,
                error: None,
            }),
            Err(e) if e.is_numeric() => points.push(Lemma2Point {
                sigma,
                value: None,
                tail: None,
                error: Some(e.to_string()),
            }),
            Err(e) => return Err(e),
        }
    }

    let mut ok: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|p| p.value.map(|v| (p.sigma, v)))
        .collect();
    ok.sort_by(|a, b| a.0.total_cmp(&b.0));
    let nonincreasing = ok.windows(2).all(|w| w[1].1 <= w[0].1);
    let bounded_below_by_one = ok.iter().all(|p| p.1 >= 1.0);
    let (excess_at_max, threshold) = match ok.last() {
        Some(&(sigma, s)) => (
            Some(s - 1.0),
            Some(2.0 * 2f64.powf(-sigma) / mu.weight(2)?),
        ),
        None => (None, None),
    };
    let within_threshold = matches!((excess_at_max, threshold), (Some(e), Some(t)) if e < t);
    Ok(Lemma2Profile {
        measure: mu.label(),
        truncation,
        points,
        nonincreasing,
        bounded_below_by_one,
        excess_at_max,
        threshold,
        within_threshold,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop1Bound {
    /// `zeta(2 Re Phi(s))^{1/p} / S(Re s)`.
    pub value: f64,
    pub zeta_factor: f64,
    pub functional_bound: f64,
    pub re_phi: f64,
    pub point: (f64, f64),
    pub p: f64,
}

/// Lower bound for `||C_Phi||` when `c0 = 0`:
/// `||C_Phi|| >= ||delta_{Phi(s)}|| / ||delta_s|| >= zeta(2 Re Phi(s))^{1/p} / S(Re s)`.
pub fn prop1_bound(
    phi: &Symbol,
    mu: &Measure,
    p: f64,
    s: Complex64,
    truncation: usize,
) -> Result<Prop1Bound> {
    if phi.c0() != 0 {
        return Err(Error::InvalidSymbol("prop1 bound needs c0 = 0".into()));
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(p));
    }
    let re_phi = phi.evaluate(s).re;
    if !(re_phi > 0.5) {
        return Err(Error::Pole {
            what: "zeta(2 Re Phi(s))",
            at: 2.0 * re_phi,
        });
    }
    let zeta_factor = zeta(2.0 * re_phi)?.powf(1.0 / p);
    let functional_bound = point_eval_bound_a1(mu, s, truncation)?.value;
    Ok(Prop1Bound {
        value: zeta_factor / functional_bound,
        zeta_factor,
        functional_bound,
        re_phi,
        point: (s.re, s.im),
        p,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileRow {
    pub sigma: f64,
    /// `2^{-sigma}`.
    pub reference: f64,
    /// `||2^{-Phi(sigma + .)}||_{H^p}` over indices `<= N`.
    pub norm: f64,
    /// Coefficients past `N` were dropped, so `norm` is a lower estimate.
    pub truncated: bool,
    pub stderr: Option<f64>,
}

pub fn profile_csv(rows: &[ProfileRow]) -> String {
    let mut out = String::from("sigma,reference,norm,truncated\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.sigma, r.reference, r.norm, r.truncated));
    }
    out
}

/// `sigma -> (2^{-sigma}, ||2^{-Phi_sigma}||_{H^p})`, with `Phi_sigma(s) = Phi(sigma + s)`.
/// For admissible `c0 >= 1` symbols the norm never exceeds `2^{-sigma}`.
pub fn two_norm_profile(
    phi: &Symbol,
    p: f64,
    sigmas: &[f64],
    truncation: usize,
    qmc: QmcConfig,
) -> Result<Vec<ProfileRow>> {
    if phi.c0() == 0 {
        return Err(Error::InvalidSymbol("norm profile needs c0 >= 1".into()));
    }
    sigmas
        .iter()
        .map(|&sigma| {
            let shifted = phi.translate(sigma)?.shifted;
            let g = compose_basis(&shifted, 2, truncation)?;
            let truncated = !g.is_exact();
            let (norm, stderr) = if p == 2.0 {
                (coefficient_norm(&g), None)
            } else {
                let r = norm_hp(&g.with_exact(true), p, HpMethod::Auto(qmc))?;
                (r.value, r.stderr)
            };
            Ok(ProfileRow {
                sigma,
                reference: 2f64.powf(-sigma),
                norm,
                truncated,
                stderr,
            })
        })
        .collect()
}

/// `2^{-lb}` with `lb` the certified lower bound of `Re Phi` on `Re s > sigma`;
/// bounds `||2^{-Phi_sigma}||_{H^inf}` since `|2^{-w}| = 2^{-Re w}`.
pub fn hinf_bound_2pow(phi: &Symbol, sigma: f64) -> Result<f64> {
    let shifted = phi.translate(sigma)?.shifted;
    Ok(2f64.powf(-shifted.halfplane_lower_bound(0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassVerdict {
    /// Vertical translation: isometric, invertible and Fredholm.
    Isometry,
    NotIsometry,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyOptions {
    /// Minimum isometry defect for a `NotIsometry` verdict.
    pub threshold: f64,
    /// Stabilization requires `delta < defect * stabilization`.
    pub stabilization: f64,
    pub sigma_grid: Vec<f64>,
    /// Abscissa for the `c0 = 0` lower bound.
    pub prop1_abscissa: f64,
    /// Margin `eta` asked of `c0 = 0` symbols.
    pub eta: f64,
    pub qmc: QmcConfig,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            threshold: 0.01,
            stabilization: 0.1,
            sigma_grid: vec![0.25, 0.5, 1.0, 2.0],
            prop1_abscissa: 12.0,
            eta: 1e-6,
            qmc: QmcConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub symbol: Symbol,
    pub measure: String,
    #[serde(rename = "N")]
    pub truncation: usize,
    pub p: f64,
    pub vertical_translation: Option<f64>,
    pub admissibility: Certificate,
    pub isometry_defect: Option<DefectReport>,
    pub contraction_bound: Option<f64>,
    pub lemma1: Lemma1Region,
    pub two_norm_profile: Vec<ProfileRow>,
    pub prop1: Option<Prop1Bound>,
    pub threshold: f64,
    pub verdict: ClassVerdict,
    pub notes: Vec<String>,
}

pub fn classify(phi: &Symbol, mu: &Measure, truncation: usize, p: f64) -> Result<ClassificationReport> {
    classify_with(phi, mu, truncation, p, &ClassifyOptions::default())
}

/// The verdict is structural: a symbol is an isometry exactly when it is a
/// vertical translation. The numerics are attached as corroboration, and
/// `NotIsometry` additionally needs a stabilized defect above the threshold.
pub fn classify_with(
    phi: &Symbol,
    mu: &Measure,
    truncation: usize,
    p: f64,
    opts: &ClassifyOptions,
) -> Result<ClassificationReport> {
    let vertical_translation = phi.vertical_translation();
    let mut notes = Vec::new();
    let admissibility = if phi.c0() == 0 {
        phi.check_theorem2(opts.eta)?
    } else {
        phi.check_theorem1()?
    };

    let (isometry_defect, contraction_bound) = if admissibility.is_no() {
        notes.push("symbol refuted; operator diagnostics skipped".into());
        (None, None)
    } else {
        (
            Some(isometry_defect(phi, mu, truncation)?),
            Some(contraction_lower_bound(phi, mu, truncation)?),
        )
    };

    let two_norm_profile = if phi.c0() >= 1 && !admissibility.is_no() {
        two_norm_profile(phi, p, &opts.sigma_grid, truncation, opts.qmc)?
    } else {
        Vec::new()
    };

    let prop1 = if phi.c0() == 0 {
        let s = Complex64::new(opts.prop1_abscissa, 0.0);
        match prop1_bound(phi, mu, p, s, truncation) {
            Ok(b) => {
                if b.value > 1.0 {
                    notes.push(format!("not a contraction: norm >= {}", b.value));
                }
                Some(b)
            }
            Err(e) if e.is_numeric() => {
                notes.push(format!("prop1 bound unavailable: {e}"));
                None
            }
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    let verdict = if vertical_translation.is_some() {
        ClassVerdict::Isometry
    } else if phi.c0() == 0 || !admissibility.is_yes() {
        ClassVerdict::Inconclusive
    } else {
        match &isometry_defect {
            Some(d) if d.defect > opts.threshold && d.delta < d.defect * opts.stabilization => {
                ClassVerdict::NotIsometry
            }
            Some(d) => {
                notes.push(format!(
                    "defect {} with delta {} did not clear the threshold {}",
                    d.defect, d.delta, opts.threshold
                ));
                ClassVerdict::Inconclusive
            }
            None => ClassVerdict::Inconclusive,
        }
    };

    Ok(ClassificationReport {
        symbol: phi.clone(),
        measure: mu.label(),
        truncation,
        p,
        vertical_translation,
        admissibility,
        isometry_defect,
        contraction_bound,
        lemma1: phi.lemma1_region(&DEFAULT_EPS_GRID),
        two_norm_profile,
        prop1,
        threshold: opts.threshold,
        verdict,
        notes,
    })
}
