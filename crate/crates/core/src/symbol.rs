//! Symbols `Phi(s) = c0 s + phi(s)` with `phi` a Dirichlet polynomial, and
//! certified checks of the half-plane mapping conditions that make `C_Phi`
//! bounded.
//!
//! Containment of a half-plane image cannot be decided by sampling, so every
//! check is three-valued: a sufficient coefficient inequality certifies
//! containment, an explicit witness point refutes it, and anything else is
//! reported as unknown.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{DirichletSeries, SeriesJson};

/// A witness must violate the claimed containment by more than this.
pub const WITNESS_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    c0: u32,
    phi: DirichletSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    CertifiedYes,
    CertifiedNo { witness: Complex64 },
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertMethod {
    ImaginaryConstant,
    CoefficientDominance,
    GridRefutation,
    GridInconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(flatten)]
    pub verdict: Verdict,
    /// Certified slack for a yes, the violation (negative) for a no, the
    /// smallest observed slack otherwise.
    pub margin: f64,
    pub method: CertMethod,
}

impl Certificate {
    pub fn is_yes(&self) -> bool {
        matches!(self.verdict, Verdict::CertifiedYes)
    }

    pub fn is_no(&self) -> bool {
        matches!(self.verdict, Verdict::CertifiedNo { .. })
    }

    pub fn witness(&self) -> Option<Complex64> {
        match self.verdict {
            Verdict::CertifiedNo { witness } => Some(witness),
            _ => None,
        }
    }
}

/// `Phi_sigma(s) = Phi(sigma + s)` and the normalized `Psi_sigma = Phi_sigma - sigma`.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslatedSymbol {
    pub shifted: Symbol,
    pub normalized: Symbol,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Lemma1Region {
    /// Vertical translations are excluded by hypothesis.
    VerticalTranslation,
    Found { eps: f64, eta: f64 },
    /// No grid point certified; the bound is sufficient, not necessary.
    Unknown,
}

impl Symbol {
    pub fn new(c0: u32, phi: DirichletSeries) -> Result<Self> {
        if !phi.is_exact() {
            return Err(Error::InvalidSymbol(
                "phi must be an exact Dirichlet polynomial".into(),
            ));
        }
        Ok(Symbol { c0, phi })
    }

    pub fn from_terms(c0: u32, terms: &[(i64, Complex64)]) -> Result<Self> {
        let top = terms.iter().map(|t| t.0).max().unwrap_or(1).max(1);
        let n = usize::try_from(top).map_err(|_| Error::InvalidSymbol("bad index".into()))?;
        Self::new(c0, DirichletSeries::from_terms(terms.iter().copied(), n)?)
    }

    /// `s + i tau`.
    pub fn vertical_translation_by(tau: f64) -> Self {
        Symbol {
            c0: 1,
            phi: DirichletSeries::monomial(1, Complex64::new(0.0, tau), 1),
        }
    }

    pub fn c0(&self) -> u32 {
        self.c0
    }

    pub fn phi(&self) -> &DirichletSeries {
        &self.phi
    }

    /// Constant term `c_1` of `phi`.
    pub fn c1(&self) -> Complex64 {
        self.phi.coeff(1)
    }

    pub fn evaluate(&self, s: Complex64) -> Complex64 {
        s * self.c0 as f64 + self.phi.evaluate(s)
    }

    /// `sum_{k >= 2} |c_k| k^{-eps}`.
    pub fn tail_sum(&self, eps: f64) -> f64 {
        self.phi
            .terms()
            .filter(|(k, _)| *k >= 2)
            .map(|(k, c)| c.norm() * (k as f64).powf(-eps))
            .sum()
    }

    fn is_constant(&self) -> bool {
        self.phi.terms().all(|(k, _)| k == 1)
    }

    /// `tau` when `Phi(s) = s + i tau`.
    pub fn vertical_translation(&self) -> Option<f64> {
        if self.c0 == 1 && self.is_constant() && self.c1().re == 0.0 {
            Some(self.c1().im)
        } else {
            None
        }
    }

    /// Certified lower bound of `Re Phi` on `Re s > eps`:
    /// `c0 eps + Re c_1 - sum_{k >= 2} |c_k| k^{-eps}`.
    pub fn halfplane_lower_bound(&self, eps: f64) -> f64 {
        self.c0 as f64 * eps + self.c1().re - self.tail_sum(eps)
    }

    /// Bounded-composition test for `c0 >= 1`: does `phi` map `Re s > 0` into itself?
    pub fn check_theorem1(&self) -> Result<Certificate> {
        if self.c0 == 0 {
            return Err(Error::InvalidSymbol(
                "the c0 >= 1 criterion needs c0 >= 1".into(),
            ));
        }
        if self.is_constant() && self.c1().re == 0.0 {
            return Ok(Certificate {
                verdict: Verdict::CertifiedYes,
                margin: 0.0,
                method: CertMethod::ImaginaryConstant,
            });
        }
        let slack = self.c1().re - self.tail_sum(0.0);
        if slack >= 0.0 {
            return Ok(Certificate {
                verdict: Verdict::CertifiedYes,
                margin: slack,
                method: CertMethod::CoefficientDominance,
            });
        }
        Ok(self.refute(0.0, 2.0))
    }

    /// Criterion for `c0 = 0`: image of `Re s > 0` inside `Re w > 1/2 + eta`
    /// certifies boundedness on `A^2_mu`; a point with `Re Phi <= 1/2` refutes
    /// the necessary condition.
    pub fn check_theorem2(&self, eta: f64) -> Result<Certificate> {
        if self.c0 != 0 {
            return Err(Error::InvalidSymbol(
                "the c0 = 0 criterion needs c0 = 0".into(),
            ));
        }
        if !(eta > 0.0) {
            return Err(Error::InvalidSymbol(format!("eta must be positive, got {eta}")));
        }
        let slack = self.c1().re - self.tail_sum(0.0) - (0.5 + eta);
        if slack >= 0.0 {
            return Ok(Certificate {
                verdict: Verdict::CertifiedYes,
                margin: slack,
                method: CertMethod::CoefficientDominance,
            });
        }
        Ok(self.refute(0.5, 2.0))
    }

    /// Phase-targeted search for `s` with `Re s > 0` and `Re phi(s) < threshold`.
    fn refute(&self, threshold: f64, sigma_max: f64) -> Certificate {
        const T: f64 = 50.0;
        let terms: Vec<(f64, Complex64)> = self
            .phi
            .terms()
            .map(|(k, c)| ((k as f64).ln(), c))
            .collect();
        let re_phi = |s: Complex64| -> f64 {
            terms
                .iter()
                .map(|&(log_k, c)| (c * (-s * log_k).exp()).re)
                .sum()
        };

        let mut sigmas = Vec::new();
        let mut sigma = sigma_max;
        while sigma > 1e-9 {
            sigmas.push(sigma);
            sigma *= 0.5;
        }
        let mut ts: Vec<f64> = (-1000..=1000).map(|i| i as f64 * T / 1000.0).collect();
        for &(log_k, c) in &terms {
            if log_k == 0.0 {
                continue;
            }
            // c k^{-it} points along the negative real axis
            let base = (c.arg() - PI) / log_k;
            let step = 2.0 * PI / log_k;
            let m_max = (T / step).ceil() as i64 + 1;
            for m in -m_max..=m_max {
                let t = base + m as f64 * step;
                if t.abs() <= T {
                    ts.push(t);
                }
            }
        }

        let mut best = (f64::INFINITY, Complex64::new(sigma_max, 0.0));
        for &sigma in &sigmas {
            for &t in &ts {
                let s = Complex64::new(sigma, t);
                let v = re_phi(s);
                if v < best.0 {
                    best = (v, s);
                }
            }
        }
        let (value, witness) = best;
        if value < threshold - WITNESS_SLACK {
            Certificate {
                verdict: Verdict::CertifiedNo { witness },
                margin: value - threshold,
                method: CertMethod::GridRefutation,
            }
        } else {
            Certificate {
                verdict: Verdict::Unknown,
                margin: value - threshold,
                method: CertMethod::GridInconclusive,
            }
        }
    }

    pub fn translate(&self, sigma: f64) -> Result<TranslatedSymbol> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidTranslation(sigma));
        }
        let moved = self.phi.translate(sigma)?;
        let with_constant = |k: f64| -> Result<Symbol> {
            let shift = DirichletSeries::monomial(1, Complex64::new(k * sigma, 0.0), 1)
                .with_truncation(moved.truncation())?;
            let one = Complex64::new(1.0, 0.0);
            Symbol::new(self.c0, DirichletSeries::linear(&moved, &shift, one, one))
        };
        Ok(TranslatedSymbol {
            shifted: with_constant(self.c0 as f64)?,
            normalized: with_constant(self.c0 as f64 - 1.0)?,
        })
    }

    /// `Re(Phi(sigma + s) - sigma) - (sigma (c0 - 1) + Re s)`, nonnegative for
    /// admissible `c0 >= 1` symbols. The linear parts cancel to `(c0 - 1) Re s`,
    /// which is how the value is computed.
    pub fn schwarz_margin(&self, sigma: f64, s: Complex64) -> Result<f64> {
        if self.c0 == 0 {
            return Err(Error::InvalidSymbol("schwarz margin needs c0 >= 1".into()));
        }
        if !(sigma > 0.0) || !(s.re > 0.0) {
            return Err(Error::InvalidSymbol(format!(
                "schwarz margin needs sigma > 0 and Re s > 0 (got {sigma}, {})",
                s.re
            )));
        }
        let linear = (self.c0 as f64 - 1.0) * s.re;
        Ok(linear + self.phi.evaluate(Complex64::new(sigma, 0.0) + s).re)
    }

    /// First `eps` in the grid with a certified `eta > 0` such that
    /// `Phi(Re s > 1/2 - eps)` lies in `Re w > 1/2 + eta`.
    pub fn lemma1_region(&self, eps_grid: &[f64]) -> Lemma1Region {
        if self.vertical_translation().is_some() {
            return Lemma1Region::VerticalTranslation;
        }
        for &eps in eps_grid {
            if !(eps > 0.0 && eps < 0.5) {
                continue;
            }
            let eta = self.halfplane_lower_bound(0.5 - eps) - 0.5;
            if eta > 0.0 {
                return Lemma1Region::Found { eps, eta };
            }
        }
        Lemma1Region::Unknown
    }

    /// Certified `eta` with `Phi(Re s > eps) ⊂ Re w > eps + eta`, when positive.
    pub fn lemma3_eta(&self, eps: f64) -> Option<f64> {
        let eta = self.halfplane_lower_bound(eps) - eps;
        (eta > 0.0).then_some(eta)
    }
}

pub const DEFAULT_EPS_GRID: [f64; 9] = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45];

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}s + {}", self.c0, self.phi)
    }
}

/// `{"c0": int, "phi": <series JSON>}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolJson {
    pub c0: u32,
    pub phi: SeriesJson,
}

impl Serialize for Symbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymbolJson {
            c0: self.c0,
            phi: self.phi.to_json(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = SymbolJson::deserialize(d)?;
        let phi = DirichletSeries::from_json(&json.phi).map_err(serde::de::Error::custom)?;
        Symbol::new(json.c0, phi).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sym(c0: u32, terms: &[(i64, f64, f64)]) -> Symbol {
        let t: Vec<(i64, Complex64)> = terms.iter().map(|&(k, a, b)| (k, c(a, b))).collect();
        Symbol::from_terms(c0, &t).unwrap()
    }

    #[test]
    fn vertical_translation_examples() {
        assert_eq!(sym(1, &[(1, 0.0, 3.0)]).vertical_translation(), Some(3.0));
        assert_eq!(sym(1, &[]).vertical_translation(), Some(0.0));
        assert_eq!(sym(2, &[]).vertical_translation(), None);
        assert_eq!(sym(1, &[(1, 0.1, 3.0)]).vertical_translation(), None);
        assert_eq!(sym(1, &[(1, 0.0, 3.0), (2, 0.1, 0.0)]).vertical_translation(), None);
    }

    /// Grid oracle for `inf Re Phi` on `Re s > eps`, approached along sigma -> eps.
    fn grid_inf(s: &Symbol, eps: f64) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..=40 {
            let sigma = eps + 1e-9 + i as f64 * 0.05;
            for j in 0..=4000 {
                let t = -20.0 + j as f64 * 0.01;
                best = best.min(s.evaluate(c(sigma, t)).re);
            }
        }
        best
    }

    #[test]
    fn halfplane_lower_bound_examples() {
        let tr = sym(1, &[(1, 0.0, 2.5)]);
        for eps in [0.0, 0.3, 1.7] {
            assert_eq!(tr.halfplane_lower_bound(eps), eps);
        }
        let phi = sym(1, &[(1, 1.0, 0.0), (2, 0.5, 0.0)]);
        assert_abs_diff_eq!(phi.halfplane_lower_bound(0.0), 0.5);
        let oracle = grid_inf(&phi, 0.0);
        assert!((0.5 - 1e-9..0.5 + 1e-3).contains(&oracle), "{oracle}");
        assert_abs_diff_eq!(sym(2, &[]).halfplane_lower_bound(0.3), 0.6);
    }

    #[test]
    fn theorem1_examples() {
        let yes = sym(1, &[(1, 2.0, 0.0), (2, 1.0, 0.0)]).check_theorem1().unwrap();
        assert!(yes.is_yes());
        assert_eq!(yes.method, CertMethod::CoefficientDominance);
        assert_abs_diff_eq!(yes.margin, 1.0);

        let no = sym(1, &[(1, -1.0, 0.0)]).check_theorem1().unwrap();
        let w = no.witness().expect("refuted");
        assert!(w.re > 0.0);
        assert!(sym(1, &[(1, -1.0, 0.0)]).phi().evaluate(w).re < -WITNESS_SLACK);

        let half = sym(1, &[(2, 0.5, 0.0)]);
        let cert = half.check_theorem1().unwrap();
        let w = cert.witness().expect("refuted");
        let v = half.phi().evaluate(w).re;
        assert!(v < -0.49, "{v} at {w}");

        let tr = sym(1, &[(1, 0.0, -4.0)]).check_theorem1().unwrap();
        assert_eq!(tr.method, CertMethod::ImaginaryConstant);
        assert!(sym(0, &[(1, 1.0, 0.0)]).check_theorem1().is_err());
    }

    #[test]
    fn theorem1_unknown_when_neither_side_certifies() {
        // (1 + z/2)^2 with z = 2^{-s}: coefficients not dominant, yet Re >= 1/4 on the disc
        let s = sym(1, &[(1, 1.0, 0.0), (2, 1.0, 0.0), (4, 0.25, 0.0)]);
        let cert = s.check_theorem1().unwrap();
        assert_eq!(cert.verdict, Verdict::Unknown);
        assert_abs_diff_eq!(cert.margin, 0.25, epsilon = 1e-6);
    }

    #[test]
    fn theorem2_examples() {
        let one = sym(0, &[(1, 1.0, 0.0)]);
        assert!(one.check_theorem2(0.5).unwrap().is_yes());
        assert!(one.check_theorem2(0.25).unwrap().is_yes());
        assert!(!one.check_theorem2(0.6).unwrap().is_yes());
        let low = sym(0, &[(1, 0.4, 0.0)]).check_theorem2(0.1).unwrap();
        assert!(low.is_no());
        let s = sym(0, &[(1, 1.0, 0.0), (2, 0.3, 0.0)]);
        assert!(s.check_theorem2(0.2).unwrap().is_yes());
        assert!(s.check_theorem2(0.1).unwrap().is_yes());
        assert!(!s.check_theorem2(0.25).unwrap().is_yes());
        assert!(sym(1, &[]).check_theorem2(0.1).is_err());
    }

    #[test]
    fn translate_examples() {
        let tr = sym(1, &[(1, 0.0, 2.0)]);
        for sigma in [0.1, 1.0, 3.0] {
            assert_eq!(tr.translate(sigma).unwrap().normalized, tr);
        }
        let dil = sym(2, &[]).translate(1.0).unwrap();
        assert_eq!(dil.normalized.c0(), 2);
        assert_eq!(dil.normalized.c1(), c(1.0, 0.0));
        assert_eq!(dil.shifted.c1(), c(2.0, 0.0));
        let p = sym(1, &[(2, 1.0, 0.0)]).translate(1.0).unwrap();
        assert_abs_diff_eq!(p.normalized.phi().coeff(2).re, 0.5, epsilon = 1e-15);
        assert_eq!(p.normalized.c1(), c(0.0, 0.0));
        assert!(sym(1, &[]).translate(0.0).is_err());
    }

    #[test]
    fn translate_shifts_evaluation() {
        let s = sym(3, &[(1, 0.2, 0.1), (6, -0.3, 0.4)]);
        let t = s.translate(0.7).unwrap();
        let z = c(0.4, -2.0);
        assert!((t.shifted.evaluate(z) - s.evaluate(z + 0.7)).norm() < 1e-14);
        assert!((t.normalized.evaluate(z) - (s.evaluate(z + 0.7) - 0.7)).norm() < 1e-14);
    }

    #[test]
    fn schwarz_margin_examples() {
        let tr = sym(1, &[(1, 0.0, 5.0)]);
        assert_eq!(tr.schwarz_margin(0.3, c(0.2, 1.0)).unwrap(), 0.0);
        let one = sym(1, &[(1, 1.0, 0.0)]);
        assert_abs_diff_eq!(one.schwarz_margin(1.0, c(1.0, 0.0)).unwrap(), 1.0);
        // Phi(2) - 1 - (1 + 1) = 4.25 - 3 = 1.25
        let two = sym(2, &[(2, 1.0, 0.0)]);
        let m = two.schwarz_margin(1.0, c(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(m, 1.25, epsilon = 1e-15);
        let literal = (two.evaluate(c(2.0, 0.0)) - 1.0).re - (1.0 * 1.0 + 1.0);
        assert_abs_diff_eq!(m, literal, epsilon = 1e-14);
    }

    #[test]
    fn lemma1_examples() {
        match sym(2, &[]).lemma1_region(&[0.1]) {
            Lemma1Region::Found { eps, eta } => {
                assert_eq!(eps, 0.1);
                assert_abs_diff_eq!(eta, 0.3, epsilon = 1e-15);
            }
            other => panic!("{other:?}"),
        }
        // bound = (1/2 - eps) + 1, eta = 1 - eps
        match sym(1, &[(1, 1.0, 0.0)]).lemma1_region(&[0.1]) {
            Lemma1Region::Found { eta, .. } => assert_abs_diff_eq!(eta, 0.9, epsilon = 1e-15),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            sym(1, &[(1, 0.0, 1.0)]).lemma1_region(&DEFAULT_EPS_GRID),
            Lemma1Region::VerticalTranslation
        );
        assert_eq!(
            sym(1, &[(2, 1.0, 0.0)]).lemma1_region(&DEFAULT_EPS_GRID),
            Lemma1Region::Unknown
        );
    }

    #[test]
    fn lemma3_examples() {
        assert_eq!(sym(1, &[(1, 0.0, 2.0)]).lemma3_eta(0.3), None);
        assert_abs_diff_eq!(sym(3, &[(1, 0.0, 2.0)]).lemma3_eta(0.3).unwrap(), 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(sym(1, &[(1, 0.5, 0.0)]).lemma3_eta(0.3).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn json_round_trip() {
        let s: Symbol = serde_json::from_str(r#"{"c0":1,"phi":{"terms":[[1,0,2]]}}"#).unwrap();
        assert_eq!(s.vertical_translation(), Some(2.0));
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<Symbol>(&text).unwrap(), s);
        let cert = sym(1, &[(1, -1.0, 0.0)]).check_theorem1().unwrap();
        let v: serde_json::Value = serde_json::to_value(cert).unwrap();
        assert_eq!(v["verdict"], "certified_no");
        assert!(v["witness"].is_array());
    }
}
