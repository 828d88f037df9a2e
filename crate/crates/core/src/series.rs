//! Truncated Dirichlet series `sum a_n n^{-s}` and their exact arithmetic.
//!
//! A series stores the coefficients `a_1..a_N`. Coefficients past `N` are
//! unknown unless the series is flagged exact, in which case it is a genuine
//! Dirichlet polynomial and everything past `N` is zero.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::{sieve, PrimeSieve};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct DirichletSeries {
    coeffs: Vec<Complex64>,
    exact: bool,
}

impl DirichletSeries {
    /// Builds an exact polynomial from `(index, coefficient)` pairs.
    /// Repeated indices are summed.
    pub fn from_terms<I>(terms: I, truncation: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        if truncation == 0 {
            return Err(Error::EmptyTruncation);
        }
        let mut coeffs = vec![ZERO; truncation];
        for (index, c) in terms {
            if index < 1 || index as u64 > truncation as u64 {
                return Err(Error::InvalidIndex { index, truncation });
            }
            coeffs[index as usize - 1] += c;
        }
        Ok(DirichletSeries {
            coeffs,
            exact: true,
        })
    }

    /// Wraps raw coefficients `a_1..a_N`.
    pub fn from_coeffs(coeffs: Vec<Complex64>, exact: bool) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyTruncation);
        }
        Ok(DirichletSeries { coeffs, exact })
    }

    pub fn zero(truncation: usize) -> Self {
        DirichletSeries {
            coeffs: vec![ZERO; truncation.max(1)],
            exact: true,
        }
    }

    pub fn one(truncation: usize) -> Self {
        Self::monomial(1, ONE, truncation)
    }

    /// `c * n^{-s}`; panics if `n` is 0 or beyond the truncation.
    pub fn monomial(n: usize, c: Complex64, truncation: usize) -> Self {
        assert!(n >= 1 && n <= truncation, "monomial index {n} out of range");
        let mut s = Self::zero(truncation);
        s.coeffs[n - 1] = c;
        s
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Coefficient `a_n`, 1-based; zero past the truncation.
    pub fn coeff(&self, n: usize) -> Complex64 {
        if n == 0 || n > self.coeffs.len() {
            ZERO
        } else {
            self.coeffs[n - 1]
        }
    }

    /// Coefficients `a_1..a_N` (slot `i` holds `a_{i+1}`).
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Nonzero `(n, a_n)` pairs in increasing `n`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != ZERO)
            .map(|(i, c)| (i + 1, *c))
    }

    /// Largest index carrying a nonzero coefficient (1 for the zero series).
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| *c != ZERO)
            .map_or(1, |i| i + 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    /// Re-truncates to `n`. Growing is only allowed for exact series.
    pub fn with_truncation(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyTruncation);
        }
        if n > self.truncation() && !self.exact {
            return Err(Error::TruncationExceeded {
                requested: n,
                available: self.truncation(),
            });
        }
        let mut coeffs = self.coeffs.clone();
        let dropped = n < coeffs.len() && coeffs[n..].iter().any(|c| *c != ZERO);
        coeffs.resize(n, ZERO);
        Ok(DirichletSeries {
            coeffs,
            exact: self.exact && !dropped,
        })
    }

    /// Marks the series as a genuine polynomial or as a truncation.
    pub fn with_exact(mut self, exact: bool) -> Self {
        self.exact = exact;
        self
    }

    pub fn scale(&self, a: Complex64) -> Self {
        DirichletSeries {
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
            exact: self.exact,
        }
    }

    /// `a f + b g` up to the smaller truncation.
    pub fn linear(f: &Self, g: &Self, a: Complex64, b: Complex64) -> Self {
        let n = f.truncation().min(g.truncation());
        let coeffs = (0..n).map(|i| a * f.coeffs[i] + b * g.coeffs[i]).collect();
        let dropped = |s: &Self, c: Complex64| c != ZERO && s.coeffs[n..].iter().any(|x| *x != ZERO);
        DirichletSeries {
            coeffs,
            exact: f.exact && g.exact && !dropped(f, a) && !dropped(g, b),
        }
    }

    /// Dirichlet convolution `(f g)_n = sum_{d | n} f_d g_{n/d}` for `n <= truncation`.
    pub fn multiply(f: &Self, g: &Self, truncation: usize) -> Result<Self> {
        let available = f.truncation().min(g.truncation());
        if truncation > available && !(f.exact && g.exact) {
            return Err(Error::TruncationExceeded {
                requested: truncation,
                available,
            });
        }
        if truncation == 0 {
            return Err(Error::EmptyTruncation);
        }
        let mut out = vec![ZERO; truncation];
        let gs: Vec<(usize, Complex64)> = g.terms().filter(|(n, _)| *n <= truncation).collect();
        for (d, fd) in f.terms() {
            if d > truncation {
                break;
            }
            let limit = truncation / d;
            for &(e, ge) in &gs {
                if e > limit {
                    break;
                }
                out[d * e - 1] += fd * ge;
            }
        }
        let exact = f.exact && g.exact && f.degree().saturating_mul(g.degree()) <= truncation;
        Ok(DirichletSeries { coeffs: out, exact })
    }

    /// `exp(f) = sum_m f^m / m!` truncated at `truncation`.
    ///
    /// Uses the logarithmic-derivative recurrence
    /// `g_n log n = sum_{d | n, d > 1} f_d log(d) g_{n/d}` with `g_1 = 1`.
    pub fn exp(f: &Self, truncation: usize) -> Result<Self> {
        let c1 = f.coeff(1);
        if c1 != ZERO {
            return Err(Error::ConstantTerm {
                re: c1.re,
                im: c1.im,
            });
        }
        if truncation == 0 {
            return Err(Error::EmptyTruncation);
        }
        if truncation > f.truncation() && !f.exact {
            return Err(Error::TruncationExceeded {
                requested: truncation,
                available: f.truncation(),
            });
        }
        // f_d log d, restricted to the range that can contribute.
        let weighted: Vec<(usize, Complex64)> = f
            .terms()
            .take_while(|(d, _)| *d <= truncation)
            .map(|(d, c)| (d, c * (d as f64).ln()))
            .collect();
        let mut acc = vec![ZERO; truncation];
        acc[0] = ONE;
        for n in 1..=truncation {
            let gn = if n == 1 {
                ONE
            } else {
                acc[n - 1] / (n as f64).ln()
            };
            acc[n - 1] = gn;
            if gn == ZERO {
                continue;
            }
            let limit = truncation / n;
            for &(d, fd) in &weighted {
                if d > limit {
                    break;
                }
                acc[n * d - 1] += fd * gn;
            }
        }
        Ok(DirichletSeries {
            coeffs: acc,
            exact: f.is_zero() && f.exact,
        })
    }

    /// Vertical translate `f_sigma(s) = f(sigma + s)`: `a_n -> a_n n^{-sigma}`.
    pub fn translate(&self, sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidTranslation(sigma));
        }
        Ok(self.translate_unchecked(sigma))
    }

    /// Same as [`translate`](Self::translate) without the sign restriction.
    pub(crate) fn translate_unchecked(&self, sigma: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i == 0 || *c == ZERO {
                    *c
                } else {
                    c * ((i + 1) as f64).powf(-sigma)
                }
            })
            .collect();
        DirichletSeries {
            coeffs,
            exact: self.exact,
        }
    }

    /// Partial sum `sum_{n <= N} a_n n^{-s}`.
    pub fn evaluate(&self, s: Complex64) -> Complex64 {
        self.terms().map(|(n, c)| c * n_pow_neg(n, s)).sum()
    }

    pub fn bohr_lift(&self) -> Result<PolytorusPolynomial> {
        if !self.exact {
            return Err(Error::NotExact { op: "bohr_lift" });
        }
        let sv = sieve(self.truncation());
        Ok(PolytorusPolynomial::from_terms(
            self.terms().map(|(n, c)| (BohrMonomial::of_index(n, &sv), c)),
        ))
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            truncation: Some(self.truncation()),
            exact: Some(self.exact),
            terms: self.terms().map(|(n, c)| (n as i64, c.re, c.im)).collect(),
        }
    }

    pub fn from_json(json: &SeriesJson) -> Result<Self> {
        let max_index = json.terms.iter().map(|t| t.0).max().unwrap_or(1).max(1);
        let truncation = json.truncation.unwrap_or(max_index as usize);
        let s = Self::from_terms(
            json.terms
                .iter()
                .map(|&(n, re, im)| (n, Complex64::new(re, im))),
            truncation,
        )?;
        if s.coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("series coefficients".into()));
        }
        Ok(s.with_exact(json.exact.unwrap_or(true)))
    }
}

impl fmt::Display for DirichletSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if n == 1 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})·{n}^-s")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        if !self.exact {
            write!(f, " + O({}^-s)", self.truncation() + 1)?;
        }
        Ok(())
    }
}

/// `n^{-s}` for integer `n >= 1`.
pub fn n_pow_neg(n: usize, s: Complex64) -> Complex64 {
    if n == 1 {
        return ONE;
    }
    (-s * (n as f64).ln()).exp()
}

/// Wire format shared by the CLI and every module:
/// `{"N": int, "exact": bool, "terms": [[n, re, im], ...]}` sorted by `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    pub terms: Vec<(i64, f64, f64)>,
}

impl Serialize for DirichletSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DirichletSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = SeriesJson::deserialize(d)?;
        DirichletSeries::from_json(&json).map_err(serde::de::Error::custom)
    }
}

/// Exponents over the first primes: `n = 2^{e_1} 3^{e_2} ...` maps to `z_1^{e_1} z_2^{e_2} ...`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BohrMonomial {
    exponents: Vec<u32>,
}

impl BohrMonomial {
    /// Trailing zero exponents are dropped so equal monomials compare equal.
    pub fn new(mut exponents: Vec<u32>) -> Self {
        while exponents.last() == Some(&0) {
            exponents.pop();
        }
        BohrMonomial { exponents }
    }

    pub fn of_index(n: usize, sieve: &PrimeSieve) -> Self {
        let mut exponents = Vec::new();
        for (p, e) in sieve.factorize(n) {
            let k = sieve.prime_index(p).expect("factor is prime");
            if exponents.len() <= k {
                exponents.resize(k + 1, 0);
            }
            exponents[k] = e;
        }
        BohrMonomial { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Number of primes this monomial reaches (index of the last nonzero exponent + 1).
    pub fn dimension(&self) -> usize {
        self.exponents.len()
    }

    /// Nonzero `(prime position, exponent)` pairs.
    pub fn sparse(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.exponents
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(k, e)| (k, *e))
    }

    /// The integer `prod p_k^{e_k}`; `None` on overflow.
    pub fn index(&self, sieve: &PrimeSieve) -> Option<u64> {
        let mut n: u64 = 1;
        for (k, e) in self.sparse() {
            let p = *sieve.primes().get(k)? as u64;
            n = n.checked_mul(p.checked_pow(e)?)?;
        }
        Some(n)
    }
}

impl fmt::Display for BohrMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .sparse()
            .map(|(k, e)| {
                if e == 1 {
                    format!("z{}", k + 1)
                } else {
                    format!("z{}^{}", k + 1, e)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Analytic polynomial on the finite polytorus `T^d`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PolytorusPolynomial {
    terms: BTreeMap<BohrMonomial, Complex64>,
    dimension: usize,
}

impl PolytorusPolynomial {
    pub fn from_terms<I: IntoIterator<Item = (BohrMonomial, Complex64)>>(terms: I) -> Self {
        let mut map: BTreeMap<BohrMonomial, Complex64> = BTreeMap::new();
        for (m, c) in terms {
            *map.entry(m).or_insert(ZERO) += c;
        }
        map.retain(|_, c| *c != ZERO);
        let dimension = map.keys().map(BohrMonomial::dimension).max().unwrap_or(0);
        PolytorusPolynomial {
            terms: map,
            dimension,
        }
    }

    pub fn terms(&self) -> &BTreeMap<BohrMonomial, Complex64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Value at `z_k = exp(2 pi i theta_k)`.
    pub fn evaluate_on_torus(&self, theta: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let phase: f64 = m.sparse().map(|(k, e)| theta[k] * e as f64).sum();
                c * Complex64::from_polar(1.0, std::f64::consts::TAU * phase.fract())
            })
            .sum()
    }

    /// Inverse lift back to an exact Dirichlet polynomial.
    pub fn to_series(&self, truncation: usize) -> Result<DirichletSeries> {
        let mut limit = 64;
        let mut sv = sieve(limit);
        while sv.primes().len() < self.dimension {
            limit *= 2;
            sv = sieve(limit);
        }
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let n = m
                .index(&sv)
                .ok_or(Error::InvalidIndex {
                    index: i64::MAX,
                    truncation,
                })?;
            let n = i64::try_from(n).unwrap_or(i64::MAX);
            out.push((n, *c));
        }
        DirichletSeries::from_terms(out, truncation)
    }
}
