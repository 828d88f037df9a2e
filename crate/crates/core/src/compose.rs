//! The composition operator `C_Phi f = f o Phi`: truncated images of basis
//! monomials, finite sections on the weighted basis of `A^2_mu`, and Gram-based
//! isometry and contraction diagnostics.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::series::DirichletSeries;
use crate::spaces::coefficient_norm;
use crate::symbol::Symbol;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `n^{c0}`, or `None` past `limit`.
fn dilation(n: usize, c0: u32, limit: usize) -> Option<usize> {
    let mut d = 1usize;
    for _ in 0..c0 {
        d = d.checked_mul(n).filter(|&d| d <= limit)?;
    }
    Some(d)
}

/// Largest `n` with `n^{c0} <= truncation`.
pub fn column_count(c0: u32, truncation: usize) -> usize {
    if c0 == 0 {
        return truncation;
    }
    let mut n = (truncation as f64).powf(1.0 / c0 as f64).round() as usize + 1;
    while n > 1 && dilation(n, c0, truncation).is_none() {
        n -= 1;
    }
    n
}

/// Coefficients up to `truncation` of `n^{-Phi(s)} = n^{-c1} exp(-log n psi(s))`
/// dilated by `n^{c0}`, where `psi = phi - c1`.
pub fn compose_basis(phi: &Symbol, n: usize, truncation: usize) -> Result<DirichletSeries> {
    if n == 0 {
        return Err(Error::InvalidIndex {
            index: 0,
            truncation,
        });
    }
    if truncation == 0 {
        return Err(Error::EmptyTruncation);
    }
    let c0 = phi.c0();
    let d = dilation(n, c0, truncation).ok_or(Error::TruncationEmpty {
        n,
        c0,
        truncation,
    })?;
    if n == 1 {
        return Ok(DirichletSeries::one(truncation));
    }
    let log_n = (n as f64).ln();
    let c1 = phi.c1();
    let inner = truncation / d;
    let psi: Vec<(usize, Complex64)> = phi
        .phi()
        .terms()
        .filter(|(k, _)| *k >= 2 && *k <= inner)
        .map(|(k, c)| (k, -c * log_n))
        .collect();
    let psi = DirichletSeries::from_terms(psi.into_iter().map(|(k, c)| (k as i64, c)), inner)?
        .with_exact(true);
    let e = DirichletSeries::exp(&psi, inner)?;
    let scale = (-c1 * log_n).exp();
    let mut coeffs = vec![ZERO; truncation];
    for (j, c) in e.terms() {
        coeffs[j * d - 1] = c * scale;
    }
    // exact only when nothing past the truncation was discarded
    let exact = phi.phi().terms().all(|(k, _)| k == 1);
    DirichletSeries::from_coeffs(coeffs, exact)
}

/// `f o Phi` truncated at `truncation`.
pub fn apply(phi: &Symbol, f: &DirichletSeries, truncation: usize) -> Result<DirichletSeries> {
    if !f.is_exact() {
        return Err(Error::NotExact { op: "apply" });
    }
    let mut out = DirichletSeries::zero(truncation);
    let one = Complex64::new(1.0, 0.0);
    for (n, a) in f.terms() {
        let g = compose_basis(phi, n, truncation)?;
        out = DirichletSeries::linear(&out, &g, one, a);
    }
    Ok(out)
}

/// Finite section `M[m][n] = <C_Phi e_n, e_m>` on `e_n = n^{-s} / sqrt(w(n))`.
///
/// Rows run over `1..=N`, columns over `1..=N'` with `N'^{c0} <= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub entries: DMatrix<Complex64>,
    pub truncation: usize,
    pub measure: String,
    pub symbol: Symbol,
}

#[derive(Serialize)]
struct OperatorMatrixJson<'a> {
    #[serde(rename = "N")]
    truncation: usize,
    columns: usize,
    measure: &'a str,
    symbol: &'a Symbol,
    entries: Vec<Vec<[f64; 2]>>,
}

impl OperatorMatrix {
    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn columns(&self) -> usize {
        self.entries.ncols()
    }

    /// `M[m][n]` with one-based indices.
    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.entries[(m - 1, n - 1)]
    }

    pub fn column_norms(&self) -> Vec<f64> {
        self.entries.column_iter().map(|c| c.norm()).collect()
    }

    /// Dense row-major `[re, im]` pairs.
    pub fn to_json(&self) -> serde_json::Value {
        let entries = self
            .entries
            .row_iter()
            .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        serde_json::to_value(OperatorMatrixJson {
            truncation: self.truncation,
            columns: self.columns(),
            measure: &self.measure,
            symbol: &self.symbol,
            entries,
        })
        .expect("operator matrix serializes")
    }

    /// `|M[m][n]|`, one row per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.entries.row_iter() {
            let line: Vec<String> = row.iter().map(|z| z.norm().to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Admissibility is the caller's responsibility; see [`Symbol::check_theorem1`].
pub fn operator_matrix(phi: &Symbol, mu: &Measure, truncation: usize) -> Result<OperatorMatrix> {
    if truncation < 2 {
        return Err(Error::InvalidSymbol(format!(
            "operator matrix needs N >= 2, got {truncation}"
        )));
    }
    let w = mu.weights(truncation)?;
    let cols = column_count(phi.c0(), truncation);
    let columns: Vec<Vec<Complex64>> = (1..=cols)
        .into_par_iter()
        .map(|n| {
            let g = compose_basis(phi, n, truncation)?;
            let wn = w[n - 1];
            Ok(g
                .coeffs()
                .iter()
                .zip(&w)
                .map(|(c, wm)| c * (wm / wn).sqrt())
                .collect())
        })
        .collect::<Result<_>>()?;
    let entries = DMatrix::from_fn(truncation, cols, |m, n| columns[n][m]);
    Ok(OperatorMatrix {
        entries,
        truncation,
        measure: mu.label(),
        symbol: phi.clone(),
    })
}

/// `G = M^* M`.
pub fn gram(m: &OperatorMatrix) -> DMatrix<Complex64> {
    m.entries.adjoint() * &m.entries
}

fn hermitian_eigenvalues(g: DMatrix<Complex64>) -> Vec<f64> {
    // symmetrize away rounding so the Hermitian solver sees an exact Hermitian input
    let h = (&g + g.adjoint()).map(|z| z * 0.5);
    SymmetricEigen::new(h).eigenvalues.iter().copied().collect()
}

/// Largest singular value of `M`: a lower bound for `||C_Phi||` on `A^2_mu`.
pub fn spectral_norm(m: &OperatorMatrix) -> f64 {
    hermitian_eigenvalues(gram(m))
        .into_iter()
        .fold(0.0f64, f64::max)
        .max(0.0)
        .sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectReport {
    #[serde(rename = "N")]
    pub truncation: usize,
    /// `||G - I||` on the retained columns.
    pub defect: f64,
    pub half_truncation: usize,
    pub defect_half: f64,
    /// `|defect(N) - defect(N/2)|`.
    pub delta: f64,
    /// Geometric extrapolation from `N/4, N/2, N`; `None` when the sequence
    /// does not look geometric.
    pub extrapolated: Option<f64>,
    /// Smallest eigenvalue of `G`.
    pub gram_min_eigenvalue: f64,
}

fn defect_of(m: &OperatorMatrix) -> (f64, f64) {
    let eig = hermitian_eigenvalues(gram(m));
    let defect = eig.iter().map(|l| (l - 1.0).abs()).fold(0.0, f64::max);
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    (defect, min)
}

/// Isometry defect at `N`, with the value at `N/2` for stabilization.
pub fn isometry_defect(phi: &Symbol, mu: &Measure, truncation: usize) -> Result<DefectReport> {
    let half = (truncation / 2).max(2);
    let quarter = (truncation / 4).max(2);
    let (defect, min) = defect_of(&operator_matrix(phi, mu, truncation)?);
    let (defect_half, _) = defect_of(&operator_matrix(phi, mu, half)?);
    let (defect_quarter, _) = defect_of(&operator_matrix(phi, mu, quarter)?);
    let d1 = defect_half - defect_quarter;
    let d2 = defect - defect_half;
    let extrapolated = if d1 != 0.0 && (d2 / d1) > 0.0 && (d2 / d1) < 1.0 {
        let r = d2 / d1;
        Some(defect + d2 * r / (1.0 - r))
    } else if d2 == 0.0 {
        Some(defect)
    } else {
        None
    };
    Ok(DefectReport {
        truncation,
        defect,
        half_truncation: half,
        defect_half,
        delta: d2.abs(),
        extrapolated,
        gram_min_eigenvalue: min,
    })
}

pub fn contraction_lower_bound(phi: &Symbol, mu: &Measure, truncation: usize) -> Result<f64> {
    Ok(spectral_norm(&operator_matrix(phi, mu, truncation)?))
}

/// `||C_Phi n^{-s}||_{H^2}` restricted to indices `<= N`, for every admissible column.
pub fn unweighted_column_norms(phi: &Symbol, truncation: usize) -> Result<Vec<f64>> {
    (1..=column_count(phi.c0(), truncation))
        .into_par_iter()
        .map(|n| Ok(coefficient_norm(&compose_basis(phi, n, truncation)?)))
        .collect()
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
    fn column_counts() {
        assert_eq!(column_count(1, 64), 64);
        assert_eq!(column_count(2, 64), 8);
        assert_eq!(column_count(2, 63), 7);
        assert_eq!(column_count(3, 64), 4);
        assert_eq!(column_count(3, 63), 3);
        assert_eq!(column_count(0, 10), 10);
    }

    #[test]
    fn compose_basis_examples() {
        let tau = 1.7;
        let g = compose_basis(&sym(1, &[(1, 0.0, tau)]), 3, 10).unwrap();
        assert!(g.is_exact());
        assert!((g.coeff(3) - (c(0.0, -tau) * 3f64.ln()).exp()).norm() < 1e-15);
        assert_eq!(g.terms().count(), 1);

        let g = compose_basis(&sym(2, &[]), 2, 10).unwrap();
        assert_eq!(g.coeff(4), c(1.0, 0.0));
        assert_eq!(g.terms().count(), 1);

        assert!(matches!(
            compose_basis(&sym(2, &[]), 4, 10),
            Err(Error::TruncationEmpty { n: 4, c0: 2, truncation: 10 })
        ));
    }

    #[test]
    fn compose_basis_coefficients_are_exponential() {
        let cc = c(0.3, -0.2);
        let phi = sym(1, &[(2, cc.re, cc.im)]);
        let g = compose_basis(&phi, 2, 64).unwrap();
        let x = -cc * 2f64.ln();
        let mut fact = 1.0;
        for m in 0..5u32 {
            if m > 0 {
                fact *= m as f64;
            }
            let idx = 2usize << m;
            assert!((g.coeff(idx) - x.powu(m) / fact).norm() < 1e-14, "m = {m}");
        }
        for s in [3.0, 4.0, 5.0] {
            let z = c(s, 0.0);
            let lhs = g.evaluate(z);
            let rhs = (-phi.evaluate(z) * 2f64.ln()).exp();
            assert!((lhs - rhs).norm() < 1e-8, "s = {s}");
        }
    }

    #[test]
    fn apply_examples() {
        let one = DirichletSeries::one(1);
        let phi = sym(2, &[(1, 0.3, 0.0), (3, 0.1, 0.0)]);
        assert_eq!(apply(&phi, &one, 16).unwrap().coeffs()[0], c(1.0, 0.0));

        let tau = -2.5;
        let f = DirichletSeries::from_terms(
            [(1, c(1.0, 0.0)), (2, c(0.5, 1.0)), (6, c(-1.0, 0.25))],
            6,
        )
        .unwrap();
        let g = apply(&sym(1, &[(1, 0.0, tau)]), &f, 6).unwrap();
        for (n, a) in f.terms() {
            let rot = (c(0.0, -tau) * (n as f64).ln()).exp();
            assert!((g.coeff(n) - a * rot).norm() < 1e-15);
        }

        let phi = sym(1, &[(1, 0.5, 0.0), (2, 0.25, 0.0)]);
        let f = DirichletSeries::from_terms(
            [(1, c(0.2, 0.0)), (3, c(-1.0, 0.5)), (5, c(0.7, 0.0))],
            5,
        )
        .unwrap();
        let g = apply(&phi, &f, 256).unwrap();
        let s = c(4.0, 1.3);
        assert!((g.evaluate(s) - f.evaluate(phi.evaluate(s))).norm() < 1e-6);
    }

    #[test]
    fn vertical_translation_matrix_is_unitary_diagonal() {
        let mu = Measure::alpha(0.0).unwrap();
        let m = operator_matrix(&sym(1, &[(1, 0.0, 3.0)]), &mu, 16).unwrap();
        for i in 1..=16 {
            for j in 1..=16 {
                let z = m.get(i, j);
                if i == j {
                    assert_abs_diff_eq!(z.norm(), 1.0, epsilon = 1e-15);
                } else {
                    assert_eq!(z, ZERO);
                }
            }
        }
        let g = gram(&m);
        assert!((g - DMatrix::identity(16, 16)).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn dilation_matrix_entries() {
        let mu = Measure::alpha(0.0).unwrap();
        let m = operator_matrix(&sym(2, &[]), &mu, 8).unwrap();
        assert_eq!(m.columns(), 2);
        let l2 = 2f64.ln();
        let expected = ((1.0 + l2) / (1.0 + 2.0 * l2)).sqrt();
        assert_abs_diff_eq!(m.get(4, 2).re, expected, epsilon = 1e-14);
        assert_abs_diff_eq!(m.get(4, 2).re, 0.8423, epsilon = 1e-4);
        for r in (1..=8).filter(|&r| r != 4) {
            assert_eq!(m.get(r, 2), ZERO);
        }
        let g = gram(&m);
        assert_abs_diff_eq!(g[(1, 1)].re, expected * expected, epsilon = 1e-14);
        assert_abs_diff_eq!(g[(1, 1)].re, 0.7095, epsilon = 1e-4);
        assert_eq!(g.clone(), g.adjoint());

        let bound = spectral_norm(&m);
        assert!(bound <= 1.0 && bound >= expected - 1e-14);
    }

    #[test]
    fn defect_examples() {
        let mu = Measure::alpha(0.0).unwrap();
        let tr = isometry_defect(&sym(1, &[(1, 0.0, 5.0)]), &mu, 32).unwrap();
        assert!(tr.defect <= 1e-12);
        let dil = isometry_defect(&sym(2, &[]), &mu, 8).unwrap();
        let l2 = 2f64.ln();
        assert_abs_diff_eq!(dil.defect, 1.0 - (1.0 + l2) / (1.0 + 2.0 * l2), epsilon = 1e-14);
        assert!(dil.defect > 0.29);
        let shift = isometry_defect(&sym(1, &[(1, 1.0, 0.0)]), &mu, 16).unwrap();
        assert!(shift.defect > 0.0);
        assert!(shift.gram_min_eigenvalue >= -1e-10);
    }

    #[test]
    fn constant_symbol_is_not_a_contraction() {
        let mu = Measure::alpha(0.0).unwrap();
        let b = contraction_lower_bound(&sym(0, &[(1, 1.0, 0.0)]), &mu, 128).unwrap();
        assert!(b > 1.0, "{b}");
    }

    #[test]
    fn admissible_columns_contract() {
        let mu = Measure::alpha(1.0).unwrap();
        let phi = sym(1, &[(1, 0.5, 0.0), (4, 0.25, 0.0)]);
        let m = operator_matrix(&phi, &mu, 64).unwrap();
        assert!(m.column_norms().iter().all(|&x| x <= 1.0 + 1e-12));
    }

    #[test]
    fn exports() {
        let mu = Measure::alpha(0.0).unwrap();
        let m = operator_matrix(&sym(2, &[]), &mu, 4).unwrap();
        let v = m.to_json();
        assert_eq!(v["N"], 4);
        assert_eq!(v["columns"], 2);
        assert_eq!(v["entries"].as_array().unwrap().len(), 4);
        assert_eq!(v["entries"][0][0], serde_json::json!([1.0, 0.0]));
        let csv = m.to_csv();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.lines().all(|l| l.split(',').count() == 2));
    }
}
