//! Hardy spaces `H^p` and weighted Bergman spaces `A^p_mu` of Dirichlet series,
//! composition operators `C_Phi f = f o Phi` for symbols `Phi(s) = c0 s + phi(s)`,
//! and numerical diagnostics separating isometric symbols (vertical
//! translations) from everything else.

// `!(x > 0.0)` deliberately rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compose;
pub mod error;
pub mod lab;
pub mod measure;
pub mod primes;
pub mod qmc;
pub mod quadrature;
pub mod series;
pub mod spaces;
pub mod symbol;
pub mod zeta;

pub use compose::{OperatorMatrix, DefectReport};
pub use error::{Error, Result};
pub use lab::{ClassVerdict, ClassificationReport, ClassifyOptions};
pub use measure::{alpha_weight, Measure, MeasureConfig};
pub use qmc::QmcConfig;
pub use quadrature::QuadratureSpec;
pub use series::{BohrMonomial, DirichletSeries, PolytorusPolynomial, SeriesJson};
pub use spaces::{EstimateKind, FunctionalNormEstimate, HpMethod, NormReport};
pub use symbol::{CertMethod, Certificate, Lemma1Region, Symbol, TranslatedSymbol, Verdict};
pub use zeta::zeta;
