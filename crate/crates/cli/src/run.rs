//! `RunConfig`: the JSON form of one command, and its dispatch.

use dirspaces::compose::operator_matrix;
use dirspaces::lab::{
    classify_with, lemma2_profile, profile_csv, two_norm_profile, ClassifyOptions,
};
use dirspaces::spaces::{kernel, norm_a2, norm_ap, norm_hp};
use dirspaces::symbol::DEFAULT_EPS_GRID;
use dirspaces::{DirichletSeries, Error, HpMethod, Measure, MeasureConfig, QmcConfig, Symbol};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Norm,
    Weights,
    Kernel,
    Compose,
    CheckSymbol,
    Classify,
    Lemma2,
    Profile,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    /// Weighted Bergman space `A^p_mu`.
    #[default]
    Bergman,
    /// Hardy space `H^p`.
    Hardy,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<Symbol>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<DirichletSeries>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<Space>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigmas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
}

impl RunConfig {
    /// Fields set in `other` win.
    pub fn merge(mut self, other: RunConfig) -> RunConfig {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(command, measure, symbol, series, truncation, p, seed, format, space, s, w, sigmas, eta);
        self
    }

    fn measure(&self) -> Result<Measure, Error> {
        self.measure
            .clone()
            .unwrap_or(MeasureConfig::Alpha {
                alpha: 0.0,
                nodes: None,
            })
            .build()
    }

    fn symbol(&self) -> Result<&Symbol, Error> {
        self.symbol
            .as_ref()
            .ok_or_else(|| Error::Parse("a symbol is required (--symbol or --c0/--phi)".into()))
    }

    fn series(&self) -> Result<&DirichletSeries, Error> {
        self.series
            .as_ref()
            .ok_or_else(|| Error::Parse("a series is required (--series)".into()))
    }

    fn truncation(&self, default: usize) -> usize {
        self.truncation.unwrap_or(default)
    }

    fn p(&self) -> f64 {
        self.p.unwrap_or(2.0)
    }

    fn qmc(&self) -> QmcConfig {
        QmcConfig {
            seed: self.seed.unwrap_or(0),
            ..QmcConfig::default()
        }
    }

    fn point(v: Option<[f64; 2]>, what: &str) -> Result<Complex64, Error> {
        v.map(|[re, im]| Complex64::new(re, im))
            .ok_or_else(|| Error::Parse(format!("point {what} is required")))
    }
}

fn json_line(v: impl Serialize) -> String {
    let mut out = serde_json::to_string_pretty(&v).expect("reports serialize");
    out.push('\n');
    out
}

/// Runs one command and renders its report.
pub fn run(cfg: &RunConfig) -> Result<String, Error> {
    let command = cfg
        .command
        .ok_or_else(|| Error::Parse("no command given".into()))?;
    let csv = cfg.format.unwrap_or_default() == Format::Csv;
    match command {
        Command::Norm => {
            let f = cfg.series()?;
            let p = cfg.p();
            let method = HpMethod::Auto(cfg.qmc());
            let report = match cfg.space.unwrap_or_default() {
                Space::Hardy => norm_hp(f, p, method)?,
                Space::Bergman => {
                    let mu = cfg.measure()?;
                    if p == 2.0 {
                        let mut r = norm_ap(f, p, &mu, method)?;
                        r.value = norm_a2(f, &mu)?;
                        r.kind = dirspaces::EstimateKind::Exact;
                        r
                    } else {
                        norm_ap(f, p, &mu, method)?
                    }
                }
            };
            Ok(if csv {
                format!(
                    "value,kind,tail,stderr\n{},{},{},{}\n",
                    report.value,
                    serde_json::to_value(report.kind).unwrap().as_str().unwrap_or(""),
                    report.tail.map(|v| v.to_string()).unwrap_or_default(),
                    report.stderr.map(|v| v.to_string()).unwrap_or_default()
                )
            } else {
                json_line(report)
            })
        }
        Command::Weights => {
            let mu = cfg.measure()?;
            let n = cfg.truncation(16);
            let w = mu.weights(n)?;
            Ok(if csv {
                let mut out = String::from("n,weight\n");
                for (i, v) in w.iter().enumerate() {
                    out.push_str(&format!("{},{}\n", i + 1, v));
                }
                out
            } else {
                json_line(json!({ "measure": mu.label(), "N": n, "weights": w }))
            })
        }
        Command::Kernel => {
            let mu = cfg.measure()?;
            let s = RunConfig::point(cfg.s, "s")?;
            let w = RunConfig::point(cfg.w, "w")?;
            let n = cfg.truncation(1000);
            let k = kernel(&mu, s, w, n)?;
            Ok(if csv {
                format!("re,im,tail\n{},{},{}\n", k.value.re, k.value.im, k.tail)
            } else {
                json_line(json!({ "measure": mu.label(), "N": n, "s": [s.re, s.im], "w": [w.re, w.im], "kernel": k }))
            })
        }
        Command::Compose => {
            let mu = cfg.measure()?;
            let m = operator_matrix(cfg.symbol()?, &mu, cfg.truncation(16))?;
            Ok(if csv { m.to_csv() } else { json_line(m.to_json()) })
        }
        Command::CheckSymbol => {
            let phi = cfg.symbol()?;
            let certificate = if phi.c0() == 0 {
                phi.check_theorem2(cfg.eta.unwrap_or(1e-6))?
            } else {
                phi.check_theorem1()?
            };
            let report = json!({
                "symbol": phi,
                "vertical_translation": phi.vertical_translation(),
                "certificate": certificate,
                "halfplane_lower_bound": phi.halfplane_lower_bound(0.0),
                "lemma1": phi.lemma1_region(&DEFAULT_EPS_GRID),
            });
            Ok(if csv {
                format!(
                    "verdict,margin,method\n{},{},{}\n",
                    report["certificate"]["verdict"].as_str().unwrap_or(""),
                    certificate.margin,
                    report["certificate"]["method"].as_str().unwrap_or("")
                )
            } else {
                json_line(report)
            })
        }
        Command::Classify => {
            let mu = cfg.measure()?;
            let mut opts = ClassifyOptions {
                qmc: cfg.qmc(),
                ..ClassifyOptions::default()
            };
            if let Some(s) = &cfg.sigmas {
                opts.sigma_grid = s.clone();
            }
            if let Some(eta) = cfg.eta {
                opts.eta = eta;
            }
            let r = classify_with(cfg.symbol()?, &mu, cfg.truncation(64), cfg.p(), &opts)?;
            Ok(if csv { profile_csv(&r.two_norm_profile) } else { json_line(r) })
        }
        Command::Lemma2 => {
            let mu = cfg.measure()?;
            let sigmas = cfg
                .sigmas
                .clone()
                .unwrap_or_else(|| vec![4.0, 6.0, 8.0, 10.0, 12.0]);
            let prof = lemma2_profile(&mu, &sigmas, cfg.truncation(10_000))?;
            Ok(if csv { prof.to_csv() } else { json_line(prof) })
        }
        Command::Profile => {
            let sigmas = cfg
                .sigmas
                .clone()
                .unwrap_or_else(|| vec![0.25, 0.5, 1.0, 2.0]);
            let rows = two_norm_profile(cfg.symbol()?, cfg.p(), &sigmas, cfg.truncation(64), cfg.qmc())?;
            Ok(if csv {
                profile_csv(&rows)
            } else {
                json_line(json!({ "symbol": cfg.symbol()?, "p": cfg.p(), "N": cfg.truncation(64), "rows": rows }))
            })
        }
    }
}
