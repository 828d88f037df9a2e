//! Riemann zeta on the real axis `x > 1` by Euler–Maclaurin summation.

use crate::error::{Error, Result};

/// `B_{2k} / (2k)!` for k = 1..=10.
const BERNOULLI_OVER_FACTORIAL: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
    43_867.0 / 5_109_094_217_170_944_000.0,
    -174_611.0 / 802_857_662_698_291_200_000.0,
];

const HEAD: usize = 10;

pub fn zeta(x: f64) -> Result<f64> {
    if !(x > 1.0) {
        return Err(Error::Pole {
            what: "zeta",
            at: x,
        });
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let n = HEAD as f64;
    let mut sum: f64 = (1..HEAD).map(|k| (k as f64).powf(-x)).sum();
    let n_pow = n.powf(-x);
    sum += n * n_pow / (x - 1.0) + 0.5 * n_pow;
    // rising factorial x (x+1) ... (x+2k-2) times N^{-x-2k+1}
    let mut factor = x * n_pow / n;
    for (k, coef) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = coef * factor;
        sum += term;
        if term.abs() < 1e-17 * sum {
            break;
        }
        let j = 2.0 * k as f64 + 1.0;
        factor *= (x + j) * (x + j + 1.0) / (n * n);
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn classical_values() {
        assert!((zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta(6.0).unwrap() - PI.powi(6) / 945.0).abs() < 1e-14);
        assert!((zeta(2.0).unwrap() - 1.644_934_066_848_226_4).abs() < 1e-13);
    }

    #[test]
    fn large_argument_matches_direct_sum() {
        let direct: f64 = (1..200).map(|k| (k as f64).powf(-20.0)).sum();
        let z = zeta(20.0).unwrap();
        assert!((z - direct).abs() < 1e-15);
        assert!((z - 1.000_000_953_962).abs() < 1e-11);
    }

    #[test]
    fn near_pole() {
        // zeta(1 + e) = 1/e + gamma + O(e)
        let x = 1.0 + 1e-6;
        let e = x - 1.0;
        let z = zeta(x).unwrap();
        assert!((z - (1.0 / e + 0.577_215_664_901_532_9)).abs() < 1e-6);
        // zeta(3/2)
        assert!((zeta(1.5).unwrap() - 2.612_375_348_685_488).abs() < 1e-13);
    }

    #[test]
    fn pole_error() {
        assert!(matches!(zeta(1.0), Err(Error::Pole { .. })));
        assert!(matches!(zeta(0.5), Err(Error::Pole { .. })));
        assert!(zeta(f64::NAN).is_err());
    }
}
