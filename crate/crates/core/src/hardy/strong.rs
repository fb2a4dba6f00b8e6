//! Strong-convergence sums of partial sums and Fejér means.
//!
//! Terms are computed independently per `k` (in parallel) and accumulated in
//! increasing `k` with compensated prefix sums, so every value is independent of the
//! thread count.

use rayon::prelude::*;

use super::{hardy_power, Phi};
use crate::error::{Error, Result};
use crate::funcspace::GridFunction;
use crate::numeric::neumaier_prefix_sums;
use crate::vilenkin::VilenkinSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrongSumMode {
    /// `(1/(n φ_n)) Σ_{k<=n} ‖σ_k f‖_p^p`, default `φ ≡ 1`.
    FejerPlain,
    /// `(1/(n φ_n)) Σ_{k<=n} ‖σ_k f‖_{H_p}^p`, default `φ_n = log n`.
    FejerWeighted,
    /// `Σ_{k<=n} ‖S_k f‖_p^p / k^{2-p}`.
    Simon,
    /// `(1/log n) Σ_{k<=n} ‖S_k f - f‖_1 / k`, for `n >= 2`.
    Gat,
}

impl StrongSumMode {
    pub fn name(&self) -> &'static str {
        match self {
            StrongSumMode::FejerPlain => "fejer_plain",
            StrongSumMode::FejerWeighted => "fejer_weighted",
            StrongSumMode::Simon => "simon",
            StrongSumMode::Gat => "gat",
        }
    }

    pub fn default_phi(&self) -> Option<Phi> {
        match self {
            StrongSumMode::FejerPlain => Some(Phi::one()),
            StrongSumMode::FejerWeighted => Some(Phi::log()),
            StrongSumMode::Simon | StrongSumMode::Gat => None,
        }
    }
}

/// The terms `t_1..t_nmax` of one strong sum and their running totals.
#[derive(Debug, Clone, PartialEq)]
pub struct StrongSumCurve {
    mode: StrongSumMode,
    phi: Option<Phi>,
    terms: Vec<f64>,
    cumulative: Vec<f64>,
}

impl StrongSumCurve {
    pub fn mode(&self) -> StrongSumMode {
        self.mode
    }

    pub fn nmax(&self) -> usize {
        self.terms.len()
    }

    /// The summand at `k` (`1 <= k <= nmax`).
    pub fn term(&self, k: usize) -> f64 {
        self.terms[k - 1]
    }

    /// `Σ_{k<=n} t_k`.
    pub fn cumulative(&self, n: usize) -> f64 {
        self.cumulative[n - 1]
    }

    /// The normalized sum at `n`.
    pub fn value(&self, n: usize) -> Result<f64> {
        let min = if self.mode == StrongSumMode::Gat {
            2
        } else {
            1
        };
        if n < min || n > self.nmax() {
            return Err(Error::OutOfRange {
                what: "n",
                value: n as u64,
                bound: format!("in [{min}, {}]", self.nmax()),
            });
        }
        let total = self.cumulative(n);
        Ok(match self.mode {
            StrongSumMode::FejerPlain | StrongSumMode::FejerWeighted => {
                let phi = self.phi.as_ref().expect("Fejér modes carry a weight");
                total / (n as f64 * phi.eval(n))
            }
            StrongSumMode::Simon => total,
            StrongSumMode::Gat => total / (n as f64).ln(),
        })
    }
}

/// All terms of `mode` up to `nmax`. `phi` overrides the mode's default weight.
pub fn strong_sum_curve(
    system: &VilenkinSystem,
    f: &GridFunction,
    nmax: usize,
    p: f64,
    mode: StrongSumMode,
    phi: Option<Phi>,
) -> Result<StrongSumCurve> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(p));
    }
    system.check_count("n", nmax, 1)?;
    let phi = match mode {
        StrongSumMode::FejerPlain | StrongSumMode::FejerWeighted => {
            let phi = phi.or_else(|| mode.default_phi()).expect("Fejér default");
            phi.validate()?;
            Some(phi)
        }
        _ => None,
    };
    let spectrum = system.forward(f)?;
    let terms: Vec<f64> = match mode {
        StrongSumMode::FejerPlain | StrongSumMode::FejerWeighted => (1..=nmax)
            .into_par_iter()
            .map(|k| {
                let sigma = system
                    .fejer_mean_of_spectrum(&spectrum, k)
                    .expect("k within range");
                if mode == StrongSumMode::FejerPlain {
                    sigma.lp_power(p).expect("valid exponent")
                } else {
                    hardy_power(&sigma, p).expect("valid exponent")
                }
            })
            .collect(),
        StrongSumMode::Simon | StrongSumMode::Gat => {
            // S_k changes only where f̂(k-1) is nonzero; evaluate those breakpoints once.
            let breaks: Vec<usize> = (1..=nmax)
                .filter(|&k| {
                    k == 1 || spectrum.coeff(k - 1) != num_complex::Complex64::new(0.0, 0.0)
                })
                .collect();
            let bases: Vec<f64> = breaks
                .par_iter()
                .map(|&k| {
                    let s = system
                        .partial_sum_of_spectrum(&spectrum, k)
                        .expect("k within range");
                    if mode == StrongSumMode::Simon {
                        s.lp_power(p).expect("valid exponent")
                    } else {
                        s.sub(f)
                            .expect("same generator")
                            .lp_power(1.0)
                            .expect("p = 1")
                    }
                })
                .collect();
            let mut terms = Vec::with_capacity(nmax);
            let mut current = 0;
            for k in 1..=nmax {
                if current + 1 < breaks.len() && breaks[current + 1] == k {
                    current += 1;
                }
                let base = bases[current];
                terms.push(if mode == StrongSumMode::Simon {
                    base / (k as f64).powf(2.0 - p)
                } else {
                    base / k as f64
                });
            }
            terms
        }
    };
    let cumulative = neumaier_prefix_sums(&terms);
    Ok(StrongSumCurve {
        mode,
        phi,
        terms,
        cumulative,
    })
}

/// The normalized strong sum of `mode` at `n` with the mode's default weight.
pub fn strong_sums(
    system: &VilenkinSystem,
    f: &GridFunction,
    n: usize,
    p: f64,
    mode: StrongSumMode,
) -> Result<f64> {
    if mode == StrongSumMode::Gat && n < 2 {
        return Err(Error::OutOfRange {
            what: "n",
            value: n as u64,
            bound: format!("in [2, {}]", system.order()),
        });
    }
    strong_sum_curve(system, f, n, p, mode, None)?.value(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GeneratorSequence;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn one(g: &GeneratorSequence) -> GridFunction {
        GridFunction::constant(g.clone(), Complex64::new(1.0, 0.0))
    }

    #[test]
    fn fejer_plain_on_constant() {
        let g = GeneratorSequence::walsh(6);
        let system = VilenkinSystem::new(g.clone());
        let curve =
            strong_sum_curve(&system, &one(&g), 64, 0.5, StrongSumMode::FejerPlain, None).unwrap();
        for n in 1..=64 {
            let expected: f64 = (1..=n)
                .map(|k| ((k - 1) as f64 / k as f64).sqrt())
                .sum::<f64>()
                / n as f64;
            let v = curve.value(n).unwrap();
            assert!((v - expected).abs() < 1e-12);
            assert!(v <= 1.0);
        }
    }

    #[test]
    fn zero_function_gives_zero() {
        let g = GeneratorSequence::constant(3, 3).unwrap();
        let system = VilenkinSystem::new(g.clone());
        let zero = GridFunction::zero(g);
        for mode in [
            StrongSumMode::FejerPlain,
            StrongSumMode::FejerWeighted,
            StrongSumMode::Simon,
            StrongSumMode::Gat,
        ] {
            assert_eq!(strong_sums(&system, &zero, 27, 0.5, mode).unwrap(), 0.0);
        }
    }

    #[test]
    fn gat_on_constant_is_zero() {
        let g = GeneratorSequence::walsh(5);
        let system = VilenkinSystem::new(g.clone());
        let curve = strong_sum_curve(&system, &one(&g), 32, 1.0, StrongSumMode::Gat, None).unwrap();
        for n in 2..=32 {
            assert!(curve.value(n).unwrap().abs() < 1e-15);
        }
        assert!(curve.value(1).is_err());
        assert!(strong_sums(&system, &one(&g), 1, 1.0, StrongSumMode::Gat).is_err());
    }

    #[test]
    fn breakpoint_caching_matches_direct_terms() {
        let g = GeneratorSequence::cycle(&[2, 3], 4).unwrap();
        let system = VilenkinSystem::new(g.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let spectrum = crate::vilenkin::SpectralVector::from_fn(g.clone(), |j| {
            if j % 3 == 1 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            }
        });
        let f = system.inverse(&spectrum).unwrap();
        let simon = strong_sum_curve(&system, &f, 36, 0.5, StrongSumMode::Simon, None).unwrap();
        let gat = strong_sum_curve(&system, &f, 36, 1.0, StrongSumMode::Gat, None).unwrap();
        for k in 1..=36 {
            let s = system.partial_sum(&f, k).unwrap();
            let simon_term = s.lp_power(0.5).unwrap() / (k as f64).powf(1.5);
            let gat_term = s.sub(&f).unwrap().lp_power(1.0).unwrap() / k as f64;
            assert!((simon.term(k) - simon_term).abs() < 1e-12);
            assert!((gat.term(k) - gat_term).abs() < 1e-12);
        }
    }

    #[test]
    fn weighted_terms_dominate_plain_terms() {
        let g = GeneratorSequence::walsh(5);
        let system = VilenkinSystem::new(g.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let f = GridFunction::from_fn(g.clone(), |_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
        let plain =
            strong_sum_curve(&system, &f, 32, 0.5, StrongSumMode::FejerPlain, None).unwrap();
        let weighted = strong_sum_curve(
            &system,
            &f,
            32,
            0.5,
            StrongSumMode::FejerWeighted,
            Some(Phi::one()),
        )
        .unwrap();
        for k in 1..=32 {
            assert!(weighted.term(k) + 1e-12 >= plain.term(k));
        }
    }

    #[test]
    fn range_errors() {
        let g = GeneratorSequence::walsh(3);
        let system = VilenkinSystem::new(g.clone());
        let f = one(&g);
        assert!(strong_sums(&system, &f, 0, 0.5, StrongSumMode::Simon).is_err());
        assert!(strong_sums(&system, &f, 9, 0.5, StrongSumMode::Simon).is_err());
        assert!(strong_sums(&system, &f, 4, 0.0, StrongSumMode::Simon).is_err());
    }
}
