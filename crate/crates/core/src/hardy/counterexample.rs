//! The lacunary sum of atoms `f = Σ_k λ_k a_k` whose Fejér means escape any
//! weight `φ` with `log n / φ_n` unbounded.
//!
//! `a_k = M_α (D_{2M_α} - D_{M_α}) = M_α² r_α 1_{I_α}` with `α = α_k`, and
//! `λ_k = φ(2M_α) / log M_α`. Spectral windows `[M_α, 2M_α)` of different atoms are
//! disjoint, so `f̂ = M_α λ_k` on window `k` and vanishes elsewhere.

use num_complex::Complex64;

use super::atoms::{Atom, AtomicDecomposition};
use super::{FiniteMartingale, Phi};
use crate::error::{Error, Result};
use crate::funcspace::GridFunction;
use crate::group::{Cylinder, GeneratorSequence};
use crate::identities::{CheckReport, Measure, IDENTITY_TOLERANCE};
use crate::numeric::{format_f64, neumaier_sum};
use crate::vilenkin::{SpectralVector, VilenkinSystem};

/// Growth base `b` of the greedy rank rule `log M_α / φ(2M_α) >= b^k`.
pub const DEFAULT_THRESHOLD_BASE: f64 = 4.0;

/// Greedy ranks: `α_k` is the smallest rank above `α_{k-1}` with
/// `log M_α / φ(2M_α) >= base^k`, for `k = 1..=count`.
///
/// Ranks run over `1 <= α < radices.len()`, so `2M_α <= M_{α+1}` fits the depth.
/// Works with `log M_α`, so depths far beyond the grid budget are fine. On failure the
/// ranks found so far are returned inside [`Error::AlphaBudget`].
pub fn select_alphas(phi: &Phi, count: usize, radices: &[usize], base: f64) -> Result<Vec<usize>> {
    phi.validate()?;
    if !(base > 1.0 && base.is_finite()) {
        return Err(Error::InvalidRanks(format!(
            "threshold base {base} must exceed 1"
        )));
    }
    if let Some(position) = radices.iter().position(|&m| m < 2) {
        return Err(Error::InvalidGenerator {
            position,
            value: radices[position],
        });
    }
    let mut ln_scale = vec![0.0f64; radices.len() + 1];
    for (k, &m) in radices.iter().enumerate() {
        ln_scale[k + 1] = ln_scale[k] + (m as f64).ln();
    }
    let mut alphas = Vec::with_capacity(count);
    let mut alpha = 0usize;
    for k in 1..=count {
        let threshold = base.powi(k as i32);
        let found = (alpha + 1..radices.len()).find(|&a| {
            let ln_m = ln_scale[a];
            ln_m / phi.eval_ln(ln_m + 2f64.ln()) >= threshold
        });
        match found {
            Some(a) => {
                alphas.push(a);
                alpha = a;
            }
            None => {
                return Err(Error::AlphaBudget {
                    achieved: alphas,
                    requested: count,
                })
            }
        }
    }
    Ok(alphas)
}

/// The counterexample at finite depth, with its atoms and coefficients exposed.
#[derive(Debug, Clone)]
pub struct Counterexample {
    system: VilenkinSystem,
    phi: Phi,
    alphas: Vec<usize>,
    lambdas: Vec<f64>,
    function: GridFunction,
}

impl Counterexample {
    /// Needs `1 <= α_1 < α_2 < ..` and `α_K < N`, which gives `2M_{α_K} <= M_N`.
    pub fn new(system: VilenkinSystem, phi: Phi, alphas: Vec<usize>) -> Result<Self> {
        phi.validate()?;
        let generator = system.generator().clone();
        if alphas.is_empty() {
            return Err(Error::InvalidRanks("no ranks given".into()));
        }
        if alphas[0] == 0 {
            return Err(Error::InvalidRanks("ranks start at 1 (log M_0 = 0)".into()));
        }
        if alphas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidRanks("ranks must increase strictly".into()));
        }
        let top = *alphas.last().expect("nonempty");
        if top >= generator.depth() {
            return Err(Error::InsufficientDepth {
                need: top + 1,
                have: generator.depth(),
            });
        }
        let lambdas = alphas
            .iter()
            .map(|&a| {
                let m = generator.scale(a);
                phi.eval(2 * m) / (m as f64).ln()
            })
            .collect();
        let mut ce = Self {
            system,
            phi,
            alphas,
            lambdas,
            function: GridFunction::zero(generator),
        };
        let mut f = GridFunction::zero(ce.generator().clone());
        for k in 0..ce.len() {
            f.add_scaled(Complex64::new(ce.lambdas[k], 0.0), &ce.atom(k))?;
        }
        ce.function = f;
        Ok(ce)
    }

    pub fn system(&self) -> &VilenkinSystem {
        &self.system
    }

    pub fn generator(&self) -> &GeneratorSequence {
        self.system.generator()
    }

    pub fn phi(&self) -> &Phi {
        &self.phi
    }

    pub fn alphas(&self) -> &[usize] {
        &self.alphas
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// `f = Σ_k λ_k a_k`.
    pub fn function(&self) -> &GridFunction {
        &self.function
    }

    /// `M_{α_k}` for the zero-based atom index `k`.
    pub fn scale(&self, k: usize) -> usize {
        self.generator().scale(self.alphas[k])
    }

    /// `supp a_k = I_{α_k}`.
    pub fn atom_support(&self, k: usize) -> Cylinder {
        self.generator()
            .cylinder_at(0, self.alphas[k])
            .expect("rank within depth")
    }

    /// `a_k = M_α² r_α 1_{I_α}`.
    pub fn atom(&self, k: usize) -> GridFunction {
        let alpha = self.alphas[k];
        let m = self.scale(k) as f64;
        let r = self.system.rademacher(alpha).expect("rank within depth");
        let support = self.atom_support(k);
        let values = r
            .values()
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if support.contains(i) {
                    v * (m * m)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        GridFunction::new(self.generator().clone(), values).expect("finite values")
    }

    /// `a_k` through its kernel form `M_α (D_{2M_α} - D_{M_α})`.
    pub fn atom_from_kernels(&self, k: usize) -> GridFunction {
        let m = self.scale(k);
        let upper = self.system.dirichlet(2 * m).expect("2M_α <= M_N");
        let lower = self.system.dirichlet(m).expect("M_α <= M_N");
        upper
            .sub(&lower)
            .expect("same generator")
            .scale_real(m as f64)
    }

    /// The atoms as a `1/2`-atomic decomposition with coefficients `λ_k`.
    pub fn decomposition(&self) -> Result<AtomicDecomposition> {
        let mut dec = AtomicDecomposition::new(self.generator().clone());
        for k in 0..self.len() {
            dec.push(
                self.lambdas[k],
                Atom::new(self.atom(k), self.atom_support(k), 0.5)?,
            )?;
        }
        Ok(dec)
    }

    /// Levels `f_n = Σ_{α_k < n} λ_k a_k`.
    pub fn martingale(&self) -> FiniteMartingale {
        let generator = self.generator().clone();
        let atoms: Vec<GridFunction> = (0..self.len()).map(|k| self.atom(k)).collect();
        let levels = (0..=generator.depth())
            .map(|n| {
                let mut acc = GridFunction::zero(generator.clone());
                for (k, atom) in atoms.iter().enumerate() {
                    if self.alphas[k] < n {
                        acc.add_scaled(Complex64::new(self.lambdas[k], 0.0), atom)
                            .expect("same generator");
                    }
                }
                acc
            })
            .collect();
        FiniteMartingale::from_levels_unchecked(generator, levels)
    }

    /// `f̂(j) = M_{α_k} λ_k` for `j ∈ [M_{α_k}, 2M_{α_k})`, zero elsewhere.
    pub fn closed_form_spectrum(&self) -> SpectralVector {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.generator().order()];
        for k in 0..self.len() {
            let m = self.scale(k);
            let c = Complex64::new(m as f64 * self.lambdas[k], 0.0);
            coeffs[m..2 * m].fill(c);
        }
        SpectralVector::new(self.generator().clone(), coeffs).expect("finite coefficients")
    }

    /// The atom whose window `[M_{α_k}, 2M_{α_k})` contains `n`.
    pub fn window_of(&self, n: usize) -> Option<usize> {
        (0..self.len()).find(|&k| {
            let m = self.scale(k);
            m <= n && n < 2 * m
        })
    }

    /// `S_j f` from the closed form: full atoms below `j`, plus
    /// `M_α λ_k ψ_{M_α} D_{j - M_α}` when `j` lies in window `k`.
    pub fn partial_sum_closed_form(&self, j: usize) -> Result<GridFunction> {
        self.system.check_count("j", j, 0)?;
        let mut acc = GridFunction::zero(self.generator().clone());
        for k in 0..self.len() {
            if 2 * self.scale(k) <= j {
                acc.add_scaled(Complex64::new(self.lambdas[k], 0.0), &self.atom(k))?;
            }
        }
        if let Some(k) = self.window_of(j) {
            let m = self.scale(k);
            if j > m {
                let tail = self
                    .system
                    .character(m)?
                    .mul(&self.system.dirichlet(j - m)?)?;
                acc.add_scaled(Complex64::new(m as f64 * self.lambdas[k], 0.0), &tail)?;
            }
        }
        Ok(acc)
    }

    /// `Σ_k λ_k^p`; bounded along the selected ranks for `p = 1/2`.
    pub fn coefficient_sum(&self, p: f64) -> f64 {
        neumaier_sum(self.lambdas.iter().map(|l| l.powf(p)))
    }

    /// `sqrt(log M_{α_k} / φ(2M_{α_k}))`, the predicted growth of `T(2M_{α_k})`.
    pub fn growth_proxy(&self, k: usize) -> f64 {
        let m = self.scale(k);
        ((m as f64).ln() / self.phi.eval(2 * m)).sqrt()
    }

    /// Rebuilds `σ_n f = I + II_1 + II_2` for `n` in the window of atom `k`:
    /// `I = (M/n) σ_M f`, `II_1 = ((n-M)/n) S_M f`,
    /// `II_2 = (λ_k M / n) ψ_M (n-M) K_{n-M}` with `M = M_{α_k}`.
    pub fn sigma_split(&self, n: usize) -> Result<SplitReport> {
        let Some(k) = self.window_of(n) else {
            return Err(Error::OutOfRange {
                what: "n",
                value: n as u64,
                bound: "inside some window [M_alpha, 2 M_alpha)".into(),
            });
        };
        let m = self.scale(k);
        let lambda = self.lambdas[k];
        let f = &self.function;
        let direct = self.system.fejer_mean(f, n)?;

        let part_i = self
            .system
            .fejer_mean(f, m)?
            .scale_real(m as f64 / n as f64);
        let part_ii1 = self
            .system
            .partial_sum(f, m)?
            .scale_real((n - m) as f64 / n as f64);
        let part_ii2 = if n > m {
            self.system
                .character(m)?
                .mul(&self.system.scaled_fejer_kernel(n - m)?)?
                .scale_real(lambda * m as f64 / n as f64)
        } else {
            GridFunction::zero(self.generator().clone())
        };
        let rebuilt = part_i.add(&part_ii1)?.add(&part_ii2)?;
        let deviation = rebuilt.max_abs_diff(&direct)? / direct.sup_norm().max(1.0);

        let ii2_integral = part_ii2.lp_power(0.5)?;
        let variation = if n > m {
            self.generator().variation(n - m)?
        } else {
            0
        };
        let lower_bound_ratio =
            (variation > 0).then(|| ii2_integral / (lambda.sqrt() * variation as f64));
        let report = CheckReport::new(
            "sigma_split",
            vec![("alpha", self.alphas[k].to_string()), ("n", n.to_string())],
            Measure::Deviation(deviation),
            IDENTITY_TOLERANCE,
        );
        Ok(SplitReport {
            report,
            atom: k,
            lambda,
            ii2_integral,
            variation,
            lower_bound_ratio,
        })
    }
}

/// Result of [`Counterexample::sigma_split`].
#[derive(Debug, Clone, PartialEq)]
pub struct SplitReport {
    /// Relative deviation of `I + II_1 + II_2` from the directly computed `σ_n f`.
    pub report: CheckReport,
    /// Zero-based index of the active atom.
    pub atom: usize,
    pub lambda: f64,
    /// `∫ |II_2|^{1/2} dμ`
    pub ii2_integral: f64,
    /// `v(n - M_{α_k})`
    pub variation: usize,
    /// `∫ |II_2|^{1/2} / (λ_k^{1/2} v(n - M_{α_k}))`, absent when the variation is 0.
    pub lower_bound_ratio: Option<f64>,
}

impl SplitReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{}",
            self.report.csv_row(),
            format_f64(self.ii2_integral),
            self.lower_bound_ratio
                .map(format_f64)
                .unwrap_or_else(|| "not_applicable".into())
        )
    }
}
