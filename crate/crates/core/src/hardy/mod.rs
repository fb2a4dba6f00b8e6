//! Martingales on the cylinder filtration and the Hardy-space machinery built on them.
//!
//! Every level `f_n` of a [`FiniteMartingale`] is stored on the full depth-`N` grid,
//! so levels can be compared, added and integrated without resampling.

mod atoms;
mod counterexample;
mod phi;
mod strong;

pub use atoms::{
    assemble_martingale, is_p_atom, Atom, AtomCondition, AtomDiagnostics, AtomicDecomposition,
    ATOM_TOLERANCE,
};
pub use counterexample::{select_alphas, Counterexample, SplitReport, DEFAULT_THRESHOLD_BASE};
pub use phi::Phi;
pub use strong::{strong_sum_curve, strong_sums, StrongSumCurve, StrongSumMode};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::funcspace::GridFunction;
use crate::group::GeneratorSequence;

/// Relative tolerance for adaptedness and the martingale property.
pub const MARTINGALE_TOLERANCE: f64 = 1e-9;

/// `E_n f`: the average of `f` over each depth-`n` cylinder.
pub fn conditional_expectation(f: &GridFunction, n: usize) -> Result<GridFunction> {
    let generator = f.generator();
    check_rank(generator, n)?;
    let stride = generator.scale(n);
    let mut sums = vec![Complex64::new(0.0, 0.0); stride];
    for chunk in f.values().chunks_exact(stride) {
        for (s, v) in sums.iter_mut().zip(chunk) {
            *s += v;
        }
    }
    let inv = 1.0 / (f.len() / stride) as f64;
    for s in &mut sums {
        *s *= inv;
    }
    Ok(GridFunction::from_parts_unchecked(
        generator.clone(),
        (0..f.len()).map(|i| sums[i % stride]).collect(),
    ))
}

/// Cell averages at every level, computed bottom-up: entry `n` has length `M_n` and
/// holds the mean of `f` over the cylinder with residue `r` modulo `M_n`.
fn level_averages(f: &GridFunction) -> Vec<Vec<Complex64>> {
    let generator = f.generator();
    let depth = generator.depth();
    let mut levels = vec![Vec::new(); depth + 1];
    levels[depth] = f.values().to_vec();
    for n in (0..depth).rev() {
        let m = generator.radix(n);
        let stride = generator.scale(n);
        let finer = &levels[n + 1];
        let coarse = (0..stride)
            .map(|r| {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..m {
                    acc += finer[r + t * stride];
                }
                acc / m as f64
            })
            .collect();
        levels[n] = coarse;
    }
    levels
}

/// `f*(x) = sup_n |μ(I_n(x))^{-1} ∫_{I_n(x)} f dμ|` for the martingale generated by `f`.
pub fn maximal_function_of(f: &GridFunction) -> GridFunction {
    let levels = level_averages(f);
    let values = (0..f.len())
        .map(|i| {
            let best = levels
                .iter()
                .map(|avg| avg[i % avg.len()].norm())
                .fold(0.0, f64::max);
            Complex64::new(best, 0.0)
        })
        .collect();
    GridFunction::from_parts_unchecked(f.generator().clone(), values)
}

/// `‖f‖_{H_p}^p = ∫ (f*)^p dμ` for the martingale generated by `f`.
pub fn hardy_power(f: &GridFunction, p: f64) -> Result<f64> {
    maximal_function_of(f).lp_power(p)
}

/// `‖f‖_{H_p} = ‖f*‖_p` for the martingale generated by `f`.
pub fn hardy_quasinorm_of(f: &GridFunction, p: f64) -> Result<f64> {
    maximal_function_of(f).lp_quasinorm(p)
}

/// A martingale `f_0, .., f_N` adapted to the depth-`n` cylinders.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMartingale {
    generator: GeneratorSequence,
    levels: Vec<GridFunction>,
}

impl FiniteMartingale {
    /// Validates adaptedness and `E_n f_{n+1} = f_n` within [`MARTINGALE_TOLERANCE`].
    pub fn new(levels: Vec<GridFunction>) -> Result<Self> {
        let Some(first) = levels.first() else {
            return Err(Error::NotAMartingale("no levels".into()));
        };
        let generator = first.generator().clone();
        if levels.len() != generator.depth() + 1 {
            return Err(Error::LengthMismatch {
                expected: generator.depth() + 1,
                actual: levels.len(),
            });
        }
        if levels.iter().any(|f| f.generator() != &generator) {
            return Err(Error::IncompatibleGenerators);
        }
        let martingale = Self { generator, levels };
        let scale = martingale
            .levels
            .iter()
            .map(GridFunction::sup_norm)
            .fold(1.0, f64::max);
        let tol = MARTINGALE_TOLERANCE * scale;
        let adapted = martingale.adaptedness_defect();
        if adapted > tol {
            return Err(Error::NotAMartingale(format!(
                "level not constant on its cylinders (defect {adapted:.3e})"
            )));
        }
        let defect = martingale.martingale_defect();
        if defect > tol {
            return Err(Error::NotAMartingale(format!(
                "E_n f_(n+1) differs from f_n by {defect:.3e}"
            )));
        }
        Ok(martingale)
    }

    /// The martingale `f_n = E_n f` generated by one function.
    pub fn generated(f: &GridFunction) -> Self {
        let depth = f.generator().depth();
        let levels = (0..=depth)
            .map(|n| conditional_expectation(f, n).expect("rank within depth"))
            .collect();
        Self {
            generator: f.generator().clone(),
            levels,
        }
    }

    pub fn zero(generator: GeneratorSequence) -> Self {
        let levels = vec![GridFunction::zero(generator.clone()); generator.depth() + 1];
        Self { generator, levels }
    }

    pub(crate) fn from_levels_unchecked(
        generator: GeneratorSequence,
        levels: Vec<GridFunction>,
    ) -> Self {
        debug_assert_eq!(levels.len(), generator.depth() + 1);
        Self { generator, levels }
    }

    pub fn generator(&self) -> &GeneratorSequence {
        &self.generator
    }

    pub fn depth(&self) -> usize {
        self.generator.depth()
    }

    pub fn levels(&self) -> &[GridFunction] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> &GridFunction {
        &self.levels[n]
    }

    /// The last level `f_N`.
    pub fn terminal(&self) -> &GridFunction {
        &self.levels[self.depth()]
    }

    /// Largest `|f_n(x) - f_n(x mod M_n)|` over all levels.
    pub fn adaptedness_defect(&self) -> f64 {
        self.levels
            .iter()
            .enumerate()
            .map(|(n, f)| {
                let stride = self.generator.scale(n);
                f.values()
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v - f.value(i % stride)).norm())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Largest `|E_n f_{n+1} - f_n|` over all levels.
    pub fn martingale_defect(&self) -> f64 {
        (0..self.depth())
            .map(|n| {
                let projected =
                    conditional_expectation(&self.levels[n + 1], n).expect("rank within depth");
                projected
                    .max_abs_diff(&self.levels[n])
                    .expect("levels share a generator")
            })
            .fold(0.0, f64::max)
    }

    /// `f* = max_n |f_n|` pointwise.
    pub fn maximal_function(&self) -> GridFunction {
        let values = (0..self.generator.order())
            .map(|i| {
                let best = self
                    .levels
                    .iter()
                    .map(|f| f.value(i).norm())
                    .fold(0.0, f64::max);
                Complex64::new(best, 0.0)
            })
            .collect();
        GridFunction::from_parts_unchecked(self.generator.clone(), values)
    }

    /// `‖f‖_{H_p} = ‖f*‖_p`.
    pub fn hardy_quasinorm(&self, p: f64) -> Result<f64> {
        self.maximal_function().lp_quasinorm(p)
    }
}

fn check_rank(generator: &GeneratorSequence, n: usize) -> Result<()> {
    if n > generator.depth() {
        return Err(Error::OutOfRange {
            what: "n",
            value: n as u64,
            bound: format!("<= {}", generator.depth()),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vilenkin::VilenkinSystem;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_function(generator: &GeneratorSequence, seed: u64) -> GridFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        GridFunction::from_fn(generator.clone(), |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    fn brute_average(f: &GridFunction, n: usize, i: usize) -> Complex64 {
        let generator = f.generator();
        let cylinder = generator.cylinder_at(i, n).unwrap();
        let sum: Complex64 = cylinder.indices().map(|j| f.value(j)).sum();
        sum / cylinder.len() as f64
    }

    #[test]
    fn conditional_expectation_examples() {
        let walsh = GeneratorSequence::walsh(4);
        let f = random_function(&walsh, 1);
        let e0 = conditional_expectation(&f, 0).unwrap();
        assert!(e0
            .values()
            .iter()
            .all(|v| (v - f.integrate()).norm() < 1e-14));
        let e4 = conditional_expectation(&f, 4).unwrap();
        assert!(e4.max_abs_diff(&f).unwrap() < 1e-15);

        let r0 = VilenkinSystem::new(walsh.clone()).rademacher(0).unwrap();
        assert!(conditional_expectation(&r0, 0).unwrap().sup_norm() < 1e-15);
        for n in 1..=4 {
            let e = conditional_expectation(&r0, n).unwrap();
            assert!(e.max_abs_diff(&r0).unwrap() < 1e-15);
        }
        assert!(conditional_expectation(&r0, 5).is_err());
    }

    #[test]
    fn conditional_expectation_is_a_cell_average() {
        let g = GeneratorSequence::new(vec![3, 2, 4]).unwrap();
        let f = random_function(&g, 2);
        for n in 0..=3 {
            let e = conditional_expectation(&f, n).unwrap();
            for i in 0..g.order() {
                assert!((e.value(i) - brute_average(&f, n, i)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn conditional_expectation_matches_partial_sums_at_scales() {
        for g in [
            GeneratorSequence::walsh(6),
            GeneratorSequence::constant(3, 4).unwrap(),
            GeneratorSequence::cycle(&[2, 3, 4], 5).unwrap(),
        ] {
            let system = VilenkinSystem::new(g.clone());
            let f = random_function(&g, 3);
            for n in 0..=g.depth() {
                let e = conditional_expectation(&f, n).unwrap();
                let s = system.partial_sum(&f, g.scale(n)).unwrap();
                assert!(e.max_abs_diff(&s).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn maximal_function_examples() {
        let walsh = GeneratorSequence::walsh(5);
        let psi1 = VilenkinSystem::new(walsh.clone()).character(1).unwrap();
        let m = FiniteMartingale::generated(&psi1);
        assert!(m.level(0).sup_norm() < 1e-15);
        let star = m.maximal_function();
        assert!(star.values().iter().all(|v| (v.re - 1.0).abs() < 1e-15));
        for p in [0.25, 0.5, 1.0, 2.0] {
            assert!((m.hardy_quasinorm(p).unwrap() - 1.0).abs() < 1e-14);
        }

        let c = Complex64::new(-2.5, 0.0);
        let constant = FiniteMartingale::generated(&GridFunction::constant(walsh.clone(), c));
        assert!((constant.hardy_quasinorm(0.5).unwrap() - 2.5).abs() < 1e-14);
    }

    #[test]
    fn maximal_function_routes_agree_and_dominate() {
        let g = GeneratorSequence::cycle(&[2, 3, 4], 5).unwrap();
        let f = random_function(&g, 4);
        let m = FiniteMartingale::generated(&f);
        let from_levels = m.maximal_function();
        let from_averages = maximal_function_of(&f);
        assert!(from_levels.max_abs_diff(&from_averages).unwrap() < 1e-14);
        for i in 0..g.order() {
            assert!(from_levels.value(i).re + 1e-15 >= f.value(i).norm());
        }
        let h = hardy_quasinorm_of(&f, 0.5).unwrap();
        assert!((h - m.hardy_quasinorm(0.5).unwrap()).abs() < 1e-12);
        assert!(h + 1e-12 >= f.lp_quasinorm(0.5).unwrap());
    }

    #[test]
    fn generated_martingale_validates() {
        let g = GeneratorSequence::constant(3, 4).unwrap();
        let f = random_function(&g, 5);
        let m = FiniteMartingale::generated(&f);
        assert!(m.martingale_defect() < 1e-14);
        assert!(m.adaptedness_defect() < 1e-14);
        let rebuilt = FiniteMartingale::new(m.levels().to_vec()).unwrap();
        assert_eq!(rebuilt, m);
        assert!(m.terminal().max_abs_diff(&f).unwrap() < 1e-15);
    }

    #[test]
    fn rejects_non_martingales() {
        let g = GeneratorSequence::walsh(3);
        let f = random_function(&g, 6);
        let mut levels = FiniteMartingale::generated(&f).levels().to_vec();
        levels[1] = levels[2].clone();
        assert!(matches!(
            FiniteMartingale::new(levels),
            Err(Error::NotAMartingale(_))
        ));

        let mut levels = FiniteMartingale::generated(&f).levels().to_vec();
        levels[0] = levels[0].scale_real(2.0);
        assert!(matches!(
            FiniteMartingale::new(levels),
            Err(Error::NotAMartingale(_))
        ));

        let levels = FiniteMartingale::generated(&f).levels()[..3].to_vec();
        assert!(matches!(
            FiniteMartingale::new(levels),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn zero_martingale() {
        let m = FiniteMartingale::zero(GeneratorSequence::walsh(3));
        assert_eq!(m.hardy_quasinorm(0.5).unwrap(), 0.0);
    }
}
