//! The Vilenkin orthonormal system and everything built on its spectrum:
//! transforms, Dirichlet and Fejér kernels, partial sums, Fejér means and
//! Lebesgue constants.

mod kernels;
mod means;
mod transform;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::funcspace::GridFunction;
use crate::group::GeneratorSequence;
use crate::numeric::unit_root;

pub use transform::SpectralVector;
use transform::{AxisKernels, CharacterTable};

/// The Vilenkin system `ψ_0, .., ψ_{M_N - 1}` on a fixed depth-`N` grid.
///
/// Construction precomputes the per-radix character matrices used by the fast
/// transform and an exact root-of-unity table used by the naive reference path.
#[derive(Debug, Clone)]
pub struct VilenkinSystem {
    generator: GeneratorSequence,
    axes: AxisKernels,
    characters: CharacterTable,
}

impl VilenkinSystem {
    pub fn new(generator: GeneratorSequence) -> Self {
        let axes = AxisKernels::new(&generator);
        let characters = CharacterTable::new(&generator);
        Self {
            generator,
            axes,
            characters,
        }
    }

    pub fn generator(&self) -> &GeneratorSequence {
        &self.generator
    }

    pub fn order(&self) -> usize {
        self.generator.order()
    }

    fn check(&self, f: &GridFunction) -> Result<()> {
        if f.generator() != &self.generator {
            return Err(Error::IncompatibleGenerators);
        }
        Ok(())
    }

    fn check_spectrum(&self, s: &SpectralVector) -> Result<()> {
        if s.generator() != &self.generator {
            return Err(Error::IncompatibleGenerators);
        }
        Ok(())
    }

    pub(crate) fn check_count(&self, what: &'static str, n: usize, min: usize) -> Result<()> {
        if n < min || n > self.order() {
            return Err(Error::OutOfRange {
                what,
                value: n as u64,
                bound: format!("in [{min}, {}]", self.order()),
            });
        }
        Ok(())
    }

    /// Generalized Rademacher function `r_k(x) = exp(2πi x_k / m_k)`.
    pub fn rademacher(&self, k: usize) -> Result<GridFunction> {
        if k >= self.generator.depth() {
            return Err(Error::OutOfRange {
                what: "k",
                value: k as u64,
                bound: format!("< {}", self.generator.depth()),
            });
        }
        let m = self.generator.radix(k);
        Ok(GridFunction::from_fn(self.generator.clone(), |x| {
            unit_root(self.generator.digit_of(x, k), m)
        }))
    }

    /// The character `ψ_n = Π_k r_k^{n_k}`.
    pub fn character(&self, n: usize) -> Result<GridFunction> {
        if n >= self.order() {
            return Err(Error::OutOfRange {
                what: "n",
                value: n as u64,
                bound: format!("< {}", self.order()),
            });
        }
        Ok(GridFunction::from_fn(self.generator.clone(), |x| {
            self.characters.value(&self.generator, n, x)
        }))
    }

    /// Fast mixed-radix analysis `f̂(j) = ∫ f conj(ψ_j) dμ`.
    pub fn forward(&self, f: &GridFunction) -> Result<SpectralVector> {
        self.check(f)?;
        Ok(transform::forward_fast(&self.axes, f))
    }

    /// Fast synthesis `Σ_j c_j ψ_j`.
    pub fn inverse(&self, spectrum: &SpectralVector) -> Result<GridFunction> {
        self.check_spectrum(spectrum)?;
        Ok(transform::inverse_fast(&self.axes, spectrum))
    }

    /// `O(M_N²)` reference for [`forward`](Self::forward).
    pub fn forward_naive(&self, f: &GridFunction) -> Result<SpectralVector> {
        self.check(f)?;
        Ok(transform::forward_naive(&self.characters, f))
    }

    /// `O(M_N²)` reference for [`inverse`](Self::inverse).
    pub fn inverse_naive(&self, spectrum: &SpectralVector) -> Result<GridFunction> {
        self.check_spectrum(spectrum)?;
        Ok(transform::inverse_naive(&self.characters, spectrum))
    }

    /// Synthesizes `Σ_j c(j) ψ_j` from a coefficient closure.
    pub fn synthesize(&self, coeff: impl Fn(usize) -> Complex64) -> GridFunction {
        let spectrum = SpectralVector::from_fn(self.generator.clone(), coeff);
        transform::inverse_fast_owned(&self.axes, spectrum)
    }

    /// Applies the spectral multiplier `w(j)` to `f`.
    pub fn apply_multiplier(
        &self,
        f: &GridFunction,
        weight: impl Fn(usize) -> f64,
    ) -> Result<GridFunction> {
        let spectrum = self.forward(f)?.multiply(weight);
        Ok(transform::inverse_fast_owned(&self.axes, spectrum))
    }

    /// Synthesis of an already-scaled spectrum without copying it first.
    pub(crate) fn synthesize_multiplied(
        &self,
        spectrum: &SpectralVector,
        weight: impl Fn(usize) -> f64,
    ) -> GridFunction {
        transform::inverse_fast_owned(&self.axes, spectrum.multiply(weight))
    }
}
