//! Vilenkin-Fourier transform on a depth-`N` grid.
//!
//! The characters factor over digits, `ψ_j(x) = Π_k exp(2πi j_k x_k / m_k)`, so the
//! transform is a tensor product of size-`m_k` character transforms. The fast path
//! applies one dense `m_k x m_k` matrix along each digit axis in place, touching
//! every value `N` times for a total cost of `O(M_N Σ_k m_k)`. Summation order inside
//! each small transform is fixed, which keeps results bit-identical across runs.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::funcspace::GridFunction;
use crate::group::GeneratorSequence;
use crate::numeric::unit_root;

/// Vilenkin-Fourier coefficients `f̂(0..M_N)`, indexed like grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector {
    generator: GeneratorSequence,
    coeffs: Vec<Complex64>,
}

impl SpectralVector {
    pub fn new(generator: GeneratorSequence, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != generator.order() {
            return Err(Error::LengthMismatch {
                expected: generator.order(),
                actual: coeffs.len(),
            });
        }
        if let Some(index) = coeffs
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { generator, coeffs })
    }

    /// Coefficients `c(j)` for `j < M_N` from a closure.
    pub fn from_fn(generator: GeneratorSequence, f: impl FnMut(usize) -> Complex64) -> Self {
        let coeffs = (0..generator.order()).map(f).collect();
        Self::new(generator, coeffs).expect("closure produced a non-finite coefficient")
    }

    pub fn generator(&self) -> &GeneratorSequence {
        &self.generator
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs[j]
    }

    /// `Σ_j |f̂(j)|²`, which equals `‖f‖_2²` by Parseval.
    pub fn energy(&self) -> f64 {
        crate::numeric::neumaier_sum(self.coeffs.iter().map(|c| c.norm_sqr()))
    }

    /// Pointwise multiplication by spectral weights `w(j)`.
    pub fn multiply(&self, weight: impl Fn(usize) -> f64) -> Self {
        Self {
            generator: self.generator.clone(),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, &c)| c * weight(j))
                .collect(),
        }
    }

    pub(crate) fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    /// `Σ_x f(x) conj(ψ_j(x))`
    Analysis,
    /// `Σ_j c_j ψ_j(x)`
    Synthesis,
}

/// Per-radix character matrices for the axis passes.
#[derive(Debug, Clone)]
pub(crate) struct AxisKernels {
    // analysis[m] / synthesis[m]: row-major m x m, empty when radix m is unused.
    analysis: Vec<Vec<Complex64>>,
    synthesis: Vec<Vec<Complex64>>,
}

impl AxisKernels {
    pub(crate) fn new(generator: &GeneratorSequence) -> Self {
        let bound = generator.bound();
        let mut analysis = vec![Vec::new(); bound + 1];
        let mut synthesis = vec![Vec::new(); bound + 1];
        for &m in generator.radices() {
            if !synthesis[m].is_empty() {
                continue;
            }
            let mut fwd = Vec::with_capacity(m * m);
            let mut inv = Vec::with_capacity(m * m);
            for u in 0..m {
                for t in 0..m {
                    fwd.push(unit_root(m - (u * t) % m, m));
                    inv.push(unit_root(u * t, m));
                }
            }
            analysis[m] = fwd;
            synthesis[m] = inv;
        }
        Self {
            analysis,
            synthesis,
        }
    }

    /// Applies the unnormalized transform along every digit axis, in place.
    pub(crate) fn apply(
        &self,
        generator: &GeneratorSequence,
        data: &mut [Complex64],
        direction: Direction,
    ) {
        debug_assert_eq!(data.len(), generator.order());
        let mut scratch = Vec::with_capacity(generator.bound());
        for k in 0..generator.depth() {
            let m = generator.radix(k);
            let stride = generator.scale(k);
            let block = generator.scale(k + 1);
            if m == 2 {
                for chunk in data.chunks_exact_mut(block) {
                    let (lo, hi) = chunk.split_at_mut(stride);
                    for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                        let (x, y) = (*a, *b);
                        *a = x + y;
                        *b = x - y;
                    }
                }
                continue;
            }
            let matrix = match direction {
                Direction::Analysis => &self.analysis[m],
                Direction::Synthesis => &self.synthesis[m],
            };
            for chunk in data.chunks_exact_mut(block) {
                for offset in 0..stride {
                    scratch.clear();
                    scratch.extend((0..m).map(|t| chunk[offset + t * stride]));
                    for u in 0..m {
                        let row = &matrix[u * m..(u + 1) * m];
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (w, v) in row.iter().zip(&scratch) {
                            acc += w * v;
                        }
                        chunk[offset + u * stride] = acc;
                    }
                }
            }
        }
    }
}

/// Exact character values via a common denominator `L = lcm(m_k)`:
/// `ψ_j(x) = exp(2πi · (Σ_k j_k x_k L/m_k) / L)`.
#[derive(Debug, Clone)]
pub(crate) struct CharacterTable {
    lcm: usize,
    weights: Vec<usize>,
    roots: Vec<Complex64>,
}

impl CharacterTable {
    pub(crate) fn new(generator: &GeneratorSequence) -> Self {
        let lcm = generator
            .radices()
            .iter()
            .fold(1usize, |acc, &m| acc / gcd(acc, m) * m);
        let weights = generator.radices().iter().map(|&m| lcm / m).collect();
        let roots = (0..lcm).map(|t| unit_root(t, lcm)).collect();
        Self {
            lcm,
            weights,
            roots,
        }
    }

    /// Phase numerator of `ψ_j(x)` modulo `L`.
    pub(crate) fn phase(&self, generator: &GeneratorSequence, j: usize, x: usize) -> usize {
        let mut phase = 0usize;
        for (k, &w) in self.weights.iter().enumerate() {
            let jk = generator.digit_of(j, k);
            if jk != 0 {
                phase = (phase + jk * generator.digit_of(x, k) * w) % self.lcm;
            }
        }
        phase
    }

    pub(crate) fn value(&self, generator: &GeneratorSequence, j: usize, x: usize) -> Complex64 {
        self.roots[self.phase(generator, j, x)]
    }

    pub(crate) fn conj_value(
        &self,
        generator: &GeneratorSequence,
        j: usize,
        x: usize,
    ) -> Complex64 {
        let phase = self.phase(generator, j, x);
        self.roots[(self.lcm - phase) % self.lcm]
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn forward_fast(kernels: &AxisKernels, f: &GridFunction) -> SpectralVector {
    let generator = f.generator().clone();
    let mut data = f.values().to_vec();
    kernels.apply(&generator, &mut data, Direction::Analysis);
    let scale = 1.0 / generator.order() as f64;
    for v in &mut data {
        *v *= scale;
    }
    SpectralVector {
        generator,
        coeffs: data,
    }
}

pub(crate) fn inverse_fast(kernels: &AxisKernels, spectrum: &SpectralVector) -> GridFunction {
    let generator = spectrum.generator().clone();
    let mut data = spectrum.coeffs.clone();
    kernels.apply(&generator, &mut data, Direction::Synthesis);
    GridFunction::from_parts_unchecked(generator, data)
}

pub(crate) fn inverse_fast_owned(kernels: &AxisKernels, spectrum: SpectralVector) -> GridFunction {
    let generator = spectrum.generator().clone();
    let mut data = spectrum.into_coeffs();
    kernels.apply(&generator, &mut data, Direction::Synthesis);
    GridFunction::from_parts_unchecked(generator, data)
}

pub(crate) fn forward_naive(table: &CharacterTable, f: &GridFunction) -> SpectralVector {
    let generator = f.generator().clone();
    let order = generator.order();
    let scale = 1.0 / order as f64;
    let coeffs = (0..order)
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, &v) in f.values().iter().enumerate() {
                acc += v * table.conj_value(&generator, j, x);
            }
            acc * scale
        })
        .collect();
    SpectralVector { generator, coeffs }
}

pub(crate) fn inverse_naive(table: &CharacterTable, spectrum: &SpectralVector) -> GridFunction {
    let generator = spectrum.generator().clone();
    let order = generator.order();
    let values = (0..order)
        .map(|x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &c) in spectrum.coeffs.iter().enumerate() {
                acc += c * table.value(&generator, j, x);
            }
            acc
        })
        .collect();
    GridFunction::from_parts_unchecked(generator, values)
}
