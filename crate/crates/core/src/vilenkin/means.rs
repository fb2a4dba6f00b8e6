use num_complex::Complex64;

use super::{SpectralVector, VilenkinSystem};
use crate::error::{Error, Result};
use crate::funcspace::GridFunction;

impl VilenkinSystem {
    /// Partial sum `S_n f = Σ_{k<n} f̂(k) ψ_k`, with `S_0 f = 0`.
    pub fn partial_sum(&self, f: &GridFunction, n: usize) -> Result<GridFunction> {
        self.check_count("n", n, 0)?;
        self.apply_multiplier(f, |j| if j < n { 1.0 } else { 0.0 })
    }

    /// `S_n` of a function given by its spectrum.
    pub fn partial_sum_of_spectrum(
        &self,
        spectrum: &SpectralVector,
        n: usize,
    ) -> Result<GridFunction> {
        self.check_count("n", n, 0)?;
        if spectrum.generator() != self.generator() {
            return Err(Error::IncompatibleGenerators);
        }
        Ok(self.synthesize_multiplied(spectrum, |j| if j < n { 1.0 } else { 0.0 }))
    }

    /// Fejér mean `σ_n f` via its spectral multiplier `(n-1-j)/n` on `j <= n-2`.
    pub fn fejer_mean(&self, f: &GridFunction, n: usize) -> Result<GridFunction> {
        self.check_count("n", n, 1)?;
        self.apply_multiplier(f, fejer_weight(n))
    }

    /// `σ_n` of a function given by its spectrum.
    pub fn fejer_mean_of_spectrum(
        &self,
        spectrum: &SpectralVector,
        n: usize,
    ) -> Result<GridFunction> {
        self.check_count("n", n, 1)?;
        if spectrum.generator() != self.generator() {
            return Err(Error::IncompatibleGenerators);
        }
        Ok(self.synthesize_multiplied(spectrum, fejer_weight(n)))
    }

    /// Fejér mean by its definition `(1/n) Σ_{k<n} S_k f`.
    pub fn fejer_mean_averaged(&self, f: &GridFunction, n: usize) -> Result<GridFunction> {
        self.check_count("n", n, 1)?;
        let spectrum = self.forward(f)?;
        let mut acc = GridFunction::zero(self.generator().clone());
        for k in 1..n {
            let s = self.partial_sum_of_spectrum(&spectrum, k)?;
            acc.add_scaled(Complex64::new(1.0, 0.0), &s)?;
        }
        Ok(acc.scale_real(1.0 / n as f64))
    }

    /// Group convolution `(f * g)(x) = ∫ f(t) g(x ⊖ t) dμ(t)` by direct summation.
    pub fn convolve(&self, f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
        if f.generator() != self.generator() || g.generator() != self.generator() {
            return Err(Error::IncompatibleGenerators);
        }
        let generator = self.generator();
        let order = generator.order();
        let scale = 1.0 / order as f64;
        Ok(GridFunction::from_fn(generator.clone(), |x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..order {
                acc += f.value(t) * g.value(generator.sub_index(x, t));
            }
            acc * scale
        }))
    }
}

fn fejer_weight(n: usize) -> impl Fn(usize) -> f64 {
    move |j| {
        if j + 1 < n {
            (n - 1 - j) as f64 / n as f64
        } else {
            0.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GeneratorSequence;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_function(generator: &GeneratorSequence, seed: u64) -> GridFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        GridFunction::from_fn(generator.clone(), |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn partial_sum_examples() {
        let g = GeneratorSequence::walsh(3);
        let system = VilenkinSystem::new(g.clone());
        let f = random_function(&g, 1);
        let zero = system.partial_sum(&f, 0).unwrap();
        assert!(zero.values().iter().all(|v| v.norm() == 0.0));
        let psi3 = system.character(3).unwrap();
        assert!(system.partial_sum(&psi3, 3).unwrap().sup_norm() == 0.0);
        assert_eq!(system.partial_sum(&psi3, 4).unwrap(), psi3);
        let full = system.partial_sum(&f, 8).unwrap();
        assert!(full.max_abs_diff(&f).unwrap() < 1e-12);
        assert!(system.partial_sum(&f, 9).is_err());
    }

    #[test]
    fn fejer_mean_examples() {
        let g = GeneratorSequence::cycle(&[2, 3], 4).unwrap();
        let system = VilenkinSystem::new(g.clone());
        let one = system.character(0).unwrap();
        for n in 1..=g.order() {
            let s = system.fejer_mean(&one, n).unwrap();
            let expected = (n - 1) as f64 / n as f64;
            assert!(s.values().iter().all(|v| (v - expected).norm() < 1e-12));
        }
        let f = random_function(&g, 2);
        assert!(system.fejer_mean(&f, 1).unwrap().sup_norm() < 1e-15);
        assert!(system.fejer_mean(&f, 0).is_err());
    }

    #[test]
    fn fejer_routes_agree() {
        for (seed, g) in [
            GeneratorSequence::walsh(5),
            GeneratorSequence::constant(3, 3).unwrap(),
            GeneratorSequence::cycle(&[2, 3, 4], 3).unwrap(),
        ]
        .into_iter()
        .enumerate()
        {
            let system = VilenkinSystem::new(g.clone());
            let f = random_function(&g, 10 + seed as u64);
            for n in 1..=g.order() {
                let a = system.fejer_mean(&f, n).unwrap();
                let b = system.fejer_mean_averaged(&f, n).unwrap();
                assert!(a.max_abs_diff(&b).unwrap() < 1e-10, "{g:?} n={n}");
            }
        }
    }

    #[test]
    fn means_are_convolutions_with_kernels() {
        let g = GeneratorSequence::cycle(&[3, 2], 4).unwrap();
        let system = VilenkinSystem::new(g.clone());
        let f = random_function(&g, 5);
        for n in 1..12 {
            let by_kernel = system
                .convolve(&f, &system.fejer_kernel(n).unwrap())
                .unwrap();
            let direct = system.fejer_mean(&f, n).unwrap();
            assert!(by_kernel.max_abs_diff(&direct).unwrap() < 1e-10);
            let by_dirichlet = system.convolve(&f, &system.dirichlet(n).unwrap()).unwrap();
            let partial = system.partial_sum(&f, n).unwrap();
            assert!(by_dirichlet.max_abs_diff(&partial).unwrap() < 1e-10);
        }
    }

    #[test]
    fn convolution_theorem() {
        let g = GeneratorSequence::cycle(&[2, 3, 4], 3).unwrap();
        let system = VilenkinSystem::new(g.clone());
        let f = random_function(&g, 6);
        let h = random_function(&g, 7);
        let conv = system.forward(&system.convolve(&f, &h).unwrap()).unwrap();
        let fh = system.forward(&f).unwrap();
        let hh = system.forward(&h).unwrap();
        for j in 0..g.order() {
            assert!((conv.coeff(j) - fh.coeff(j) * hh.coeff(j)).norm() < 1e-12);
        }
    }
}
