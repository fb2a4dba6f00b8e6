use num_complex::Complex64;

use super::VilenkinSystem;
use crate::error::Result;
use crate::funcspace::GridFunction;

impl VilenkinSystem {
    /// Dirichlet kernel `D_n = Σ_{k<n} ψ_k` for `1 <= n <= M_N`.
    pub fn dirichlet(&self, n: usize) -> Result<GridFunction> {
        self.check_count("n", n, 1)?;
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Ok(self.synthesize(|j| if j < n { one } else { zero }))
    }

    /// `n K_n = Σ_{k<n} D_k = Σ_{j<=n-2} (n-1-j) ψ_j`, with integer spectral weights.
    pub fn scaled_fejer_kernel(&self, n: usize) -> Result<GridFunction> {
        self.check_count("n", n, 1)?;
        Ok(self.synthesize(|j| {
            let w = if j + 1 < n { (n - 1 - j) as f64 } else { 0.0 };
            Complex64::new(w, 0.0)
        }))
    }

    /// Fejér kernel `K_n = (1/n) Σ_{k<n} D_k` with `D_0 = 0`.
    pub fn fejer_kernel(&self, n: usize) -> Result<GridFunction> {
        Ok(self.scaled_fejer_kernel(n)?.scale_real(1.0 / n as f64))
    }

    /// Lebesgue constant `L_n = ‖D_n‖_1`.
    pub fn lebesgue_constant(&self, n: usize) -> Result<f64> {
        self.dirichlet(n)?.lp_power(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GeneratorSequence;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn direct_dirichlet(system: &VilenkinSystem, n: usize) -> GridFunction {
        let mut acc = GridFunction::zero(system.generator().clone());
        for k in 0..n {
            acc.add_scaled(c(1.0), &system.character(k).unwrap())
                .unwrap();
        }
        acc
    }

    fn direct_fejer(system: &VilenkinSystem, n: usize) -> GridFunction {
        let mut acc = GridFunction::zero(system.generator().clone());
        for k in 1..n {
            acc.add_scaled(c(1.0), &direct_dirichlet(system, k))
                .unwrap();
        }
        acc.scale_real(1.0 / n as f64)
    }

    fn test_generators() -> Vec<GeneratorSequence> {
        vec![
            GeneratorSequence::walsh(4),
            GeneratorSequence::constant(3, 3).unwrap(),
            GeneratorSequence::cycle(&[2, 3, 4], 3).unwrap(),
        ]
    }

    #[test]
    fn dirichlet_examples() {
        let system = VilenkinSystem::new(GeneratorSequence::walsh(3));
        assert!(system
            .dirichlet(1)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == c(1.0)));
        // D_4 = 4 on I_2 = {0, 4}
        let d4 = system.dirichlet(4).unwrap();
        for x in 0..8 {
            let expected = if x % 4 == 0 { 4.0 } else { 0.0 };
            assert_eq!(d4.value(x), c(expected));
        }
        // D_3 = 1 + r_0 + r_1 on cells (x_0, x_1) = (0,0), (1,0), (0,1), (1,1)
        let d3 = system.dirichlet(3).unwrap();
        assert_eq!(d3.value(0), c(3.0));
        assert_eq!(d3.value(1), c(1.0));
        assert_eq!(d3.value(2), c(1.0));
        assert_eq!(d3.value(3), c(-1.0));
        assert!(system.dirichlet(0).is_err());
        assert!(system.dirichlet(9).is_err());
    }

    #[test]
    fn dirichlet_matches_direct_sum() {
        for g in test_generators() {
            let system = VilenkinSystem::new(g.clone());
            for n in 1..=g.order() {
                let fast = system.dirichlet(n).unwrap();
                let direct = direct_dirichlet(&system, n);
                assert!(fast.max_abs_diff(&direct).unwrap() < 1e-9, "{g:?} n={n}");
            }
        }
    }

    #[test]
    fn fejer_examples() {
        let system = VilenkinSystem::new(GeneratorSequence::walsh(3));
        assert!(system
            .fejer_kernel(1)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == c(0.0)));
        assert!(system
            .fejer_kernel(2)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == c(0.5)));
        let lhs = system.scaled_fejer_kernel(5).unwrap();
        let rhs = system
            .scaled_fejer_kernel(4)
            .unwrap()
            .add(&system.dirichlet(4).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn fejer_multiplier_form_matches_averaging() {
        for g in test_generators() {
            let system = VilenkinSystem::new(g.clone());
            for n in 1..=g.order() {
                let fast = system.fejer_kernel(n).unwrap();
                let direct = direct_fejer(&system, n);
                assert!(fast.max_abs_diff(&direct).unwrap() < 1e-9, "{g:?} n={n}");
            }
        }
    }

    #[test]
    fn lebesgue_examples() {
        let system = VilenkinSystem::new(GeneratorSequence::walsh(3));
        assert_eq!(system.lebesgue_constant(2).unwrap(), 1.0);
        assert_eq!(system.lebesgue_constant(3).unwrap(), 1.5);
        for g in test_generators() {
            let system = VilenkinSystem::new(g.clone());
            for k in 0..=g.depth() {
                let l = system.lebesgue_constant(g.scale(k)).unwrap();
                assert!((l - 1.0).abs() < 1e-12, "{g:?} k={k}: {l}");
            }
        }
    }
}
