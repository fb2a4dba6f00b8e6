//! Complex step functions on the group, constant on depth-`N` cylinders.
//!
//! Integrals are exact: the Haar measure gives each depth-`N` cell mass `1/M_N`,
//! so every integral is a finite average of cell values.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{Cylinder, GeneratorSequence};
use crate::numeric::{format_f64, neumaier_sum};

/// A step function stored as its `M_N` cell values, indexed by `point_index`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    generator: GeneratorSequence,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(generator: GeneratorSequence, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != generator.order() {
            return Err(Error::LengthMismatch {
                expected: generator.order(),
                actual: values.len(),
            });
        }
        if let Some(index) = values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { generator, values })
    }

    pub fn from_real(generator: GeneratorSequence, values: Vec<f64>) -> Result<Self> {
        Self::new(
            generator,
            values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
        )
    }

    /// Builds values from a closure over grid indices. Panics on non-finite output.
    pub fn from_fn(generator: GeneratorSequence, f: impl FnMut(usize) -> Complex64) -> Self {
        let values = (0..generator.order()).map(f).collect();
        Self::new(generator, values).expect("closure produced a non-finite value")
    }

    pub fn zero(generator: GeneratorSequence) -> Self {
        Self::constant(generator, Complex64::new(0.0, 0.0))
    }

    pub fn constant(generator: GeneratorSequence, c: Complex64) -> Self {
        let values = vec![c; generator.order()];
        Self { generator, values }
    }

    /// `scale · 1_I` for a cylinder `I`.
    pub fn indicator(generator: GeneratorSequence, cylinder: &Cylinder, scale: f64) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); generator.order()];
        for i in cylinder.indices() {
            values[i] = Complex64::new(scale, 0.0);
        }
        Self { generator, values }
    }

    pub(crate) fn from_parts_unchecked(
        generator: GeneratorSequence,
        values: Vec<Complex64>,
    ) -> Self {
        debug_assert_eq!(values.len(), generator.order());
        Self { generator, values }
    }

    pub fn generator(&self) -> &GeneratorSequence {
        &self.generator
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn value(&self, index: usize) -> Complex64 {
        self.values[index]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Haar integral `(1/M_N) Σ f`.
    pub fn integrate(&self) -> Complex64 {
        let re = neumaier_sum(self.values.iter().map(|v| v.re));
        let im = neumaier_sum(self.values.iter().map(|v| v.im));
        Complex64::new(re, im) / self.len() as f64
    }

    /// `∫ |f|^p dμ`, i.e. `‖f‖_p^p`.
    pub fn lp_power(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        let total = if p == 1.0 {
            neumaier_sum(self.values.iter().map(|v| v.norm()))
        } else if p == 2.0 {
            neumaier_sum(self.values.iter().map(|v| v.norm_sqr()))
        } else if p == 0.5 {
            neumaier_sum(self.values.iter().map(|v| v.norm().sqrt()))
        } else {
            neumaier_sum(self.values.iter().map(|v| v.norm().powf(p)))
        };
        Ok(total / self.len() as f64)
    }

    /// The `L_p` (quasi-)norm `(∫ |f|^p dμ)^{1/p}`.
    pub fn lp_quasinorm(&self, p: f64) -> Result<f64> {
        Ok(self.lp_power(p)?.powf(1.0 / p))
    }

    /// The weak-`L_p` quantity `sup_λ λ^p μ{|f| > λ}`.
    ///
    /// For a step function the supremum is approached as `λ` increases to one of the
    /// distinct values `v` of `|f|`, where it equals `v^p μ{|f| >= v}`.
    pub fn weak_lp(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        let mut magnitudes: Vec<f64> = self.values.iter().map(|v| v.norm()).collect();
        magnitudes.sort_by(|a, b| b.total_cmp(a));
        let total = magnitudes.len() as f64;
        let mut best = 0.0f64;
        let mut i = 0;
        while i < magnitudes.len() && magnitudes[i] > 0.0 {
            let v = magnitudes[i];
            while i < magnitudes.len() && magnitudes[i] == v {
                i += 1;
            }
            best = best.max(v.powf(p) * (i as f64 / total));
        }
        Ok(best)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Re-expresses `f` on a deeper generator sequence whose prefix is `f`'s generator.
    pub fn refine(&self, deeper: &GeneratorSequence) -> Result<Self> {
        if !self.generator.is_prefix_of(deeper) {
            return Err(Error::IncompatibleGenerators);
        }
        let coarse = self.len();
        let values = (0..deeper.order())
            .map(|i| self.values[i % coarse])
            .collect();
        Ok(Self {
            generator: deeper.clone(),
            values,
        })
    }

    fn check_compatible(&self, other: &GridFunction) -> Result<()> {
        if self.generator != other.generator {
            return Err(Error::IncompatibleGenerators);
        }
        Ok(())
    }

    pub fn zip_with(
        &self,
        other: &GridFunction,
        op: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| op(a, b))
            .collect();
        Ok(Self {
            generator: self.generator.clone(),
            values,
        })
    }

    pub fn add(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.map(|v| v * c)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            generator: self.generator.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// In-place `self += c · other`.
    pub fn add_scaled(&mut self, c: Complex64, other: &GridFunction) -> Result<()> {
        self.check_compatible(other)?;
        for (a, &b) in self.values.iter_mut().zip(&other.values) {
            *a += c * b;
        }
        Ok(())
    }

    /// Largest pointwise `|f - g|`.
    pub fn max_abs_diff(&self, other: &GridFunction) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// CSV dump with header `index,real,imag`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,real,imag\n");
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{i},{},{}", format_f64(v.re), format_f64(v.im));
        }
        out
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}
