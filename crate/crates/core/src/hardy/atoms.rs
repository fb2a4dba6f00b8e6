use std::fmt;

use num_complex::Complex64;

use super::{conditional_expectation, FiniteMartingale};
use crate::error::{Error, Result};
use crate::funcspace::GridFunction;
use crate::group::{Cylinder, GeneratorSequence};
use crate::numeric::neumaier_sum;

/// Relative tolerance for the three atom conditions.
pub const ATOM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomCondition {
    /// `∫_I a dμ = 0`
    Mean,
    /// `‖a‖_∞ <= μ(I)^{-1/p}`
    Bound,
    /// `a = 0` off `I`
    Support,
}

impl fmt::Display for AtomCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AtomCondition::Mean => "mean",
            AtomCondition::Bound => "bound",
            AtomCondition::Support => "support",
        })
    }
}

/// What [`is_p_atom`] measured.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomDiagnostics {
    /// `∫_I a dμ`
    pub mean: Complex64,
    /// `sup_I |a|`
    pub sup: f64,
    /// `μ(I)^{-1/p}`
    pub bound: f64,
    /// `sup` of `|a|` off `I`.
    pub outside: f64,
    pub failed: Vec<AtomCondition>,
}

impl AtomDiagnostics {
    pub fn is_atom(&self) -> bool {
        self.failed.is_empty()
    }
}

/// Checks whether `a` is a `p`-atom supported on the cylinder `support`.
pub fn is_p_atom(a: &GridFunction, support: &Cylinder, p: f64) -> Result<AtomDiagnostics> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    if support.order() != a.len() {
        return Err(Error::IncompatibleGenerators);
    }
    let inv_measure = a.generator().scale(support.rank()) as f64;
    let bound = inv_measure.powf(1.0 / p);
    let inside: Vec<Complex64> = support.indices().map(|i| a.value(i)).collect();
    let mean = Complex64::new(
        neumaier_sum(inside.iter().map(|v| v.re)),
        neumaier_sum(inside.iter().map(|v| v.im)),
    ) / a.len() as f64;
    let sup = inside.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let outside = a
        .values()
        .iter()
        .enumerate()
        .filter(|(i, _)| !support.contains(*i))
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max);

    let mut failed = Vec::new();
    if mean.norm() > ATOM_TOLERANCE * (bound / inv_measure).max(1.0) {
        failed.push(AtomCondition::Mean);
    }
    if sup > bound * (1.0 + ATOM_TOLERANCE) {
        failed.push(AtomCondition::Bound);
    }
    if outside > ATOM_TOLERANCE * bound.max(1.0) {
        failed.push(AtomCondition::Support);
    }
    Ok(AtomDiagnostics {
        mean,
        sup,
        bound,
        outside,
        failed,
    })
}

/// A validated `p`-atom.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    support: Cylinder,
    values: GridFunction,
    p: f64,
}

impl Atom {
    pub fn new(values: GridFunction, support: Cylinder, p: f64) -> Result<Self> {
        let diagnostics = is_p_atom(&values, &support, p)?;
        if !diagnostics.is_atom() {
            let failed: Vec<String> = diagnostics.failed.iter().map(|c| c.to_string()).collect();
            return Err(Error::NotAnAtom(failed.join(", ")));
        }
        Ok(Self { support, values, p })
    }

    pub fn support(&self) -> &Cylinder {
        &self.support
    }

    pub fn values(&self) -> &GridFunction {
        &self.values
    }

    pub fn exponent(&self) -> f64 {
        self.p
    }
}

/// A finite sum `Σ_k μ_k a_k` of `p`-atoms on one generator sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicDecomposition {
    generator: GeneratorSequence,
    coefficients: Vec<f64>,
    atoms: Vec<Atom>,
}

impl AtomicDecomposition {
    pub fn new(generator: GeneratorSequence) -> Self {
        Self {
            generator,
            coefficients: Vec::new(),
            atoms: Vec::new(),
        }
    }

    /// Appends `μ a`; all atoms must share the generator and the exponent.
    pub fn push(&mut self, coefficient: f64, atom: Atom) -> Result<()> {
        if atom.values.generator() != &self.generator {
            return Err(Error::IncompatibleGenerators);
        }
        if let Some(first) = self.atoms.first() {
            if first.p != atom.p {
                return Err(Error::InvalidExponent(atom.p));
            }
        }
        if !coefficient.is_finite() {
            return Err(Error::NonFinite {
                index: self.atoms.len(),
            });
        }
        self.coefficients.push(coefficient);
        self.atoms.push(atom);
        Ok(())
    }

    pub fn generator(&self) -> &GeneratorSequence {
        &self.generator
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `(Σ |μ_k|^p)^{1/p}`.
    pub fn coefficient_norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p <= 0.0 {
            return Err(Error::InvalidExponent(p));
        }
        Ok(neumaier_sum(self.coefficients.iter().map(|c| c.abs().powf(p))).powf(1.0 / p))
    }

    /// `Σ_k μ_k a_k` on the grid.
    pub fn sum(&self) -> GridFunction {
        let mut acc = GridFunction::zero(self.generator.clone());
        for (&mu, atom) in self.coefficients.iter().zip(&self.atoms) {
            acc.add_scaled(Complex64::new(mu, 0.0), &atom.values)
                .expect("atoms share the generator");
        }
        acc
    }
}

/// The martingale with levels `f_n = Σ_k μ_k E_n a_k`.
pub fn assemble_martingale(dec: &AtomicDecomposition) -> FiniteMartingale {
    let generator = dec.generator.clone();
    let levels = (0..=generator.depth())
        .map(|n| {
            let mut acc = GridFunction::zero(generator.clone());
            for (&mu, atom) in dec.coefficients.iter().zip(&dec.atoms) {
                // E_n a = 0 whenever the support is coarser than level n.
                if atom.support.rank() >= n {
                    continue;
                }
                let projected =
                    conditional_expectation(&atom.values, n).expect("rank within depth");
                acc.add_scaled(Complex64::new(mu, 0.0), &projected)
                    .expect("atoms share the generator");
            }
            acc
        })
        .collect();
    FiniteMartingale::from_levels_unchecked(generator, levels)
}
