//! Digit and group arithmetic on a bounded Vilenkin group truncated at a finite depth.
//!
//! A [`GeneratorSequence`] `m = (m_0, ..., m_{N-1})` fixes both the group
//! `Z_{m_0} x ... x Z_{m_{N-1}}` and the mixed-radix number system with scale
//! factors `M_0 = 1`, `M_{k+1} = m_k M_k`. Points of the group are stored as
//! digit vectors; the bijection `x -> sum_k x_k M_k` uses the same convention as
//! integer digit expansions, so grid indices and Vilenkin indices line up.

use std::fmt;

use crate::error::{Error, Result};

/// Scale factors `M_0..M_N` of the generalized number system.
pub fn scale_factors(radices: &[usize]) -> Result<Vec<usize>> {
    let mut scale = Vec::with_capacity(radices.len() + 1);
    scale.push(1usize);
    for (position, &value) in radices.iter().enumerate() {
        if value < 2 {
            return Err(Error::InvalidGenerator { position, value });
        }
        let next = scale[position]
            .checked_mul(value)
            .ok_or(Error::OrderOverflow {
                depth: position + 1,
            })?;
        scale.push(next);
    }
    Ok(scale)
}

/// The bounded generator sequence `m` truncated to depth `N`, together with its scale factors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GeneratorSequence {
    radices: Vec<usize>,
    scale: Vec<usize>,
}

impl fmt::Debug for GeneratorSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GeneratorSequence{:?}", self.radices)
    }
}

impl GeneratorSequence {
    pub fn new(radices: Vec<usize>) -> Result<Self> {
        let scale = scale_factors(&radices)?;
        Ok(Self { radices, scale })
    }

    /// `m_k = radix` for every `k < depth`.
    pub fn constant(radix: usize, depth: usize) -> Result<Self> {
        Self::new(vec![radix; depth])
    }

    /// Repeats `pattern` until `depth` generators are produced.
    pub fn cycle(pattern: &[usize], depth: usize) -> Result<Self> {
        if pattern.is_empty() && depth > 0 {
            return Err(Error::InvalidRanks("empty cycle pattern".into()));
        }
        Self::new(pattern.iter().copied().cycle().take(depth).collect())
    }

    /// The Walsh-Paley case `m = 2`.
    pub fn walsh(depth: usize) -> Self {
        Self::constant(2, depth).expect("walsh group order must fit in usize")
    }

    pub fn depth(&self) -> usize {
        self.radices.len()
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    /// `m_k`. Panics if `k >= depth`.
    pub fn radix(&self, k: usize) -> usize {
        self.radices[k]
    }

    /// `M_k` for `0 <= k <= N`. Panics if `k > depth`.
    pub fn scale(&self, k: usize) -> usize {
        self.scale[k]
    }

    pub fn scales(&self) -> &[usize] {
        &self.scale
    }

    /// `M_N`, the number of depth-`N` cylinder cells.
    pub fn order(&self) -> usize {
        self.scale[self.radices.len()]
    }

    /// `sup_k m_k`; 0 for the empty sequence.
    pub fn bound(&self) -> usize {
        self.radices.iter().copied().max().unwrap_or(0)
    }

    pub fn is_walsh(&self) -> bool {
        self.radices.iter().all(|&m| m == 2)
    }

    /// The first `depth` generators.
    pub fn truncate(&self, depth: usize) -> Result<Self> {
        if depth > self.depth() {
            return Err(Error::InsufficientDepth {
                need: depth,
                have: self.depth(),
            });
        }
        Ok(Self {
            radices: self.radices[..depth].to_vec(),
            scale: self.scale[..=depth].to_vec(),
        })
    }

    pub fn is_prefix_of(&self, other: &GeneratorSequence) -> bool {
        other.radices.starts_with(&self.radices)
    }

    fn check_index(&self, what: &'static str, n: usize) -> Result<()> {
        if n >= self.order() {
            return Err(Error::OutOfRange {
                what,
                value: n as u64,
                bound: format!("< {}", self.order()),
            });
        }
        Ok(())
    }

    fn check_rank(&self, what: &'static str, n: usize) -> Result<()> {
        if n > self.depth() {
            return Err(Error::OutOfRange {
                what,
                value: n as u64,
                bound: format!("<= {}", self.depth()),
            });
        }
        Ok(())
    }

    /// Digit `k` of the index `n` (equivalently of the point with that index).
    #[inline]
    pub fn digit_of(&self, n: usize, k: usize) -> usize {
        (n / self.scale[k]) % self.radices[k]
    }

    pub fn to_digits(&self, n: usize) -> Result<DigitExpansion> {
        self.check_index("n", n)?;
        let digits = (0..self.depth()).map(|k| self.digit_of(n, k)).collect();
        Ok(DigitExpansion { value: n, digits })
    }

    pub fn from_digits(&self, digits: &[usize]) -> Result<usize> {
        self.validate_digits(digits)?;
        Ok(digits
            .iter()
            .zip(&self.scale)
            .map(|(&d, &scale)| d * scale)
            .sum())
    }

    fn validate_digits(&self, digits: &[usize]) -> Result<()> {
        if digits.len() != self.depth() {
            return Err(Error::LengthMismatch {
                expected: self.depth(),
                actual: digits.len(),
            });
        }
        for (position, (&digit, &radix)) in digits.iter().zip(&self.radices).enumerate() {
            if digit >= radix {
                return Err(Error::InvalidDigit {
                    position,
                    digit,
                    radix,
                });
            }
        }
        Ok(())
    }

    pub fn point(&self, digits: Vec<usize>) -> Result<GroupPoint> {
        self.validate_digits(&digits)?;
        Ok(GroupPoint { digits })
    }

    pub fn zero(&self) -> GroupPoint {
        GroupPoint {
            digits: vec![0; self.depth()],
        }
    }

    /// `e_k = (0, .., 0, 1, 0, ..)` with the one at position `k`.
    pub fn unit(&self, k: usize) -> Result<GroupPoint> {
        if k >= self.depth() {
            return Err(Error::OutOfRange {
                what: "k",
                value: k as u64,
                bound: format!("< {}", self.depth()),
            });
        }
        let mut digits = vec![0; self.depth()];
        digits[k] = 1;
        Ok(GroupPoint { digits })
    }

    /// Componentwise `(x_k + y_k) mod m_k`.
    pub fn add(&self, x: &GroupPoint, y: &GroupPoint) -> Result<GroupPoint> {
        self.validate_digits(&x.digits)?;
        self.validate_digits(&y.digits)?;
        let digits = x
            .digits
            .iter()
            .zip(&y.digits)
            .zip(&self.radices)
            .map(|((&a, &b), &m)| (a + b) % m)
            .collect();
        Ok(GroupPoint { digits })
    }

    /// The inverse operation `x ⊖ y`, so that `add(sub(x, y), y) == x`.
    pub fn sub(&self, x: &GroupPoint, y: &GroupPoint) -> Result<GroupPoint> {
        self.validate_digits(&x.digits)?;
        self.validate_digits(&y.digits)?;
        let digits = x
            .digits
            .iter()
            .zip(&y.digits)
            .zip(&self.radices)
            .map(|((&a, &b), &m)| (a + m - b) % m)
            .collect();
        Ok(GroupPoint { digits })
    }

    pub fn neg(&self, x: &GroupPoint) -> Result<GroupPoint> {
        self.sub(&self.zero(), x)
    }

    pub fn point_index(&self, x: &GroupPoint) -> Result<usize> {
        self.from_digits(&x.digits)
    }

    pub fn index_point(&self, index: usize) -> Result<GroupPoint> {
        self.check_index("index", index)?;
        Ok(GroupPoint {
            digits: (0..self.depth()).map(|k| self.digit_of(index, k)).collect(),
        })
    }

    /// Group sum on grid indices. Inputs are assumed to be `< M_N`.
    pub fn add_index(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for k in 0..self.depth() {
            let m = self.radices[k];
            out += ((self.digit_of(a, k) + self.digit_of(b, k)) % m) * self.scale[k];
        }
        out
    }

    /// Group difference `a ⊖ b` on grid indices. Inputs are assumed to be `< M_N`.
    pub fn sub_index(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for k in 0..self.depth() {
            let m = self.radices[k];
            out += ((self.digit_of(a, k) + m - self.digit_of(b, k)) % m) * self.scale[k];
        }
        out
    }

    /// The cylinder `I_n(x)` of points sharing the first `n` digits with `x`.
    pub fn cylinder(&self, x: &GroupPoint, n: usize) -> Result<Cylinder> {
        self.check_rank("n", n)?;
        self.validate_digits(&x.digits)?;
        let base = x.digits[..n]
            .iter()
            .zip(&self.scale)
            .map(|(&d, &s)| d * s)
            .sum();
        Ok(Cylinder {
            base,
            rank: n,
            stride: self.scale[n],
            order: self.order(),
        })
    }

    /// `I_n(x)` given the grid index of `x`.
    pub fn cylinder_at(&self, index: usize, n: usize) -> Result<Cylinder> {
        self.check_rank("n", n)?;
        self.check_index("index", index)?;
        Ok(Cylinder {
            base: index % self.scale[n],
            rank: n,
            stride: self.scale[n],
            order: self.order(),
        })
    }

    /// Grid indices of `I_n(x)`.
    pub fn cylinder_indices(&self, x: &GroupPoint, n: usize) -> Result<Vec<usize>> {
        Ok(self.cylinder(x, n)?.indices().collect())
    }

    /// The digit-sign variation `v(n) = sum_j |δ_{j+1} - δ_j| + δ_0`.
    pub fn variation(&self, n: usize) -> Result<usize> {
        Ok(self.to_digits(n)?.variation())
    }

    /// `v*(n) = sum_j |⊖n_j - 1| δ_j`, evaluated literally.
    pub fn variation_star(&self, n: usize) -> Result<usize> {
        let expansion = self.to_digits(n)?;
        Ok(expansion
            .digits
            .iter()
            .zip(&self.radices)
            .filter(|(&d, _)| d != 0)
            .map(|(&d, &m)| ((m - d) % m).abs_diff(1))
            .sum())
    }

    /// Maximal runs of consecutive nonzero digits of `n`, in increasing position order.
    pub fn nonzero_blocks(&self, n: usize) -> Result<Vec<DigitBlock>> {
        Ok(self.to_digits(n)?.blocks())
    }
}

/// Mixed-radix expansion `n = sum_j n_j M_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitExpansion {
    value: usize,
    digits: Vec<usize>,
}

impl DigitExpansion {
    pub fn value(&self) -> usize {
        self.value
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    /// `|n|`, the position of the leading nonzero digit; `None` for `n = 0`.
    pub fn order(&self) -> Option<usize> {
        self.digits.iter().rposition(|&d| d != 0)
    }

    /// `δ_j = sign(n_j)`.
    pub fn sign(&self, j: usize) -> usize {
        usize::from(self.digits.get(j).is_some_and(|&d| d != 0))
    }

    pub fn variation(&self) -> usize {
        let Some(top) = self.order() else {
            return 0;
        };
        // δ_j vanishes for j > |n|, so the sum stops at j = |n|.
        let jumps: usize = (0..=top)
            .map(|j| self.sign(j + 1).abs_diff(self.sign(j)))
            .sum();
        jumps + self.sign(0)
    }

    /// Positions `j` with `n_j != 0`, in decreasing order, paired with the digit.
    pub fn nonzero_digits_desc(&self) -> Vec<(usize, usize)> {
        self.digits
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &d)| d != 0)
            .map(|(j, &d)| (j, d))
            .collect()
    }

    pub fn blocks(&self) -> Vec<DigitBlock> {
        let mut blocks = Vec::new();
        let mut start = None;
        for (j, &d) in self.digits.iter().enumerate() {
            match (d != 0, start) {
                (true, None) => start = Some(j),
                (false, Some(s)) => {
                    blocks.push(DigitBlock {
                        start: s,
                        end: j - 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            blocks.push(DigitBlock {
                start: s,
                end: self.digits.len() - 1,
            });
        }
        blocks
    }
}

/// A run `l..=m` of nonzero digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DigitBlock {
    pub start: usize,
    pub end: usize,
}

/// A point of the group at finite depth.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupPoint {
    digits: Vec<usize>,
}

impl GroupPoint {
    pub fn digits(&self) -> &[usize] {
        &self.digits
    }
}

/// A cylinder `I_n(x)` viewed through grid indices: `base + t * M_n` for `t < M_N / M_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cylinder {
    base: usize,
    rank: usize,
    stride: usize,
    order: usize,
}

impl Cylinder {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Smallest grid index in the cylinder.
    pub fn base(&self) -> usize {
        self.base
    }

    /// Size `M_N` of the grid the cylinder lives on.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Haar measure `1 / M_n`.
    pub fn measure(&self) -> f64 {
        1.0 / self.stride as f64
    }

    pub fn len(&self) -> usize {
        self.order / self.stride
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.order && index % self.stride == self.base
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (self.base..self.order).step_by(self.stride)
    }
}
