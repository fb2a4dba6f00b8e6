//! Executable checks of the Dirichlet/Fejér kernel identities and lower bounds.
//!
//! Identity checks materialize both sides as step functions and report the
//! largest pointwise deviation. Inequality checks report the smallest margin over
//! every depth-`N` cell of the region in question; since kernels are constant on
//! those cells, one representative per cell makes the check exhaustive.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::funcspace::GridFunction;
use crate::group::{DigitBlock, GeneratorSequence};
use crate::numeric::format_f64;
use crate::vilenkin::VilenkinSystem;

/// Tolerance for identity deviations at desk-scale depths.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

/// The constant pinned for the `n |K_n| >= c M_l²` block bound.
pub const BLOCK_BOUND_CONSTANT: f64 = 1.0 / 144.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measure {
    /// Largest pointwise deviation between two sides of an identity.
    Deviation(f64),
    /// Smallest slack of an inequality; nonnegative when it holds.
    Margin(f64),
    /// The hypothesis of the check is vacuous for these parameters.
    NotApplicable,
}

impl Measure {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Measure::Deviation(v) | Measure::Margin(v) => Some(v),
            Measure::NotApplicable => None,
        }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub measure: Measure,
    pub tolerance: f64,
    pub passed: bool,
    /// Number of cells or points the check inspected.
    pub cells: usize,
}

impl CheckReport {
    pub(crate) fn new(
        name: &str,
        params: Vec<(&str, String)>,
        measure: Measure,
        tolerance: f64,
    ) -> Self {
        let passed = match measure {
            Measure::Deviation(d) => d <= tolerance,
            Measure::Margin(m) => m >= 0.0,
            Measure::NotApplicable => true,
        };
        Self {
            name: name.to_string(),
            params: params
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            measure,
            tolerance,
            passed,
            cells: 0,
        }
    }

    fn with_cells(mut self, cells: usize) -> Self {
        self.cells = cells;
        self
    }

    pub fn is_applicable(&self) -> bool {
        self.measure != Measure::NotApplicable
    }

    /// `k=v;k=v` parameter rendering used in CSV output.
    pub fn params_string(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub const CSV_HEADER: &'static str = "name,params,deviation_or_margin,tolerance,passed";

    pub fn csv_row(&self) -> String {
        let value = match self.measure.value() {
            Some(v) => format_f64(v),
            None => "not_applicable".to_string(),
        };
        format!(
            "{},{},{},{},{}",
            self.name,
            self.params_string(),
            value,
            format_f64(self.tolerance),
            self.passed
        )
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "ok" } else { "FAILED" };
        match self.measure {
            Measure::Deviation(d) => write!(
                f,
                "{} [{}] deviation {d:.3e} (tol {:.1e}) {status}",
                self.name,
                self.params_string(),
                self.tolerance
            ),
            Measure::Margin(m) => write!(
                f,
                "{} [{}] margin {m:.6e} over {} cells {status}",
                self.name,
                self.params_string(),
                self.cells
            ),
            Measure::NotApplicable => {
                write!(f, "{} [{}] not applicable", self.name, self.params_string())
            }
        }
    }
}

/// Kernel identity and inequality checks on one generator sequence.
#[derive(Debug, Clone)]
pub struct IdentityChecker {
    system: VilenkinSystem,
    tolerance: f64,
}

impl IdentityChecker {
    pub fn new(generator: GeneratorSequence) -> Self {
        Self {
            system: VilenkinSystem::new(generator),
            tolerance: IDENTITY_TOLERANCE,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn system(&self) -> &VilenkinSystem {
        &self.system
    }

    fn generator(&self) -> &GeneratorSequence {
        self.system.generator()
    }

    fn depth(&self) -> usize {
        self.generator().depth()
    }

    fn need_depth(&self, need: usize) -> Result<()> {
        if self.depth() < need {
            return Err(Error::InsufficientDepth {
                need,
                have: self.depth(),
            });
        }
        Ok(())
    }

    fn check_digit(&self, n: usize, s: usize) -> Result<()> {
        let m = self.generator().radix(n);
        if s == 0 || s >= m {
            return Err(Error::OutOfRange {
                what: "s",
                value: s as u64,
                bound: format!("in [1, {}]", m - 1),
            });
        }
        Ok(())
    }

    /// `r_n^0 + .. + r_n^{count-1}` as a step function.
    fn rademacher_power_sum(&self, n: usize, count: usize) -> Result<GridFunction> {
        let r = self.system.rademacher(n)?;
        Ok(r.map(|v| (0..count).map(|t| v.powu(t as u32)).sum()))
    }

    /// `D_{M_n} = M_n 1_{I_n}`.
    pub fn check_dirichlet_scale(&self, n: usize) -> Result<CheckReport> {
        self.need_depth(n)?;
        let g = self.generator();
        let m_n = g.scale(n);
        let lhs = self.system.dirichlet(m_n)?;
        let cylinder = g.cylinder(&g.zero(), n)?;
        let rhs = GridFunction::indicator(g.clone(), &cylinder, m_n as f64);
        let dev = lhs.max_abs_diff(&rhs)?;
        Ok(CheckReport::new(
            "dirichlet_scale",
            vec![("n", n.to_string())],
            Measure::Deviation(dev),
            self.tolerance,
        ))
    }

    /// `D_{s M_n} = D_{M_n} Σ_{k<s} r_n^k` for `1 <= s < m_n`.
    pub fn check_dirichlet_multiple(&self, n: usize, s: usize) -> Result<CheckReport> {
        self.need_depth(n + 1)?;
        self.check_digit(n, s)?;
        let m_n = self.generator().scale(n);
        let lhs = self.system.dirichlet(s * m_n)?;
        let rhs = self
            .system
            .dirichlet(m_n)?
            .mul(&self.rademacher_power_sum(n, s)?)?;
        Ok(CheckReport::new(
            "dirichlet_multiple",
            vec![("n", n.to_string()), ("s", s.to_string())],
            Measure::Deviation(lhs.max_abs_diff(&rhs)?),
            self.tolerance,
        ))
    }

    /// `D_{j + M_α} = D_{M_α} + ψ_{M_α} D_j` for `j <= M_α`.
    pub fn check_shift(&self, alpha: usize, j: usize) -> Result<CheckReport> {
        self.need_depth(alpha + 1)?;
        let m_alpha = self.generator().scale(alpha);
        if j > m_alpha || j + m_alpha > self.generator().order() {
            return Err(Error::OutOfRange {
                what: "j",
                value: j as u64,
                bound: format!("<= {m_alpha}"),
            });
        }
        let lhs = self.system.dirichlet(j + m_alpha)?;
        let mut rhs = self.system.dirichlet(m_alpha)?;
        if j > 0 {
            let shifted = self
                .system
                .character(m_alpha)?
                .mul(&self.system.dirichlet(j)?)?;
            rhs = rhs.add(&shifted)?;
        }
        Ok(CheckReport::new(
            "shift",
            vec![("alpha", alpha.to_string()), ("j", j.to_string())],
            Measure::Deviation(lhs.max_abs_diff(&rhs)?),
            self.tolerance,
        ))
    }

    /// `s M_n K_{s M_n} = Σ_{l<s} (Σ_{t<l} r_n^t) M_n D_{M_n} + (Σ_{l<s} r_n^l) M_n K_{M_n}`.
    pub fn check_lemma3_decomposition(&self, n: usize, s: usize) -> Result<CheckReport> {
        self.need_depth(n + 1)?;
        self.check_digit(n, s)?;
        let m_n = self.generator().scale(n);
        let lhs = self.system.scaled_fejer_kernel(s * m_n)?;
        let mut coefficient = GridFunction::zero(self.generator().clone());
        for l in 0..s {
            coefficient = coefficient.add(&self.rademacher_power_sum(n, l)?)?;
        }
        let first = coefficient.mul(&self.system.dirichlet(m_n)?.scale_real(m_n as f64))?;
        let second = self
            .rademacher_power_sum(n, s)?
            .mul(&self.system.scaled_fejer_kernel(m_n)?)?;
        let rhs = first.add(&second)?;
        Ok(CheckReport::new(
            "lemma3_decomposition",
            vec![("n", n.to_string()), ("s", s.to_string())],
            Measure::Deviation(lhs.max_abs_diff(&rhs)?),
            self.tolerance,
        ))
    }

    /// Grid indices of `I_{l+1}(e_{l-1} + e_l)`: digits `0..l-2` zero, `x_{l-1} = x_l = 1`.
    fn corner_cells(&self, l: usize) -> Result<Vec<usize>> {
        let g = self.generator();
        let mut digits = vec![0; g.depth()];
        digits[l - 1] = 1;
        digits[l] = 1;
        let point = g.point(digits)?;
        g.cylinder_indices(&point, l + 1)
    }

    /// `|s M_n K_{s M_n}(x)| >= M_n² / (2π)` on `I_{n+1}(e_{n-1} + e_n)`.
    pub fn check_lemma3_lowerbound(&self, n: usize, s: usize) -> Result<CheckReport> {
        if n == 0 {
            return Err(Error::OutOfRange {
                what: "n",
                value: 0,
                bound: ">= 1".into(),
            });
        }
        self.need_depth(n + 1)?;
        self.check_digit(n, s)?;
        let m_n = self.generator().scale(n) as f64;
        let kernel = self
            .system
            .scaled_fejer_kernel(s * self.generator().scale(n))?;
        let cells = self.corner_cells(n)?;
        let bound = m_n * m_n / (2.0 * PI);
        let margin = cells
            .iter()
            .map(|&x| kernel.value(x).norm() - bound)
            .fold(f64::INFINITY, f64::min);
        Ok(CheckReport::new(
            "lemma3_lowerbound",
            vec![("n", n.to_string()), ("s", s.to_string())],
            Measure::Margin(margin),
            self.tolerance,
        )
        .with_cells(cells.len()))
    }

    /// `K_{s M_n}(x) = 0` for `x ∈ I_t \ I_{t+1}` with `x ⊖ x_t e_t ∉ I_n`, `t < n`.
    pub fn check_lemma3_vanishing(&self, n: usize, s: usize, t: usize) -> Result<CheckReport> {
        self.need_depth(n + 1)?;
        self.check_digit(n, s)?;
        if t >= n {
            return Err(Error::OutOfRange {
                what: "t",
                value: t as u64,
                bound: format!("< {n}"),
            });
        }
        let g = self.generator();
        let kernel = self.system.fejer_kernel(s * g.scale(n))?;
        let qualifying: Vec<usize> = (0..g.order())
            .filter(|&x| {
                let in_ring = (0..t).all(|k| g.digit_of(x, k) == 0) && g.digit_of(x, t) != 0;
                // x ⊖ x_t e_t has zero digits 0..=t, so it lies outside I_n iff some
                // digit in t+1..n is nonzero.
                let outside = (t + 1..n).any(|k| g.digit_of(x, k) != 0);
                in_ring && outside
            })
            .collect();
        let params = vec![
            ("n", n.to_string()),
            ("s", s.to_string()),
            ("t", t.to_string()),
        ];
        if qualifying.is_empty() {
            return Ok(CheckReport::new(
                "lemma3_vanishing",
                params,
                Measure::NotApplicable,
                self.tolerance,
            ));
        }
        let dev = qualifying
            .iter()
            .map(|&x| kernel.value(x).norm())
            .fold(0.0, f64::max);
        Ok(CheckReport::new(
            "lemma3_vanishing",
            params,
            Measure::Deviation(dev),
            self.tolerance,
        )
        .with_cells(qualifying.len()))
    }

    /// Product `Π r_{n_j}^{s_j}` over the given (position, digit) pairs.
    fn rademacher_product(&self, terms: &[(usize, usize)]) -> Result<GridFunction> {
        let g = self.generator();
        Ok(GridFunction::from_fn(g.clone(), |x| {
            terms
                .iter()
                .map(|&(pos, s)| crate::numeric::unit_root(g.digit_of(x, pos) * s, g.radix(pos)))
                .product()
        }))
    }

    /// Expands `n K_n` over the nonzero digits of `n`, taken in decreasing position order.
    pub fn lemma4_expansion(&self, n: usize) -> Result<GridFunction> {
        let g = self.generator();
        let expansion = g.to_digits(n)?;
        let digits = expansion.nonzero_digits_desc();
        let mut acc = GridFunction::zero(g.clone());
        let mut consumed = 0usize;
        for (k, &(pos, s)) in digits.iter().enumerate() {
            let block = s * g.scale(pos);
            consumed += block;
            let phase = self.rademacher_product(&digits[..k])?;
            let term = phase.mul(&self.system.scaled_fejer_kernel(block)?)?;
            acc = acc.add(&term)?;
            if k + 1 < digits.len() {
                let tail = (n - consumed) as f64;
                let term = phase.mul(&self.system.dirichlet(block)?.scale_real(tail))?;
                acc = acc.add(&term)?;
            }
        }
        Ok(acc)
    }

    /// Block decomposition of `n K_n` against the direct kernel.
    pub fn check_lemma4(&self, n: usize) -> Result<CheckReport> {
        let g = self.generator();
        if n == 0 || n >= g.order() {
            return Err(Error::OutOfRange {
                what: "n",
                value: n as u64,
                bound: format!("in [1, {})", g.order()),
            });
        }
        let lhs = self.system.scaled_fejer_kernel(n)?;
        let rhs = self.lemma4_expansion(n)?;
        Ok(CheckReport::new(
            "lemma4",
            vec![("n", n.to_string())],
            Measure::Deviation(lhs.max_abs_diff(&rhs)?),
            self.tolerance,
        ))
    }

    /// Tail `n^{(k)} = n - Σ_{i<=k} s_i M_{n_i}` is at most `M_{n_k}`.
    pub fn check_tail_bound(&self, n: usize, k: usize) -> Result<CheckReport> {
        let g = self.generator();
        let digits = g.to_digits(n)?.nonzero_digits_desc();
        if k == 0 || k > digits.len() {
            return Err(Error::OutOfRange {
                what: "k",
                value: k as u64,
                bound: format!("in [1, {}]", digits.len()),
            });
        }
        let consumed: usize = digits[..k].iter().map(|&(pos, s)| s * g.scale(pos)).sum();
        let tail = n - consumed;
        let cap = g.scale(digits[k - 1].0);
        Ok(CheckReport::new(
            "tail_bound",
            vec![("n", n.to_string()), ("k", k.to_string())],
            Measure::Margin(cap as f64 - tail as f64),
            0.0,
        )
        .with_cells(1))
    }

    /// `n |K_n(x)| >= M_{l_i}² / 144` on `I_{l_i+1}(e_{l_i-1} + e_{l_i})` for every block with `l_i >= 4`.
    ///
    /// `digits` lists the digits inside the blocks in increasing position order.
    pub fn check_lemma5(&self, blocks: &[DigitBlock], digits: &[usize]) -> Result<CheckReport> {
        let n = self.admissible_number(blocks, digits)?;
        let spans = blocks
            .iter()
            .map(|b| format!("{}-{}", b.start, b.end))
            .collect::<Vec<_>>()
            .join("|");
        let params = vec![("n", n.to_string()), ("blocks", spans)];
        let targets: Vec<usize> = blocks.iter().map(|b| b.start).filter(|&l| l >= 4).collect();
        if targets.is_empty() {
            return Ok(CheckReport::new(
                "lemma5",
                params,
                Measure::NotApplicable,
                self.tolerance,
            ));
        }
        let kernel = self.system.scaled_fejer_kernel(n)?;
        let g = self.generator();
        let mut margin = f64::INFINITY;
        let mut count = 0;
        for l in targets {
            let m_l = g.scale(l) as f64;
            let bound = BLOCK_BOUND_CONSTANT * m_l * m_l;
            for x in self.corner_cells(l)? {
                margin = margin.min(kernel.value(x).norm() - bound);
                count += 1;
            }
        }
        Ok(
            CheckReport::new("lemma5", params, Measure::Margin(margin), self.tolerance)
                .with_cells(count),
        )
    }

    /// Builds `n = Σ_blocks Σ_{k=l}^{m} n_k M_k` after validating block separation and digits.
    pub fn admissible_number(&self, blocks: &[DigitBlock], digits: &[usize]) -> Result<usize> {
        let g = self.generator();
        let mut n = 0usize;
        let mut cursor = digits.iter();
        for (i, block) in blocks.iter().enumerate() {
            if block.start > block.end {
                return Err(Error::InvalidRanks(format!("empty block {block:?}")));
            }
            if let Some(prev) = i.checked_sub(1).map(|j| blocks[j]) {
                if block.start < prev.end + 2 {
                    return Err(Error::InvalidRanks(format!(
                        "blocks {prev:?} and {block:?} are not separated by a zero digit"
                    )));
                }
            }
            // the corner cell I_{m+1} and the kernel index both need depth m + 2
            self.need_depth(block.end + 2)?;
            for pos in block.start..=block.end {
                let d = *cursor
                    .next()
                    .ok_or_else(|| Error::InvalidRanks("too few digits for blocks".into()))?;
                if d == 0 || d >= g.radix(pos) {
                    return Err(Error::InvalidDigit {
                        position: pos,
                        digit: d,
                        radix: g.radix(pos),
                    });
                }
                n += d * g.scale(pos);
            }
        }
        if cursor.next().is_some() {
            return Err(Error::InvalidRanks(
                "more digits than block positions".into(),
            ));
        }
        Ok(n)
    }

    /// Random admissible block pattern with at least one block starting at or above 4.
    ///
    /// Returns `None` when the depth cannot host such a block.
    pub fn random_block_pattern(
        &self,
        rng: &mut impl Rng,
    ) -> Option<(Vec<DigitBlock>, Vec<usize>)> {
        let g = self.generator();
        let depth = g.depth();
        // the highest block end must leave room for depth end + 2
        if depth < 6 {
            return None;
        }
        let top = depth - 2;
        loop {
            let mut blocks = Vec::new();
            let mut pos = rng.gen_range(0..=2usize);
            while pos <= top {
                let len = rng.gen_range(1..=3usize);
                let end = (pos + len - 1).min(top);
                blocks.push(DigitBlock { start: pos, end });
                pos = end + rng.gen_range(2..=3usize);
            }
            if blocks.iter().any(|b| b.start >= 4) {
                let digits = blocks
                    .iter()
                    .flat_map(|b| b.start..=b.end)
                    .map(|k| rng.gen_range(1..g.radix(k)))
                    .collect();
                return Some((blocks, digits));
            }
        }
    }

    /// Kernel identities: scale/multiple Dirichlet forms, the Dirichlet-difference
    /// decomposition, the Fejér expansion for every `n < M_{min(4, N)}`, and the shift identity.
    pub fn identity_sweep(&self) -> Result<Vec<CheckReport>> {
        let g = self.generator();
        let depth = g.depth();
        let mut tasks: Vec<Task> = Vec::new();
        for n in 0..=depth {
            tasks.push(Task::DirichletScale(n));
        }
        for n in 0..depth {
            for s in 1..g.radix(n) {
                tasks.push(Task::DirichletMultiple(n, s));
                tasks.push(Task::Lemma3Decomposition(n, s));
            }
        }
        for n in 1..g.scale(depth.min(4)).min(g.order()) {
            tasks.push(Task::Lemma4(n));
        }
        for alpha in 0..depth {
            for j in 0..=g.scale(alpha) {
                if j + g.scale(alpha) <= g.order() {
                    tasks.push(Task::Shift(alpha, j));
                }
            }
        }
        self.run(&tasks)
    }

    /// Dirichlet-difference lower bound and vanishing for `1 <= n <= max_n`, all digits `s`.
    pub fn inequality_sweep(&self, max_n: usize) -> Result<Vec<CheckReport>> {
        let g = self.generator();
        let mut tasks = Vec::new();
        let top = max_n.min(g.depth().saturating_sub(1));
        for n in 1..=top {
            for s in 1..g.radix(n) {
                tasks.push(Task::Lemma3Lower(n, s));
                for t in 0..n {
                    tasks.push(Task::Lemma3Vanishing(n, s, t));
                }
            }
        }
        self.run(&tasks)
    }

    /// Tail bounds for every `n < M_{min(5, N)}` and every prefix length `k`.
    pub fn tail_sweep(&self) -> Result<Vec<CheckReport>> {
        let g = self.generator();
        let limit = g.scale(g.depth().min(5));
        let mut tasks = Vec::new();
        for n in 1..limit {
            let r = g.to_digits(n)?.nonzero_digits_desc().len();
            for k in 1..=r {
                tasks.push(Task::Tail(n, k));
            }
        }
        self.run(&tasks)
    }

    /// `count` random admissible block patterns; a single "not applicable" row when
    /// the depth is too shallow.
    pub fn lemma5_sweep(&self, count: usize, rng: &mut impl Rng) -> Result<Vec<CheckReport>> {
        let mut patterns = Vec::with_capacity(count);
        for _ in 0..count {
            match self.random_block_pattern(rng) {
                Some(p) => patterns.push(p),
                None => {
                    return Ok(vec![CheckReport::new(
                        "lemma5",
                        vec![("depth", self.depth().to_string())],
                        Measure::NotApplicable,
                        self.tolerance,
                    )])
                }
            }
        }
        patterns
            .par_iter()
            .map(|(blocks, digits)| self.check_lemma5(blocks, digits))
            .collect()
    }

    fn run(&self, tasks: &[Task]) -> Result<Vec<CheckReport>> {
        tasks.par_iter().map(|t| t.run(self)).collect()
    }
}

#[derive(Debug, Clone, Copy)]
enum Task {
    DirichletScale(usize),
    DirichletMultiple(usize, usize),
    Lemma3Decomposition(usize, usize),
    Lemma3Lower(usize, usize),
    Lemma3Vanishing(usize, usize, usize),
    Lemma4(usize),
    Shift(usize, usize),
    Tail(usize, usize),
}

impl Task {
    fn run(self, checker: &IdentityChecker) -> Result<CheckReport> {
        match self {
            Task::DirichletScale(n) => checker.check_dirichlet_scale(n),
            Task::DirichletMultiple(n, s) => checker.check_dirichlet_multiple(n, s),
            Task::Lemma3Decomposition(n, s) => checker.check_lemma3_decomposition(n, s),
            Task::Lemma3Lower(n, s) => checker.check_lemma3_lowerbound(n, s),
            Task::Lemma3Vanishing(n, s, t) => checker.check_lemma3_vanishing(n, s, t),
            Task::Lemma4(n) => checker.check_lemma4(n),
            Task::Shift(a, j) => checker.check_shift(a, j),
            Task::Tail(n, k) => checker.check_tail_bound(n, k),
        }
    }
}
