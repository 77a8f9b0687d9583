//! Empirical influence estimation.
//!
//! The discrete influence `I_i(S) = E[X_i | X_S = {+1}^{|S|}]` is estimated
//! by conditioning-by-rejection: keep the sample rows where every coordinate
//! in `S` is `+1` and average column `i`. Rows are packed into per-column
//! bitmasks so one estimate costs `O((|S|+1) · M/64)` word operations; this
//! is the hot loop of the structure learners.
//!
//! Estimates with empty support are surfaced explicitly (`value = None`),
//! never silently zero; the greedy learner skips such candidates.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::exact::{influence_from_distribution, ExactDistribution, InfluenceTable};
use crate::model::{LearnerConfig, Subset};
use crate::sampler::{CountedSamples, SampleSet};

/// An empirical conditional-mean estimate together with the amount of data
/// behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceEstimate {
    /// The conditional mean, in `[-1, 1]`; `None` when no sample row
    /// satisfies the conditioning event.
    pub value: Option<f64>,
    /// Number of rows with `X_S = {+1}^{|S|}`.
    pub support_count: u64,
    /// The queried `(i, S)` pair.
    pub target: (usize, Subset),
}

/// Anything that can answer influence queries: packed samples, histogram
/// counts, or the exact oracle.
pub trait InfluenceSource {
    fn n_vars(&self) -> usize;
    /// `Ĩ_i(S)`, or `None` when the estimate is undefined (empty support).
    fn influence(&self, i: usize, subset: Subset) -> Option<f64>;
}

/// Sample rows packed into one bitmask per variable (bit set = spin `+1`).
pub struct PackedSamples {
    n_vars: usize,
    n_rows: usize,
    /// `columns[i]` holds `ceil(M/64)` words for variable `i`.
    columns: Vec<Vec<u64>>,
}

impl PackedSamples {
    pub fn new(samples: &SampleSet) -> Self {
        let n = samples.n_vars();
        let m = samples.n_rows();
        let words = m.div_ceil(64);
        let mut columns = vec![vec![0u64; words]; n];
        for (r, row) in samples.rows().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                if v > 0 {
                    columns[i][r / 64] |= 1u64 << (r % 64);
                }
            }
        }
        PackedSamples {
            n_vars: n,
            n_rows: m,
            columns,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    /// Conditional mean of column `i` given all coordinates of `subset` are
    /// `+1`, with the support count.
    pub fn estimate(&self, i: usize, subset: Subset) -> Result<InfluenceEstimate> {
        if subset & (1 << i) != 0 {
            return Err(Error::Parameter(format!(
                "influence target {i} must not lie in the conditioning set"
            )));
        }
        if i >= self.n_vars || (subset >> self.n_vars) != 0 {
            return Err(Error::Parameter("influence query out of range".into()));
        }
        let words = self.columns.first().map_or(0, Vec::len);
        let cond: Vec<usize> = (0..self.n_vars)
            .filter(|&j| subset & (1 << j) != 0)
            .collect();
        let mut support = 0u64;
        let mut plus = 0u64;
        for w in 0..words {
            let mut mask = !0u64;
            if w == words - 1 && !self.n_rows.is_multiple_of(64) {
                mask = (1u64 << (self.n_rows % 64)) - 1;
            }
            for &j in &cond {
                mask &= self.columns[j][w];
            }
            support += mask.count_ones() as u64;
            plus += (mask & self.columns[i][w]).count_ones() as u64;
        }
        let value = if support == 0 {
            None
        } else {
            Some((2.0 * plus as f64 - support as f64) / support as f64)
        };
        Ok(InfluenceEstimate {
            value,
            support_count: support,
            target: (i, subset),
        })
    }
}

impl InfluenceSource for PackedSamples {
    fn n_vars(&self) -> usize {
        self.n_vars
    }

    fn influence(&self, i: usize, subset: Subset) -> Option<f64> {
        self.estimate(i, subset).ok().and_then(|e| e.value)
    }
}

/// Empirical influence from a sample set. For repeated queries build a
/// [`PackedSamples`] once instead.
pub fn empirical_influence(
    samples: &SampleSet,
    i: usize,
    subset: Subset,
) -> Result<InfluenceEstimate> {
    PackedSamples::new(samples).estimate(i, subset)
}

impl CountedSamples {
    /// Influence estimate from histogram counts.
    pub fn estimate(&self, i: usize, subset: Subset) -> Result<InfluenceEstimate> {
        if subset & (1 << i) != 0 {
            return Err(Error::Parameter(format!(
                "influence target {i} must not lie in the conditioning set"
            )));
        }
        let s = subset as usize;
        let bit = 1usize << i;
        let mut support = 0u64;
        let mut plus = 0u64;
        for (mask, &c) in self.counts.iter().enumerate() {
            if mask & s == s {
                support += c;
                if mask & bit != 0 {
                    plus += c;
                }
            }
        }
        let value = if support == 0 {
            None
        } else {
            Some((2.0 * plus as f64 - support as f64) / support as f64)
        };
        Ok(InfluenceEstimate {
            value,
            support_count: support,
            target: (i, subset),
        })
    }
}

impl InfluenceSource for CountedSamples {
    fn n_vars(&self) -> usize {
        self.n_vars
    }

    fn influence(&self, i: usize, subset: Subset) -> Option<f64> {
        self.estimate(i, subset).ok().and_then(|e| e.value)
    }
}

/// The exact oracle as an influence source: influences are computed from an
/// enumerated distribution (typically an observed marginal), so they carry
/// no sampling error.
pub struct ExactInfluence<'a> {
    dist: &'a ExactDistribution,
}

impl<'a> ExactInfluence<'a> {
    pub fn new(dist: &'a ExactDistribution) -> Self {
        ExactInfluence { dist }
    }
}

impl InfluenceSource for ExactInfluence<'_> {
    fn n_vars(&self) -> usize {
        self.dist.n_vars()
    }

    fn influence(&self, i: usize, subset: Subset) -> Option<f64> {
        influence_from_distribution(self.dist, i, subset).ok()
    }
}

/// Wraps a source with seeded set-dependent uniform noise in
/// `[-magnitude, magnitude]`; the same `(i, S)` query always returns the
/// same perturbed value.
pub struct NoisyInfluence<S> {
    pub inner: S,
    pub magnitude: f64,
    pub seed: u64,
}

impl<S: InfluenceSource> InfluenceSource for NoisyInfluence<S> {
    fn n_vars(&self) -> usize {
        self.inner.n_vars()
    }

    fn influence(&self, i: usize, subset: Subset) -> Option<f64> {
        let v = self.inner.influence(i, subset)?;
        let key = self
            .seed
            .wrapping_mul(0x9e3779b97f4a7c15)
            .wrapping_add(((i as u64) << 32) ^ subset as u64);
        let mut rng = ChaCha12Rng::seed_from_u64(key);
        let noise = (rng.random::<f64>() * 2.0 - 1.0) * self.magnitude;
        Some(v + noise)
    }
}

/// Samples sufficient to estimate every influence `Ĩ_i(S)` with `|S| <= k`
/// within `epsilon`, simultaneously, with probability `1 - delta`:
/// `⌈2^{2k+1} ε⁻² (log n + k log(en/k)) log(4/δ)⌉`.
pub fn required_samples(config: &LearnerConfig, n: usize) -> Result<u64> {
    sample_bound(config.k, config.epsilon, config.delta, n)
}

pub(crate) fn sample_bound(k: usize, epsilon: f64, delta: f64, n: usize) -> Result<u64> {
    if !(epsilon > 0.0) {
        return Err(Error::Parameter(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(delta > 0.0) {
        return Err(Error::Parameter(format!("delta must be positive, got {delta}")));
    }
    if n == 0 {
        return Err(Error::Parameter("n must be positive".into()));
    }
    let n_f = n as f64;
    let k_f = k as f64;
    let union_term = if k == 0 {
        n_f.ln()
    } else {
        n_f.ln() + k_f * (std::f64::consts::E * n_f / k_f).ln()
    };
    let m = 2f64.powi(2 * k as i32 + 1) * epsilon.powi(-2) * union_term * (4.0 / delta).ln();
    if !m.is_finite() || m > 9.0e18 {
        return Err(Error::Parameter(format!(
            "prescribed sample count {m:.3e} does not fit a u64; loosen epsilon/k"
        )));
    }
    Ok(m.ceil() as u64)
}

/// Exhaustive monotonicity and diminishing-returns audit of the exact
/// influence of node `i` over every `(S ⊆ T, j ∉ T)` in the given observed
/// universe.
#[derive(Debug, Clone)]
pub struct SubmodularityReport {
    pub node: usize,
    pub universe: Vec<usize>,
    /// Max of `I(S) - I(S ∪ {j})` over all checks (0 when monotone).
    pub max_monotonicity_violation: f64,
    /// Max of `(I(T ∪ {j}) - I(T)) - (I(S ∪ {j}) - I(S))` over nested
    /// `S ⊆ T` (0 when submodular).
    pub max_submodularity_violation: f64,
    pub checks: u64,
}

impl SubmodularityReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_monotonicity_violation <= tol && self.max_submodularity_violation <= tol
    }
}

/// Certify monotone submodularity of the exact influence of observed node
/// `i` over a precomputed table. Refuses models that are not ferromagnetic,
/// where the property may genuinely fail.
pub fn certify_submodularity_from_table(
    table: &InfluenceTable,
    node: usize,
) -> SubmodularityReport {
    let u = table.universe.len();
    let mut mono: f64 = 0.0;
    let mut sub: f64 = 0.0;
    let mut checks = 0u64;
    let full = (1usize << u) - 1;
    for t in 0..=full {
        // S runs over submasks of T.
        let mut s = t;
        loop {
            for jpos in 0..u {
                let jbit = 1usize << jpos;
                if t & jbit != 0 {
                    continue;
                }
                let delta_t = table.values[t | jbit] - table.values[t];
                let delta_s = table.values[s | jbit] - table.values[s];
                mono = mono.max(-delta_s);
                sub = sub.max(delta_t - delta_s);
                checks += 1;
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & t;
        }
    }
    SubmodularityReport {
        node,
        universe: table.universe.clone(),
        max_monotonicity_violation: mono,
        max_submodularity_violation: sub,
        checks,
    }
}

/// Build the influence table for `i` over all other observed nodes of the
/// model and audit it exhaustively.
pub fn certify_submodularity(
    model: &crate::model::IsingModel,
    i: usize,
) -> Result<SubmodularityReport> {
    if !model.is_ferromagnetic() {
        return Err(Error::Assumption(
            "submodularity is only guaranteed for ferromagnetic models".into(),
        ));
    }
    if model.is_hidden(i) {
        return Err(Error::Parameter(format!("node {i} is latent")));
    }
    let dist = crate::exact::enumerate(model)?;
    let universe: Vec<usize> = model.observed_nodes().into_iter().filter(|&j| j != i).collect();
    let table = crate::exact::influence_table(&dist, i, &universe)?;
    Ok(certify_submodularity_from_table(&table, i))
}
