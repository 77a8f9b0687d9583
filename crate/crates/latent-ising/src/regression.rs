//! Recovering the induced MRF potential by per-node tanh-link regression.
//!
//! Once a node's blanket is known, `E[X_i | X_{≠i}] = tanh(∂_i p*(X))` where
//! `∂_i p*` is supported on subsets of the blanket. Each node is therefore a
//! low-dimensional calibrated regression: predict `X_i` from the `2^{|N(i)|}`
//! monomials of its neighborhood with a tanh link. The fitter is the
//! projected mean-update iteration with hold-out selection; identical rows
//! are collapsed into weighted cells first, so an iteration costs
//! `O(2^{|N(i)|+1})` regardless of the sample count, and the same core run
//! on exact configuration probabilities gives the population fit.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::exact::ExactDistribution;
use crate::model::{MrfPotential, Subset};
use crate::sampler::{CountedSamples, SampleSet};
use crate::structure::sigma;

/// Default iteration cap for sampled fits.
pub const DEFAULT_MAX_ITERS: usize = 500;
/// Hold-out fraction used by the pipeline.
pub const DEFAULT_HOLDOUT_FRACTION: f64 = 0.2;
/// Stop after this many non-improving hold-out evaluations.
pub const PATIENCE: usize = 25;
/// Minimum rows per split.
pub const MIN_SPLIT_ROWS: usize = 10;

/// Coefficient map of a polynomial on `{±1}` variables, empty set allowed
/// (used for `∂_i p`, which has a genuine constant part).
pub type CoefficientMap = BTreeMap<Subset, f64>;

/// The discrete partial `∂_i p = Σ_{S ∋ i} p̂(S) χ_{S\{i}}`: a polynomial
/// not involving `x_i`, returned as a coefficient map keyed by `S \ {i}`
/// (key 0 is the constant term).
pub fn discrete_partial(p: &MrfPotential, i: usize) -> CoefficientMap {
    let bit = 1u32 << i;
    let mut out = CoefficientMap::new();
    for (s, c) in p.terms() {
        if s & bit != 0 {
            out.insert(s & !bit, c);
        }
    }
    out
}

/// Evaluate a coefficient map at a configuration (bit set = spin `+1`).
pub fn evaluate_coefficients(coeffs: &CoefficientMap, config: Subset) -> f64 {
    let mut total = 0.0;
    for (&s, &c) in coeffs {
        if (s & !config).count_ones().is_multiple_of(2) {
            total += c;
        } else {
            total -= c;
        }
    }
    total
}

/// Max absolute coefficient difference between two maps.
pub fn coefficient_linf(a: &CoefficientMap, b: &CoefficientMap) -> f64 {
    let mut d: f64 = 0.0;
    for (&s, &c) in a {
        d = d.max((c - b.get(&s).copied().unwrap_or(0.0)).abs());
    }
    for (&s, &c) in b {
        d = d.max((c - a.get(&s).copied().unwrap_or(0.0)).abs());
    }
    d
}

/// All subsets of `d` local positions in size-then-lexicographic order.
fn subsets_by_size(d: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(1 << d);
    out.push(0);
    for size in 1..=d {
        let mut indices: Vec<usize> = (0..size).collect();
        loop {
            let mut mask = 0u32;
            for &idx in &indices {
                mask |= 1 << idx;
            }
            out.push(mask);
            let mut pos = size;
            loop {
                if pos == 0 {
                    indices.clear();
                    break;
                }
                pos -= 1;
                if indices[pos] != pos + d - size {
                    indices[pos] += 1;
                    for t in pos + 1..size {
                        indices[t] = indices[t - 1] + 1;
                    }
                    break;
                }
            }
            if indices.is_empty() {
                break;
            }
        }
    }
    out
}

/// A per-node regression problem: predict `X_target` from the monomials of
/// its neighborhood.
#[derive(Debug, Clone)]
pub struct RegressionProblem {
    pub target: usize,
    /// Neighborhood variables, ascending.
    pub neighborhood: Vec<usize>,
    /// Feature subsets as global variable masks (the empty set first, then
    /// by size and lexicographic order).
    pub features: Vec<Subset>,
    /// One entry per row: the row restricted to the neighborhood (local
    /// bitmask) and the ±1 label.
    rows: Vec<(u32, i8)>,
}

impl RegressionProblem {
    pub fn from_samples(
        samples: &SampleSet,
        target: usize,
        neighborhood: &[usize],
    ) -> Result<Self> {
        let mut nbhd = neighborhood.to_vec();
        nbhd.sort_unstable();
        nbhd.dedup();
        if nbhd.contains(&target) {
            return Err(Error::Parameter(
                "neighborhood must not contain the target".into(),
            ));
        }
        if nbhd.iter().any(|&j| j >= samples.n_vars()) || target >= samples.n_vars() {
            return Err(Error::Parameter("regression variable out of range".into()));
        }
        let rows = samples
            .rows()
            .map(|row| {
                let mut pattern = 0u32;
                for (pos, &j) in nbhd.iter().enumerate() {
                    if row[j] > 0 {
                        pattern |= 1 << pos;
                    }
                }
                (pattern, row[target])
            })
            .collect();
        let features = local_to_global_features(&nbhd);
        Ok(RegressionProblem {
            target,
            neighborhood: nbhd,
            features,
            rows,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// The design entry for row `r` and feature `f`, always ±1.
    pub fn design_entry(&self, r: usize, f: usize) -> i8 {
        let local = global_to_local(self.features[f], &self.neighborhood);
        if ((local & !self.rows[r].0) & local).count_ones().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn label(&self, r: usize) -> i8 {
        self.rows[r].1
    }
}

fn local_to_global_features(nbhd: &[usize]) -> Vec<Subset> {
    subsets_by_size(nbhd.len())
        .into_iter()
        .map(|local| {
            let mut global = 0u32;
            for (pos, &j) in nbhd.iter().enumerate() {
                if local & (1 << pos) != 0 {
                    global |= 1 << j;
                }
            }
            global
        })
        .collect()
}

fn global_to_local(global: Subset, nbhd: &[usize]) -> u32 {
    let mut local = 0u32;
    for (pos, &j) in nbhd.iter().enumerate() {
        if global & (1 << j) != 0 {
            local |= 1 << pos;
        }
    }
    local
}

/// One node's fitted local polynomial and its hold-out risk.
#[derive(Debug, Clone)]
pub struct FittedLocalPotential {
    pub node: usize,
    /// Coefficients keyed by global variable subsets (0 = intercept); the
    /// L2 norm never exceeds the radius passed to the fitter.
    pub coefficients: CoefficientMap,
    pub holdout_risk: f64,
    /// Iterations actually run.
    pub iterations: usize,
}

/// Weighted (pattern, label) cells: the sufficient statistics of the fit.
struct Cells {
    /// Parity signs per cell and feature.
    signs: Vec<Vec<i8>>,
    labels: Vec<f64>,
    weights: Vec<f64>,
    total: f64,
}

impl Cells {
    fn build(rows: impl Iterator<Item = (u32, f64, f64)>, d: usize) -> Cells {
        // Key: pattern * 2 + (label > 0).
        let mut weight_by_key: BTreeMap<u32, f64> = BTreeMap::new();
        for (pattern, label, w) in rows {
            let key = pattern * 2 + if label > 0.0 { 1 } else { 0 };
            *weight_by_key.entry(key).or_insert(0.0) += w;
        }
        let locals = subsets_by_size(d);
        let mut signs = Vec::with_capacity(weight_by_key.len());
        let mut labels = Vec::with_capacity(weight_by_key.len());
        let mut weights = Vec::with_capacity(weight_by_key.len());
        let mut total = 0.0;
        for (&key, &w) in &weight_by_key {
            if w == 0.0 {
                continue;
            }
            let pattern = key / 2;
            let row_signs: Vec<i8> = locals
                .iter()
                .map(|&s| {
                    if (s & !pattern).count_ones() % 2 == 0 {
                        1
                    } else {
                        -1
                    }
                })
                .collect();
            signs.push(row_signs);
            labels.push(if key % 2 == 1 { 1.0 } else { -1.0 });
            weights.push(w);
            total += w;
        }
        Cells {
            signs,
            labels,
            weights,
            total,
        }
    }

    fn risk(&self, w: &[f64]) -> f64 {
        let mut acc = 0.0;
        for c in 0..self.signs.len() {
            let mut s = 0.0;
            for (f, &wf) in w.iter().enumerate() {
                s += wf * self.signs[c][f] as f64;
            }
            let r = self.labels[c] - s.tanh();
            acc += self.weights[c] * r * r;
        }
        acc / self.total
    }
}

#[derive(Clone, Copy, PartialEq)]
enum FitMode {
    /// Track the best iterate by hold-out risk and stop on a plateau.
    HoldoutSelect,
    /// Iterate until the step size reaches rounding level (population fits,
    /// where the weighted risk is the population risk itself).
    RunToConvergence,
}

/// The projected mean-update iteration.
fn fit_weighted(
    train: &Cells,
    holdout: &Cells,
    n_features: usize,
    radius: f64,
    max_iters: usize,
    mode: FitMode,
) -> (Vec<f64>, f64, usize) {
    let mut w = vec![0.0f64; n_features];
    let mut best_w = w.clone();
    let mut best_risk = holdout.risk(&w);
    let mut since_improve = 0usize;
    let mut iters = 0usize;
    let scale = 1.0 / n_features as f64; // ‖φ(x)‖² = n_features exactly
    for _ in 0..max_iters {
        iters += 1;
        let mut grad = vec![0.0f64; n_features];
        for c in 0..train.signs.len() {
            let mut s = 0.0;
            for (f, &wf) in w.iter().enumerate() {
                s += wf * train.signs[c][f] as f64;
            }
            let r = train.weights[c] * (train.labels[c] - s.tanh());
            for (f, g) in grad.iter_mut().enumerate() {
                *g += r * train.signs[c][f] as f64;
            }
        }
        let mut step: f64 = 0.0;
        for (f, g) in grad.iter().enumerate() {
            let delta = g / train.total * scale;
            w[f] += delta;
            step = step.max(delta.abs());
        }
        let norm: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > radius {
            for x in &mut w {
                *x *= radius / norm;
            }
        }
        if mode == FitMode::HoldoutSelect {
            let risk = holdout.risk(&w);
            if risk < best_risk {
                best_risk = risk;
                best_w.copy_from_slice(&w);
                since_improve = 0;
            } else {
                since_improve += 1;
                if since_improve > PATIENCE {
                    break;
                }
            }
        }
        if step < 1e-13 {
            break;
        }
    }
    match mode {
        FitMode::HoldoutSelect => (best_w, best_risk, iters),
        FitMode::RunToConvergence => {
            let risk = holdout.risk(&w);
            (w, risk, iters)
        }
    }
}

fn coefficients_from_weights(features: &[Subset], w: &[f64]) -> CoefficientMap {
    features
        .iter()
        .zip(w.iter())
        .filter(|(_, &v)| v != 0.0)
        .map(|(&s, &v)| (s, v))
        .collect()
}

/// Fit one node from sample rows: seeded shuffle, hold-out split,
/// weighted-cell iteration, best iterate by hold-out squared error.
pub fn glmtron_fit(
    problem: &RegressionProblem,
    radius: f64,
    holdout_fraction: f64,
    max_iters: usize,
    seed: u64,
) -> Result<FittedLocalPotential> {
    if !(radius > 0.0) {
        return Err(Error::Parameter(format!("radius must be positive, got {radius}")));
    }
    if !(holdout_fraction > 0.0 && holdout_fraction < 1.0) {
        return Err(Error::Parameter(format!(
            "holdout fraction must lie in (0,1), got {holdout_fraction}"
        )));
    }
    let m = problem.n_rows();
    let n_holdout = ((m as f64) * holdout_fraction).round() as usize;
    let n_train = m.saturating_sub(n_holdout);
    for (split, rows) in [("train", n_train), ("holdout", n_holdout)] {
        if rows < MIN_SPLIT_ROWS {
            return Err(Error::InsufficientData {
                split,
                rows,
                min: MIN_SPLIT_ROWS,
            });
        }
    }
    let mut order: Vec<usize> = (0..m).collect();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let d = problem.neighborhood.len();
    let train = Cells::build(
        order[..n_train].iter().map(|&r| {
            let (p, y) = problem.rows[r];
            (p, y as f64, 1.0)
        }),
        d,
    );
    let holdout = Cells::build(
        order[n_train..].iter().map(|&r| {
            let (p, y) = problem.rows[r];
            (p, y as f64, 1.0)
        }),
        d,
    );
    let (w, risk, iters) = fit_weighted(
        &train,
        &holdout,
        problem.features.len(),
        radius,
        max_iters,
        FitMode::HoldoutSelect,
    );
    Ok(FittedLocalPotential {
        node: problem.target,
        coefficients: coefficients_from_weights(&problem.features, &w),
        holdout_risk: risk,
        iterations: iters,
    })
}

/// Fit one node from histogram counts; the hold-out split draws a binomial
/// share of each cell, which is the count-space image of a per-row split.
pub fn glmtron_fit_from_counts(
    counts: &CountedSamples,
    target: usize,
    neighborhood: &[usize],
    radius: f64,
    holdout_fraction: f64,
    max_iters: usize,
    seed: u64,
) -> Result<FittedLocalPotential> {
    if !(radius > 0.0) {
        return Err(Error::Parameter(format!("radius must be positive, got {radius}")));
    }
    if !(holdout_fraction > 0.0 && holdout_fraction < 1.0) {
        return Err(Error::Parameter(format!(
            "holdout fraction must lie in (0,1), got {holdout_fraction}"
        )));
    }
    let mut nbhd = neighborhood.to_vec();
    nbhd.sort_unstable();
    nbhd.dedup();
    if nbhd.contains(&target) {
        return Err(Error::Parameter("neighborhood must not contain the target".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut train_rows = Vec::new();
    let mut holdout_rows = Vec::new();
    let mut train_total = 0u64;
    let mut holdout_total = 0u64;
    let target_bit = 1usize << target;
    for (mask, &c) in counts.counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let h = Binomial::new(c, holdout_fraction)
            .expect("fraction checked above")
            .sample(&mut rng);
        let t = c - h;
        let mut pattern = 0u32;
        for (pos, &j) in nbhd.iter().enumerate() {
            if mask & (1 << j) != 0 {
                pattern |= 1 << pos;
            }
        }
        let label = if mask & target_bit != 0 { 1.0 } else { -1.0 };
        if t > 0 {
            train_rows.push((pattern, label, t as f64));
            train_total += t;
        }
        if h > 0 {
            holdout_rows.push((pattern, label, h as f64));
            holdout_total += h;
        }
    }
    for (split, rows) in [("train", train_total), ("holdout", holdout_total)] {
        if (rows as usize) < MIN_SPLIT_ROWS {
            return Err(Error::InsufficientData {
                split,
                rows: rows as usize,
                min: MIN_SPLIT_ROWS,
            });
        }
    }
    let d = nbhd.len();
    let train = Cells::build(train_rows.into_iter(), d);
    let holdout = Cells::build(holdout_rows.into_iter(), d);
    let features = local_to_global_features(&nbhd);
    let (w, risk, iters) = fit_weighted(
        &train,
        &holdout,
        features.len(),
        radius,
        max_iters,
        FitMode::HoldoutSelect,
    );
    Ok(FittedLocalPotential {
        node: target,
        coefficients: coefficients_from_weights(&features, &w),
        holdout_risk: risk,
        iterations: iters,
    })
}

/// Population fit: the same iteration with exact configuration
/// probabilities as weights. At the fixed point the fitted map equals
/// `∂_target p*` of the distribution's potential.
pub fn glmtron_population(
    dist: &ExactDistribution,
    target: usize,
    neighborhood: &[usize],
    radius: f64,
    max_iters: usize,
) -> Result<FittedLocalPotential> {
    if !(radius > 0.0) {
        return Err(Error::Parameter(format!("radius must be positive, got {radius}")));
    }
    let mut nbhd = neighborhood.to_vec();
    nbhd.sort_unstable();
    nbhd.dedup();
    if nbhd.contains(&target) {
        return Err(Error::Parameter("neighborhood must not contain the target".into()));
    }
    let target_bit = 1usize << target;
    let d = nbhd.len();
    let size = 1usize << dist.n_vars();
    let rows = (0..size).map(|mask| {
        let mut pattern = 0u32;
        for (pos, &j) in nbhd.iter().enumerate() {
            if mask & (1 << j) != 0 {
                pattern |= 1 << pos;
            }
        }
        let label = if mask & target_bit != 0 { 1.0 } else { -1.0 };
        (pattern, label, dist.prob(mask))
    });
    let cells = Cells::build(rows, d);
    let features = local_to_global_features(&nbhd);
    let (w, risk, iters) = fit_weighted(
        &cells,
        &cells,
        features.len(),
        radius,
        max_iters,
        FitMode::RunToConvergence,
    );
    Ok(FittedLocalPotential {
        node: target,
        coefficients: coefficients_from_weights(&features, &w),
        holdout_risk: risk,
        iterations: iters,
    })
}

/// How coefficients claimed by several local fits are reconciled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieRule {
    /// Take the coefficient of `x_S` from the fit of `min(S)` (default).
    MinIndex,
    /// Average over the fits of all `i ∈ S` that carry the feature.
    Average,
}

/// Merge per-node fits into one global potential: the fitted coefficient of
/// `T` in node `i`'s polynomial is a claim about `p̂(T ∪ {i})`. Degree-1
/// terms always come from the node's own intercept; the constant is dropped.
pub fn assemble_potential(
    locals: &[FittedLocalPotential],
    tie_rule: TieRule,
) -> Result<MrfPotential> {
    let n = locals.len();
    if n == 0 {
        return Err(Error::Parameter("no local fits supplied".into()));
    }
    let mut by_node: Vec<Option<&FittedLocalPotential>> = vec![None; n];
    for local in locals {
        if local.node >= n || by_node[local.node].is_some() {
            return Err(Error::Parameter(format!(
                "local fits must cover nodes 0..{n} exactly once (saw node {})",
                local.node
            )));
        }
        by_node[local.node] = Some(local);
    }
    let mut p = MrfPotential::new(n);
    match tie_rule {
        TieRule::MinIndex => {
            for (i, local) in by_node.iter().enumerate() {
                let local = local.unwrap();
                for (&t, &c) in &local.coefficients {
                    let s = t | (1 << i);
                    if s.trailing_zeros() as usize == i && c != 0.0 {
                        p.set_term(s, c);
                    }
                }
            }
        }
        TieRule::Average => {
            let mut sums: BTreeMap<Subset, (f64, usize)> = BTreeMap::new();
            for (i, local) in by_node.iter().enumerate() {
                let local = local.unwrap();
                for (&t, &c) in &local.coefficients {
                    let s = t | (1 << i);
                    let e = sums.entry(s).or_insert((0.0, 0));
                    e.0 += c;
                    e.1 += 1;
                }
            }
            for (s, (sum, cnt)) in sums {
                let c = sum / cnt as f64;
                if c != 0.0 {
                    p.set_term(s, c);
                }
            }
        }
    }
    Ok(p)
}

/// Translate a regression risk into a parameter-space bound: if every
/// configuration has probability at least `delta / 2^n`, then
/// `‖f̂ - ĝ‖₂² <= risk / delta`.
pub fn risk_to_parameter_bound(risk: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Parameter(format!("delta must lie in (0,1], got {delta}")));
    }
    if !(risk >= 0.0) {
        return Err(Error::Parameter(format!("risk must be nonnegative, got {risk}")));
    }
    Ok(risk / delta)
}

/// The `delta` to use with [`risk_to_parameter_bound`] for a blanket of
/// size `d2` in a `beta`-bounded model: `(2 σ(-2β))^{d2}`.
pub fn min_config_prob_ratio(beta: f64, d2: usize) -> f64 {
    (2.0 * sigma(-2.0 * beta)).powi(d2 as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{enumerate, fourier_of_log, observed_marginal};
    use crate::model::{IsingModel, Rbm};
    use crate::sampler::sample_exact;

    #[test]
    fn discrete_partial_moves_pair_to_singleton() {
        let mut p = MrfPotential::new(2);
        p.set_term(0b11, 0.7);
        let d = discrete_partial(&p, 0);
        assert_eq!(d.len(), 1);
        assert_eq!(d.get(&0b10), Some(&0.7));
    }

    #[test]
    fn discrete_partial_without_target_is_zero() {
        let mut p = MrfPotential::new(3);
        p.set_term(0b110, 0.4);
        assert!(discrete_partial(&p, 0).is_empty());
    }

    #[test]
    fn subsets_ordered_by_size_then_lex() {
        assert_eq!(
            subsets_by_size(3),
            vec![0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111]
        );
    }

    #[test]
    fn design_entries_are_signs() {
        let mut m = IsingModel::new(3);
        m.set_weight(0, 1, 0.5);
        let s = sample_exact(&m, 64, 1).unwrap();
        let prob = RegressionProblem::from_samples(&s, 0, &[1, 2]).unwrap();
        assert_eq!(prob.features, vec![0b000, 0b010, 0b100, 0b110]);
        for r in 0..prob.n_rows() {
            for f in 0..prob.features.len() {
                let v = prob.design_entry(r, f);
                assert!(v == 1 || v == -1);
            }
            assert_eq!(prob.design_entry(r, 0), 1);
        }
    }

    #[test]
    fn uniform_labels_fit_to_zero() {
        let m = IsingModel::new(3);
        let s = sample_exact(&m, 20_000, 8).unwrap();
        let prob = RegressionProblem::from_samples(&s, 0, &[1, 2]).unwrap();
        let fit = glmtron_fit(&prob, 2.0, 0.2, 300, 5).unwrap();
        for c in fit.coefficients.values() {
            assert!(c.abs() < 0.03, "{:?}", fit.coefficients);
        }
        assert!((fit.holdout_risk - 1.0).abs() < 0.05, "{}", fit.holdout_risk);
    }

    #[test]
    fn population_fit_recovers_partial() {
        let mut m = IsingModel::new(3);
        m.set_weight(0, 1, 0.5);
        m.set_weight(1, 2, -0.3);
        m.set_field(1, 0.2);
        let dist = enumerate(&m).unwrap();
        let p_star = fourier_of_log(&dist).unwrap();
        let fit = glmtron_population(&dist, 1, &[0, 2], 4.0, 200_000).unwrap();
        let truth = discrete_partial(&p_star, 1);
        assert!(
            coefficient_linf(&fit.coefficients, &truth) <= 1e-6,
            "err {}",
            coefficient_linf(&fit.coefficients, &truth)
        );
    }

    #[test]
    fn sampled_fit_close_to_oracle_pair() {
        // Single hidden unit over 4 observed nodes 0 and 1.
        let mut rbm = Rbm::new(4, 1);
        rbm.set_weight(0, 0, 0.9);
        rbm.set_weight(1, 0, 0.9);
        let model = rbm.as_ising();
        let marg = observed_marginal(&model).unwrap();
        let oracle = fourier_of_log(&marg).unwrap();
        let s = sample_exact(&model, 100_000, 21).unwrap();
        let prob = RegressionProblem::from_samples(&s, 0, &[1]).unwrap();
        let fit = glmtron_fit(&prob, 4.0, 0.2, 5000, 3).unwrap();
        let got = fit.coefficients.get(&0b10).copied().unwrap_or(0.0);
        let want = oracle.coefficient(0b11);
        assert!((got - want).abs() <= 0.05, "got {got}, oracle {want}");
    }

    #[test]
    fn insufficient_rows_rejected() {
        let m = IsingModel::new(2);
        let s = sample_exact(&m, 20, 0).unwrap();
        let prob = RegressionProblem::from_samples(&s, 0, &[1]).unwrap();
        assert!(matches!(
            glmtron_fit(&prob, 1.0, 0.2, 10, 0),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn assemble_zero_locals_empty() {
        let locals: Vec<FittedLocalPotential> = (0..3)
            .map(|i| FittedLocalPotential {
                node: i,
                coefficients: CoefficientMap::new(),
                holdout_risk: 1.0,
                iterations: 0,
            })
            .collect();
        let p = assemble_potential(&locals, TieRule::MinIndex).unwrap();
        assert_eq!(p.n_terms(), 0);
    }

    #[test]
    fn assemble_min_index_and_average() {
        let mut a = CoefficientMap::new();
        a.insert(0, 0.1); // intercept of node 0 -> field of node 0
        a.insert(0b10, 0.5); // claim about p({0,1})
        let mut b = CoefficientMap::new();
        b.insert(0b01, 0.7); // node 1's claim about p({0,1})
        let locals = vec![
            FittedLocalPotential {
                node: 0,
                coefficients: a,
                holdout_risk: 0.0,
                iterations: 0,
            },
            FittedLocalPotential {
                node: 1,
                coefficients: b,
                holdout_risk: 0.0,
                iterations: 0,
            },
        ];
        let p = assemble_potential(&locals, TieRule::MinIndex).unwrap();
        assert!((p.coefficient(0b11) - 0.5).abs() < 1e-15);
        assert!((p.coefficient(0b01) - 0.1).abs() < 1e-15);
        let p = assemble_potential(&locals, TieRule::Average).unwrap();
        assert!((p.coefficient(0b11) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn risk_bound_basics() {
        assert_eq!(risk_to_parameter_bound(0.0, 0.5).unwrap(), 0.0);
        assert_eq!(risk_to_parameter_bound(0.3, 1.0).unwrap(), 0.3);
        assert!(risk_to_parameter_bound(0.3, 0.0).is_err());
        assert!(risk_to_parameter_bound(-0.1, 0.5).is_err());
    }
}
