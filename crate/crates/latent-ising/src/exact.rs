//! Brute-force enumeration oracle.
//!
//! Everything here is exact up to floating point: joint and marginal
//! distributions as full tables, partition functions, conditional influences,
//! and the Walsh–Hadamard transform between log-masses and MRF potentials.
//! Models are capped at [`ENUMERATION_BOUND`] variables so a call is either
//! fast or an explicit capacity error.
//!
//! All probability arithmetic is done in log space with log-sum-exp;
//! accumulation order is fixed, so results are deterministic.

use crate::error::{Error, Result};
use crate::model::{IsingModel, MrfPotential, Subset};

/// Hard cap on enumerated variables (~4M configurations).
pub const ENUMERATION_BOUND: usize = 22;

/// Step used by the finite-difference derivative helpers.
pub const FD_STEP: f64 = 1e-3;

/// A full probability table over `n` binary variables, stored as
/// unnormalized log-masses indexed by configuration bitmask (bit set = spin
/// `+1`), plus the log partition function.
#[derive(Debug, Clone)]
pub struct ExactDistribution {
    n_vars: usize,
    log_weights: Vec<f64>,
    log_z: f64,
}

fn check_capacity(what: &'static str, n: usize) -> Result<()> {
    if n > ENUMERATION_BOUND {
        return Err(Error::Capacity {
            what,
            needed: n,
            bound: ENUMERATION_BOUND,
        });
    }
    Ok(())
}

/// Log-sum-exp over a slice, scanning once for the max and once for the sum.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

impl ExactDistribution {
    /// Build from raw log-masses (normalization computed here).
    pub fn from_log_weights(log_weights: Vec<f64>) -> Self {
        let n_vars = log_weights.len().trailing_zeros() as usize;
        assert_eq!(1usize << n_vars, log_weights.len(), "table must be 2^n");
        let log_z = log_sum_exp(&log_weights);
        ExactDistribution {
            n_vars,
            log_weights,
            log_z,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn log_z(&self) -> f64 {
        self.log_z
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    /// Normalized probability of a configuration.
    pub fn prob(&self, config: usize) -> f64 {
        (self.log_weights[config] - self.log_z).exp()
    }

    /// Probability table in configuration order.
    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.log_weights.len()).map(|x| self.prob(x)).collect()
    }

    /// Expectation of the spin of variable `i`.
    pub fn mean_spin(&self, i: usize) -> f64 {
        let bit = 1usize << i;
        let mut total = 0.0;
        for x in 0..self.log_weights.len() {
            let p = self.prob(x);
            total += if x & bit != 0 { p } else { -p };
        }
        total
    }

    /// Expectation of the parity `χ_S(x)`.
    pub fn mean_parity(&self, subset: Subset) -> f64 {
        let mut total = 0.0;
        for x in 0..self.log_weights.len() {
            let p = self.prob(x);
            if ((subset as usize & !x) & subset as usize).count_ones().is_multiple_of(2) {
                total += p;
            } else {
                total -= p;
            }
        }
        total
    }

    /// Total variation distance to another distribution on the same space.
    pub fn tv_distance(&self, other: &ExactDistribution) -> f64 {
        assert_eq!(self.n_vars, other.n_vars);
        let mut tv = 0.0;
        for x in 0..self.log_weights.len() {
            tv += (self.prob(x) - other.prob(x)).abs();
        }
        tv / 2.0
    }

    /// Kullback–Leibler divergence `KL(self || other)` in nats.
    pub fn kl_divergence(&self, other: &ExactDistribution) -> f64 {
        assert_eq!(self.n_vars, other.n_vars);
        let mut kl = 0.0;
        for x in 0..self.log_weights.len() {
            let p = self.prob(x);
            if p > 0.0 {
                let lp = self.log_weights[x] - self.log_z;
                let lq = other.log_weights[x] - other.log_z;
                kl += p * (lp - lq);
            }
        }
        kl
    }
}

/// Enumerate the full joint distribution of an Ising model:
/// `log w(x) = Σ_{i<j} J_ij x_i x_j + Σ_i h_i x_i`.
pub fn enumerate(model: &IsingModel) -> Result<ExactDistribution> {
    let n = model.n_nodes();
    check_capacity("model enumeration", n)?;
    let edges: Vec<(usize, usize, f64)> = model.edges().collect();
    let fields = model.fields();
    let size = 1usize << n;
    let mut log_weights = vec![0.0f64; size];
    for (x, lw) in log_weights.iter_mut().enumerate() {
        let mut e = 0.0;
        for &(i, j, w) in &edges {
            let si = if x & (1 << i) != 0 { 1.0 } else { -1.0 };
            let sj = if x & (1 << j) != 0 { 1.0 } else { -1.0 };
            e += w * si * sj;
        }
        for (i, &h) in fields.iter().enumerate() {
            if h != 0.0 {
                e += if x & (1 << i) != 0 { h } else { -h };
            }
        }
        *lw = e;
    }
    Ok(ExactDistribution::from_log_weights(log_weights))
}

/// Build the distribution `Pr(x) ∝ exp(p(x))` of an MRF potential.
pub fn distribution_from_potential(p: &MrfPotential) -> Result<ExactDistribution> {
    let n = p.n_vars();
    check_capacity("potential enumeration", n)?;
    // The evaluation table of a multilinear polynomial over all ±1
    // configurations is the Walsh–Hadamard transform of its coefficients.
    let mut table = vec![0.0f64; 1 << n];
    for (s, c) in p.terms() {
        table[s as usize] = c;
    }
    wht_coefficients_to_values(&mut table);
    Ok(ExactDistribution::from_log_weights(table))
}

/// In-place transform from subset coefficients to evaluations: on entry
/// `table[S] = p̂(S)`, on exit `table[x] = Σ_S p̂(S) χ_S(x)` with bit set in
/// `x` meaning spin `+1`.
pub fn wht_coefficients_to_values(table: &mut [f64]) {
    let n = table.len().trailing_zeros() as usize;
    for level in 0..n {
        let bit = 1usize << level;
        for x in 0..table.len() {
            if x & bit == 0 {
                let without = table[x];
                let with = table[x | bit];
                // spin -1 at `level`: even part minus odd part; spin +1: sum.
                table[x] = without - with;
                table[x | bit] = without + with;
            }
        }
    }
}

/// Inverse of [`wht_coefficients_to_values`]: from evaluations to subset
/// coefficients.
pub fn wht_values_to_coefficients(table: &mut [f64]) {
    let n = table.len().trailing_zeros() as usize;
    for level in 0..n {
        let bit = 1usize << level;
        for x in 0..table.len() {
            if x & bit == 0 {
                let minus = table[x];
                let plus = table[x | bit];
                table[x] = (plus + minus) / 2.0;
                table[x | bit] = (plus - minus) / 2.0;
            }
        }
    }
}

/// Marginalize onto the variables in `keep` (ascending re-indexing: the
/// `k`-th smallest kept variable becomes variable `k`). Mass over eliminated
/// variables is summed; the partition function is unchanged.
pub fn marginal(dist: &ExactDistribution, keep: &[usize]) -> Result<ExactDistribution> {
    if keep.is_empty() {
        return Err(Error::Parameter("marginal needs a nonempty keep set".into()));
    }
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if *keep.last().unwrap() >= dist.n_vars() {
        return Err(Error::Parameter(format!(
            "keep variable {} out of range",
            keep.last().unwrap()
        )));
    }
    let k = keep.len();
    let mut buckets: Vec<Vec<f64>> = vec![Vec::new(); 1 << k];
    for x in 0..dist.log_weights.len() {
        let mut y = 0usize;
        for (pos, &v) in keep.iter().enumerate() {
            if x & (1 << v) != 0 {
                y |= 1 << pos;
            }
        }
        buckets[y].push(dist.log_weights[x]);
    }
    let log_weights: Vec<f64> = buckets.iter().map(|b| log_sum_exp(b)).collect();
    Ok(ExactDistribution::from_log_weights(log_weights))
}

/// Marginal of the model's joint on its observed nodes.
pub fn observed_marginal(model: &IsingModel) -> Result<ExactDistribution> {
    let joint = enumerate(model)?;
    marginal(&joint, &model.observed_nodes())
}

/// Exact discrete influence `I_i(S) = E[X_i | X_S = {+1}^{|S|}]` computed
/// from a distribution table. `i` must not lie in `S`.
pub fn influence_from_distribution(
    dist: &ExactDistribution,
    i: usize,
    subset: Subset,
) -> Result<f64> {
    if subset & (1 << i) != 0 {
        return Err(Error::Parameter(format!(
            "influence target {i} must not lie in the conditioning set"
        )));
    }
    let bit = 1usize << i;
    let s = subset as usize;
    let mut plus = 0.0;
    let mut minus = 0.0;
    for x in 0..dist.log_weights.len() {
        if x & s == s {
            let p = dist.prob(x);
            if x & bit != 0 {
                plus += p;
            } else {
                minus += p;
            }
        }
    }
    let total = plus + minus;
    if total <= 0.0 {
        return Err(Error::Parameter(format!(
            "conditioning event X_S = 1 for S={subset:#b} has zero mass"
        )));
    }
    Ok((plus - minus) / total)
}

/// Exact discrete influence in a model; `i` and all of `S` must be observed.
pub fn exact_influence(model: &IsingModel, i: usize, subset: Subset) -> Result<f64> {
    if model.is_hidden(i) {
        return Err(Error::Parameter(format!("influence target {i} is latent")));
    }
    for j in 0..model.n_nodes() {
        if subset & (1 << j) != 0 && model.is_hidden(j) {
            return Err(Error::Parameter(format!("conditioning node {j} is latent")));
        }
    }
    let joint = enumerate(model)?;
    influence_from_distribution(&joint, i, subset)
}

/// All influences `I_i(S)` for `S` ranging over subsets of `universe`
/// (a bitmask not containing `i`), indexed by the rank of `S` within the
/// universe bits. Precomputing the table makes exhaustive submodularity
/// checks cheap.
pub struct InfluenceTable {
    /// Universe bits in ascending order.
    pub universe: Vec<usize>,
    /// `values[r]` is `I_i(S)` where `S` has local rank bitmask `r`.
    pub values: Vec<f64>,
}

impl InfluenceTable {
    /// Look up by global subset mask (must be a subset of the universe).
    pub fn influence(&self, subset: Subset) -> f64 {
        let mut rank = 0usize;
        for (pos, &v) in self.universe.iter().enumerate() {
            if subset & (1 << v) != 0 {
                rank |= 1 << pos;
            }
        }
        self.values[rank]
    }

    /// Global bitmask for a local rank.
    pub fn global_mask(&self, rank: usize) -> Subset {
        let mut mask: Subset = 0;
        for (pos, &v) in self.universe.iter().enumerate() {
            if rank & (1 << pos) != 0 {
                mask |= 1 << v;
            }
        }
        mask
    }
}

/// Precompute `I_i(S)` for every subset of the given universe of observed
/// nodes.
pub fn influence_table(
    dist: &ExactDistribution,
    i: usize,
    universe: &[usize],
) -> Result<InfluenceTable> {
    let mut universe = universe.to_vec();
    universe.sort_unstable();
    universe.dedup();
    if universe.contains(&i) {
        return Err(Error::Parameter("universe must exclude the target".into()));
    }
    let u = universe.len();
    check_capacity("influence table", u)?;
    let mut values = Vec::with_capacity(1 << u);
    for rank in 0..(1usize << u) {
        let mut mask: Subset = 0;
        for (pos, &v) in universe.iter().enumerate() {
            if rank & (1 << pos) != 0 {
                mask |= 1 << v;
            }
        }
        values.push(influence_from_distribution(dist, i, mask)?);
    }
    Ok(InfluenceTable { universe, values })
}

/// Smooth influence: the magnetization `E[X_i]` under the model with its
/// fields replaced by `h_override`.
pub fn smooth_influence(model: &IsingModel, i: usize, h_override: &[f64]) -> Result<f64> {
    let dist = enumerate(&model.with_fields(h_override.to_vec()))?;
    Ok(dist.mean_spin(i))
}

/// Magnetizations of all spins at the given field, from one enumeration.
fn magnetizations(model: &IsingModel, h: &[f64]) -> Result<Vec<f64>> {
    let dist = enumerate(&model.with_fields(h.to_vec()))?;
    Ok((0..model.n_nodes()).map(|i| dist.mean_spin(i)).collect())
}

/// Exact log partition function at the given field.
pub fn log_z_at(model: &IsingModel, h: &[f64]) -> Result<f64> {
    Ok(enumerate(&model.with_fields(h.to_vec()))?.log_z())
}

/// Central finite difference `∂_j ∂_i log Z(h)`, using the identity
/// `∂_i log Z = E[X_i]` so only one numerical differencing step is needed.
/// Returns the estimate for every `i` at once.
pub fn fd2_log_z(model: &IsingModel, h: &[f64], j: usize, step: f64) -> Result<Vec<f64>> {
    let mut hp = h.to_vec();
    hp[j] += step;
    let mut hm = h.to_vec();
    hm[j] -= step;
    let mp = magnetizations(model, &hp)?;
    let mm = magnetizations(model, &hm)?;
    Ok(mp
        .iter()
        .zip(mm.iter())
        .map(|(p, m)| (p - m) / (2.0 * step))
        .collect())
}

/// Central finite difference `∂_k ∂_j ∂_i log Z(h)` for every `i` at once,
/// differencing the exact magnetization in the `j` and `k` directions.
pub fn fd3_log_z(
    model: &IsingModel,
    h: &[f64],
    j: usize,
    k: usize,
    step: f64,
) -> Result<Vec<f64>> {
    let eval = |dj: f64, dk: f64| -> Result<Vec<f64>> {
        let mut hh = h.to_vec();
        hh[j] += dj;
        hh[k] += dk;
        magnetizations(model, &hh)
    };
    let pp = eval(step, step)?;
    let pm = eval(step, -step)?;
    let mp = eval(-step, step)?;
    let mm = eval(-step, -step)?;
    let denom = 4.0 * step * step;
    Ok((0..model.n_nodes())
        .map(|i| (pp[i] - pm[i] - mp[i] + mm[i]) / denom)
        .collect())
}

/// Central finite difference of `log Z` itself in direction `(i, j)`; used
/// to cross-check the covariance identity.
pub fn fd2_log_z_direct(
    model: &IsingModel,
    h: &[f64],
    i: usize,
    j: usize,
    step: f64,
) -> Result<f64> {
    let eval = |di: f64, dj: f64| -> Result<f64> {
        let mut hh = h.to_vec();
        hh[i] += di;
        hh[j] += dj;
        log_z_at(model, &hh)
    };
    Ok((eval(step, step)? - eval(step, -step)? - eval(-step, step)? + eval(-step, -step)?)
        / (4.0 * step * step))
}

/// Covariance `Cov(X_i, X_j)` under the model.
pub fn covariance(model: &IsingModel, i: usize, j: usize) -> Result<f64> {
    let dist = enumerate(model)?;
    let mut eij = 0.0;
    for x in 0..dist.log_weights.len() {
        let si = if x & (1 << i) != 0 { 1.0 } else { -1.0 };
        let sj = if x & (1 << j) != 0 { 1.0 } else { -1.0 };
        eij += dist.prob(x) * si * sj;
    }
    Ok(eij - dist.mean_spin(i) * dist.mean_spin(j))
}

/// Walsh–Hadamard transform of the log-masses: recovers the unique MRF
/// potential of a full-support distribution, with the constant term dropped.
pub fn fourier_of_log(dist: &ExactDistribution) -> Result<MrfPotential> {
    let mut table = dist.log_weights().to_vec();
    for (x, lw) in table.iter().enumerate() {
        if !lw.is_finite() {
            return Err(Error::ZeroMass { config: x });
        }
    }
    wht_values_to_coefficients(&mut table);
    let mut p = MrfPotential::new(dist.n_vars());
    for (s, &c) in table.iter().enumerate().skip(1) {
        if c != 0.0 {
            p.set_term(s as Subset, c);
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Rbm;

    fn single_spin(h: f64) -> IsingModel {
        let mut m = IsingModel::new(1);
        m.set_field(0, h);
        m
    }

    #[test]
    fn free_spin_is_uniform() {
        let dist = enumerate(&single_spin(0.0)).unwrap();
        assert!((dist.prob(0) - 0.5).abs() < 1e-15);
        assert!((dist.prob(1) - 0.5).abs() < 1e-15);
        assert!((dist.log_z() - 2.0f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn coupled_pair_partition_function() {
        let mut m = IsingModel::new(2);
        m.set_weight(0, 1, 1.0);
        let dist = enumerate(&m).unwrap();
        let expected = 2.0 * 1.0f64.exp() + 2.0 * (-1.0f64).exp();
        assert!((dist.log_z() - expected.ln()).abs() < 1e-14);
    }

    #[test]
    fn example1_rbm_marginal_is_uniform() {
        // Two hidden units with weights (1,1) and (-1,1): the observed pair
        // is exactly a pair of independent Rademachers.
        let mut rbm = Rbm::new(2, 2);
        rbm.set_weight(0, 0, 1.0);
        rbm.set_weight(1, 0, 1.0);
        rbm.set_weight(0, 1, -1.0);
        rbm.set_weight(1, 1, 1.0);
        let marg = observed_marginal(&rbm.as_ising()).unwrap();
        let tv: f64 = (0..4).map(|x| (marg.prob(x) - 0.25).abs()).sum::<f64>() / 2.0;
        assert!(tv <= 1e-12, "tv = {tv}");
    }

    #[test]
    fn marginal_keep_all_is_identity() {
        let mut m = IsingModel::new(3);
        m.set_weight(0, 1, 0.4);
        m.set_field(2, 0.2);
        let dist = enumerate(&m).unwrap();
        let marg = marginal(&dist, &[0, 1, 2]).unwrap();
        for x in 0..8 {
            assert!((dist.prob(x) - marg.prob(x)).abs() < 1e-14);
        }
    }

    #[test]
    fn marginal_of_independent_pair_is_rademacher() {
        let mut m = IsingModel::new(2);
        m.set_field(0, 0.7);
        let dist = enumerate(&m).unwrap();
        let marg = marginal(&dist, &[0]).unwrap();
        let p_plus = 0.7f64.exp() / (0.7f64.exp() + (-0.7f64).exp());
        assert!((marg.prob(1) - p_plus).abs() < 1e-14);
    }

    #[test]
    fn influence_of_free_spin_is_zero_and_tanh() {
        assert!(exact_influence(&single_spin(0.0), 0, 0).unwrap().abs() < 1e-15);
        let h = 0.8;
        let inf = exact_influence(&single_spin(h), 0, 0).unwrap();
        assert!((inf - h.tanh()).abs() < 1e-14);
    }

    #[test]
    fn influence_on_chain_is_tanh_of_weight() {
        let w = 0.6;
        let mut m = IsingModel::new(2);
        m.set_weight(0, 1, w);
        let inf = exact_influence(&m, 0, 0b10).unwrap();
        assert!((inf - w.tanh()).abs() < 1e-14);
    }

    #[test]
    fn influence_rejects_target_in_set() {
        let m = single_spin(0.0);
        assert!(exact_influence(&m, 0, 0b1).is_err());
    }

    #[test]
    fn smooth_influence_zero_field_symmetry() {
        let mut m = IsingModel::new(3);
        m.set_weight(0, 1, 0.5);
        m.set_weight(1, 2, 0.3);
        for i in 0..3 {
            let v = smooth_influence(&m, i, &[0.0; 3]).unwrap();
            assert!(v.abs() < 1e-14, "spin-flip symmetry gives mean 0, got {v}");
        }
    }

    #[test]
    fn fd2_matches_covariance() {
        let mut m = IsingModel::new(3);
        m.set_weight(0, 1, 0.5);
        m.set_weight(1, 2, 0.7);
        m.set_field(0, 0.1);
        m.set_field(2, 0.3);
        for i in 0..3 {
            for j in 0..3 {
                let fd = fd2_log_z_direct(&m, m.fields(), i, j, FD_STEP).unwrap();
                let cov = covariance(&m, i, j).unwrap();
                assert!((fd - cov).abs() < 1e-6, "i={i} j={j}: fd {fd} vs cov {cov}");
            }
        }
    }

    #[test]
    fn ghost_vertex_conditional_matches_original() {
        let mut m = IsingModel::new(4);
        m.set_weight(0, 1, 0.5);
        m.set_weight(2, 3, 0.8);
        m.set_weight(0, 3, 0.2);
        m.set_field(0, 0.3);
        m.set_field(2, 0.6);
        let orig = enumerate(&m).unwrap();
        let ghost = enumerate(&m.ghost_vertex()).unwrap();
        // Condition on the ghost spin (variable 4) being +1.
        let ghost_bit = 1usize << 4;
        let cond: Vec<f64> = (0..16).map(|x| ghost.log_weights()[x | ghost_bit]).collect();
        let cond = ExactDistribution::from_log_weights(cond);
        assert!(orig.tv_distance(&cond) <= 1e-12);
    }

    #[test]
    fn influence_table_matches_direct_queries() {
        let mut m = IsingModel::new(5);
        m.set_weight(0, 1, 0.6);
        m.set_weight(1, 4, 0.3);
        m.set_weight(2, 3, 0.8);
        m.set_field(2, 0.4);
        let dist = enumerate(&m).unwrap();
        let universe = vec![0usize, 1, 3, 4];
        let table = influence_table(&dist, 2, &universe).unwrap();
        for rank in 0..(1usize << universe.len()) {
            let mask = table.global_mask(rank);
            let direct = influence_from_distribution(&dist, 2, mask).unwrap();
            assert_eq!(table.influence(mask), table.values[rank]);
            assert!((table.values[rank] - direct).abs() < 1e-14, "rank {rank}");
        }
    }

    #[test]
    fn marginal_requires_nonempty_keep() {
        let dist = enumerate(&single_spin(0.2)).unwrap();
        assert!(marginal(&dist, &[]).is_err());
    }

    #[test]
    fn fourier_of_log_uniform_is_empty() {
        let dist = ExactDistribution::from_log_weights(vec![0.0; 8]);
        let p = fourier_of_log(&dist).unwrap();
        assert_eq!(p.n_terms(), 0);
    }

    #[test]
    fn fourier_of_log_recovers_pair_weight() {
        let mut m = IsingModel::new(2);
        m.set_weight(0, 1, 0.7);
        let p = fourier_of_log(&enumerate(&m).unwrap()).unwrap();
        assert!((p.coefficient(0b11) - 0.7).abs() < 1e-14);
        assert_eq!(p.truncated(1e-12).n_terms(), 1);
    }

    #[test]
    fn fourier_of_log_single_hidden_unit() {
        // One hidden unit with weights (1,1): the induced pair coefficient
        // is (ρ(2) - ρ(0)) / 2.
        let mut rbm = Rbm::new(2, 1);
        rbm.set_weight(0, 0, 1.0);
        rbm.set_weight(1, 0, 1.0);
        let marg = observed_marginal(&rbm.as_ising()).unwrap();
        let p = fourier_of_log(&marg).unwrap();
        let rho = |x: f64| (x.exp() + (-x).exp()).ln();
        let expected = (rho(2.0) - rho(0.0)) / 2.0;
        assert!((p.coefficient(0b11) - expected).abs() < 1e-12);
        assert!((expected - 0.6625013736789319).abs() < 1e-15);
    }

    #[test]
    fn wht_round_trip() {
        let mut table = vec![0.3, -1.2, 0.5, 2.0, -0.1, 0.0, 1.5, -2.2];
        let orig = table.clone();
        wht_coefficients_to_values(&mut table);
        wht_values_to_coefficients(&mut table);
        for (a, b) in table.iter().zip(orig.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_mass_configuration_rejected() {
        let dist = ExactDistribution::from_log_weights(vec![0.0, f64::NEG_INFINITY, 0.0, 0.0]);
        assert!(matches!(
            fourier_of_log(&dist),
            Err(Error::ZeroMass { config: 1 })
        ));
    }

    #[test]
    fn capacity_error_over_bound() {
        let m = IsingModel::new(23);
        assert!(matches!(enumerate(&m), Err(Error::Capacity { .. })));
    }
}
