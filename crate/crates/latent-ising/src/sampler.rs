//! Sampling observed configurations.
//!
//! Two routes: exact i.i.d. draws via an alias table over the enumerated
//! observed marginal (desk scale), and a single-site heat-bath Gibbs sampler
//! for models past the enumeration bound. For very large draw counts at
//! small n, [`sample_counts`] produces the exact multinomial histogram of an
//! i.i.d. sample without materializing rows.
//!
//! All entry points take a 64-bit seed and use the ChaCha12 counter-based
//! generator (`rand_chacha`), so outputs are byte-identical across runs and
//! platforms. Gibbs defaults (`burn_in = 1000`, `thinning = 10` sweeps) are
//! heuristics; learner correctness is always validated against
//! [`sample_exact`].

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::exact::{observed_marginal, ExactDistribution};
use crate::model::IsingModel;

/// Default Gibbs burn-in, in full sweeps.
pub const GIBBS_BURN_IN: usize = 1000;
/// Default Gibbs thinning, in full sweeps between recorded states.
pub const GIBBS_THINNING: usize = 10;

/// A matrix of ±1 observed configurations with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    n_vars: usize,
    /// Row-major M × n matrix, entries in {-1, +1}.
    rows: Vec<i8>,
    pub seed: u64,
    /// Identifier of the generating model (informational only).
    pub source: String,
}

impl SampleSet {
    pub fn from_rows(n_vars: usize, rows: Vec<i8>, seed: u64, source: String) -> Self {
        assert!(n_vars > 0);
        assert_eq!(rows.len() % n_vars, 0);
        debug_assert!(rows.iter().all(|&v| v == 1 || v == -1));
        SampleSet {
            n_vars,
            rows,
            seed,
            source,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len().checked_div(self.n_vars).unwrap_or(0)
    }

    pub fn row(&self, r: usize) -> &[i8] {
        &self.rows[r * self.n_vars..(r + 1) * self.n_vars]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i8]> {
        self.rows.chunks_exact(self.n_vars)
    }

    /// Mean of column `i`.
    pub fn column_mean(&self, i: usize) -> f64 {
        if self.n_rows() == 0 {
            return 0.0;
        }
        let sum: i64 = self.rows().map(|r| r[i] as i64).sum();
        sum as f64 / self.n_rows() as f64
    }

    /// Histogram of configurations (bit set = spin +1). Only sensible for
    /// small n.
    pub fn histogram(&self) -> CountedSamples {
        let mut counts = vec![0u64; 1 << self.n_vars];
        for row in self.rows() {
            let mut mask = 0usize;
            for (i, &v) in row.iter().enumerate() {
                if v > 0 {
                    mask |= 1 << i;
                }
            }
            counts[mask] += 1;
        }
        CountedSamples {
            n_vars: self.n_vars,
            counts,
            total: self.n_rows() as u64,
        }
    }
}

/// The exact histogram of an i.i.d. sample: a multinomial draw over the
/// 2^n configuration cells.
#[derive(Debug, Clone, PartialEq)]
pub struct CountedSamples {
    pub n_vars: usize,
    /// `counts[mask]` rows observed at that configuration.
    pub counts: Vec<u64>,
    pub total: u64,
}

impl CountedSamples {
    /// Empirical total-variation distance to an exact distribution.
    pub fn tv_distance(&self, dist: &ExactDistribution) -> f64 {
        assert_eq!(self.n_vars, dist.n_vars());
        let m = self.total.max(1) as f64;
        let mut tv = 0.0;
        for (mask, &c) in self.counts.iter().enumerate() {
            tv += (c as f64 / m - dist.prob(mask)).abs();
        }
        tv / 2.0
    }
}

struct AliasTable {
    prob: Vec<f64>,
    alias: Vec<usize>,
}

impl AliasTable {
    /// Vose's construction over a normalized probability vector.
    fn new(p: &[f64]) -> Self {
        let n = p.len();
        let mut prob = vec![0.0; n];
        let mut alias = vec![0usize; n];
        let mut small = Vec::new();
        let mut large = Vec::new();
        let mut scaled: Vec<f64> = p.iter().map(|&x| x * n as f64).collect();
        for (i, &s) in scaled.iter().enumerate() {
            if s < 1.0 {
                small.push(i);
            } else {
                large.push(i);
            }
        }
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            prob[s] = scaled[s];
            alias[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            if scaled[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        for &i in small.iter().chain(large.iter()) {
            prob[i] = 1.0;
        }
        AliasTable { prob, alias }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let idx = ((u * self.prob.len() as f64) as usize).min(self.prob.len() - 1);
        let v: f64 = rng.random();
        if v < self.prob[idx] {
            idx
        } else {
            self.alias[idx]
        }
    }
}

fn unpack_rows(n: usize, masks: &[usize]) -> Vec<i8> {
    let mut rows = Vec::with_capacity(masks.len() * n);
    for &mask in masks {
        for i in 0..n {
            rows.push(if mask & (1 << i) != 0 { 1 } else { -1 });
        }
    }
    rows
}

/// Draw `m` i.i.d. samples from the model's marginal on its observed nodes
/// by enumerating the marginal and alias-sampling it. Deterministic given
/// the seed.
pub fn sample_exact(model: &IsingModel, m: usize, seed: u64) -> Result<SampleSet> {
    let marg = observed_marginal(model)?;
    let n = marg.n_vars();
    let table = AliasTable::new(&marg.probabilities());
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let masks: Vec<usize> = (0..m).map(|_| table.sample(&mut rng)).collect();
    Ok(SampleSet::from_rows(
        n,
        unpack_rows(n, &masks),
        seed,
        String::new(),
    ))
}

/// Draw the exact histogram of `m` i.i.d. samples from the observed
/// marginal, one conditional binomial per configuration cell. Useful when
/// `m` is far too large to store rows.
pub fn sample_counts(model: &IsingModel, m: u64, seed: u64) -> Result<CountedSamples> {
    let marg = observed_marginal(model)?;
    let probs = marg.probabilities();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; probs.len()];
    let mut remaining = m;
    let mut rest_mass = 1.0f64;
    for (idx, &p) in probs.iter().enumerate() {
        if idx + 1 == probs.len() || remaining == 0 {
            counts[idx] = remaining;
            break;
        }
        let cond = (p / rest_mass).clamp(0.0, 1.0);
        let c = if cond >= 1.0 {
            remaining
        } else {
            Binomial::new(remaining, cond)
                .expect("conditional probability is clamped to [0, 1]")
                .sample(&mut rng)
        };
        counts[idx] = c;
        remaining -= c;
        rest_mass = (rest_mass - p).max(0.0);
    }
    Ok(CountedSamples {
        n_vars: marg.n_vars(),
        counts,
        total: m,
    })
}

/// Single-site heat-bath Gibbs sampler: `burn_in` full sweeps, then one
/// recorded observed configuration every `thinning` sweeps. The conditional
/// update is `Pr(X_i = +1 | rest) = σ(2(Σ_j J_ij x_j + h_i))`. Deterministic
/// given the seed; sample quality is a matter of mixing, not contract.
pub fn sample_gibbs(
    model: &IsingModel,
    m: usize,
    burn_in: usize,
    thinning: usize,
    seed: u64,
) -> SampleSet {
    let n = model.n_nodes();
    let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (i, j, w) in model.edges() {
        adjacency[i].push((j, w));
        adjacency[j].push((i, w));
    }
    let observed = model.observed_nodes();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut state: Vec<i8> = (0..n)
        .map(|_| if rng.random::<bool>() { 1 } else { -1 })
        .collect();
    let sweep = |state: &mut Vec<i8>, rng: &mut ChaCha12Rng| {
        for i in 0..n {
            let mut local = model.field(i);
            for &(j, w) in &adjacency[i] {
                local += w * state[j] as f64;
            }
            let p_plus = 1.0 / (1.0 + (-2.0 * local).exp());
            state[i] = if rng.random::<f64>() < p_plus { 1 } else { -1 };
        }
    };
    for _ in 0..burn_in {
        sweep(&mut state, &mut rng);
    }
    let mut rows = Vec::with_capacity(m * observed.len());
    for _ in 0..m {
        for _ in 0..thinning {
            sweep(&mut state, &mut rng);
        }
        for &i in &observed {
            rows.push(state[i]);
        }
    }
    SampleSet::from_rows(observed.len().max(1), rows, seed, String::new())
}

// ---------------------------------------------------------------------------
// `samples-v1` text format: header `samples-v1 n=<int> m=<int> seed=<int>`,
// then one row per line of space-separated `+1` / `-1`.
// ---------------------------------------------------------------------------

pub fn write_samples(s: &SampleSet) -> String {
    let mut out = String::with_capacity(s.rows.len() * 3 + 64);
    out.push_str(&format!(
        "samples-v1 n={} m={} seed={}\n",
        s.n_vars(),
        s.n_rows(),
        s.seed
    ));
    for row in s.rows() {
        let mut first = true;
        for &v in row {
            if !first {
                out.push(' ');
            }
            out.push_str(if v > 0 { "+1" } else { "-1" });
            first = false;
        }
        out.push('\n');
    }
    out
}

pub fn parse_samples(text: &str) -> Result<SampleSet> {
    let mut lines = text.lines().enumerate();
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| Error::Format {
            line: 0,
            message: "empty samples file".into(),
        })
        .map(|(i, l)| (i + 1, l.trim()))?;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("samples-v1") {
        return Err(Error::Format {
            line: line_no,
            message: format!("expected `samples-v1` header, got `{header}`"),
        });
    }
    let mut n = None;
    let mut m = None;
    let mut seed = None;
    for tok in tokens {
        let (key, value) = tok.split_once('=').ok_or_else(|| Error::Format {
            line: line_no,
            message: format!("expected key=value, got `{tok}`"),
        })?;
        let parse = |v: &str| -> Result<u64> {
            v.parse().map_err(|e| Error::Format {
                line: line_no,
                message: format!("bad integer `{v}`: {e}"),
            })
        };
        match key {
            "n" => n = Some(parse(value)? as usize),
            "m" => m = Some(parse(value)? as usize),
            "seed" => seed = Some(parse(value)?),
            other => {
                return Err(Error::Format {
                    line: line_no,
                    message: format!("unknown header key `{other}`"),
                })
            }
        }
    }
    let (n, m, seed) = match (n, m, seed) {
        (Some(n), Some(m), Some(seed)) if n > 0 => (n, m, seed),
        _ => {
            return Err(Error::Format {
                line: line_no,
                message: "header needs n=, m=, seed= with n > 0".into(),
            })
        }
    };
    let mut rows = Vec::with_capacity(n * m);
    let mut row_count = 0usize;
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut entries = 0usize;
        for tok in line.split_whitespace() {
            let v = match tok {
                "+1" | "1" => 1i8,
                "-1" => -1i8,
                other => {
                    return Err(Error::Format {
                        line: idx + 1,
                        message: format!("expected +1/-1, got `{other}`"),
                    })
                }
            };
            rows.push(v);
            entries += 1;
        }
        if entries != n {
            return Err(Error::Format {
                line: idx + 1,
                message: format!("row has {entries} entries, expected {n}"),
            });
        }
        row_count += 1;
    }
    if row_count != m {
        return Err(Error::Format {
            line: 0,
            message: format!("header declares m={m} rows but file has {row_count}"),
        });
    }
    Ok(SampleSet::from_rows(n, rows, seed, String::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Rbm;

    #[test]
    fn empty_sample_set() {
        let m = IsingModel::new(2);
        let s = sample_exact(&m, 0, 7).unwrap();
        assert_eq!(s.n_rows(), 0);
    }

    #[test]
    fn free_spin_mean_concentrates() {
        let m = IsingModel::new(1);
        let s = sample_exact(&m, 1_000_000, 12345).unwrap();
        // 3.9 sigma for a million fair coin flips.
        assert!(s.column_mean(0).abs() <= 4e-3, "{}", s.column_mean(0));
    }

    #[test]
    fn example1_rbm_pair_uncorrelated() {
        let mut rbm = Rbm::new(2, 2);
        rbm.set_weight(0, 0, 1.0);
        rbm.set_weight(1, 0, 1.0);
        rbm.set_weight(0, 1, -1.0);
        rbm.set_weight(1, 1, 1.0);
        let s = sample_exact(&rbm.as_ising(), 1_000_000, 99).unwrap();
        let corr: i64 = s.rows().map(|r| (r[0] as i64) * (r[1] as i64)).sum();
        let corr = corr as f64 / s.n_rows() as f64;
        assert!(corr.abs() <= 4e-3, "{corr}");
    }

    #[test]
    fn replay_is_deterministic() {
        let mut m = IsingModel::new(3);
        m.set_weight(0, 1, 0.4);
        m.set_field(2, 0.3);
        let a = sample_exact(&m, 500, 42).unwrap();
        let b = sample_exact(&m, 500, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_gibbs(&m, 50, 10, 2, 42);
        let d = sample_gibbs(&m, 50, 10, 2, 42);
        assert_eq!(c, d);
    }

    #[test]
    fn gibbs_zero_interactions_matches_bias() {
        let mut m = IsingModel::new(2);
        m.set_field(0, 0.6);
        m.set_field(1, -0.3);
        let s = sample_gibbs(&m, 40_000, 5, 1, 7);
        assert!((s.column_mean(0) - 0.6f64.tanh()).abs() < 0.02);
        assert!((s.column_mean(1) - (-0.3f64).tanh()).abs() < 0.02);
    }

    #[test]
    fn counted_samples_match_probabilities() {
        let mut m = IsingModel::new(4);
        m.set_weight(0, 1, 0.5);
        m.set_field(2, 0.4);
        let counts = sample_counts(&m, 2_000_000, 11).unwrap();
        assert_eq!(counts.total, 2_000_000);
        assert_eq!(counts.counts.iter().sum::<u64>(), 2_000_000);
        let dist = observed_marginal(&m).unwrap();
        assert!(counts.tv_distance(&dist) < 3e-3);
    }

    #[test]
    fn histogram_agrees_with_counted_route() {
        let mut m = IsingModel::new(3);
        m.set_weight(0, 2, 0.8);
        let rows = sample_exact(&m, 50_000, 5).unwrap();
        let hist = rows.histogram();
        assert_eq!(hist.total, 50_000);
        let dist = observed_marginal(&m).unwrap();
        assert!(hist.tv_distance(&dist) < 0.02);
    }

    #[test]
    fn samples_file_round_trip() {
        let mut m = IsingModel::new(3);
        m.set_weight(0, 1, 0.4);
        let s = sample_exact(&m, 25, 3).unwrap();
        let text = write_samples(&s);
        let parsed = parse_samples(&text).unwrap();
        assert_eq!(parsed, s);
    }

    #[test]
    fn samples_file_rejects_garbage() {
        assert!(parse_samples("samples-v1 n=2 m=1 seed=0\n+1 0\n").is_err());
        assert!(parse_samples("samples-v1 n=2 m=2 seed=0\n+1 -1\n").is_err());
        assert!(parse_samples("rows n=2\n").is_err());
    }
}
