//! Neighborhood (Markov blanket) learners for observed variables.
//!
//! Two algorithms, both driven by conditional-mean influence queries:
//!
//! * [`greedy_nbhd`] maximizes `Ĩ_i(S)` greedily for `k` rounds, then prunes
//!   `S_k` down to the members whose removal drops the influence by at least
//!   `eta`. For ferromagnetic nondegenerate models the influence is monotone
//!   submodular, so the greedy set provably captures the whole blanket.
//! * [`search_nbhd`] scans all subsets of size at most `d2` in
//!   size-then-lexicographic order and returns the first whose influence is
//!   `eta`-saturated (no single addition gains more than `eta`). Slower but
//!   needs fewer samples.
//!
//! Indices here are positions among the *observed* variables, i.e. the
//! sample column space. Exact-oracle variants run the identical control flow with
//! enumerated influences substituted for empirical ones.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exact::observed_marginal;
use crate::influence::{sample_bound, ExactInfluence, InfluenceSource, PackedSamples};
use crate::model::{IsingModel, LearnerConfig, Subset};
use crate::sampler::SampleSet;

/// Logistic function `σ(x) = 1 / (1 + e^{-x})`.
pub fn sigma(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// The influence-gap threshold guaranteed by nondegeneracy:
/// `η = α^ℓ σ(-2β) (1 - tanh β)^ℓ`, with `ℓ = 2` for RBM blankets (one
/// hidden node on every path) and general `ℓ` for latent paths.
pub fn gap_threshold(alpha: f64, beta: f64, ell: usize) -> f64 {
    alpha.powi(ell as i32) * sigma(-2.0 * beta) * (1.0 - beta.tanh()).powi(ell as i32)
}

/// Which learner a configuration is derived for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearnerKind {
    Greedy,
    Search,
}

/// Derive a full [`LearnerConfig`] from the nondegeneracy parameters.
///
/// `eta` comes from [`gap_threshold`]; the greedy budget is
/// `k = ⌈d2 · ln(4/η)⌉` capped at `n - 1` (a greedy run on `n` observed
/// variables can add at most `n - 1` distinct elements, and conditioning
/// sets never grow past that, so the cap changes nothing about the
/// guarantee); `epsilon` is `η/(4 d2)` for the greedy learner and `η/4` for
/// the search; `m_samples` is the corresponding theorem prescription. Every
/// field may be overridden afterwards.
pub fn default_config(
    alpha: f64,
    beta: f64,
    d2: usize,
    ell: usize,
    delta: f64,
    n: usize,
    learner: LearnerKind,
) -> Result<LearnerConfig> {
    if !(alpha > 0.0 && beta > 0.0 && alpha <= beta) {
        return Err(Error::Parameter(format!(
            "need 0 < alpha <= beta, got alpha={alpha}, beta={beta}"
        )));
    }
    if d2 == 0 || ell == 0 || n < 2 {
        return Err(Error::Parameter(
            "need d2 >= 1, ell >= 1 and at least two observed variables".into(),
        ));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Parameter(format!("delta must lie in (0,1), got {delta}")));
    }
    let eta = gap_threshold(alpha, beta, ell);
    let k_formula = (d2 as f64 * (4.0 / eta).ln()).ceil() as usize;
    let k = k_formula.min(n - 1).max(1);
    let (k, epsilon, m_samples) = match learner {
        LearnerKind::Greedy => {
            let epsilon = eta / (4.0 * d2 as f64);
            // Theorem prescription: 2^{2k+3} (d2/η)² (log n + k log(en/k)) log(4/δ).
            let m = theorem_samples(k, d2 as f64 / eta, delta, n, k)?;
            (k, epsilon, m)
        }
        LearnerKind::Search => {
            let epsilon = eta / 4.0;
            // 2^{2 d2 + 3} (1/η)² (log n + d2 log(en/d2)) log(4/δ).
            let m = theorem_samples(d2, 1.0 / eta, delta, n, d2)?;
            (d2, epsilon, m)
        }
    };
    Ok(LearnerConfig {
        alpha,
        beta,
        d2,
        ell,
        eta,
        k,
        m_samples,
        delta,
        epsilon,
    })
}

fn theorem_samples(
    exp_k: usize,
    inv_eta_factor: f64,
    delta: f64,
    n: usize,
    union_k: usize,
) -> Result<u64> {
    let n_f = n as f64;
    let k_f = union_k as f64;
    let union_term = if union_k == 0 {
        n_f.ln()
    } else {
        n_f.ln() + k_f * (std::f64::consts::E * n_f / k_f).ln()
    };
    let m =
        2f64.powi(2 * exp_k as i32 + 3) * inv_eta_factor.powi(2) * union_term * (4.0 / delta).ln();
    if !m.is_finite() || m > 9.0e18 {
        return Err(Error::Parameter(format!(
            "prescribed sample count {m:.3e} does not fit a u64; loosen the parameters"
        )));
    }
    Ok(m.ceil() as u64)
}

/// The sample-complexity lemma's bound at this configuration's
/// `(k, epsilon, delta)`; exposed alongside the theorem-statement default in
/// [`default_config`] since the two differ by fixed constant factors.
pub fn lemma_samples(config: &LearnerConfig, n: usize) -> Result<u64> {
    sample_bound(config.k, config.epsilon, config.delta, n)
}

/// Result of a neighborhood learner run for one node.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodEstimate {
    /// The target node (observed-variable index).
    pub node: usize,
    /// The learned blanket, ascending.
    pub members: Vec<usize>,
    /// Greedy path: `(added variable, Ĩ_i(S_t ∪ {j}))` per round. Empty for
    /// the subset-search learner.
    pub greedy_trace: Vec<(usize, f64)>,
    /// Variables added by the greedy loop and removed by pruning.
    pub pruned: Vec<usize>,
}

fn bits_of(mask: Subset) -> Vec<usize> {
    (0..32).filter(|&b| mask & (1 << b) != 0).collect()
}

/// Greedy neighborhood learner over any influence source.
pub fn greedy_nbhd_from_source<S: InfluenceSource>(
    source: &S,
    i: usize,
    config: &LearnerConfig,
) -> Result<NeighborhoodEstimate> {
    let n = source.n_vars();
    if i >= n {
        return Err(Error::Parameter(format!("target {i} out of range 0..{n}")));
    }
    if config.k == 0 || !(config.eta > 0.0) {
        return Err(Error::Parameter("greedy needs k >= 1 and eta > 0".into()));
    }
    let rounds = config.k.min(n - 1);
    let mut mask: Subset = 0;
    let mut trace = Vec::with_capacity(rounds);
    let mut current = None;
    for round in 0..rounds {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if j == i || mask & (1 << j) != 0 {
                continue;
            }
            // Undefined estimates are skipped: a candidate with no support
            // scores -inf rather than aborting the round.
            if let Some(v) = source.influence(i, mask | (1 << j)) {
                if best.is_none_or(|(_, bv)| v > bv) {
                    best = Some((j, v));
                }
            }
        }
        let (j, v) = best.ok_or(Error::GreedyExhausted { node: i, round })?;
        mask |= 1 << j;
        trace.push((j, v));
        current = Some(v);
    }

    let mut members = Vec::new();
    let mut pruned = Vec::new();
    if let Some(full_value) = current {
        for j in bits_of(mask) {
            let without = source.influence(i, mask & !(1 << j));
            match without {
                Some(w) if full_value - w >= config.eta => members.push(j),
                _ => pruned.push(j),
            }
        }
    }
    Ok(NeighborhoodEstimate {
        node: i,
        members,
        greedy_trace: trace,
        pruned,
    })
}

/// Greedy learner on sample rows.
pub fn greedy_nbhd(
    samples: &SampleSet,
    i: usize,
    config: &LearnerConfig,
) -> Result<NeighborhoodEstimate> {
    greedy_nbhd_from_source(&PackedSamples::new(samples), i, config)
}

/// Greedy learner with exact influences from the model's observed marginal
/// (the `ε = 0` harness variant). `i` indexes the observed variables.
pub fn greedy_nbhd_exact(
    model: &IsingModel,
    i: usize,
    config: &LearnerConfig,
) -> Result<NeighborhoodEstimate> {
    let marg = observed_marginal(model)?;
    greedy_nbhd_from_source(&ExactInfluence::new(&marg), i, config)
}

/// Subsets of `{0..n} \ {i}` of the given size in lexicographic order.
struct Combinations {
    pool: Vec<usize>,
    indices: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(pool: Vec<usize>, size: usize) -> Self {
        let done = size > pool.len();
        Combinations {
            pool,
            indices: (0..size).collect(),
            done,
        }
    }
}

impl Iterator for Combinations {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        if self.done {
            return None;
        }
        let mut mask: Subset = 0;
        for &idx in &self.indices {
            mask |= 1 << self.pool[idx];
        }
        // Advance to the next combination.
        let k = self.indices.len();
        if k == 0 {
            self.done = true;
            return Some(mask);
        }
        let n = self.pool.len();
        let mut pos = k;
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            if self.indices[pos] != pos + n - k {
                self.indices[pos] += 1;
                for t in pos + 1..k {
                    self.indices[t] = self.indices[t - 1] + 1;
                }
                break;
            }
        }
        Some(mask)
    }
}

/// Exhaustive subset-search learner over any influence source: returns the
/// first subset (by size, then lexicographic order) at which every single
/// addition gains at most `eta`.
pub fn search_nbhd_from_source<S: InfluenceSource>(
    source: &S,
    i: usize,
    config: &LearnerConfig,
) -> Result<NeighborhoodEstimate> {
    let n = source.n_vars();
    if i >= n {
        return Err(Error::Parameter(format!("target {i} out of range 0..{n}")));
    }
    if config.d2 == 0 {
        return Err(Error::Parameter("search needs d2 >= 1".into()));
    }
    let pool: Vec<usize> = (0..n).filter(|&j| j != i).collect();
    for size in 0..=config.d2.min(pool.len()) {
        for mask in Combinations::new(pool.clone(), size) {
            let base = match source.influence(i, mask) {
                Some(v) => v,
                None => continue,
            };
            let mut saturated = true;
            for &j in &pool {
                if mask & (1 << j) != 0 {
                    continue;
                }
                match source.influence(i, mask | (1 << j)) {
                    Some(v) if v - base <= config.eta => {}
                    // An undefined or too-large gain disqualifies the set.
                    _ => {
                        saturated = false;
                        break;
                    }
                }
            }
            if saturated {
                return Ok(NeighborhoodEstimate {
                    node: i,
                    members: bits_of(mask),
                    greedy_trace: Vec::new(),
                    pruned: Vec::new(),
                });
            }
        }
    }
    Err(Error::SearchFailed {
        node: i,
        d2: config.d2,
    })
}

/// Subset-search learner on sample rows.
pub fn search_nbhd(
    samples: &SampleSet,
    i: usize,
    config: &LearnerConfig,
) -> Result<NeighborhoodEstimate> {
    search_nbhd_from_source(&PackedSamples::new(samples), i, config)
}

/// Subset-search learner with exact influences.
pub fn search_nbhd_exact(
    model: &IsingModel,
    i: usize,
    config: &LearnerConfig,
) -> Result<NeighborhoodEstimate> {
    let marg = observed_marginal(model)?;
    search_nbhd_from_source(&ExactInfluence::new(&marg), i, config)
}

/// Run one learner for every observed variable over a shared source.
pub fn learn_all_from_source<S: InfluenceSource>(
    source: &S,
    config: &LearnerConfig,
    kind: LearnerKind,
) -> Result<Vec<NeighborhoodEstimate>> {
    (0..source.n_vars())
        .map(|i| match kind {
            LearnerKind::Greedy => greedy_nbhd_from_source(source, i, config),
            LearnerKind::Search => search_nbhd_from_source(source, i, config),
        })
        .collect()
}

// ---------------------------------------------------------------------------
// `structure-v1` text format: one `nbhd i: j1 j2 ...` line per node,
// ascending, 1-based indices.
// ---------------------------------------------------------------------------

pub fn write_structure(estimates: &[NeighborhoodEstimate]) -> String {
    let mut sorted: Vec<&NeighborhoodEstimate> = estimates.iter().collect();
    sorted.sort_by_key(|e| e.node);
    let mut out = String::from("structure-v1\n");
    for e in sorted {
        let members: Vec<String> = e.members.iter().map(|j| (j + 1).to_string()).collect();
        if members.is_empty() {
            let _ = writeln!(out, "nbhd {}:", e.node + 1);
        } else {
            let _ = writeln!(out, "nbhd {}: {}", e.node + 1, members.join(" "));
        }
    }
    out
}

/// Parse a `structure-v1` file into per-node member lists (0-based).
pub fn parse_structure(text: &str) -> Result<Vec<(usize, Vec<usize>)>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim() == "structure-v1" => {}
        other => {
            return Err(Error::Format {
                line: 1,
                message: format!("expected `structure-v1` header, got {other:?}"),
            })
        }
    }
    let mut out = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let rest = line.strip_prefix("nbhd ").ok_or_else(|| Error::Format {
            line: idx + 1,
            message: format!("expected `nbhd i: ...`, got `{line}`"),
        })?;
        let (node, members) = rest.split_once(':').ok_or_else(|| Error::Format {
            line: idx + 1,
            message: "missing `:`".into(),
        })?;
        let node: usize = node.trim().parse().map_err(|e| Error::Format {
            line: idx + 1,
            message: format!("bad node index: {e}"),
        })?;
        if node == 0 {
            return Err(Error::Format {
                line: idx + 1,
                message: "indices are 1-based".into(),
            });
        }
        let mut ms = Vec::new();
        for tok in members.split_whitespace() {
            let j: usize = tok.parse().map_err(|e| Error::Format {
                line: idx + 1,
                message: format!("bad member index: {e}"),
            })?;
            if j == 0 {
                return Err(Error::Format {
                    line: idx + 1,
                    message: "indices are 1-based".into(),
                });
            }
            ms.push(j - 1);
        }
        ms.sort_unstable();
        out.push((node - 1, ms));
    }
    out.sort_by_key(|(i, _)| *i);
    Ok(out)
}
