//! Seeded random instances with ground-truth blankets.
//!
//! Generators draw weights strictly above `alpha` and cap per-node degrees
//! so the L1 mass stays at or below `beta`; emitted models therefore pass
//! nondegeneracy validation by construction. Alongside each model comes the
//! graph-theoretic blanket of every observed node (the set of observed
//! nodes reachable through all-latent paths), which for nondegenerate
//! ferromagnetic models is exactly the induced MRF neighborhood.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::model::{IsingModel, MrfPotential, NondegeneracyParams, Rbm, Subset};

/// A generated instance: the model, its RBM form when bipartite, and the
/// ground truth the learners are scored against.
#[derive(Debug, Clone)]
pub struct GeneratedModel {
    pub model: IsingModel,
    pub rbm: Option<Rbm>,
    /// Blanket of each observed node, in observed-local indices.
    pub blankets: Vec<Vec<usize>>,
    /// Max blanket size (at least 1 so learner configs stay valid).
    pub d2: usize,
    /// Max latent path length from a node to a blanket member.
    pub ell: usize,
    /// Tightest nondegeneracy parameters the instance satisfies.
    pub alpha_true: f64,
    pub beta_true: f64,
}

fn draw_open(rng: &mut ChaCha12Rng, lo: f64, hi: f64) -> f64 {
    // Uniform in (lo, hi]: keeps weights strictly above the lower bound.
    lo + (hi - lo) * (1.0 - rng.random::<f64>())
}

fn beta_true_of(model: &IsingModel) -> f64 {
    let mut mass: Vec<f64> = model.fields().iter().map(|h| h.abs()).collect();
    for (i, j, w) in model.edges() {
        mass[i] += w.abs();
        mass[j] += w.abs();
    }
    mass.into_iter().fold(0.0, f64::max)
}

fn alpha_true_of(model: &IsingModel) -> f64 {
    model
        .edges()
        .map(|(_, _, w)| w.abs())
        .fold(f64::INFINITY, f64::min)
}

/// Blanket of every observed node through all-latent paths, with the max
/// path length. Observed-local indexing.
pub fn latent_blankets(model: &IsingModel) -> (Vec<Vec<usize>>, usize) {
    let n = model.n_nodes();
    let observed = model.observed_nodes();
    let local: std::collections::BTreeMap<usize, usize> = observed
        .iter()
        .enumerate()
        .map(|(pos, &g)| (g, pos))
        .collect();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, j, _) in model.edges() {
        adjacency[i].push(j);
        adjacency[j].push(i);
    }
    let mut blankets = vec![Vec::new(); observed.len()];
    let mut max_len = 1usize;
    for (pos, &start) in observed.iter().enumerate() {
        let mut dist = vec![usize::MAX; n];
        dist[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        let mut reach: Vec<usize> = Vec::new();
        while let Some(u) = queue.pop_front() {
            for &v in &adjacency[u] {
                if v == start || dist[v] != usize::MAX {
                    continue;
                }
                dist[v] = dist[u] + 1;
                if model.is_hidden(v) {
                    queue.push_back(v);
                } else {
                    reach.push(v);
                    max_len = max_len.max(dist[v]);
                }
            }
        }
        reach.sort_unstable();
        blankets[pos] = reach.into_iter().map(|g| local[&g]).collect();
    }
    (blankets, max_len)
}

/// Parameters for random ferromagnetic RBMs.
#[derive(Debug, Clone)]
pub struct RbmGenParams {
    pub n_observed: usize,
    pub n_hidden: usize,
    pub hidden_degree_min: usize,
    pub hidden_degree_max: usize,
    pub observed_degree_max: usize,
    pub alpha: f64,
    pub beta: f64,
    pub weight_max: f64,
    /// Observed fields drawn uniformly from this closed interval.
    pub observed_field_range: (f64, f64),
    pub hidden_field_range: (f64, f64),
}

impl RbmGenParams {
    /// Ferromagnetic defaults at desk scale.
    pub fn ferromagnetic(n_observed: usize, n_hidden: usize) -> Self {
        RbmGenParams {
            n_observed,
            n_hidden,
            hidden_degree_min: 2,
            hidden_degree_max: 2,
            observed_degree_max: 2,
            alpha: 0.3,
            beta: 1.2,
            weight_max: 0.5,
            observed_field_range: (0.0, 0.2),
            hidden_field_range: (0.0, 0.0),
        }
    }
}

/// Draw a random nondegenerate RBM together with its ground truth.
pub fn gen_rbm(params: &RbmGenParams, seed: u64) -> Result<GeneratedModel> {
    let p = params;
    if p.n_observed == 0 || p.hidden_degree_min == 0 || p.hidden_degree_min > p.hidden_degree_max {
        return Err(Error::Parameter("inconsistent RBM generator sizes".into()));
    }
    if p.hidden_degree_max > p.n_observed {
        return Err(Error::Parameter(
            "hidden degree cannot exceed the observed count".into(),
        ));
    }
    if !(p.alpha > 0.0 && p.alpha < p.beta) {
        return Err(Error::Parameter("need 0 < alpha < beta".into()));
    }
    let field_mag = p
        .observed_field_range
        .0
        .abs()
        .max(p.observed_field_range.1.abs());
    let hidden_field_mag = p.hidden_field_range.0.abs().max(p.hidden_field_range.1.abs());
    let w_cap = p
        .weight_max
        .min((p.beta - field_mag) / p.observed_degree_max as f64)
        .min((p.beta - hidden_field_mag) / p.hidden_degree_max as f64);
    if !(w_cap > p.alpha) {
        return Err(Error::Parameter(format!(
            "infeasible: weight cap {w_cap:.4} does not exceed alpha {}",
            p.alpha
        )));
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut rbm = Rbm::new(p.n_observed, p.n_hidden);
    let mut observed_degree = vec![0usize; p.n_observed];
    for j in 0..p.n_hidden {
        let degree = rng.random_range(p.hidden_degree_min..=p.hidden_degree_max);
        let mut available: Vec<usize> = (0..p.n_observed)
            .filter(|&i| observed_degree[i] < p.observed_degree_max)
            .collect();
        if available.len() < degree {
            return Err(Error::Parameter(
                "observed degree budget exhausted; lower n_hidden or raise observed_degree_max"
                    .into(),
            ));
        }
        for _ in 0..degree {
            let pick = rng.random_range(0..available.len());
            let i = available.swap_remove(pick);
            observed_degree[i] += 1;
            rbm.set_weight(i, j, draw_open(&mut rng, p.alpha, w_cap));
        }
    }
    for i in 0..p.n_observed {
        let (lo, hi) = p.observed_field_range;
        let h = if hi > lo { rng.random_range(lo..=hi) } else { lo };
        rbm.set_observed_field(i, h);
    }
    for j in 0..p.n_hidden {
        let (lo, hi) = p.hidden_field_range;
        let h = if hi > lo { rng.random_range(lo..=hi) } else { lo };
        rbm.set_hidden_field(j, h);
    }
    let model = rbm.as_ising();
    let (blankets, ell) = latent_blankets(&model);
    let d2 = blankets.iter().map(Vec::len).max().unwrap_or(0).max(1);
    Ok(GeneratedModel {
        alpha_true: alpha_true_of(&model),
        beta_true: beta_true_of(&model),
        rbm: Some(rbm),
        blankets,
        d2,
        ell: ell.max(2),
        model,
    })
}

/// A linear latent chain: two observed endpoints joined by `path_len - 1`
/// hidden nodes, plus isolated observed spectators. Blanket of each endpoint
/// is exactly the other endpoint, at latent path length `path_len`.
pub fn gen_latent_chain(
    path_len: usize,
    n_spectators: usize,
    alpha: f64,
    beta: f64,
    seed: u64,
) -> Result<GeneratedModel> {
    if path_len < 2 {
        return Err(Error::Parameter("chain needs path length >= 2".into()));
    }
    let n_hidden = path_len - 1;
    let n = 2 + n_spectators + n_hidden;
    let w_cap = beta / 2.0;
    if !(w_cap > alpha) {
        return Err(Error::Parameter("infeasible: beta/2 must exceed alpha".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut model = IsingModel::new(n);
    // Nodes: 0 and 1 observed endpoints, 2..2+spectators observed, rest hidden.
    let first_hidden = 2 + n_spectators;
    for k in 0..n_hidden {
        model.set_hidden(first_hidden + k, true);
    }
    let mut path: Vec<usize> = Vec::with_capacity(path_len + 1);
    path.push(0);
    for k in 0..n_hidden {
        path.push(first_hidden + k);
    }
    path.push(1);
    for pair in path.windows(2) {
        model.set_weight(pair[0], pair[1], draw_open(&mut rng, alpha, w_cap));
    }
    let (blankets, ell) = latent_blankets(&model);
    Ok(GeneratedModel {
        alpha_true: alpha_true_of(&model),
        beta_true: beta_true_of(&model),
        rbm: None,
        blankets,
        d2: 1,
        ell,
        model,
    })
}

/// Parameters for general latent ferromagnetic Ising models: hidden nodes
/// may pair up (hidden–hidden edges) and observed–observed edges are
/// allowed.
#[derive(Debug, Clone)]
pub struct LatentGenParams {
    pub n_observed: usize,
    pub n_hidden: usize,
    pub alpha: f64,
    pub beta: f64,
    pub degree_max: usize,
    /// Probability that consecutive hidden nodes fuse into a two-node
    /// latent component.
    pub hidden_pair_prob: f64,
    /// Number of direct observed–observed edges to attempt.
    pub n_direct_edges: usize,
    pub observed_field_max: f64,
}

/// Draw a general latent ferromagnetic Ising model.
pub fn gen_latent_ising(params: &LatentGenParams, seed: u64) -> Result<GeneratedModel> {
    let p = params;
    if p.n_observed < 2 || p.degree_max < 2 {
        return Err(Error::Parameter("need at least 2 observed nodes and degree_max >= 2".into()));
    }
    let w_cap = (p.beta - p.observed_field_max) / p.degree_max as f64;
    if !(w_cap > p.alpha) {
        return Err(Error::Parameter(format!(
            "infeasible: weight cap {w_cap:.4} does not exceed alpha {}",
            p.alpha
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let n = p.n_observed + p.n_hidden;
    let mut model = IsingModel::new(n);
    for k in 0..p.n_hidden {
        model.set_hidden(p.n_observed + k, true);
    }
    let mut degree = vec![0usize; n];
    let add_edge = |model: &mut IsingModel,
                        degree: &mut Vec<usize>,
                        rng: &mut ChaCha12Rng,
                        a: usize,
                        b: usize|
     -> bool {
        if a == b || degree[a] >= p.degree_max || degree[b] >= p.degree_max {
            return false;
        }
        if model.weight(a, b) != 0.0 {
            return false;
        }
        model.set_weight(a, b, draw_open(rng, p.alpha, w_cap));
        degree[a] += 1;
        degree[b] += 1;
        true
    };

    // Latent components: singles or fused pairs, each end wired to one or
    // two observed nodes.
    let mut h = 0usize;
    while h < p.n_hidden {
        let a = p.n_observed + h;
        let fused = h + 1 < p.n_hidden && rng.random::<f64>() < p.hidden_pair_prob;
        if fused {
            let b = a + 1;
            add_edge(&mut model, &mut degree, &mut rng, a, b);
            for node in [a, b] {
                let obs = rng.random_range(0..p.n_observed);
                add_edge(&mut model, &mut degree, &mut rng, node, obs);
            }
            h += 2;
        } else {
            for _ in 0..2 {
                let obs = rng.random_range(0..p.n_observed);
                add_edge(&mut model, &mut degree, &mut rng, a, obs);
            }
            h += 1;
        }
    }
    for _ in 0..p.n_direct_edges {
        let a = rng.random_range(0..p.n_observed);
        let b = rng.random_range(0..p.n_observed);
        add_edge(&mut model, &mut degree, &mut rng, a, b);
    }
    for i in 0..p.n_observed {
        if p.observed_field_max > 0.0 {
            model.set_field(i, rng.random_range(0.0..=p.observed_field_max));
        }
    }
    let (blankets, ell) = latent_blankets(&model);
    let d2 = blankets.iter().map(Vec::len).max().unwrap_or(0).max(1);
    Ok(GeneratedModel {
        alpha_true: alpha_true_of(&model),
        beta_true: beta_true_of(&model),
        rbm: None,
        blankets,
        d2,
        ell: ell.max(1),
        model,
    })
}

/// Fully observed random ferromagnetic Ising model (for correlation-
/// inequality suites).
pub fn gen_ferro_ising(
    n: usize,
    edge_prob: f64,
    weight_range: (f64, f64),
    field_range: (f64, f64),
    seed: u64,
) -> IsingModel {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut model = IsingModel::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < edge_prob {
                model.set_weight(i, j, rng.random_range(weight_range.0..=weight_range.1));
            }
        }
    }
    for i in 0..n {
        if field_range.1 > field_range.0 {
            model.set_field(i, rng.random_range(field_range.0..=field_range.1));
        }
    }
    model
}

/// Random RBM with signed weights (for conversion round-trips; not
/// ferromagnetic in general).
pub fn gen_signed_rbm(
    n_observed: usize,
    n_hidden: usize,
    hidden_degree_max: usize,
    weight_mag: f64,
    field_mag: f64,
    seed: u64,
) -> Rbm {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut rbm = Rbm::new(n_observed, n_hidden);
    for j in 0..n_hidden {
        let degree = rng.random_range(1..=hidden_degree_max.min(n_observed));
        let mut available: Vec<usize> = (0..n_observed).collect();
        for _ in 0..degree {
            let pick = rng.random_range(0..available.len());
            let i = available.swap_remove(pick);
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            rbm.set_weight(i, j, sign * draw_open(&mut rng, 0.05, weight_mag));
        }
    }
    for i in 0..n_observed {
        rbm.set_observed_field(i, rng.random_range(-field_mag..=field_mag));
    }
    for j in 0..n_hidden {
        rbm.set_hidden_field(j, rng.random_range(-field_mag..=field_mag));
    }
    rbm
}

/// Random sparse MRF potential with terms up to the given order and
/// coefficients of magnitude in `[0.05, coeff_max]`.
pub fn gen_mrf(
    n: usize,
    order: usize,
    n_terms: usize,
    coeff_max: f64,
    seed: u64,
) -> MrfPotential {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut p = MrfPotential::new(n);
    let mut placed = 0usize;
    let mut guard = 0usize;
    while placed < n_terms && guard < 10_000 {
        guard += 1;
        let size = rng.random_range(1..=order.min(n));
        let mut subset: Subset = 0;
        let mut available: Vec<usize> = (0..n).collect();
        for _ in 0..size {
            let pick = rng.random_range(0..available.len());
            subset |= 1 << available.swap_remove(pick);
        }
        if p.coefficient(subset) != 0.0 {
            continue;
        }
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        p.set_term(subset, sign * draw_open(&mut rng, 0.05, coeff_max));
        placed += 1;
    }
    p
}

/// FNV-1a hash of a serialized artifact; identifies models in CSV rows.
pub fn content_hash(text: &str) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for byte in text.bytes() {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Assert the generated model really is `(alpha, beta)`-nondegenerate.
pub fn check_generated(gen: &GeneratedModel, alpha: f64, beta: f64) -> Result<()> {
    let params = NondegeneracyParams::new(alpha, beta)?;
    let report = crate::model::validate_nondegeneracy(&gen.model, &params);
    if !report.passes() {
        return Err(Error::Assumption(format!(
            "generated model violates nondegeneracy: {report:?}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_rbm_is_nondegenerate_and_reproducible() {
        let params = RbmGenParams::ferromagnetic(6, 3);
        let a = gen_rbm(&params, 11).unwrap();
        let b = gen_rbm(&params, 11).unwrap();
        assert_eq!(a.model, b.model);
        check_generated(&a, params.alpha, params.beta).unwrap();
        assert!(a.model.is_ferromagnetic());
        assert!(a.alpha_true > params.alpha);
        assert!(a.beta_true <= params.beta + 1e-12);
    }

    #[test]
    fn infeasible_parameters_rejected() {
        let mut params = RbmGenParams::ferromagnetic(4, 2);
        params.alpha = 0.7;
        params.beta = 0.8; // cap = (0.8 - 0.2)/2 = 0.3 < alpha
        assert!(gen_rbm(&params, 0).is_err());
    }

    #[test]
    fn rbm_blankets_match_shared_units() {
        let mut params = RbmGenParams::ferromagnetic(5, 2);
        params.hidden_degree_min = 2;
        params.hidden_degree_max = 2;
        let g = gen_rbm(&params, 3).unwrap();
        let rbm = g.rbm.as_ref().unwrap();
        for i in 0..5 {
            let mut expect: Vec<usize> = Vec::new();
            for j in 0..rbm.n_hidden() {
                let unit: Vec<usize> = rbm.hidden_unit(j).iter().map(|&(v, _)| v).collect();
                if unit.contains(&i) {
                    expect.extend(unit.iter().filter(|&&v| v != i));
                }
            }
            expect.sort_unstable();
            expect.dedup();
            assert_eq!(g.blankets[i], expect, "node {i}");
        }
        assert_eq!(g.ell, 2);
    }

    #[test]
    fn chain_blanket_is_far_endpoint() {
        let g = gen_latent_chain(3, 2, 0.3, 1.0, 5).unwrap();
        assert_eq!(g.blankets[0], vec![1]);
        assert_eq!(g.blankets[1], vec![0]);
        assert!(g.blankets[2].is_empty());
        assert_eq!(g.ell, 3);
    }

    #[test]
    fn latent_ising_blankets_consistent() {
        let params = LatentGenParams {
            n_observed: 5,
            n_hidden: 3,
            alpha: 0.25,
            beta: 1.5,
            degree_max: 3,
            hidden_pair_prob: 0.5,
            n_direct_edges: 2,
            observed_field_max: 0.2,
        };
        let g = gen_latent_ising(&params, 9).unwrap();
        check_generated(&g, params.alpha, params.beta).unwrap();
        // Blanket symmetry: j in blanket(i) iff i in blanket(j).
        for i in 0..5 {
            for &j in &g.blankets[i] {
                assert!(g.blankets[j].contains(&i));
            }
        }
    }

    #[test]
    fn hash_is_stable() {
        assert_eq!(content_hash("abc"), content_hash("abc"));
        assert_ne!(content_hash("abc"), content_hash("abd"));
    }
}
