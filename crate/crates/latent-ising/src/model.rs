//! Domain types: Ising models, RBMs, MRF potentials, nondegeneracy
//! validation, and the `ising-v1` / `rbm-v1` / `mrf-v1` text formats.
//!
//! All types are immutable after construction and cheap to share across
//! threads; the operations here are pure.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Subset of variables encoded as a bitmask. Bit `i` set means variable `i`
/// is in the subset. Everything in this crate stays below 32 variables, so a
/// `u32` suffices.
pub type Subset = u32;

/// An Ising model: pairwise interactions `J`, external fields `h`, and a
/// per-node latent flag. The distribution on spin vectors `x ∈ {±1}^n` is
/// `Pr(x) ∝ exp(Σ_{i<j} J_ij x_i x_j + Σ_i h_i x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    n_nodes: usize,
    /// Canonical edge map keyed by `(i, j)` with `i < j`; zero-weight edges
    /// are never stored.
    interactions: BTreeMap<(usize, usize), f64>,
    fields: Vec<f64>,
    hidden_mask: Vec<bool>,
}

impl IsingModel {
    /// A model with `n` nodes, no interactions, and zero fields; all nodes
    /// observed.
    pub fn new(n_nodes: usize) -> Self {
        assert!(n_nodes > 0, "model must have at least one node");
        IsingModel {
            n_nodes,
            interactions: BTreeMap::new(),
            fields: vec![0.0; n_nodes],
            hidden_mask: vec![false; n_nodes],
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    /// Set the interaction weight between two distinct nodes. A weight of
    /// exactly zero removes the edge.
    pub fn set_weight(&mut self, i: usize, j: usize, w: f64) {
        assert!(i != j, "no self-interactions: node {i}");
        assert!(i < self.n_nodes && j < self.n_nodes);
        let key = (i.min(j), i.max(j));
        if w == 0.0 {
            self.interactions.remove(&key);
        } else {
            self.interactions.insert(key, w);
        }
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        let key = (i.min(j), i.max(j));
        self.interactions.get(&key).copied().unwrap_or(0.0)
    }

    pub fn set_field(&mut self, i: usize, h: f64) {
        self.fields[i] = h;
    }

    pub fn field(&self, i: usize) -> f64 {
        self.fields[i]
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn set_hidden(&mut self, i: usize, hidden: bool) {
        self.hidden_mask[i] = hidden;
    }

    pub fn is_hidden(&self, i: usize) -> bool {
        self.hidden_mask[i]
    }

    pub fn hidden_mask(&self) -> &[bool] {
        &self.hidden_mask
    }

    /// Indices of observed (non-latent) nodes, ascending.
    pub fn observed_nodes(&self) -> Vec<usize> {
        (0..self.n_nodes).filter(|&i| !self.hidden_mask[i]).collect()
    }

    pub fn n_observed(&self) -> usize {
        self.hidden_mask.iter().filter(|h| !**h).count()
    }

    /// Edges as `(i, j, w)` with `i < j`, in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.interactions.iter().map(|(&(i, j), &w)| (i, j, w))
    }

    pub fn n_edges(&self) -> usize {
        self.interactions.len()
    }

    /// Neighbors of `i` with the connecting weight.
    pub fn neighbors(&self, i: usize) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        for (&(a, b), &w) in &self.interactions {
            if a == i {
                out.push((b, w));
            } else if b == i {
                out.push((a, w));
            }
        }
        out
    }

    /// All weights and all fields nonnegative ("consistent" fields).
    pub fn is_ferromagnetic(&self) -> bool {
        self.interactions.values().all(|&w| w >= 0.0) && self.fields.iter().all(|&h| h >= 0.0)
    }

    /// Nonnegative weights with all fields nonpositive; this is the sign
    /// convention the partition module normalizes to.
    pub fn is_ferromagnetic_nonpositive_fields(&self) -> bool {
        self.interactions.values().all(|&w| w >= 0.0) && self.fields.iter().all(|&h| h <= 0.0)
    }

    /// The model under the global spin flip `x ↦ -x`: fields change sign,
    /// interactions are untouched. The partition function is invariant.
    pub fn spin_flipped(&self) -> IsingModel {
        let mut m = self.clone();
        for h in &mut m.fields {
            *h = -*h;
        }
        m
    }

    /// Replace all external fields.
    pub fn with_fields(&self, fields: Vec<f64>) -> IsingModel {
        assert_eq!(fields.len(), self.n_nodes);
        let mut m = self.clone();
        m.fields = fields;
        m
    }

    /// Absorb the external field into an extra spin: returns the
    /// `(n+1)`-node model with zero fields in which the new last node is
    /// connected to node `i` with weight `h_i`. Conditioned on the new node
    /// being `+1`, the law of the first `n` spins is unchanged.
    pub fn ghost_vertex(&self) -> IsingModel {
        let n = self.n_nodes;
        let mut m = IsingModel::new(n + 1);
        m.interactions = self.interactions.clone();
        m.hidden_mask[..n].copy_from_slice(&self.hidden_mask);
        for i in 0..n {
            if self.fields[i] != 0.0 {
                m.set_weight(i, n, self.fields[i]);
            }
        }
        m
    }
}

/// A Restricted Boltzmann Machine: a bipartite Ising model with `n` observed
/// and `m` hidden nodes. `Pr(x, y) ∝ exp(xᵀJy + h⁽¹⁾·x + h⁽²⁾·y)`.
///
/// The bipartite structure is enforced by construction: there is no way to
/// store an observed–observed or hidden–hidden weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Rbm {
    n_observed: usize,
    n_hidden: usize,
    /// Sparse weights keyed by `(observed, hidden)` with local indices.
    weights: BTreeMap<(usize, usize), f64>,
    fields_observed: Vec<f64>,
    fields_hidden: Vec<f64>,
}

impl Rbm {
    pub fn new(n_observed: usize, n_hidden: usize) -> Self {
        assert!(n_observed > 0, "RBM needs at least one observed node");
        Rbm {
            n_observed,
            n_hidden,
            weights: BTreeMap::new(),
            fields_observed: vec![0.0; n_observed],
            fields_hidden: vec![0.0; n_hidden],
        }
    }

    pub fn n_observed(&self) -> usize {
        self.n_observed
    }

    pub fn n_hidden(&self) -> usize {
        self.n_hidden
    }

    pub fn set_weight(&mut self, observed: usize, hidden: usize, w: f64) {
        assert!(observed < self.n_observed && hidden < self.n_hidden);
        if w == 0.0 {
            self.weights.remove(&(observed, hidden));
        } else {
            self.weights.insert((observed, hidden), w);
        }
    }

    pub fn weight(&self, observed: usize, hidden: usize) -> f64 {
        self.weights.get(&(observed, hidden)).copied().unwrap_or(0.0)
    }

    pub fn set_observed_field(&mut self, i: usize, h: f64) {
        self.fields_observed[i] = h;
    }

    pub fn set_hidden_field(&mut self, j: usize, h: f64) {
        self.fields_hidden[j] = h;
    }

    pub fn observed_fields(&self) -> &[f64] {
        &self.fields_observed
    }

    pub fn hidden_fields(&self) -> &[f64] {
        &self.fields_hidden
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.weights.iter().map(|(&(i, j), &w)| (i, j, w))
    }

    /// The observed neighborhood of hidden unit `j` with weights, ascending
    /// by observed index.
    pub fn hidden_unit(&self, j: usize) -> Vec<(usize, f64)> {
        self.weights
            .iter()
            .filter(|&(&(_, h), _)| h == j)
            .map(|(&(i, _), &w)| (i, w))
            .collect()
    }

    /// Degree of hidden unit `j`.
    pub fn hidden_degree(&self, j: usize) -> usize {
        self.weights.keys().filter(|&&(_, h)| h == j).count()
    }

    pub fn is_ferromagnetic(&self) -> bool {
        self.weights.values().all(|&w| w >= 0.0)
            && self.fields_observed.iter().all(|&h| h >= 0.0)
            && self.fields_hidden.iter().all(|&h| h >= 0.0)
    }

    /// View the RBM as a general Ising model on `n + m` nodes: observed
    /// nodes keep their indices, hidden node `j` becomes node `n + j`, and
    /// the hidden mask marks exactly the last `m` nodes. The joint
    /// distribution is identical.
    pub fn as_ising(&self) -> IsingModel {
        let n = self.n_observed;
        let mut m = IsingModel::new(n + self.n_hidden);
        for (&(i, j), &w) in &self.weights {
            m.set_weight(i, n + j, w);
        }
        for (i, &h) in self.fields_observed.iter().enumerate() {
            m.set_field(i, h);
        }
        for (j, &h) in self.fields_hidden.iter().enumerate() {
            m.set_field(n + j, h);
        }
        for j in 0..self.n_hidden {
            m.set_hidden(n + j, true);
        }
        m
    }
}

/// A multilinear polynomial over `{±1}` variables stored as a map from
/// nonempty variable subsets to coefficients. Used as the potential of a
/// Markov random field: `Pr(x) ∝ exp(p(x))`.
///
/// The empty set is never stored; the constant term of a potential is not
/// identifiable and is fixed to zero by convention.
#[derive(Debug, Clone, PartialEq)]
pub struct MrfPotential {
    n_vars: usize,
    terms: BTreeMap<Subset, f64>,
}

impl MrfPotential {
    pub fn new(n_vars: usize) -> Self {
        assert!(n_vars > 0 && n_vars <= 32);
        MrfPotential {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Set the coefficient of `χ_S`. Zero removes the term; the empty set is
    /// rejected.
    pub fn set_term(&mut self, subset: Subset, coefficient: f64) {
        assert!(subset != 0, "constant term is fixed to zero");
        assert!(
            (subset >> self.n_vars) == 0,
            "subset {subset:#b} out of range for {} variables",
            self.n_vars
        );
        if coefficient == 0.0 {
            self.terms.remove(&subset);
        } else {
            self.terms.insert(subset, coefficient);
        }
    }

    pub fn add_term(&mut self, subset: Subset, coefficient: f64) {
        let c = self.coefficient(subset) + coefficient;
        self.set_term(subset, c);
    }

    pub fn coefficient(&self, subset: Subset) -> f64 {
        self.terms.get(&subset).copied().unwrap_or(0.0)
    }

    /// Terms in ascending bitmask order.
    pub fn terms(&self) -> impl Iterator<Item = (Subset, f64)> + '_ {
        self.terms.iter().map(|(&s, &c)| (s, c))
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest subset size carrying a nonzero coefficient; 0 for the zero
    /// polynomial.
    pub fn order(&self) -> usize {
        self.terms
            .keys()
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Evaluate at the configuration encoded by `config` (bit set = spin
    /// `+1`): `Σ_S p̂(S) · χ_S(x)` with `χ_S(x) = Π_{s∈S} x_s`.
    pub fn evaluate(&self, config: Subset) -> f64 {
        let mut total = 0.0;
        for (&s, &c) in &self.terms {
            // χ_S is -1 iff an odd number of S-variables are spin -1.
            let minus_ones = (s & !config) & s;
            if minus_ones.count_ones().is_multiple_of(2) {
                total += c;
            } else {
                total -= c;
            }
        }
        total
    }

    /// Drop terms with `|coefficient| <= eps`.
    pub fn truncated(&self, eps: f64) -> MrfPotential {
        let mut p = MrfPotential::new(self.n_vars);
        for (&s, &c) in &self.terms {
            if c.abs() > eps {
                p.terms.insert(s, c);
            }
        }
        p
    }

    /// The potential of the spin-flipped distribution `x ↦ -x`: odd-size
    /// subsets change sign.
    pub fn spin_flipped(&self) -> MrfPotential {
        let mut p = MrfPotential::new(self.n_vars);
        for (&s, &c) in &self.terms {
            let c = if s.count_ones() % 2 == 1 { -c } else { c };
            p.terms.insert(s, c);
        }
        p
    }

    /// Add `shift` to every degree-1 coefficient (a uniform external field).
    pub fn with_uniform_field_shift(&self, shift: f64) -> MrfPotential {
        let mut p = self.clone();
        for i in 0..self.n_vars {
            p.add_term(1 << i, shift);
        }
        p
    }

    /// Coefficient-wise difference `self - other`.
    pub fn minus(&self, other: &MrfPotential) -> MrfPotential {
        assert_eq!(self.n_vars, other.n_vars);
        let mut p = self.clone();
        for (s, c) in other.terms() {
            p.add_term(s, -c);
        }
        p
    }

    /// Max absolute coefficient difference against `other`, over the union
    /// of both term sets.
    pub fn linf_distance(&self, other: &MrfPotential) -> f64 {
        let mut d: f64 = 0.0;
        for (s, c) in self.terms() {
            d = d.max((c - other.coefficient(s)).abs());
        }
        for (s, c) in other.terms() {
            d = d.max((c - self.coefficient(s)).abs());
        }
        d
    }

    /// MRF neighborhood of `i`: all `j ≠ i` sharing a term with `i`.
    pub fn neighborhood(&self, i: usize) -> Vec<usize> {
        let bit = 1u32 << i;
        let mut mask: Subset = 0;
        for &s in self.terms.keys() {
            if s & bit != 0 {
                mask |= s & !bit;
            }
        }
        (0..self.n_vars).filter(|&j| mask & (1 << j) != 0).collect()
    }
}

/// Nondegeneracy thresholds: `alpha` lower-bounds every nonzero interaction
/// magnitude, `beta` upper-bounds each node's L1 interaction-plus-field mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NondegeneracyParams {
    pub alpha: f64,
    pub beta: f64,
}

impl NondegeneracyParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0) || !(beta > 0.0) {
            return Err(Error::Parameter(format!(
                "alpha and beta must be positive, got alpha={alpha}, beta={beta}"
            )));
        }
        if alpha > beta {
            return Err(Error::Parameter(format!(
                "alpha={alpha} exceeds beta={beta}"
            )));
        }
        Ok(NondegeneracyParams { alpha, beta })
    }
}

/// Which nodes and edges violate the nondegeneracy clauses.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NondegeneracyReport {
    /// Edges whose nonzero weight magnitude is at most `alpha`.
    pub weak_edges: Vec<(usize, usize, f64)>,
    /// Nodes whose L1 mass `Σ_j |J_ij| + |h_i|` exceeds `beta`, with the
    /// mass.
    pub overloaded_nodes: Vec<(usize, f64)>,
}

impl NondegeneracyReport {
    pub fn passes(&self) -> bool {
        self.weak_edges.is_empty() && self.overloaded_nodes.is_empty()
    }
}

/// Check `(alpha, beta)`-nondegeneracy: every nonzero `|J_ij| > alpha` and
/// every node's `Σ_j |J_ij| + |h_i| <= beta`. The report lists offenders.
pub fn validate_nondegeneracy(
    model: &IsingModel,
    params: &NondegeneracyParams,
) -> NondegeneracyReport {
    let mut report = NondegeneracyReport::default();
    let mut mass = model.fields.iter().map(|h| h.abs()).collect::<Vec<_>>();
    for (i, j, w) in model.edges() {
        if w.abs() <= params.alpha {
            report.weak_edges.push((i, j, w));
        }
        mass[i] += w.abs();
        mass[j] += w.abs();
    }
    for (i, &m) in mass.iter().enumerate() {
        if m > params.beta {
            report.overloaded_nodes.push((i, m));
        }
    }
    report
}

/// Every threshold appearing in the learners' guarantees. Defaults come from
/// the theorem formulas (see [`crate::structure::default_config`]); each
/// field may be overridden before use.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerConfig {
    /// Minimum nonzero interaction magnitude.
    pub alpha: f64,
    /// Maximum per-node L1 interaction-plus-field mass.
    pub beta: f64,
    /// Bound on the size of any observed node's induced Markov blanket.
    pub d2: usize,
    /// Maximum graph distance from a node to a member of its blanket along
    /// paths with latent interiors. Pure RBMs have `ell = 2` (one hidden
    /// node on the path); fully observed models have `ell = 1`.
    pub ell: usize,
    /// Influence-gap threshold used by both learners.
    pub eta: f64,
    /// Greedy budget (number of rounds).
    pub k: usize,
    /// Sample count.
    pub m_samples: u64,
    /// Failure probability.
    pub delta: f64,
    /// Uniform influence-estimation tolerance.
    pub epsilon: f64,
}

// ---------------------------------------------------------------------------
// Text formats.
//
// Header line `format=ising-v1` / `format=rbm-v1` / `format=mrf-v1`, then
// `n=<int>` (plus `m=<int>` for RBMs), then one record per line. Indices are
// 1-based. Unknown records are an error.
// ---------------------------------------------------------------------------

fn fmt_f64(x: f64) -> String {
    // Shortest representation that round-trips; keeps files byte-stable.
    format!("{x}")
}

/// Serialize to the `ising-v1` format. Records: `edge i j w`, `field i h`
/// (zero fields omitted), `hidden i` for latent nodes.
pub fn write_ising(model: &IsingModel) -> String {
    let mut out = String::new();
    out.push_str("format=ising-v1\n");
    let _ = writeln!(out, "n={}", model.n_nodes());
    for (i, j, w) in model.edges() {
        let _ = writeln!(out, "edge {} {} {}", i + 1, j + 1, fmt_f64(w));
    }
    for (i, &h) in model.fields.iter().enumerate() {
        if h != 0.0 {
            let _ = writeln!(out, "field {} {}", i + 1, fmt_f64(h));
        }
    }
    for (i, &hid) in model.hidden_mask.iter().enumerate() {
        if hid {
            let _ = writeln!(out, "hidden {}", i + 1);
        }
    }
    out
}

/// Serialize to the `rbm-v1` format. Records: `edge i j w` (observed i,
/// hidden j), `field1 i h`, `field2 j h`.
pub fn write_rbm(rbm: &Rbm) -> String {
    let mut out = String::new();
    out.push_str("format=rbm-v1\n");
    let _ = writeln!(out, "n={}", rbm.n_observed());
    let _ = writeln!(out, "m={}", rbm.n_hidden());
    for (i, j, w) in rbm.edges() {
        let _ = writeln!(out, "edge {} {} {}", i + 1, j + 1, fmt_f64(w));
    }
    for (i, &h) in rbm.fields_observed.iter().enumerate() {
        if h != 0.0 {
            let _ = writeln!(out, "field1 {} {}", i + 1, fmt_f64(h));
        }
    }
    for (j, &h) in rbm.fields_hidden.iter().enumerate() {
        if h != 0.0 {
            let _ = writeln!(out, "field2 {} {}", j + 1, fmt_f64(h));
        }
    }
    out
}

/// Serialize to the `mrf-v1` format. Records: `term i1,i2,...,ik c`.
pub fn write_mrf(p: &MrfPotential) -> String {
    let mut out = String::new();
    out.push_str("format=mrf-v1\n");
    let _ = writeln!(out, "n={}", p.n_vars());
    for (s, c) in p.terms() {
        let vars: Vec<String> = (0..p.n_vars())
            .filter(|&i| s & (1 << i) != 0)
            .map(|i| (i + 1).to_string())
            .collect();
        let _ = writeln!(out, "term {} {}", vars.join(","), fmt_f64(c));
    }
    out
}

/// Any of the three model kinds; what a model file parses to.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelFile {
    Ising(IsingModel),
    Rbm(Rbm),
    Mrf(MrfPotential),
}

struct LineParser<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> LineParser<'a> {
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (idx, line) in self.lines.by_ref() {
            let line = line.trim();
            if !line.is_empty() && !line.starts_with('#') {
                return Some((idx + 1, line));
            }
        }
        None
    }
}

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::Format {
        line,
        message: message.into(),
    }
}

fn parse_kv(line_no: usize, line: &str, key: &str) -> Result<usize> {
    let rest = line
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| format_err(line_no, format!("expected `{key}=<int>`, got `{line}`")))?;
    rest.trim()
        .parse::<usize>()
        .map_err(|e| format_err(line_no, format!("bad integer in `{line}`: {e}")))
}

fn parse_index(line_no: usize, token: &str, n: usize) -> Result<usize> {
    let idx: usize = token
        .parse()
        .map_err(|e| format_err(line_no, format!("bad index `{token}`: {e}")))?;
    if idx == 0 || idx > n {
        return Err(format_err(
            line_no,
            format!("index {idx} out of range 1..={n}"),
        ));
    }
    Ok(idx - 1)
}

fn parse_real(line_no: usize, token: &str) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|e| format_err(line_no, format!("bad real `{token}`: {e}")))
}

/// Parse a model file in any of the three formats.
pub fn parse_model(text: &str) -> Result<ModelFile> {
    let mut parser = LineParser {
        lines: text.lines().enumerate(),
    };
    let (line_no, header) = parser
        .next_content()
        .ok_or_else(|| format_err(0, "empty model file"))?;
    let format = header
        .strip_prefix("format=")
        .ok_or_else(|| format_err(line_no, format!("expected `format=...`, got `{header}`")))?;
    match format {
        "ising-v1" => parse_ising_body(parser).map(ModelFile::Ising),
        "rbm-v1" => parse_rbm_body(parser).map(ModelFile::Rbm),
        "mrf-v1" => parse_mrf_body(parser).map(ModelFile::Mrf),
        other => Err(format_err(line_no, format!("unknown format `{other}`"))),
    }
}

fn parse_ising_body(mut parser: LineParser) -> Result<IsingModel> {
    let (line_no, line) = parser
        .next_content()
        .ok_or_else(|| format_err(0, "missing `n=` line"))?;
    let n = parse_kv(line_no, line, "n")?;
    if n == 0 {
        return Err(format_err(line_no, "n must be positive"));
    }
    let mut model = IsingModel::new(n);
    while let Some((line_no, line)) = parser.next_content() {
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("edge") => {
                let (i, j, w) = parse_edge_tokens(line_no, &mut tokens, n, n)?;
                if i == j {
                    return Err(format_err(line_no, format!("self-edge on node {}", i + 1)));
                }
                model.set_weight(i, j, w);
            }
            Some("field") => {
                let i = parse_index(line_no, tokens.next().unwrap_or(""), n)?;
                let h = parse_real(line_no, tokens.next().unwrap_or(""))?;
                model.set_field(i, h);
            }
            Some("hidden") => {
                let i = parse_index(line_no, tokens.next().unwrap_or(""), n)?;
                model.set_hidden(i, true);
            }
            Some(other) => {
                return Err(format_err(line_no, format!("unknown record `{other}`")));
            }
            None => unreachable!("blank lines are skipped"),
        }
        if tokens.next().is_some() {
            return Err(format_err(line_no, format!("trailing tokens in `{line}`")));
        }
    }
    Ok(model)
}

fn parse_edge_tokens(
    line_no: usize,
    tokens: &mut std::str::SplitWhitespace,
    n_left: usize,
    n_right: usize,
) -> Result<(usize, usize, f64)> {
    let i = parse_index(line_no, tokens.next().unwrap_or(""), n_left)?;
    let j = parse_index(line_no, tokens.next().unwrap_or(""), n_right)?;
    let w = parse_real(line_no, tokens.next().unwrap_or(""))?;
    Ok((i, j, w))
}

fn parse_rbm_body(mut parser: LineParser) -> Result<Rbm> {
    let (line_no, line) = parser
        .next_content()
        .ok_or_else(|| format_err(0, "missing `n=` line"))?;
    let n = parse_kv(line_no, line, "n")?;
    let (line_no, line) = parser
        .next_content()
        .ok_or_else(|| format_err(0, "missing `m=` line"))?;
    let m = parse_kv(line_no, line, "m")?;
    if n == 0 {
        return Err(format_err(line_no, "n must be positive"));
    }
    let mut rbm = Rbm::new(n, m);
    while let Some((line_no, line)) = parser.next_content() {
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("edge") => {
                let (i, j, w) = parse_edge_tokens(line_no, &mut tokens, n, m)?;
                rbm.set_weight(i, j, w);
            }
            Some("field1") => {
                let i = parse_index(line_no, tokens.next().unwrap_or(""), n)?;
                let h = parse_real(line_no, tokens.next().unwrap_or(""))?;
                rbm.set_observed_field(i, h);
            }
            Some("field2") => {
                let j = parse_index(line_no, tokens.next().unwrap_or(""), m)?;
                let h = parse_real(line_no, tokens.next().unwrap_or(""))?;
                rbm.set_hidden_field(j, h);
            }
            Some(other) => {
                return Err(format_err(line_no, format!("unknown record `{other}`")));
            }
            None => unreachable!(),
        }
        if tokens.next().is_some() {
            return Err(format_err(line_no, format!("trailing tokens in `{line}`")));
        }
    }
    Ok(rbm)
}

fn parse_mrf_body(mut parser: LineParser) -> Result<MrfPotential> {
    let (line_no, line) = parser
        .next_content()
        .ok_or_else(|| format_err(0, "missing `n=` line"))?;
    let n = parse_kv(line_no, line, "n")?;
    if n == 0 || n > 32 {
        return Err(format_err(line_no, format!("n={n} out of range 1..=32")));
    }
    let mut p = MrfPotential::new(n);
    while let Some((line_no, line)) = parser.next_content() {
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("term") => {
                let vars = tokens.next().unwrap_or("");
                let c = parse_real(line_no, tokens.next().unwrap_or(""))?;
                let mut subset: Subset = 0;
                for tok in vars.split(',') {
                    let i = parse_index(line_no, tok, n)?;
                    if subset & (1 << i) != 0 {
                        return Err(format_err(
                            line_no,
                            format!("repeated variable {} in term", i + 1),
                        ));
                    }
                    subset |= 1 << i;
                }
                if subset == 0 {
                    return Err(format_err(line_no, "empty term"));
                }
                p.set_term(subset, c);
            }
            Some(other) => {
                return Err(format_err(line_no, format!("unknown record `{other}`")));
            }
            None => unreachable!(),
        }
        if tokens.next().is_some() {
            return Err(format_err(line_no, format!("trailing tokens in `{line}`")));
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rbm_becomes_empty_ising() {
        let rbm = Rbm::new(3, 2);
        let ising = rbm.as_ising();
        assert_eq!(ising.n_nodes(), 5);
        assert_eq!(ising.n_edges(), 0);
        assert!(ising.fields().iter().all(|&h| h == 0.0));
        assert_eq!(ising.hidden_mask(), &[false, false, false, true, true]);
    }

    #[test]
    fn two_by_two_rbm_as_ising_keeps_edges_and_mask() {
        // Two observed, two hidden, weights (1,1) and (-1,1).
        let mut rbm = Rbm::new(2, 2);
        rbm.set_weight(0, 0, 1.0);
        rbm.set_weight(1, 0, 1.0);
        rbm.set_weight(0, 1, -1.0);
        rbm.set_weight(1, 1, 1.0);
        let ising = rbm.as_ising();
        assert_eq!(ising.n_nodes(), 4);
        assert_eq!(ising.weight(0, 2), 1.0);
        assert_eq!(ising.weight(1, 2), 1.0);
        assert_eq!(ising.weight(0, 3), -1.0);
        assert_eq!(ising.weight(1, 3), 1.0);
        assert_eq!(ising.n_edges(), 4);
        assert_eq!(ising.hidden_mask(), &[false, false, true, true]);
    }

    #[test]
    fn ghost_vertex_moves_fields_to_edges() {
        let mut m = IsingModel::new(2);
        m.set_field(0, 0.5);
        let g = m.ghost_vertex();
        assert_eq!(g.n_nodes(), 3);
        assert!(g.fields().iter().all(|&h| h == 0.0));
        assert_eq!(g.weight(0, 2), 0.5);
        assert_eq!(g.weight(1, 2), 0.0);
    }

    #[test]
    fn ghost_vertex_on_zero_fields_is_isolated() {
        let mut m = IsingModel::new(3);
        m.set_weight(0, 1, 0.3);
        let g = m.ghost_vertex();
        assert_eq!(g.n_edges(), 1);
        assert_eq!(g.weight(0, 1), 0.3);
    }

    #[test]
    fn nondegeneracy_passes_empty_model() {
        let m = IsingModel::new(4);
        let params = NondegeneracyParams::new(0.5, 1.0).unwrap();
        assert!(validate_nondegeneracy(&m, &params).passes());
    }

    #[test]
    fn nondegeneracy_flags_weak_edge() {
        let mut m = IsingModel::new(2);
        m.set_weight(0, 1, 0.05);
        let params = NondegeneracyParams::new(0.1, 1.0).unwrap();
        let report = validate_nondegeneracy(&m, &params);
        assert_eq!(report.weak_edges, vec![(0, 1, 0.05)]);
        assert!(report.overloaded_nodes.is_empty());
    }

    #[test]
    fn nondegeneracy_flags_overloaded_node() {
        let mut m = IsingModel::new(3);
        m.set_weight(0, 1, 1.0);
        m.set_weight(0, 2, 1.5);
        m.set_field(0, 0.6);
        let params = NondegeneracyParams::new(0.5, 3.0).unwrap();
        let report = validate_nondegeneracy(&m, &params);
        assert!(report.weak_edges.is_empty());
        assert_eq!(report.overloaded_nodes.len(), 1);
        assert_eq!(report.overloaded_nodes[0].0, 0);
        assert!((report.overloaded_nodes[0].1 - 3.1).abs() < 1e-12);
    }

    #[test]
    fn nondegeneracy_alpha_beta_validation() {
        assert!(NondegeneracyParams::new(2.0, 1.0).is_err());
        assert!(NondegeneracyParams::new(0.0, 1.0).is_err());
    }

    #[test]
    fn potential_evaluate_matches_parity() {
        let mut p = MrfPotential::new(3);
        p.set_term(0b011, 0.7);
        p.set_term(0b100, -0.2);
        // x = (+1, -1, +1): χ_{12} = -1, χ_{3} = +1.
        assert!((p.evaluate(0b101) - (-0.7 - 0.2)).abs() < 1e-15);
        // x = (+1, +1, -1).
        assert!((p.evaluate(0b011) - (0.7 + 0.2)).abs() < 1e-15);
        assert_eq!(p.order(), 2);
    }

    #[test]
    fn potential_neighborhood_from_terms() {
        let mut p = MrfPotential::new(4);
        p.set_term(0b0111, 0.1);
        p.set_term(0b1000, 0.5);
        assert_eq!(p.neighborhood(0), vec![1, 2]);
        assert_eq!(p.neighborhood(3), Vec::<usize>::new());
    }

    #[test]
    fn model_files_round_trip() {
        let mut m = IsingModel::new(3);
        m.set_weight(0, 2, 0.25);
        m.set_field(1, -0.125);
        m.set_hidden(2, true);
        let text = write_ising(&m);
        match parse_model(&text).unwrap() {
            ModelFile::Ising(parsed) => assert_eq!(parsed, m),
            other => panic!("wrong kind: {other:?}"),
        }

        let mut rbm = Rbm::new(2, 1);
        rbm.set_weight(0, 0, 1.5);
        rbm.set_weight(1, 0, 0.5);
        rbm.set_observed_field(0, 0.1);
        rbm.set_hidden_field(0, -0.3);
        let text = write_rbm(&rbm);
        match parse_model(&text).unwrap() {
            ModelFile::Rbm(parsed) => assert_eq!(parsed, rbm),
            other => panic!("wrong kind: {other:?}"),
        }

        let mut p = MrfPotential::new(3);
        p.set_term(0b011, 0.7);
        p.set_term(0b111, -0.1);
        let text = write_mrf(&p);
        match parse_model(&text).unwrap() {
            ModelFile::Mrf(parsed) => assert_eq!(parsed, p),
            other => panic!("wrong kind: {other:?}"),
        }
    }

    #[test]
    fn unknown_record_is_an_error() {
        let text = "format=ising-v1\nn=2\nvertex 1 0.5\n";
        let err = parse_model(text).unwrap_err();
        assert!(matches!(err, Error::Format { line: 3, .. }));
    }

    #[test]
    fn out_of_range_index_is_an_error() {
        let text = "format=ising-v1\nn=2\nedge 1 3 0.5\n";
        assert!(parse_model(text).is_err());
    }
}
