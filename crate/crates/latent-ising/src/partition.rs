//! Log-partition-function approximation through the fugacity polynomial.
//!
//! For a potential `g` the fugacity polynomial is
//! `P(λ) = Σ_x exp(g(x)) λ^{#{v : x_v = +1}}`; with `λ = e^{2h}` the
//! identity `Z(g + h·Σx) = e^{-nh} P(e^{2h})` holds. When the model behind
//! `g` is ferromagnetic with consistent nonpositive fields, `P` has no zeros
//! inside the unit disk, so the Taylor series of `log P` around `λ = 0`
//! converges geometrically and a short truncation already lands within the
//! guaranteed error. [`check_lee_yang`] locates the zeros numerically; the
//! sign convention is normalized so that all external fields sit at or below
//! `-H` and the evaluation point is `λ = e^{-2H} < 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{log_sum_exp, wht_coefficients_to_values, ENUMERATION_BOUND};
use crate::model::{MrfPotential, Subset};

/// Degree cap for the numerical zero check.
pub const ROOT_DEGREE_BOUND: usize = 40;

/// The equal-fugacity restriction of the partition polynomial, stored as
/// one log-coefficient per level: `log c_k = log Σ_{#+1(x)=k} exp(g(x))`.
#[derive(Debug, Clone)]
pub struct FugacityPolynomial {
    n_vars: usize,
    log_levels: Vec<f64>,
}

impl FugacityPolynomial {
    /// Build directly from per-level log-coefficients (degree = len - 1).
    pub fn from_log_levels(log_levels: Vec<f64>) -> Self {
        assert!(log_levels.len() >= 2, "need at least degree 1");
        assert!(log_levels.iter().all(|l| l.is_finite()));
        FugacityPolynomial {
            n_vars: log_levels.len() - 1,
            log_levels,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Degree of the polynomial (= number of variables).
    pub fn degree(&self) -> usize {
        self.n_vars
    }

    /// `log c_k` for `k = 0..=n`.
    pub fn log_levels(&self) -> &[f64] {
        &self.log_levels
    }

    /// `log P(λ)` for `λ > 0`, evaluated exactly by log-sum-exp.
    pub fn log_eval(&self, lambda: f64) -> f64 {
        assert!(lambda > 0.0);
        let terms: Vec<f64> = self
            .log_levels
            .iter()
            .enumerate()
            .map(|(k, &lc)| lc + k as f64 * lambda.ln())
            .collect();
        log_sum_exp(&terms)
    }
}

/// Group `exp(g(x))` by the number of `+1` spins. Exact per-level
/// log-sum-exp over all `2^n` configurations.
pub fn fugacity_polynomial(potential: &MrfPotential) -> Result<FugacityPolynomial> {
    let n = potential.n_vars();
    if n > ENUMERATION_BOUND {
        return Err(Error::Capacity {
            what: "fugacity polynomial",
            needed: n,
            bound: ENUMERATION_BOUND,
        });
    }
    let mut values = vec![0.0f64; 1 << n];
    for (s, c) in potential.terms() {
        values[s as usize] = c;
    }
    wht_coefficients_to_values(&mut values);
    let mut buckets: Vec<Vec<f64>> = vec![Vec::new(); n + 1];
    for (x, &g) in values.iter().enumerate() {
        buckets[x.count_ones() as usize].push(g);
    }
    let log_levels = buckets.iter().map(|b| log_sum_exp(b)).collect();
    Ok(FugacityPolynomial {
        n_vars: n,
        log_levels,
    })
}

/// A truncated Taylor expansion of `log P(λ)` around `λ = 0`.
#[derive(Debug, Clone)]
pub struct TaylorLogZ {
    /// Number of series terms kept.
    pub truncation_order: usize,
    /// Taylor coefficients of `log(P(λ)/c₀)`, degrees `1..=m`.
    pub log_coefficients: Vec<f64>,
    /// Evaluation point, in `(0, 1)`.
    pub lambda: f64,
    /// `log c₀` plus the truncated series at `lambda`: the approximation of
    /// `log P(lambda)`.
    pub approx_log_z: f64,
    /// Field magnitude the potential was shifted by (`h_i <= -H`); zero when
    /// the expansion is used standalone.
    pub h_shift: f64,
    /// Declared target accuracy (the guarantee is `epsilon / 4`).
    pub epsilon: f64,
    /// Number of variables of the underlying polynomial.
    pub n_vars: usize,
}

impl TaylorLogZ {
    /// The approximated log partition function of the original potential,
    /// with the fugacity change-of-variables constant restored:
    /// `log Z = n·H + log P(e^{-2H})`.
    pub fn model_log_z(&self) -> f64 {
        self.n_vars as f64 * self.h_shift + self.approx_log_z
    }
}

/// Truncation order required for an `ε/4` tail at this `λ`:
/// `m >= (λ/(1-λ)) (log(4n/ε) + log(1/(1-λ)))`.
pub fn required_truncation(n: usize, lambda: f64, epsilon: f64) -> usize {
    let m = (lambda / (1.0 - lambda))
        * ((4.0 * n as f64 / epsilon).ln() + (1.0 / (1.0 - lambda)).ln());
    (m.ceil() as usize).max(1)
}

/// Worst-case tail of the truncated series when no zero lies inside the
/// unit disk: `n λ^{m+1} / ((m+1)(1-λ))`.
pub fn taylor_tail_bound(n: usize, m: usize, lambda: f64) -> f64 {
    n as f64 * lambda.powi(m as i32 + 1) / ((m + 1) as f64 * (1.0 - lambda))
}

/// Expand `log P` to the required order and evaluate at `lambda`.
///
/// The series coefficients come from the power-sum recurrence for the log of
/// a polynomial: with `a_k = c_k/c₀`, `ℓ_j = a_j - (1/j) Σ_{t<j} t ℓ_t a_{j-t}`.
pub fn taylor_log_z(
    poly: &FugacityPolynomial,
    lambda: f64,
    epsilon: f64,
) -> Result<TaylorLogZ> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Parameter(format!(
            "lambda must lie in (0, 1), got {lambda}"
        )));
    }
    if !(epsilon > 0.0 && epsilon < 0.25) {
        return Err(Error::Parameter(format!(
            "epsilon must lie in (0, 1/4), got {epsilon}"
        )));
    }
    let n = poly.degree();
    let m = required_truncation(n, lambda, epsilon);
    let log_c0 = poly.log_levels[0];
    let mut ratios = vec![0.0f64; m + 1];
    for (k, r) in ratios.iter_mut().enumerate().take(n.min(m) + 1) {
        *r = (poly.log_levels[k] - log_c0).exp();
    }
    let mut ell = vec![0.0f64; m + 1];
    for j in 1..=m {
        let mut acc = ratios[j] * j as f64;
        for t in 1..j {
            acc -= t as f64 * ell[t] * ratios[j - t];
        }
        ell[j] = acc / j as f64;
    }
    let mut series = 0.0;
    let mut lam_pow = 1.0;
    for &coeff in ell.iter().skip(1) {
        lam_pow *= lambda;
        series += coeff * lam_pow;
    }
    Ok(TaylorLogZ {
        truncation_order: m,
        log_coefficients: ell[1..].to_vec(),
        lambda,
        approx_log_z: log_c0 + series,
        h_shift: 0.0,
        epsilon,
        n_vars: n,
    })
}

/// Full pipeline for a potential whose underlying model has every external
/// field at or below `-h_magnitude`: shift the fields up by `h_magnitude`,
/// expand the shifted fugacity polynomial, and evaluate at
/// `λ = e^{-2·h_magnitude}`. The returned [`TaylorLogZ::model_log_z`]
/// approximates `log Z` of the unshifted potential within `epsilon/4`
/// whenever the Lee-Yang zero check passes.
pub fn lee_yang_log_z(
    potential: &MrfPotential,
    h_magnitude: f64,
    epsilon: f64,
) -> Result<TaylorLogZ> {
    if !(h_magnitude > 0.0) {
        return Err(Error::Parameter(format!(
            "field magnitude must be positive, got {h_magnitude}"
        )));
    }
    let shifted = potential.with_uniform_field_shift(h_magnitude);
    let poly = fugacity_polynomial(&shifted)?;
    let lambda = (-2.0 * h_magnitude).exp();
    let mut taylor = taylor_log_z(&poly, lambda, epsilon)?;
    taylor.h_shift = h_magnitude;
    Ok(taylor)
}

/// Outcome of the numerical zero-location check.
#[derive(Debug, Clone)]
pub struct LeeYangReport {
    /// All complex roots of the fugacity polynomial.
    pub roots: Vec<Complex64>,
    /// Smallest root modulus.
    pub min_modulus: f64,
    /// `min_modulus >= 1 - 1e-6`: no zero intrudes into the unit disk.
    pub passes: bool,
}

/// Locate all roots of the fugacity polynomial (simultaneous Weierstrass
/// iteration plus Newton polishing) and report the smallest modulus.
/// Polynomials from ferromagnetic models with consistent field signs keep
/// every root on or outside the unit circle.
pub fn check_lee_yang(poly: &FugacityPolynomial) -> Result<LeeYangReport> {
    let degree = poly.degree();
    if degree > ROOT_DEGREE_BOUND {
        return Err(Error::Capacity {
            what: "fugacity polynomial degree",
            needed: degree,
            bound: ROOT_DEGREE_BOUND,
        });
    }
    // Normalize coefficients by the largest level to keep Horner in range.
    let max_log = poly
        .log_levels
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let coeffs: Vec<f64> = poly.log_levels.iter().map(|&l| (l - max_log).exp()).collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    // Attainable |p(z)| floor: the Horner running-error bound. Roots are
    // accepted when the residual is at rounding level, since no iteration
    // can resolve the polynomial below its own evaluation noise.
    let noise_floor = |z: Complex64| -> f64 {
        let r = z.norm();
        let mut bound = 0.0;
        for &c in coeffs.iter().rev() {
            bound = bound * r + c;
        }
        (2 * degree + 2) as f64 * f64::EPSILON * bound
    };
    let derivative = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &c) in coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * z + c * k as f64;
        }
        acc
    };

    let leading = coeffs[degree];
    // Start on a circle at the geometric mean of the root moduli,
    // |c0/cn|^(1/deg), with an angle offset to break symmetry.
    let radius = ((poly.log_levels[0] - poly.log_levels[degree]) / degree as f64).exp();
    let mut roots: Vec<Complex64> = (0..degree)
        .map(|j| {
            let angle = 2.0 * std::f64::consts::PI * (j as f64 + 0.3127) / degree as f64;
            Complex64::from_polar(radius, angle)
        })
        .collect();
    let mut iters = 0usize;
    let mut settled = false;
    for _ in 0..1000 {
        iters += 1;
        let mut max_step = 0.0f64;
        let mut all_at_floor = true;
        for j in 0..degree {
            let value = eval(roots[j]);
            if value.norm() > 4.0 * noise_floor(roots[j]) {
                all_at_floor = false;
            }
            let mut denom = Complex64::new(leading, 0.0);
            for k in 0..degree {
                if k != j {
                    denom *= roots[j] - roots[k];
                }
            }
            if denom.norm() == 0.0 {
                // Nudge coincident iterates apart.
                roots[j] += Complex64::new(1e-8, 1e-8);
                all_at_floor = false;
                continue;
            }
            let delta = value / denom;
            roots[j] -= delta;
            max_step = max_step.max(delta.norm());
        }
        if all_at_floor || max_step < 1e-13 {
            settled = true;
            break;
        }
    }
    if !settled {
        let residual = roots
            .iter()
            .map(|&z| eval(z).norm() / noise_floor(z).max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        return Err(Error::RootFinding { iters, residual });
    }
    // A few Newton steps per root to polish.
    for root in &mut roots {
        for _ in 0..5 {
            let d = derivative(*root);
            if d.norm() == 0.0 {
                break;
            }
            *root -= eval(*root) / d;
        }
    }
    roots.sort_by(|a, b| {
        a.norm()
            .partial_cmp(&b.norm())
            .unwrap()
            .then(a.re.partial_cmp(&b.re).unwrap())
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    let min_modulus = roots.first().map_or(f64::INFINITY, |r| r.norm());
    Ok(LeeYangReport {
        passes: min_modulus >= 1.0 - 1e-6,
        roots,
        min_modulus,
    })
}

/// Approximate log-likelihood of one configuration:
/// `log Pr(x) = p(x) - log Z`, with `log Z` taken from the Taylor
/// approximation (normalization constants of the fugacity substitution
/// resolved by [`TaylorLogZ::model_log_z`]).
pub fn log_likelihood(
    potential: &MrfPotential,
    config: Subset,
    approx: &TaylorLogZ,
) -> Result<f64> {
    if potential.n_vars() != approx.n_vars {
        return Err(Error::Parameter(format!(
            "potential has {} variables but the approximation was built for {}",
            potential.n_vars(),
            approx.n_vars
        )));
    }
    if (config >> potential.n_vars()) != 0 {
        return Err(Error::Parameter("configuration out of range".into()));
    }
    Ok(potential.evaluate(config) - approx.model_log_z())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::distribution_from_potential;

    #[test]
    fn empty_potential_levels_are_binomial() {
        let p = MrfPotential::new(2);
        let poly = fugacity_polynomial(&p).unwrap();
        let levels: Vec<f64> = poly.log_levels().iter().map(|l| l.exp()).collect();
        assert!((levels[0] - 1.0).abs() < 1e-12);
        assert!((levels[1] - 2.0).abs() < 1e-12);
        assert!((levels[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_edge_levels() {
        let w = 0.45;
        let mut p = MrfPotential::new(2);
        p.set_term(0b11, w);
        let poly = fugacity_polynomial(&p).unwrap();
        let levels: Vec<f64> = poly.log_levels().iter().map(|l| l.exp()).collect();
        assert!((levels[0] - w.exp()).abs() < 1e-12);
        assert!((levels[1] - 2.0 * (-w).exp()).abs() < 1e-12);
        assert!((levels[2] - w.exp()).abs() < 1e-12);
    }

    #[test]
    fn evaluation_at_one_is_partition_function() {
        let mut p = MrfPotential::new(4);
        p.set_term(0b0011, 0.4);
        p.set_term(0b1100, -0.2);
        p.set_term(0b0101, 0.15);
        p.set_term(0b0001, 0.1);
        let poly = fugacity_polynomial(&p).unwrap();
        let z = distribution_from_potential(&p).unwrap().log_z();
        assert!((poly.log_eval(1.0) - z).abs() < 1e-10);
    }

    #[test]
    fn change_of_variables_identity() {
        // Z(g + h·Σx) = e^{-nh} P(e^{2h}) for several h.
        let mut g = MrfPotential::new(3);
        g.set_term(0b011, 0.5);
        g.set_term(0b110, 0.2);
        let poly = fugacity_polynomial(&g).unwrap();
        for h in [-0.7, -0.2, 0.3] {
            let shifted = g.with_uniform_field_shift(h);
            let z = distribution_from_potential(&shifted).unwrap().log_z();
            let via_poly = -3.0 * h + poly.log_eval((2.0 * h).exp());
            assert!((z - via_poly).abs() < 1e-10, "h={h}: {z} vs {via_poly}");
        }
    }

    #[test]
    fn zero_potential_series_matches_closed_form() {
        // P(λ) = (1+λ)^n: log P(λ) = n log(1+λ).
        let n = 6;
        let p = MrfPotential::new(n);
        let poly = fugacity_polynomial(&p).unwrap();
        let lambda = 0.45;
        let eps = 0.1;
        let t = taylor_log_z(&poly, lambda, eps).unwrap();
        let exact = n as f64 * (1.0 + lambda).ln();
        let err = (t.approx_log_z - exact).abs();
        assert!(err <= taylor_tail_bound(n, t.truncation_order, lambda), "err {err}");
        assert!(err <= eps / 4.0);
    }

    #[test]
    fn truncation_error_shrinks_with_order() {
        let mut g = MrfPotential::new(5);
        g.set_term(0b00011, 0.3);
        g.set_term(0b01100, 0.2);
        let poly = fugacity_polynomial(&g).unwrap();
        let lambda = 0.5;
        let exact = poly.log_eval(lambda);
        let mut last = f64::INFINITY;
        for eps in [0.2, 0.1, 0.02] {
            let t = taylor_log_z(&poly, lambda, eps).unwrap();
            let err = (t.approx_log_z - exact).abs();
            assert!(err <= last + 1e-15, "error must not grow: {err} after {last}");
            last = err;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn taylor_rejects_bad_parameters() {
        let poly = fugacity_polynomial(&MrfPotential::new(2)).unwrap();
        assert!(taylor_log_z(&poly, 1.0, 0.1).is_err());
        assert!(taylor_log_z(&poly, 0.5, 0.3).is_err());
    }

    #[test]
    fn single_variable_root_at_minus_one() {
        let p = MrfPotential::new(1);
        let poly = fugacity_polynomial(&p).unwrap();
        let report = check_lee_yang(&poly).unwrap();
        assert_eq!(report.roots.len(), 1);
        assert!((report.roots[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
        assert!(report.passes);
    }

    #[test]
    fn ferromagnetic_edge_roots_on_unit_circle() {
        let mut p = MrfPotential::new(2);
        p.set_term(0b11, 0.6);
        let poly = fugacity_polynomial(&p).unwrap();
        let report = check_lee_yang(&poly).unwrap();
        // Quadratic with |λ|² = c₀/c₂ = 1.
        for r in &report.roots {
            assert!((r.norm() - 1.0).abs() < 1e-9, "{r}");
        }
        assert!(report.passes);
    }

    #[test]
    fn antiferromagnetic_edge_root_inside_disk() {
        // Demonstration only: without ferromagneticity a zero may cross into
        // the disk, and here it provably does.
        let mut p = MrfPotential::new(2);
        p.set_term(0b11, -0.8);
        let poly = fugacity_polynomial(&p).unwrap();
        let report = check_lee_yang(&poly).unwrap();
        assert!(report.min_modulus < 1.0 - 1e-6);
        assert!(!report.passes);
    }

    #[test]
    fn log_likelihood_zero_potential_is_log_half_per_spin() {
        // The uniform model sits at the λ = 1 boundary where the expansion
        // is undefined, so this fixture exercises the likelihood arithmetic
        // with the exactly evaluated polynomial instead.
        let n = 5;
        let p = MrfPotential::new(n);
        let poly = fugacity_polynomial(&p).unwrap();
        let approx = TaylorLogZ {
            truncation_order: 0,
            log_coefficients: vec![],
            lambda: 1.0,
            approx_log_z: poly.log_eval(1.0),
            h_shift: 0.0,
            epsilon: 0.1,
            n_vars: n,
        };
        for config in [0u32, 0b10101, (1 << n) - 1] {
            let ll = log_likelihood(&p, config, &approx).unwrap();
            assert!((ll + (n as f64) * 2.0f64.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn log_likelihood_checks_dimensions() {
        let p = MrfPotential::new(3);
        let poly = fugacity_polynomial(&MrfPotential::new(4)).unwrap();
        let t = taylor_log_z(&poly, 0.5, 0.1).unwrap();
        assert!(log_likelihood(&p, 0, &t).is_err());
    }
}
