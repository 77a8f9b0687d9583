//! Fugacity-polynomial suites: the log-series recurrence against a
//! roots-based oracle, and end-to-end likelihood accuracy on a
//! negative-field instance.

use latent_ising::convert::rbm_to_mrf;
use latent_ising::exact::distribution_from_potential;
use latent_ising::generator::{gen_rbm, RbmGenParams};
use latent_ising::partition::{
    check_lee_yang, fugacity_polynomial, lee_yang_log_z, log_likelihood, taylor_log_z,
    FugacityPolynomial,
};

/// Build a positive-coefficient polynomial from prescribed roots (negative
/// reals and left-half-plane conjugate pairs), returning both the log-level
/// representation and the roots.
fn poly_from_roots(reals: &[f64], pairs: &[(f64, f64)]) -> (FugacityPolynomial, Vec<(f64, f64)>) {
    let mut coeffs = vec![1.0f64];
    let mut roots: Vec<(f64, f64)> = Vec::new();
    for &r in reals {
        assert!(r < 0.0);
        // (z - r) with -r > 0 keeps coefficients positive.
        let mut next = vec![0.0; coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k] += c * (-r);
            next[k + 1] += c;
        }
        coeffs = next;
        roots.push((r, 0.0));
    }
    for &(re, im) in pairs {
        assert!(re < 0.0 && im != 0.0);
        // (z^2 - 2 re z + |r|^2), all coefficients positive for re < 0.
        let norm_sq = re * re + im * im;
        let mut next = vec![0.0; coeffs.len() + 2];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k] += c * norm_sq;
            next[k + 1] += c * (-2.0 * re);
            next[k + 2] += c;
        }
        coeffs = next;
        roots.push((re, im));
        roots.push((re, -im));
    }
    let log_levels = coeffs.iter().map(|c| c.ln()).collect();
    (FugacityPolynomial::from_log_levels(log_levels), roots)
}

#[test]
fn log_series_recurrence_matches_roots_oracle() {
    // log P(z) = log c0 + sum_i log(1 - z/r_i): the series coefficient of
    // degree j is -(1/j) sum_i r_i^{-j}, computable straight from the
    // prescribed roots.
    let cases: Vec<(Vec<f64>, Vec<(f64, f64)>)> = vec![
        (vec![-1.3, -2.0, -1.05], vec![]),
        (vec![-1.6], vec![(-0.9, 0.8), (-1.2, 2.0)]),
        (vec![-1.1, -1.11, -3.0, -1.5], vec![(-1.4, 0.3)]),
        (vec![], vec![(-0.8, 0.7), (-1.0, 1.0), (-2.2, 0.4), (-1.05, 0.2), (-1.3, 1.1)]),
    ];
    for (case, (reals, pairs)) in cases.into_iter().enumerate() {
        let (poly, roots) = poly_from_roots(&reals, &pairs);
        let lambda = 0.4;
        let taylor = taylor_log_z(&poly, lambda, 0.01).unwrap();
        for (j, &coeff) in taylor.log_coefficients.iter().enumerate().take(10) {
            let degree = j + 1;
            // Sum of r^{-degree} over all roots, using complex arithmetic
            // via polar form.
            let mut sum = 0.0;
            for &(re, im) in &roots {
                let modulus = (re * re + im * im).sqrt();
                let angle = im.atan2(re);
                sum += modulus.powi(-(degree as i32)) * (-(degree as f64) * angle).cos();
            }
            let want = -sum / degree as f64;
            assert!(
                (coeff - want).abs() <= 1e-9,
                "case {case} degree {degree}: {coeff} vs {want}"
            );
        }
    }
}

#[test]
fn approximation_is_within_guarantee_on_negative_field_instance() {
    let params = RbmGenParams {
        n_observed: 8,
        n_hidden: 2,
        hidden_degree_min: 2,
        hidden_degree_max: 2,
        observed_degree_max: 2,
        alpha: 0.15,
        beta: 2.0,
        weight_max: 0.3,
        observed_field_range: (-0.8, -0.3),
        hidden_field_range: (-0.4, 0.0),
    };
    let gen = gen_rbm(&params, 321).unwrap();
    let potential = rbm_to_mrf(gen.rbm.as_ref().unwrap()).unwrap();
    let epsilon = 0.1;
    let taylor = lee_yang_log_z(&potential, 0.3, epsilon).unwrap();
    let dist = distribution_from_potential(&potential).unwrap();

    // Zero check certifies the expansion.
    let poly = fugacity_polynomial(&potential.with_uniform_field_shift(0.3)).unwrap();
    assert!(check_lee_yang(&poly).unwrap().passes);

    // Per-configuration likelihoods within eps/4 of the exact values.
    let mut total = 0.0;
    for x in 0..(1usize << 8) {
        let ll = log_likelihood(&potential, x as u32, &taylor).unwrap();
        let exact_ll = dist.log_weights()[x] - dist.log_z();
        assert!(
            (ll - exact_ll).abs() <= epsilon / 4.0,
            "x={x:#x}: {ll} vs {exact_ll}"
        );
        total += ll.exp();
    }
    // Uniform log Z error means the likelihoods renormalize within the
    // same budget.
    assert!(total >= (-epsilon / 4.0).exp() && total <= (epsilon / 4.0).exp());
}

#[test]
fn truncation_order_meets_declared_bound() {
    let poly = fugacity_polynomial(&latent_ising::model::MrfPotential::new(10)).unwrap();
    for (lambda, epsilon) in [(0.3, 0.1), (0.55, 0.2), (0.7, 0.05)] {
        let t = taylor_log_z(&poly, lambda, epsilon).unwrap();
        let required = (lambda / (1.0 - lambda))
            * ((4.0 * 10.0 / epsilon).ln() + (1.0 / (1.0 - lambda)).ln());
        assert!(t.truncation_order as f64 >= required);
        assert_eq!(t.log_coefficients.len(), t.truncation_order);
    }
}
