//! Regression-pipeline guarantees: the tanh link is exactly calibrated,
//! discrete partials are pointwise bounded, the risk-to-parameter bound
//! holds with brute force on both sides, and assembled population fits
//! reproduce the oracle potential.

use latent_ising::exact::{distribution_from_potential, fourier_of_log, observed_marginal};
use latent_ising::generator::{gen_mrf, gen_rbm, gen_signed_rbm, RbmGenParams};
use latent_ising::model::Rbm;
use latent_ising::regression::{
    assemble_potential, coefficient_linf, discrete_partial, evaluate_coefficients,
    glmtron_population, min_config_prob_ratio, risk_to_parameter_bound, CoefficientMap, TieRule,
};

/// Conditional mean of variable `i` given everything else, from a table.
fn conditional_mean(
    dist: &latent_ising::exact::ExactDistribution,
    i: usize,
    rest: usize,
) -> f64 {
    let bit = 1usize << i;
    let p_plus = dist.prob(rest | bit);
    let p_minus = dist.prob(rest & !bit);
    (p_plus - p_minus) / (p_plus + p_minus)
}

#[test]
fn tanh_link_is_exactly_calibrated() {
    // E[X_i | X_{!=i} = x] = tanh(d_i p*(x)) for the potential of any
    // full-support distribution.
    for seed in 0..10u64 {
        let rbm = gen_signed_rbm(4, 2, 3, 0.9, 0.4, 1500 + seed);
        let marg = observed_marginal(&rbm.as_ising()).unwrap();
        let p_star = fourier_of_log(&marg).unwrap();
        for i in 0..4 {
            let partial = discrete_partial(&p_star, i);
            for rest in 0..(1usize << 4) {
                let want = conditional_mean(&marg, i, rest);
                let got = evaluate_coefficients(&partial, rest as u32).tanh();
                assert!(
                    (want - got).abs() <= 1e-10,
                    "seed {seed} i={i} x={rest:#x}: {want} vs {got}"
                );
            }
        }
    }
}

#[test]
fn discrete_partial_is_pointwise_bounded_by_beta() {
    for seed in 0..10u64 {
        let params = RbmGenParams::ferromagnetic(5, 2);
        let gen = gen_rbm(&params, 1600 + seed).unwrap();
        let marg = observed_marginal(&gen.model).unwrap();
        let p_star = fourier_of_log(&marg).unwrap();
        for i in 0..5 {
            let partial = discrete_partial(&p_star, i);
            for x in 0..(1u32 << 5) {
                let v = evaluate_coefficients(&partial, x).abs();
                assert!(
                    v <= gen.beta_true + 1e-9,
                    "seed {seed} i={i}: |partial| {v} exceeds beta {}",
                    gen.beta_true
                );
            }
        }
    }
}

#[test]
fn risk_bound_verified_by_brute_force() {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(42);
    let n = 4usize;
    for trial in 0..20 {
        // A full-support distribution with known uniform share.
        let p = gen_mrf(n, 2, 4, 0.8, 1700 + trial);
        let dist = distribution_from_potential(&p).unwrap();
        let delta = (0..(1usize << n))
            .map(|x| dist.prob(x) * (1 << n) as f64)
            .fold(f64::INFINITY, f64::min);
        // Random coefficient vectors f and g.
        let mut f = CoefficientMap::new();
        let mut g = CoefficientMap::new();
        for s in 0..(1u32 << n) {
            f.insert(s, rng.random_range(-1.0..1.0));
            g.insert(s, rng.random_range(-1.0..1.0));
        }
        let mut risk = 0.0;
        for x in 0..(1usize << n) {
            let d = evaluate_coefficients(&f, x as u32) - evaluate_coefficients(&g, x as u32);
            risk += dist.prob(x) * d * d;
        }
        let coeff_sq: f64 = (0..(1u32 << n))
            .map(|s| {
                let d = f[&s] - g[&s];
                d * d
            })
            .sum();
        let bound = risk_to_parameter_bound(risk, delta).unwrap();
        assert!(
            coeff_sq <= bound + 1e-10,
            "trial {trial}: ||f-g||^2 = {coeff_sq} exceeds bound {bound}"
        );
    }
}

#[test]
fn risk_bound_tight_under_uniform_measure() {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(55);
    let n = 4usize;
    let uniform =
        distribution_from_potential(&latent_ising::model::MrfPotential::new(n)).unwrap();
    let mut f = CoefficientMap::new();
    for s in 0..(1u32 << n) {
        f.insert(s, rng.random_range(-1.0..1.0));
    }
    let mut risk = 0.0;
    for x in 0..(1usize << n) {
        let d = evaluate_coefficients(&f, x as u32);
        risk += uniform.prob(x) * d * d;
    }
    // With delta = 1 the bound equals the risk, and Parseval makes it an
    // equality for squared function differences.
    let coeff_sq: f64 = f.values().map(|c| c * c).sum();
    let bound = risk_to_parameter_bound(risk, 1.0).unwrap();
    assert!((coeff_sq - bound).abs() <= 1e-10, "{coeff_sq} vs {bound}");
}

#[test]
fn population_fits_assemble_to_oracle_potential() {
    for seed in 0..5u64 {
        let params = RbmGenParams::ferromagnetic(5, 2);
        let gen = gen_rbm(&params, 1800 + seed).unwrap();
        let marg = observed_marginal(&gen.model).unwrap();
        let oracle = fourier_of_log(&marg).unwrap().truncated(1e-12);
        let radius = params.beta * 2f64.powf(gen.d2 as f64 / 2.0);
        let locals: Vec<_> = (0..5)
            .map(|i| glmtron_population(&marg, i, &gen.blankets[i], radius, 200_000).unwrap())
            .collect();
        let assembled = assemble_potential(&locals, TieRule::MinIndex).unwrap();
        assert!(
            assembled.linf_distance(&oracle) <= 1e-6,
            "seed {seed}: {:.2e}",
            assembled.linf_distance(&oracle)
        );
    }
}

#[test]
fn tie_rules_agree_on_a_symmetric_model() {
    // One hidden unit with equal weights: all local fits see the same
    // geometry, so averaging matching coefficients changes nothing.
    let mut rbm = Rbm::new(3, 1);
    for i in 0..3 {
        rbm.set_weight(i, 0, 0.8);
    }
    let marg = observed_marginal(&rbm.as_ising()).unwrap();
    let blankets: Vec<Vec<usize>> = (0..3)
        .map(|i| (0..3).filter(|&j| j != i).collect())
        .collect();
    let locals: Vec<_> = (0..3)
        .map(|i| glmtron_population(&marg, i, &blankets[i], 4.0, 200_000).unwrap())
        .collect();
    let min_index = assemble_potential(&locals, TieRule::MinIndex).unwrap();
    let average = assemble_potential(&locals, TieRule::Average).unwrap();
    assert!(
        min_index.linf_distance(&average) <= 1e-9,
        "{:.2e}",
        min_index.linf_distance(&average)
    );
}

#[test]
fn population_fit_intercept_recovers_external_field() {
    let mut rbm = Rbm::new(2, 1);
    rbm.set_weight(0, 0, 0.6);
    rbm.set_weight(1, 0, 0.6);
    rbm.set_observed_field(0, 0.35);
    let marg = observed_marginal(&rbm.as_ising()).unwrap();
    let p_star = fourier_of_log(&marg).unwrap();
    let fit = glmtron_population(&marg, 0, &[1], 4.0, 200_000).unwrap();
    let want = discrete_partial(&p_star, 0);
    assert!(coefficient_linf(&fit.coefficients, &want) <= 1e-6);
    // The intercept of node 0's partial is its field term.
    assert!((fit.coefficients[&0] - p_star.coefficient(0b01)).abs() <= 1e-6);
}

#[test]
fn prob_ratio_helper_matches_definition() {
    let beta = 1.3f64;
    let sigma = 1.0 / (1.0 + (2.0 * beta).exp());
    assert!((min_config_prob_ratio(beta, 3) - (2.0 * sigma).powi(3)).abs() < 1e-15);
}
