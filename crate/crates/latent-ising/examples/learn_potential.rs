//! The full pipeline: learn blankets from samples, then fit the induced
//! MRF potential by per-node tanh-link regression and compare with the
//! enumeration oracle.
//!
//! ```bash
//! cargo run --release --example learn_potential
//! ```

use latent_ising::exact::{fourier_of_log, observed_marginal};
use latent_ising::generator::{gen_rbm, RbmGenParams};
use latent_ising::regression::{assemble_potential, glmtron_fit, RegressionProblem, TieRule};
use latent_ising::sampler::sample_exact;
use latent_ising::structure::{default_config, greedy_nbhd, LearnerKind};

fn main() -> latent_ising::Result<()> {
    let params = RbmGenParams::ferromagnetic(6, 2);
    let gen = gen_rbm(&params, 88)?;
    let oracle = fourier_of_log(&observed_marginal(&gen.model)?)?.truncated(1e-12);

    let m = 200_000;
    let samples = sample_exact(&gen.model, m, 9)?;

    // Structure first. The theorem threshold pairs with the theorem-scale
    // sample count; at a practical M we override eta to sit above the
    // sampling noise and below the true gaps.
    let mut config = default_config(
        params.alpha,
        params.beta,
        gen.d2,
        gen.ell,
        0.1,
        params.n_observed,
        LearnerKind::Greedy,
    )?;
    config.eta = 0.02;
    let radius = params.beta * 2f64.powf(gen.d2 as f64 / 2.0);
    let mut locals = Vec::new();
    for i in 0..params.n_observed {
        let blanket = greedy_nbhd(&samples, i, &config)?;
        println!(
            "node {}: learned blanket {:?}",
            i + 1,
            blanket.members.iter().map(|j| j + 1).collect::<Vec<_>>()
        );
        let problem = RegressionProblem::from_samples(&samples, i, &blanket.members)?;
        locals.push(glmtron_fit(&problem, radius, 0.2, 4000, 100 + i as u64)?);
    }

    let fitted = assemble_potential(&locals, TieRule::MinIndex)?;
    println!("\n{:<12} {:>10} {:>10}", "term", "fitted", "oracle");
    for (s, c) in oracle.terms() {
        let vars: Vec<String> = (0..6)
            .filter(|&i| s & (1 << i) != 0)
            .map(|i| (i + 1).to_string())
            .collect();
        println!(
            "chi_{{{:<7}}} {:>10.5} {:>10.5}",
            vars.join(","),
            fitted.coefficient(s),
            c
        );
    }
    println!(
        "\nmax coefficient error: {:.5} over {} samples",
        fitted.linf_distance(&oracle),
        m
    );
    Ok(())
}
