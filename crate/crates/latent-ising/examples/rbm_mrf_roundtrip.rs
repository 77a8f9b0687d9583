//! Convert an RBM to its induced MRF and compile an MRF back into an RBM,
//! checking both directions against exact distributions.
//!
//! ```bash
//! cargo run --release --example rbm_mrf_roundtrip
//! ```

use latent_ising::convert::{mrf_to_rbm, rbm_to_mrf, DEFAULT_GAMMA};
use latent_ising::exact::{distribution_from_potential, observed_marginal};
use latent_ising::model::{MrfPotential, Rbm};

fn main() -> latent_ising::Result<()> {
    // Forward: marginalize the hidden layer exactly.
    let mut rbm = Rbm::new(4, 2);
    rbm.set_weight(0, 0, 1.0);
    rbm.set_weight(1, 0, -0.8);
    rbm.set_weight(2, 0, 0.5);
    rbm.set_weight(2, 1, 0.9);
    rbm.set_weight(3, 1, 0.9);
    rbm.set_hidden_field(0, 0.3);
    let potential = rbm_to_mrf(&rbm)?;
    println!("induced potential has {} terms, order {}", potential.n_terms(), potential.order());
    let tv = distribution_from_potential(&potential)?
        .tv_distance(&observed_marginal(&rbm.as_ising())?);
    println!("TV(induced, exact observed marginal) = {tv:.3e}");

    // Backward: build hidden units that hit each coefficient level by level.
    let mut target = MrfPotential::new(4);
    target.set_term(0b0011, 0.4);
    target.set_term(0b0110, -0.25);
    target.set_term(0b1011, 0.15); // a genuine three-way interaction
    target.set_term(0b1000, 0.2);
    let compiled = mrf_to_rbm(&target, DEFAULT_GAMMA)?;
    println!(
        "\ncompiled RBM uses {} hidden units (max degree {})",
        compiled.n_hidden(),
        (0..compiled.n_hidden()).map(|j| compiled.hidden_degree(j)).max().unwrap_or(0)
    );
    let back = rbm_to_mrf(&compiled)?;
    println!("round-trip coefficient error: {:.3e}", back.linf_distance(&target));
    let tv = distribution_from_potential(&back)?
        .tv_distance(&distribution_from_potential(&target)?);
    println!("round-trip TV: {tv:.3e}");
    Ok(())
}
