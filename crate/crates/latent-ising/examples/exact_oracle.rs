//! Enumerate a small latent model exactly: joint, observed marginal,
//! conditional influences, and the induced MRF potential.
//!
//! ```bash
//! cargo run --release --example exact_oracle
//! ```

use latent_ising::exact::{exact_influence, fourier_of_log, observed_marginal};
use latent_ising::model::Rbm;

fn main() -> latent_ising::Result<()> {
    // Two observed spins joined through one hidden unit, plus a biased
    // third observed spin hanging off a second unit.
    let mut rbm = Rbm::new(3, 2);
    rbm.set_weight(0, 0, 0.9);
    rbm.set_weight(1, 0, 0.9);
    rbm.set_weight(2, 1, 0.6);
    rbm.set_hidden_field(1, 0.4);
    let model = rbm.as_ising();

    let marginal = observed_marginal(&model)?;
    println!("observed marginal over 3 spins (log Z = {:.6}):", marginal.log_z());
    for x in 0..8usize {
        println!("  x={x:03b}  Pr = {:.6}", marginal.prob(x));
    }

    println!("\ndiscrete influences I_0(S) = E[X_0 | X_S = +1]:");
    for (label, subset) in [("{}", 0u32), ("{2}", 0b010), ("{2,3}", 0b110)] {
        println!("  S = {label:<6} -> {:+.6}", exact_influence(&model, 0, subset)?);
    }

    let potential = fourier_of_log(&marginal)?.truncated(1e-12);
    println!("\ninduced MRF potential (order {}):", potential.order());
    for (s, c) in potential.terms() {
        let vars: Vec<String> = (0..3)
            .filter(|&i| s & (1 << i) != 0)
            .map(|i| (i + 1).to_string())
            .collect();
        println!("  chi_{{{}}}  {c:+.6}", vars.join(","));
    }
    Ok(())
}
