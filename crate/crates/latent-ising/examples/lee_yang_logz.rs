//! Approximate the log partition function of an induced MRF with the
//! fugacity-polynomial Taylor expansion, certified by the numerical zero
//! check.
//!
//! ```bash
//! cargo run --release --example lee_yang_logz
//! ```

use latent_ising::convert::rbm_to_mrf;
use latent_ising::exact::distribution_from_potential;
use latent_ising::generator::{gen_rbm, RbmGenParams};
use latent_ising::partition::{check_lee_yang, fugacity_polynomial, lee_yang_log_z};

fn main() -> latent_ising::Result<()> {
    // Ferromagnetic RBM with every observed field at or below -0.3.
    let params = RbmGenParams {
        n_observed: 10,
        n_hidden: 3,
        alpha: 0.15,
        beta: 2.0,
        weight_max: 0.3,
        observed_field_range: (-0.8, -0.3),
        hidden_field_range: (-0.4, 0.0),
        ..RbmGenParams::ferromagnetic(10, 3)
    };
    let gen = gen_rbm(&params, 41)?;
    let potential = rbm_to_mrf(gen.rbm.as_ref().unwrap())?;

    let h = 0.3;
    let epsilon = 0.1;
    let taylor = lee_yang_log_z(&potential, h, epsilon)?;
    println!(
        "lambda = e^(-2H) = {:.6}, truncation order m = {}",
        taylor.lambda, taylor.truncation_order
    );

    let poly = fugacity_polynomial(&potential.with_uniform_field_shift(h))?;
    let zeros = check_lee_yang(&poly)?;
    println!(
        "smallest fugacity zero modulus: {:.9} ({})",
        zeros.min_modulus,
        if zeros.passes { "no zero inside the unit disk" } else { "zero inside the disk!" }
    );

    let exact = distribution_from_potential(&potential)?.log_z();
    println!("approx log Z = {:.9}", taylor.model_log_z());
    println!("exact  log Z = {exact:.9}");
    println!(
        "absolute error {:.3e}, guarantee {:.3}",
        (taylor.model_log_z() - exact).abs(),
        epsilon / 4.0
    );
    Ok(())
}
