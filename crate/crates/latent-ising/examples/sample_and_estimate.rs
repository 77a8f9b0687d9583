//! Draw observed samples and compare empirical influence estimates with
//! their exact values as the sample count grows.
//!
//! ```bash
//! cargo run --release --example sample_and_estimate
//! ```

use latent_ising::exact::exact_influence;
use latent_ising::influence::empirical_influence;
use latent_ising::model::Rbm;
use latent_ising::sampler::sample_exact;

fn main() -> latent_ising::Result<()> {
    let mut rbm = Rbm::new(4, 2);
    rbm.set_weight(0, 0, 0.8);
    rbm.set_weight(1, 0, 0.8);
    rbm.set_weight(2, 1, 0.7);
    rbm.set_weight(3, 1, 0.7);
    let model = rbm.as_ising();

    let target = 0;
    let subset = 0b0010; // condition on X_2 = +1
    let exact = exact_influence(&model, target, subset)?;
    println!("exact I_1({{2}}) = {exact:+.6}\n");
    println!("{:>9}  {:>10}  {:>10}  {:>9}", "M", "estimate", "abs error", "support");
    for m in [1_000usize, 10_000, 100_000, 1_000_000] {
        let samples = sample_exact(&model, m, 7)?;
        let est = empirical_influence(&samples, target, subset)?;
        let value = est.value.expect("conditioning event has support");
        println!(
            "{m:>9}  {value:>+10.6}  {:>10.6}  {:>9}",
            (value - exact).abs(),
            est.support_count
        );
    }
    Ok(())
}
