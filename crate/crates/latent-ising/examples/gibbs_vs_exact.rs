//! Heat-bath Gibbs sampling against the enumeration oracle on a
//! ferromagnetic ring.
//!
//! ```bash
//! cargo run --release --example gibbs_vs_exact
//! ```

use latent_ising::exact::enumerate;
use latent_ising::model::IsingModel;
use latent_ising::sampler::{sample_gibbs, GIBBS_BURN_IN, GIBBS_THINNING};

fn main() -> latent_ising::Result<()> {
    let n = 10usize;
    let mut model = IsingModel::new(n);
    for i in 0..n {
        model.set_weight(i, (i + 1) % n, 0.2);
    }
    model.set_field(0, 0.3);

    let dist = enumerate(&model)?;
    let m = 100_000;
    let samples = sample_gibbs(&model, m, GIBBS_BURN_IN, GIBBS_THINNING, 1234);
    println!("{m} Gibbs samples, burn-in {GIBBS_BURN_IN} sweeps, thinning {GIBBS_THINNING}\n");
    println!("{:>8} {:>10} {:>10} {:>10}", "pair", "gibbs", "exact", "error");
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let j = (i + 1) % n;
        let mut acc = 0i64;
        for row in samples.rows() {
            acc += (row[i] as i64) * (row[j] as i64);
        }
        let empirical = acc as f64 / m as f64;
        let exact = dist.mean_parity((1 << i) | (1 << j));
        worst = worst.max((empirical - exact).abs());
        println!(
            "({:>2},{:>2}) {empirical:>10.5} {exact:>10.5} {:>10.5}",
            i + 1,
            j + 1,
            (empirical - exact).abs()
        );
    }
    println!("\nworst adjacent-pair error: {worst:.5}");
    Ok(())
}
