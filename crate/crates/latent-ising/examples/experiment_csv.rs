//! Run a seeded recovery experiment over a sample-size grid and print the
//! CSV rows the harness produces.
//!
//! ```bash
//! cargo run --release --example experiment_csv
//! ```

use latent_ising::experiment::{run_experiment, ExperimentSpec, ModelSource};
use latent_ising::generator::RbmGenParams;
use latent_ising::structure::LearnerKind;

fn main() -> latent_ising::Result<()> {
    let spec = ExperimentSpec {
        source: ModelSource::Rbm(RbmGenParams::ferromagnetic(6, 2)),
        learner: LearnerKind::Greedy,
        trials: 5,
        base_seed: 2718,
        m_grid: vec![20_000, 80_000, 320_000],
        delta: 0.1,
        learn_potential: true,
        // The theorem threshold expects the theorem-scale sample count;
        // sweeping modest M wants a practical gap instead.
        eta_override: Some(0.02),
    };
    let results = run_experiment(&spec)?;
    print!("{}", results.csv);
    println!();
    for (m, freq, median) in &results.summary {
        match median {
            Some(v) => println!("M = {m:>7}: recovery {freq:.2}, median potential error {v:.4}"),
            None => println!("M = {m:>7}: recovery {freq:.2}"),
        }
    }
    Ok(())
}
