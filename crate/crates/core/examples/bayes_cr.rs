//! Grid Bayesian estimation of the width from simulated GHZ parity
//! measurements, compared with the Cramér-Rao bound.

use entangled_probes::bayes::{error_curve, ExperimentConfig};

fn main() -> entangled_probes::Result<()> {
    let ms = [100, 1_000, 10_000, 100_000];
    for n in [1, 4] {
        let config = ExperimentConfig {
            n_repetitions: 50,
            seed: 5,
            ..ExperimentConfig::new(n, 10.0)
        };
        println!("N = {n}, t = {:.5}", config.measurement_time()?);
        for p in error_curve(&config, &ms)? {
            println!(
                "  M = {:>6}: eps = {:.4}  ensemble = {:.4}  CR = {:.4}  ratio = {:.3}",
                p.m,
                p.epsilon,
                p.epsilon_ensemble,
                p.cr_epsilon,
                p.epsilon / p.cr_epsilon
            );
        }
    }
    Ok(())
}
