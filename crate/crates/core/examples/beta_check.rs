//! Closed-form phase variance against Monte Carlo trajectories of the OU field.
//!
//! Run with `cargo run --release --example beta_check`.

use entangled_probes::noise::{mc_characteristic_grid, McSettings};
use entangled_probes::{NoiseKernel, NoiseParams};

fn main() -> entangled_probes::Result<()> {
    let params = NoiseParams::new(1.0, 1.0)?;
    let times: Vec<f64> = (1..=10).map(|i| 0.5 * i as f64).collect();
    let estimates = mc_characteristic_grid(&params, &times, 1, &McSettings::new(50_000, 7))?;

    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>7}",
        "t", "beta", "exact", "mc", "z"
    );
    for (&t, est) in times.iter().zip(&estimates) {
        let beta = params.beta(t)?;
        let exact = (-0.5 * beta).exp();
        println!(
            "{t:>6.2} {beta:>10.5} {exact:>10.5} {:>10.5} {:>7.2}",
            est.mean,
            est.z_score(exact)
        );
    }
    Ok(())
}
