//! Optimal probes within the excitation class family. Below the threshold
//! the optimum departs from GHZ; above it they coincide.

use entangled_probes::family::{optimize_family, DEFAULT_RESTARTS};
use entangled_probes::{max_qfi, NoiseParams, Probe};

fn main() -> entangled_probes::Result<()> {
    for n in [2, 3] {
        for gamma in [0.01, 1.0, 10.0] {
            let params = NoiseParams::new(gamma, 1.0)?;
            let opt = optimize_family(n, &params, DEFAULT_RESTARTS, 3)?;
            let ghz = max_qfi(Probe::Ghz, n, &params)?.h_max;
            println!(
                "N = {n}, gamma = {gamma:>5}: family/GHZ = {:.4}, t = {:.4}, a = {:?}",
                opt.qfi / ghz,
                opt.t_opt,
                opt.coeffs
                    .coefficients()
                    .iter()
                    .map(|a| (a * 1e4).round() / 1e4)
                    .collect::<Vec<_>>()
            );
        }
    }
    Ok(())
}
