//! Monte Carlo average of the noisy evolution against the exact dephasing
//! channel for a three-qubit GHZ probe.

use entangled_probes::dynamics::{dephase_common, mc_evolve_common_stats};
use entangled_probes::noise::McSettings;
use entangled_probes::{ghz_state, EvolutionSpec, NoiseParams};

fn main() -> entangled_probes::Result<()> {
    let psi = ghz_state(3)?;
    let spec = EvolutionSpec::new(NoiseParams::new(2.0, 1.0)?, 0.3)?.with_omega0(0.7);
    let exact = dephase_common(&psi, &spec)?;
    let mc = mc_evolve_common_stats(&psi, &spec, &McSettings::new(20_000, 1))?;

    let corner = (0, 7);
    println!("exact rho[0,7] = {:.5}", exact.matrix()[corner]);
    println!(
        "mc    rho[0,7] = {:.5} (se re {:.5}, im {:.5})",
        mc.mean[corner], mc.std_error_re[corner], mc.std_error_im[corner]
    );
    println!("purity {:.5}", exact.purity());
    Ok(())
}
