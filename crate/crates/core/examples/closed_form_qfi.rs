//! QFI of GHZ and separable probes: closed form versus the general
//! eigendecomposition formula, and the time that maximizes it.

use entangled_probes::closed_form::{qfi_ghz_closed, qfi_sep_closed};
use entangled_probes::qfi::qfi_of_probe;
use entangled_probes::{ghz_state, max_qfi, EvolutionSpec, NoiseParams, Probe};

fn main() -> entangled_probes::Result<()> {
    let params = NoiseParams::new(2.0, 1.0)?;
    println!(
        "gamma = {}, coupling = {}",
        params.gamma(),
        params.coupling()
    );
    println!(
        "{:>3} {:>6} {:>14} {:>14} {:>14}",
        "N", "t", "sep", "ghz", "ghz (eig)"
    );
    for n in 1..=4 {
        for t in [0.1, 0.5, 1.0] {
            let spec = EvolutionSpec::new(params, t)?;
            let eig = qfi_of_probe(&ghz_state(n)?, &spec)?;
            println!(
                "{n:>3} {t:>6.2} {:>14.6e} {:>14.6e} {eig:>14.6e}",
                qfi_sep_closed(n, &spec)?,
                qfi_ghz_closed(n, &spec)?
            );
        }
    }

    for n in 1..=4 {
        let best = max_qfi(Probe::Ghz, n, &params)?;
        println!(
            "N = {n}: max over t of H_ghz = {:.6e} at t = {:.5}",
            best.h_max, best.t_opt
        );
    }
    Ok(())
}
