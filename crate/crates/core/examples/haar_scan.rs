//! Random probes never beat GHZ above the threshold width.

use entangled_probes::family::haar_scan;
use entangled_probes::{max_qfi, NoiseParams, Probe};

fn main() -> entangled_probes::Result<()> {
    let params = NoiseParams::new(10.0, 1.0)?;
    for n in [2, 3] {
        let ghz = max_qfi(Probe::Ghz, n, &params)?.h_max;
        let sep = max_qfi(Probe::Separable, n, &params)?.h_max;
        let samples = haar_scan(n, &params, 2000, 11)?;
        let best = samples.iter().map(|r| r.h_max).fold(0.0, f64::max);
        let mean = samples.iter().map(|r| r.h_max).sum::<f64>() / samples.len() as f64;
        println!(
            "N = {n}: GHZ/sep = {:.4}, best random/sep = {:.4}, mean random/sep = {:.4}",
            ghz / sep,
            best / sep,
            mean / sep
        );
    }
    Ok(())
}
