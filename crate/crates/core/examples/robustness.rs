//! Purity a noisy GHZ preparation needs to keep its advantage over
//! separable probes, for both mixing models.

use entangled_probes::analysis::robustness_gamma_range;
use entangled_probes::{threshold_purity, MixingModel, NoiseParams};

fn main() -> entangled_probes::Result<()> {
    for n in [2, 5] {
        let (lo, hi) = robustness_gamma_range(n, 1.0)?;
        for model in [MixingModel::Depolarized, MixingModel::Dephased] {
            println!("N = {n}, {}", model.name());
            for i in 0..8 {
                let gamma = lo * (hi / lo).powf(i as f64 / 7.0);
                let r = threshold_purity(n, &NoiseParams::new(gamma, 1.0)?, model)?;
                println!(
                    "  gamma = {gamma:>10.3e}: mixing = {:.5}, purity = {:.5}",
                    r.mixing, r.purity
                );
            }
        }
    }
    Ok(())
}
