//! Entanglement advantage `R_N(γ)` across widths, and the thresholds `γ₀(N)`
//! above which GHZ probes win.

use entangled_probes::{qfi_ratio, threshold_gamma0};

fn main() -> entangled_probes::Result<()> {
    let gammas: Vec<f64> = (0..=12)
        .map(|i| 10f64.powf(-3.0 + 0.5 * i as f64))
        .collect();
    print!("{:>10}", "gamma");
    for n in 2..=5 {
        print!(" {:>8}", format!("R_{n}"));
    }
    println!();
    for &g in &gammas {
        print!("{g:>10.3e}");
        for n in 2..=5 {
            print!(" {:>8.4}", qfi_ratio(n, g, 1.0)?);
        }
        println!();
    }

    for n in 2..=5 {
        let root = threshold_gamma0(n, 1.0)?;
        println!(
            "gamma0({n}) = {:.6} (residual {:.1e})",
            root.value, root.residual
        );
    }
    Ok(())
}
