use std::io::Write;

/// Prints a pass/fail line straight to stderr so it shows up even when the
/// harness captures test output.
#[allow(dead_code)]
pub fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!("criterion {id:>2} [{verdict}] {name}: {detail}\n");
    let _ = std::io::stderr().write_all(line.as_bytes());
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

#[allow(dead_code)]
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
