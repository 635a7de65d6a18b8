//! `key = value` configuration files. Keys are flag names without the
//! leading dashes; lists are comma separated; `#` starts a comment.

use clap::Parser;

use super::{CliError, Flags};

#[derive(Parser)]
#[command(no_binary_name = true)]
struct ConfigArgs {
    #[command(flatten)]
    flags: Flags,
}

/// Flags from the command line win; the config fills whatever is unset.
pub(super) fn merge(flags: Flags, text: &str) -> Result<Flags, CliError> {
    let file = parse(text)?;
    Ok(Flags {
        gamma: flags.gamma.or(file.gamma),
        gamma_min: flags.gamma_min.or(file.gamma_min),
        gamma_max: flags.gamma_max.or(file.gamma_max),
        gamma_points: flags.gamma_points.or(file.gamma_points),
        coupling: flags.coupling.or(file.coupling),
        n_qubits: or_list(flags.n_qubits, file.n_qubits),
        time: or_list(flags.time, file.time),
        seed: flags.seed.or(file.seed),
        samples: flags.samples.or(file.samples),
        restarts: flags.restarts.or(file.restarts),
        measurements: or_list(flags.measurements, file.measurements),
        repetitions: flags.repetitions.or(file.repetitions),
        prior_lo: flags.prior_lo.or(file.prior_lo),
        prior_hi: flags.prior_hi.or(file.prior_hi),
        grid_points: flags.grid_points.or(file.grid_points),
        model: flags.model.or(file.model),
        out: flags.out.or(file.out),
        quick: flags.quick || file.quick,
        threads: flags.threads.or(file.threads),
        config: flags.config,
    })
}

fn or_list<T>(a: Vec<T>, b: Vec<T>) -> Vec<T> {
    if a.is_empty() {
        b
    } else {
        a
    }
}

/// Turns the file into flag syntax and reuses the command line parser, so
/// both sources share the same value rules.
fn parse(text: &str) -> Result<Flags, CliError> {
    let mut args = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key = value", lineno + 1))
        })?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        let value = value.trim();
        if key == "config" {
            return Err(CliError::Usage(
                "config files cannot include other config files".into(),
            ));
        }
        if key == "quick" {
            match value {
                "true" | "1" | "yes" => args.push("--quick".to_string()),
                "false" | "0" | "no" => {}
                other => {
                    return Err(CliError::Usage(format!(
                        "config line {}: quick = {other}",
                        lineno + 1
                    )))
                }
            }
            continue;
        }
        args.push(format!("--{key}={value}"));
    }
    ConfigArgs::try_parse_from(args)
        .map(|c| c.flags)
        .map_err(|e| CliError::Usage(format!("config: {}", e.render().to_string().trim())))
}
