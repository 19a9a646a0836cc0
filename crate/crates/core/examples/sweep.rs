//! A small preferential-attachment sweep written to CSV in a temporary
//! directory. Keep `workers = 1` when the timing columns matter.

use netscale::harness::{run_sweep, write_outputs, ExperimentConfig};

fn main() -> netscale::error::Result<()> {
    let mut cfg = ExperimentConfig::from_toml_str(
        r#"
        alpha_values = [0.5, 2.0]
        n = 40
        samples = 3
        algorithms = ["greedy", "spectral"]
        seed = 5
        "#,
    )?;
    cfg.output_dir = std::env::temp_dir().join("netscale-sweep-example");
    let records = run_sweep(&cfg)?;
    for r in &records {
        match &r.outcome {
            Ok(o) => println!(
                "alpha {:<3} sample {} {:<8} emergence {:.4} ({} ms)",
                r.alpha,
                r.sample,
                r.algorithm,
                o.causal_emergence,
                (r.runtime_seconds * 1e3).round()
            ),
            Err(e) => println!("alpha {} sample {} {}: {e}", r.alpha, r.sample, r.algorithm),
        }
    }
    let out = write_outputs(&cfg, &records)?;
    println!("wrote {} and {}", out.runs.display(), out.summary.display());
    Ok(())
}
