//! Every structural and information property, at the micro and macroscale.

use netscale::metrics::MetricsReport;
use netscale::netgen::{preferential_attachment, PAConfig};
use netscale::search::{spectral_search, SpectralConfig};

fn main() -> netscale::error::Result<()> {
    let net = preferential_attachment(&PAConfig::new(80, 1, 1.5, 2))?;
    let r = spectral_search(&net, &SpectralConfig::default())?;
    let micro = MetricsReport::compute(&net, None)?;
    let macro_ = MetricsReport::compute(&r.macro_net, Some(&r.partition))?;
    println!("{}", serde_json::to_string_pretty(&serde_json::json!({ "micro": micro, "macro": macro_ })).unwrap());
    Ok(())
}
