//! Build a run from a TOML document with a two-interface catalog.
//!
//! Built-in algorithm keys name interfaces by id, so only the ones whose
//! interfaces exist here can run.

use donsa::config::Config;
use donsa::experiments::{run_scenario, SweepSettings};

const DOC: &str = r#"
truncate_channels_to_sources = true

[scenario]
id = "custom"
n_sources = 20
n_relays = 10
cell_radius = 300.0
requested_bw = 1e6
sweep_variable = "requested_bw"
sweep_points = [2e5, 1e6, 5e6]
runs = 3
algorithms = ["sorsa_w_l", "ditosa_l"]
base_seed = 99

[[rf_catalog]]
id = "WiFi"
class = "M2M"
channel_bw = 20e6
max_rate = 54e6
carrier_freq = 2.412e9
tx_power = 20.0

[[rf_catalog]]
id = "LTE"
class = "M2B"
channel_bw = 20e6
max_rate = 100e6
bs_total_bw = 20e6
bs_conn_cap = 100
carrier_freq = 1.8e9
tx_power = 23.0
"#;

pub fn run_example() -> donsa::Result<Vec<usize>> {
    let cfg = Config::from_toml(DOC)?;
    let report = run_scenario(
        &cfg.scenario,
        &cfg.catalog()?,
        &cfg.channel_model,
        &SweepSettings::default(),
    )?;
    for (p, bw) in report.sweep_points.iter().enumerate() {
        let c = report.cell("sorsa_w_l", p).expect("present");
        println!(
            "{bw:>10} Hz: adr {:.3e} bits/s, nus {}, capacity {}",
            c.adr, c.nus, c.capacity
        );
    }
    Ok(report.cells[0]
        .iter()
        .map(|c| c.capacity as usize)
        .collect())
}

fn main() -> donsa::Result<()> {
    run_example().map(|_| ())
}
