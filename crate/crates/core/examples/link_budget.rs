//! Per-interface SINR and capped Shannon rate against distance, without fading.

use donsa::rf_model::{
    capped_link_rate, link_bandwidth, link_sinr, rf_eligible, shannon_rate, ChannelModel,
    FadingDraw, RfCatalog,
};

pub fn run_example() -> donsa::Result<Vec<(String, f64, f64)>> {
    let catalog = RfCatalog::default_catalog();
    let cm = ChannelModel::default();
    let requested_bw = 200e3;
    let mut rows = Vec::new();
    println!(
        "{:<10} {:>8} {:>10} {:>14}",
        "rf", "dist_m", "sinr_db", "rate_bits_s"
    );
    for rf in catalog.interfaces() {
        if !rf_eligible(rf, requested_bw) {
            println!("{:<10} cannot carry {requested_bw} Hz", rf.id);
            continue;
        }
        let bw = link_bandwidth(rf, requested_bw);
        for d in [10.0, 100.0, 500.0] {
            let sinr = link_sinr(d, rf, &cm, FadingDraw::NONE, bw)?;
            let rate = capped_link_rate(shannon_rate(bw, sinr)?, rf);
            println!(
                "{:<10} {:>8} {:>10.2} {:>14.4e}",
                rf.id,
                d,
                10.0 * sinr.log10(),
                rate
            );
            rows.push((rf.id.clone(), d, rate));
        }
    }
    Ok(rows)
}

fn main() -> donsa::Result<()> {
    run_example().map(|_| ())
}
