//! RF interface catalog and physical-layer rate math.
//!
//! Rates are bits/s, bandwidths Hz, distances meters and powers dBm
//! throughout. Links are noise-limited: the interfaces occupy disjoint
//! spectrum, so the SINR reduces to an SNR.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RfClass {
    /// Machine-to-machine (capillary) interface.
    M2M,
    /// Machine-to-base-station (cellular) interface.
    M2B,
}

/// One radio technology a machine or base station can transmit on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RfInterface {
    pub id: String,
    pub class: RfClass,
    /// Width of one channel in Hz.
    pub channel_bw: f64,
    /// Per-link rate cap in bits/s; `None` means unbounded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_rate: Option<f64>,
    #[serde(default = "one")]
    pub num_channels: u32,
    /// Total bandwidth a base station offers on this interface (M2B only).
    #[serde(default)]
    pub bs_total_bw: f64,
    /// Maximum simultaneous connections a base station accepts (M2B only).
    #[serde(default)]
    pub bs_conn_cap: u32,
    pub carrier_freq: f64,
    /// Transmit power in dBm.
    pub tx_power: f64,
}

fn one() -> u32 {
    1
}

impl RfInterface {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(format!("rf `{}`: {msg}", self.id)));
        if self.id.is_empty() || self.id.contains(char::is_whitespace) {
            return Err(Error::Config(format!(
                "rf id `{}` must be a non-empty word",
                self.id
            )));
        }
        if !(self.channel_bw.is_finite() && self.channel_bw > 0.0) {
            return bad(format!("channel_bw must be > 0, got {}", self.channel_bw));
        }
        if let Some(cap) = self.max_rate {
            if !(cap > 0.0) {
                return bad(format!("max_rate must be > 0, got {cap}"));
            }
        }
        if self.num_channels == 0 {
            return bad("num_channels must be >= 1".into());
        }
        if !self.tx_power.is_finite() || !self.carrier_freq.is_finite() || self.carrier_freq <= 0.0
        {
            return bad("tx_power and carrier_freq must be finite, carrier_freq > 0".into());
        }
        match self.class {
            RfClass::M2M if self.num_channels != 1 => bad(format!(
                "M2M interfaces have exactly one channel, got {}",
                self.num_channels
            )),
            RfClass::M2B if !(self.bs_total_bw >= self.channel_bw) => bad(format!(
                "bs_total_bw ({}) must be >= channel_bw ({})",
                self.bs_total_bw, self.channel_bw
            )),
            _ => Ok(()),
        }
    }
}

/// The interfaces available in the network, split by class.
///
/// Interfaces are addressed by their ordinal within their class; all rate
/// tables and vertices use those ordinals.
#[derive(Debug, Clone, PartialEq)]
pub struct RfCatalog {
    m2m: Vec<RfInterface>,
    m2b: Vec<RfInterface>,
}

impl RfCatalog {
    pub fn new(interfaces: Vec<RfInterface>) -> Result<Self> {
        let mut m2m = Vec::new();
        let mut m2b = Vec::new();
        for rf in interfaces {
            rf.validate()?;
            if m2m
                .iter()
                .chain(m2b.iter())
                .any(|o: &RfInterface| o.id == rf.id)
            {
                return Err(Error::Config(format!("duplicate rf id `{}`", rf.id)));
            }
            match rf.class {
                RfClass::M2M => m2m.push(rf),
                RfClass::M2B => m2b.push(rf),
            }
        }
        Ok(Self { m2m, m2b })
    }

    /// Z-Wave, Bluetooth, WiFi for M2M and NB-IoT, LTE-M, LTE for M2B.
    ///
    /// These parameters are engineering defaults, not measured values. The
    /// only structural requirement is that WiFi and LTE are the broadband
    /// members of their classes.
    pub fn default_catalog() -> Self {
        let m2m = |id: &str, bw: f64, cap: f64, freq: f64| RfInterface {
            id: id.into(),
            class: RfClass::M2M,
            channel_bw: bw,
            max_rate: Some(cap),
            num_channels: 1,
            bs_total_bw: 0.0,
            bs_conn_cap: 0,
            carrier_freq: freq,
            tx_power: 23.0,
        };
        let m2b = |id: &str, bw: f64, cap: f64, total: f64, conns: u32, freq: f64| RfInterface {
            id: id.into(),
            class: RfClass::M2B,
            channel_bw: bw,
            max_rate: Some(cap),
            num_channels: (total / bw).floor() as u32,
            bs_total_bw: total,
            bs_conn_cap: conns,
            carrier_freq: freq,
            tx_power: 23.0,
        };
        Self::new(vec![
            m2m("Z-Wave", 200e3, 100e3, 908.42e6),
            m2m("Bluetooth", 1e6, 2e6, 2.402e9),
            m2m("WiFi", 20e6, 54e6, 2.412e9),
            m2b("NB-IoT", 200e3, 250e3, 1e6, 10, 800e6),
            m2b("LTE-M", 1.4e6, 1e6, 2.8e6, 20, 800e6),
            m2b("LTE", 20e6, 100e6, 20e6, 100, 1.8e9),
        ])
        .expect("default catalog is valid")
    }

    pub fn m2m(&self) -> &[RfInterface] {
        &self.m2m
    }

    pub fn m2b(&self) -> &[RfInterface] {
        &self.m2b
    }

    pub fn interfaces(&self) -> impl Iterator<Item = &RfInterface> {
        self.m2m.iter().chain(self.m2b.iter())
    }

    pub fn m2m_index(&self, id: &str) -> Result<usize> {
        self.m2m
            .iter()
            .position(|rf| rf.id == id)
            .ok_or_else(|| Error::UnknownRf(id.to_string()))
    }

    pub fn m2b_index(&self, id: &str) -> Result<usize> {
        self.m2b
            .iter()
            .position(|rf| rf.id == id)
            .ok_or_else(|| Error::UnknownRf(id.to_string()))
    }

    /// Number of interfaces (of both classes) able to carry `requested_bw`.
    pub fn eligible_count(&self, requested_bw: f64) -> usize {
        self.interfaces()
            .filter(|rf| rf_eligible(rf, requested_bw))
            .count()
    }

    /// A copy of the catalog with every rate cap multiplied by `factor`.
    pub fn with_scaled_caps(&self, factor: f64) -> Self {
        let scale = |v: &[RfInterface]| {
            v.iter()
                .cloned()
                .map(|mut rf| {
                    rf.max_rate = rf.max_rate.map(|c| c * factor);
                    rf
                })
                .collect()
        };
        Self {
            m2m: scale(&self.m2m),
            m2b: scale(&self.m2b),
        }
    }
}

/// Large-scale and small-scale propagation parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelModel {
    pub path_loss_exponent: f64,
    pub shadowing_std_db: f64,
    pub rayleigh_scale: f64,
    pub noise_psd_dbm_hz: f64,
    pub noise_figure_db: f64,
    pub reference_distance_m: f64,
    pub reference_loss_db: f64,
}

impl Default for ChannelModel {
    fn default() -> Self {
        Self {
            path_loss_exponent: 4.0,
            shadowing_std_db: 8.0,
            rayleigh_scale: 1.0,
            noise_psd_dbm_hz: -174.0,
            noise_figure_db: 9.0,
            reference_distance_m: 1.0,
            reference_loss_db: 40.0,
        }
    }
}

impl ChannelModel {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.path_loss_exponent,
            self.shadowing_std_db,
            self.rayleigh_scale,
            self.noise_psd_dbm_hz,
            self.noise_figure_db,
            self.reference_distance_m,
            self.reference_loss_db,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config(
                "channel model parameters must be finite".into(),
            ));
        }
        if self.path_loss_exponent <= 0.0 {
            return Err(Error::Config("path_loss_exponent must be > 0".into()));
        }
        if self.shadowing_std_db < 0.0 || self.rayleigh_scale < 0.0 {
            return Err(Error::Config("fading parameters must be >= 0".into()));
        }
        if self.reference_distance_m <= 0.0 {
            return Err(Error::Config("reference_distance_m must be > 0".into()));
        }
        Ok(())
    }
}

/// One realization of shadowing and small-scale fading for a link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingDraw {
    pub shadow_db: f64,
    /// Linear power gain |h|^2.
    pub rayleigh_gain: f64,
}

impl FadingDraw {
    /// No shadowing and unit power gain.
    pub const NONE: FadingDraw = FadingDraw {
        shadow_db: 0.0,
        rayleigh_gain: 1.0,
    };
}

/// Draws log-normal shadowing and a Rayleigh power gain.
pub fn sample_fading<R: Rng + ?Sized>(rng: &mut R, cm: &ChannelModel) -> FadingDraw {
    let shadow_db = if cm.shadowing_std_db > 0.0 {
        Normal::new(0.0, cm.shadowing_std_db)
            .expect("validated std")
            .sample(rng)
    } else {
        0.0
    };
    // inverse CDF of Rayleigh(sigma): sigma * sqrt(-2 ln(1 - u)), u in [0, 1)
    let u: f64 = rng.random();
    let amplitude = cm.rayleigh_scale * (-2.0 * (1.0 - u).ln()).sqrt();
    FadingDraw {
        shadow_db,
        rayleigh_gain: amplitude * amplitude,
    }
}

/// Linear SINR of a link of length `distance_m` occupying `bw_hz`.
pub fn link_sinr(
    distance_m: f64,
    rf: &RfInterface,
    cm: &ChannelModel,
    fading: FadingDraw,
    bw_hz: f64,
) -> Result<f64> {
    if distance_m == 0.0 {
        return Err(Error::DegenerateGeometry(format!(
            "zero-length link on `{}`",
            rf.id
        )));
    }
    if !(distance_m > 0.0 && distance_m.is_finite()) {
        return Err(Error::InvalidArgument(format!("distance {distance_m} m")));
    }
    if !(bw_hz > 0.0 && bw_hz.is_finite()) {
        return Err(Error::InvalidArgument(format!("bandwidth {bw_hz} Hz")));
    }
    if fading.rayleigh_gain <= 0.0 {
        return Ok(0.0);
    }
    let path_loss = cm.reference_loss_db
        + 10.0 * cm.path_loss_exponent * (distance_m / cm.reference_distance_m).log10();
    let rx_dbm = rf.tx_power - path_loss + fading.shadow_db + 10.0 * fading.rayleigh_gain.log10();
    let noise_dbm = cm.noise_psd_dbm_hz + 10.0 * bw_hz.log10() + cm.noise_figure_db;
    Ok(10f64.powf((rx_dbm - noise_dbm) / 10.0))
}

/// Shannon-Hartley capacity `bw * log2(1 + sinr)`.
pub fn shannon_rate(bw_hz: f64, sinr_linear: f64) -> Result<f64> {
    if !(bw_hz >= 0.0) || !(sinr_linear >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "shannon_rate({bw_hz}, {sinr_linear})"
        )));
    }
    Ok(bw_hz * sinr_linear.ln_1p() / std::f64::consts::LN_2)
}

pub fn capped_link_rate(sh_rate: f64, rf: &RfInterface) -> f64 {
    match rf.max_rate {
        Some(cap) => sh_rate.min(cap),
        None => sh_rate,
    }
}

/// End-to-end rate of a decode-and-forward relay path.
pub fn df_two_hop_rate(c_first_hop: f64, c_second_hop: f64) -> f64 {
    c_first_hop.min(c_second_hop)
}

/// Whether `rf` has a channel wide enough for a request of `requested_bw`.
pub fn rf_eligible(rf: &RfInterface, requested_bw: f64) -> bool {
    rf.channel_bw >= requested_bw
}

/// Bandwidth a link actually occupies: the request, limited by the channel.
pub fn link_bandwidth(rf: &RfInterface, requested_bw: f64) -> f64 {
    requested_bw.min(rf.channel_bw)
}
