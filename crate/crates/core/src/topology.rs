//! Random cell layouts and the per-interface link-rate table.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rf_model::{
    capped_link_rate, link_bandwidth, link_sinr, rf_eligible, sample_fading, shannon_rate,
    ChannelModel, RfCatalog, RfInterface,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Source,
    Relay,
    BaseStation,
}

impl Role {
    fn as_str(self) -> &'static str {
        match self {
            Role::Source => "source",
            Role::Relay => "relay",
            Role::BaseStation => "bs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub id: usize,
    pub role: Role,
    pub position: (f64, f64),
}

impl Node {
    pub fn distance_to(&self, other: &Node) -> f64 {
        let (dx, dy) = (
            self.position.0 - other.position.0,
            self.position.1 - other.position.1,
        );
        dx.hypot(dy)
    }
}

/// A placed network. Node ids are dense: sources first, then relays, then
/// base stations, so the i-th relay has id `n_sources + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    nodes: Vec<Node>,
    n_sources: usize,
    n_relays: usize,
    pub cell_radius: f64,
    /// Bandwidth every source requests, in Hz.
    pub requested_bw: f64,
}

impl Topology {
    /// Builds a topology from nodes that must already be ordered by role.
    pub fn from_nodes(nodes: Vec<Node>, cell_radius: f64, requested_bw: f64) -> Result<Self> {
        if !(requested_bw > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "requested_bw {requested_bw}"
            )));
        }
        if !(cell_radius > 0.0) {
            return Err(Error::InvalidArgument(format!("cell_radius {cell_radius}")));
        }
        let rank = |r: Role| match r {
            Role::Source => 0,
            Role::Relay => 1,
            Role::BaseStation => 2,
        };
        for (i, pair) in nodes.windows(2).enumerate() {
            if rank(pair[0].role) > rank(pair[1].role) {
                return Err(Error::InvalidArgument(format!(
                    "node {} is out of role order",
                    i + 1
                )));
            }
        }
        if let Some(i) = nodes.iter().enumerate().position(|(i, n)| n.id != i) {
            return Err(Error::InvalidArgument(format!(
                "node ids must be 0..N, found {} at {i}",
                nodes[i].id
            )));
        }
        let n_sources = nodes.iter().filter(|n| n.role == Role::Source).count();
        let n_relays = nodes.iter().filter(|n| n.role == Role::Relay).count();
        if nodes.len() == n_sources + n_relays {
            return Err(Error::InvalidArgument(
                "topology needs at least one base station".into(),
            ));
        }
        Ok(Self {
            nodes,
            n_sources,
            n_relays,
            cell_radius,
            requested_bw,
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn n_sources(&self) -> usize {
        self.n_sources
    }

    pub fn n_relays(&self) -> usize {
        self.n_relays
    }

    pub fn n_machines(&self) -> usize {
        self.n_sources + self.n_relays
    }

    pub fn n_bs(&self) -> usize {
        self.nodes.len() - self.n_machines()
    }

    pub fn sources(&self) -> &[Node] {
        &self.nodes[..self.n_sources]
    }

    pub fn relays(&self) -> &[Node] {
        &self.nodes[self.n_sources..self.n_machines()]
    }

    /// Sources followed by relays.
    pub fn machines(&self) -> &[Node] {
        &self.nodes[..self.n_machines()]
    }

    pub fn base_stations(&self) -> &[Node] {
        &self.nodes[self.n_machines()..]
    }

    pub fn bs_positions(&self) -> Vec<(f64, f64)> {
        self.base_stations().iter().map(|n| n.position).collect()
    }

    /// Plain-text form: a header, then `id role x y` per node.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# topology v1\n");
        let _ = writeln!(out, "cell_radius {}", self.cell_radius);
        let _ = writeln!(out, "requested_bw {}", self.requested_bw);
        for n in &self.nodes {
            let _ = writeln!(
                out,
                "{} {} {} {}",
                n.id,
                n.role.as_str(),
                n.position.0,
                n.position.1
            );
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse {
            kind: "topology",
            line,
            message,
        };
        let mut cell_radius = None;
        let mut requested_bw = None;
        let mut nodes = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split_whitespace().collect();
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| err(line, format!("`{s}`: {e}")))
            };
            match fields.as_slice() {
                ["cell_radius", v] => cell_radius = Some(num(v)?),
                ["requested_bw", v] => requested_bw = Some(num(v)?),
                [id, role, x, y] => {
                    let role = match *role {
                        "source" => Role::Source,
                        "relay" => Role::Relay,
                        "bs" => Role::BaseStation,
                        other => return Err(err(line, format!("unknown role `{other}`"))),
                    };
                    let id = id.parse().map_err(|e| err(line, format!("id: {e}")))?;
                    nodes.push(Node {
                        id,
                        role,
                        position: (num(x)?, num(y)?),
                    });
                }
                _ => return Err(err(line, format!("unexpected `{raw}`"))),
            }
        }
        let cell_radius = cell_radius.ok_or_else(|| err(0, "missing cell_radius".into()))?;
        let requested_bw = requested_bw.ok_or_else(|| err(0, "missing requested_bw".into()))?;
        Self::from_nodes(nodes, cell_radius, requested_bw)
    }
}

/// Base stations on a square grid with spacing `2 * cell_radius`, centered
/// on the origin. A single base station sits at the origin.
fn bs_grid(n_bs: usize, cell_radius: f64) -> Vec<(f64, f64)> {
    let cols = (n_bs as f64).sqrt().ceil() as usize;
    let rows = n_bs.div_ceil(cols);
    let spacing = 2.0 * cell_radius;
    let x0 = -(cols as f64 - 1.0) * spacing / 2.0;
    let y0 = -(rows as f64 - 1.0) * spacing / 2.0;
    (0..n_bs)
        .map(|i| {
            (
                x0 + (i % cols) as f64 * spacing,
                y0 + (i / cols) as f64 * spacing,
            )
        })
        .collect()
}

/// Places `n_bs` base stations on a grid and scatters the machines uniformly
/// over the coverage disk of a uniformly chosen base station.
pub fn generate_cell<R: Rng + ?Sized>(
    n_sources: usize,
    n_relays: usize,
    n_bs: usize,
    cell_radius: f64,
    requested_bw: f64,
    rng: &mut R,
) -> Result<Topology> {
    if n_bs == 0 {
        return Err(Error::InvalidArgument("n_bs must be >= 1".into()));
    }
    if !(cell_radius > 0.0 && cell_radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("cell_radius {cell_radius}")));
    }
    let bs = bs_grid(n_bs, cell_radius);
    let n = n_sources + n_relays;
    let mut placed: Vec<(f64, f64)> = bs.clone();
    let mut nodes = Vec::with_capacity(n + n_bs);
    for id in 0..n {
        let position = loop {
            let (cx, cy) = bs[rng.random_range(0..n_bs)];
            let r = cell_radius * rng.random::<f64>().sqrt();
            let theta = 2.0 * PI * rng.random::<f64>();
            let p = (cx + r * theta.cos(), cy + r * theta.sin());
            if !placed.contains(&p) {
                break p;
            }
        };
        placed.push(position);
        let role = if id < n_sources {
            Role::Source
        } else {
            Role::Relay
        };
        nodes.push(Node { id, role, position });
    }
    nodes.extend(bs.into_iter().enumerate().map(|(i, position)| Node {
        id: n + i,
        role: Role::BaseStation,
        position,
    }));
    Topology::from_nodes(nodes, cell_radius, requested_bw)
}

/// Capped link rates for every in-scope (node pair, interface) combination.
///
/// M2M entries cover source-to-relay links; M2B entries cover every machine
/// (source or relay) to every base station.
#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    n_sources: usize,
    n_relays: usize,
    n_bs: usize,
    n_m2m: usize,
    n_m2b: usize,
    m2m: Vec<f64>,
    m2b: Vec<f64>,
}

impl RateTable {
    /// Builds a table from closures; used for synthetic instances.
    pub fn from_fn(
        dims: (usize, usize, usize),
        n_m2m: usize,
        n_m2b: usize,
        mut m2m: impl FnMut(usize, usize, usize) -> f64,
        mut m2b: impl FnMut(usize, usize, usize) -> f64,
    ) -> Self {
        let (n_sources, n_relays, n_bs) = dims;
        let mut m2m_rates = Vec::with_capacity(n_sources * n_relays * n_m2m);
        for s in 0..n_sources {
            for r in 0..n_relays {
                for t in 0..n_m2m {
                    m2m_rates.push(m2m(s, r, t));
                }
            }
        }
        let mut m2b_rates = Vec::with_capacity((n_sources + n_relays) * n_bs * n_m2b);
        for m in 0..n_sources + n_relays {
            for b in 0..n_bs {
                for t in 0..n_m2b {
                    m2b_rates.push(m2b(m, b, t));
                }
            }
        }
        Self {
            n_sources,
            n_relays,
            n_bs,
            n_m2m,
            n_m2b,
            m2m: m2m_rates,
            m2b: m2b_rates,
        }
    }

    /// Rate from source `s` to relay `r` on the `t`-th M2M interface.
    pub fn m2m(&self, s: usize, r: usize, t: usize) -> f64 {
        self.m2m[(s * self.n_relays + r) * self.n_m2m + t]
    }

    /// Rate from machine `m` (sources first, then relays) to base station
    /// `b` on the `t`-th M2B interface.
    pub fn m2b(&self, m: usize, b: usize, t: usize) -> f64 {
        self.m2b[(m * self.n_bs + b) * self.n_m2b + t]
    }

    /// Relay-to-BS rate, with `r` the relay ordinal.
    pub fn relay_m2b(&self, r: usize, b: usize, t: usize) -> f64 {
        self.m2b(self.n_sources + r, b, t)
    }

    pub fn m2m_len(&self) -> usize {
        self.m2m.len()
    }

    pub fn m2b_len(&self) -> usize {
        self.m2b.len()
    }

    pub fn n_m2m(&self) -> usize {
        self.n_m2m
    }

    pub fn n_m2b(&self) -> usize {
        self.n_m2b
    }

    /// `(n_sources, n_relays, n_bs)`
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.n_sources, self.n_relays, self.n_bs)
    }

    pub fn entries(&self) -> impl Iterator<Item = f64> + '_ {
        self.m2m.iter().chain(self.m2b.iter()).copied()
    }

    /// Every rate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.m2m
            .iter_mut()
            .chain(out.m2b.iter_mut())
            .for_each(|v| *v *= factor);
        out
    }
}

fn link_rate<R: Rng + ?Sized>(
    distance: f64,
    rf: &RfInterface,
    cm: &ChannelModel,
    requested_bw: f64,
    rng: &mut R,
) -> Result<f64> {
    // the draw is consumed even for ineligible interfaces so that the fading
    // of one link does not depend on the request size
    let fading = sample_fading(rng, cm);
    if !rf_eligible(rf, requested_bw) {
        return Ok(0.0);
    }
    let bw = link_bandwidth(rf, requested_bw);
    let sinr = link_sinr(distance, rf, cm, fading, bw)?;
    Ok(capped_link_rate(shannon_rate(bw, sinr)?, rf))
}

/// Draws fresh fading for every link and fills in the capped rates.
pub fn build_rate_table<R: Rng + ?Sized>(
    topology: &Topology,
    catalog: &RfCatalog,
    cm: &ChannelModel,
    rng: &mut R,
) -> Result<RateTable> {
    if catalog.m2m().is_empty() || catalog.m2b().is_empty() {
        return Err(Error::InvalidArgument(
            "catalog needs at least one M2M and one M2B interface".into(),
        ));
    }
    let bw = topology.requested_bw;
    let geometry = |a: &Node, b: &Node, e: Error| match e {
        Error::DegenerateGeometry(_) => {
            Error::DegenerateGeometry(format!("nodes {} and {} are co-located", a.id, b.id))
        }
        other => other,
    };
    let mut m2m =
        Vec::with_capacity(topology.n_sources() * topology.n_relays() * catalog.m2m().len());
    for s in topology.sources() {
        for r in topology.relays() {
            for rf in catalog.m2m() {
                m2m.push(
                    link_rate(s.distance_to(r), rf, cm, bw, rng).map_err(|e| geometry(s, r, e))?,
                );
            }
        }
    }
    let mut m2b = Vec::with_capacity(topology.n_machines() * topology.n_bs() * catalog.m2b().len());
    for m in topology.machines() {
        for b in topology.base_stations() {
            for rf in catalog.m2b() {
                m2b.push(
                    link_rate(m.distance_to(b), rf, cm, bw, rng).map_err(|e| geometry(m, b, e))?,
                );
            }
        }
    }
    Ok(RateTable {
        n_sources: topology.n_sources(),
        n_relays: topology.n_relays(),
        n_bs: topology.n_bs(),
        n_m2m: catalog.m2m().len(),
        n_m2b: catalog.m2b().len(),
        m2m,
        m2b,
    })
}
