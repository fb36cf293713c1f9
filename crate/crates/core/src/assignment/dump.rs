//! Plain-text dumps of assignment results and padded instances.
//!
//! Both formats are line oriented and self-describing: they carry the
//! interface names and per-interface quotas, so a dump can be audited
//! without the configuration that produced it. Floats are written in
//! shortest round-trip form.

use std::fmt::Write as _;

use super::hungarian::Matrix;
use super::quota::Quota;
use super::sap::{ColTag, RowTag, SapInstance};
use super::vertices::{PairVertex, QuadrupleVertex};
use super::{AssignmentResult, Decision, SourceAssignment};
use crate::error::{Error, Result};
use crate::rf_model::RfCatalog;

pub const RESULT_HEADER: &str = "# assignment v1";
pub const SAP_HEADER: &str = "# sap v1";

/// Interface names and quota shared by both dump kinds.
#[derive(Debug, Clone, PartialEq)]
pub struct DumpContext {
    pub m2m_ids: Vec<String>,
    pub m2b_ids: Vec<String>,
    pub quota: Quota,
}

impl DumpContext {
    pub fn new(catalog: &RfCatalog, quota: &Quota) -> Self {
        Self {
            m2m_ids: catalog.m2m().iter().map(|rf| rf.id.clone()).collect(),
            m2b_ids: catalog.m2b().iter().map(|rf| rf.id.clone()).collect(),
            quota: quota.clone(),
        }
    }

    fn write(&self, out: &mut String) {
        let _ = writeln!(out, "m2m {}", self.m2m_ids.join(" "));
        for (id, q) in self.m2b_ids.iter().zip(&self.quota.per_rf) {
            let _ = writeln!(out, "m2b {id} {q}");
        }
        let _ = writeln!(out, "n_bs {}", self.quota.n_bs);
        let _ = writeln!(out, "n_sources {}", self.quota.n_sources);
    }

    fn m2m(&self, id: &str) -> Result<usize> {
        self.m2m_ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| Error::UnknownRf(id.into()))
    }

    fn m2b(&self, id: &str) -> Result<usize> {
        self.m2b_ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| Error::UnknownRf(id.into()))
    }
}

pub fn write_result(result: &AssignmentResult, ctx: &DumpContext) -> String {
    let mut out = format!("{RESULT_HEADER}\n");
    ctx.write(&mut out);
    let _ = writeln!(out, "k {}", result.k);
    for (s, a) in result.assignments.iter().enumerate() {
        let _ = match a.decision {
            Decision::Unmatched => writeln!(out, "source {s} unmatched"),
            Decision::Direct { bs, m2b_rf } => writeln!(
                out,
                "source {s} direct {bs} {} {}",
                ctx.m2b_ids[m2b_rf], a.rate
            ),
            Decision::Relayed {
                relay,
                m2m_rf,
                bs,
                m2b_rf,
            } => writeln!(
                out,
                "source {s} relayed {relay} {} {bs} {} {}",
                ctx.m2m_ids[m2m_rf], ctx.m2b_ids[m2b_rf], a.rate
            ),
        };
    }
    let _ = writeln!(out, "objective {}", result.objective_total);
    out
}

pub fn write_sap(sap: &SapInstance, ctx: &DumpContext) -> String {
    let mut out = format!("{SAP_HEADER}\n");
    ctx.write(&mut out);
    let _ = writeln!(out, "k {}", sap.k);
    let _ = writeln!(out, "n {}", sap.dim());
    let _ = writeln!(out, "a_value {}", sap.a_value);
    for (i, r) in sap.row_meta.iter().enumerate() {
        let _ = match r {
            RowTag::Source(s) => writeln!(out, "row {i} source {s}"),
            RowTag::Dummy => writeln!(out, "row {i} dummy"),
        };
    }
    for (j, c) in sap.col_meta.iter().enumerate() {
        let _ = match c {
            ColTag::Quadruple(q) => writeln!(
                out,
                "col {j} quad {} {} {} {}",
                q.relay, ctx.m2m_ids[q.m2m_rf], q.bs, ctx.m2b_ids[q.m2b_rf]
            ),
            ColTag::Pair(p) => writeln!(
                out,
                "col {j} pair {} {} {}",
                p.bs, ctx.m2b_ids[p.m2b_rf], p.channel
            ),
            ColTag::Dummy => writeln!(out, "col {j} dummy"),
        };
    }
    for i in 0..sap.dim() {
        out.push('w');
        for v in sap.weights.row(i) {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

/// Either kind of dump, as read back from text.
#[derive(Debug, Clone, PartialEq)]
pub enum Dump {
    Result(AssignmentResult, DumpContext),
    Sap(SapInstance, DumpContext),
}

struct Lines<'a> {
    kind: &'static str,
    line: usize,
    fields: Vec<&'a str>,
}

impl<'a> Lines<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            kind: self.kind,
            line: self.line,
            message: message.into(),
        }
    }

    fn get(&self, i: usize) -> Result<&'a str> {
        self.fields
            .get(i)
            .copied()
            .ok_or_else(|| self.err(format!("missing field {i}")))
    }

    fn num<T: std::str::FromStr>(&self, i: usize) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.get(i)?;
        raw.parse()
            .map_err(|e| self.err(format!("field {i} `{raw}`: {e}")))
    }
}

pub fn parse(text: &str) -> Result<Dump> {
    let mut lines = text.lines();
    let kind = match lines.next().map(str::trim) {
        Some(RESULT_HEADER) => "assignment dump",
        Some(SAP_HEADER) => "sap dump",
        other => {
            return Err(Error::Parse {
                kind: "dump",
                line: 1,
                message: format!("unrecognized header {other:?}"),
            })
        }
    };
    let records: Vec<Lines<'_>> = lines
        .enumerate()
        .map(|(i, raw)| Lines {
            kind,
            line: i + 2,
            fields: raw.split_whitespace().collect(),
        })
        .filter(|l| l.fields.first().is_some_and(|h| !h.starts_with('#')))
        .collect();
    let missing = |what: &str| Error::Parse {
        kind,
        line: 0,
        message: format!("missing `{what}`"),
    };

    // header records first, so later records can resolve interface names
    let mut m2m_ids = Vec::new();
    let mut m2b_ids = Vec::new();
    let mut per_rf = Vec::new();
    let (mut n_bs, mut n_sources, mut k, mut n, mut a_value) = (None, None, None, None, None);
    for l in &records {
        match l.fields[0] {
            "m2m" => m2m_ids = l.fields[1..].iter().map(|s| s.to_string()).collect(),
            "m2b" => {
                m2b_ids.push(l.get(1)?.to_string());
                per_rf.push(l.num::<u32>(2)?);
            }
            "n_bs" => n_bs = Some(l.num::<usize>(1)?),
            "n_sources" => n_sources = Some(l.num::<usize>(1)?),
            "k" => k = Some(l.num::<usize>(1)?),
            "n" => n = Some(l.num::<usize>(1)?),
            "a_value" => a_value = Some(l.num::<f64>(1)?),
            "objective" | "source" | "row" | "col" | "w" => {}
            other => return Err(l.err(format!("unknown record `{other}`"))),
        }
    }
    let n_bs = n_bs.ok_or_else(|| missing("n_bs"))?;
    let n_sources = n_sources.ok_or_else(|| missing("n_sources"))?;
    let k = k.ok_or_else(|| missing("k"))?;
    let total: u64 = per_rf.iter().map(|&q| u64::from(q)).sum();
    let ctx = DumpContext {
        m2m_ids,
        m2b_ids,
        quota: Quota {
            per_rf,
            total,
            k: (n_sources as u64).min(n_bs as u64 * total) as usize,
            n_bs,
            n_sources,
        },
    };
    let rf_err = |l: &Lines<'_>, e: Error| match e {
        Error::UnknownRf(id) => l.err(format!("unknown rf `{id}`")),
        e => e,
    };

    if kind == "assignment dump" {
        let mut out = Vec::new();
        for l in records.iter().filter(|l| l.fields[0] == "source") {
            let s: usize = l.num(1)?;
            if s != out.len() {
                return Err(l.err(format!("source {s} out of order")));
            }
            out.push(parse_source(l, &ctx).map_err(|e| rf_err(l, e))?);
        }
        return Ok(Dump::Result(AssignmentResult::new(out, k), ctx));
    }

    let n = n.ok_or_else(|| missing("n"))?;
    let a_value = a_value.ok_or_else(|| missing("a_value"))?;
    let mut row_meta = Vec::with_capacity(n);
    let mut col_meta = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for l in &records {
        match l.fields[0] {
            "row" => {
                if l.num::<usize>(1)? != row_meta.len() {
                    return Err(l.err("rows out of order"));
                }
                row_meta.push(match l.get(2)? {
                    "source" => RowTag::Source(l.num(3)?),
                    "dummy" => RowTag::Dummy,
                    other => return Err(l.err(format!("unknown row tag `{other}`"))),
                });
            }
            "col" => {
                if l.num::<usize>(1)? != col_meta.len() {
                    return Err(l.err("columns out of order"));
                }
                let tag = match l.get(2)? {
                    "quad" => ColTag::Quadruple(QuadrupleVertex {
                        relay: l.num(3)?,
                        m2m_rf: ctx.m2m(l.get(4)?).map_err(|e| rf_err(l, e))?,
                        bs: l.num(5)?,
                        m2b_rf: ctx.m2b(l.get(6)?).map_err(|e| rf_err(l, e))?,
                    }),
                    "pair" => ColTag::Pair(PairVertex {
                        bs: l.num(3)?,
                        m2b_rf: ctx.m2b(l.get(4)?).map_err(|e| rf_err(l, e))?,
                        channel: l.num(5)?,
                    }),
                    "dummy" => ColTag::Dummy,
                    other => return Err(l.err(format!("unknown column tag `{other}`"))),
                };
                col_meta.push(tag);
            }
            "w" => weights.push(
                (1..l.fields.len())
                    .map(|j| l.num::<f64>(j))
                    .collect::<Result<Vec<_>>>()?,
            ),
            _ => {}
        }
    }
    if row_meta.len() != n || col_meta.len() != n || weights.len() != n {
        return Err(Error::Parse {
            kind,
            line: 0,
            message: format!(
                "expected {n} rows, columns and weight lines, got {}, {}, {}",
                row_meta.len(),
                col_meta.len(),
                weights.len()
            ),
        });
    }
    let weights = Matrix::from_rows(&weights)?;
    if weights.cols() != n {
        return Err(Error::NonSquare {
            rows: n,
            cols: weights.cols(),
        });
    }
    Ok(Dump::Sap(
        SapInstance {
            weights,
            row_meta,
            col_meta,
            a_value,
            k,
        },
        ctx,
    ))
}

fn parse_source(l: &Lines<'_>, ctx: &DumpContext) -> Result<SourceAssignment> {
    let (decision, rate) = match l.get(2)? {
        "unmatched" => (Decision::Unmatched, 0.0),
        "direct" => (
            Decision::Direct {
                bs: l.num(3)?,
                m2b_rf: ctx.m2b(l.get(4)?)?,
            },
            l.num(5)?,
        ),
        "relayed" => (
            Decision::Relayed {
                relay: l.num(3)?,
                m2m_rf: ctx.m2m(l.get(4)?)?,
                bs: l.num(5)?,
                m2b_rf: ctx.m2b(l.get(6)?)?,
            },
            l.num(7)?,
        ),
        other => return Err(l.err(format!("unknown decision `{other}`"))),
    };
    Ok(SourceAssignment { decision, rate })
}
