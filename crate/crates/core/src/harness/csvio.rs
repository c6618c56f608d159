//! CSV formats for sweeps and Pareto boundaries.
//!
//! Sweep files start with one `#` metadata line (generator, modes), then the
//! header `r,p,q,ensemble,n_states,fid_mean,fid_std,g_mean,g_std,feasible,seed`.
//! Floats use 12 significant digits; infeasible rows leave statistics empty.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::harness::ensemble::RNG_ALGORITHM;
use crate::harness::pareto::ParetoPoint;
use crate::harness::sweep::{CellStats, QMode, SweepRow};
use crate::pure_recovery::TrajectoryMode;

pub const SWEEP_HEADER: [&str; 11] = [
    "r", "p", "q", "ensemble", "n_states", "fid_mean", "fid_std", "g_mean", "g_std", "feasible", "seed",
];
pub const PARETO_HEADER: [&str; 4] = ["fidelity", "success", "p", "q"];

/// C-style `%.{sig}g`.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= sig as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn format_f(x: f64) -> String {
    format_sig(x, 12)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepMeta {
    pub mode: TrajectoryMode,
    pub q_mode: QMode,
}

impl SweepMeta {
    fn line(&self) -> String {
        let mode = match self.mode {
            TrajectoryMode::All => "all",
            TrajectoryMode::NoJumpOnly => "nojump",
        };
        let q_mode = match self.q_mode {
            QMode::Grid => "grid",
            QMode::CompleteRecovery => "complete",
        };
        format!("# qrecover sweep; rng={RNG_ALGORITHM}; mode={mode}; q_mode={q_mode}\n")
    }
}

pub fn write_sweep_csv<W: Write>(mut out: W, rows: &[SweepRow], meta: &SweepMeta) -> Result<()> {
    out.write_all(meta.line().as_bytes())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for row in rows {
        let opt = |x: Option<f64>| x.map(format_f).unwrap_or_default();
        let st = row.stats;
        w.write_record([
            format_f(row.r),
            format_f(row.p),
            opt(row.q),
            row.ensemble.to_string(),
            st.map_or(0, |s| s.n_states).to_string(),
            opt(st.map(|s| s.fid_mean)),
            opt(st.map(|s| s.fid_std)),
            opt(st.map(|s| s.g_mean)),
            opt(st.map(|s| s.g_std)),
            row.feasible().to_string(),
            row.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input)
}

fn column(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::Parse(format!("missing column {name:?}")))
}

fn parse_opt(field: &str, name: &str) -> Result<Option<f64>> {
    let t = field.trim();
    if t.is_empty() {
        return Ok(None);
    }
    t.parse()
        .map(Some)
        .map_err(|_| Error::Parse(format!("bad {name} value {t:?}")))
}

fn parse_req(field: &str, name: &str) -> Result<f64> {
    parse_opt(field, name)?.ok_or_else(|| Error::Parse(format!("empty {name}")))
}

pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut rd = reader(input);
    let headers = rd.headers()?.clone();
    let idx: Vec<usize> = SWEEP_HEADER
        .iter()
        .map(|h| column(&headers, h))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let f = |k: usize| rec.get(idx[k]).unwrap_or("");
        let feasible = match f(9).trim() {
            "true" => true,
            "false" => false,
            other => return Err(Error::Parse(format!("bad feasible flag {other:?}"))),
        };
        let stats = if feasible {
            Some(CellStats {
                n_states: f(4)
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad n_states {:?}", f(4))))?,
                fid_mean: parse_req(f(5), "fid_mean")?,
                fid_std: parse_req(f(6), "fid_std")?,
                g_mean: parse_req(f(7), "g_mean")?,
                g_std: parse_req(f(8), "g_std")?,
            })
        } else {
            None
        };
        rows.push(SweepRow {
            r: parse_req(f(0), "r")?,
            p: parse_req(f(1), "p")?,
            q: parse_opt(f(2), "q")?,
            ensemble: f(3).trim().parse()?,
            seed: f(10)
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad seed {:?}", f(10))))?,
            stats,
        });
    }
    Ok(rows)
}

pub fn write_pareto_csv<W: Write>(out: W, points: &[ParetoPoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PARETO_HEADER)?;
    for pt in points {
        w.write_record([pt.fidelity, pt.success, pt.p, pt.q].map(format_f))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_pareto_csv<R: Read>(input: R) -> Result<Vec<ParetoPoint>> {
    let mut rd = reader(input);
    let headers = rd.headers()?.clone();
    let idx: Vec<usize> = PARETO_HEADER
        .iter()
        .map(|h| column(&headers, h))
        .collect::<Result<_>>()?;
    rd.records()
        .map(|rec| {
            let rec = rec?;
            let v = |k: usize| parse_req(rec.get(idx[k]).unwrap_or(""), PARETO_HEADER[k]);
            Ok(ParetoPoint {
                fidelity: v(0)?,
                success: v(1)?,
                p: v(2)?,
                q: v(3)?,
            })
        })
        .collect()
}
