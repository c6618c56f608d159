//! Fidelity/success trade-off boundary of a sweep at fixed damping.

use crate::error::{Error, Result};
use crate::harness::sweep::SweepRow;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParetoPoint {
    pub fidelity: f64,
    pub success: f64,
    pub p: f64,
    pub q: f64,
}

const SAME_R: f64 = 1e-12;

/// Splits the observed fidelity range into `bins` equal bins and keeps the
/// highest-success row of each, then drops bins whose winner is dominated
/// (another winner has higher fidelity and at least the same success).
/// Output is ordered by fidelity, with success non-increasing. Infeasible
/// rows are ignored; all remaining rows must share one damping rate.
pub fn pareto(rows: &[SweepRow], bins: usize) -> Result<Vec<ParetoPoint>> {
    if bins < 2 {
        return Err(Error::TooFewBins(bins));
    }
    let points: Vec<ParetoPoint> = rows
        .iter()
        .filter_map(|row| {
            let st = row.stats?;
            Some(ParetoPoint {
                fidelity: st.fid_mean,
                success: st.g_mean,
                p: row.p,
                q: row.q?,
            })
        })
        .collect();
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut rs: Vec<f64> = Vec::new();
    for row in rows.iter().filter(|row| row.feasible()) {
        if !rs.iter().any(|r| (r - row.r).abs() <= SAME_R) {
            rs.push(row.r);
        }
    }
    if rs.len() > 1 {
        return Err(Error::MixedDamping(rs));
    }

    let lo = points.iter().map(|pt| pt.fidelity).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|pt| pt.fidelity).fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / bins as f64;
    let mut best: Vec<Option<ParetoPoint>> = vec![None; bins];
    for pt in points {
        let k = if width > 0.0 {
            (((pt.fidelity - lo) / width) as usize).min(bins - 1)
        } else {
            0
        };
        match best[k] {
            Some(b) if b.success >= pt.success => {}
            _ => best[k] = Some(pt),
        }
    }
    let mut out: Vec<ParetoPoint> = best.into_iter().flatten().collect();
    out.sort_by(|a, b| a.fidelity.total_cmp(&b.fidelity));
    let mut best_success = f64::NEG_INFINITY;
    let mut kept: Vec<ParetoPoint> = out
        .into_iter()
        .rev()
        .filter(|pt| {
            let keep = pt.success > best_success;
            best_success = best_success.max(pt.success);
            keep
        })
        .collect();
    kept.reverse();
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::ensemble::EnsembleKind;
    use crate::harness::sweep::CellStats;

    fn row(r: f64, p: f64, q: f64, fid: f64, g: f64) -> SweepRow {
        SweepRow {
            r,
            p,
            q: Some(q),
            ensemble: EnsembleKind::Pure,
            seed: 0,
            stats: Some(CellStats {
                fid_mean: fid,
                fid_std: 0.0,
                g_mean: g,
                g_std: 0.0,
                n_states: 1,
            }),
        }
    }

    #[test]
    fn identical_rows_collapse() {
        let rows = vec![row(0.5, 0.2, 0.3, 0.7, 0.4); 5];
        let out = pareto(&rows, 10).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].fidelity, 0.7);
    }

    #[test]
    fn keeps_max_success_in_bin() {
        let rows = vec![row(0.5, 0.1, 0.1, 0.4, 0.9), row(0.5, 0.2, 0.2, 0.4, 0.2)];
        let out = pareto(&rows, 4).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].success, 0.9);
        assert_eq!((out[0].p, out[0].q), (0.1, 0.1));
    }

    #[test]
    fn sorted_by_fidelity() {
        let rows = vec![
            row(0.5, 0.0, 0.0, 0.9, 0.1),
            row(0.5, 0.0, 0.0, 0.5, 0.8),
            row(0.5, 0.0, 0.0, 0.7, 0.5),
        ];
        let out = pareto(&rows, 3).unwrap();
        let f: Vec<f64> = out.iter().map(|p| p.fidelity).collect();
        assert_eq!(f, vec![0.5, 0.7, 0.9]);
    }

    #[test]
    fn dominated_bins_are_dropped() {
        let rows = vec![
            row(0.5, 0.0, 0.0, 0.2, 0.6),
            row(0.5, 0.0, 0.0, 0.3, 1.0),
            row(0.5, 0.0, 0.0, 0.6, 0.7),
            row(0.5, 0.0, 0.0, 0.8, 0.7),
            row(0.5, 0.0, 0.0, 0.9, 0.3),
        ];
        let out = pareto(&rows, 10).unwrap();
        let pts: Vec<(f64, f64)> = out.iter().map(|p| (p.fidelity, p.success)).collect();
        assert_eq!(pts, vec![(0.3, 1.0), (0.8, 0.7), (0.9, 0.3)]);
    }

    #[test]
    fn errors() {
        assert!(matches!(pareto(&[], 4), Err(Error::EmptyInput)));
        let rows = vec![row(0.5, 0.0, 0.0, 0.9, 0.1)];
        assert!(matches!(pareto(&rows, 1), Err(Error::TooFewBins(1))));
        let rows = vec![row(0.5, 0.0, 0.0, 0.9, 0.1), row(0.6, 0.0, 0.0, 0.9, 0.1)];
        assert!(matches!(pareto(&rows, 4), Err(Error::MixedDamping(_))));
        let mut infeasible = row(0.5, 0.0, 0.0, 0.9, 0.1);
        infeasible.stats = None;
        assert!(matches!(pareto(&[infeasible], 4), Err(Error::EmptyInput)));
    }
}
