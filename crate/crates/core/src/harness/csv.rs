use std::io::Write;

use super::{SweepCell, SweepRow};
use crate::error::Result;
use crate::report::fmt_g6;

pub const QUANTILES_HEADER: &str =
    "model,n,density_param,detector,variant,q95,q96,q97,q98,q99,replicates,degenerate_count,status";
pub const SAMPLES_HEADER: &str = "replicate,statistic,cell,detector,variant";
pub const POWER_HEADER: &str = "model,n,anomaly_size,detector,DR,FAR,alpha,variant,density_param,degenerate_count,status";

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NaN".to_string(), fmt_g6)
}

/// Null-study rows (cells without an anomaly).
pub fn write_quantiles_csv<W: Write>(mut w: W, cells: &[SweepCell], rows: &[SweepRow]) -> Result<()> {
    writeln!(w, "{QUANTILES_HEADER}")?;
    for r in rows.iter().filter(|r| r.anomaly_size.is_none()) {
        let q: Vec<String> = (0..5).map(|i| opt(r.quantiles.map(|q| q[i]))).collect();
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.model,
            r.n,
            fmt_g6(r.density_param),
            r.detector,
            r.variant,
            q.join(","),
            cells[r.cell].config.replicates,
            r.degenerate_count,
            r.status
        )?;
    }
    Ok(())
}

/// Power-study rows (cells with an anomaly).
pub fn write_power_csv<W: Write>(mut w: W, cells: &[SweepCell], rows: &[SweepRow]) -> Result<()> {
    writeln!(w, "{POWER_HEADER}")?;
    for r in rows.iter().filter(|r| r.anomaly_size.is_some()) {
        let alpha = cells[r.cell]
            .config
            .detectors
            .iter()
            .find(|d| d.variant(r.n) == r.variant && d.name() == r.detector)
            .map(|d| d.alpha());
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.model,
            r.n,
            r.anomaly_size.unwrap_or(0),
            r.detector,
            opt(r.detection_rate),
            opt(r.false_alarm_rate),
            opt(alpha),
            r.variant,
            fmt_g6(r.density_param),
            r.degenerate_count,
            r.status
        )?;
    }
    Ok(())
}

/// Every usable per-replicate statistic of every cell.
pub fn write_samples_csv<W: Write>(mut w: W, cells: &[SweepCell]) -> Result<()> {
    writeln!(w, "{SAMPLES_HEADER}")?;
    for cell in cells {
        let Ok(rep) = &cell.report else { continue };
        for d in &rep.detectors {
            for &(r, s) in &d.samples {
                writeln!(w, "{r},{},{},{},{}", fmt_g6(s), cell.index, d.detector.name(), d.variant)?;
            }
        }
    }
    Ok(())
}
