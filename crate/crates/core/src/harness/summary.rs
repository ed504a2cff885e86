use serde::{Deserialize, Serialize};

use super::sweep::RunRecord;
use crate::algorithms::Algorithm;
use crate::bandit::BanditInstance;
use crate::chartime::{
    kl_char_time_bernoulli, lower_bound_overlay, tv_char_time, MirrorAscentConfig,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    High,
    Low,
}

/// Aggregates for one (algorithm, instance, ε) cell. Column order matches
/// the summary CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub algo: Algorithm,
    pub instance: String,
    pub epsilon: f64,
    pub delta: f64,
    pub runs: usize,
    pub mean_tau: f64,
    pub std_tau: f64,
    pub error_rate: f64,
    /// Filled in by [`annotate_regimes`].
    pub regime: Option<Regime>,
}

/// Characteristic-time annotations for one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeAnnotation {
    pub t_kl: f64,
    pub t_tv: f64,
    /// `ε* = T*_TV / (6 T*_KL)`.
    pub boundary: f64,
    /// `(ε, max(T*_KL, T*_TV/(6ε)) log(1/(3δ)))` for every ε in the summary.
    pub overlay: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub cells: Vec<CellSummary>,
    pub annotation: Option<RegimeAnnotation>,
}

/// Sample mean and `n - 1` standard deviation (0 for a single value).
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Some((mean, 0.0));
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    Some((mean, (ss / (n - 1.0)).sqrt()))
}

/// Groups consecutive records by (algorithm, instance, ε) and aggregates
/// each group. Input order is kept, so sorted sweep output gives sorted cells.
pub fn summarize(records: &[RunRecord]) -> Result<SweepSummary> {
    if records.is_empty() {
        return Err(Error::EmptyCell("no records".into()));
    }
    let mut cells = Vec::new();
    let mut start = 0;
    while start < records.len() {
        let head = &records[start];
        let same = |r: &RunRecord| {
            r.algo == head.algo && r.instance == head.instance && r.epsilon.to_bits() == head.epsilon.to_bits()
        };
        let end = start + records[start..].iter().take_while(|r| same(r)).count();
        let group = &records[start..end];
        let taus: Vec<f64> = group.iter().map(|r| r.stopping_time as f64).collect();
        let (mean_tau, std_tau) = mean_std(&taus).expect("group is non-empty");
        let errors = group.iter().filter(|r| !r.correct).count();
        cells.push(CellSummary {
            algo: head.algo,
            instance: head.instance.clone(),
            epsilon: head.epsilon,
            delta: head.delta,
            runs: group.len(),
            mean_tau,
            std_tau,
            error_rate: errors as f64 / group.len() as f64,
            regime: None,
        });
        start = end;
    }
    Ok(SweepSummary { cells, annotation: None })
}

/// Flags each cell as high- or low-privacy against `ε*` and attaches the
/// lower-bound overlay.
pub fn annotate_regimes(mut summary: SweepSummary, instance: &BanditInstance) -> Result<SweepSummary> {
    let t_tv = tv_char_time(instance)?.value;
    let t_kl = kl_char_time_bernoulli(instance, &MirrorAscentConfig::default())?.value;
    let boundary = t_tv / (6.0 * t_kl);
    let mut overlay: Vec<(f64, f64)> = Vec::new();
    for cell in &mut summary.cells {
        cell.regime = Some(if cell.epsilon < boundary { Regime::High } else { Regime::Low });
        if !overlay.iter().any(|(e, _)| *e == cell.epsilon) {
            overlay.push((cell.epsilon, lower_bound_overlay(t_kl, t_tv, cell.epsilon, cell.delta)));
        }
    }
    overlay.sort_by(|a, b| a.0.total_cmp(&b.0));
    summary.annotation = Some(RegimeAnnotation { t_kl, t_tv, boundary, overlay });
    Ok(summary)
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    algo: Algorithm,
    instance: &'a str,
    epsilon: f64,
    delta: f64,
    runs: usize,
    mean_tau: f64,
    std_tau: f64,
    error_rate: f64,
    regime: &'a str,
}

pub fn write_runs_csv<W: std::io::Write>(records: &[RunRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_csv<W: std::io::Write>(summary: &SweepSummary, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for c in &summary.cells {
        w.serialize(SummaryRow {
            algo: c.algo,
            instance: &c.instance,
            epsilon: c.epsilon,
            delta: c.delta,
            runs: c.runs,
            mean_tau: c.mean_tau,
            std_tau: c.std_tau,
            error_rate: c.error_rate,
            regime: match c.regime {
                Some(Regime::High) => "high",
                Some(Regime::Low) => "low",
                None => "",
            },
        })?;
    }
    w.flush()?;
    Ok(())
}
