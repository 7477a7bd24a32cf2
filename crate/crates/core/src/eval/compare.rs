use std::fmt::Write as _;

use serde::Serialize;

use super::EvalError;
use crate::criteria::{CriterionId, ErpImageSpec};
use crate::geometry::SphericalRect;

/// IoU of every pair under every criterion at every resolution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareTable {
    pub pairs: Vec<(SphericalRect, SphericalRect)>,
    pub criteria: Vec<CriterionId>,
    pub resolutions: Vec<ErpImageSpec>,
    /// `values[pair][criterion][resolution]`; NaN where the criterion failed.
    pub values: Vec<Vec<Vec<f64>>>,
}

/// The criterion as run at `res`: the integral oracle takes `res` as its
/// own grid, everything else keeps its parameters.
fn at_resolution(id: CriterionId, res: ErpImageSpec) -> CriterionId {
    match id {
        CriterionId::PixelIntegral(_) => CriterionId::PixelIntegral(res),
        other => other,
    }
}

fn depends_on_grid(id: CriterionId) -> bool {
    matches!(id, CriterionId::PlanarRect | CriterionId::Circle | CriterionId::PixelIntegral(_))
}

/// Table of IoUs, rows = criteria and columns = resolutions, per pair.
/// Criteria that ignore the grid are computed once and repeated.
pub fn compare_criteria(
    pairs: &[(SphericalRect, SphericalRect)],
    criteria: &[CriterionId],
    resolutions: &[ErpImageSpec],
) -> Result<CompareTable, EvalError> {
    if pairs.is_empty() {
        return Err(EvalError::EmptyInput("pairs"));
    }
    if criteria.is_empty() {
        return Err(EvalError::EmptyInput("criteria"));
    }
    if resolutions.is_empty() {
        return Err(EvalError::EmptyInput("resolutions"));
    }
    let values = pairs
        .iter()
        .map(|(b1, b2)| {
            criteria
                .iter()
                .map(|&id| {
                    let run = |res: ErpImageSpec| {
                        at_resolution(id, res).evaluate(b1, b2, res).unwrap_or_else(|e| {
                            log::warn!("{id} failed on {b1} / {b2}: {e}");
                            f64::NAN
                        })
                    };
                    if depends_on_grid(id) {
                        resolutions.iter().map(|&r| run(r)).collect()
                    } else {
                        vec![run(resolutions[0]); resolutions.len()]
                    }
                })
                .collect()
        })
        .collect();
    Ok(CompareTable {
        pairs: pairs.to_vec(),
        criteria: criteria.to_vec(),
        resolutions: resolutions.to_vec(),
        values,
    })
}

fn cell(v: f64) -> String {
    if v.is_nan() {
        "n/a".to_string()
    } else {
        format!("{v:.5}")
    }
}

impl CompareTable {
    /// One block per pair: a header line, then one row per criterion.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (p, (b1, b2)) in self.pairs.iter().enumerate() {
            let _ = writeln!(s, "pair {p}: {b1} vs {b2}");
            let _ = write!(s, "{:<14}", "criterion");
            for r in &self.resolutions {
                let _ = write!(s, " {:>12}", r.to_string());
            }
            s.push('\n');
            for (c, id) in self.criteria.iter().enumerate() {
                let _ = write!(s, "{:<14}", id.label());
                for v in &self.values[p][c] {
                    let _ = write!(s, " {:>12}", cell(*v));
                }
                s.push('\n');
            }
            s.push('\n');
        }
        s
    }

    /// Header `pair,criterion,label,<WxH>...`, one record per pair and
    /// criterion, full precision.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["pair".to_string(), "criterion".into(), "label".into()];
        header.extend(self.resolutions.iter().map(|r| r.to_string()));
        out.write_record(&header)?;
        for (p, rows) in self.values.iter().enumerate() {
            for (c, row) in rows.iter().enumerate() {
                let mut rec = vec![p.to_string(), self.criteria[c].to_string(), self.criteria[c].label().to_string()];
                rec.extend(row.iter().map(|&v| if v.is_nan() { "n/a".to_string() } else { v.to_string() }));
                out.write_record(&rec)?;
            }
        }
        out.flush()?;
        Ok(())
    }
}
