use super::matching::rank_by_score;
use super::EvalError;

/// Recall grid 0, 0.01, ..., 1.
pub const RECALL_POINTS: usize = 101;

/// 101-point interpolated AP of one class.
///
/// `decisions` holds `(score, is_tp)` for every detection of the class
/// across the dataset. They are ranked by descending score, with equal
/// scores kept in the given order. Precision is replaced by its running
/// maximum from the right, then read at the first rank whose recall reaches
/// each grid point (zero where recall never gets there).
pub fn average_precision(decisions: &[(f64, bool)], n_gt: usize) -> Result<f64, EvalError> {
    if n_gt == 0 {
        return Err(EvalError::UndefinedAp);
    }
    let scores: Vec<f64> = decisions.iter().map(|d| d.0).collect();
    let order = rank_by_score(&scores);
    let mut recall = Vec::with_capacity(order.len());
    let mut precision = Vec::with_capacity(order.len());
    let mut tp = 0usize;
    for (rank, &i) in order.iter().enumerate() {
        tp += decisions[i].1 as usize;
        recall.push(tp as f64 / n_gt as f64);
        precision.push(tp as f64 / (rank + 1) as f64);
    }
    for i in (0..precision.len().saturating_sub(1)).rev() {
        precision[i] = precision[i].max(precision[i + 1]);
    }
    let mut sum = 0.0;
    for k in 0..RECALL_POINTS {
        let r = k as f64 / (RECALL_POINTS - 1) as f64;
        let at = recall.partition_point(|&x| x < r);
        if at < precision.len() {
            sum += precision[at];
        }
    }
    Ok(sum / RECALL_POINTS as f64)
}
