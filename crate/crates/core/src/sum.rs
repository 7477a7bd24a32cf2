/// Pairwise (tree) summation. Fixed split points keep the result identical
/// from run to run regardless of how the terms were produced.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
