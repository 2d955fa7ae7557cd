//! Central finite-difference verification for analytic gradients.

/// Compares `analytic` against central differences of `loss` around
/// `params` and returns the maximum relative error, with the relative
/// denominator floored at 1e-6 so near-zero entries compare absolutely.
pub fn grad_check(
    loss: impl Fn(&[f64]) -> f64,
    params: &[f64],
    analytic: &[f64],
    epsilon: f64,
) -> f64 {
    assert_eq!(params.len(), analytic.len());
    let mut worst = 0.0f64;
    let mut probe = params.to_vec();
    for (i, &a) in analytic.iter().enumerate() {
        let original = probe[i];
        probe[i] = original + epsilon;
        let plus = loss(&probe);
        probe[i] = original - epsilon;
        let minus = loss(&probe);
        probe[i] = original;
        let numeric = (plus - minus) / (2.0 * epsilon);
        let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-6);
        worst = worst.max(rel);
    }
    worst
}
