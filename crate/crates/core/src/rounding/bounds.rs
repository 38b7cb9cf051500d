//! Closed-form retention guarantees `Pr[i ∈ S′ | i ∈ S] ≥ …` for finite `k`.

use std::f64::consts::E;

/// Big/small alteration: `1 − 2/α`.
pub fn simple_retention(alpha: f64) -> f64 {
    (1.0 - 2.0 / alpha).max(0.0)
}

/// Upper bound on `Pr[E_ij | i ∈ S]` for the sorted rule:
/// `(1/(αk)) · (1 + (2/(αk))^{1/3})`.
pub fn sorted_deletion_per_constraint(alpha: f64, k: usize) -> f64 {
    let ak = alpha * k as f64;
    (1.0 / ak) * (1.0 + (2.0 / ak).cbrt())
}

/// Sorted alteration: `(1 − (1/(αk))(1 + (2/(αk))^{1/3}))^k`, zero when the
/// base is negative.
pub fn sorted_retention(alpha: f64, k: usize) -> f64 {
    let base = (1.0 - sorted_deletion_per_constraint(alpha, k)).max(0.0);
    base.powi(k as i32)
}

/// `α = 4e · (⌊B⌋ k)^{1/⌊B⌋}`.
pub fn large_b_alpha(k: usize, b_floor: u32) -> f64 {
    let t = f64::from(b_floor);
    4.0 * E * (t * k as f64).powf(1.0 / t)
}

/// Powers-of-two alteration: `(1 − 1/(k⌊B⌋))^k`.
pub fn large_b_retention(k: usize, b_floor: u32) -> f64 {
    let kb = k as f64 * f64::from(b_floor);
    (1.0 - 1.0 / kb).max(0.0).powi(k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(simple_retention(4.0), 0.5);
        // k = 2, α = 1: 1 − ½(1 + 1) = 0
        assert_eq!(sorted_retention(1.0, 2), 0.0);
        // k = 8, α = 1: 1 − ⅛(1 + ∛¼)
        let expected = (1.0 - 0.125 * (1.0 + 0.25f64.cbrt())).powi(8);
        assert!((sorted_retention(1.0, 8) - expected).abs() < 1e-15);
        assert!((large_b_alpha(1, 1) - 4.0 * E).abs() < 1e-12);
        assert!((large_b_alpha(4, 2) - 4.0 * E * 8f64.sqrt()).abs() < 1e-12);
        assert_eq!(large_b_retention(1, 1), 0.0);
        assert_eq!(large_b_retention(2, 1), 0.25);
    }

    #[test]
    fn sorted_retention_tends_to_one_over_e() {
        let r = sorted_retention(1.0, 100_000);
        assert!((r - (-1.0f64).exp()).abs() < 0.02, "{r}");
    }
}
