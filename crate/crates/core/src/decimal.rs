use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

/// Renders `numerator / denominator` with exactly `precision` fractional digits,
/// rounding half to even.
///
/// # Panics
///
/// Panics if `denominator` is zero.
pub fn render_ratio(numerator: &BigUint, denominator: &BigUint, precision: usize) -> String {
    assert!(!denominator.is_zero(), "zero denominator");
    let scale = BigUint::from(10u32).pow(precision as u32);
    let (mut scaled, remainder) = (numerator * &scale).div_rem(denominator);
    let twice = remainder * 2u32;
    if twice > *denominator || (twice == *denominator && scaled.is_odd()) {
        scaled += 1u32;
    }
    let (whole, fraction) = scaled.div_rem(&scale);
    if precision == 0 {
        whole.to_string()
    } else {
        format!("{whole}.{:0>width$}", fraction.to_string(), width = precision)
    }
}
