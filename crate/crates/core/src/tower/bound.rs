/// Smallest prime dividing `t` (`t >= 2`).
pub fn least_prime_divisor(t: u64) -> u64 {
    if t.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3;
    while d * d <= t {
        if t.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    t
}

/// `g(t) = t^k` with `k = (log_p t + 1) / 2`, `p` the least prime divisor of
/// `t`, and `g(1) = 1`.
pub fn bound_g(t: u64) -> f64 {
    if t <= 1 {
        return 1.0;
    }
    let p = least_prime_divisor(t);
    if let Some(m) = exact_log(t, p) {
        // k = (m + 1) / 2, so t^k is t^ceil(m/2), times sqrt(t) when m is even
        let whole = (t as f64).powi(m.div_ceil(2) as i32);
        return if (m + 1).is_multiple_of(2) { whole } else { whole * (t as f64).sqrt() };
    }
    let ln_t = (t as f64).ln();
    let k = 0.5 * (ln_t / (p as f64).ln() + 1.0);
    (k * ln_t).exp()
}

/// `m` with `p^m = t`, if there is one.
fn exact_log(mut t: u64, p: u64) -> Option<u32> {
    let mut m = 0;
    while t.is_multiple_of(p) {
        t /= p;
        m += 1;
    }
    (t == 1).then_some(m)
}

/// Relative tolerance of bound comparisons.
pub const BOUND_TOLERANCE: f64 = 1e-9;

/// `value <= bound`, allowing a relative error of [`BOUND_TOLERANCE`].
pub fn within_bound(value: f64, bound: f64) -> bool {
    value <= bound * (1.0 + BOUND_TOLERANCE)
}
