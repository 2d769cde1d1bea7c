//! Special functions not covered by `statrs`.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

/// Riemann zeta function for real `s ≠ 1`.
///
/// Uses Borwein's accelerated alternating series for `s > 0` and the
/// functional equation otherwise.
pub fn zeta(s: f64) -> f64 {
    if s == 1.0 {
        return f64::INFINITY;
    }
    if s == 0.0 {
        return -0.5;
    }
    if s < 0.0 {
        if s.fract() == 0.0 && (s as i64) % 2 == 0 {
            return 0.0;
        }
        let one_minus = 1.0 - s;
        return 2f64.powf(s) * PI.powf(s - 1.0) * (PI * s / 2.0).sin() * gamma(one_minus)
            * zeta(one_minus);
    }
    eta(s) / (1.0 - 2f64.powf(1.0 - s))
}

/// Dirichlet eta function for `s > 0` (Borwein, algorithm 2).
fn eta(s: f64) -> f64 {
    const N: usize = 40;
    let mut d = [0.0f64; N + 1];
    let mut term = 1.0 / N as f64; // (N+i-1)! 4^i / ((N-i)! (2i)!) at i = 0, times N below
    let mut acc = 0.0;
    for (i, di) in d.iter_mut().enumerate() {
        if i > 0 {
            let i_f = i as f64;
            term *= 4.0 * (N as f64 + i_f - 1.0) * (N as f64 - i_f + 1.0)
                / ((2.0 * i_f) * (2.0 * i_f - 1.0));
        }
        acc += term;
        *di = N as f64 * acc;
    }
    let dn = d[N];
    let mut sum = 0.0;
    for k in 0..N {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (d[k] - dn) / ((k + 1) as f64).powf(s);
    }
    -sum / dn
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((zeta(2.0) - PI * PI / 6.0).abs() < 1e-13);
        assert!((zeta(4.0) - PI.powi(4) / 90.0).abs() < 1e-13);
        assert!((zeta(0.5) + 1.460_354_508_809_586_8).abs() < 1e-12);
        assert!((zeta(-1.0) + 1.0 / 12.0).abs() < 1e-13);
        assert_eq!(zeta(-2.0), 0.0);
        assert!((zeta(0.0) + 0.5).abs() < 1e-15);
        assert!((zeta(-0.5) + 0.207_886_224_977_354_57).abs() < 1e-12);
    }
}
