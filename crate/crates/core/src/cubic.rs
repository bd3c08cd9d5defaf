//! Real roots of cubic polynomials.
//!
//! Uses the trigonometric form when the discriminant admits three real roots
//! and Cardano's formula otherwise.

use std::f64::consts::PI;

/// Real roots of `a x³ + b x² + c x + d`, sorted ascending. `a` must be nonzero.
pub fn real_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    debug_assert!(a != 0.0);
    let b = b / a;
    let c = c / a;
    let d = d / a;
    // Depressed cubic t³ + p t + q with x = t - b/3.
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);

    let mut roots = if p == 0.0 && q == 0.0 {
        vec![-shift]
    } else if disc > 0.0 {
        let sq = disc.sqrt();
        // Pick the sign that avoids cancellation.
        let u = if q > 0.0 {
            (-q / 2.0 - sq).cbrt()
        } else {
            (-q / 2.0 + sq).cbrt()
        };
        let t = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
        vec![t - shift]
    } else {
        let r = (-p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p * r)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3)
            .map(|k| 2.0 * r * (phi - 2.0 * PI * k as f64 / 3.0).cos() - shift)
            .collect()
    };
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(a: f64, b: f64, c: f64, d: f64, x: f64) -> f64 {
        ((a * x + b) * x + c) * x + d
    }

    #[test]
    fn three_distinct_roots() {
        // (x-1)(x-2)(x-3)
        let r = real_roots(1.0, -6.0, 11.0, -6.0);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn single_real_root() {
        // (x-2)(x²+1)
        let r = real_roots(1.0, -2.0, 1.0, -2.0);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn triple_root() {
        let r = real_roots(2.0, -6.0, 6.0, -2.0);
        assert!(r.iter().all(|x| (x - 1.0).abs() < 1e-6));
    }

    #[test]
    fn roots_satisfy_polynomial() {
        let cases = [
            (-0.5, -0.75, 0.25, 0.5),
            (-0.9, -1.7, -0.6, 0.1),
            (3.0, 1.0, -4.0, 0.25),
        ];
        for (a, b, c, d) in cases {
            for x in real_roots(a, b, c, d) {
                assert!(eval(a, b, c, d, x).abs() < 1e-10, "{a} {b} {c} {d} at {x}");
            }
        }
    }
}
