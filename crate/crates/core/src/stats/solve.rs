//! Safeguarded Newton iteration for inverting monotone CDFs.

const MAX_ITER: usize = 300;

/// Finds the root of an increasing function inside `[lo, hi]`.
///
/// `eval` returns the residual and its derivative. Newton steps that leave
/// the current bracket are replaced by bisection (geometric when the bracket
/// is strictly positive and wide, so tiny roots are reached quickly).
pub(crate) fn newton_bracketed<F>(eval: F, x0: f64, mut lo: f64, mut hi: f64, rel_tol: f64) -> f64
where
    F: Fn(f64) -> (f64, f64),
{
    let mut x = if x0 > lo && x0 < hi { x0 } else { midpoint(lo, hi) };
    for _ in 0..MAX_ITER {
        let (r, d) = eval(x);
        if r == 0.0 {
            return x;
        }
        if r > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - r / d;
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            midpoint(lo, hi)
        };
        let step = (next - x).abs();
        x = next;
        if step <= rel_tol * x.abs() || hi - lo <= rel_tol * x.abs() || step == 0.0 {
            break;
        }
    }
    x
}

fn midpoint(lo: f64, hi: f64) -> f64 {
    if lo > 0.0 && hi / lo > 16.0 {
        (lo * hi).sqrt()
    } else if hi < 0.0 && lo / hi > 16.0 {
        -(lo * hi).sqrt()
    } else {
        0.5 * (lo + hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cube_root() {
        let r = newton_bracketed(|x| (x * x * x - 2.0, 3.0 * x * x), 10.0, 0.0, 10.0, 1e-15);
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn survives_bad_derivative() {
        // Derivative deliberately wrong: bisection must still converge.
        let r = newton_bracketed(|x| (x - 0.3, 1e-12), 0.9, 0.0, 1.0, 1e-14);
        assert!((r - 0.3).abs() < 1e-12);
    }
}
