//! One- and two-dimensional bounded minimization helpers.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search on `[lo, hi]`. The bracket endpoints are compared
/// too, so a minimum sitting on a bound (or a downward jump there) is kept.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    if hi <= lo {
        return (lo, f(lo));
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Cyclic coordinate refinement inside the box `[-ax, ax] × [-by, by]`,
/// searching `±h` around the current point along each axis.
pub(crate) fn refine_2d<F: Fn(f64, f64) -> f64>(
    f: &F,
    start: (f64, f64),
    ax: f64,
    by: f64,
    h: f64,
    tol: f64,
) -> (f64, f64, f64) {
    let (mut x, mut y) = start;
    let mut fx = f(x, y);
    for _ in 0..200 {
        let (x0, y0) = (x, y);
        let (nx, nf) = golden_section(|t| f(t, y), (x - h).max(-ax), (x + h).min(ax), tol);
        if nf < fx {
            x = nx;
            fx = nf;
        }
        let (ny, nf) = golden_section(|t| f(x, t), (y - h).max(-by), (y + h).min(by), tol);
        if nf < fx {
            y = ny;
            fx = nf;
        }
        if (x - x0).abs() < tol && (y - y0).abs() < tol {
            break;
        }
    }
    (x, y, fx)
}

/// Evenly spaced grid over `[-half_width, half_width]` with exact endpoints
/// and an exact zero when `half_width > 0`.
pub(crate) fn symmetric_grid(half_width: f64, step: f64) -> Vec<f64> {
    if half_width <= 0.0 {
        return vec![0.0];
    }
    let mut k = ((2.0 * half_width) / step).ceil() as usize;
    k = k.max(2);
    if k % 2 == 1 {
        k += 1;
    }
    (0..=k)
        .map(|i| {
            if 2 * i == k {
                0.0
            } else if i == k {
                half_width
            } else {
                -half_width + 2.0 * half_width * i as f64 / k as f64
            }
        })
        .collect()
}
