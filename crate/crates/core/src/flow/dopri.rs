//! Dormand–Prince 5(4) embedded pair with FSAL, for small autonomous systems.

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Fifth-order weights minus embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub(crate) const ORDER: i32 = 5;

pub(crate) struct Step<const N: usize> {
    pub y: [f64; N],
    /// Derivative at the new point (first stage of the next step).
    pub dy: [f64; N],
    /// Scaled RMS error estimate; the step is acceptable when `<= 1`.
    pub error: f64,
}

fn combine<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (w, k) in terms {
            acc += w * k[i];
        }
        *o += h * acc;
    }
    out
}

/// One trial step of size `h` from `y` with `k1 = f(y)`. Returns `None` when
/// the right-hand side rejects an intermediate stage.
pub(crate) fn try_step<const N: usize, F>(
    f: &F,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Option<Step<N>>
where
    F: Fn(&[f64; N]) -> Option<[f64; N]>,
{
    let k2 = f(&combine(y, h, &[(A21, k1)]))?;
    let k3 = f(&combine(y, h, &[(A31, k1), (A32, &k2)]))?;
    let k4 = f(&combine(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = f(&combine(
        y,
        h,
        &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)],
    ))?;
    let k6 = f(&combine(
        y,
        h,
        &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
    ))?;
    let y_new = combine(
        y,
        h,
        &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
    );
    let k7 = f(&y_new)?;

    let mut sum = 0.0;
    for i in 0..N {
        let err = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        let scale = abs_tol + rel_tol * y[i].abs().max(y_new[i].abs());
        sum += (err / scale).powi(2);
    }
    let error = (sum / N as f64).sqrt();
    if !error.is_finite() {
        return None;
    }
    Some(Step {
        y: y_new,
        dy: k7,
        error,
    })
}

/// Initial step guess (Hairer, Nørsett & Wanner, II.4), measured on the
/// first `leading` components only.
pub(crate) fn initial_step<const N: usize, F>(
    f: &F,
    y: &[f64; N],
    k1: &[f64; N],
    leading: usize,
    rel_tol: f64,
    abs_tol: f64,
) -> f64
where
    F: Fn(&[f64; N]) -> Option<[f64; N]>,
{
    let norm = |v: &[f64; N]| {
        let s: f64 = v[..leading]
            .iter()
            .zip(y)
            .map(|(x, y0)| (x / (abs_tol + rel_tol * y0.abs())).powi(2))
            .sum();
        (s / leading as f64).sqrt()
    };
    let d0 = norm(y);
    let d1 = norm(k1);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let Some(k2) = f(&combine(y, h0, &[(1.0, k1)])) else {
        return h0 * 1e-3;
    };
    let diff: [f64; N] = std::array::from_fn(|i| (k2[i] - k1[i]) / h0);
    let d2 = norm(&diff);
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / ORDER as f64)
    };
    h1.min(100.0 * h0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_is_fifth_order_accurate() {
        let f = |y: &[f64; 1]| Some([-y[0]]);
        let mut errors = Vec::new();
        for h in [0.2, 0.1] {
            let mut y = [1.0];
            let mut k = f(&y).unwrap();
            let n = (1.0 / h) as usize;
            for _ in 0..n {
                let s = try_step(&f, &y, &k, h, 1.0, 1.0).unwrap();
                y = s.y;
                k = s.dy;
            }
            errors.push((y[0] - (-1f64).exp()).abs());
        }
        let observed = (errors[0] / errors[1]).log2();
        assert!(observed > 4.5, "observed order {observed}");
    }

    #[test]
    fn rejected_stage_propagates() {
        let f = |y: &[f64; 1]| if y[0] > 1.5 { None } else { Some([10.0]) };
        assert!(try_step(&f, &[1.0], &[10.0], 1.0, 1e-6, 1e-9).is_none());
    }
}
