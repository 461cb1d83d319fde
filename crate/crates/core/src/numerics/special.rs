use crate::error::{Error, Result};

/// Highest order accepted by the spherical Bessel/Neumann routines.
pub const MAX_BESSEL_ORDER: u32 = 64;

const RESCALE_THRESHOLD: f64 = 1e250;

fn check_bessel_args(l: u32, x: f64) -> Result<()> {
    if l > MAX_BESSEL_ORDER {
        return Err(Error::Domain(format!(
            "spherical Bessel order {l} exceeds {MAX_BESSEL_ORDER}"
        )));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "spherical Bessel argument must be positive and finite, got {x}"
        )));
    }
    Ok(())
}

fn j0_j1(x: f64) -> (f64, f64) {
    if x < 1e-3 {
        let x2 = x * x;
        (
            1.0 - x2 / 6.0 * (1.0 - x2 / 20.0),
            x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0)),
        )
    } else {
        let (s, c) = x.sin_cos();
        (s / x, s / (x * x) - c / x)
    }
}

/// Spherical Bessel function of the first kind `j_l(x)`.
///
/// Upward recurrence is unstable once `l > x`, so that regime uses Miller's downward
/// recurrence normalised against the closed forms of `j_0` or `j_1`.
pub fn spherical_bessel_j(l: u32, x: f64) -> Result<f64> {
    check_bessel_args(l, x)?;
    let (j0, j1) = j0_j1(x);
    match l {
        0 => return Ok(j0),
        1 => return Ok(j1),
        _ => {}
    }

    if x >= l as f64 {
        let (mut prev, mut cur) = (j0, j1);
        for n in 1..l {
            let next = (2 * n + 1) as f64 / x * cur - prev;
            prev = cur;
            cur = next;
        }
        return Ok(cur);
    }

    // Miller: start well above l where the minimal solution is negligible.
    let start = l + 40 + (2.0 * x).ceil() as u32;
    let mut above = 0.0_f64;
    let mut cur = 1e-300_f64;
    let mut target = 0.0_f64;
    let mut at_one = 0.0_f64;
    for n in (1..=start).rev() {
        let below = (2 * n + 1) as f64 / x * cur - above;
        above = cur;
        cur = below;
        // `cur` now holds the (unnormalised) value at order n - 1.
        if n - 1 == l {
            target = cur;
        }
        if n - 1 == 1 {
            at_one = cur;
        }
        if cur.abs() > RESCALE_THRESHOLD {
            cur /= RESCALE_THRESHOLD;
            above /= RESCALE_THRESHOLD;
            target /= RESCALE_THRESHOLD;
            at_one /= RESCALE_THRESHOLD;
        }
    }
    let at_zero = cur;
    // Normalise on whichever closed form is better conditioned at this x.
    let scale = if j0.abs() >= j1.abs() {
        j0 / at_zero
    } else {
        j1 / at_one
    };
    Ok(target * scale)
}

/// Spherical Neumann function `n_l(x)` (upward recurrence, stable for all l).
pub fn spherical_neumann_n(l: u32, x: f64) -> Result<f64> {
    check_bessel_args(l, x)?;
    let (s, c) = x.sin_cos();
    let n0 = -c / x;
    if l == 0 {
        return Ok(n0);
    }
    let n1 = -c / (x * x) - s / x;
    let (mut prev, mut cur) = (n0, n1);
    for n in 1..l {
        let next = (2 * n + 1) as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Legendre polynomial `P_l(x)` via Bonnet's recurrence.
pub fn legendre_p(l: u32, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(Error::Domain(format!("Legendre argument |x| <= 1 required, got {x}")));
    }
    Ok(bonnet(l, x).0)
}

/// Returns `(P_l(x), P_{l-1}(x))`, with `P_{-1} = 0`.
fn bonnet(l: u32, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (0.0, 1.0);
    for n in 0..l {
        let n = n as f64;
        let next = ((2.0 * n + 1.0) * x * cur - n * prev) / (n + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Derivative `P_l'(x)` on the open interval `(-1, 1)`.
pub fn legendre_p_prime(l: u32, x: f64) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "Legendre derivative needs |x| < 1, got {x}"
        )));
    }
    if l == 0 {
        return Ok(0.0);
    }
    let (p, p_prev) = bonnet(l, x);
    Ok(l as f64 * (x * p - p_prev) / (x * x - 1.0))
}

/// `P_0..=P_{l_max}` and their derivatives at one `x` in `(-1, 1)`.
pub fn legendre_table(l_max: u32, x: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "Legendre derivative needs |x| < 1, got {x}"
        )));
    }
    let n = l_max as usize + 1;
    let mut p = Vec::with_capacity(n);
    let mut dp = Vec::with_capacity(n);
    p.push(1.0);
    dp.push(0.0);
    if l_max >= 1 {
        p.push(x);
        dp.push(1.0);
    }
    for l in 1..l_max as usize {
        let lf = l as f64;
        p.push(((2.0 * lf + 1.0) * x * p[l] - lf * p[l - 1]) / (lf + 1.0));
        dp.push(dp[l - 1] + (2.0 * lf + 1.0) * p[l]);
    }
    Ok((p, dp))
}
