//! `I_p^q = ∫_0^∞ r^q (1+r)^{-p} dr`, evaluated through the two recursions
//! `I_{p+1}^q = (p-q-1)/p · I_p^q` and `I_{p+1}^{q+1} = (q+1)/(p-q-1) · I_{p+1}^q`.

use crate::error::{CoreError, Result};
use crate::numerics::integrate;

/// One link of a recursion chain, kept for inspection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainStep {
    pub p: f64,
    pub q: f64,
    pub value: f64,
}

fn is_int(x: f64) -> bool {
    (x - x.round()).abs() < 1e-12
}

/// Chain from the base `(2, 0)` or `(2, 1/2)` up to `(p, q)`: first climb in
/// `p` with `q` frozen at the base, then climb `(p, q)` diagonally.
///
/// Only available for integer `p` and integer or half-integer `q`; returns
/// `None` otherwise.
pub fn ipq_chain(p: f64, q: f64) -> Option<Vec<ChainStep>> {
    let q0 = if is_int(q) {
        0.0
    } else if is_int(q - 0.5) {
        0.5
    } else {
        return None;
    };
    if !is_int(p) || q < q0 {
        return None;
    }
    let diag = (q - q0).round() as usize;
    // starting p before the diagonal climb
    let p_start = p - diag as f64;
    if p_start < 2.0 - 1e-12 || !is_int(p_start) {
        return None;
    }
    let base = if q0 == 0.0 { 1.0 } else { std::f64::consts::FRAC_PI_2 };
    let mut steps = vec![ChainStep { p: 2.0, q: q0, value: base }];
    let (mut cp, mut cq, mut v) = (2.0, q0, base);
    while cp + 0.5 < p_start {
        v *= (cp - cq - 1.0) / cp;
        cp += 1.0;
        steps.push(ChainStep { p: cp, q: cq, value: v });
    }
    for _ in 0..diag {
        // (cp, cq) -> (cp+1, cq) -> (cp+1, cq+1)
        v *= (cp - cq - 1.0) / cp;
        v *= (cq + 1.0) / (cp - cq - 1.0);
        cp += 1.0;
        cq += 1.0;
        steps.push(ChainStep { p: cp, q: cq, value: v });
    }
    Some(steps)
}

/// Direct adaptive quadrature of `I_p^q`.
pub fn ipq_quadrature(p: f64, q: f64) -> Result<f64> {
    if p - q <= 1.0 {
        return Err(CoreError::Divergent { p, q });
    }
    // r = s/(1-s): r^q (1+r)^{-p} dr = s^q (1-s)^{p-q-2} ds
    // ∫_0^1 s^q (1-s)^b ds, b = p-q-2; split at 1/2 and substitute s = x^m0,
    // 1-s = t^m1 so that both endpoint powers become at least quadratic
    let b = p - q - 2.0;
    let m0 = (3.0 / (q + 1.0)).ceil().max(1.0);
    let m1 = (3.0 / (b + 1.0)).ceil().max(1.0);
    let left = integrate(
        |x| {
            let s = x.powf(m0);
            s.powf(q) * (1.0 - s).powf(b) * m0 * x.powf(m0 - 1.0)
        },
        0.0,
        0.5f64.powf(1.0 / m0),
        1e-14,
        0.0,
    )?;
    let right = integrate(
        |t| {
            let u = t.powf(m1);
            (1.0 - u).powf(q) * u.powf(b) * m1 * t.powf(m1 - 1.0)
        },
        0.0,
        0.5f64.powf(1.0 / m1),
        1e-14,
        0.0,
    )?;
    Ok(left.value + right.value)
}

pub fn ipq(p: f64, q: f64) -> Result<f64> {
    if p - q <= 1.0 || q <= -1.0 {
        return Err(CoreError::Divergent { p, q });
    }
    match ipq_chain(p, q) {
        Some(steps) => Ok(steps.last().map(|s| s.value).unwrap_or(f64::NAN)),
        None => ipq_quadrature(p, q),
    }
}
