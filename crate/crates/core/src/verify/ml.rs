//! Partial-fraction (Mittag-Leffler) expansions of `coth`, `csch`, `tanh`
//! and `sech`, as plain partial sums and with an analytic tail correction.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::Neumaier;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MlKind {
    Coth,
    Csch,
    Tanh,
    Sech,
}

impl MlKind {
    pub const ALL: [MlKind; 4] = [MlKind::Coth, MlKind::Csch, MlKind::Tanh, MlKind::Sech];

    /// The hyperbolic function itself.
    pub fn exact(self, z: f64) -> f64 {
        match self {
            MlKind::Coth => 1.0 / z.tanh(),
            MlKind::Csch => 1.0 / z.sinh(),
            MlKind::Tanh => z.tanh(),
            MlKind::Sech => 1.0 / z.cosh(),
        }
    }
}

impl fmt::Display for MlKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MlKind::Coth => "coth",
            MlKind::Csch => "csch",
            MlKind::Tanh => "tanh",
            MlKind::Sech => "sech",
        })
    }
}

impl FromStr for MlKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MlKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| Error::domain("MlKind::from_str", format!("unknown expansion {s:?}")))
    }
}

fn check(kind: MlKind, z: f64, n_terms: usize) -> Result<()> {
    const OP: &str = "ml_partial";
    if !z.is_finite() {
        return Err(Error::domain(OP, format!("argument must be finite, got {z}")));
    }
    if z == 0.0 && matches!(kind, MlKind::Coth | MlKind::Csch) {
        return Err(Error::domain(OP, format!("{kind} has a pole at 0")));
    }
    if n_terms == 0 {
        return Err(Error::domain(OP, "need at least one term"));
    }
    Ok(())
}

/// The `n`-th term (`n >= 1` for coth/csch/tanh, `n >= 0` for sech).
fn term(kind: MlKind, z: f64, n: usize) -> f64 {
    let m = n as f64;
    match kind {
        MlKind::Coth => 2.0 * z / (z * z + m * m * PI * PI),
        MlKind::Csch => {
            let t = 2.0 * z / (z * z + m * m * PI * PI);
            if n.is_multiple_of(2) {
                t
            } else {
                -t
            }
        }
        MlKind::Tanh => {
            let w = (2.0 * m - 1.0) * PI;
            8.0 * z / (4.0 * z * z + w * w)
        }
        MlKind::Sech => {
            let w = 2.0 * m + 1.0;
            let t = 4.0 * PI * w / (4.0 * z * z + PI * PI * w * w);
            if n.is_multiple_of(2) {
                t
            } else {
                -t
            }
        }
    }
}

/// Sum of the first `n_terms` terms of the expansion, including the `1/z`
/// pole term for coth and csch.
pub fn ml_partial(kind: MlKind, z: f64, n_terms: usize) -> Result<f64> {
    check(kind, z, n_terms)?;
    let mut acc = Neumaier::default();
    let range = match kind {
        MlKind::Sech => 0..n_terms,
        _ => 1..n_terms + 1,
    };
    // smallest terms first
    for n in range.rev() {
        acc.add(term(kind, z, n));
    }
    if matches!(kind, MlKind::Coth | MlKind::Csch) {
        acc.add(1.0 / z);
    }
    Ok(acc.total())
}

/// Estimate of everything [`ml_partial`] leaves out.
///
/// Monotone tails (coth, tanh) use the midpoint integral, which has a closed
/// `atan` form; alternating tails (csch, sech) use the first two
/// Euler-Boole terms `(-1)^M (g(M)/2 - g'(M)/4)`.
pub fn ml_tail(kind: MlKind, z: f64, n_terms: usize) -> Result<f64> {
    check(kind, z, n_terms)?;
    let n = n_terms as f64;
    Ok(match kind {
        MlKind::Coth => 2.0 / PI * (z / (PI * (n + 0.5))).atan(),
        MlKind::Tanh => 2.0 / PI * (z / (PI * n)).atan(),
        MlKind::Csch => {
            // first omitted index M = n + 1
            let m = n + 1.0;
            let d = z * z + PI * PI * m * m;
            let g = 2.0 * z / d;
            let g1 = -4.0 * z * PI * PI * m / (d * d);
            let sign = if (n_terms + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * (g / 2.0 - g1 / 4.0)
        }
        MlKind::Sech => {
            // first omitted index M = n
            let w = 2.0 * n + 1.0;
            let d = 4.0 * z * z + PI * PI * w * w;
            let g = 4.0 * PI * w / d;
            let g1 = 2.0 * 4.0 * PI * (4.0 * z * z - PI * PI * w * w) / (d * d);
            let sign = if n_terms.is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * (g / 2.0 - g1 / 4.0)
        }
    })
}

/// [`ml_partial`] plus [`ml_tail`].
pub fn ml_corrected(kind: MlKind, z: f64, n_terms: usize) -> Result<f64> {
    Ok(ml_partial(kind, z, n_terms)? + ml_tail(kind, z, n_terms)?)
}
