use num_complex::Complex64;

use crate::error::{Error, Result};

/// Sum of unit phasors of `y - x`, each rotated by the difference at
/// `reference` so that constant differences add up exactly.
pub(crate) fn phasor_sum(x: &[f64], y: &[f64], reference: f64) -> Complex64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| Complex64::from_polar(1.0, (b - a) - reference))
        .sum()
}

fn check(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.is_empty() {
        return Err(Error::EmptyPhase);
    }
    Ok(())
}

/// Phase-locking value `|mean_t exp(j (phi_y - phi_x))|`.
pub fn plv(x: &[f64], y: &[f64]) -> Result<f64> {
    check(x, y)?;
    let s = phasor_sum(x, y, y[0] - x[0]);
    Ok((s.norm() / x.len() as f64).min(1.0))
}

/// Pairwise PLV over all sequences; symmetric with a unit diagonal.
pub fn plv_matrix<T: AsRef<[f64]>>(phases: &[T]) -> Result<Vec<Vec<f64>>> {
    let n = phases.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 phase sequences, got {n}")));
    }
    let mut m = vec![vec![1.0; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let v = plv(phases[a].as_ref(), phases[b].as_ref())?;
            m[a][b] = v;
            m[b][a] = v;
        }
    }
    Ok(m)
}
