//! Convergence rate and iteration-count calculators for randomized Kaczmarz.

use super::KaczmarzError;
use crate::linalg::SpectralSummary;

fn check_eps(eps: f64) -> Result<(), KaczmarzError> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(KaczmarzError::InvalidEpsilon(eps))
    }
}

/// Expected squared error after `k` norm-weighted steps:
/// `(1 − σ_min²/‖A‖_F²)^k · init_err_sq`.
pub fn convergence_bound(spectral: &SpectralSummary, init_err_sq: f64, k: u64) -> Result<f64, KaczmarzError> {
    if !(spectral.frob_sq > 0.0) {
        return Err(KaczmarzError::ZeroMatrix);
    }
    let rate = 1.0 - spectral.contraction_ratio();
    Ok(rate.powf(k as f64) * init_err_sq)
}

/// Unrounded `log(1/ε) / (−log(1 − σ_min²/‖A‖_F²))`.
pub fn iteration_estimate(spectral: &SpectralSummary, eps: f64) -> Result<f64, KaczmarzError> {
    check_eps(eps)?;
    if !(spectral.sigma_min > 0.0) || !(spectral.frob_sq > 0.0) {
        return Err(KaczmarzError::NoConvergenceGuarantee);
    }
    let ratio = spectral.contraction_ratio();
    let per_step = -(-ratio).ln_1p();
    Ok((1.0 / eps).ln() / per_step)
}

/// Number of iterations `T` to reach expected squared error `ε` (relative to
/// the initial error), at least 1.
pub fn iteration_count(spectral: &SpectralSummary, eps: f64) -> Result<u64, KaczmarzError> {
    let t = iteration_estimate(spectral, eps)?;
    Ok((t.ceil() as u64).max(1))
}

/// `log(1/ε) / log(r κ² / (r κ² − 1))`
pub fn t_upper_bound(spectral: &SpectralSummary, eps: f64) -> Result<f64, KaczmarzError> {
    check_eps(eps)?;
    let kappa = spectral.kappa.ok_or(KaczmarzError::NoConvergenceGuarantee)?;
    let rk2 = spectral.rank as f64 * kappa * kappa;
    if !(rk2 > 1.0) {
        return Err(KaczmarzError::UpperBoundUndefined { r_kappa_sq: rk2 });
    }
    Ok((1.0 / eps).ln() / (1.0 / (rk2 - 1.0)).ln_1p())
}

/// `log(1/ε) / log(r / (r − 1))`, or 0 for rank one.
pub fn t_lower_bound(spectral: &SpectralSummary, eps: f64) -> Result<f64, KaczmarzError> {
    check_eps(eps)?;
    let r = spectral.rank;
    if r == 0 {
        return Err(KaczmarzError::ZeroMatrix);
    }
    if r == 1 {
        return Ok(0.0);
    }
    Ok((1.0 / eps).ln() / (1.0 / (r as f64 - 1.0)).ln_1p())
}
