//! Classical unary theta functions, the weight 3/2 unary theta functions
//! `g_{a,b}`, and the Dedekind eta function.

use std::f64::consts::PI;

use crate::error::{MockError, Result};
use crate::numerics::{check_tau, gaussian_radius, window, C64, I};

/// Terms below this fraction of the dominant Gaussian term are dropped.
pub const REL_TOL: f64 = 1e-18;

/// `sum_{n : |a + n - center| < K} f(a + n)` where `|f(nu)|` is dominated by
/// `exp(log_scale - alpha (nu - center)^2)` and `K` makes the tail negligible.
pub fn gaussian_lattice_sum<F: Fn(f64) -> C64>(a: f64, alpha: f64, center: f64, f: F) -> Result<C64> {
    let k = gaussian_radius(alpha, 0.0, REL_TOL)?;
    let mut s = C64::new(0.0, 0.0);
    for n in window(a, center, k) {
        s += f(a + n as f64);
    }
    Ok(s)
}

/// `sum_{nu in a + Z} e^{pi i nu^2 tau + 2 pi i nu (z + b)}`
pub fn theta_char(a: f64, b: f64, z: C64, tau: C64) -> Result<C64> {
    let tau = check_tau(tau)?;
    let y = tau.im;
    let center = -z.im / y;
    gaussian_lattice_sum(a, PI * y, center, |nu| (PI * I * (nu * nu * tau + 2.0 * nu * (z + b))).exp())
}

/// `sum_{nu in a + Z} nu e^{pi i nu^2 tau + 2 pi i nu (z + b)}`
pub fn theta_char_nu(a: f64, b: f64, z: C64, tau: C64) -> Result<C64> {
    let tau = check_tau(tau)?;
    let y = tau.im;
    let center = -z.im / y;
    gaussian_lattice_sum(a, 0.5 * PI * y, center, |nu| {
        (PI * I * (nu * nu * tau + 2.0 * nu * (z + b))).exp() * nu
    })
}

/// Jacobi theta function `theta(z; tau) = theta_{1/2,1/2}(z; tau)`.
pub fn jacobi_theta(z: C64, tau: C64) -> Result<C64> {
    theta_char(0.5, 0.5, z, tau)
}

/// `d/dz theta(z; tau)` at `z = 0`.
pub fn jacobi_theta_prime0(tau: C64) -> Result<C64> {
    Ok(2.0 * PI * I * g_ab(0.5, 0.5, tau)?)
}

/// `theta_{m,l}(z; tau) = sum_{lambda = l mod 2m} q^{lambda^2/4m} zeta^lambda`.
pub fn theta_ml(m: i64, l: i64, z: C64, tau: C64) -> Result<C64> {
    if m <= 0 {
        return Err(MockError::InvalidInput(format!("index must be positive, got {m}")));
    }
    let mm = m as f64;
    theta_char(l as f64 / (2.0 * mm), 0.0, z * (2.0 * mm), tau * (2.0 * mm))
}

/// `g_{a,b}(tau) = sum_{nu in a + Z} nu e^{pi i nu^2 tau + 2 pi i nu b}`
pub fn g_ab(a: f64, b: f64, tau: C64) -> Result<C64> {
    theta_char_nu(a, b, C64::new(0.0, 0.0), tau)
}

/// Dedekind eta `q^{1/24} prod (1 - q^n)`.
pub fn dedekind_eta(tau: C64) -> Result<C64> {
    let tau = check_tau(tau)?;
    let q = (2.0 * PI * I * tau).exp();
    let mut prod = C64::new(1.0, 0.0);
    let mut qn = q;
    let mut n = 0;
    while qn.norm() > 1e-18 {
        prod *= C64::new(1.0, 0.0) - qn;
        qn *= q;
        n += 1;
        if n > 1_000_000 {
            return Err(MockError::Truncation("eta product did not converge".into()));
        }
    }
    Ok((2.0 * PI * I * tau / 24.0).exp() * prod)
}

/// Jacobi triple product form of `theta(z; tau)`, computed as a product.
pub fn jacobi_theta_product(z: C64, tau: C64) -> Result<C64> {
    let tau = check_tau(tau)?;
    let q = (2.0 * PI * I * tau).exp();
    let zeta = (2.0 * PI * I * z).exp();
    let mut prod = C64::new(1.0, 0.0);
    let mut qn = q;
    let one = C64::new(1.0, 0.0);
    let mut n = 1;
    loop {
        let f = (one - qn) * (one - zeta * qn / q) * (one - qn / zeta);
        prod *= f;
        if qn.norm() * (1.0 + zeta.norm() / q.norm() + 1.0 / zeta.norm()) < 1e-18 {
            break;
        }
        qn *= q;
        n += 1;
        if n > 1_000_000 {
            return Err(MockError::Truncation("triple product did not converge".into()));
        }
    }
    Ok(-I * (2.0 * PI * I * tau / 8.0).exp() * (-PI * I * z).exp() * prod)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_at_i() {
        // eta(i) = Gamma(1/4) / (2 pi^{3/4})
        let gamma_quarter = 3.625_609_908_221_908_4;
        let expect = gamma_quarter / (2.0 * PI.powf(0.75));
        let got = dedekind_eta(I).unwrap();
        assert!((got.re - expect).abs() < 1e-14 && got.im.abs() < 1e-15);
    }

    #[test]
    fn theta_vanishes_at_zero() {
        let t = jacobi_theta(C64::new(0.0, 0.0), C64::new(0.1, 0.9)).unwrap();
        assert!(t.norm() < 1e-15);
    }
}
