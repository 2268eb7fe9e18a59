//! Mordell integral `h`, the Appell-Lerch sum `mu`, the real-analytic
//! correction `R`, the completed `mu~`, and the period integrals of the weight
//! 3/2 theta functions that produce `R` and `h`.

use std::f64::consts::PI;

use crate::error::{MockError, Result};
use crate::numerics::{
    check_tau, dist_to_int, gaussian_radius, integrate_real_line, integrate_vertical_ray, ln_erfc,
    sign, window, QuadratureSpec, RayDecay, RealLineDecay, ToleranceProfile, C64, I,
};
use crate::theta::{g_ab, jacobi_theta, REL_TOL};

/// Lattice coordinates `(alpha, beta)` with `u = alpha tau + beta`.
pub fn lattice_coords(u: C64, tau: C64) -> (f64, f64) {
    let alpha = u.im / tau.im;
    (alpha, u.re - alpha * tau.re)
}

/// Error if `u` lies within `eps` of the lattice `Z tau + Z`.
pub fn check_off_lattice(u: C64, tau: C64, eps: f64, what: &str) -> Result<()> {
    let (a, b) = lattice_coords(u, tau);
    let d = dist_to_int(a).max(dist_to_int(b));
    if d < eps {
        return Err(MockError::NearPole { what: what.to_string(), dist: d });
    }
    Ok(())
}

/// Mordell integral `h(z; tau) = int e^{pi i tau x^2 - 2 pi z x} / cosh(pi x) dx`.
pub fn mordell_h(z: C64, tau: C64) -> Result<C64> {
    let tau = check_tau(tau)?;
    let y = tau.im;
    let s = z.re.abs();
    let peak = 2.0 * (PI * s * s / y).exp();
    let tol = ToleranceProfile::with_target(1e-14 * peak.max(1.0));
    let f = |x: f64| {
        let ax = x.abs();
        let expo = PI * I * tau * x * x - 2.0 * PI * z * x - PI * ax;
        expo.exp() * (2.0 / (1.0 + (-2.0 * PI * ax).exp()))
    };
    integrate_real_line(f, RealLineDecay { c: 2.0, y, s }, &tol, &QuadratureSpec::default())
}

/// Appell-Lerch sum
/// `mu(u, v; tau) = e^{pi i u} / theta(v) sum_n (-1)^n e^{pi i (n^2+n) tau + 2 pi i n v} / (1 - e^{2 pi i n tau + 2 pi i u})`.
pub fn appell_mu(u: C64, v: C64, tau: C64) -> Result<C64> {
    let tau = check_tau(tau)?;
    check_off_lattice(u, tau, 1e-8, "u on the lattice Z tau + Z")?;
    check_off_lattice(v, tau, 1e-8, "v on the lattice Z tau + Z")?;
    let y = tau.im;
    let center = -0.5 - v.im / y;
    let denom_floor = 1.0 - (-2.0 * PI * y).exp();
    let k = gaussian_radius(PI * y, -denom_floor.ln(), REL_TOL)?;
    let au = u.im / y;
    let range = window(0.0, center, k);
    let lo = (*range.start()).min((-au).floor() as i64 - 1);
    let hi = (*range.end()).max((-au).ceil() as i64 + 1);
    let one = C64::new(1.0, 0.0);
    let mut s = C64::new(0.0, 0.0);
    for n in lo..=hi {
        let nf = n as f64;
        let sgn = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let num = (PI * I * ((nf * nf + nf) * tau + 2.0 * nf * v)).exp();
        let den = one - (2.0 * PI * I * (nf * tau + u)).exp();
        s += num * sgn / den;
    }
    Ok((PI * I * u).exp() / jacobi_theta(v, tau)? * s)
}

/// Real-analytic correction
/// `R(u; tau) = sum_{nu in 1/2 + Z} {sgn(nu) - E((nu + a) sqrt(2y))} (-1)^{nu - 1/2} e^{-pi i nu^2 tau - 2 pi i nu u}`, `a = Im u / y`.
pub fn correction_r(u: C64, tau: C64) -> Result<C64> {
    let tau = check_tau(tau)?;
    let y = tau.im;
    let a = u.im / y;
    let k = gaussian_radius(PI * y, 0.0, REL_TOL)?;
    let range = window(0.5, -a, k);
    let lo = (*range.start()).min((-a).min(0.0).floor() as i64 - 1);
    let hi = (*range.end()).max((-a).max(0.0).ceil() as i64 + 1);
    let sq = (2.0 * y).sqrt();
    let mut s = C64::new(0.0, 0.0);
    for n in lo..=hi {
        let nu = 0.5 + n as f64;
        let x = (nu + a) * sq;
        // phase of (-1)^{nu - 1/2} e^{-pi i nu^2 tau - 2 pi i nu u}
        let phase = (PI * I * ((nu - 0.5) - nu * nu * tau.re - 2.0 * nu * u.re)).exp();
        let log_mag = PI * y * nu * nu + 2.0 * PI * nu * u.im;
        let jump = sign(nu) - sign(x);
        if jump != 0.0 {
            s += phase * log_mag.exp() * jump;
        }
        if x != 0.0 {
            let t = ln_erfc(PI.sqrt() * x.abs()) + log_mag;
            s += phase * t.exp() * sign(x);
        }
    }
    Ok(s)
}

/// Completed Appell-Lerch sum `mu~(u, v) = mu(u, v) + (i/2) R(u - v)`.
pub fn completed_mu(u: C64, v: C64, tau: C64) -> Result<C64> {
    Ok(appell_mu(u, v, tau)? + I * 0.5 * correction_r(u - v, tau)?)
}

fn check_char(a: f64, name: &str) -> Result<()> {
    if !(a > -0.5 && a < 0.5) {
        return Err(MockError::InvalidInput(format!("{name} must lie in (-1/2, 1/2), got {a}")));
    }
    Ok(())
}

/// `sum_{nu in a + Z} |nu| e^{-pi nu^2 t}`
fn abs_nu_gauss(a: f64, t: f64) -> Result<f64> {
    let k = gaussian_radius(0.5 * PI * t, 0.0, REL_TOL)?;
    Ok(window(a, 0.0, k).map(|n| (a + n as f64).abs() * (-PI * (a + n as f64).powi(2) * t).exp()).sum())
}

fn ray_tol() -> ToleranceProfile {
    ToleranceProfile::with_target(1e-12)
}

/// `int_{-conj(tau)}^{i inf} g_{a+1/2, b+1/2}(z) / sqrt(-i (z + tau)) dz`
pub fn period_integral_upper(a: f64, b: f64, tau: C64) -> Result<C64> {
    let tau = check_tau(tau)?;
    check_char(a, "a")?;
    check_char(b, "b")?;
    let (ca, cb) = (a + 0.5, b + 0.5);
    let z0 = -tau.conj();
    let nu0 = ca.min(1.0 - ca);
    let c = abs_nu_gauss(ca, z0.im)? / (2.0 * tau.im).sqrt();
    let f = |z: C64| -> C64 {
        match g_ab(ca, cb, z) {
            Ok(g) => g / (-I * (z + tau)).sqrt(),
            Err(_) => C64::new(f64::NAN, f64::NAN),
        }
    };
    let v = integrate_vertical_ray(f, z0, RayDecay { c, rate: PI * nu0 * nu0 }, &ray_tol(), &QuadratureSpec::default())?;
    finite(v)
}

/// `int_0^{-conj(tau)} g_{a+1/2, b+1/2}(z) / sqrt(-i (z + tau)) dz`, computed
/// after the substitution `z = -1/w` as an integral over a vertical ray.
pub fn period_integral_lower(a: f64, b: f64, tau: C64) -> Result<C64> {
    let tau = check_tau(tau)?;
    check_char(a, "a")?;
    check_char(b, "b")?;
    let (ca, cb) = (a + 0.5, b + 0.5);
    let w0 = 1.0 / tau.conj();
    let nu0 = cb.min(1.0 - cb);
    let c = abs_nu_gauss(cb, w0.im)? / (w0.im.sqrt() * tau.im.sqrt());
    let pref = I * (2.0 * PI * I * ca * cb).exp();
    let f = |w: C64| -> C64 {
        match g_ab(cb, -ca, w) {
            Ok(g) => {
                let s = (-I * w).sqrt();
                -pref * s * s * s * g / ((-I * (tau - 1.0 / w)).sqrt() * w * w)
            }
            Err(_) => C64::new(f64::NAN, f64::NAN),
        }
    };
    let v = integrate_vertical_ray(f, w0, RayDecay { c, rate: PI * nu0 * nu0 }, &ray_tol(), &QuadratureSpec::default())?;
    finite(v)
}

/// `int_0^{i inf} g_{a+1/2, b+1/2}(z) / sqrt(-i (z + tau)) dz`
pub fn period_integral_full(a: f64, b: f64, tau: C64) -> Result<C64> {
    Ok(period_integral_lower(a, b, tau)? + period_integral_upper(a, b, tau)?)
}

/// Closed form `-e^{-pi i a^2 tau + 2 pi i a (b + 1/2)} R(a tau - b)` of the upper period integral.
pub fn period_closed_r(a: f64, b: f64, tau: C64) -> Result<C64> {
    let f = (-PI * I * a * a * tau + 2.0 * PI * I * a * (b + 0.5)).exp();
    Ok(-f * correction_r(a * tau - b, tau)?)
}

/// Closed form `-e^{-pi i a^2 tau + 2 pi i a (b + 1/2)} h(a tau - b)` of the full period integral.
pub fn period_closed_h(a: f64, b: f64, tau: C64) -> Result<C64> {
    let f = (-PI * I * a * a * tau + 2.0 * PI * I * a * (b + 0.5)).exp();
    Ok(-f * mordell_h(a * tau - b, tau)?)
}

/// Closed form `-(1/sqrt(-i tau)) e^{pi i b^2/tau + pi i a} R((a tau - b)/tau; -1/tau)` of the lower piece.
pub fn period_closed_lower(a: f64, b: f64, tau: C64) -> Result<C64> {
    let f = (PI * I * b * b / tau + PI * I * a).exp() / (-I * tau).sqrt();
    Ok(-f * correction_r((a * tau - b) / tau, -1.0 / tau)?)
}

fn finite(v: C64) -> Result<C64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(MockError::Quadrature("non-finite integrand".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_at_origin_for_tau_i() {
        // h(0; i) = int e^{-pi x^2} / cosh(pi x) dx, compare with a plain Riemann sum
        let v = mordell_h(C64::new(0.0, 0.0), I).unwrap();
        let mut s = 0.0;
        let dx = 1e-3;
        for k in -8000..=8000 {
            let x = k as f64 * dx;
            s += (-PI * x * x).exp() / (PI * x).cosh() * dx;
        }
        assert!((v.re - s).abs() < 1e-12 && v.im.abs() < 1e-14);
    }

    #[test]
    fn mu_rejects_lattice_points() {
        let tau = C64::new(0.1, 1.0);
        assert!(appell_mu(tau, C64::new(0.3, 0.2), tau).is_err());
    }
}
