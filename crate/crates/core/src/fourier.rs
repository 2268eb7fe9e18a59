//! Fourier coefficients of meromorphic Jacobi forms.
//!
//! The building block `f_u` has a single simple pole per period cell; its
//! completion `f~_u` removes the `u`-dependence of the theta decomposition at
//! the price of real-analytic corrections `R_{m,l}`. A form with simple poles
//! decomposes as `sum_l h_l theta_{m,l} + sum_u d_u f~_u`.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{MockError, Result};
use crate::lerch::{check_off_lattice, lattice_coords};
use crate::numerics::{
    check_tau, gaussian_radius, ln_erfc, residue_by_contour, sign, window, C64, I,
};
use crate::theta::{dedekind_eta, theta_char, theta_ml, REL_TOL};

fn check_index(m: i64) -> Result<()> {
    if m <= 0 {
        return Err(MockError::InvalidInput(format!("index must be positive, got {m}")));
    }
    Ok(())
}

/// `f_u(z; tau) = sum_lambda e^{2 pi i m lambda^2 tau + 4 pi i m lambda z} / (1 - e^{2 pi i lambda tau + 2 pi i (z - u)})`
pub fn f_u(m: i64, u: C64, z: C64, tau: C64) -> Result<C64> {
    check_index(m)?;
    let tau = check_tau(tau)?;
    check_off_lattice(z - u, tau, 1e-8, "z - u on the lattice Z tau + Z")?;
    let y = tau.im;
    let mf = m as f64;
    let center = -z.im / y;
    let floor = 1.0 - (-2.0 * PI * y).exp();
    let k = gaussian_radius(2.0 * PI * mf * y, -floor.ln(), REL_TOL)?;
    let w = window(0.0, center, k);
    let a = (z - u).im / y;
    let lo = (*w.start()).min((-a).floor() as i64 - 1);
    let hi = (*w.end()).max((-a).ceil() as i64 + 1);
    let one = C64::new(1.0, 0.0);
    let mut s = C64::new(0.0, 0.0);
    for l in lo..=hi {
        let lf = l as f64;
        let num = (2.0 * PI * I * mf * (lf * lf * tau + 2.0 * lf * z)).exp();
        let den = one - (2.0 * PI * I * (lf * tau + z - u)).exp();
        s += num / den;
    }
    Ok(s)
}

/// `R_{m,l}(u; tau) = sum_{lambda = l mod 2m} {sign(lambda + 1/2) - E((lambda + 2m Im u / y) sqrt(y/m))} e^{-pi i lambda^2 tau / 2m - 2 pi i lambda u}`
pub fn r_ml(m: i64, l: i64, u: C64, tau: C64) -> Result<C64> {
    check_index(m)?;
    let tau = check_tau(tau)?;
    let y = tau.im;
    let mf = m as f64;
    let two_m = 2 * m;
    let a = 2.0 * mf * u.im / y;
    let alpha = PI * y / (2.0 * mf);
    let k = gaussian_radius(alpha, 0.0, REL_TOL)?;
    let lmin = (-a - k).min(-a.abs() - 1.0);
    let lmax = (-a + k).max(a.abs() + 1.0);
    let l0 = l.rem_euclid(two_m);
    let kmin = ((lmin - l0 as f64) / two_m as f64).floor() as i64;
    let kmax = ((lmax - l0 as f64) / two_m as f64).ceil() as i64;
    let sq = (y / mf).sqrt();
    let mut s = C64::new(0.0, 0.0);
    for kk in kmin..=kmax {
        let lam = (l0 + two_m * kk) as f64;
        let x = (lam + a) * sq;
        let phase = (-PI * I * (lam * lam * tau.re / (2.0 * mf) + 2.0 * lam * u.re)).exp();
        let log_mag = PI * y * lam * lam / (2.0 * mf) + 2.0 * PI * lam * u.im;
        let jump = sign(lam + 0.5) - sign(x);
        if jump != 0.0 {
            s += phase * log_mag.exp() * jump;
        }
        if x != 0.0 {
            s += phase * (ln_erfc(PI.sqrt() * x.abs()) + log_mag).exp() * sign(x);
        }
    }
    Ok(s)
}

/// `f~_u = f_u - (1/2) sum_{l mod 2m} R_{m,l}(u) theta_{m,l}(z)`
pub fn f_tilde(m: i64, u: C64, z: C64, tau: C64) -> Result<C64> {
    let mut s = f_u(m, u, z, tau)?;
    for l in 0..2 * m {
        s -= 0.5 * r_ml(m, l, u, tau)? * theta_ml(m, l, z, tau)?;
    }
    Ok(s)
}

pub type FormEvaluator = Arc<dyn Fn(C64, C64) -> Result<C64> + Send + Sync>;

/// Simple pole at `z = alpha tau + beta` modulo the period lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleSpec {
    pub alpha: f64,
    pub beta: f64,
}

/// A function of `(z, tau)` satisfying the elliptic law of index `m` with
/// simple poles at the listed lattice coordinates.
#[derive(Clone)]
pub struct JacobiFormSpec {
    pub weight: i32,
    pub index: i64,
    pub eval: FormEvaluator,
    pub poles: Vec<PoleSpec>,
}

/// Contour radius and node count for residues.
pub const RESIDUE_RADIUS: f64 = 1e-3;
pub const RESIDUE_NODES: usize = 64;

impl JacobiFormSpec {
    /// Checks `phi(z + tau) = e^{-2 pi i m (tau + 2z)} phi(z)` and `phi(z + 1) = phi(z)` at probe points.
    pub fn check_elliptic(&self, tau: C64) -> Result<()> {
        let m = self.index as f64;
        for z in [C64::new(0.123, 0.0371 * tau.im), C64::new(-0.271, 0.31 * tau.im)] {
            let v = (self.eval)(z, tau)?;
            let vt = (self.eval)(z + tau, tau)?;
            let v1 = (self.eval)(z + 1.0, tau)?;
            let expect = (-2.0 * PI * I * m * (tau + 2.0 * z)).exp() * v;
            let scale = v.norm().max(1e-300);
            if (vt - expect).norm() > 1e-8 * scale.max(expect.norm()) || (v1 - v).norm() > 1e-8 * scale {
                return Err(MockError::NotJacobi("elliptic transformation fails at a probe point".into()));
            }
        }
        Ok(())
    }

    /// Poles inside `P_p = p + [0,1) tau + [0,1)`, as points of the plane.
    pub fn poles_in_cell(&self, p: C64, tau: C64) -> Vec<C64> {
        let (pa, pb) = lattice_coords(p, tau);
        self.poles
            .iter()
            .map(|pole| {
                let a = pole.alpha + (pa - pole.alpha).ceil();
                let b = pole.beta + (pb - pole.beta).ceil();
                tau * a + b
            })
            .collect()
    }

    /// `d_u = -2 pi i Res_{z=u} phi`
    pub fn residue_d(&self, u: C64, tau: C64) -> Result<C64> {
        let err = RefCell::new(None);
        let r = residue_by_contour(
            |z| match (self.eval)(z, tau) {
                Ok(v) => v,
                Err(e) => {
                    *err.borrow_mut() = Some(e);
                    C64::new(0.0, 0.0)
                }
            },
            u,
            RESIDUE_RADIUS,
            RESIDUE_NODES,
        );
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        Ok(-2.0 * PI * I * r)
    }
}

/// Default base point `p = -tau/2 - 1/2 + 0.01 (1 + i)` of the integration cell.
pub fn default_base_point(tau: C64) -> C64 {
    -0.5 * tau - 0.5 + C64::new(0.01, 0.01)
}

/// `e^{-pi i l^2 tau / 2m} int_p^{p+1} phi(z) e^{-2 pi i l z} dz` for `l = 0..2m-1`.
pub fn fourier_integrals(spec: &JacobiFormSpec, tau: C64, p: C64) -> Result<Vec<C64>> {
    (0..2 * spec.index).map(|l| fourier_integral(spec, tau, p, l)).collect()
}

/// `e^{-pi i l^2 tau / 2m} int_p^{p+1} phi(z) e^{-2 pi i l z} dz` by the trapezoid rule with node doubling.
pub fn fourier_integral(spec: &JacobiFormSpec, tau: C64, p: C64, l: i64) -> Result<C64> {
    let m = spec.index as f64;
    let lf = l as f64;
    let pre = (-PI * I * lf * lf * tau / (2.0 * m)).exp();
    let term = |z: C64| -> Result<C64> { Ok((spec.eval)(z, tau)? * (-2.0 * PI * I * lf * z).exp()) };
    let mut nodes = 128usize;
    let mut sum = C64::new(0.0, 0.0);
    for k in 0..nodes {
        sum += term(p + k as f64 / nodes as f64)?;
    }
    let mut prev = pre * sum / nodes as f64;
    loop {
        // the new nodes are the midpoints of the old ones
        let mut mid = C64::new(0.0, 0.0);
        let mut size = 0.0f64;
        for k in 0..nodes {
            let v = term(p + (k as f64 + 0.5) / nodes as f64)?;
            size = size.max(v.norm());
            mid += v;
        }
        sum += mid;
        nodes *= 2;
        let cur = pre * sum / nodes as f64;
        // the floor set by rounding in the samples
        let floor = 64.0 * f64::EPSILON * size * pre.norm();
        let diff = (cur - prev).norm();
        if diff <= 1e-13 * cur.norm().max(1.0) || (diff <= floor && nodes >= 1024) {
            return Ok(cur);
        }
        if nodes >= 1 << 14 {
            return Err(MockError::Quadrature(format!("Fourier integral {l} did not settle")));
        }
        prev = cur;
    }
}

/// Fourier coefficients `h_l(tau)`, `l = 0..2m-1`, including the pole corrections
/// `(1/2) sum_{u in P_p} d_u R_{m,l}(u)`.
///
/// With an explicit `p` every coefficient is integrated from `p`. Otherwise coefficient `l`
/// is integrated on the line `Im z = -(l + 1/2) y / 2m`, where the integrand has the size
/// of `h_l` and no cancellation occurs.
pub fn theta_decompose(spec: &JacobiFormSpec, tau: C64, p: Option<C64>) -> Result<Vec<C64>> {
    let tau = check_tau(tau)?;
    spec.check_elliptic(tau)?;
    let m = spec.index;
    let mut h = Vec::with_capacity(2 * m as usize);
    for l in 0..2 * m {
        let pl = p.unwrap_or_else(|| balanced_base_point(m, l, tau));
        let mut hl = fourier_integral(spec, tau, pl, l)?;
        for u in spec.poles_in_cell(pl, tau) {
            hl += 0.5 * spec.residue_d(u, tau)? * r_ml(m, l, u, tau)?;
        }
        h.push(hl);
    }
    Ok(h)
}

/// `-1/2 - ((l + 1/2)/2m) tau` for `0 <= l < 2m`.
pub fn balanced_base_point(m: i64, l: i64, tau: C64) -> C64 {
    -0.5 - tau * ((l.rem_euclid(2 * m) as f64 + 0.5) / (2.0 * m as f64))
}

/// `sum_l h_l theta_{m,l}(z) + sum_u d_u f~_u(z)`
pub fn reconstruct(spec: &JacobiFormSpec, h: &[C64], z: C64, tau: C64, p: Option<C64>) -> Result<C64> {
    let m = spec.index;
    let mut s = C64::new(0.0, 0.0);
    for (l, hl) in h.iter().enumerate() {
        s += hl * theta_ml(m, l as i64, z, tau)?;
    }
    let p = p.unwrap_or_else(|| default_base_point(tau));
    for u in spec.poles_in_cell(p, tau) {
        s += spec.residue_d(u, tau)? * f_tilde(m, u, z, tau)?;
    }
    Ok(s)
}

/// `(theta_{0,0} theta_{0,1/2} theta_{1/2,0})^9 / (Delta theta_{1/2,1/2})`, weight 1 and index 13.
pub fn example_phi(z: C64, tau: C64) -> Result<C64> {
    let t00 = theta_char(0.0, 0.0, z, tau)?;
    let t01 = theta_char(0.0, 0.5, z, tau)?;
    let t10 = theta_char(0.5, 0.0, z, tau)?;
    let t11 = theta_char(0.5, 0.5, z, tau)?;
    let delta = dedekind_eta(tau)?.powi(24);
    Ok((t00 * t01 * t10).powi(9) / (delta * t11))
}

pub fn example_spec() -> JacobiFormSpec {
    JacobiFormSpec {
        weight: 1,
        index: 13,
        eval: Arc::new(example_phi),
        poles: vec![PoleSpec { alpha: 0.0, beta: 0.0 }],
    }
}

/// Constant residue of the example form at `z = 0`.
pub const EXAMPLE_RESIDUE: f64 = -256.0 / PI;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_of_f_u_at_u() {
        let tau = C64::new(0.2, 1.1);
        let u = C64::new(0.3, 0.4);
        let r = residue_by_contour(|z| f_u(2, u, z, tau).unwrap(), u, 1e-3, 64);
        assert!((r + 1.0 / (2.0 * PI * I)).norm() < 1e-12);
    }
}
