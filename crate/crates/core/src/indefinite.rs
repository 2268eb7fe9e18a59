//! Indefinite theta functions of type (r-1, 1).
//!
//! The kernel `rho = rho^{c1} - rho^{c2}` uses `E(B(c,nu) sqrt(y) / sqrt(-Q(c)))`
//! for interior cone vectors and `sign(B(c,nu))` for cusps. Interior pairs are
//! summed over the union of three majorant ellipsoids. Whenever a cusp is
//! involved the conditionally convergent sign part is regrouped into geometric
//! series along the cusp direction, which converge absolutely.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{MockError, Result};
use crate::numerics::{check_tau, dist_to_int, e_real, inverse, ln_beta, sign, sym_eigenvalues, C64, I};

/// Target absolute accuracy of lattice sums.
pub const LATTICE_TOL: f64 = 1e-14;
/// Minimal distance of `B(c, a)` from the integers for a cusp `c`.
pub const WALL_EPS: f64 = 1e-8;
const MAX_BOX_POINTS: u64 = 20_000_000;

/// Symmetric nondegenerate integer matrix `A` of signature (r-1, 1) with a
/// reference vector `c0`, `Q(c0) < 0`, fixing the component of the cone.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeForm {
    a: Vec<Vec<i64>>,
    af: Vec<Vec<f64>>,
    c0: Vec<f64>,
}

impl LatticeForm {
    pub fn new(a: Vec<Vec<i64>>, c0: Vec<f64>) -> Result<Self> {
        let r = a.len();
        if r < 2 || a.iter().any(|row| row.len() != r) || c0.len() != r {
            return Err(MockError::Form("A must be square of size >= 2 and match c0".into()));
        }
        for i in 0..r {
            for j in 0..r {
                if a[i][j] != a[j][i] {
                    return Err(MockError::Form("A must be symmetric".into()));
                }
            }
        }
        let af: Vec<Vec<f64>> = a.iter().map(|row| row.iter().map(|x| *x as f64).collect()).collect();
        let ev = sym_eigenvalues(&af);
        let neg = ev.iter().filter(|x| **x < -1e-12).count();
        let pos = ev.iter().filter(|x| **x > 1e-12).count();
        if neg != 1 || pos != r - 1 {
            return Err(MockError::Form(format!("signature must be ({}, 1), eigenvalues {:?}", r - 1, ev)));
        }
        let f = Self { a, af, c0 };
        if !(f.q(&f.c0) < 0.0) {
            return Err(MockError::Form("reference vector c0 needs Q(c0) < 0".into()));
        }
        Ok(f)
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn c0(&self) -> &[f64] {
        &self.c0
    }

    pub fn av(&self, x: &[f64]) -> Vec<f64> {
        self.af.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn b(&self, x: &[f64], y: &[f64]) -> f64 {
        self.av(x).iter().zip(y).map(|(a, b)| a * b).sum()
    }

    pub fn q(&self, x: &[f64]) -> f64 {
        0.5 * self.b(x, x)
    }

    /// Bilinear form on complex vectors (no conjugation).
    pub fn b_c(&self, x: &[C64], y: &[C64]) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                s += x[i] * y[j] * self.af[i][j];
            }
        }
        s
    }

    pub fn q_c(&self, x: &[C64]) -> C64 {
        self.b_c(x, x) * 0.5
    }

    pub fn det(&self) -> i64 {
        int_det(&self.a)
    }

    pub fn inverse(&self) -> Vec<Vec<f64>> {
        inverse(&self.af).expect("nondegenerate by construction")
    }

    /// `A^{-1} A*` with `A*` the diagonal of `A`.
    pub fn half_shift(&self) -> Vec<f64> {
        let inv = self.inverse();
        let diag: Vec<f64> = (0..self.rank()).map(|i| self.af[i][i]).collect();
        inv.iter().map(|row| row.iter().zip(&diag).map(|(a, b)| a * b).sum()).collect()
    }

    /// Representatives of `A^{-1} Z^r / Z^r`, computed exactly from the adjugate.
    pub fn coset_representatives(&self) -> Result<Vec<Vec<f64>>> {
        let det = self.det();
        let d = det.abs();
        let r = self.rank();
        if (d as f64).powi(r as i32) > 5e6 {
            return Err(MockError::Form(format!("too many cosets to enumerate (|det A| = {d})")));
        }
        let adj = adjugate(&self.a);
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut n = vec![0i64; r];
        loop {
            let num: Vec<i64> = (0..r)
                .map(|i| {
                    let s: i64 = (0..r).map(|j| adj[i][j] * n[j]).sum();
                    (s * det.signum()).rem_euclid(d)
                })
                .collect();
            if seen.insert(num.clone()) {
                out.push(num.iter().map(|x| *x as f64 / d as f64).collect());
            }
            let mut i = 0;
            loop {
                if i == r {
                    return Ok(out);
                }
                n[i] += 1;
                if n[i] < d {
                    break;
                }
                n[i] = 0;
                i += 1;
            }
        }
    }
}

fn int_det(a: &[Vec<i64>]) -> i64 {
    let r = a.len();
    if r == 1 {
        return a[0][0];
    }
    let mut s = 0i64;
    for j in 0..r {
        let minor: Vec<Vec<i64>> =
            (1..r).map(|i| (0..r).filter(|k| *k != j).map(|k| a[i][k]).collect()).collect();
        let sgn = if j % 2 == 0 { 1 } else { -1 };
        s += sgn * a[0][j] * int_det(&minor);
    }
    s
}

fn adjugate(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = a.len();
    let mut adj = vec![vec![0i64; r]; r];
    for i in 0..r {
        for j in 0..r {
            let minor: Vec<Vec<i64>> = (0..r)
                .filter(|k| *k != j)
                .map(|k| (0..r).filter(|l| *l != i).map(|l| a[k][l]).collect())
                .collect();
            let sgn = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[i][j] = sgn * if r == 1 { 1 } else { int_det(&minor) };
        }
    }
    adj
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeKind {
    Interior,
    Cusp,
}

/// Element of the closure of the cone: interior (`Q(c) < 0`) or a primitive
/// integral cusp (`Q(c) = 0`), oriented by `B(c, c0) < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeVector {
    pub c: Vec<f64>,
    pub kind: ConeKind,
    /// Primitive integral vector on the same ray, when `c` is rational.
    pub integral: Option<Vec<i64>>,
}

fn rational_direction(c: &[f64]) -> Option<Vec<i64>> {
    let scale = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return None;
    }
    for k in 1..=2000i64 {
        let v: Vec<f64> = c.iter().map(|x| x * k as f64).collect();
        if v.iter().all(|x| (x - x.round()).abs() < 1e-9 * (1.0 + x.abs())) {
            let n: Vec<i64> = v.iter().map(|x| x.round() as i64).collect();
            let g = n.iter().fold(0i64, |g, x| g.gcd(x));
            return Some(n.iter().map(|x| x / g).collect());
        }
    }
    None
}

pub fn classify_cone(form: &LatticeForm, c: &[f64]) -> Result<ConeVector> {
    if c.len() != form.rank() {
        return Err(MockError::Cone("dimension mismatch".into()));
    }
    let norm2: f64 = c.iter().map(|x| x * x).sum();
    let q = form.q(c);
    let orient = form.b(c, form.c0());
    if q < -1e-12 * norm2 {
        if orient >= 0.0 {
            return Err(MockError::Cone("vector lies in the opposite component (B(c, c0) >= 0)".into()));
        }
        return Ok(ConeVector { c: c.to_vec(), kind: ConeKind::Interior, integral: rational_direction(c) });
    }
    if q.abs() <= 1e-12 * norm2.max(1.0) {
        let int: Vec<i64> = c.iter().map(|x| x.round() as i64).collect();
        if c.iter().zip(&int).any(|(x, n)| (x - *n as f64).abs() > 1e-9) {
            return Err(MockError::Cone("isotropic vectors must be integral".into()));
        }
        let g = int.iter().fold(0i64, |g, x| g.gcd(x));
        if g != 1 {
            return Err(MockError::Cone("isotropic vectors must be primitive".into()));
        }
        if orient >= 0.0 {
            return Err(MockError::Cone("vector lies in the opposite component (B(c, c0) >= 0)".into()));
        }
        return Ok(ConeVector { c: c.to_vec(), kind: ConeKind::Cusp, integral: Some(int) });
    }
    Err(MockError::Cone(format!("Q(c) = {q} > 0, vector not in the closed cone")))
}

/// Data of an indefinite theta function `theta_{a,b}^{c1,c2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndefThetaSpec {
    pub form: LatticeForm,
    pub c1: ConeVector,
    pub c2: ConeVector,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Num {
    F(f64),
    S(String),
}

impl Num {
    fn value(&self) -> Result<f64> {
        match self {
            Num::F(x) => Ok(*x),
            Num::S(s) => crate::numerics::parse_real(s),
        }
    }
}

#[derive(Deserialize)]
struct SpecJson {
    #[serde(rename = "A")]
    a_mat: Vec<Vec<i64>>,
    c0: Vec<Num>,
    c1: Vec<Num>,
    c2: Vec<Num>,
    a: Vec<Num>,
    b: Vec<Num>,
}

fn nums(v: &[Num]) -> Result<Vec<f64>> {
    v.iter().map(|x| x.value()).collect()
}

impl IndefThetaSpec {
    pub fn new(form: LatticeForm, c1: &[f64], c2: &[f64], a: &[f64], b: &[f64]) -> Result<Self> {
        let c1 = classify_cone(&form, c1)?;
        let c2 = classify_cone(&form, c2)?;
        if a.len() != form.rank() || b.len() != form.rank() {
            return Err(MockError::InvalidInput("characteristics must have length r".into()));
        }
        let s = Self { form, c1, c2, a: a.to_vec(), b: b.to_vec() };
        s.check_walls()?;
        Ok(s)
    }

    /// Parses `{"A": [[..]], "c0": [..], "c1": [..], "c2": [..], "a": [..], "b": [..]}`;
    /// entries may be numbers or "p/q" strings.
    pub fn from_json(text: &str) -> Result<Self> {
        let j: SpecJson =
            serde_json::from_str(text).map_err(|e| MockError::InvalidInput(format!("spec JSON: {e}")))?;
        let form = LatticeForm::new(j.a_mat, nums(&j.c0)?)?;
        Self::new(form, &nums(&j.c1)?, &nums(&j.c2)?, &nums(&j.a)?, &nums(&j.b)?)
    }

    pub fn check_walls(&self) -> Result<()> {
        for c in [&self.c1, &self.c2] {
            if c.kind == ConeKind::Cusp {
                let d = dist_to_int(self.form.b(&c.c, &self.a));
                if d < WALL_EPS {
                    return Err(MockError::Wall(format!("B(c, a) is {d:e} from an integer")));
                }
            }
        }
        Ok(())
    }

    pub fn with_chars(&self, a: &[f64], b: &[f64]) -> Result<Self> {
        let s = Self { a: a.to_vec(), b: b.to_vec(), ..self.clone() };
        s.check_walls()?;
        Ok(s)
    }

    pub fn swapped(&self) -> Self {
        Self { c1: self.c2.clone(), c2: self.c1.clone(), ..self.clone() }
    }
}

fn rho_c(form: &LatticeForm, c: &ConeVector, nu: &[f64], y: f64) -> f64 {
    let bcn = form.b(&c.c, nu);
    match c.kind {
        ConeKind::Interior => e_real(bcn * y.sqrt() / (-form.q(&c.c)).sqrt()),
        ConeKind::Cusp => sign(bcn),
    }
}

/// `rho(nu; tau) = rho^{c1}(nu) - rho^{c2}(nu)` with `y = Im tau`.
pub fn rho_kernel(spec: &IndefThetaSpec, nu: &[f64], y: f64) -> f64 {
    rho_c(&spec.form, &spec.c1, nu, y) - rho_c(&spec.form, &spec.c2, nu, y)
}

/// `lambda_{c,c0}` with `Q_c >= lambda Q_{c0}` on all of `R^r`.
pub fn majorant_lambda(form: &LatticeForm, c: &[f64], c0: &[f64]) -> Result<f64> {
    for v in [c, c0] {
        if classify_cone(form, v)?.kind != ConeKind::Interior {
            return Err(MockError::Cone("majorant_lambda needs interior vectors".into()));
        }
    }
    let bcc = form.b(c, c0);
    let (qc, q0) = (form.q(c), form.q(c0));
    let disc = (bcc * bcc - 4.0 * qc * q0).max(0.0);
    Ok((bcc * bcc - 2.0 * qc * q0 - bcc.abs() * disc.sqrt()) / (2.0 * qc * q0))
}

/// `Q_c(nu) = Q(nu) - B(c,nu)^2 / (2 Q(c))`
pub fn majorant_qc(form: &LatticeForm, c: &[f64], nu: &[f64]) -> f64 {
    let b = form.b(c, nu);
    form.q(nu) - b * b / (2.0 * form.q(c))
}

fn qplus_k(form: &LatticeForm, c1: &[f64], c2: &[f64]) -> Result<f64> {
    let b12 = form.b(c1, c2);
    let den = 4.0 * form.q(c1) * form.q(c2) - b12 * b12;
    if den.abs() < 1e-12 * b12.abs().max(1.0).powi(2) {
        return Err(MockError::Cone("c1 and c2 are linearly dependent".into()));
    }
    Ok(b12 / den)
}

/// `Q+(nu) = Q(nu) + B(c1,c2) / (4 Q(c1) Q(c2) - B(c1,c2)^2) B(c1,nu) B(c2,nu)`
pub fn majorant_qplus(form: &LatticeForm, c1: &[f64], c2: &[f64], nu: &[f64]) -> Result<f64> {
    let k = qplus_k(form, c1, c2)?;
    Ok(form.q(nu) + k * form.b(c1, nu) * form.b(c2, nu))
}

/// Matrix `M` with `P(nu) = nu^T M nu / 2`.
type Gram = Vec<Vec<f64>>;

fn gram_qc(form: &LatticeForm, c: &[f64]) -> Gram {
    let ac = form.av(c);
    let qc = form.q(c);
    let r = form.rank();
    (0..r).map(|i| (0..r).map(|j| form.af[i][j] - ac[i] * ac[j] / qc).collect()).collect()
}

fn gram_qplus(form: &LatticeForm, c1: &[f64], c2: &[f64]) -> Result<Gram> {
    let k = qplus_k(form, c1, c2)?;
    let (a1, a2) = (form.av(c1), form.av(c2));
    let r = form.rank();
    Ok((0..r)
        .map(|i| (0..r).map(|j| form.af[i][j] + k * (a1[i] * a2[j] + a2[i] * a1[j])).collect())
        .collect())
}

/// Half widths of the box containing `{x : x^T M x / 2 <= R}` where `R` is
/// chosen so that `sum_{P(nu) > R} exp(-2 pi y P(nu)) <= tol` over any shifted lattice.
fn ellipsoid_box(m: &Gram, y: f64, tol: f64, log_scale: f64) -> Result<Vec<f64>> {
    let ev = sym_eigenvalues(m);
    let lmin = ev[0];
    if !(lmin > 0.0) {
        return Err(MockError::Cone("majorant is not positive definite".into()));
    }
    let r = m.len() as i32;
    let t = y * lmin / 2.0;
    let count = (2.0 + 1.0 / t.sqrt()).powi(r);
    let big_r = ((count / tol).ln() + log_scale).max(0.0) / (PI * y);
    let inv = inverse(m)?;
    Ok((0..m.len()).map(|i| (2.0 * big_r * inv[i][i]).sqrt()).collect())
}

/// Calls `f(nu)` for every `nu in shift + Z^r` with `|nu_i - center_i| <= half[i]`.
fn for_box(shift: &[f64], center: &[f64], half: &[f64], f: &mut dyn FnMut(&[f64])) -> Result<()> {
    let r = shift.len();
    let lo: Vec<i64> = (0..r).map(|i| (center[i] - half[i] - shift[i]).ceil() as i64).collect();
    let hi: Vec<i64> = (0..r).map(|i| (center[i] + half[i] - shift[i]).floor() as i64).collect();
    let mut count: u64 = 1;
    for i in 0..r {
        if hi[i] < lo[i] {
            return Ok(());
        }
        count = count.saturating_mul((hi[i] - lo[i] + 1) as u64);
    }
    if count > MAX_BOX_POINTS {
        return Err(MockError::Truncation(format!("lattice box of {count} points exceeds budget")));
    }
    let mut n = lo.clone();
    let mut nu = vec![0.0; r];
    loop {
        for i in 0..r {
            nu[i] = shift[i] + n[i] as f64;
        }
        f(&nu);
        let mut i = 0;
        loop {
            if i == r {
                return Ok(());
            }
            if n[i] < hi[i] {
                n[i] += 1;
                break;
            }
            n[i] = lo[i];
            i += 1;
        }
    }
}

/// `exp(2 pi i (Q(nu) x + B(nu, b)))` and `-2 pi y Q(nu)` for the lattice term.
fn phase_and_logmag(form: &LatticeForm, nu: &[f64], b: &[f64], tau: C64) -> (C64, f64) {
    let q = form.q(nu);
    let ph = (2.0 * PI * I * (q * tau.re + form.b(nu, b))).exp();
    (ph, -2.0 * PI * tau.im * q)
}

/// `sum_{nu in a+Z^r} sign(B(c,nu)) beta(-B(c,nu)^2 y / Q(c)) e^{2 pi i Q(nu) tau + 2 pi i B(nu,b)}` for interior `c`.
pub fn beta_series(form: &LatticeForm, c: &[f64], a: &[f64], b: &[f64], tau: C64) -> Result<C64> {
    let tau = check_tau(tau)?;
    let qc = form.q(c);
    if !(qc < 0.0) {
        return Err(MockError::Cone("beta series needs an interior vector".into()));
    }
    let y = tau.im;
    let half = ellipsoid_box(&gram_qc(form, c), y, LATTICE_TOL, 0.0)?;
    let zero = vec![0.0; form.rank()];
    let mut s = C64::new(0.0, 0.0);
    for_box(a, &zero, &half, &mut |nu| {
        let bc = form.b(c, nu);
        if bc == 0.0 {
            return;
        }
        let (ph, lm) = phase_and_logmag(form, nu, b, tau);
        s += ph * (ln_beta(-bc * bc * y / qc) + lm).exp() * sign(bc);
    })?;
    Ok(s)
}

fn interior_interior(form: &LatticeForm, c1: &[f64], c2: &[f64], a: &[f64], b: &[f64], tau: C64) -> Result<C64> {
    let y = tau.im;
    let grams = [gram_qc(form, c1), gram_qc(form, c2), gram_qplus(form, c1, c2)?];
    let mut half = vec![0.0f64; form.rank()];
    for g in &grams {
        let h = ellipsoid_box(g, y, LATTICE_TOL, 2f64.ln())?;
        for i in 0..half.len() {
            half[i] = half[i].max(h[i]);
        }
    }
    let (q1, q2) = (form.q(c1), form.q(c2));
    let zero = vec![0.0; form.rank()];
    let mut s = C64::new(0.0, 0.0);
    for_box(a, &zero, &half, &mut |nu| {
        let (b1, b2) = (form.b(c1, nu), form.b(c2, nu));
        let (ph, lm) = phase_and_logmag(form, nu, b, tau);
        let (s1, s2) = (sign(b1), sign(b2));
        let mut t = 0.0;
        if s1 != s2 {
            t += (s1 - s2) * lm.exp();
        }
        if s1 != 0.0 {
            t -= s1 * (ln_beta(-b1 * b1 * y / q1) + lm).exp();
        }
        if s2 != 0.0 {
            t += s2 * (ln_beta(-b2 * b2 * y / q2) + lm).exp();
        }
        s += ph * t;
    })?;
    Ok(s)
}

/// Unimodular change of basis adapted to an integral vector `c`:
/// `B(c, u1) = g` and the columns of `w` span `{xi in Z^r : B(c, xi) = 0}`.
#[derive(Debug, Clone)]
pub struct KernelBasis {
    pub g: i64,
    pub u1: Vec<i64>,
    pub w: Vec<Vec<i64>>,
}

pub fn kernel_basis(form: &LatticeForm, c: &[i64]) -> Result<KernelBasis> {
    let r = form.rank();
    let mut row: Vec<i64> = (0..r).map(|i| (0..r).map(|j| form.a[i][j] * c[j]).sum()).collect();
    let mut u: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
    // column operations on u mirror those on the row vector (A c)^T
    for j in 1..r {
        while row[j] != 0 {
            let q = Integer::div_floor(&row[0], &row[j]);
            row[0] -= q * row[j];
            for k in 0..r {
                u[k][0] -= q * u[k][j];
            }
            row.swap(0, j);
            for k in 0..r {
                u[k].swap(0, j);
            }
        }
    }
    if row[0] == 0 {
        return Err(MockError::Cone("B(c, .) vanishes identically".into()));
    }
    if row[0] < 0 {
        row[0] = -row[0];
        for k in 0..r {
            u[k][0] = -u[k][0];
        }
    }
    Ok(KernelBasis {
        g: row[0],
        u1: (0..r).map(|k| u[k][0]).collect(),
        w: (1..r).map(|j| (0..r).map(|k| u[k][j]).collect()).collect(),
    })
}

/// `sum_{m in Z^{r-1}} weight(nu) e^{2 pi i Q(nu) tau + 2 pi i B(nu, b)}` over `nu = base + W m`,
/// where `Q` is positive definite on the span of `W` and `|weight| <= wmax`.
pub fn kernel_theta<F: Fn(&[f64]) -> C64>(
    form: &LatticeForm,
    kb: &KernelBasis,
    base: &[f64],
    b: &[f64],
    tau: C64,
    wmax: f64,
    weight: F,
) -> Result<C64> {
    let r = form.rank();
    let k = kb.w.len();
    let wf: Vec<Vec<f64>> = kb.w.iter().map(|c| c.iter().map(|x| *x as f64).collect()).collect();
    let aw: Vec<Vec<f64>> = wf.iter().map(|c| form.av(c)).collect();
    let g: Gram = (0..k).map(|i| (0..k).map(|j| aw[i].iter().zip(&wf[j]).map(|(x, y)| x * y).sum()).collect()).collect();
    let lin: Vec<f64> = aw.iter().map(|col| col.iter().zip(base).map(|(x, y)| x * y).sum()).collect();
    let ginv = inverse(&g)?;
    let mstar: Vec<f64> = (0..k).map(|i| -(0..k).map(|j| ginv[i][j] * lin[j]).sum::<f64>()).collect();
    let nu_at = |m: &[f64]| -> Vec<f64> {
        let mut nu = base.to_vec();
        for (mi, col) in m.iter().zip(&wf) {
            for t in 0..r {
                nu[t] += mi * col[t];
            }
        }
        nu
    };
    let qmin = form.q(&nu_at(&mstar));
    let y = tau.im;
    let log_scale = wmax.max(1e-300).ln() - 2.0 * PI * y * qmin;
    let half = ellipsoid_box(&g, y, LATTICE_TOL, log_scale.max(0.0))?;
    let zero = vec![0.0; k];
    let mut s = C64::new(0.0, 0.0);
    for_box(&zero, &mstar, &half, &mut |m| {
        let nu = nu_at(m);
        let (ph, lm) = phase_and_logmag(form, &nu, b, tau);
        s += weight(&nu) * ph * lm.exp();
    })?;
    Ok(s)
}

/// `sum_nu [sign B(c1,nu) - sign B(c2,nu)] e^{...}` for integral interior `c1` and cusp `c2`,
/// regrouped into geometric series along `c2`.
fn sign_part_cusp(form: &LatticeForm, c1: &[i64], c2: &[i64], a: &[f64], b: &[f64], tau: C64) -> Result<C64> {
    let c1f: Vec<f64> = c1.iter().map(|x| *x as f64).collect();
    let c2f: Vec<f64> = c2.iter().map(|x| *x as f64).collect();
    let b12 = form.b(&c1f, &c2f);
    if !(b12 < 0.0) {
        return Err(MockError::Cone("B(c1, c2) must be negative".into()));
    }
    let kb = kernel_basis(form, c1)?;
    let g = kb.g as f64;
    let ba = form.b(&c1f, a);
    let bc2b = form.b(&c2f, b);
    let y = tau.im;
    let d = dist_to_int(form.b(&c2f, a));
    if d < WALL_EPS {
        return Err(MockError::Wall(format!("B(c2, a) is {d:e} from an integer")));
    }
    let fmax = 2.0 / (1.0 - (-2.0 * PI * y * d).exp()) + 1.0;
    // values B(c1, a) + g k in (B(c1,c2), 0]
    let kmin = ((b12 - ba) / g).floor() as i64 - 1;
    let kmax = ((-ba) / g).ceil() as i64 + 1;
    let mut total = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    for k in kmin..=kmax {
        let val = ba + g * k as f64;
        if !(val > b12 + 1e-12 && val <= 1e-12) {
            continue;
        }
        let delta = if val.abs() < 1e-12 { 1.0 } else { 0.0 };
        let mu0: Vec<f64> = a.iter().zip(&kb.u1).map(|(x, u)| x + k as f64 * *u as f64).collect();
        let part = kernel_theta(form, &kb, &mu0, b, tau, fmax, |nu| {
            let x = 2.0 * PI * I * (form.b(&c2f, nu) * tau + bc2b);
            C64::new(2.0, 0.0) / (one - x.exp()) - delta
        })?;
        total -= part;
    }
    Ok(total)
}

/// Closest integral vector on a ray close to `c`, inside the cone.
fn integral_interior_near(form: &LatticeForm, c: &[f64]) -> Result<Vec<i64>> {
    if let Some(v) = rational_direction(c) {
        return Ok(v);
    }
    let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    for k in 1..10_000 {
        let v: Vec<i64> = c.iter().map(|x| (x / n * k as f64).round() as i64).collect();
        let vf: Vec<f64> = v.iter().map(|x| *x as f64).collect();
        if form.q(&vf) < 0.0 && form.b(&vf, form.c0()) < 0.0 {
            let g = v.iter().fold(0i64, |g, x| g.gcd(x));
            return Ok(v.iter().map(|x| x / g).collect());
        }
    }
    Err(MockError::Cone("no integral interior vector near c".into()))
}

/// `theta_{a,b}^{c1,c2}(tau)`
pub fn indefinite_theta_ab(spec: &IndefThetaSpec, tau: C64) -> Result<C64> {
    let tau = check_tau(tau)?;
    spec.check_walls()?;
    theta_pair(&spec.form, &spec.c1, &spec.c2, &spec.a, &spec.b, tau)
}

fn same_ray(x: &[f64], y: &[f64]) -> bool {
    let nx = x.iter().map(|t| t * t).sum::<f64>().sqrt();
    let ny = y.iter().map(|t| t * t).sum::<f64>().sqrt();
    x.iter().zip(y).all(|(p, q)| (p / nx - q / ny).abs() < 1e-13)
}

fn theta_pair(form: &LatticeForm, c1: &ConeVector, c2: &ConeVector, a: &[f64], b: &[f64], tau: C64) -> Result<C64> {
    if same_ray(&c1.c, &c2.c) {
        return Ok(C64::new(0.0, 0.0));
    }
    match (c1.kind, c2.kind) {
        (ConeKind::Interior, ConeKind::Interior) => interior_interior(form, &c1.c, &c2.c, a, b, tau),
        (ConeKind::Interior, ConeKind::Cusp) => {
            let k1 = integral_interior_near(form, &c1.c)?;
            let k1f: Vec<f64> = k1.iter().map(|x| *x as f64).collect();
            let mut v = C64::new(0.0, 0.0);
            if !same_ray(&c1.c, &k1f) {
                v += interior_interior(form, &c1.c, &k1f, a, b, tau)?;
            }
            let c2i = c2.integral.as_ref().expect("cusps are integral");
            v += sign_part_cusp(form, &k1, c2i, a, b, tau)?;
            v -= beta_series(form, &k1f, a, b, tau)?;
            Ok(v)
        }
        (ConeKind::Cusp, ConeKind::Interior) => Ok(-theta_pair(form, c2, c1, a, b, tau)?),
        (ConeKind::Cusp, ConeKind::Cusp) => {
            let c3: Vec<f64> = c1.c.iter().zip(&c2.c).map(|(x, y)| x + y).collect();
            let c3 = classify_cone(form, &c3)?;
            Ok(theta_pair(form, c1, &c3, a, b, tau)? + theta_pair(form, &c3, c2, a, b, tau)?)
        }
    }
}

/// `(a, b)` with `z = a tau + b`.
pub fn split_z(z: &[C64], tau: C64) -> (Vec<f64>, Vec<f64>) {
    let a: Vec<f64> = z.iter().map(|w| w.im / tau.im).collect();
    let b: Vec<f64> = z.iter().zip(&a).map(|(w, a)| w.re - a * tau.re).collect();
    (a, b)
}

/// `theta(z; tau) = e^{-2 pi i Q(a) tau - 2 pi i B(a,b)} theta_{a,b}(tau)` with `a = Im z / Im tau`.
pub fn indefinite_theta_z(spec: &IndefThetaSpec, z: &[C64], tau: C64) -> Result<C64> {
    let tau = check_tau(tau)?;
    let (a, b) = split_z(z, tau);
    let s = spec.with_chars(&a, &b)?;
    let f = form_prefactor(&spec.form, &a, &b, tau);
    Ok(f * indefinite_theta_ab(&s, tau)?)
}

fn form_prefactor(form: &LatticeForm, a: &[f64], b: &[f64], tau: C64) -> C64 {
    (-2.0 * PI * I * (form.q(a) * tau + form.b(a, b))).exp()
}

/// Both sides of `theta(z/tau; -1/tau) = i/sqrt(-det A) (-i tau)^{r/2} sum_p e^{2 pi i Q(z+p tau)/tau} theta(z+p tau; tau)`.
pub fn modular_s_sides(spec: &IndefThetaSpec, z: &[C64], tau: C64) -> Result<(C64, C64)> {
    let tau = check_tau(tau)?;
    let r = spec.form.rank();
    let zs: Vec<C64> = z.iter().map(|w| w / tau).collect();
    let lhs = indefinite_theta_z(spec, &zs, -1.0 / tau)?;
    let mut sum = C64::new(0.0, 0.0);
    for p in spec.form.coset_representatives()? {
        let zp: Vec<C64> = z.iter().zip(&p).map(|(w, p)| w + tau * p).collect();
        sum += (2.0 * PI * I * spec.form.q_c(&zp) / tau).exp() * indefinite_theta_z(spec, &zp, tau)?;
    }
    let det = spec.form.det() as f64;
    let rhs = I / (-det).sqrt() * (-I * tau).sqrt().powi(r as i32) * sum;
    Ok((lhs, rhs))
}

/// Transforms the data by `C` in the orthogonal group preserving the cone.
pub fn orthogonal_action(spec: &IndefThetaSpec, c: &[Vec<i64>]) -> Result<IndefThetaSpec> {
    let form = &spec.form;
    let r = form.rank();
    if c.len() != r || c.iter().any(|row| row.len() != r) {
        return Err(MockError::InvalidInput("C must be r x r".into()));
    }
    for i in 0..r {
        for j in 0..r {
            let mut s = 0i64;
            for k in 0..r {
                for l in 0..r {
                    s += c[k][i] * form.a[k][l] * c[l][j];
                }
            }
            if s != form.a[i][j] {
                return Err(MockError::Form("C^T A C != A".into()));
            }
        }
    }
    let apply = |v: &[f64]| -> Vec<f64> {
        (0..r).map(|i| (0..r).map(|j| c[i][j] as f64 * v[j]).sum()).collect()
    };
    if !(form.b(&apply(form.c0()), form.c0()) < 0.0) {
        return Err(MockError::Form("C swaps the two components of the cone".into()));
    }
    IndefThetaSpec::new(form.clone(), &apply(&spec.c1.c), &apply(&spec.c2.c), &apply(&spec.a), &apply(&spec.b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex1() -> LatticeForm {
        LatticeForm::new(vec![vec![1, 2], vec![2, 1]], vec![-1.0, 2.0]).unwrap()
    }

    #[test]
    fn kernel_basis_is_unimodular_and_orthogonal() {
        let f = ex1();
        let kb = kernel_basis(&f, &[-1, 2]).unwrap();
        let w: Vec<f64> = kb.w[0].iter().map(|x| *x as f64).collect();
        assert_eq!(f.b(&[-1.0, 2.0], &w), 0.0);
        let det = kb.u1[0] * kb.w[0][1] - kb.u1[1] * kb.w[0][0];
        assert_eq!(det.abs(), 1);
        assert_eq!(kb.g, 3);
    }

    #[test]
    fn coset_count_matches_determinant() {
        let f = ex1();
        assert_eq!(f.coset_representatives().unwrap().len(), 3);
        let g = LatticeForm::new(vec![vec![5, 0], vec![0, -2]], vec![0.0, 1.0]).unwrap();
        assert_eq!(g.coset_representatives().unwrap().len(), 10);
    }

    #[test]
    fn classify_rejects_positive_vectors() {
        assert!(classify_cone(&ex1(), &[1.0, 1.0]).is_err());
        assert_eq!(classify_cone(&ex1(), &[-2.0, 1.0]).unwrap().kind, ConeKind::Interior);
    }
}
