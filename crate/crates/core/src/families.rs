//! Vector valued mock theta functions `F = H + G` of fifth and seventh order.
//!
//! `F` is evaluated from its cone sum divided by an eta quotient, `H` from an
//! indefinite theta function of a binary form, and `G` as a combination of the
//! unary series `R_{a,b}` at a scaled argument. The tables live in a JSON data
//! file compiled into the crate; `MOCKTHETA_DATA` points to a replacement.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{MockError, Result};
use crate::indefinite::{beta_series, indefinite_theta_ab, kernel_basis, kernel_theta, IndefThetaSpec, LatticeForm};
use crate::lerch::period_integral_full;
use crate::numerics::{
    check_tau, gaussian_radius, ln_beta, parse_real, root_of_unity, sign, sqrt_neg_i_tau, window, C64, I,
};
use crate::qidentities::named_sum;
use crate::theta::{dedekind_eta, g_ab, REL_TOL};

/// Data file shipped with the crate.
pub const EMBEDDED_DATA: &str = include_str!("../data/families.json");
/// Environment variable naming a replacement data file.
pub const DATA_ENV: &str = "MOCKTHETA_DATA";
pub const SUPPORTED_SCHEMA: u32 = 1;

/// Accuracy requested from the numerical cone sums of `F`.
const SERIES_TOL: f64 = 1e-15;

/// `R_{a,b}(tau) = sum_{nu in a+Z} sign(nu) beta(2 nu^2 y) e^{-pi i nu^2 tau - 2 pi i nu b}`.
pub fn unary_r(a: f64, b: f64, tau: C64) -> Result<C64> {
    let tau = check_tau(tau)?;
    let y = tau.im;
    let k = gaussian_radius(PI * y, 0.0, REL_TOL)?;
    let mut s = C64::new(0.0, 0.0);
    for n in window(a, 0.0, k) {
        let nu = a + n as f64;
        if nu == 0.0 {
            continue;
        }
        let lm = ln_beta(2.0 * nu * nu * y) + PI * nu * nu * y;
        let ph = (-PI * I * (nu * nu * tau.re + 2.0 * nu * b)).exp();
        s += ph * lm.exp() * sign(nu);
    }
    Ok(s)
}

/// `R_{a,b}(scale tau)`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnaryRSpec {
    pub a: f64,
    pub b: f64,
    pub scale: f64,
}

impl UnaryRSpec {
    pub fn eval(&self, tau: C64) -> Result<C64> {
        if !(self.scale > 0.0) {
            return Err(MockError::InvalidInput(format!("scale must be positive, got {}", self.scale)));
        }
        unary_r(self.a, self.b, tau * self.scale)
    }
}

/// One product term of the splitting of a beta series along an integral interior vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitTerm {
    pub r: UnaryRSpec,
    /// The positive definite theta series on the orthogonal complement.
    pub theta: (f64, f64),
    pub mu0: Vec<f64>,
}

/// Splits the beta series of an interior `c` into `-sum_{mu0} R_{f, -B(c,b)}(-2Q(c) tau) Theta_{mu0}(tau)`.
/// Returns the terms and the total.
pub fn cusp_decompose(
    form: &LatticeForm,
    c: &[i64],
    a: &[f64],
    b: &[f64],
    tau: C64,
) -> Result<(Vec<SplitTerm>, C64)> {
    let tau = check_tau(tau)?;
    let r = form.rank();
    if c.len() != r || a.len() != r || b.len() != r {
        return Err(MockError::InvalidInput("dimension mismatch".into()));
    }
    let g = c.iter().fold(0i64, |g, x| num_integer::gcd(g, *x));
    if g != 1 {
        return Err(MockError::Cone(format!("c must be primitive, gcd is {g}")));
    }
    let cf: Vec<f64> = c.iter().map(|x| *x as f64).collect();
    let qc = form.q(&cf);
    if !(qc < 0.0) || form.b(&cf, form.c0()) >= 0.0 {
        return Err(MockError::Cone("c must lie in the open negative cone".into()));
    }
    let kb = kernel_basis(form, c)?;
    let step = kb.g as f64;
    let ba = form.b(&cf, a);
    let bcb = form.b(&cf, b);
    let bperp: Vec<f64> = b.iter().zip(&cf).map(|(x, y)| x - bcb / (2.0 * qc) * y).collect();
    // B(c, a + k u1) = ba + g k must lie in (2 Q(c), 0]
    let kmin = ((2.0 * qc - ba) / step).floor() as i64 - 1;
    let kmax = (-ba / step).ceil() as i64 + 1;
    let mut terms = Vec::new();
    let mut total = C64::new(0.0, 0.0);
    for k in kmin..=kmax {
        let val = ba + step * k as f64;
        if !(val > 2.0 * qc + 1e-12 && val <= 1e-12) {
            continue;
        }
        let mu0: Vec<f64> = a.iter().zip(&kb.u1).map(|(x, u)| x + k as f64 * *u as f64).collect();
        let f = (form.b(&cf, &mu0) / (2.0 * qc)).max(0.0);
        let perp: Vec<f64> = mu0.iter().zip(&cf).map(|(m, x)| m - f * x).collect();
        let theta = kernel_theta(form, &kb, &perp, &bperp, tau, 1.0, |_| C64::new(1.0, 0.0))?;
        let rs = UnaryRSpec { a: f, b: -bcb, scale: -2.0 * qc };
        total -= rs.eval(tau)? * theta;
        terms.push(SplitTerm { r: rs, theta: (theta.re, theta.im), mu0 });
    }
    Ok((terms, total))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesArg {
    /// `q`
    Q,
    /// `q^{1/2}`
    QHalf,
    /// `-q^{1/2}`
    NegQHalf,
}

impl SeriesArg {
    /// `tau'` with `exp(2 pi i tau')` equal to the argument.
    pub fn tau_prime(self, tau: C64) -> C64 {
        match self {
            SeriesArg::Q => tau,
            SeriesArg::QHalf => tau / 2.0,
            SeriesArg::NegQHalf => (tau + 1.0) / 2.0,
        }
    }
}

/// `prod eta((num tau + shift)/den)^power`
pub type EtaQuotient = Vec<[i64; 4]>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FTerm {
    pub coef: String,
    pub root: [i64; 2],
    pub q_power: String,
    pub eta: EtaQuotient,
    pub series: String,
    pub arg: SeriesArg,
    pub times_arg: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HTerm {
    pub coef: String,
    pub root: [i64; 2],
    pub eta: EtaQuotient,
    pub a: Vec<String>,
    pub b: Vec<String>,
}

/// `coef * zeta_n^k * R_{a,b}` or, in a shadow vector, `coef * zeta_n^k * g_{a,b}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnaryTerm {
    pub coef: String,
    pub root: [i64; 2],
    pub a: String,
    pub b: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub label: String,
    pub f: FTerm,
    pub h: HTerm,
    pub g: Vec<UnaryTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormData {
    #[serde(rename = "A")]
    pub a: Vec<Vec<i64>>,
    pub c1: Vec<i64>,
    pub c2: Vec<i64>,
}

/// Entry `c * sqrt(sqrt) * sin(pi k / n)`; missing parts are 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixEntry {
    pub c: String,
    #[serde(default)]
    pub sqrt: Option<i64>,
    #[serde(default)]
    pub sin: Option<[i64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SMatrix {
    SameAs(String),
    Entries(Vec<Vec<MatrixEntry>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Family {
    pub description: String,
    #[serde(default)]
    pub form: Option<FormData>,
    #[serde(default)]
    pub g_scale: Option<i64>,
    #[serde(default)]
    pub g_overall: Option<String>,
    #[serde(default)]
    pub components: Vec<Component>,
    #[serde(default)]
    pub shadow: Option<Vec<Vec<UnaryTerm>>>,
    /// Row `i` of the `tau -> tau + 1` matrix: `[column, k, n]` for the entry `zeta_n^k`.
    #[serde(default)]
    pub t_matrix: Option<Vec<[i64; 3]>>,
    #[serde(default)]
    pub s_matrix: Option<SMatrix>,
    #[serde(default)]
    pub sum_of: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyData {
    pub schema_version: u32,
    pub families: BTreeMap<String, Family>,
}

fn rat(s: &str) -> Result<f64> {
    parse_real(s).map_err(|e| MockError::Data(e.to_string()))
}

fn root(r: [i64; 2]) -> Result<C64> {
    if r[1] <= 0 {
        return Err(MockError::Data(format!("root of unity order must be positive, got {}", r[1])));
    }
    Ok(root_of_unity(r[0], r[1]))
}

impl FamilyData {
    pub fn parse(text: &str) -> Result<Self> {
        let d: Self = serde_json::from_str(text).map_err(|e| MockError::Data(format!("family JSON: {e}")))?;
        if d.schema_version != SUPPORTED_SCHEMA {
            return Err(MockError::Data(format!("unsupported schema version {}", d.schema_version)));
        }
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        for (id, f) in &self.families {
            let n = self.dimension(id)?;
            if let Some(t) = &f.t_matrix {
                if t.len() != n || t.iter().any(|r| r[0] < 0 || r[0] as usize >= n || r[2] <= 0) {
                    return Err(MockError::Data(format!("{id}: malformed t_matrix")));
                }
            }
            if let Some(SMatrix::Entries(m)) = &f.s_matrix {
                if m.len() != n || m.iter().any(|r| r.len() != n) {
                    return Err(MockError::Data(format!("{id}: s_matrix must be {n} x {n}")));
                }
            }
            if !f.components.is_empty() && (f.form.is_none() || f.g_scale.is_none()) {
                return Err(MockError::Data(format!("{id}: components need a form and g_scale")));
            }
            if let Some(sh) = &f.shadow {
                if sh.len() != n {
                    return Err(MockError::Data(format!("{id}: shadow has wrong length")));
                }
            }
        }
        Ok(())
    }

    pub fn family(&self, id: &str) -> Result<&Family> {
        self.families.get(id).ok_or_else(|| MockError::UnknownId(id.to_string()))
    }

    pub fn ids(&self) -> Vec<String> {
        self.families.keys().cloned().collect()
    }

    /// Number of components.
    pub fn dimension(&self, id: &str) -> Result<usize> {
        let f = self.family(id)?;
        match &f.sum_of {
            Some(parts) => {
                let dims: Vec<usize> = parts.iter().map(|p| self.dimension(p)).collect::<Result<_>>()?;
                if dims.windows(2).any(|w| w[0] != w[1]) || dims.is_empty() {
                    return Err(MockError::Data(format!("{id}: summands differ in length")));
                }
                Ok(dims[0])
            }
            None => Ok(f.components.len()),
        }
    }

    fn leaves(&self, id: &str) -> Result<Vec<&Family>> {
        let f = self.family(id)?;
        match &f.sum_of {
            Some(parts) => {
                let mut out = Vec::new();
                for p in parts {
                    out.extend(self.leaves(p)?);
                }
                Ok(out)
            }
            None => Ok(vec![f]),
        }
    }

    fn component<'a>(fam: &'a Family, k: usize) -> Result<&'a Component> {
        fam.components
            .get(k)
            .ok_or_else(|| MockError::InvalidInput(format!("component {} out of range", k + 1)))
    }

    /// Component `k` (0-based) of `F` at `tau`.
    pub fn eval_f(&self, id: &str, k: usize, tau: C64) -> Result<C64> {
        let tau = check_tau(tau)?;
        let mut s = C64::new(0.0, 0.0);
        for fam in self.leaves(id)? {
            s += eval_f_term(&Self::component(fam, k)?.f, tau)?;
        }
        Ok(s)
    }

    /// Component `k` of `H`.
    pub fn eval_h(&self, id: &str, k: usize, tau: C64) -> Result<C64> {
        let tau = check_tau(tau)?;
        let mut s = C64::new(0.0, 0.0);
        for fam in self.leaves(id)? {
            let c = Self::component(fam, k)?;
            let spec = theta_spec(fam, &c.h)?;
            let pref = rat(&c.h.coef)? * root(c.h.root)? * eta_quotient(&c.h.eta, tau)?;
            s += pref * indefinite_theta_ab(&spec, tau)?;
        }
        Ok(s)
    }

    /// Component `k` of `G`.
    pub fn eval_g(&self, id: &str, k: usize, tau: C64) -> Result<C64> {
        let tau = check_tau(tau)?;
        let mut s = C64::new(0.0, 0.0);
        for fam in self.leaves(id)? {
            let c = Self::component(fam, k)?;
            let scale = fam.g_scale.ok_or_else(|| MockError::Data("missing g_scale".into()))? as f64;
            let overall = rat(fam.g_overall.as_deref().unwrap_or("1"))?;
            let mut t = C64::new(0.0, 0.0);
            for u in &c.g {
                t += rat(&u.coef)? * root(u.root)? * unary_r(rat(&u.a)?, rat(&u.b)?, tau * scale)?;
            }
            s += overall * t;
        }
        Ok(s)
    }

    pub fn eval_f_vec(&self, id: &str, tau: C64) -> Result<Vec<C64>> {
        (0..self.dimension(id)?).map(|k| self.eval_f(id, k, tau)).collect()
    }

    pub fn eval_h_vec(&self, id: &str, tau: C64) -> Result<Vec<C64>> {
        (0..self.dimension(id)?).map(|k| self.eval_h(id, k, tau)).collect()
    }

    pub fn eval_g_vec(&self, id: &str, tau: C64) -> Result<Vec<C64>> {
        (0..self.dimension(id)?).map(|k| self.eval_g(id, k, tau)).collect()
    }

    /// Matrix of `tau -> tau + 1`.
    pub fn t_matrix(&self, id: &str) -> Result<Vec<Vec<C64>>> {
        let n = self.dimension(id)?;
        let t = self
            .family(id)?
            .t_matrix
            .as_ref()
            .ok_or_else(|| MockError::Data(format!("{id}: no t_matrix")))?;
        let mut m = vec![vec![C64::new(0.0, 0.0); n]; n];
        for (i, row) in t.iter().enumerate() {
            m[i][row[0] as usize] = root_of_unity(row[1], row[2]);
        }
        Ok(m)
    }

    /// Real matrix `S` with `H(-1/tau) = sqrt(-i tau) S H(tau)`.
    pub fn s_matrix(&self, id: &str) -> Result<Vec<Vec<f64>>> {
        let f = self.family(id)?;
        match f.s_matrix.as_ref().ok_or_else(|| MockError::Data(format!("{id}: no s_matrix")))? {
            SMatrix::SameAs(other) => {
                if other == id {
                    return Err(MockError::Data(format!("{id}: s_matrix refers to itself")));
                }
                self.s_matrix(other)
            }
            SMatrix::Entries(rows) => rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|e| {
                            let mut v = rat(&e.c)?;
                            if let Some(s) = e.sqrt {
                                v *= (s as f64).sqrt();
                            }
                            if let Some([k, n]) = e.sin {
                                v *= (PI * k as f64 / n as f64).sin();
                            }
                            Ok(v)
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// Shadow vector `sum coef zeta g_{a,b}(scale tau)`.
    pub fn shadow(&self, id: &str, tau: C64) -> Result<Vec<C64>> {
        let tau = check_tau(tau)?;
        let f = self.family(id)?;
        let scale = f.g_scale.ok_or_else(|| MockError::Data("missing g_scale".into()))? as f64;
        let sh = f.shadow.as_ref().ok_or_else(|| MockError::Data(format!("{id}: no shadow vector")))?;
        sh.iter()
            .map(|terms| {
                let mut s = C64::new(0.0, 0.0);
                for u in terms {
                    s += rat(&u.coef)? * root(u.root)? * g_ab(rat(&u.a)?, rat(&u.b)?, tau * scale)?;
                }
                Ok(s)
            })
            .collect()
    }

    /// `i sqrt(scale) int_0^{i inf} g(z) / sqrt(-i (z + tau)) dz`, componentwise.
    pub fn shadow_integral(&self, id: &str, tau: C64) -> Result<Vec<C64>> {
        let tau = check_tau(tau)?;
        let f = self.family(id)?;
        let scale = f.g_scale.ok_or_else(|| MockError::Data("missing g_scale".into()))? as f64;
        let sh = f.shadow.as_ref().ok_or_else(|| MockError::Data(format!("{id}: no shadow vector")))?;
        sh.iter()
            .map(|terms| {
                let mut s = C64::new(0.0, 0.0);
                for u in terms {
                    // substitute w = scale z; the period integral uses characteristics shifted by 1/2
                    let (a, b) = (rat(&u.a)? - 0.5, rat(&u.b)? - 0.5);
                    s += rat(&u.coef)? * root(u.root)? * I * period_integral_full(a, b, tau * scale)?;
                }
                Ok(s)
            })
            .collect()
    }

    /// Both sides of `F(tau) - S F(-1/tau) / sqrt(-i tau) = i sqrt(scale) int_0^{i inf} g(z)/sqrt(-i(z+tau)) dz`.
    pub fn shadow_sides(&self, id: &str, tau: C64) -> Result<(Vec<C64>, Vec<C64>)> {
        let tau = check_tau(tau)?;
        let s = self.s_matrix(id)?;
        let f = self.eval_f_vec(id, tau)?;
        let fs = self.eval_f_vec(id, -1.0 / tau)?;
        let w = sqrt_neg_i_tau(tau);
        let lhs = (0..f.len())
            .map(|i| f[i] - (0..f.len()).map(|j| s[i][j] * fs[j]).sum::<C64>() / w)
            .collect();
        Ok((lhs, self.shadow_integral(id, tau)?))
    }

    /// `G_k` recomputed from the splitting of both beta series along `c1` and `c2`:
    /// `prefactor_k * (BS(c1) - BS(c2))` with the beta series written through `R_{a,b}`.
    pub fn g_from_split(&self, id: &str, k: usize, tau: C64) -> Result<C64> {
        let tau = check_tau(tau)?;
        let mut s = C64::new(0.0, 0.0);
        for fam in self.leaves(id)? {
            let c = Self::component(fam, k)?;
            let form = fam.form.as_ref().ok_or_else(|| MockError::Data("missing form".into()))?;
            let spec = theta_spec(fam, &c.h)?;
            let pref = rat(&c.h.coef)? * root(c.h.root)? * eta_quotient(&c.h.eta, tau)?;
            let (_, bs1) = cusp_decompose(&spec.form, &form.c1, &spec.a, &spec.b, tau)?;
            let (_, bs2) = cusp_decompose(&spec.form, &form.c2, &spec.a, &spec.b, tau)?;
            s += pref * (bs1 - bs2);
        }
        Ok(s)
    }

    /// Same as [`Self::g_from_split`] but with the beta series summed directly over the lattice.
    pub fn g_from_beta_series(&self, id: &str, k: usize, tau: C64) -> Result<C64> {
        let tau = check_tau(tau)?;
        let mut s = C64::new(0.0, 0.0);
        for fam in self.leaves(id)? {
            let c = Self::component(fam, k)?;
            let spec = theta_spec(fam, &c.h)?;
            let pref = rat(&c.h.coef)? * root(c.h.root)? * eta_quotient(&c.h.eta, tau)?;
            let bs1 = beta_series(&spec.form, &spec.c1.c, &spec.a, &spec.b, tau)?;
            let bs2 = beta_series(&spec.form, &spec.c2.c, &spec.a, &spec.b, tau)?;
            s += pref * (bs1 - bs2);
        }
        Ok(s)
    }

    /// The indefinite theta data behind component `k` of `H`.
    pub fn theta_spec(&self, id: &str, k: usize) -> Result<IndefThetaSpec> {
        let fam = self.family(id)?;
        theta_spec(fam, &Self::component(fam, k)?.h)
    }
}

fn theta_spec(fam: &Family, h: &HTerm) -> Result<IndefThetaSpec> {
    let form = fam.form.as_ref().ok_or_else(|| MockError::Data("missing form".into()))?;
    let c1: Vec<f64> = form.c1.iter().map(|x| *x as f64).collect();
    let c2: Vec<f64> = form.c2.iter().map(|x| *x as f64).collect();
    let lf = LatticeForm::new(form.a.clone(), c1.clone())?;
    let a: Vec<f64> = h.a.iter().map(|s| rat(s)).collect::<Result<_>>()?;
    let b: Vec<f64> = h.b.iter().map(|s| rat(s)).collect::<Result<_>>()?;
    IndefThetaSpec::new(lf, &c1, &c2, &a, &b)
}

/// `prod eta((num tau + shift)/den)^power`
pub fn eta_quotient(q: &[[i64; 4]], tau: C64) -> Result<C64> {
    let mut v = C64::new(1.0, 0.0);
    for [num, shift, den, power] in q {
        if *den <= 0 || *num <= 0 {
            return Err(MockError::Data("eta argument needs positive num and den".into()));
        }
        let t = (tau * *num as f64 + *shift as f64) / *den as f64;
        v *= dedekind_eta(t)?.powi(*power as i32);
    }
    Ok(v)
}

fn eval_f_term(f: &FTerm, tau: C64) -> Result<C64> {
    let spec = named_sum(&f.series).map_err(|_| MockError::Data(format!("unknown series '{}'", f.series)))?;
    let tp = f.arg.tau_prime(tau);
    let mut v = spec.evaluate(tp, SERIES_TOL)?;
    if f.times_arg {
        v *= (2.0 * PI * I * tp).exp();
    }
    let qp = (2.0 * PI * I * tau * rat(&f.q_power)?).exp();
    Ok(v * qp * rat(&f.coef)? * root(f.root)? * eta_quotient(&f.eta, tau)?)
}

static DEFAULT: OnceLock<std::result::Result<FamilyData, MockError>> = OnceLock::new();

/// The family tables: the file named by `MOCKTHETA_DATA` if set, else the embedded copy.
pub fn families() -> Result<&'static FamilyData> {
    DEFAULT
        .get_or_init(|| match std::env::var(DATA_ENV) {
            Ok(path) => std::fs::read_to_string(&path)
                .map_err(|e| MockError::Data(format!("cannot read {path}: {e}")))
                .and_then(|t| FamilyData::parse(&t)),
            Err(_) => FamilyData::parse(EMBEDDED_DATA),
        })
        .as_ref()
        .map_err(|e| e.clone())
}

/// Square of a real matrix minus the identity, as a max-norm.
pub fn square_minus_identity(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let s: f64 = (0..n).map(|k| m[i][k] * m[k][j]).sum();
            let e = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((s - e).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_data_parses() {
        let d = FamilyData::parse(EMBEDDED_DATA).unwrap();
        assert_eq!(d.dimension("F7").unwrap(), 3);
        assert_eq!(d.dimension("F5").unwrap(), 6);
    }

    #[test]
    fn r_at_a_zero_skips_the_origin() {
        let v = unary_r(0.0, 0.0, C64::new(0.0, 1.0)).unwrap();
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn decomposition_holds_at_i() {
        let d = families().unwrap();
        for id in ["F7", "F5_1", "F5_2"] {
            let f = d.eval_f_vec(id, I).unwrap();
            let h = d.eval_h_vec(id, I).unwrap();
            let g = d.eval_g_vec(id, I).unwrap();
            for k in 0..f.len() {
                let dev = (f[k] - h[k] - g[k]).norm();
                assert!(dev < 1e-10, "{id}[{k}] F={} H={} G={} dev={dev:e}", f[k], h[k], g[k]);
            }
        }
    }

    #[test]
    fn non_primitive_cone_vector_is_rejected() {
        let spec = families().unwrap().theta_spec("F7", 0).unwrap();
        let err = cusp_decompose(&spec.form, &[-6, 8], &spec.a, &spec.b, I).unwrap_err();
        assert_eq!(err.kind(), "invalid_cone_vector");
    }

    #[test]
    fn seventh_order_split_has_three_terms_with_zero_middle_factor() {
        let spec = families().unwrap().theta_spec("F7", 0).unwrap();
        let (terms, _) = cusp_decompose(&spec.form, &[-3, 4], &spec.a, &spec.b, I).unwrap();
        assert_eq!(terms.len(), 3);
        let mut fs: Vec<f64> = terms.iter().map(|t| t.r.a).collect();
        fs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((fs[0] - 13.0 / 42.0).abs() < 1e-12 && (fs[2] - 41.0 / 42.0).abs() < 1e-12, "{fs:?}");
        for t in &terms {
            assert!((t.r.scale - 21.0).abs() < 1e-12);
        }
        let mid = terms.iter().find(|t| (t.r.a - fs[1]).abs() < 1e-12).unwrap();
        assert!(C64::new(mid.theta.0, mid.theta.1).norm() < 1e-12);
    }
}
