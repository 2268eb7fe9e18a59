//! Exact truncated q-series with integer coefficients.
//!
//! A [`QSeries`] stores the coefficients of `q^{k/D}` for all `k < order`
//! (exponents measured in units of `1/D`). Indefinite theta-type sums over
//! cones of a lattice are described by [`IndefiniteSumSpec`] and can be
//! expanded exactly or evaluated numerically at a point of the upper half plane.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{MockError, Result};
use crate::numerics::{sym_eigenvalues, C64, I};

/// Refuse to enumerate more lattice points than this.
pub const MAX_POINTS: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct QSeries {
    denom: i64,
    order: i64,
    coeffs: BTreeMap<i64, BigInt>,
}

impl QSeries {
    pub fn zero(denom: i64, order: i64) -> Self {
        assert!(denom > 0, "denominator must be positive");
        Self { denom, order, coeffs: BTreeMap::new() }
    }

    pub fn one(denom: i64, order: i64) -> Self {
        Self::monomial(0, BigInt::one(), denom, order)
    }

    /// `c q^{k/denom}`
    pub fn monomial(k: i64, c: BigInt, denom: i64, order: i64) -> Self {
        let mut s = Self::zero(denom, order);
        s.add_term(k, c);
        s
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    /// Exponents `k/denom` with `k < order` are exact.
    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn coeff(&self, k: i64) -> BigInt {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    /// Nonzero terms `(k, c)` meaning `c q^{k/denom}`, by increasing `k`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest exponent (in units of `1/denom`) with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    fn add_term(&mut self, k: i64, c: BigInt) {
        if k >= self.order || c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(k).or_default();
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    /// Re-expresses the series over the denominator `denom`, a multiple of the current one.
    pub fn rescale(&self, denom: i64) -> Result<Self> {
        if denom % self.denom != 0 {
            return Err(MockError::Series(format!(
                "cannot rescale denominator {} to {}",
                self.denom, denom
            )));
        }
        let f = denom / self.denom;
        Ok(Self {
            denom,
            order: self.order * f,
            coeffs: self.coeffs.iter().map(|(k, c)| (k * f, c.clone())).collect(),
        })
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        let d = a.denom.lcm(&b.denom);
        let mut a = a.rescale(d).expect("lcm is a multiple");
        let mut b = b.rescale(d).expect("lcm is a multiple");
        let order = a.order.min(b.order);
        a.truncate(order);
        b.truncate(order);
        (a, b)
    }

    /// Drops all terms with exponent `>= order / denom`.
    pub fn truncate(&mut self, order: i64) {
        self.order = self.order.min(order);
        let o = self.order;
        self.coeffs.retain(|k, _| *k < o);
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = Self::aligned(self, other);
        for (k, c) in b.coeffs {
            a.add_term(k, c);
        }
        a
    }

    pub fn neg(&self) -> Self {
        Self {
            denom: self.denom,
            order: self.order,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut s = Self::zero(self.denom, self.order);
        for (k, v) in &self.coeffs {
            s.add_term(*k, v * c);
        }
        s
    }

    /// Multiplies by `q^{k/denom}`; the order moves along with the exponents.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            denom: self.denom,
            order: self.order + k,
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Truncated product. The result is exact below the smaller of
    /// `order_a + val_b` and `order_b + val_a`.
    pub fn mul(&self, other: &Self) -> Self {
        let d = self.denom.lcm(&other.denom);
        let a = self.rescale(d).expect("lcm");
        let b = other.rescale(d).expect("lcm");
        let va = a.valuation().unwrap_or(a.order);
        let vb = b.valuation().unwrap_or(b.order);
        let order = (a.order + vb).min(b.order + va);
        let mut s = Self::zero(d, order);
        for (i, x) in &a.coeffs {
            for (j, y) in &b.coeffs {
                if i + j < order {
                    s.add_term(i + j, x * y);
                }
            }
        }
        s
    }

    /// Multiplies in place by `1 + s q^{e/denom}` with `e > 0`.
    pub fn mul_binomial(&mut self, e: i64, s: i64) {
        assert!(e > 0);
        let keys: Vec<i64> = self.coeffs.keys().rev().copied().collect();
        for k in keys {
            let c = self.coeffs[&k].clone();
            self.add_term(k + e, c * s);
        }
    }

    /// Substitutes `q -> q^m` for a positive integer `m`.
    pub fn dilate(&self, m: i64) -> Self {
        assert!(m > 0);
        Self {
            denom: self.denom,
            order: self.order * m,
            coeffs: self.coeffs.iter().map(|(k, c)| (k * m, c.clone())).collect(),
        }
    }

    /// Inverse of a series whose lowest term is `+-1 q^0`.
    pub fn invert_unit(&self) -> Result<Self> {
        let c0 = self.coeff(0);
        if self.valuation() != Some(0) || !(c0 == BigInt::one() || c0 == -BigInt::one()) {
            return Err(MockError::Series(
                "only series with constant term +-1 and no negative powers are invertible".into(),
            ));
        }
        let step = self.coeffs.keys().filter(|k| **k > 0).fold(0i64, |g, k| g.gcd(k));
        let mut inv = Self::zero(self.denom, self.order);
        if step == 0 {
            inv.add_term(0, c0);
            return Ok(inv);
        }
        let rest: Vec<(i64, BigInt)> =
            self.coeffs.iter().filter(|(k, _)| **k > 0).map(|(k, c)| (*k, c.clone())).collect();
        let mut dense: Vec<BigInt> = Vec::new();
        let mut k = 0;
        while k < self.order {
            let mut acc = if k == 0 { BigInt::one() } else { BigInt::zero() };
            for (j, c) in &rest {
                if *j > k {
                    break;
                }
                acc -= c * &dense[((k - j) / step) as usize];
            }
            let v = &acc * &c0;
            dense.push(v.clone());
            inv.add_term(k, v);
            k += step;
        }
        Ok(inv)
    }

    /// One line per nonzero coefficient: `exponent,coefficient` with the exponent as `k/D` reduced.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("exponent,coefficient\n");
        for (k, c) in &self.coeffs {
            out.push_str(&format!("{},{}\n", fmt_exponent(*k, self.denom), c));
        }
        out
    }
}

/// Formats `k/d` in lowest terms (plain integer when `d` divides `k`).
pub fn fmt_exponent(k: i64, d: i64) -> String {
    let g = k.gcd(&d).max(1);
    let (n, m) = (k / g, d / g);
    if m == 1 {
        format!("{n}")
    } else {
        format!("{n}/{m}")
    }
}

/// `(q; q)_inf` through exponents `< order/denom`.
pub fn euler_product(order: i64, denom: i64) -> QSeries {
    qpochhammer(denom, 1, denom, None, order, denom)
}

/// `(a; q^{b})_n` with `a = sign q^{a_exp/denom}` and `q^{b} = q^{base_exp/denom}`;
/// `n = None` gives the infinite product.
pub fn qpochhammer(
    a_exp: i64,
    a_sign: i64,
    base_exp: i64,
    n: Option<u64>,
    order: i64,
    denom: i64,
) -> QSeries {
    let mut s = QSeries::one(denom, order);
    let mut j = 0u64;
    loop {
        if let Some(n) = n {
            if j >= n {
                break;
            }
        }
        let e = a_exp + j as i64 * base_exp;
        if e >= order {
            break;
        }
        if e == 0 {
            s = s.scale(&BigInt::from(1 - a_sign));
        } else {
            s.mul_binomial(e, -a_sign);
        }
        j += 1;
        if base_exp <= 0 && n.is_none() {
            break;
        }
    }
    s
}

/// `sum_{n >= 0} q^{n^2} / (-q; q)_n`.
pub fn eulerian_f0(order: i64) -> Result<QSeries> {
    let mut total = QSeries::zero(1, order);
    let mut n: i64 = 0;
    while n * n < order {
        let den = qpochhammer(1, -1, 1, Some(n as u64), order, 1);
        let term = den.invert_unit()?.shift(n * n);
        let mut term = term;
        term.truncate(order);
        total = total.add(&term);
        n += 1;
    }
    Ok(total)
}

/// Outcome of comparing two series coefficient by coefficient.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesComparison {
    pub equal: bool,
    /// Common denominator used for the comparison.
    pub denom: i64,
    /// Exponents `< through/denom` were compared.
    pub through: i64,
    pub first_mismatch: Option<String>,
    pub lhs_coeff: Option<String>,
    pub rhs_coeff: Option<String>,
}

/// Compares `lhs` and `rhs` for all exponents below `through` (a plain
/// exponent, not scaled by the denominator), or below both validity orders.
pub fn assert_equal(lhs: &QSeries, rhs: &QSeries, through: Option<i64>) -> SeriesComparison {
    let (a, b) = QSeries::aligned(lhs, rhs);
    let d = a.denom;
    let mut limit = a.order;
    if let Some(t) = through {
        limit = limit.min(t * d);
    }
    let mut keys: Vec<i64> = a.coeffs.keys().chain(b.coeffs.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    for k in keys {
        if k >= limit {
            break;
        }
        let (x, y) = (a.coeff(k), b.coeff(k));
        if x != y {
            return SeriesComparison {
                equal: false,
                denom: d,
                through: limit,
                first_mismatch: Some(fmt_exponent(k, d)),
                lhs_coeff: Some(x.to_string()),
                rhs_coeff: Some(y.to_string()),
            };
        }
    }
    let enough = through.is_none_or(|t| t * d <= a.order);
    SeriesComparison {
        equal: enough,
        denom: d,
        through: limit,
        first_mismatch: if enough { None } else { Some("insufficient order".into()) },
        lhs_coeff: None,
        rhs_coeff: None,
    }
}

/// Relation of a homogeneous linear form to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rel {
    Ge,
    Gt,
    Le,
    Lt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<i64>,
    pub rel: Rel,
}

impl Constraint {
    pub fn new(coeffs: &[i64], rel: Rel) -> Self {
        Self { coeffs: coeffs.to_vec(), rel }
    }

    fn holds(&self, n: &[i64]) -> bool {
        let v: i64 = self.coeffs.iter().zip(n).map(|(a, b)| a * b).sum();
        match self.rel {
            Rel::Ge => v >= 0,
            Rel::Gt => v > 0,
            Rel::Le => v <= 0,
            Rel::Lt => v < 0,
        }
    }

    /// Closed-cone version, evaluated at a real direction with slack `eps`.
    fn holds_closed(&self, u: &[f64], eps: f64) -> bool {
        let v: f64 = self.coeffs.iter().zip(u).map(|(a, b)| *a as f64 * b).sum();
        match self.rel {
            Rel::Ge | Rel::Gt => v >= -eps,
            Rel::Le | Rel::Lt => v <= eps,
        }
    }

    fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| (*c as f64).powi(2)).sum::<f64>().sqrt()
    }
}

/// Exponent `(sum_ij quad[i][j] n_i n_j + sum_i lin[i] n_i + constant) / den`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadExponent {
    pub quad: Vec<Vec<i64>>,
    pub lin: Vec<i64>,
    pub constant: i64,
    pub den: i64,
}

impl QuadExponent {
    fn numerator(&self, n: &[i64]) -> i128 {
        let mut s = self.constant as i128;
        for (i, row) in self.quad.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                s += (*c as i128) * (n[i] as i128) * (n[j] as i128);
            }
        }
        for (c, x) in self.lin.iter().zip(n) {
            s += (*c as i128) * (*x as i128);
        }
        s
    }

    fn sym(&self) -> Vec<Vec<f64>> {
        let d = self.lin.len();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (self.quad[i][j] + self.quad[j][i]) as f64 / (2.0 * self.den as f64))
                    .collect()
            })
            .collect()
    }
}

/// `(-1)^{lin . n + constant}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignWeight {
    pub lin: Vec<i64>,
    pub constant: i64,
}

impl SignWeight {
    fn value(&self, n: &[i64]) -> i64 {
        let s: i64 = self.constant + self.lin.iter().zip(n).map(|(a, b)| a * b).sum::<i64>();
        if s.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }
}

/// `coefficient * sum_{n in Z^d, n in region} (-1)^{sign(n)} q^{exponent(n)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumPart {
    pub coefficient: i64,
    pub region: Vec<Constraint>,
    pub exponent: QuadExponent,
    pub sign: SignWeight,
}

/// A signed combination of cone sums. The classical shape is a positive region
/// with coefficient +1 and a negative region with coefficient -1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndefiniteSumSpec {
    pub parts: Vec<SumPart>,
}

impl SumPart {
    pub fn dim(&self) -> usize {
        self.exponent.lin.len()
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim();
        let ok = self.exponent.quad.len() == d
            && self.exponent.quad.iter().all(|r| r.len() == d)
            && self.sign.lin.len() == d
            && self.region.iter().all(|c| c.coeffs.len() == d)
            && self.exponent.den > 0;
        if ok {
            Ok(())
        } else {
            Err(MockError::InvalidInput("inconsistent dimensions in indefinite sum part".into()))
        }
    }

    /// Lower bound `kappa > 0` for the quadratic part of the exponent on unit
    /// vectors of the closed region, or `None` when the region is `{0}`.
    fn kappa(&self) -> Result<Option<f64>> {
        let d = self.dim();
        let m = self.exponent.sym();
        let q = |u: &[f64]| -> f64 {
            let mut s = 0.0;
            for i in 0..d {
                for j in 0..d {
                    s += m[i][j] * u[i] * u[j];
                }
            }
            s
        };
        let feasible = |u: &[f64], eps: f64| self.region.iter().all(|c| c.holds_closed(u, eps * c.norm()));
        let improper = || MockError::Series("quadratic exponent is not positive on the summation cone".into());
        match d {
            0 => Ok(None),
            1 => {
                let cands = [[1.0], [-1.0]];
                let vals: Vec<f64> = cands.iter().filter(|u| feasible(&u[..], 1e-12)).map(|u| q(&u[..])).collect();
                finish_kappa(vals, 0.0).ok_or_else(improper).map(|k| if k.is_nan() { None } else { Some(k) })
            }
            2 => {
                let mut cands: Vec<[f64; 2]> = Vec::new();
                for c in &self.region {
                    let n = c.norm();
                    if n > 0.0 {
                        let v = [-(c.coeffs[1] as f64) / n, c.coeffs[0] as f64 / n];
                        cands.push(v);
                        cands.push([-v[0], -v[1]]);
                    }
                }
                let mat = nalgebra::Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1]);
                let eig = mat.symmetric_eigen();
                for k in 0..2 {
                    let v = eig.eigenvectors.column(k);
                    cands.push([v[0], v[1]]);
                    cands.push([-v[0], -v[1]]);
                }
                let vals: Vec<f64> = cands.iter().filter(|u| feasible(&u[..], 1e-12)).map(|u| q(&u[..])).collect();
                finish_kappa(vals, 0.0).ok_or_else(improper).map(|k| if k.is_nan() { None } else { Some(k) })
            }
            _ => {
                let opnorm = sym_eigenvalues(&m).iter().fold(0.0f64, |a, b| a.max(b.abs()));
                let mut res = 8usize;
                while res <= 64 {
                    let delta = (d as f64).sqrt() * 2.0 / (res as f64 - 1.0);
                    let mut vals = Vec::new();
                    for_cube_surface(d, res, &mut |u| {
                        if feasible(u, delta) {
                            vals.push(q(u));
                        }
                    });
                    if let Some(k) = finish_kappa(vals, 2.0 * opnorm * delta) {
                        return Ok(if k.is_nan() { None } else { Some(k) });
                    }
                    res *= 2;
                }
                Err(improper())
            }
        }
    }

    /// Lattice points of the region with `|n|_inf <= radius`.
    fn for_each_point(&self, radius: i64, f: &mut dyn FnMut(&[i64])) -> Result<()> {
        let d = self.dim();
        let count = (2 * radius as u64 + 1).saturating_pow(d as u32);
        if count > MAX_POINTS {
            return Err(MockError::Series(format!(
                "enumeration would visit {count} lattice points (limit {MAX_POINTS})"
            )));
        }
        let mut n = vec![-radius; d];
        loop {
            if self.region.iter().all(|c| c.holds(&n)) {
                f(&n);
            }
            let mut i = 0;
            loop {
                if i == d {
                    return Ok(());
                }
                if n[i] < radius {
                    n[i] += 1;
                    break;
                }
                n[i] = -radius;
                i += 1;
            }
        }
    }

    /// Radius beyond which all region points have exponent `>= bound`.
    fn radius_for(&self, kappa: Option<f64>, bound: f64) -> i64 {
        let Some(k) = kappa else { return 0 };
        let l = self.exponent.lin.iter().map(|c| (*c as f64).powi(2)).sum::<f64>().sqrt()
            / self.exponent.den as f64;
        let c = self.exponent.constant as f64 / self.exponent.den as f64;
        let disc = l * l + 4.0 * k * (bound - c);
        if disc < 0.0 {
            return 0;
        }
        ((l + disc.sqrt()) / (2.0 * k)).ceil() as i64 + 1
    }
}

fn finish_kappa(vals: Vec<f64>, slack: f64) -> Option<f64> {
    if vals.is_empty() {
        return Some(f64::NAN);
    }
    let k = vals.iter().fold(f64::INFINITY, |a, b| a.min(*b)) - slack;
    if k > 0.0 {
        Some(k)
    } else {
        None
    }
}

fn for_cube_surface(d: usize, res: usize, f: &mut dyn FnMut(&[f64])) {
    let grid: Vec<f64> = (0..res).map(|k| -1.0 + 2.0 * k as f64 / (res - 1) as f64).collect();
    let mut idx = vec![0usize; d];
    loop {
        let u: Vec<f64> = idx.iter().map(|k| grid[*k]).collect();
        if u.iter().any(|x| x.abs() == 1.0) {
            let n = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            let v: Vec<f64> = u.iter().map(|x| x / n).collect();
            f(&v);
        }
        let mut i = 0;
        loop {
            if i == d {
                return;
            }
            if idx[i] + 1 < res {
                idx[i] += 1;
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

impl IndefiniteSumSpec {
    pub fn new(parts: Vec<SumPart>) -> Self {
        Self { parts }
    }

    /// Exact expansion through exponents `< order/denom`. The denominator is
    /// raised to a multiple of every part's exponent denominator if needed.
    pub fn expand(&self, order: i64, denom: i64) -> Result<QSeries> {
        let mut d = denom;
        for p in &self.parts {
            p.validate()?;
            d = d.lcm(&p.exponent.den);
        }
        let order = order * (d / denom);
        let mut out = QSeries::zero(d, order);
        let bound = order as f64 / d as f64;
        for p in &self.parts {
            let kappa = p.kappa()?;
            let radius = p.radius_for(kappa, bound);
            let f = d / p.exponent.den;
            p.for_each_point(radius, &mut |n| {
                let k = p.exponent.numerator(n) * f as i128;
                if k < order as i128 {
                    out.add_term(k as i64, BigInt::from(p.coefficient * p.sign.value(n)));
                }
            })?;
        }
        Ok(out)
    }

    /// Numerical value at `q = exp(2 pi i tau)` with absolute error about `tol`.
    pub fn evaluate(&self, tau: C64, tol: f64) -> Result<C64> {
        let y = tau.im;
        if !(y > 0.0) {
            return Err(MockError::NotInUpperHalfPlane(y));
        }
        let mut total = C64::new(0.0, 0.0);
        for p in &self.parts {
            p.validate()?;
            let kappa = p.kappa()?;
            let d = p.dim() as i32;
            let radius = match kappa {
                None => 0,
                Some(k) => {
                    let l = p.exponent.lin.iter().map(|c| (*c as f64).powi(2)).sum::<f64>().sqrt()
                        / p.exponent.den as f64;
                    let c = p.exponent.constant as f64 / p.exponent.den as f64;
                    let tail = |r: i64| -> f64 {
                        let mut s = 0.0;
                        let mut t = r;
                        loop {
                            let rf = t as f64;
                            let e = k * rf * rf - l * (rf + 1.0) + c;
                            let term = (2.0 * rf + 3.0).powi(d) * (-2.0 * PI * y * e).exp();
                            s += term;
                            if e > 0.0 && term < 1e-3 * tol && t > r + 2 {
                                break;
                            }
                            t += 1;
                            if t > r + 100_000 {
                                return f64::INFINITY;
                            }
                        }
                        s
                    };
                    let mut r = 1i64;
                    while tail(r) > tol {
                        r += 1 + r / 4;
                        if r > 100_000 {
                            return Err(MockError::Truncation("indefinite sum radius too large".into()));
                        }
                    }
                    r
                }
            };
            let den = p.exponent.den as f64;
            let mut s = C64::new(0.0, 0.0);
            p.for_each_point(radius, &mut |n| {
                let e = p.exponent.numerator(n) as f64 / den;
                s += (2.0 * PI * I * tau * e).exp() * p.sign.value(n) as f64;
            })?;
            total += s * p.coefficient as f64;
        }
        Ok(total)
    }
}

/// Builder shorthand for a two-variable part.
pub fn part2(
    coefficient: i64,
    region: &[([i64; 2], Rel)],
    quad: [[i64; 2]; 2],
    lin: [i64; 2],
    constant: i64,
    den: i64,
    sign: [i64; 2],
) -> SumPart {
    SumPart {
        coefficient,
        region: region.iter().map(|(c, r)| Constraint::new(c, *r)).collect(),
        exponent: QuadExponent {
            quad: vec![quad[0].to_vec(), quad[1].to_vec()],
            lin: lin.to_vec(),
            constant,
            den,
        },
        sign: SignWeight { lin: sign.to_vec(), constant: 0 },
    }
}

/// Builder shorthand for a one-variable part.
pub fn part1(coefficient: i64, region: &[(i64, Rel)], quad: i64, lin: i64, den: i64, sign: i64) -> SumPart {
    SumPart {
        coefficient,
        region: region.iter().map(|(c, r)| Constraint::new(&[*c], *r)).collect(),
        exponent: QuadExponent { quad: vec![vec![quad]], lin: vec![lin], constant: 0, den },
        sign: SignWeight { lin: vec![sign], constant: 0 },
    }
}

/// The constant `c` as a zero-variable part.
pub fn part0(c: i64) -> SumPart {
    SumPart {
        coefficient: c,
        region: vec![],
        exponent: QuadExponent { quad: vec![], lin: vec![], constant: 0, den: 1 },
        sign: SignWeight { lin: vec![], constant: 0 },
    }
}

/// Absolute value of the largest coefficient, handy for diagnostics.
pub fn max_abs_coeff(s: &QSeries) -> BigInt {
    s.terms().map(|(_, c)| c.abs()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_product_is_pentagonal() {
        let p = euler_product(30, 1);
        let nonzero: Vec<i64> = p.terms().map(|(k, _)| k).collect();
        assert_eq!(nonzero, vec![0, 1, 2, 5, 7, 12, 15, 22, 26]);
    }

    #[test]
    fn inverse_of_euler_product_counts_partitions() {
        let p = euler_product(20, 1).invert_unit().unwrap();
        let parts: Vec<i64> = (0..10).map(|k| p.coeff(k).try_into().unwrap()).collect();
        assert_eq!(parts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
    }

    #[test]
    fn rescale_keeps_values() {
        let p = euler_product(10, 1);
        let r = p.rescale(4).unwrap();
        assert_eq!(r.coeff(8), p.coeff(2));
        assert_eq!(r.order(), 40);
    }

    #[test]
    fn non_unit_inverse_is_rejected() {
        let s = QSeries::monomial(0, BigInt::from(2), 1, 10);
        assert!(s.invert_unit().is_err());
    }
}
