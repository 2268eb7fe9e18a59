//! Named cone sums for the fifth and seventh order mock theta functions and
//! the catalog of exact q-series identities between them.
//!
//! Every sum is written in the variables `(n, j)` (fifth order) or `(r, s)`
//! (seventh order). The "Andrews" forms are the one-sided sums with the
//! factor `(1 -+ q^{...})`; the two-cone forms arise from `n -> -n-1`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{MockError, Result};
use crate::qseries::{
    assert_equal, euler_product, eulerian_f0, part0, part1, part2, qpochhammer, IndefiniteSumSpec, QSeries,
    Rel, SeriesComparison,
};

use Rel::{Ge, Gt, Le, Lt};

const POS: [([i64; 2], Rel); 2] = [([1, 1], Ge), ([1, -1], Ge)];
const NEG: [([i64; 2], Rel); 2] = [([1, 1], Lt), ([1, -1], Lt)];
const STRICT_POS: [([i64; 2], Rel); 2] = [([1, 1], Ge), ([1, -1], Gt)];
const STRICT_NEG: [([i64; 2], Rel); 2] = [([1, 1], Lt), ([1, -1], Le)];
const OPEN_POS: [([i64; 2], Rel); 2] = [([1, 1], Gt), ([1, -1], Gt)];
const QUADRANT_POS: [([i64; 2], Rel); 2] = [([1, 0], Ge), ([0, 1], Ge)];
const QUADRANT_NEG: [([i64; 2], Rel); 2] = [([1, 0], Lt), ([0, 1], Lt)];
/// `0 <= j <= 2n`
const TRIANGLE: [([i64; 2], Rel); 2] = [([0, 1], Ge), ([2, -1], Ge)];

/// Quadratic part `(a n^2 + c j^2)/den` plus linear part `(p n + s j)/den`.
fn diag(a: i64, c: i64) -> [[i64; 2]; 2] {
    [[a, 0], [0, c]]
}

/// `(sum_{n+j>=0, n-j>=0} - sum_{n+j<0, n-j<0}) (-1)^{sign.(n,j)} q^{e(n,j)}`
fn two_cone(quad: [[i64; 2]; 2], lin: [i64; 2], den: i64, sign: [i64; 2]) -> IndefiniteSumSpec {
    IndefiniteSumSpec::new(vec![
        part2(1, &POS, quad, lin, 0, den, sign),
        part2(-1, &NEG, quad, lin, 0, den, sign),
    ])
}

/// Strict variant with the diagonal `n = j` moved to the negative cone.
fn two_cone_strict(quad: [[i64; 2]; 2], lin: [i64; 2], den: i64, sign: [i64; 2]) -> IndefiniteSumSpec {
    IndefiniteSumSpec::new(vec![
        part2(1, &STRICT_POS, quad, lin, 0, den, sign),
        part2(-1, &STRICT_NEG, quad, lin, 0, den, sign),
    ])
}

/// `sum_{|j| <= n} (-1)^j q^{e} (1 - q^{e'})` with `e' - e = (shift_lin n + shift_const)/den`.
fn andrews(
    region: &[([i64; 2], Rel)],
    quad: [[i64; 2]; 2],
    lin: [i64; 2],
    den: i64,
    sign: [i64; 2],
    second_sign: i64,
    shift_lin: i64,
    shift_const: i64,
) -> IndefiniteSumSpec {
    IndefiniteSumSpec::new(vec![
        part2(1, region, quad, lin, 0, den, sign),
        part2(second_sign, region, quad, [lin[0] + shift_lin, lin[1]], shift_const, den, sign),
    ])
}

/// `f_0`: `sum_{|j|<=n} (-1)^j q^{5/2 n^2 + n/2 - j^2} (1 - q^{4n+2})`.
pub fn f0_andrews() -> IndefiniteSumSpec {
    andrews(&POS, diag(5, -2), [1, 0], 2, [0, 1], -1, 8, 4)
}

/// `f_0` two-cone form, exponent `5/2 n^2 + n/2 - j^2`.
pub fn f0_cones() -> IndefiniteSumSpec {
    two_cone(diag(5, -2), [1, 0], 2, [0, 1])
}

/// `f_1`: `sum_{|j|<=n} (-1)^j q^{5/2 n^2 + 3/2 n - j^2} (1 - q^{2n+1})`.
pub fn f1_andrews() -> IndefiniteSumSpec {
    andrews(&POS, diag(5, -2), [3, 0], 2, [0, 1], -1, 4, 2)
}

pub fn f1_cones() -> IndefiniteSumSpec {
    two_cone(diag(5, -2), [3, 0], 2, [0, 1])
}

/// `F_0`: `sum_{0<=j<=2n} (-1)^n q^{5n^2 + 2n - j^2/2 - j/2} (1 + q^{6n+3})`.
pub fn big_f0_andrews() -> IndefiniteSumSpec {
    andrews(&TRIANGLE, diag(10, -1), [4, -1], 2, [1, 0], 1, 12, 6)
}

/// `F_0` two-cone form, exponent `5n^2 + 2n - 2j^2 - j`, sign `(-1)^n`.
pub fn big_f0_cones() -> IndefiniteSumSpec {
    two_cone(diag(5, -2), [2, -1], 1, [1, 0])
}

/// Strict two-cone form, equal to `(q^2;q^2)_inf (F_0(q) - 1)`.
pub fn big_f0_strict() -> IndefiniteSumSpec {
    two_cone_strict(diag(5, -2), [2, -1], 1, [1, 0])
}

/// `F_1`: `sum_{0<=j<=2n} (-1)^n q^{5n^2 + 4n - j^2/2 - j/2} (1 + q^{2n+1})`.
pub fn big_f1_andrews() -> IndefiniteSumSpec {
    andrews(&TRIANGLE, diag(10, -1), [8, -1], 2, [1, 0], 1, 4, 2)
}

pub fn big_f1_cones() -> IndefiniteSumSpec {
    two_cone(diag(5, -2), [4, -1], 1, [1, 0])
}

/// The bracket multiplying `(-q)_inf/(q)_inf` in the formula for `1 + 2 psi_0`:
/// `1 + 2 sum_{n>=1} (-1)^n q^{n^2+n} - 2 sum_{|j|<n} (-1)^j q^{5/2 n^2 - n/2 - 3/2 j^2 - j/2} (1 - q^n)`.
pub fn psi0_andrews_bracket() -> IndefiniteSumSpec {
    IndefiniteSumSpec::new(vec![
        part0(1),
        part1(2, &[(1, Gt)], 1, 1, 1, 1),
        part2(-2, &OPEN_POS, diag(5, -3), [-1, -1], 0, 2, [0, 1]),
        part2(2, &OPEN_POS, diag(5, -3), [1, -1], 0, 2, [0, 1]),
    ])
}

/// Strict two-cone sum with exponent `5/2 n^2 + n/2 - 3/2 j^2 - j/2`, equal to `((q)_inf/(-q)_inf) psi_0`.
pub fn psi0_strict() -> IndefiniteSumSpec {
    two_cone_strict(diag(5, -3), [1, -1], 2, [0, 1])
}

/// Right hand side of the rewriting of the `psi_0` bracket:
/// twice the strict sum plus `2 sum_{n<=-1} (-1)^n q^{n^2} + 1`.
pub fn psi0_bracket_rewritten() -> IndefiniteSumSpec {
    let mut parts = psi0_strict().parts;
    for p in &mut parts {
        p.coefficient *= 2;
    }
    parts.push(part1(2, &[(1, Lt)], 1, 0, 1, 1));
    parts.push(part0(1));
    IndefiniteSumSpec::new(parts)
}

/// `sum_{n in Z} (-1)^n q^{n^2}`
pub fn gauss_theta() -> IndefiniteSumSpec {
    IndefiniteSumSpec::new(vec![part1(1, &[], 1, 0, 1, 1)])
}

/// `psi_1`: `sum_{|j|<=n} (-1)^j q^{5/2 n^2 + 3/2 n - 3/2 j^2 - j/2} (1 - q^{2n+1})`.
pub fn psi1_andrews() -> IndefiniteSumSpec {
    andrews(&POS, diag(5, -3), [3, -1], 2, [0, 1], -1, 4, 2)
}

pub fn psi1_cones() -> IndefiniteSumSpec {
    two_cone(diag(5, -3), [3, -1], 2, [0, 1])
}

/// `phi_0`: `sum_{|j|<=n} (-1)^j q^{5n^2 + 2n - 3j^2 - j} (1 - q^{6n+3})`.
pub fn phi0_andrews() -> IndefiniteSumSpec {
    andrews(&POS, diag(5, -3), [2, -1], 1, [0, 1], -1, 6, 3)
}

pub fn phi0_cones() -> IndefiniteSumSpec {
    two_cone(diag(5, -3), [2, -1], 1, [0, 1])
}

/// `phi_1 / q`: `sum_{|j|<=n} (-1)^j q^{5n^2 + 4n - 3j^2 - j} (1 - q^{2n+1})`.
pub fn phi1_andrews() -> IndefiniteSumSpec {
    andrews(&POS, diag(5, -3), [4, -1], 1, [0, 1], -1, 2, 1)
}

pub fn phi1_cones() -> IndefiniteSumSpec {
    two_cone(diag(5, -3), [4, -1], 1, [0, 1])
}

fn seventh(lin: i64, constant: i64) -> IndefiniteSumSpec {
    let quad = [[3, 4], [4, 3]];
    IndefiniteSumSpec::new(vec![
        part2(1, &QUADRANT_POS, quad, [lin, lin], constant, 2, [1, 1]),
        part2(-1, &QUADRANT_NEG, quad, [lin, lin], constant, 2, [1, 1]),
    ])
}

/// `(q)_inf F_0(q)` for the seventh order function `F_0`:
/// `(sum_{r,s>=0} - sum_{r,s<0}) (-1)^{r+s} q^{3/2 r^2 + 4rs + 3/2 s^2 + r/2 + s/2}`.
pub fn seventh_f0() -> IndefiniteSumSpec {
    seventh(1, 0)
}

/// `(q)_inf F_1(q)`, linear part `5/2 r + 5/2 s + 1`.
pub fn seventh_f1() -> IndefiniteSumSpec {
    seventh(5, 2)
}

/// `(q)_inf F_2(q)`, linear part `3/2 r + 3/2 s`.
pub fn seventh_f2() -> IndefiniteSumSpec {
    seventh(3, 0)
}

/// `(sum_{n,m>=0} - sum_{n,m<0}) (-1)^{n+m} q^{n^2/2 + 2nm + m^2/2 + n/2 + m/2}`, equal to `(q)_inf^2`.
pub fn example_binary_1() -> IndefiniteSumSpec {
    let quad = [[1, 2], [2, 1]];
    IndefiniteSumSpec::new(vec![
        part2(1, &QUADRANT_POS, quad, [1, 1], 0, 2, [1, 1]),
        part2(-1, &QUADRANT_NEG, quad, [1, 1], 0, 2, [1, 1]),
    ])
}

/// `sum_{n >= 2|m|} (-1)^{n+m} q^{n^2/2 - 3m^2/2 + n/2 + m/2}`, equal to `(q)_inf^2`.
pub fn example_binary_2() -> IndefiniteSumSpec {
    IndefiniteSumSpec::new(vec![part2(1, &[([1, -2], Ge), ([1, 2], Ge)], diag(1, -3), [1, 1], 0, 2, [1, 1])])
}

/// Looks up a named sum by id.
pub fn named_sum(id: &str) -> Result<IndefiniteSumSpec> {
    Ok(match id {
        "f0_andrews" => f0_andrews(),
        "f0_cones" => f0_cones(),
        "f1_andrews" => f1_andrews(),
        "f1_cones" => f1_cones(),
        "big_f0_andrews" => big_f0_andrews(),
        "big_f0_cones" => big_f0_cones(),
        "big_f0_strict" => big_f0_strict(),
        "big_f1_andrews" => big_f1_andrews(),
        "big_f1_cones" => big_f1_cones(),
        "psi0_andrews_bracket" => psi0_andrews_bracket(),
        "psi0_strict" => psi0_strict(),
        "psi0_bracket_rewritten" => psi0_bracket_rewritten(),
        "psi1_andrews" => psi1_andrews(),
        "psi1_cones" => psi1_cones(),
        "phi0_andrews" => phi0_andrews(),
        "phi0_cones" => phi0_cones(),
        "phi1_andrews" => phi1_andrews(),
        "phi1_cones" => phi1_cones(),
        "gauss_theta" => gauss_theta(),
        "seventh_f0" => seventh_f0(),
        "seventh_f1" => seventh_f1(),
        "seventh_f2" => seventh_f2(),
        "example_binary_1" => example_binary_1(),
        "example_binary_2" => example_binary_2(),
        _ => return Err(MockError::UnknownId(id.to_string())),
    })
}

pub const NAMED_SUMS: [&str; 24] = [
    "f0_andrews",
    "f0_cones",
    "f1_andrews",
    "f1_cones",
    "big_f0_andrews",
    "big_f0_cones",
    "big_f0_strict",
    "big_f1_andrews",
    "big_f1_cones",
    "psi0_andrews_bracket",
    "psi0_strict",
    "psi0_bracket_rewritten",
    "psi1_andrews",
    "psi1_cones",
    "phi0_andrews",
    "phi0_cones",
    "phi1_andrews",
    "phi1_cones",
    "gauss_theta",
    "seventh_f0",
    "seventh_f1",
    "seventh_f2",
    "example_binary_1",
    "example_binary_2",
];

/// Result of one exact identity check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QCheckResult {
    pub id: String,
    pub anchor: String,
    pub order: i64,
    pub comparison: SeriesComparison,
}

/// An exact identity `lhs == rhs` through a plain exponent bound.
pub struct QIdentity {
    pub id: &'static str,
    pub anchor: &'static str,
    sides: fn(i64) -> Result<(QSeries, QSeries)>,
}

impl QIdentity {
    /// Both sides, exact below `q^order`.
    pub fn sides(&self, order: i64) -> Result<(QSeries, QSeries)> {
        (self.sides)(order)
    }

    pub fn run(&self, order: i64) -> Result<QCheckResult> {
        if order < 1 {
            return Err(MockError::InvalidInput(format!("order must be positive, got {order}")));
        }
        let (l, r) = self.sides(order)?;
        Ok(QCheckResult {
            id: self.id.to_string(),
            anchor: self.anchor.to_string(),
            order,
            comparison: assert_equal(&l, &r, Some(order)),
        })
    }
}

fn expand(spec: IndefiniteSumSpec, order: i64, denom: i64) -> Result<QSeries> {
    spec.expand(order * denom, denom)
}

fn pair(a: IndefiniteSumSpec, b: IndefiniteSumSpec, order: i64, denom: i64) -> Result<(QSeries, QSeries)> {
    Ok((expand(a, order, denom)?, expand(b, order, denom)?))
}

/// The part of `s` supported on integral exponents.
pub fn integral_part(s: &QSeries) -> QSeries {
    let d = s.denom();
    let mut out = QSeries::zero(d, s.order());
    for (k, c) in s.terms() {
        if k.rem_euclid(d) == 0 {
            out = out.add(&QSeries::monomial(k, c.clone(), d, s.order()));
        }
    }
    out
}

/// `s / (q)_inf`, exact below `q^order`.
pub fn divide_by_euler(s: &QSeries, order: i64) -> Result<QSeries> {
    let inv = euler_product(order * s.denom(), s.denom()).invert_unit()?;
    let mut p = s.mul(&inv);
    p.truncate(order * s.denom());
    Ok(p)
}

fn euler_squared(order: i64, denom: i64) -> QSeries {
    let e = euler_product(order * denom, denom);
    e.mul(&e)
}

fn seventh_integral(spec: IndefiniteSumSpec, order: i64) -> Result<(QSeries, QSeries)> {
    let s = divide_by_euler(&expand(spec, order, 2)?, order)?;
    let i = integral_part(&s);
    Ok((s, i))
}

/// The catalog driven by `qcheck`.
pub fn catalog() -> Vec<QIdentity> {
    vec![
        QIdentity {
            id: "in5",
            anchor: "fifth_order.f0_eulerian_equals_cone_sum",
            sides: |n| {
                let lhs = eulerian_f0(n)?;
                let rhs = divide_by_euler(&expand(f0_andrews(), n, 2)?, n)?;
                Ok((lhs, rhs))
            },
        },
        QIdentity {
            id: "efnul",
            anchor: "fifth_order.f0_two_cones",
            sides: |n| pair(f0_andrews(), f0_cones(), n, 2),
        },
        QIdentity {
            id: "le1_f1",
            anchor: "fifth_order.f1_two_cones",
            sides: |n| pair(f1_andrews(), f1_cones(), n, 2),
        },
        QIdentity {
            id: "le1_F0",
            anchor: "fifth_order.big_f0_two_cones",
            sides: |n| pair(big_f0_andrews(), big_f0_cones(), n, 2),
        },
        QIdentity {
            id: "le1_F0_split",
            anchor: "fifth_order.big_f0_diagonal_is_euler_q2",
            sides: |n| {
                let e2 = euler_product(n, 1).dilate(2);
                let mut e2 = e2;
                e2.truncate(n);
                let lhs = e2.add(&expand(big_f0_strict(), n, 1)?);
                Ok((lhs, expand(big_f0_cones(), n, 1)?))
            },
        },
        QIdentity {
            id: "le1_F1",
            anchor: "fifth_order.big_f1_two_cones",
            sides: |n| pair(big_f1_andrews(), big_f1_cones(), n, 2),
        },
        QIdentity {
            id: "fietje",
            anchor: "fifth_order.psi0_bracket_rewritten",
            sides: |n| pair(psi0_andrews_bracket(), psi0_bracket_rewritten(), n, 2),
        },
        QIdentity {
            id: "le2_gauss",
            anchor: "fifth_order.gauss_theta_product",
            sides: |n| {
                let g = expand(gauss_theta(), n, 1)?;
                let lhs = g.mul(&qpochhammer(1, -1, 1, None, n, 1));
                Ok((lhs, euler_product(n, 1)))
            },
        },
        QIdentity {
            id: "le2_psi1",
            anchor: "fifth_order.psi1_two_cones",
            sides: |n| pair(psi1_andrews(), psi1_cones(), n, 2),
        },
        QIdentity {
            id: "le2_phi0",
            anchor: "fifth_order.phi0_two_cones",
            sides: |n| pair(phi0_andrews(), phi0_cones(), n, 1),
        },
        QIdentity {
            id: "le2_phi1",
            anchor: "fifth_order.phi1_two_cones",
            sides: |n| pair(phi1_andrews(), phi1_cones(), n, 1),
        },
        QIdentity {
            id: "example2_1",
            anchor: "binary.example_one_equals_euler_squared",
            sides: |n| Ok((expand(example_binary_1(), n, 2)?, euler_squared(n, 2))),
        },
        QIdentity {
            id: "example2_2",
            anchor: "binary.example_two_equals_euler_squared",
            sides: |n| Ok((expand(example_binary_2(), n, 2)?, euler_squared(n, 2))),
        },
        QIdentity {
            id: "seventh_f0_integral",
            anchor: "seventh_order.f0_integral_expansion",
            sides: |n| seventh_integral(seventh_f0(), n),
        },
        QIdentity {
            id: "seventh_f1_integral",
            anchor: "seventh_order.f1_integral_expansion",
            sides: |n| seventh_integral(seventh_f1(), n),
        },
        QIdentity {
            id: "seventh_f2_integral",
            anchor: "seventh_order.f2_integral_expansion",
            sides: |n| seventh_integral(seventh_f2(), n),
        },
    ]
}

pub fn find(id: &str) -> Result<QIdentity> {
    catalog().into_iter().find(|q| q.id == id).ok_or_else(|| MockError::UnknownId(id.to_string()))
}

/// Coefficient of `q^k` (integral `k`) in a series, as a plain integer when it fits.
pub fn coeff_at(s: &QSeries, k: i64) -> BigInt {
    s.coeff(k * s.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whole_catalog_passes_at_order_30() {
        for q in catalog() {
            let r = q.run(30).unwrap();
            assert!(r.comparison.equal, "{}: {:?}", q.id, r.comparison);
        }
    }

    #[test]
    fn every_named_sum_resolves() {
        for id in NAMED_SUMS {
            assert!(named_sum(id).is_ok());
        }
        assert!(named_sum("bogus").is_err());
    }
}
