//! String-keyed registries of evaluators and identity checks.
//!
//! Every check draws its sample points from a ChaCha8 stream seeded by the
//! suite seed and the check id, so results do not depend on scheduling.
//! Deviations are `|lhs - rhs| / max(1, |rhs|)` unless a check says otherwise.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{MockError, Result};
use crate::families::{cusp_decompose, families, square_minus_identity, unary_r};
use crate::fourier::{example_spec, f_tilde, r_ml, reconstruct, theta_decompose};
use crate::indefinite::{
    beta_series, indefinite_theta_ab, indefinite_theta_z, modular_s_sides, orthogonal_action, IndefThetaSpec,
    LatticeForm,
};
use crate::lerch::{
    appell_mu, completed_mu, correction_r, mordell_h, period_closed_h, period_closed_r, period_integral_full,
    period_integral_upper,
};
use crate::numerics::{
    beta, casimir, dbar, degraded, e_complex, parse_real, pow_neg_i_tau_half, residue_by_contour, root_of_unity,
    sqrt_neg_i_tau, C64, I,
};
use crate::qidentities::{catalog, QIdentity};
use crate::theta::{dedekind_eta, g_ab, jacobi_theta, jacobi_theta_prime0, theta_char, theta_ml};

/// `|lhs - rhs| / max(1, |rhs|)`
pub fn deviation(lhs: C64, rhs: C64) -> f64 {
    let d = (lhs - rhs).norm() / rhs.norm().max(1.0);
    if d.is_nan() {
        f64::INFINITY
    } else {
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Qseries,
    Ch1,
    Ch2,
    Ch3,
    Ch4,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Qseries, Suite::Ch1, Suite::Ch2, Suite::Ch3, Suite::Ch4];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Qseries => "qseries",
            Suite::Ch1 => "ch1",
            Suite::Ch2 => "ch2",
            Suite::Ch3 => "ch3",
            Suite::Ch4 => "ch4",
        }
    }

    /// Parses a suite name; `all` selects every suite.
    pub fn parse(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Self::ALL.to_vec());
        }
        Self::ALL
            .iter()
            .find(|x| x.name() == s)
            .map(|x| vec![*x])
            .ok_or_else(|| MockError::UnknownId(format!("suite '{s}'")))
    }
}

/// Run parameters shared by all checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckContext {
    pub seed: u64,
    /// Replaces every check's own tolerance when set.
    pub tol: Option<f64>,
    /// Exponent bound for exact q-series checks.
    pub order: i64,
}

impl Default for CheckContext {
    fn default() -> Self {
        Self { seed: 42, tol: None, order: 50 }
    }
}

/// Raw result of running a check.
#[derive(Debug, Clone, PartialEq)]
pub struct Measured {
    pub samples: usize,
    pub max_deviation: f64,
    pub note: Option<String>,
}

/// One report line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: String,
    pub anchor: String,
    pub suite: Suite,
    pub samples: usize,
    /// `None` when the check errored or produced a non-finite deviation.
    pub max_deviation: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

pub trait IdentityCheck: Send + Sync {
    fn id(&self) -> &str;
    /// Human readable statement of the identity.
    fn anchor(&self) -> &str;
    fn suite(&self) -> Suite;
    fn tolerance(&self) -> f64;
    fn measure(&self, ctx: &CheckContext) -> Result<Measured>;

    fn run(&self, ctx: &CheckContext) -> CheckOutcome {
        let tolerance = ctx.tol.unwrap_or_else(|| self.tolerance());
        let (samples, max_deviation, note, error) = match self.measure(ctx) {
            Ok(m) => (m.samples, Some(m.max_deviation).filter(|d| d.is_finite()), m.note, None),
            Err(e) => (0, None, None, Some(e.to_string())),
        };
        let pass = error.is_none() && max_deviation.is_some_and(|d| d <= tolerance);
        CheckOutcome {
            id: self.id().to_string(),
            anchor: self.anchor().to_string(),
            suite: self.suite(),
            samples,
            max_deviation,
            tolerance,
            pass,
            note,
            error,
        }
    }
}

/// Seeded sample source for one check.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64, id: &str) -> Self {
        let h = id.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
        Self { rng: ChaCha8Rng::seed_from_u64(seed ^ h) }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.random_range(lo..=hi)
    }

    /// `y in [0.5, 3]`, `|x| <= 1`.
    pub fn tau(&mut self) -> C64 {
        C64::new(self.uniform(-1.0, 1.0), self.uniform(0.5, 3.0))
    }

    /// Points near the unit circle, where both `tau` and `-1/tau` are well inside the upper half plane.
    pub fn tau_near_unit_circle(&mut self) -> C64 {
        C64::new(self.uniform(-0.5, 0.5), self.uniform(0.8, 1.5))
    }

    /// Characteristic in `(-0.45, 0.45)`.
    pub fn char(&mut self) -> f64 {
        self.uniform(-0.45, 0.45)
    }

    /// Characteristic in `(-0.45, 0.45)` at distance at least 0.05 from 0.
    pub fn char_off_zero(&mut self) -> f64 {
        let s = if self.rng.random_bool(0.5) { 1.0 } else { -1.0 };
        s * self.uniform(0.05, 0.45)
    }

    /// `alpha tau + beta` with lattice coordinates bounded away from the lattice.
    pub fn point(&mut self, tau: C64) -> C64 {
        tau * self.char_off_zero() + self.char_off_zero()
    }

    /// `alpha tau + beta` with `alpha, beta in [0.05, 0.2]`; sums of three such points stay off the lattice.
    pub fn small_point(&mut self, tau: C64) -> C64 {
        tau * self.uniform(0.05, 0.2) + self.uniform(0.05, 0.2)
    }

    pub fn chars(&mut self, r: usize) -> Vec<f64> {
        (0..r).map(|_| self.char()).collect()
    }
}

type Body = fn(&mut Sampler, usize) -> Result<Vec<f64>>;

/// A numerical identity evaluated at `n` sample points.
pub struct NumericCheck {
    pub id: &'static str,
    pub anchor: &'static str,
    pub suite: Suite,
    pub tol: f64,
    pub n: usize,
    body: Body,
}

impl NumericCheck {
    pub fn new(id: &'static str, anchor: &'static str, suite: Suite, tol: f64, n: usize, body: Body) -> Self {
        Self { id, anchor, suite, tol, n, body }
    }
}

impl IdentityCheck for NumericCheck {
    fn id(&self) -> &str {
        self.id
    }
    fn anchor(&self) -> &str {
        self.anchor
    }
    fn suite(&self) -> Suite {
        self.suite
    }
    fn tolerance(&self) -> f64 {
        self.tol
    }
    fn measure(&self, ctx: &CheckContext) -> Result<Measured> {
        let mut s = Sampler::new(ctx.seed, self.id);
        let devs = (self.body)(&mut s, self.n)?;
        let max = devs.iter().fold(0.0f64, |m, d| if d.is_nan() { f64::INFINITY } else { m.max(*d) });
        Ok(Measured { samples: devs.len(), max_deviation: max, note: None })
    }
}

/// An exact q-series identity; the deviation is 0 on agreement and 1 otherwise.
pub struct SeriesCheck(pub QIdentity);

impl IdentityCheck for SeriesCheck {
    fn id(&self) -> &str {
        self.0.id
    }
    fn anchor(&self) -> &str {
        self.0.anchor
    }
    fn suite(&self) -> Suite {
        Suite::Qseries
    }
    fn tolerance(&self) -> f64 {
        0.0
    }
    fn measure(&self, ctx: &CheckContext) -> Result<Measured> {
        let r = self.0.run(ctx.order)?;
        let c = &r.comparison;
        let note = c.first_mismatch.as_ref().map(|e| match (&c.lhs_coeff, &c.rhs_coeff) {
            (Some(l), Some(rr)) => format!("first mismatch at q^{e}: {l} vs {rr}"),
            _ => format!("first mismatch at {e}"),
        });
        Ok(Measured { samples: 1, max_deviation: if c.equal { 0.0 } else { 1.0 }, note })
    }
}

fn each(s: &mut Sampler, n: usize, mut f: impl FnMut(&mut Sampler, usize) -> Result<f64>) -> Result<Vec<f64>> {
    (0..n).map(|k| f(s, k)).collect()
}

fn max_dev(pairs: &[(C64, C64)]) -> f64 {
    pairs.iter().fold(0.0f64, |m, (l, r)| m.max(deviation(*l, *r)))
}

fn vec_dev(l: &[C64], r: &[C64]) -> f64 {
    l.iter().zip(r).fold(0.0f64, |m, (a, b)| m.max(deviation(*a, *b)))
}

fn e(x: C64) -> C64 {
    (PI * I * x).exp()
}

// ---------------------------------------------------------------- chapter 1

fn ch1_checks() -> Vec<NumericCheck> {
    use Suite::Ch1;
    let n = 20;
    vec![
        NumericCheck::new("mordell.shift_one", "h(z) + h(z+1) = 2/sqrt(-i tau) e^{pi i (z+1/2)^2/tau}", Ch1, 1e-8, n, |s, n| {
            each(s, n, |s, _| {
                let tau = s.tau();
                let z = s.point(tau);
                let lhs = mordell_h(z, tau)? + mordell_h(z + 1.0, tau)?;
                let rhs = 2.0 / sqrt_neg_i_tau(tau) * e((z + 0.5) * (z + 0.5) / tau);
                Ok(deviation(lhs, rhs))
            })
        }),
        NumericCheck::new("mordell.shift_tau", "h(z) + e^{-2 pi i z - pi i tau} h(z+tau) = 2 e^{-pi i z - pi i tau/4}", Ch1, 1e-8, n, |s, n| {
            each(s, n, |s, _| {
                let tau = s.tau();
                let z = s.point(tau);
                let lhs = mordell_h(z, tau)? + e(-2.0 * z - tau) * mordell_h(z + tau, tau)?;
                Ok(deviation(lhs, 2.0 * e(-z - tau / 4.0)))
            })
        }),
        NumericCheck::new("mordell.modular_s", "h(z/tau; -1/tau) = sqrt(-i tau) e^{-pi i z^2/tau} h(z; tau)", Ch1, 1e-8, n, |s, n| {
            each(s, n, |s, _| {
                let tau = s.tau();
                let z = s.point(tau);
                let lhs = mordell_h(z / tau, -1.0 / tau)?;
                Ok(deviation(lhs, sqrt_neg_i_tau(tau) * e(-z * z / tau) * mordell_h(z, tau)?))
            })
        }),
        NumericCheck::new(
            "mordell.modular_t",
            "h(z;tau) = e^{pi i/4} h(z;tau+1) + e^{-pi i/4} e^{pi i z^2/(tau+1)} / sqrt(tau+1) h(z/(tau+1); tau/(tau+1))",
            Ch1,
            1e-8,
            n,
            |s, n| {
                each(s, n, |s, _| {
                    let tau = s.tau();
                    let z = s.point(tau);
                    let t1 = tau + 1.0;
                    let rhs = e(C64::new(0.25, 0.0)) * mordell_h(z, t1)?
                        + e(C64::new(-0.25, 0.0)) * e(z * z / t1) / t1.sqrt() * mordell_h(z / t1, tau / t1)?;
                    Ok(deviation(mordell_h(z, tau)?, rhs))
                })
            },
        ),
        NumericCheck::new("lerch.mu_shift_one", "mu(u+1, v) = -mu(u, v)", Ch1, 1e-8, n, |s, n| {
            each(s, n, |s, _| {
                let tau = s.tau();
                let (u, v) = (s.point(tau), s.point(tau));
                Ok(deviation(appell_mu(u + 1.0, v, tau)?, -appell_mu(u, v, tau)?))
            })
        }),
        NumericCheck::new("lerch.mu_shift_v_one", "mu(u, v+1) = -mu(u, v)", Ch1, 1e-8, n, |s, n| {
            each(s, n, |s, _| {
                let tau = s.tau();
                let (u, v) = (s.point(tau), s.point(tau));
                Ok(deviation(appell_mu(u, v + 1.0, tau)?, -appell_mu(u, v, tau)?))
            })
        }),
        NumericCheck::new(
            "lerch.mu_shift_tau",
            "mu(u,v) + e^{-2 pi i (u-v) - pi i tau} mu(u+tau, v) = -i e^{-pi i (u-v) - pi i tau/4}",
            Ch1,
            1e-8,
            n,
            |s, n| {
                each(s, n, |s, _| {
                    let tau = s.tau();
                    let (u, v) = (s.point(tau), s.point(tau));
                    let lhs = appell_mu(u, v, tau)? + e(-2.0 * (u - v) - tau) * appell_mu(u + tau, v, tau)?;
                    Ok(deviation(lhs, -I * e(-(u - v) - tau / 4.0)))
                })
            },
        ),
        NumericCheck::new("lerch.mu_shift_both_tau", "mu(u+tau, v+tau) = mu(u, v)", Ch1, 1e-8, n, |s, n| {
            each(s, n, |s, _| {
                let tau = s.tau();
                let (u, v) = (s.point(tau), s.point(tau));
                Ok(deviation(appell_mu(u + tau, v + tau, tau)?, appell_mu(u, v, tau)?))
            })
        }),
        NumericCheck::new("lerch.mu_even", "mu(-u, -v) = mu(u, v)", Ch1, 1e-8, n, |s, n| {
            each(s, n, |s, _| {
                let tau = s.tau();
                let (u, v) = (s.point(tau), s.point(tau));
                Ok(deviation(appell_mu(-u, -v, tau)?, appell_mu(u, v, tau)?))
            })
        }),
        NumericCheck::new("lerch.mu_residue", "Res_{u=0} mu(u, v) = -1/(2 pi i theta(v))", Ch1, 1e-8, n, |s, n| {
            each(s, n, |s, _| {
                let tau = s.tau();
                let v = s.point(tau);
                let r = residue_by_contour(
                    |u| appell_mu(u, v, tau).unwrap_or(C64::new(f64::NAN, f64::NAN)),
                    C64::new(0.0, 0.0),
                    1e-3,
                    64,
                );
                Ok(deviation(r, -1.0 / (2.0 * PI * I * jacobi_theta(v, tau)?)))
            })
        }),
        NumericCheck::new(
            "lerch.mu_difference",
            "mu(u+z, v+z) - mu(u, v) = theta'(0) theta(u+v+z) theta(z) / (2 pi i theta(u) theta(v) theta(u+z) theta(v+z))",
            Ch1,
            1e-8,
            n,
            |s, n| {
                each(s, n, |s, _| {
                    let tau = s.tau();
                    let (u, v, z) = (s.small_point(tau), s.small_point(tau), s.small_point(tau));
                    let lhs = appell_mu(u + z, v + z, tau)? - appell_mu(u, v, tau)?;
                    Ok(deviation(lhs, mu_difference_rhs(u, v, z, tau)?))
                })
            },
        ),
        NumericCheck::new("lerch.mu_symmetric", "mu(v, u) = mu(u, v)", Ch1, 1e-8, n, |s, n| {
            each(s, n, |s, _| {
                let tau = s.tau();
                let (u, v) = (s.point(tau), s.point(tau));
                Ok(deviation(appell_mu(v, u, tau)?, appell_mu(u, v, tau)?))
            })
        }),
        NumericCheck::new("lerch.mu_modular_t", "mu(u, v; tau+1) = e^{-pi i/4} mu(u, v; tau)", Ch1, 1e-8, n, |s, n| {
            each(s, n, |s, _| {
                let tau = s.tau();
                let (u, v) = (s.point(tau), s.point(tau));
                Ok(deviation(appell_mu(u, v, tau + 1.0)?, e(C64::new(-0.25, 0.0)) * appell_mu(u, v, tau)?))
            })
        }),
        NumericCheck::new(
            "lerch.mu_modular_s",
            "e^{pi i (u-v)^2/tau} mu(u/tau, v/tau; -1/tau) / sqrt(-i tau) + mu(u, v; tau) = h(u-v; tau) / 2i",
            Ch1,
            1e-8,
            n,
            |s, n| {
                each(s, n, |s, _| {
                    let tau = s.tau();
                    let (u, v) = (s.point(tau), s.point(tau));
                    let w = u - v;
                    let lhs = e(w * w / tau) * appell_mu(u / tau, v / tau, -1.0 / tau)? / sqrt_neg_i_tau(tau)
                        + appell_mu(u, v, tau)?;
                    Ok(deviation(lhs, mordell_h(w, tau)? / (2.0 * I)))
                })
            },
        ),
        NumericCheck::new("correction.shift_one", "R(u+1) = -R(u)", Ch1, 1e-8, n, |s, n| {
            each(s, n, |s, _| {
                let tau = s.tau();
                let u = s.point(tau);
                Ok(deviation(correction_r(u + 1.0, tau)?, -correction_r(u, tau)?))
            })
        }),
        NumericCheck::new(
            "correction.shift_tau",
            "R(u) + e^{-2 pi i u - pi i tau} R(u+tau) = 2 e^{-pi i u - pi i tau/4}",
            Ch1,
            1e-8,
            n,
            |s, n| {
                each(s, n, |s, _| {
                    let tau = s.tau();
                    let u = s.point(tau);
                    let lhs = correction_r(u, tau)? + e(-2.0 * u - tau) * correction_r(u + tau, tau)?;
                    Ok(deviation(lhs, 2.0 * e(-u - tau / 4.0)))
                })
            },
        ),
        NumericCheck::new("correction.even", "R(-u) = R(u)", Ch1, 1e-8, n, |s, n| {
            each(s, n, |s, _| {
                let tau = s.tau();
                let u = s.point(tau);
                Ok(deviation(correction_r(-u, tau)?, correction_r(u, tau)?))
            })
        }),
        NumericCheck::new("correction.modular_t", "R(u; tau+1) = e^{-pi i/4} R(u; tau)", Ch1, 1e-8, n, |s, n| {
            each(s, n, |s, _| {
                let tau = s.tau();
                let u = s.point(tau);
                Ok(deviation(correction_r(u, tau + 1.0)?, e(C64::new(-0.25, 0.0)) * correction_r(u, tau)?))
            })
        }),
        NumericCheck::new(
            "correction.modular_s",
            "e^{pi i u^2/tau} R(u/tau; -1/tau) / sqrt(-i tau) + R(u; tau) = h(u; tau)",
            Ch1,
            1e-8,
            n,
            |s, n| {
                each(s, n, |s, _| {
                    let tau = s.tau();
                    let u = s.point(tau);
                    let lhs = e(u * u / tau) * correction_r(u / tau, -1.0 / tau)? / sqrt_neg_i_tau(tau)
                        + correction_r(u, tau)?;
                    Ok(deviation(lhs, mordell_h(u, tau)?))
                })
            },
        ),
        NumericCheck::new(
            "completed_mu.elliptic",
            "mu~(u+k tau+l, v+m tau+n) = (-1)^{k+l+m+n} e^{pi i (k-m)^2 tau + 2 pi i (k-m)(u-v)} mu~(u, v)",
            Ch1,
            1e-8,
            n,
            |s, n| {
                each(s, n, |s, _| {
                    let tau = s.tau();
                    let (u, v) = (s.point(tau), s.point(tau));
                    let (k, l, m, nn) = (s.int(-1, 1), s.int(-1, 1), s.int(-1, 1), s.int(-1, 1));
                    let lhs = completed_mu(u + tau * k as f64 + l as f64, v + tau * m as f64 + nn as f64, tau)?;
                    let sg = if (k + l + m + nn).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    let d = (k - m) as f64;
                    let rhs = sg * e(d * d * tau + 2.0 * d * (u - v)) * completed_mu(u, v, tau)?;
                    Ok(deviation(lhs, rhs))
                })
            },
        ),
        NumericCheck::new(
            "completed_mu.modular",
            "mu~(u/(c tau+d), v/(c tau+d); gamma tau) = v(gamma)^{-3} (c tau+d)^{1/2} e^{-pi i c (u-v)^2/(c tau+d)} mu~(u, v; tau), gamma in {T, S}",
            Ch1,
            1e-8,
            n,
            |s, n| {
                each(s, n, |s, k| {
                    let tau = s.tau();
                    let (u, v) = (s.point(tau), s.point(tau));
                    let (c, d) = if k % 2 == 0 { (0.0, 1.0) } else { (1.0, 0.0) };
                    let j = tau * c + d;
                    let gtau = if k % 2 == 0 { tau + 1.0 } else { -1.0 / tau };
                    let vg = dedekind_eta(gtau)? / (j.sqrt() * dedekind_eta(tau)?);
                    let lhs = completed_mu(u / j, v / j, gtau)?;
                    let w = u - v;
                    let rhs = vg.powi(-3) * j.sqrt() * e(-c * w * w / j) * completed_mu(u, v, tau)?;
                    Ok(deviation(lhs, rhs))
                })
            },
        ),
        NumericCheck::new("completed_mu.symmetric", "mu~(-u, -v) = mu~(v, u) = mu~(u, v)", Ch1, 1e-8, n, |s, n| {
            each(s, n, |s, _| {
                let tau = s.tau();
                let (u, v) = (s.point(tau), s.point(tau));
                let m = completed_mu(u, v, tau)?;
                Ok(max_dev(&[(completed_mu(-u, -v, tau)?, m), (completed_mu(v, u, tau)?, m)]))
            })
        }),
        NumericCheck::new(
            "completed_mu.difference",
            "mu~(u+z, v+z) - mu~(u, v) = theta'(0) theta(u+v+z) theta(z) / (2 pi i theta(u) theta(v) theta(u+z) theta(v+z))",
            Ch1,
            1e-8,
            n,
            |s, n| {
                each(s, n, |s, _| {
                    let tau = s.tau();
                    let (u, v, z) = (s.small_point(tau), s.small_point(tau), s.small_point(tau));
                    let lhs = completed_mu(u + z, v + z, tau)? - completed_mu(u, v, tau)?;
                    Ok(deviation(lhs, mu_difference_rhs(u, v, z, tau)?))
                })
            },
        ),
        NumericCheck::new(
            "period.upper",
            "int_{-conj tau}^{i inf} g_{a+1/2,b+1/2}(z) / sqrt(-i(z+tau)) dz = -e^{-pi i a^2 tau + 2 pi i a (b+1/2)} R(a tau - b)",
            Ch1,
            1e-6,
            n,
            |s, n| {
                each(s, n, |s, _| {
                    let tau = s.tau();
                    let (a, b) = (s.char(), s.char());
                    Ok(deviation(period_integral_upper(a, b, tau)?, period_closed_r(a, b, tau)?))
                })
            },
        ),
        NumericCheck::new(
            "period.full",
            "int_0^{i inf} g_{a+1/2,b+1/2}(z) / sqrt(-i(z+tau)) dz = -e^{-pi i a^2 tau + 2 pi i a (b+1/2)} h(a tau - b)",
            Ch1,
            1e-6,
            n,
            |s, n| {
                each(s, n, |s, _| {
                    let tau = s.tau();
                    let (a, b) = (s.char(), s.char());
                    Ok(deviation(period_integral_full(a, b, tau)?, period_closed_h(a, b, tau)?))
                })
            },
        ),
    ]
}

fn mu_difference_rhs(u: C64, v: C64, z: C64, tau: C64) -> Result<C64> {
    let th = |w: C64| jacobi_theta(w, tau);
    let num = jacobi_theta_prime0(tau)? * th(u + v + z)? * th(z)?;
    let den = th(u)? * th(v)? * th(u + z)? * th(v + z)?;
    Ok(num / (2.0 * PI * I * den))
}

// ---------------------------------------------------------------- chapter 2

/// Binary form with `Q(x) = (x1^2 + 4 x1 x2 + x2^2)/2` and cones `(-1,2)`, `(-2,1)`.
pub fn example_one() -> Result<(LatticeForm, [f64; 2], [f64; 2])> {
    Ok((LatticeForm::new(vec![vec![1, 2], vec![2, 1]], vec![-1.0, 2.0])?, [-1.0, 2.0], [-2.0, 1.0]))
}

/// Binary form with `Q(x) = (x1^2 - 3 x2^2)/2` and cones `(-3,2)`, `(3,2)`.
pub fn example_two() -> Result<(LatticeForm, [f64; 2], [f64; 2])> {
    Ok((LatticeForm::new(vec![vec![1, 0], vec![0, -3]], vec![-3.0, 2.0])?, [-3.0, 2.0], [3.0, 2.0]))
}

fn example(k: usize) -> Result<(LatticeForm, [f64; 2], [f64; 2])> {
    if k % 2 == 0 {
        example_one()
    } else {
        example_two()
    }
}

fn random_spec(s: &mut Sampler, k: usize) -> Result<IndefThetaSpec> {
    let (f, c1, c2) = example(k)?;
    let (a, b) = (s.chars(2), s.chars(2));
    IndefThetaSpec::new(f, &c1, &c2, &a, &b)
}

fn z_of(a: &[f64], b: &[f64], tau: C64) -> Vec<C64> {
    a.iter().zip(b).map(|(a, b)| tau * *a + *b).collect()
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

fn add(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn neg(x: &[f64]) -> Vec<f64> {
    x.iter().map(|a| -a).collect()
}

fn ch2_checks() -> Vec<NumericCheck> {
    use Suite::Ch2;
    let n = 10;
    vec![
        NumericCheck::new(
            "indefinite.cocycle",
            "theta^{c1,c2} + theta^{c2,c1} = 0 and theta^{c1,c2} + theta^{c2,c3} + theta^{c3,c1} = 0",
            Ch2,
            1e-8,
            n,
            |s, n| {
                each(s, n, |s, k| {
                    let sp = random_spec(s, k)?;
                    let tau = s.tau();
                    let t12 = indefinite_theta_ab(&sp, tau)?;
                    let t21 = indefinite_theta_ab(&sp.swapped(), tau)?;
                    let c3 = add(&sp.c1.c, &sp.c2.c);
                    let f = sp.form.clone();
                    let t23 = indefinite_theta_ab(&IndefThetaSpec::new(f.clone(), &sp.c2.c, &c3, &sp.a, &sp.b)?, tau)?;
                    let t31 = indefinite_theta_ab(&IndefThetaSpec::new(f, &c3, &sp.c1.c, &sp.a, &sp.b)?, tau)?;
                    Ok(max_dev(&[(t12 + t21, C64::new(0.0, 0.0)), (t12 + t23 + t31, C64::new(0.0, 0.0))])
                        / t12.norm().max(1.0))
                })
            },
        ),
        NumericCheck::new(
            "indefinite.elliptic",
            "theta(z + lambda tau + mu) = e^{-2 pi i Q(lambda) tau - 2 pi i B(z, lambda)} theta(z), lambda in Z^r, mu in A^{-1} Z^r",
            Ch2,
            1e-8,
            n,
            |s, n| {
                each(s, n, |s, k| {
                    let sp = random_spec(s, k)?;
                    let tau = s.tau();
                    let z = z_of(&sp.a, &sp.b, tau);
                    let lam: Vec<f64> = (0..2).map(|_| s.int(-1, 1) as f64).collect();
                    let nn: Vec<f64> = (0..2).map(|_| s.int(-2, 2) as f64).collect();
                    let mu = mat_vec(&sp.form.inverse(), &nn);
                    let zs: Vec<C64> = (0..2).map(|i| z[i] + tau * lam[i] + mu[i]).collect();
                    let lc: Vec<C64> = lam.iter().map(|x| C64::new(*x, 0.0)).collect();
                    let ph = (-2.0 * PI * I * (sp.form.q(&lam) * tau + sp.form.b_c(&z, &lc))).exp();
                    Ok(deviation(indefinite_theta_z(&sp, &zs, tau)?, ph * indefinite_theta_z(&sp, &z, tau)?))
                })
            },
        ),
        NumericCheck::new("indefinite.odd", "theta(-z) = -theta(z)", Ch2, 1e-8, n, |s, n| {
            each(s, n, |s, k| {
                let sp = random_spec(s, k)?;
                let tau = s.tau();
                let z = z_of(&sp.a, &sp.b, tau);
                let mz: Vec<C64> = z.iter().map(|w| -w).collect();
                Ok(deviation(indefinite_theta_z(&sp, &mz, tau)?, -indefinite_theta_z(&sp, &z, tau)?))
            })
        }),
        NumericCheck::new("indefinite.modular_t", "theta(z; tau+1) = theta(z + A^{-1}A*/2; tau)", Ch2, 1e-8, n, |s, n| {
            each(s, n, |s, k| {
                let sp = random_spec(s, k)?;
                let tau = s.tau();
                let z = z_of(&sp.a, &sp.b, tau);
                let hs = sp.form.half_shift();
                let zs: Vec<C64> = z.iter().zip(&hs).map(|(w, h)| w + 0.5 * h).collect();
                Ok(deviation(indefinite_theta_z(&sp, &z, tau + 1.0)?, indefinite_theta_z(&sp, &zs, tau)?))
            })
        }),
        NumericCheck::new(
            "indefinite.modular_s",
            "theta(z/tau; -1/tau) = i/sqrt(-det A) (-i tau)^{r/2} sum_p e^{2 pi i Q(z + p tau)/tau} theta(z + p tau; tau)",
            Ch2,
            1e-8,
            n,
            |s, n| {
                each(s, n, |s, k| {
                    let sp = random_spec(s, k)?;
                    let tau = s.tau_near_unit_circle();
                    let z = z_of(&sp.a, &sp.b, tau);
                    let (l, r) = modular_s_sides(&sp, &z, tau)?;
                    Ok(deviation(l, r))
                })
            },
        ),
        NumericCheck::new("indefinite.char_shift_a", "theta_{a+lambda,b} = theta_{a,b}, lambda in Z^r", Ch2, 1e-8, n, |s, n| {
            each(s, n, |s, k| {
                let sp = random_spec(s, k)?;
                let tau = s.tau();
                let lam: Vec<f64> = (0..2).map(|_| s.int(-2, 2) as f64).collect();
                let sh = sp.with_chars(&add(&sp.a, &lam), &sp.b)?;
                Ok(deviation(indefinite_theta_ab(&sh, tau)?, indefinite_theta_ab(&sp, tau)?))
            })
        }),
        NumericCheck::new(
            "indefinite.char_shift_b",
            "theta_{a,b+mu} = e^{2 pi i B(a, mu)} theta_{a,b}, mu in A^{-1} Z^r",
            Ch2,
            1e-8,
            n,
            |s, n| {
                each(s, n, |s, k| {
                    let sp = random_spec(s, k)?;
                    let tau = s.tau();
                    let nn: Vec<f64> = (0..2).map(|_| s.int(-2, 2) as f64).collect();
                    let mu = mat_vec(&sp.form.inverse(), &nn);
                    let sh = sp.with_chars(&sp.a, &add(&sp.b, &mu))?;
                    let ph = (2.0 * PI * I * sp.form.b(&sp.a, &mu)).exp();
                    Ok(deviation(indefinite_theta_ab(&sh, tau)?, ph * indefinite_theta_ab(&sp, tau)?))
                })
            },
        ),
        NumericCheck::new("indefinite.char_negate", "theta_{-a,-b} = -theta_{a,b}", Ch2, 1e-8, n, |s, n| {
            each(s, n, |s, k| {
                let sp = random_spec(s, k)?;
                let tau = s.tau();
                let ng = sp.with_chars(&neg(&sp.a), &neg(&sp.b))?;
                Ok(deviation(indefinite_theta_ab(&ng, tau)?, -indefinite_theta_ab(&sp, tau)?))
            })
        }),
        NumericCheck::new(
            "indefinite.char_modular_t",
            "theta_{a,b}(tau+1) = e^{-2 pi i Q(a) - pi i B(A^{-1}A*, a)} theta_{a, a+b+A^{-1}A*/2}(tau)",
            Ch2,
            1e-8,
            n,
            |s, n| {
                each(s, n, |s, k| {
                    let sp = random_spec(s, k)?;
                    let tau = s.tau();
                    let hs = sp.form.half_shift();
                    let half: Vec<f64> = hs.iter().map(|x| 0.5 * x).collect();
                    let sh = sp.with_chars(&sp.a, &add(&add(&sp.a, &sp.b), &half))?;
                    let ph = (-2.0 * PI * I * sp.form.q(&sp.a) - PI * I * sp.form.b(&hs, &sp.a)).exp();
                    Ok(deviation(indefinite_theta_ab(&sp, tau + 1.0)?, ph * indefinite_theta_ab(&sh, tau)?))
                })
            },
        ),
        NumericCheck::new(
            "indefinite.char_modular_s",
            "theta_{a,b}(-1/tau) = i/sqrt(-det A) (-i tau)^{r/2} e^{2 pi i B(a,b)} sum_p theta_{b+p,-a}(tau)",
            Ch2,
            1e-8,
            n,
            |s, n| {
                each(s, n, |s, k| {
                    let sp = random_spec(s, k)?;
                    let tau = s.tau_near_unit_circle();
                    let mut sum = C64::new(0.0, 0.0);
                    for p in sp.form.coset_representatives()? {
                        sum += indefinite_theta_ab(&sp.with_chars(&add(&sp.b, &p), &neg(&sp.a))?, tau)?;
                    }
                    let det = sp.form.det() as f64;
                    let rhs = I / (-det).sqrt() * (-I * tau) * (2.0 * PI * I * sp.form.b(&sp.a, &sp.b)).exp() * sum;
                    Ok(deviation(indefinite_theta_ab(&sp, -1.0 / tau)?, rhs))
                })
            },
        ),
        NumericCheck::new(
            "indefinite.orthogonal_invariance",
            "theta_{Ca,Cb}^{Cc1,Cc2} = theta_{a,b}^{c1,c2} for C in O_A^+(Z)",
            Ch2,
            1e-8,
            n,
            |s, n| {
                each(s, n, |s, k| {
                    let sp = random_spec(s, k)?;
                    let tau = s.tau();
                    let c = if k % 2 == 0 { vec![vec![1, 0], vec![-4, -1]] } else { vec![vec![-7, -12], vec![4, 7]] };
                    let t = orthogonal_action(&sp, &c)?;
                    Ok(deviation(indefinite_theta_ab(&t, tau)?, indefinite_theta_ab(&sp, tau)?))
                })
            },
        ),
        NumericCheck::new("indefinite.example_one_eta", "theta_{e/6,e/6} = 2 e^{pi i/3} eta^2", Ch2, 1e-9, n, |s, n| {
            each(s, n, |s, _| {
                let (f, c1, c2) = example_one()?;
                let sp = IndefThetaSpec::new(f, &c1, &c2, &[1.0 / 6.0; 2], &[1.0 / 6.0; 2])?;
                let tau = s.tau();
                let rhs = 2.0 * e(C64::new(1.0 / 3.0, 0.0)) * dedekind_eta(tau)?.powi(2);
                Ok(deviation(indefinite_theta_ab(&sp, tau)?, rhs))
            })
        }),
        NumericCheck::new(
            "indefinite.example_two_eta",
            "theta_{a,b} = -4 e^{pi i/3} eta^2 for a = b = (1/2, -1/6)",
            Ch2,
            1e-9,
            n,
            |s, n| {
                each(s, n, |s, _| {
                    let (f, c1, c2) = example_two()?;
                    let ch = [0.5, -1.0 / 6.0];
                    let sp = IndefThetaSpec::new(f, &c1, &c2, &ch, &ch)?;
                    let tau = s.tau();
                    let rhs = -4.0 * e(C64::new(1.0 / 3.0, 0.0)) * dedekind_eta(tau)?.powi(2);
                    Ok(deviation(indefinite_theta_ab(&sp, tau)?, rhs))
                })
            },
        ),
        NumericCheck::new(
            "indefinite.example_beta_series_vanish",
            "the beta series of both cone vectors vanish for the two holomorphic examples (absolute)",
            Ch2,
            1e-10,
            n,
            |s, n| {
                each(s, n, |s, k| {
                    let (f, c1, c2) = example(k)?;
                    let ch = if k % 2 == 0 { [1.0 / 6.0; 2] } else { [0.5, -1.0 / 6.0] };
                    let tau = s.tau();
                    let b1 = beta_series(&f, &c1, &ch, &ch, tau)?;
                    let b2 = beta_series(&f, &c2, &ch, &ch, tau)?;
                    Ok(b1.norm().max(b2.norm()))
                })
            },
        ),
        NumericCheck::new(
            "indefinite.cusp_continuity",
            "theta^{c1,c2+t c3} -> theta^{c1,c2} monotonically as t decreases through 1, 0.1, 0.01, 0.001 (c2 a cusp)",
            Ch2,
            1e-6,
            3,
            |s, n| {
                each(s, n, |s, _| {
                    let f = LatticeForm::new(vec![vec![2, 1], vec![1, 0]], vec![-1.0, 2.0])?;
                    let (c1, c2, c3) = ([-1.0, 2.0], [0.0, 1.0], [-1.0, 3.0]);
                    let a = [s.uniform(0.1, 0.4), s.char()];
                    let b = s.chars(2);
                    let tau = C64::new(s.uniform(-0.5, 0.5), s.uniform(0.8, 1.5));
                    let limit = indefinite_theta_ab(&IndefThetaSpec::new(f.clone(), &c1, &c2, &a, &b)?, tau)?;
                    let mut prev = f64::INFINITY;
                    let mut last = 0.0;
                    for t in [1.0, 0.1, 0.01, 0.001] {
                        let ct = [c2[0] + t * c3[0], c2[1] + t * c3[1]];
                        let v = indefinite_theta_ab(&IndefThetaSpec::new(f.clone(), &c1, &ct, &a, &b)?, tau)?;
                        let d = (v - limit).norm();
                        if d > prev && d > 1e-12 {
                            return Ok(f64::INFINITY);
                        }
                        prev = d;
                        last = d;
                    }
                    Ok(last)
                })
            },
        ),
    ]
}

// ---------------------------------------------------------------- chapter 3

const EXAMPLE_TAUS: [C64; 3] = [C64 { re: 0.0, im: 1.0 }, C64 { re: 1.0, im: 1.0 }, C64 { re: 0.0, im: 2.0 }];

fn example_h(tau: C64) -> Result<Vec<C64>> {
    theta_decompose(&example_spec(), tau, None)
}

/// Central differences of a vector valued function: values at `tau`, `d/d conj(tau)` and the
/// Laplacian, Richardson extrapolated from steps `h` and `2h`.
fn vector_derivatives(f: impl Fn(C64) -> Result<Vec<C64>>, tau: C64, h: f64) -> Result<(Vec<C64>, Vec<C64>, Vec<C64>)> {
    let c = f(tau)?;
    let n = c.len();
    let mut db = [vec![C64::new(0.0, 0.0); n], vec![C64::new(0.0, 0.0); n]];
    let mut lap = db.clone();
    for (k, step) in [h, 2.0 * h].into_iter().enumerate() {
        let xp = f(tau + step)?;
        let xm = f(tau - step)?;
        let yp = f(tau + I * step)?;
        let ym = f(tau - I * step)?;
        for l in 0..n {
            db[k][l] = ((xp[l] - xm[l]) + I * (yp[l] - ym[l])) / (4.0 * step);
            lap[k][l] = (xp[l] + xm[l] + yp[l] + ym[l] - 4.0 * c[l]) / (step * step);
        }
    }
    let rich = |v: &[Vec<C64>; 2]| (0..n).map(|l| (4.0 * v[0][l] - v[1][l]) / 3.0).collect::<Vec<C64>>();
    Ok((c, rich(&db), rich(&lap)))
}

fn casimir_dev(f: &[C64], db: &[C64], lap: &[C64], y: f64) -> f64 {
    (0..f.len())
        .map(|l| {
            let om = -lap[l] * (y * y) + I * y * db[l] + f[l] * (3.0 / 16.0);
            deviation(om, f[l] * (3.0 / 16.0))
        })
        .fold(0.0, f64::max)
}

fn ch3_checks() -> Vec<NumericCheck> {
    use Suite::Ch3;
    vec![
        NumericCheck::new(
            "fourier.example_reconstruction",
            "phi(z; tau) = sum_{l mod 26} h_l theta_{13,l}(z) + 512 i f~_0(z) for the weight 1 index 13 example",
            Ch3,
            1e-6,
            3,
            |s, n| {
                // one sample per (tau, z) pair, ten z per tau
                let spec = example_spec();
                let mut devs = Vec::new();
                for k in 0..n {
                    let tau = EXAMPLE_TAUS[k % 3];
                    let h = example_h(tau)?;
                    for _ in 0..10 {
                        let z = s.point(tau);
                        devs.push(deviation(reconstruct(&spec, &h, z, tau, None)?, (spec.eval)(z, tau)?));
                    }
                }
                Ok(devs)
            },
        ),
        NumericCheck::new(
            "fourier.example_residue",
            "Res_{z=0} phi = -theta'(0)^8 / (pi^9 Delta)",
            Ch3,
            1e-8,
            4,
            |s, n| {
                each(s, n, |s, k| {
                    let tau = if k < 3 { EXAMPLE_TAUS[k] } else { s.tau() };
                    let d = example_spec().residue_d(C64::new(0.0, 0.0), tau)?;
                    let res = d / (-2.0 * PI * I);
                    let rhs = -jacobi_theta_prime0(tau)?.powi(8) / (PI.powi(9) * dedekind_eta(tau)?.powi(24));
                    Ok(deviation(res, rhs))
                })
            },
        ),
        NumericCheck::new("fourier.h_modular_t", "h_l(tau+1) = e^{-pi i l^2/26} h_l(tau)", Ch3, 1e-8, 3, |s, n| {
            each(s, n, |s, _| {
                let tau = s.tau();
                let h = example_h(tau)?;
                let h1 = example_h(tau + 1.0)?;
                let r: Vec<C64> = (0..26).map(|l| e(C64::new(-((l * l) as f64) / 26.0, 0.0)) * h[l]).collect();
                Ok(vec_dev(&h1, &r))
            })
        }),
        NumericCheck::new(
            "fourier.h_modular_s",
            "h_l(-1/tau) = i sqrt(-i tau) / sqrt(26) sum_nu e^{pi i l nu/13} h_nu(tau)",
            Ch3,
            1e-6,
            3,
            |s, n| {
                each(s, n, |s, _| {
                    let tau = s.tau_near_unit_circle();
                    let h = example_h(tau)?;
                    let hs = example_h(-1.0 / tau)?;
                    let pre = I * sqrt_neg_i_tau(tau) / 26f64.sqrt();
                    let r: Vec<C64> = (0..26)
                        .map(|l| {
                            pre * (0..26).map(|v| e(C64::new((l * v) as f64 / 13.0, 0.0)) * h[v]).sum::<C64>()
                        })
                        .collect();
                    Ok(vec_dev(&hs, &r))
                })
            },
        ),
        NumericCheck::new(
            "fourier.h_shadow",
            "d h_l / d conj(tau) = 256 sqrt(13) y^{-1/2} sum_{lambda in l/26 + Z} lambda e^{-26 pi i lambda^2 conj(tau)}",
            Ch3,
            1e-4,
            2,
            |s, n| {
                each(s, n, |s, _| {
                    let tau = s.tau();
                    let (_, db, _) = vector_derivatives(example_h, tau, 1e-4)?;
                    let mut worst = 0.0f64;
                    for (l, d) in db.iter().enumerate() {
                        let rhs = 256.0 * 13f64.sqrt() / tau.im.sqrt() * g_ab(l as f64 / 26.0, 0.0, tau * 26.0)?.conj();
                        worst = worst.max(deviation(*d, rhs));
                    }
                    Ok(worst)
                })
            },
        ),
        NumericCheck::new("fourier.h_casimir", "Omega_{1/2} h_l = (3/16) h_l", Ch3, 1e-3, 2, |s, n| {
            each(s, n, |s, _| {
                let tau = s.tau();
                let (f, db, lap) = vector_derivatives(example_h, tau, 2e-3)?;
                Ok(casimir_dev(&f, &db, &lap, tau.im))
            })
        }),
        NumericCheck::new(
            "fourier.r_ml_shadow",
            "d R_{m,l}(0; tau) / d conj(tau) = -i sqrt(m/y) sum_{lambda in l/2m + Z} lambda e^{-2 pi i m lambda^2 conj(tau)}",
            Ch3,
            1e-4,
            10,
            |s, n| {
                each(s, n, |s, _| {
                    let tau = s.tau();
                    let m = s.int(1, 13);
                    let l = s.int(0, 2 * m - 1);
                    let z0 = C64::new(0.0, 0.0);
                    let f = |t: C64| r_ml(m, l, z0, t).unwrap_or(C64::new(f64::NAN, f64::NAN));
                    let lhs = dbar(&f, tau, 1e-4);
                    let mf = m as f64;
                    let rhs = -I * (mf / tau.im).sqrt() * g_ab(l as f64 / (2.0 * mf), 0.0, tau * (2.0 * mf))?.conj();
                    Ok(deviation(lhs, rhs))
                })
            },
        ),
        NumericCheck::new("fourier.r_ml_casimir", "Omega_{1/2} R_{m,l}(0; tau) = (3/16) R_{m,l}(0; tau)", Ch3, 1e-3, 10, |s, n| {
            each(s, n, |s, _| {
                let tau = s.tau();
                let m = s.int(1, 13);
                let l = s.int(0, 2 * m - 1);
                let z0 = C64::new(0.0, 0.0);
                let f = |t: C64| r_ml(m, l, z0, t).unwrap_or(C64::new(f64::NAN, f64::NAN));
                let v = f(tau);
                Ok(deviation(casimir(&f, tau, 1e-3), v * (3.0 / 16.0)))
            })
        }),
        NumericCheck::new(
            "fourier.block_indefinite_theta",
            "f~_u(z; tau) = theta_A^{c1,c2}((z-u, 2mu); tau) / 2 with A = [[2m,1],[1,0]], c1 = (0,1), c2 = (-1,2m)",
            Ch3,
            1e-8,
            10,
            |s, n| {
                each(s, n, |s, _| {
                    let tau = s.tau();
                    let m = s.int(1, 3);
                    let (u, z) = (s.small_point(tau), s.point(tau));
                    let mf = m as f64;
                    let form = LatticeForm::new(vec![vec![2 * m, 1], vec![1, 0]], vec![-1.0, 2.0 * mf])?;
                    let sp = IndefThetaSpec::new(form, &[0.0, 1.0], &[-1.0, 2.0 * mf], &[0.3, 0.3], &[0.0, 0.0])?;
                    let th = indefinite_theta_z(&sp, &[z - u, u * (2.0 * mf)], tau)?;
                    Ok(deviation(f_tilde(m, u, z, tau)?, 0.5 * th))
                })
            },
        ),
    ]
}

// ---------------------------------------------------------------- chapter 4

pub const CH4_TAUS: [C64; 4] = [
    C64 { re: 0.0, im: 1.0 },
    C64 { re: 0.0, im: 2.0 },
    C64 { re: 0.3, im: 0.8 },
    C64 { re: -0.4, im: 1.2 },
];

pub const SHADOW_TAUS: [C64; 2] = [C64 { re: 0.0, im: 1.0 }, C64 { re: 0.2, im: 0.98 }];

fn completion_dev(id: &str, tau: C64) -> Result<f64> {
    let d = families()?;
    let f = d.eval_f_vec(id, tau)?;
    let h = d.eval_h_vec(id, tau)?;
    let g = d.eval_g_vec(id, tau)?;
    let hg: Vec<C64> = h.iter().zip(&g).map(|(a, b)| a + b).collect();
    Ok(vec_dev(&f, &hg))
}

fn mat_apply(m: &[Vec<f64>], v: &[C64]) -> Vec<C64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| *a * b).sum()).collect()
}

fn ch4_checks() -> Vec<NumericCheck> {
    use Suite::Ch4;
    vec![
        NumericCheck::new("families.F7_completion", "F7 = H7 + G7 componentwise", Ch4, 1e-6, 4, |_, n| {
            (0..n).map(|k| completion_dev("F7", CH4_TAUS[k % 4])).collect()
        }),
        NumericCheck::new("families.F5_1_completion", "F5_1 = H5_1 + G5_1 componentwise", Ch4, 1e-6, 4, |_, n| {
            (0..n).map(|k| completion_dev("F5_1", CH4_TAUS[k % 4])).collect()
        }),
        NumericCheck::new("families.F5_2_completion", "F5_2 = H5_2 + G5_2 componentwise", Ch4, 1e-6, 4, |_, n| {
            (0..n).map(|k| completion_dev("F5_2", CH4_TAUS[k % 4])).collect()
        }),
        NumericCheck::new("families.F5_sum_holomorphic", "F5 = F5_1 + F5_2 = H5_1 + H5_2", Ch4, 1e-6, 4, |_, n| {
            let d = families()?;
            (0..n)
                .map(|k| {
                    let tau = CH4_TAUS[k % 4];
                    Ok(vec_dev(&d.eval_f_vec("F5", tau)?, &d.eval_h_vec("F5", tau)?))
                })
                .collect()
        }),
        NumericCheck::new("families.G5_2_negates_G5_1", "G5_2 = -G5_1 componentwise", Ch4, 1e-10, 4, |_, n| {
            let d = families()?;
            (0..n)
                .map(|k| {
                    let tau = CH4_TAUS[k % 4];
                    let g1: Vec<C64> = d.eval_g_vec("F5_1", tau)?.iter().map(|x| -x).collect();
                    Ok(vec_dev(&d.eval_g_vec("F5_2", tau)?, &g1))
                })
                .collect()
        }),
        NumericCheck::new(
            "families.F5_modular_s",
            "F5(-1/tau) = sqrt(-i tau) (2/sqrt 5) M5 F5(tau)",
            Ch4,
            1e-6,
            5,
            |s, n| {
                let d = families()?;
                let m = d.s_matrix("F5")?;
                each(s, n, |s, _| {
                    let tau = s.tau_near_unit_circle();
                    let r: Vec<C64> = mat_apply(&m, &d.eval_f_vec("F5", tau)?).iter().map(|x| x * sqrt_neg_i_tau(tau)).collect();
                    Ok(vec_dev(&d.eval_f_vec("F5", -1.0 / tau)?, &r))
                })
            },
        ),
        NumericCheck::new(
            "families.H5_1_modular_s",
            "H5_1(-1/tau) = sqrt(-i tau) (2/sqrt 5) M5 H5_1(tau)",
            Ch4,
            1e-8,
            2,
            |s, n| {
                let d = families()?;
                let m = d.s_matrix("F5_1")?;
                each(s, n, |s, k| {
                    let tau = if k == 0 { C64::new(0.2, 1.1) } else { s.tau_near_unit_circle() };
                    let r: Vec<C64> = mat_apply(&m, &d.eval_h_vec("F5_1", tau)?).iter().map(|x| x * sqrt_neg_i_tau(tau)).collect();
                    Ok(vec_dev(&d.eval_h_vec("F5_1", -1.0 / tau)?, &r))
                })
            },
        ),
        NumericCheck::new(
            "families.H7_modular_s",
            "H7(-1/tau) = sqrt(-i tau) M7 H7(tau)",
            Ch4,
            1e-8,
            2,
            |s, n| {
                let d = families()?;
                let m = d.s_matrix("F7")?;
                each(s, n, |s, k| {
                    let tau = if k == 0 { I } else { s.tau_near_unit_circle() };
                    let r: Vec<C64> = mat_apply(&m, &d.eval_h_vec("F7", tau)?).iter().map(|x| x * sqrt_neg_i_tau(tau)).collect();
                    Ok(vec_dev(&d.eval_h_vec("F7", -1.0 / tau)?, &r))
                })
            },
        ),
        NumericCheck::new(
            "families.modular_t",
            "F(tau+1) = T F(tau) for F7, F5_1, F5_2 and F5 with the diagonal-with-swap T matrices",
            Ch4,
            1e-10,
            4,
            |s, n| {
                let d = families()?;
                each(s, n, |s, k| {
                    let id = ["F7", "F5_1", "F5_2", "F5"][k % 4];
                    let tau = s.tau();
                    let t = d.t_matrix(id)?;
                    let f = d.eval_f_vec(id, tau)?;
                    let r: Vec<C64> = t.iter().map(|row| row.iter().zip(&f).map(|(a, b)| a * b).sum()).collect();
                    Ok(vec_dev(&d.eval_f_vec(id, tau + 1.0)?, &r))
                })
            },
        ),
        NumericCheck::new("families.involutions", "M7^2 = I and ((2/sqrt 5) M5)^2 = I (absolute)", Ch4, 1e-12, 2, |_, n| {
            let d = families()?;
            (0..n).map(|k| Ok(square_minus_identity(&d.s_matrix(["F7", "F5"][k % 2])?))).collect()
        }),
        NumericCheck::new(
            "families.shadow_modular_s",
            "g7(-1/tau) = -M7 (-i tau)^{3/2} g7(tau)",
            Ch4,
            1e-10,
            3,
            |s, n| {
                let d = families()?;
                let m = d.s_matrix("F7")?;
                each(s, n, |s, k| {
                    let tau = if k == 0 { I } else { s.tau_near_unit_circle() };
                    let w = -pow_neg_i_tau_half(tau, 3);
                    let r: Vec<C64> = mat_apply(&m, &d.shadow("F7", tau)?).iter().map(|x| x * w).collect();
                    Ok(vec_dev(&d.shadow("F7", -1.0 / tau)?, &r))
                })
            },
        ),
        NumericCheck::new(
            "families.shadow_integral",
            "F7(tau) - M7 F7(-1/tau) / sqrt(-i tau) = i sqrt(21) int_0^{i inf} g7(z) / sqrt(-i(z+tau)) dz",
            Ch4,
            1e-6,
            2,
            |_, n| {
                let d = families()?;
                (0..n)
                    .map(|k| {
                        let (l, r) = d.shadow_sides("F7", SHADOW_TAUS[k % 2])?;
                        Ok(vec_dev(&l, &r))
                    })
                    .collect()
            },
        ),
        NumericCheck::new(
            "families.split_cross_check",
            "G_k = prefactor_k (beta series of c1 - beta series of c2), beta series split into R_{a,b} times unary theta series",
            Ch4,
            1e-8,
            4,
            |_, n| {
                let d = families()?;
                (0..n)
                    .map(|k| {
                        let tau = CH4_TAUS[k % 4];
                        let mut worst = 0.0f64;
                        for id in ["F7", "F5_1", "F5_2"] {
                            for c in 0..d.dimension(id)? {
                                worst = worst.max(deviation(d.g_from_split(id, c, tau)?, d.eval_g(id, c, tau)?));
                            }
                        }
                        Ok(worst)
                    })
                    .collect()
            },
        ),
        NumericCheck::new(
            "families.seventh_split_terms",
            "beta series of c1 = (-3,4) at a = b = e/14 is -eta (zeta_12^{-1} R_{13/42,-1/2}(21 tau) + zeta_12 R_{41/42,-1/2}(21 tau)), middle theta factor 0",
            Ch4,
            1e-10,
            4,
            |_, n| {
                let d = families()?;
                let spec = d.theta_spec("F7", 0)?;
                (0..n)
                    .map(|k| {
                        let tau = CH4_TAUS[k % 4];
                        let (terms, total) = cusp_decompose(&spec.form, &[-3, 4], &spec.a, &spec.b, tau)?;
                        if terms.len() != 3 {
                            return Ok(f64::INFINITY);
                        }
                        let mid = C64::new(terms[1].theta.0, terms[1].theta.1).norm();
                        let rhs = -dedekind_eta(tau)?
                            * (root_of_unity(-1, 12) * unary_r(13.0 / 42.0, -0.5, tau * 21.0)?
                                + root_of_unity(1, 12) * unary_r(41.0 / 42.0, -0.5, tau * 21.0)?);
                        Ok(deviation(total, rhs).max(mid))
                    })
                    .collect()
            },
        ),
        NumericCheck::new(
            "families.H7_casimir",
            "Omega_{1/2} H7 = (3/16) H7",
            Ch4,
            1e-3,
            1,
            |_, _| {
                let d = families()?;
                let (f, db, lap) = vector_derivatives(|t| d.eval_h_vec("F7", t), I, 1e-3)?;
                Ok(vec![casimir_dev(&f, &db, &lap, 1.0)])
            },
        ),
        NumericCheck::new(
            "families.G7_bounded",
            "|G7(iy)| stays below 10 as y decreases to 0.05 (absolute bound, tolerance 10)",
            Ch4,
            10.0,
            5,
            |_, n| {
                let d = families()?;
                [1.0, 0.5, 0.2, 0.1, 0.05]
                    .iter()
                    .take(n)
                    .map(|y| Ok(d.eval_g_vec("F7", C64::new(0.0, *y))?.iter().fold(0.0f64, |m, v| m.max(v.norm()))))
                    .collect()
            },
        ),
        NumericCheck::new(
            "unary_r.lerch_relation",
            "R_{a,b}(tau) = i e^{-pi i (a-1/2)^2 tau - 2 pi i (a-1/2) b} R((a-1/2) tau + b + 1/2; tau)",
            Ch4,
            1e-8,
            20,
            |s, n| {
                each(s, n, |s, _| {
                    let tau = s.tau();
                    let (a, b) = (s.uniform(0.05, 0.95), s.uniform(-1.0, 1.0));
                    let c = a - 0.5;
                    let rhs = I * e(-(c * c) * tau - 2.0 * c * b) * correction_r(tau * c + b + 0.5, tau)?;
                    Ok(deviation(unary_r(a, b, tau)?, rhs))
                })
            },
        ),
        NumericCheck::new(
            "unary_r.period_integral",
            "R_{a,b}(tau) = -i int_{-conj tau}^{i inf} g_{a,-b}(z) / sqrt(-i(z+tau)) dz",
            Ch4,
            1e-6,
            20,
            |s, n| {
                each(s, n, |s, _| {
                    let tau = s.tau();
                    let (a, b) = (s.uniform(0.05, 0.95), s.uniform(-0.95, -0.05));
                    let rhs = -I * period_integral_upper(a - 0.5, -b - 0.5, tau)?;
                    Ok(deviation(unary_r(a, b, tau)?, rhs))
                })
            },
        ),
        NumericCheck::new(
            "unary_r.shadow",
            "d R_{a,b} / d conj(tau) = -i (2y)^{-1/2} g_{a,-b}(-conj tau)",
            Ch4,
            1e-4,
            20,
            |s, n| {
                each(s, n, |s, _| {
                    let tau = s.tau();
                    let (a, b) = (s.uniform(0.05, 0.95), s.uniform(-1.0, 1.0));
                    let f = |t: C64| unary_r(a, b, t).unwrap_or(C64::new(f64::NAN, f64::NAN));
                    let rhs = -I / (2.0 * tau.im).sqrt() * g_ab(a, -b, -tau.conj())?;
                    Ok(deviation(dbar(&f, tau, 1e-4), rhs))
                })
            },
        ),
        NumericCheck::new("unary_r.casimir", "Omega_{1/2} R_{a,b} = (3/16) R_{a,b}", Ch4, 1e-3, 20, |s, n| {
            each(s, n, |s, _| {
                let tau = s.tau();
                let (a, b) = (s.uniform(0.05, 0.95), s.uniform(-1.0, 1.0));
                let f = |t: C64| unary_r(a, b, t).unwrap_or(C64::new(f64::NAN, f64::NAN));
                Ok(deviation(casimir(&f, tau, 1e-3), f(tau) * (3.0 / 16.0)))
            })
        }),
        NumericCheck::new(
            "unary_r.bounded_at_cusps",
            "sup |R_{a,b}(xi + iy)| over y in [0.02, 1] stays below 1000 for xi in {0, 1/2, 1/3} (absolute bound)",
            Ch4,
            1000.0,
            9,
            |s, n| {
                each(s, n, |s, k| {
                    let xi = [0.0, 0.5, 1.0 / 3.0][k % 3];
                    let (a, b) = (s.uniform(0.05, 0.95), s.uniform(-1.0, 1.0));
                    let mut sup = 0.0f64;
                    for y in [1.0, 0.5, 0.2, 0.1, 0.05, 0.02] {
                        sup = sup.max(unary_r(a, b, C64::new(xi, y))?.norm());
                    }
                    Ok(sup)
                })
            },
        ),
    ]
}

/// Every registered identity check, sorted by id.
pub fn all_checks() -> Vec<Box<dyn IdentityCheck>> {
    let mut v: Vec<Box<dyn IdentityCheck>> = Vec::new();
    for q in catalog() {
        v.push(Box::new(SeriesCheck(q)));
    }
    for c in ch1_checks().into_iter().chain(ch2_checks()).chain(ch3_checks()).chain(ch4_checks()) {
        v.push(Box::new(c));
    }
    v.sort_by(|a, b| a.id().cmp(b.id()));
    v
}

pub fn checks_for(suites: &[Suite]) -> Vec<Box<dyn IdentityCheck>> {
    all_checks().into_iter().filter(|c| suites.contains(&c.suite())).collect()
}

/// Runs checks in parallel; the result is ordered by id.
pub fn run_checks(checks: &[Box<dyn IdentityCheck>], ctx: &CheckContext) -> Vec<CheckOutcome> {
    let mut out: Vec<CheckOutcome> = checks.par_iter().map(|c| c.run(ctx)).collect();
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

// ---------------------------------------------------------------- evaluators

/// Parameters accepted by evaluators; each evaluator reads the ones it needs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalArgs {
    pub tau: Option<C64>,
    pub z: Option<C64>,
    pub u: Option<C64>,
    pub v: Option<C64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub m: Option<i64>,
    pub l: Option<i64>,
    /// 1-based component of a vector valued function.
    pub component: Option<usize>,
    /// Indefinite theta data as JSON.
    pub spec: Option<String>,
    pub tol: Option<f64>,
}

/// Default absolute accuracy promised inside the supported region.
pub const DEFAULT_TARGET: f64 = 1e-9;

impl EvalArgs {
    fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
        v.ok_or_else(|| MockError::InvalidInput(format!("missing --{name}")))
    }
    pub fn tau(&self) -> Result<C64> {
        let t = Self::need(self.tau, "tau")?;
        if !(t.im > 0.0) {
            return Err(MockError::NotInUpperHalfPlane(t.im));
        }
        Ok(t)
    }
    pub fn z(&self) -> Result<C64> {
        Self::need(self.z, "z")
    }
    pub fn u(&self) -> Result<C64> {
        Self::need(self.u, "u")
    }
    pub fn v(&self) -> Result<C64> {
        Self::need(self.v, "v")
    }
    pub fn m(&self) -> Result<i64> {
        Self::need(self.m, "m")
    }
    pub fn l(&self) -> Result<i64> {
        Self::need(self.l, "l")
    }
    fn scalar(v: &[f64], name: &str) -> Result<f64> {
        match v {
            [x] => Ok(*x),
            _ => Err(MockError::InvalidInput(format!("--{name} needs exactly one value"))),
        }
    }
    pub fn a1(&self) -> Result<f64> {
        Self::scalar(&self.a, "a")
    }
    pub fn b1(&self) -> Result<f64> {
        Self::scalar(&self.b, "b")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub value: [f64; 2],
    pub certified_tol: f64,
    pub flags: Vec<String>,
}

pub trait Evaluator: Send + Sync {
    fn id(&self) -> &str;
    fn params(&self) -> &str;
    fn describe(&self) -> &str;
    fn eval(&self, args: &EvalArgs) -> Result<C64>;
    /// Characteristics whose size degrades precision.
    fn characteristics(&self, args: &EvalArgs) -> Vec<f64> {
        args.a.iter().chain(&args.b).copied().collect()
    }

    fn evaluate(&self, args: &EvalArgs) -> Result<Evaluation> {
        let v = self.eval(args)?;
        let mut flags = Vec::new();
        if let Some(t) = args.tau {
            if degraded(t, &self.characteristics(args)) {
                flags.push("degraded_precision".to_string());
            }
        }
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(MockError::Domain("non-finite value".into()));
        }
        Ok(Evaluation { value: [v.re, v.im], certified_tol: args.tol.unwrap_or(DEFAULT_TARGET), flags })
    }
}

pub struct FnEvaluator {
    pub id: &'static str,
    pub params: &'static str,
    pub describe: &'static str,
    f: fn(&EvalArgs) -> Result<C64>,
}

impl Evaluator for FnEvaluator {
    fn id(&self) -> &str {
        self.id
    }
    fn params(&self) -> &str {
        self.params
    }
    fn describe(&self) -> &str {
        self.describe
    }
    fn eval(&self, args: &EvalArgs) -> Result<C64> {
        (self.f)(args)
    }
}

/// `F`, `H` or `G` of a mock theta family.
pub struct FamilyEvaluator {
    pub id: String,
    family: String,
    part: char,
}

impl Evaluator for FamilyEvaluator {
    fn id(&self) -> &str {
        &self.id
    }
    fn params(&self) -> &str {
        "--component --tau"
    }
    fn describe(&self) -> &str {
        match self.part {
            'F' => "q-series side of the vector",
            'H' => "indefinite theta side of the vector",
            _ => "non-holomorphic unary side of the vector",
        }
    }
    fn eval(&self, args: &EvalArgs) -> Result<C64> {
        let d = families()?;
        let tau = args.tau()?;
        let n = d.dimension(&self.family)?;
        let c = args.component.unwrap_or(1);
        if c == 0 || c > n {
            return Err(MockError::InvalidInput(format!("component must be in 1..={n}, got {c}")));
        }
        match self.part {
            'F' => d.eval_f(&self.family, c - 1, tau),
            'H' => d.eval_h(&self.family, c - 1, tau),
            _ => d.eval_g(&self.family, c - 1, tau),
        }
    }
}

fn fe(id: &'static str, params: &'static str, describe: &'static str, f: fn(&EvalArgs) -> Result<C64>) -> Box<dyn Evaluator> {
    Box::new(FnEvaluator { id, params, describe, f })
}

/// Every registered evaluator, sorted by id.
pub fn evaluators() -> Vec<Box<dyn Evaluator>> {
    let mut v = vec![
        fe("mordell_h", "--z --tau", "Mordell integral h(z; tau)", |a| mordell_h(a.z()?, a.tau()?)),
        fe("jacobi_theta", "--z --tau", "Jacobi theta(z; tau)", |a| jacobi_theta(a.z()?, a.tau()?)),
        fe("dedekind_eta", "--tau", "Dedekind eta(tau)", |a| dedekind_eta(a.tau()?)),
        fe("theta_char", "--a --b --z --tau", "theta_{a,b}(z; tau)", |a| theta_char(a.a1()?, a.b1()?, a.z()?, a.tau()?)),
        fe("theta_ml", "--m --l --z --tau", "theta_{m,l}(z; tau)", |a| theta_ml(a.m()?, a.l()?, a.z()?, a.tau()?)),
        fe("unary_g", "--a --b --tau", "weight 3/2 unary theta g_{a,b}(tau)", |a| g_ab(a.a1()?, a.b1()?, a.tau()?)),
        fe("lerch_mu", "--u --v --tau", "Appell-Lerch sum mu(u, v; tau)", |a| appell_mu(a.u()?, a.v()?, a.tau()?)),
        fe("correction_r", "--u --tau", "real-analytic correction R(u; tau)", |a| correction_r(a.u()?, a.tau()?)),
        fe("completed_mu", "--u --v --tau", "completed mu~(u, v; tau)", |a| completed_mu(a.u()?, a.v()?, a.tau()?)),
        fe("erf_e", "--z", "E(z) = 2 int_0^z e^{-pi u^2} du", |a| e_complex(a.z()?)),
        fe("beta", "--a", "beta(x) = int_x^inf u^{-1/2} e^{-pi u} du, x given by --a", |a| Ok(C64::new(beta(a.a1()?)?, 0.0))),
        fe("period_integral_r", "--a --b --tau", "int_{-conj tau}^{i inf} g_{a+1/2,b+1/2}(z)/sqrt(-i(z+tau)) dz", |a| {
            period_integral_upper(a.a1()?, a.b1()?, a.tau()?)
        }),
        fe("period_integral_h", "--a --b --tau", "int_0^{i inf} g_{a+1/2,b+1/2}(z)/sqrt(-i(z+tau)) dz", |a| {
            period_integral_full(a.a1()?, a.b1()?, a.tau()?)
        }),
        fe("block_f", "--m --u --z --tau", "f_u(z; tau) of index m", |a| crate::fourier::f_u(a.m()?, a.u()?, a.z()?, a.tau()?)),
        fe("block_f_tilde", "--m --u --z --tau", "completed f~_u(z; tau) of index m", |a| f_tilde(a.m()?, a.u()?, a.z()?, a.tau()?)),
        fe("correction_r_ml", "--m --l --u --tau", "R_{m,l}(u; tau)", |a| r_ml(a.m()?, a.l()?, a.u()?, a.tau()?)),
        fe("unary_r", "--a --b --tau", "R_{a,b}(tau)", |a| unary_r(a.a1()?, a.b1()?, a.tau()?)),
        fe("indefinite_theta", "--spec --tau [--a --b]", "theta_{a,b}^{c1,c2}(tau); --a/--b override the characteristics given in --spec", |a| {
            let text = a.spec.as_ref().ok_or_else(|| MockError::InvalidInput("missing --spec".into()))?;
            let mut sp = IndefThetaSpec::from_json(text)?;
            if !a.a.is_empty() || !a.b.is_empty() {
                let ca = if a.a.is_empty() { sp.a.clone() } else { a.a.clone() };
                let cb = if a.b.is_empty() { sp.b.clone() } else { a.b.clone() };
                sp = sp.with_chars(&ca, &cb)?;
            }
            indefinite_theta_ab(&sp, a.tau()?)
        }),
        fe("example_phi", "--z --tau", "weight 1 index 13 meromorphic Jacobi form", |a| crate::fourier::example_phi(a.z()?, a.tau()?)),
    ];
    if let Ok(d) = families() {
        for fam in d.ids() {
            let Some(rest) = fam.strip_prefix('F') else { continue };
            for part in ['F', 'H', 'G'] {
                v.push(Box::new(FamilyEvaluator { id: format!("{part}{rest}"), family: fam.clone(), part }));
            }
        }
    }
    v.sort_by(|a, b| a.id().cmp(b.id()));
    v
}

pub fn find_evaluator(id: &str) -> Result<Box<dyn Evaluator>> {
    match evaluators().into_iter().find(|e| e.id() == id) {
        Some(e) => Ok(e),
        // family ids are only known once the data file loads
        None => families().and(Err(MockError::UnknownId(id.to_string()))),
    }
}

/// Parses a comma separated list of reals, each possibly `p/q`.
pub fn parse_real_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|t| parse_real(t.trim())).collect()
}
