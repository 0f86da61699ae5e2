//! Named identity checks, each run end to end through the exact pipelines.

use std::collections::BTreeMap;

use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freeconv::{distributivity_counterexample, free_mul_conv, free_power, nsv_check, truncated_exponential, PowerKind};
use crate::graphs::{free_product, quantum_measure, simplex, MeasureStatus};
use crate::measures::{binomial, moments_of, nu, uniform_group, CatalogMeasure, MomentSequence};
use crate::series::{int, Rational, TruncatedSeries};
use crate::transforms::{moments_from_s_series, r_s_products, s3_closed_form, s_transform, theta_series};

/// Every registered identity, in report order.
pub const REGISTRY: [&str; 15] = [
    "thm21",
    "thm22_moments",
    "prop41",
    "lemma41",
    "thm42_nsv",
    "thm51",
    "cor61",
    "prop72",
    "prop73",
    "prop82",
    "prop83_quadratic",
    "prop85_quadratic",
    "distributivity_fails",
    "theta_positivity",
    "bell_moments",
];

pub const DEFAULT_VERIFY_ORDER: usize = 10;

pub type Params = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub parameters: Params,
    pub pass: bool,
    pub details: String,
}

/// Collects failures; the report passes iff none were recorded.
struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Self { checked: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn series_eq(&mut self, label: &str, got: &TruncatedSeries, want: &TruncatedSeries) {
        if got.order() != want.order() {
            let (g, w) = (got.order(), want.order());
            self.check(false, || format!("{label}: order {g}, expected {w}"));
            return;
        }
        let diff = got.first_difference(want);
        self.check(diff.is_none(), || format!("{label}: first differing coefficient z^{}", diff.unwrap()));
    }

    fn finish(self, name: &str, parameters: Params, note: String) -> VerificationReport {
        let pass = self.failures.is_empty();
        let details = if pass {
            format!("{} checks passed{}", self.checked, if note.is_empty() { String::new() } else { format!("; {note}") })
        } else {
            format!("{} of {} checks failed: {}", self.failures.len(), self.checked, self.failures.join("; "))
        };
        VerificationReport { name: name.into(), parameters, pass, details }
    }
}

fn param_usize(params: &Params, key: &str) -> Result<Option<usize>> {
    params
        .get(key)
        .map(|v| v.trim().parse::<usize>().map_err(|_| Error::InvalidParameter(format!("`{key}` must be a non-negative integer, got `{v}`"))))
        .transpose()
}

fn param_measure(params: &Params, key: &str) -> Result<Option<CatalogMeasure>> {
    params.get(key).map(|v| v.parse::<CatalogMeasure>()).transpose()
}

fn cat(name: &CatalogMeasure, order: usize) -> Result<MomentSequence> {
    moments_of(name, order)
}

/// Catalog measures used by the S/R and power-identity checks.
fn standard_measures() -> Vec<CatalogMeasure> {
    let mut v = vec![CatalogMeasure::Eta(2), CatalogMeasure::Eta(3), CatalogMeasure::Eta(4)];
    v.extend((2..=5).map(CatalogMeasure::UniformGroup));
    v.push(CatalogMeasure::Dihedral(5));
    v
}

/// `B_{n+1} = sum_k binom(n,k) B_k`, independent of the Bell triangle in `measures`.
fn bell_by_recurrence(order: usize) -> Vec<Rational> {
    let mut b = vec![Rational::one()];
    for n in 0..order {
        let next: Rational = (0..=n).map(|k| Rational::from_integer(binomial(n, k)) * &b[k]).sum();
        b.push(next);
    }
    b
}

fn ratio(num: &TruncatedSeries, den: &TruncatedSeries) -> Result<TruncatedSeries> {
    num.div(den)
}

/// `p^e` for a series with unit constant term and any integer exponent.
fn ipow(p: &TruncatedSeries, e: i64) -> Result<TruncatedSeries> {
    let pos = p.pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Ok(pos)
    } else {
        pos.reciprocal()
    }
}

/// Runs one registered identity.
pub fn run_verification(name: &str, params: &Params) -> Result<VerificationReport> {
    let order = param_usize(params, "order")?.unwrap_or(DEFAULT_VERIFY_ORDER);
    let mut t = Tally::new();
    let mut note = String::new();
    match name {
        "thm21" => {
            let max_n = param_usize(params, "n")?.unwrap_or(8);
            let bell = bell_by_recurrence(max_n);
            for n in 1..=max_n as u32 {
                let nu_n = nu(n);
                t.check(truncated_exponential(n) == nu_n, || format!("n={n}: truncated exponential differs from ν_n"));
                let m = nu_n.moments(n as usize);
                t.check(m.as_slice() == &bell[..=n as usize], || format!("n={n}: moments are not Bell numbers"));
            }
        }
        "thm22_moments" => {
            for n in 4..=8 {
                let m = cat(&CatalogMeasure::Eta(n), order)?;
                let catalan: Vec<Rational> = (0..=order)
                    .map(|k| Rational::new(binomial(2 * k, k), (k as i64 + 1).into()))
                    .collect();
                t.check(m.as_slice() == &catalan[..], || format!("eta:{n} is not Catalan"));
            }
            let two = cat(&CatalogMeasure::Eta(2), order)?;
            let three = cat(&CatalogMeasure::Eta(3), order)?;
            for k in 1..=order {
                let pow2 = Rational::from_integer(num_bigint::BigInt::from(2).pow(k as u32 - 1));
                t.check(two.get(k) == &pow2, || format!("eta:2 m_{k}"));
                let m3 = (int(3) + Rational::from_integer(num_bigint::BigInt::from(3).pow(k as u32))) / int(6);
                t.check(three.get(k) == &m3, || format!("eta:3 m_{k}"));
            }
        }
        "prop41" => {
            for n in 2..=6 {
                let s = s_transform(&uniform_group(n).moments(order + 1), order + 1)?.series;
                let want = ratio(&TruncatedSeries::from_ints(&[1, 1], order), &TruncatedSeries::from_ints(&[1, n as i64], order))?;
                t.series_eq(&format!("uniform_group:{n}"), &s, &want);
            }
        }
        "lemma41" => {
            let list = match param_measure(params, "mu")? {
                Some(m) => vec![m],
                None => standard_measures(),
            };
            for mu in list {
                let m = cat(&mu, order + 1)?;
                let (first, second) = r_s_products(&m, order + 1)?;
                let one = TruncatedSeries::one(order);
                t.series_eq(&format!("{mu}: R(zS)S"), &first, &one);
                t.series_eq(&format!("{mu}: S(zR)R"), &second, &one);
            }
        }
        "thm42_nsv" => {
            let measures = match param_measure(params, "mu")? {
                Some(m) => vec![m],
                None => {
                    let mut v = vec![CatalogMeasure::Dirac(int(1))];
                    v.extend(standard_measures());
                    v
                }
            };
            let ns: Vec<u32> = match param_usize(params, "n")? {
                Some(n) => vec![n as u32],
                None => (2..=5).collect(),
            };
            for mu in &measures {
                let m = cat(mu, order)?;
                for &n in &ns {
                    let r = nsv_check(&m, n, order)?;
                    t.check(r.equal, || format!("{mu} n={n}: differ at m_{}", r.lhs.first_difference(&r.rhs).unwrap_or(0)));
                }
            }
        }
        "thm51" => {
            let ss: Vec<u32> = match param_usize(params, "s")? {
                Some(s) => vec![s as u32],
                None => (1..=4).collect(),
            };
            let eta4 = cat(&CatalogMeasure::Eta(4), order)?;
            for s in ss {
                let base = TruncatedSeries::from_ints(&[1, 1], order.saturating_sub(1));
                let sser = base.pow(s).reciprocal()?;
                let m = moments_from_s_series(&sser)?;
                let f = m.generating_series();
                let rhs = TruncatedSeries::one(order).add(&f.pow(s + 1).shift_up());
                t.series_eq(&format!("s={s}: f = 1 + z f^(s+1)"), &f, &rhs);
                let closed: Vec<Rational> = (0..=order)
                    .map(|k| {
                        Rational::new(binomial((s as usize + 1) * k, k), ((s as usize * k) as i64 + 1).into())
                    })
                    .collect();
                t.check(m.as_slice() == &closed[..], || format!("s={s}: Fuss-Catalan closed form"));
                if s >= 1 {
                    let p = free_power(&eta4, PowerKind::Boxtimes, s, order)?;
                    t.check(p == m, || format!("s={s}: eta:4 power"));
                }
            }
        }
        "cor61" => {
            let fc2 = cat(&CatalogMeasure::FussCatalan { a: 0, b: 0, c: 2 }, order)?;
            for (a, b) in [(4, 4), (4, 5), (5, 4), (4, 6), (6, 5)] {
                let q = quantum_measure(&free_product(&simplex(a), &simplex(b)), order)?;
                t.check(q.moments == fc2 && q.status == MeasureStatus::Proven, || {
                    format!("X{a}*X{b}: {} ({})", q.derivation, q.status)
                });
            }
            let fc3 = cat(&CatalogMeasure::FussCatalan { a: 0, b: 0, c: 3 }, order)?;
            let triple = free_product(&free_product(&simplex(4), &simplex(5)), &simplex(4));
            let q = quantum_measure(&triple, order)?;
            t.check(q.moments == fc3 && q.status == MeasureStatus::Proven, || "X4*X5*X4".into());
        }
        "prop72" => {
            let n = order;
            let s2 = s_transform(&cat(&CatalogMeasure::Eta(2), n + 1)?, n + 1)?.series;
            let s3 = s_transform(&cat(&CatalogMeasure::Eta(3), n + 1)?, n + 1)?.series;
            let s4 = s_transform(&cat(&CatalogMeasure::Eta(4), n + 1)?, n + 1)?.series;
            t.series_eq("S_2", &s2, &ratio(&TruncatedSeries::from_ints(&[1, 1], n), &TruncatedSeries::from_ints(&[1, 2], n))?);
            t.series_eq("S_3", &s3, &s3_closed_form(n)?);
            t.series_eq("S_4+", &s4, &TruncatedSeries::from_ints(&[1, 1], n).reciprocal()?);
        }
        "prop73" => {
            let n = order;
            let q = substitution(n)?;
            let p = |cs: &[i64]| TruncatedSeries::from_ints(cs, n);
            let targets = [
                (2, ratio(&p(&[1, 1, -1]), &p(&[1, 2, -1]))?),
                (3, ratio(&p(&[1, 1, -1]), &p(&[1, 2]))?),
                (4, ratio(&p(&[1, 0, -1]), &p(&[1, 1, -1]))?),
            ];
            for (k, want) in targets {
                let s = s_transform(&cat(&CatalogMeasure::Eta(k), n + 1)?, n + 1)?.series;
                t.series_eq(&format!("S_{k}(q/(1-q^2))"), &s.compose(&q)?, &want);
            }
        }
        "prop82" => {
            let n = order;
            let q = substitution(n)?;
            let p = |cs: &[i64]| TruncatedSeries::from_ints(cs, n);
            for a in 0..=2u32 {
                for b in 0..=2u32 {
                    for c in 0..=2u32 {
                        let m = cat(&CatalogMeasure::FussCatalan { a, b, c }, n + 1)?;
                        let s = s_transform(&m, n + 1)?.series.compose(&q)?;
                        let d = (a + b) as i64 - c as i64;
                        let num = p(&[1, 0, -1]).pow(c).mul(&ipow(&p(&[1, 1, -1]), d)?);
                        let den = p(&[1, 2]).pow(b).mul(&p(&[1, 2, -1]).pow(a));
                        t.series_eq(&format!("S_{a}{b}{c}"), &s, &num.div(&den)?);
                    }
                }
            }
        }
        "prop83_quadratic" => {
            let f = cat(&CatalogMeasure::Cube, order)?.generating_series();
            let inner = f.mul(&TruncatedSeries::from_ints(&[0, 8], order)).sub(&TruncatedSeries::from_ints(&[1, 4], order));
            t.series_eq("(8zf-1-4z)^2 = 1-8z", &inner.mul(&inner), &TruncatedSeries::from_ints(&[1, -8], order));
        }
        "prop85_quadratic" => {
            let m = free_mul_conv(&uniform_group(4).moments(order), &cat(&CatalogMeasure::Eta(2), order)?, order)?;
            let f = m.generating_series();
            let p = |cs: &[i64]| TruncatedSeries::from_ints(cs, order);
            let lhs = p(&[-1, 8]).mul(&f.mul(&f)).sub(&p(&[-1, 10]).mul(&f)).add(&p(&[0, 3]));
            t.series_eq("(8z-1)f^2-(10z-1)f+3z", &lhs, &TruncatedSeries::zero(order));
            t.check(m.truncate(3) == MomentSequence::from_ints(&[1, 1, 5, 28]), || "first moments".into());
        }
        "distributivity_fails" => {
            let mu = cat(&CatalogMeasure::Eta(4), order)?;
            let d1 = cat(&CatalogMeasure::Dirac(int(1)), order)?;
            let d2 = cat(&CatalogMeasure::Dirac(int(2)), order)?;
            let r = distributivity_counterexample(&mu, &d1, &d2, order)?;
            t.check(r.differ_at.is_some(), || "sides agree".into());
            if let Some(k) = r.differ_at {
                note = format!("differ at m_{k}: {} vs {}", r.lhs.get(k), r.rhs.get(k));
            }
        }
        "theta_positivity" => {
            let theta_order = param_usize(params, "order")?.unwrap_or(12);
            let mut asserted = vec![CatalogMeasure::Eta(4)];
            asserted.extend((1..=3).map(|c| CatalogMeasure::FussCatalan { a: 0, b: 0, c }));
            asserted.push(CatalogMeasure::Cube);
            asserted.push(CatalogMeasure::TwoRectangles);
            for mu in asserted {
                let th = theta_series(&cat(&mu, theta_order)?, theta_order)?.series;
                let neg = th.coeffs().iter().position(|a| a.is_negative());
                t.check(neg.is_none(), || format!("{mu}: negative a_{}", neg.unwrap()));
            }
            let mut reported = Vec::new();
            for m in [5u32, 6, 8] {
                let th = theta_series(&cat(&CatalogMeasure::Dihedral(m), theta_order)?, theta_order)?.series;
                let negatives = th.coeffs().iter().filter(|a| a.is_negative()).count();
                reported.push(format!("dihedral:{m} has {negatives} negative coefficients"));
            }
            note = reported.join(", ");
        }
        "bell_moments" => {
            let bell = bell_by_recurrence(order);
            let poisson = cat(&CatalogMeasure::Poisson, order)?;
            t.check(poisson.as_slice() == &bell[..], || "Poisson moments".into());
            for n in 1..=order as u32 {
                let m = nu(n).moments(order);
                let k = (0..=order).find(|&k| m.get(k) != &bell[k]);
                t.check(k.is_none_or(|k| k > n as usize), || format!("ν_{n} differs from Bell at m_{}", k.unwrap()));
            }
        }
        other => return Err(Error::UnknownIdentity(other.to_string())),
    }
    Ok(t.finish(name, params.clone(), note))
}

/// `q/(1-q^2)` at the given order.
fn substitution(order: usize) -> Result<TruncatedSeries> {
    TruncatedSeries::var(order).div(&TruncatedSeries::from_ints(&[1, 0, -1], order))
}

/// Every registered identity with the same parameters, in registry order.
pub fn run_all(params: &Params) -> Result<Vec<VerificationReport>> {
    REGISTRY.iter().map(|name| run_verification(name, params)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn params(kv: &[(&str, &str)]) -> Params {
        kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn spec_examples() {
        let r = run_verification("thm42_nsv", &params(&[("mu", "eta:2"), ("n", "2"), ("order", "10")])).unwrap();
        assert!(r.pass, "{}", r.details);
        let r = run_verification("thm51", &params(&[("s", "3"), ("order", "10")])).unwrap();
        assert!(r.pass, "{}", r.details);
        let r = run_verification("prop85_quadratic", &params(&[("order", "10")])).unwrap();
        assert!(r.pass, "{}", r.details);
    }

    #[test]
    fn unknown_name() {
        assert_eq!(
            run_verification("thm99", &Params::new()),
            Err(Error::UnknownIdentity("thm99".into()))
        );
    }

    #[test]
    fn all_pass_at_default_order() {
        for r in run_all(&Params::new()).unwrap() {
            assert!(r.pass, "{}: {}", r.name, r.details);
        }
    }

    #[test]
    fn registry_is_unique() {
        let mut v = REGISTRY.to_vec();
        v.sort_unstable();
        v.dedup();
        assert_eq!(v.len(), REGISTRY.len());
    }

    #[test]
    fn bell_recurrence() {
        let b: Vec<Rational> = bell_by_recurrence(6);
        assert_eq!(b, [1, 1, 2, 5, 15, 52, 203].map(int).to_vec());
        assert!(b.iter().all(|x| !x.is_zero()));
    }
}
