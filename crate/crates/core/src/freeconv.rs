//! Classical and free convolutions, n-fold powers, the NSV identity and the
//! non-crossing partition oracle.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{factorial, uniform_group, MomentSequence, SignedAtomicMeasure};
use crate::series::{int, Rational};
use crate::transforms::{free_cumulants, moments_from_cumulants, moments_from_s_series, s_transform, FreeCumulantSequence};

pub use crate::nc::NonCrossingPartition;

/// Largest `n` accepted by [`nc_moment_oracle`].
pub const NC_ORACLE_MAX: usize = 8;

/// `a * b`: atoms at pairwise sums.
pub fn classical_add_conv(a: &SignedAtomicMeasure, b: &SignedAtomicMeasure) -> SignedAtomicMeasure {
    let mut out = SignedAtomicMeasure::zero();
    for (x, wx) in a.atoms() {
        for (y, wy) in b.atoms() {
            out.add_atom(x + y, wx * wy);
        }
    }
    out
}

/// `a × b`: atoms at pairwise products.
pub fn classical_mul_conv(a: &SignedAtomicMeasure, b: &SignedAtomicMeasure) -> SignedAtomicMeasure {
    let mut out = SignedAtomicMeasure::zero();
    for (x, wx) in a.atoms() {
        for (y, wy) in b.atoms() {
            out.add_atom(x * y, wx * wy);
        }
    }
    out
}

/// `sum_{t=0}^{n} (1/t!) (δ_1 - δ_0)^{*t}`.
pub fn truncated_exponential(n: u32) -> SignedAtomicMeasure {
    let step = SignedAtomicMeasure::from_atoms([(int(1), int(1)), (int(0), int(-1))]);
    let mut power = SignedAtomicMeasure::dirac(int(0));
    let mut out = SignedAtomicMeasure::zero();
    for t in 0..=n {
        if t > 0 {
            power = classical_add_conv(&power, &step);
        }
        let coef = Rational::from_integer(factorial(t as usize)).recip();
        out = out.plus(&power.scale(&coef));
    }
    out
}

fn common_order(a: &MomentSequence, b: &MomentSequence, order: usize) -> usize {
    order.min(a.order()).min(b.order())
}

/// `a ⊞ b` through cumulant addition.
pub fn free_add_conv(a: &MomentSequence, b: &MomentSequence, order: usize) -> Result<MomentSequence> {
    let n = common_order(a, b, order);
    let ka = free_cumulants(&a.truncate(n))?;
    let kb = free_cumulants(&b.truncate(n))?;
    Ok(moments_from_cumulants(&ka.add(&kb)))
}

/// `a ⊠ b` through the product of S-transforms.
pub fn free_mul_conv(a: &MomentSequence, b: &MomentSequence, order: usize) -> Result<MomentSequence> {
    let n = common_order(a, b, order);
    if n == 0 {
        return Ok(MomentSequence::new(vec![Rational::one()]));
    }
    let sa = s_transform(a, n)?.series;
    let sb = s_transform(b, n)?.series;
    moments_from_s_series(&sa.mul(&sb))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerKind {
    Boxplus,
    Boxtimes,
}

/// `a^{⊞n}` or `a^{⊠n}`; `n = 1` returns the input truncated to `order`.
pub fn free_power(a: &MomentSequence, kind: PowerKind, n: u32, order: usize) -> Result<MomentSequence> {
    if n == 0 {
        return Err(Error::InvalidParameter("free power needs n >= 1".into()));
    }
    let m = a.truncate(order);
    if n == 1 {
        m.require_probability()?;
        return Ok(m);
    }
    match kind {
        PowerKind::Boxplus => {
            let k = free_cumulants(&m)?;
            Ok(moments_from_cumulants(&k.scale(&int(n as i64))))
        }
        PowerKind::Boxtimes => {
            if m.order() == 0 {
                return Ok(m);
            }
            let s = s_transform(&m, m.order())?.series;
            moments_from_s_series(&s.pow(n))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NsvReport {
    pub lhs: MomentSequence,
    pub rhs: MomentSequence,
    pub equal: bool,
}

/// Compares `(n-1)/n δ_0 + (1/n) μ^{⊞n}` with `μ ⊠ uniform_group(n)`.
pub fn nsv_check(mu: &MomentSequence, n: u32, order: usize) -> Result<NsvReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("nsv_check needs n >= 1".into()));
    }
    let boxplus = free_power(mu, PowerKind::Boxplus, n, order)?;
    let inv_n = int(n as i64).recip();
    let lhs = MomentSequence::new(
        boxplus
            .as_slice()
            .iter()
            .enumerate()
            .map(|(k, m)| if k == 0 { Rational::one() } else { m * &inv_n })
            .collect(),
    );
    let group = uniform_group(n).moments(order);
    let rhs = free_mul_conv(mu, &group, order)?;
    let equal = lhs == rhs;
    Ok(NsvReport { lhs, rhs, equal })
}

/// `sum_{π ∈ NC(n)} κ_π(a) m_{K(π)}(b)`, the n-th moment of `a ⊠ b`.
pub fn nc_moment_oracle(kappa_a: &FreeCumulantSequence, b_moments: &MomentSequence, n: usize) -> Result<Rational> {
    check_oracle(n)?;
    if kappa_a.order() < n {
        return Err(Error::OrderTooLarge { requested: n, available: kappa_a.order() });
    }
    if b_moments.order() < n {
        return Err(Error::OrderTooLarge { requested: n, available: b_moments.order() });
    }
    let mut total = Rational::zero();
    for p in crate::nc::enumerate(n) {
        let mut term: Rational = p.block_sizes().map(|s| kappa_a.kappa(s).clone()).product();
        if term.is_zero() {
            continue;
        }
        for s in p.kreweras().block_sizes() {
            term *= b_moments.get(s);
        }
        total += term;
    }
    Ok(total)
}

/// `m_n = sum_{π ∈ NC(n)} κ_π`, the brute-force moment-cumulant relation.
pub fn nc_moment_from_cumulants(kappas: &FreeCumulantSequence, n: usize) -> Result<Rational> {
    check_oracle(n)?;
    if kappas.order() < n {
        return Err(Error::OrderTooLarge { requested: n, available: kappas.order() });
    }
    Ok(crate::nc::enumerate(n)
        .iter()
        .map(|p| p.block_sizes().map(|s| kappas.kappa(s).clone()).product::<Rational>())
        .sum())
}

/// Free cumulants recovered by inverting `m_n = sum_π κ_π` one index at a time.
pub fn nc_cumulants(m: &MomentSequence, n: usize) -> Result<FreeCumulantSequence> {
    check_oracle(n)?;
    m.require_probability()?;
    if m.order() < n {
        return Err(Error::OrderTooLarge { requested: n, available: m.order() });
    }
    let mut kappas: Vec<Rational> = Vec::with_capacity(n);
    for k in 1..=n {
        // Every partition except the single block only uses κ_j with j < k.
        kappas.push(Rational::zero());
        let partial = nc_moment_from_cumulants(&FreeCumulantSequence::new(kappas.clone()), k)?;
        kappas[k - 1] = m.get(k) - partial;
    }
    Ok(FreeCumulantSequence::new(kappas))
}

fn check_oracle(n: usize) -> Result<()> {
    if n > NC_ORACLE_MAX {
        return Err(Error::OrderTooLargeForOracle { n, max: NC_ORACLE_MAX });
    }
    if n == 0 {
        return Err(Error::InvalidParameter("oracle needs n >= 1".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributivityReport {
    pub lhs: MomentSequence,
    pub rhs: MomentSequence,
    pub differ_at: Option<usize>,
}

/// `μ ⊠ (μ1 ⊞ μ2)` against `(μ ⊠ μ1) ⊞ (μ ⊠ μ2)`.
pub fn distributivity_counterexample(
    mu: &MomentSequence,
    mu1: &MomentSequence,
    mu2: &MomentSequence,
    order: usize,
) -> Result<DistributivityReport> {
    let lhs = free_mul_conv(mu, &free_add_conv(mu1, mu2, order)?, order)?;
    let rhs = free_add_conv(&free_mul_conv(mu, mu1, order)?, &free_mul_conv(mu, mu2, order)?, order)?;
    let differ_at = lhs.first_difference(&rhs);
    Ok(DistributivityReport { lhs, rhs, differ_at })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{moments_of, CatalogMeasure};
    use crate::series::rat;

    fn cat(name: &str, order: usize) -> MomentSequence {
        moments_of(&name.parse::<CatalogMeasure>().unwrap(), order).unwrap()
    }

    #[test]
    fn classical_examples() {
        let d1 = SignedAtomicMeasure::dirac(int(1));
        assert_eq!(classical_add_conv(&d1, &d1), SignedAtomicMeasure::dirac(int(2)));
        let step = SignedAtomicMeasure::from_atoms([(int(1), int(1)), (int(0), int(-1))]);
        let sq = classical_add_conv(&step, &step);
        assert_eq!(
            sq,
            SignedAtomicMeasure::from_atoms([(int(2), int(1)), (int(1), int(-2)), (int(0), int(1))])
        );
        let nu3 = SignedAtomicMeasure::from_atoms([(int(0), rat(1, 3)), (int(1), rat(1, 2)), (int(3), rat(1, 6))]);
        assert_eq!(truncated_exponential(3), nu3);

        let d2 = SignedAtomicMeasure::dirac(int(2));
        let d3 = SignedAtomicMeasure::dirac(int(3));
        assert_eq!(classical_mul_conv(&d2, &d3), SignedAtomicMeasure::dirac(int(6)));
        let eta2 = crate::measures::uniform_group(2);
        assert_eq!(classical_mul_conv(&eta2, &eta2), uniform_group(4));
        assert_eq!(classical_mul_conv(&nu3, &d1), nu3);
    }

    #[test]
    fn free_add_examples() {
        let e4 = cat("eta:4", 4);
        assert_eq!(free_add_conv(&e4, &e4, 4).unwrap(), MomentSequence::from_ints(&[1, 2, 6, 22, 90]));
        let sc = cat("semicircle", 8);
        let twice = free_add_conv(&sc, &sc, 8).unwrap();
        assert_eq!(twice, MomentSequence::from_ints(&[1, 0, 2, 0, 8, 0, 40, 0, 224]));
        let da = SignedAtomicMeasure::dirac(rat(1, 2)).moments(5);
        let db = SignedAtomicMeasure::dirac(int(3)).moments(5);
        assert_eq!(free_add_conv(&da, &db, 5).unwrap(), SignedAtomicMeasure::dirac(rat(7, 2)).moments(5));
    }

    #[test]
    fn free_mul_examples() {
        let e4 = cat("eta:4", 4);
        assert_eq!(free_mul_conv(&e4, &e4, 4).unwrap(), MomentSequence::from_ints(&[1, 1, 3, 12, 55]));
        let d1 = SignedAtomicMeasure::dirac(int(1)).moments(6);
        let u4 = uniform_group(4).moments(6);
        assert_eq!(free_mul_conv(&u4, &d1, 6).unwrap(), u4);
        let e2 = cat("eta:2", 3);
        assert_eq!(free_mul_conv(&u4, &e2, 3).unwrap(), MomentSequence::from_ints(&[1, 1, 5, 28]));
    }

    #[test]
    fn powers() {
        let e4 = cat("eta:4", 4);
        assert_eq!(
            free_power(&e4, PowerKind::Boxtimes, 3, 4).unwrap(),
            MomentSequence::from_ints(&[1, 1, 4, 22, 140])
        );
        assert_eq!(free_power(&e4, PowerKind::Boxplus, 1, 4).unwrap(), e4);
        let d1 = SignedAtomicMeasure::dirac(int(1)).moments(6);
        assert_eq!(
            free_power(&d1, PowerKind::Boxplus, 5, 6).unwrap(),
            SignedAtomicMeasure::dirac(int(5)).moments(6)
        );
        assert!(free_power(&e4, PowerKind::Boxplus, 0, 4).is_err());
    }

    #[test]
    fn nsv_examples() {
        let d1 = SignedAtomicMeasure::dirac(int(1)).moments(10);
        let r = nsv_check(&d1, 3, 10).unwrap();
        assert!(r.equal);
        let expect = SignedAtomicMeasure::from_atoms([(int(0), rat(2, 3)), (int(3), rat(1, 3))]).moments(10);
        assert_eq!(r.lhs, expect);
        for (name, n) in [("eta:2", 2), ("eta:4", 4)] {
            assert!(nsv_check(&cat(name, 10), n, 10).unwrap().equal, "{name} n={n}");
        }
    }

    #[test]
    fn oracle_examples() {
        let e4 = cat("eta:4", 8);
        let k = free_cumulants(&e4).unwrap();
        assert_eq!(nc_moment_oracle(&k, &e4, 1).unwrap(), int(1));
        assert_eq!(nc_moment_oracle(&k, &e4, 2).unwrap(), int(3));
        assert_eq!(nc_moment_oracle(&k, &e4, 3).unwrap(), int(12));
        assert_eq!(
            nc_moment_oracle(&k, &e4, 9),
            Err(Error::OrderTooLargeForOracle { n: 9, max: 8 })
        );
    }

    #[test]
    fn oracle_cumulants_match_functional_equation() {
        for name in ["eta:3", "eta:4", "semicircle", "poisson", "cube", "dihedral:5"] {
            let m = cat(name, 8);
            assert_eq!(nc_cumulants(&m, 8).unwrap(), free_cumulants(&m).unwrap(), "{name}");
        }
    }

    #[test]
    fn distributivity() {
        let d1 = SignedAtomicMeasure::dirac(int(1)).moments(6);
        let d2 = SignedAtomicMeasure::dirac(int(2)).moments(6);
        let e4 = cat("eta:4", 6);
        assert_eq!(distributivity_counterexample(&d1, &e4, &d2, 6).unwrap().differ_at, None);
        assert_eq!(distributivity_counterexample(&d2, &d2, &d2, 6).unwrap().differ_at, None);
        let r = distributivity_counterexample(&e4, &d1, &d2, 6).unwrap();
        assert_eq!(r.differ_at, Some(2));
    }
}
