//! Exact ψ, χ, S, R and Cauchy-series pipelines, plus the Θ(q) series.
//!
//! All transforms are truncated power series. From moments `m_0..m_N` the
//! S- and R-transforms are known to order `N-1`; the inverse pipelines
//! recover moments to order `N` again, so roundtrips are exact.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::measures::MomentSequence;
use crate::series::{format_rational, parse_rational, Rational, Transform, TransformKind, TruncatedSeries};

/// Free cumulants `κ_1..κ_N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeCumulantSequence {
    kappas: Vec<Rational>,
}

impl FreeCumulantSequence {
    pub fn new(kappas: Vec<Rational>) -> Self {
        Self { kappas }
    }

    pub fn order(&self) -> usize {
        self.kappas.len()
    }

    /// `κ_k`, 1-based.
    pub fn kappa(&self, k: usize) -> &Rational {
        &self.kappas[k - 1]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.kappas
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::new((0..n).map(|i| &self.kappas[i] + &other.kappas[i]).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.kappas.iter().map(|k| k * c).collect())
    }

    /// `R(z) = sum κ_k z^{k-1}`.
    pub fn to_r_series(&self) -> TruncatedSeries {
        TruncatedSeries::new(self.kappas.clone())
    }
}

impl fmt::Display for FreeCumulantSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.kappas.iter().map(format_rational).collect();
        f.write_str(&parts.join(", "))
    }
}

impl Serialize for FreeCumulantSequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.kappas.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FreeCumulantSequence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw: Vec<String> = Vec::deserialize(d)?;
        let ks = raw
            .iter()
            .map(|k| parse_rational(k).map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self::new(ks))
    }
}

fn need_positive_order(m: &MomentSequence) -> Result<()> {
    if m.order() == 0 {
        return Err(Error::InvalidParameter("need at least one moment past m_0".into()));
    }
    Ok(())
}

/// `ψ(z) = f(z) - 1`.
pub fn psi_from_moments(m: &MomentSequence) -> Result<Transform> {
    m.require_probability()?;
    let mut cs = m.as_slice().to_vec();
    cs[0] = Rational::zero();
    Ok(Transform::new(TransformKind::Psi, TruncatedSeries::new(cs)))
}

/// `χ`, the compositional inverse of `ψ`.
pub fn chi_transform(m: &MomentSequence, order: usize) -> Result<Transform> {
    let m = m.truncate(order);
    need_positive_order(&m)?;
    let psi = psi_from_moments(&m)?;
    if m.get(1).is_zero() {
        return Err(Error::STransformUndefined);
    }
    Ok(Transform::new(TransformKind::Chi, psi.series.comp_inverse()?))
}

/// `S(z) = (1+z)/z · χ(z)`, of order `min(order, m.order()) - 1`.
pub fn s_transform(m: &MomentSequence, order: usize) -> Result<Transform> {
    let chi = chi_transform(m, order)?;
    let chi_over_z = chi.series.shift_down()?;
    let one_plus_z = TruncatedSeries::from_ints(&[1, 1], chi_over_z.order());
    Ok(Transform::new(TransformKind::S, one_plus_z.mul(&chi_over_z)))
}

/// Inverse of [`s_transform`]; the input must be tagged `S`.
pub fn moments_from_s(s: &Transform) -> Result<MomentSequence> {
    moments_from_s_series(s.expect(TransformKind::S)?)
}

/// `χ = z S/(1+z)`, `ψ = χ^{-1}`, `m_k = [z^k] ψ`.
pub fn moments_from_s_series(s: &TruncatedSeries) -> Result<MomentSequence> {
    if s.coeff(0).is_zero() {
        return Err(Error::NotInvertibleAsComposition);
    }
    let n = s.order() + 1;
    let z_s = s.shift_up_extend();
    let chi = z_s.div(&TruncatedSeries::from_ints(&[1, 1], n))?;
    let psi = chi.comp_inverse()?;
    let mut ms = psi.into_coeffs();
    ms[0] = Rational::one();
    Ok(MomentSequence::new(ms))
}

/// Free cumulants from `C(z M(z)) = M(z)`, with `M = 1 + sum m_k z^k`, `C = 1 + sum κ_k z^k`.
pub fn free_cumulants(m: &MomentSequence) -> Result<FreeCumulantSequence> {
    m.require_probability()?;
    let n = m.order();
    if n == 0 {
        return Ok(FreeCumulantSequence::new(Vec::new()));
    }
    let zm = m.generating_series().shift_up();
    // powers[s] = (z M)^s
    let mut powers = vec![TruncatedSeries::one(n)];
    for s in 1..=n {
        let next = powers[s - 1].mul(&zm);
        powers.push(next);
    }
    let mut kappas: Vec<Rational> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut acc = m.get(k).clone();
        for (s, kappa) in kappas.iter().enumerate() {
            acc -= kappa * powers[s + 1].coeff(k);
        }
        // [z^k] (zM)^k = m_0^k = 1
        kappas.push(acc);
    }
    Ok(FreeCumulantSequence::new(kappas))
}

/// Moments from free cumulants by solving `M = C(z M)` order by order.
pub fn moments_from_cumulants(kappas: &FreeCumulantSequence) -> MomentSequence {
    let n = kappas.order();
    let mut c = vec![Rational::one()];
    c.extend(kappas.as_slice().iter().cloned());
    let c = TruncatedSeries::new(c);
    let mut mseries = TruncatedSeries::one(n);
    for k in 1..=n {
        let zm = mseries.truncate(k).shift_up();
        let mk = c.truncate(k).compose(&zm).expect("zM has zero constant term").coeff(k);
        let mut cs = mseries.into_coeffs();
        cs[k] = mk;
        mseries = TruncatedSeries::new(cs);
    }
    MomentSequence::from_series(&mseries)
}

/// `R(z) = sum_{k>=1} κ_k z^{k-1}`, of order `min(order, m.order()) - 1`.
pub fn r_transform(m: &MomentSequence, order: usize) -> Result<Transform> {
    let m = m.truncate(order);
    need_positive_order(&m)?;
    let k = free_cumulants(&m)?;
    Ok(Transform::new(TransformKind::R, k.to_r_series()))
}

/// Inverse of [`r_transform`]; the input must be tagged `R`.
pub fn moments_from_r(r: &Transform) -> Result<MomentSequence> {
    Ok(moments_from_r_series(r.expect(TransformKind::R)?))
}

pub fn moments_from_r_series(r: &TruncatedSeries) -> MomentSequence {
    moments_from_cumulants(&FreeCumulantSequence::new(r.coeffs().to_vec()))
}

/// `G(ξ) = ξ^{-1} f(ξ^{-1})` as a series in `w = 1/ξ`, i.e. `w f(w)`.
pub fn cauchy_series(m: &MomentSequence) -> Transform {
    let f = m.generating_series();
    Transform::new(TransformKind::CauchyInXInverse, f.shift_up_extend())
}

/// `Θ(q) = q + (1-q)/(1+q) f(q/(1+q)^2)`.
pub fn theta_series(m: &MomentSequence, order: usize) -> Result<Transform> {
    m.require_probability()?;
    let n = order.min(m.order());
    let f = m.generating_series().truncate(n);
    let one_plus_q = TruncatedSeries::from_ints(&[1, 1], n);
    let sub = TruncatedSeries::var(n).div(&one_plus_q.mul(&one_plus_q))?;
    let fsub = f.compose(&sub)?;
    let factor = TruncatedSeries::from_ints(&[1, -1], n).div(&one_plus_q)?;
    let theta = factor.mul(&fsub).add(&TruncatedSeries::var(n));
    Ok(Transform::new(TransformKind::Theta, theta))
}

/// Closed-form check helper: the S-transform of `η_3` as a series,
/// `(2+2z)/(1+4z+sqrt(1+4z^2))`.
pub fn s3_closed_form(order: usize) -> Result<TruncatedSeries> {
    let root = TruncatedSeries::from_ints(&[1, 0, 4], order).sqrt()?;
    let den = TruncatedSeries::from_ints(&[1, 4], order).add(&root);
    TruncatedSeries::from_ints(&[2, 2], order).div(&den)
}

/// The two series `R(zS(z))·S(z)` and `S(zR(z))·R(z)`; both equal 1 when the
/// transforms belong to the same measure.
pub fn r_s_products(m: &MomentSequence, order: usize) -> Result<(TruncatedSeries, TruncatedSeries)> {
    let s = s_transform(m, order)?.series;
    let r = r_transform(m, order)?.series;
    let z_s = s.shift_up_extend().truncate(s.order());
    let first = r.compose(&z_s)?.mul(&s);
    let z_r = r.shift_up_extend().truncate(r.order());
    let second = s.compose(&z_r)?.mul(&r);
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::int;
    use crate::measures::{moments_of, uniform_group, CatalogMeasure, SignedAtomicMeasure};
    use crate::series::rat;

    fn ser(cs: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_ints(cs, cs.len() - 1)
    }

    fn rational_fn(num: &[i64], den: &[i64], order: usize) -> TruncatedSeries {
        TruncatedSeries::from_ints(num, order)
            .div(&TruncatedSeries::from_ints(den, order))
            .unwrap()
    }

    #[test]
    fn psi_examples() {
        let d1 = SignedAtomicMeasure::dirac(int(1)).moments(4);
        assert_eq!(psi_from_moments(&d1).unwrap().series, ser(&[0, 1, 1, 1, 1]));
        let g = uniform_group(3).moments(6);
        assert_eq!(psi_from_moments(&g).unwrap().series, rational_fn(&[0, 1], &[1, -3], 6));
        let e = moments_of(&CatalogMeasure::Eta(4), 4).unwrap();
        assert_eq!(psi_from_moments(&e).unwrap().series, ser(&[0, 1, 2, 5, 14]));
        let bad = crate::measures::MomentSequence::from_ints(&[2, 1]);
        assert!(matches!(psi_from_moments(&bad), Err(Error::NotAProbabilitySequence(_))));
    }

    #[test]
    fn s_transform_examples() {
        let n = 10;
        let s2 = s_transform(&uniform_group(2).moments(n), n).unwrap();
        assert_eq!(s2.kind, TransformKind::S);
        assert_eq!(s2.series, rational_fn(&[1, 1], &[1, 2], n - 1));
        let e4 = moments_of(&CatalogMeasure::Eta(4), n).unwrap();
        assert_eq!(s_transform(&e4, n).unwrap().series, rational_fn(&[1], &[1, 1], n - 1));
        let e3 = moments_of(&CatalogMeasure::Eta(3), n).unwrap();
        assert_eq!(s_transform(&e3, n).unwrap().series, s3_closed_form(n - 1).unwrap());
        let d1 = SignedAtomicMeasure::dirac(int(1)).moments(n);
        assert_eq!(s_transform(&d1, n).unwrap().series, TruncatedSeries::one(n - 1));
        let d0 = SignedAtomicMeasure::dirac(int(0)).moments(n);
        assert_eq!(s_transform(&d0, n), Err(Error::STransformUndefined));
    }

    #[test]
    fn moments_from_s_examples() {
        let s = rational_fn(&[1], &[1, 2, 1], 3);
        let t = Transform::new(TransformKind::S, s);
        assert_eq!(moments_from_s(&t).unwrap(), MomentSequence::from_ints(&[1, 1, 3, 12, 55]));
        let one = Transform::new(TransformKind::S, TruncatedSeries::one(5));
        assert_eq!(moments_from_s(&one).unwrap(), MomentSequence::from_ints(&[1; 7]));
        let prod = rational_fn(&[1, 1], &[1, 4], 2).mul(&rational_fn(&[1, 1], &[1, 2], 2));
        assert_eq!(moments_from_s_series(&prod).unwrap(), MomentSequence::from_ints(&[1, 1, 5, 28]));
        let wrong = Transform::new(TransformKind::R, TruncatedSeries::one(3));
        assert!(matches!(moments_from_s(&wrong), Err(Error::TransformMismatch { .. })));
    }

    #[test]
    fn free_cumulant_examples() {
        let e4 = moments_of(&CatalogMeasure::Eta(4), 8).unwrap();
        let k = free_cumulants(&e4).unwrap();
        assert!(k.as_slice().iter().all(|x| x.is_one()));
        let d = SignedAtomicMeasure::dirac(rat(3, 2)).moments(6);
        let k = free_cumulants(&d).unwrap();
        assert_eq!(k.kappa(1), &rat(3, 2));
        assert!(k.as_slice()[1..].iter().all(Zero::is_zero));
        let sc = moments_of(&CatalogMeasure::Semicircle, 8).unwrap();
        let k = free_cumulants(&sc).unwrap();
        for i in 1..=8 {
            assert_eq!(k.kappa(i), &int(if i == 2 { 1 } else { 0 }));
        }
    }

    #[test]
    fn r_transform_examples() {
        let e4 = moments_of(&CatalogMeasure::Eta(4), 8).unwrap();
        assert_eq!(r_transform(&e4, 8).unwrap().series, rational_fn(&[1], &[1, -1], 7));
        let sc = moments_of(&CatalogMeasure::Semicircle, 6).unwrap();
        assert_eq!(r_transform(&sc, 6).unwrap().series, TruncatedSeries::var(5));
        let d = SignedAtomicMeasure::dirac(int(5)).moments(4);
        assert_eq!(r_transform(&d, 4).unwrap().series, TruncatedSeries::constant(int(5), 3));
    }

    #[test]
    fn moments_from_r_examples() {
        let r = Transform::new(TransformKind::R, rational_fn(&[2], &[1, -1], 2));
        assert_eq!(moments_from_r(&r).unwrap(), MomentSequence::from_ints(&[1, 2, 6, 22]));
        let zero = Transform::new(TransformKind::R, TruncatedSeries::zero(4));
        assert_eq!(moments_from_r(&zero).unwrap(), MomentSequence::from_ints(&[1, 0, 0, 0, 0, 0]));
        let cat = Transform::new(TransformKind::R, rational_fn(&[1], &[1, -1], 6));
        assert_eq!(moments_from_r(&cat).unwrap(), moments_of(&CatalogMeasure::Eta(4), 7).unwrap());
    }

    #[test]
    fn cauchy_examples() {
        let d0 = SignedAtomicMeasure::dirac(int(0)).moments(4);
        assert_eq!(cauchy_series(&d0).series, ser(&[0, 1, 0, 0, 0, 0]));
        let e4 = moments_of(&CatalogMeasure::Eta(4), 3).unwrap();
        let g = cauchy_series(&e4);
        assert_eq!(g.kind, TransformKind::CauchyInXInverse);
        assert_eq!(g.series, ser(&[0, 1, 1, 2, 5]));
        // G_2 = (1/2)(w/(1) + w/(1-2w)) in w = 1/ξ
        let g2 = cauchy_series(&uniform_group(2).moments(5)).series;
        let half = rat(1, 2);
        let expected = TruncatedSeries::var(6)
            .add(&TruncatedSeries::var(6).div(&TruncatedSeries::from_ints(&[1, -2], 6)).unwrap())
            .scale(&half);
        assert_eq!(g2, expected);
    }

    #[test]
    fn theta_examples() {
        let d0 = SignedAtomicMeasure::dirac(int(0)).moments(6);
        assert_eq!(theta_series(&d0, 6).unwrap().series, ser(&[1, -1, 2, -2, 2, -2, 2]));
        let d1 = SignedAtomicMeasure::dirac(int(1)).moments(8);
        // q + (1-q^2)/(1+q+q^2), expanded independently
        let expected = rational_fn(&[1, 0, -1], &[1, 1, 1], 8).add(&TruncatedSeries::var(8));
        let got = theta_series(&d1, 8).unwrap().series;
        assert_eq!(got, expected);
        assert_eq!(got.truncate(3), ser(&[1, 0, -1, 2]));
        let e4 = moments_of(&CatalogMeasure::Eta(4), 12).unwrap();
        let th = theta_series(&e4, 12).unwrap().series;
        assert!(th.coeffs().iter().all(|a| *a >= Rational::zero()));
    }

    #[test]
    fn lemma_products_are_one() {
        let e3 = moments_of(&CatalogMeasure::Eta(3), 10).unwrap();
        let (a, b) = r_s_products(&e3, 10).unwrap();
        assert_eq!(a, TruncatedSeries::one(a.order()));
        assert_eq!(b, TruncatedSeries::one(b.order()));
    }
}
