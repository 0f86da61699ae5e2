//! Truncated formal power series over exact rationals.
//!
//! A [`TruncatedSeries`] of order `N` stores `c_0..c_N`; everything above `z^N`
//! is unknown. Binary operations truncate to the smaller operand order, so a
//! pipeline only ever loses precision, never invents it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number, always stored in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Truncation order used when callers do not pick one.
pub const DEFAULT_ORDER: usize = 16;

/// `n / d` as a [`Rational`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a [`Rational`].
pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a short decimal like `"0.5"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    if let Some((whole, frac)) = t.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches('-'), frac);
        let num = BigInt::from_str(&digits)
            .map_err(|_| Error::InvalidParameter(format!("bad rational `{text}`")))?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    let r = BigRational::from_str(t)
        .map_err(|_| Error::InvalidParameter(format!("bad rational `{text}`")))?;
    Ok(r)
}

/// Lowest-terms string form used in every serialized document.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Which quantity a series represents inside a transform pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransformKind {
    Moments,
    Psi,
    Chi,
    S,
    R,
    K,
    CauchyInXInverse,
    Theta,
}

/// Truncated power series `c_0 + c_1 z + ... + c_N z^N + O(z^{N+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Builds a series from its coefficients; the order is `coeffs.len() - 1`.
    ///
    /// An empty vector is read as the zero series of order 0.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        Self { coeffs }
    }

    /// Coefficients `cs` padded with zeros (or cut) to the given order.
    pub fn from_coeffs(cs: &[Rational], order: usize) -> Self {
        let mut coeffs: Vec<Rational> = cs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, Rational::zero());
        Self { coeffs }
    }

    pub fn from_ints(cs: &[i64], order: usize) -> Self {
        let v: Vec<Rational> = cs.iter().map(|&c| int(c)).collect();
        Self::from_coeffs(&v, order)
    }

    pub fn zero(order: usize) -> Self {
        Self::from_coeffs(&[], order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        Self::from_coeffs(&[c], order)
    }

    /// The series `z`.
    pub fn var(order: usize) -> Self {
        Self::from_coeffs(&[Rational::zero(), Rational::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `z^k`; zero past the order.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(&self.coeffs, order.min(self.order()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::new((0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::new((0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Cauchy product truncated to the common order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::ReciprocalOfZeroConstantTerm);
        }
        let n = self.order();
        let inv0 = c0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &out[k - j];
            }
            out.push(-(acc * &inv0));
        }
        Ok(Self::new(out))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.reciprocal()?))
    }

    /// Multiplies by `z`, keeping the order.
    pub fn shift_up(&self) -> Self {
        let mut v = Vec::with_capacity(self.coeffs.len());
        v.push(Rational::zero());
        v.extend(self.coeffs[..self.order()].iter().cloned());
        Self::new(v)
    }

    /// Multiplies by `z` and extends the order by one, so nothing is lost.
    pub fn shift_up_extend(&self) -> Self {
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(Rational::zero());
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    /// Divides by `z`; requires `c_0 = 0` and drops one order of precision.
    pub fn shift_down(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::InvalidParameter(
                "division by z needs zero constant term".into(),
            ));
        }
        if self.order() == 0 {
            return Err(Error::InvalidParameter(
                "division by z of an order-0 series".into(),
            ));
        }
        Ok(Self::new(self.coeffs[1..].to_vec()))
    }

    /// `self(inner(z))`, truncated to the common order.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::ComposeWithNonzeroConstantTerm);
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        // Horner: every multiplication by `inner` raises the valuation by one,
        // so the tail past n never contributes.
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse `b` with `self(b(z)) = b(self(z)) = z`.
    pub fn comp_inverse(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() || self.order() == 0 || self.coeffs[1].is_zero() {
            return Err(Error::NotInvertibleAsComposition);
        }
        let n = self.order();
        let a1_inv = self.coeffs[1].recip();
        let mut b = Self::zero(n);
        b.coeffs[1] = a1_inv.clone();
        // [z^k] self(b) = a1 * b_k + (terms in b_1..b_{k-1}), solve for b_k.
        for k in 2..=n {
            let partial = self.truncate(k).compose(&b.truncate(k))?;
            b.coeffs[k] = -(&partial.coeffs[k] * &a1_inv);
        }
        Ok(b)
    }

    /// Square root with constant term 1.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::SqrtConstantTermNotOne);
        }
        let n = self.order();
        let two = int(2);
        let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
        b.push(Rational::one());
        for k in 1..=n {
            let mut acc = self.coeffs[k].clone();
            for i in 1..k {
                acc -= &b[i] * &b[k - i];
            }
            b.push(acc / &two);
        }
        Ok(Self::new(b))
    }

    /// Solves `a f^2 + b f + c = 0` for `f` with prescribed constant term `f0`.
    ///
    /// Coefficients are found order by order; the unknown `f_k` enters linearly
    /// with factor `2 a_0 f_0 + b_0`, which must be nonzero.
    pub fn solve_quadratic(a: &Self, b: &Self, c: &Self, f0: Rational) -> Result<Self> {
        let n = a.order().min(b.order()).min(c.order());
        let residual0 = &a.coeffs[0] * &f0 * &f0 + &b.coeffs[0] * &f0 + &c.coeffs[0];
        if !residual0.is_zero() {
            return Err(Error::InvalidParameter(
                "prescribed constant term does not solve the quadratic".into(),
            ));
        }
        let lead = int(2) * &a.coeffs[0] * &f0 + &b.coeffs[0];
        if lead.is_zero() {
            return Err(Error::DegenerateQuadratic);
        }
        let mut f = Self::constant(f0, n);
        for k in 1..=n {
            let fk = f.truncate(k);
            let r = a.truncate(k).mul(&fk.mul(&fk)).add(&b.truncate(k).mul(&fk)).add(&c.truncate(k));
            f.coeffs[k] = -(&r.coeffs[k] / &lead);
        }
        Ok(f)
    }

    /// First index where `self` and `other` differ, over the common order.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let n = self.order().min(other.order());
        (0..=n).find(|&k| self.coeffs[k] != other.coeffs[k])
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if wrote {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match k {
                0 => {}
                1 => f.write_str("z")?,
                _ => write!(f, "z^{k}")?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::add(self, rhs)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::sub(self, rhs)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesDoc {
    order: usize,
    coeffs: Vec<String>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesDoc {
            order: self.order(),
            coeffs: self.to_strings(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = SeriesDoc::deserialize(d)?;
        if doc.coeffs.len() != doc.order + 1 {
            return Err(D::Error::custom("coeffs length must be order + 1"));
        }
        let coeffs = doc
            .coeffs
            .iter()
            .map(|c| parse_rational(c).map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self::new(coeffs))
    }
}

/// The `op_kind` of [`series_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Reciprocal,
    Scale,
}

/// Second operand of [`series_arith`]; ignored by `Reciprocal`.
#[derive(Debug, Clone)]
pub enum Operand {
    Series(TruncatedSeries),
    Scalar(Rational),
    None,
}

/// Uniform entry point over the basic arithmetic operations.
pub fn series_arith(op: ArithOp, a: &TruncatedSeries, b: &Operand) -> Result<TruncatedSeries> {
    let want_series = || match b {
        Operand::Series(s) => Ok(s),
        _ => Err(Error::InvalidParameter(format!("{op:?} needs a series operand"))),
    };
    match op {
        ArithOp::Add => Ok(a.add(want_series()?)),
        ArithOp::Sub => Ok(a.sub(want_series()?)),
        ArithOp::Mul => Ok(a.mul(want_series()?)),
        ArithOp::Reciprocal => a.reciprocal(),
        ArithOp::Scale => match b {
            Operand::Scalar(c) => Ok(a.scale(c)),
            _ => Err(Error::InvalidParameter("scale needs a rational operand".into())),
        },
    }
}

/// A series together with the quantity it represents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transform {
    pub kind: TransformKind,
    #[serde(flatten)]
    pub series: TruncatedSeries,
}

impl Transform {
    pub fn new(kind: TransformKind, series: TruncatedSeries) -> Self {
        Self { kind, series }
    }

    /// Borrows the series after checking the tag.
    pub fn expect(&self, kind: TransformKind) -> Result<&TruncatedSeries> {
        if self.kind != kind {
            return Err(Error::TransformMismatch {
                expected: kind,
                found: self.kind,
            });
        }
        Ok(&self.series)
    }
}
