//! Finite signed atomic measures, exact moment sequences, and the catalog of
//! named spectral measures.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::series::{format_rational, int, parse_rational, rat, Rational, TruncatedSeries};
use crate::transforms;

/// Finite signed combination of Dirac masses `sum w_i delta_{x_i}`.
///
/// Locations are unique and zero weights are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SignedAtomicMeasure {
    atoms: BTreeMap<Rational, Rational>,
}

impl SignedAtomicMeasure {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn dirac(at: Rational) -> Self {
        Self::from_atoms([(at, Rational::one())])
    }

    /// Aggregates repeated locations and drops zero weights.
    pub fn from_atoms<I: IntoIterator<Item = (Rational, Rational)>>(atoms: I) -> Self {
        let mut m = Self::zero();
        for (x, w) in atoms {
            m.add_atom(x, w);
        }
        m
    }

    pub fn add_atom(&mut self, at: Rational, weight: Rational) {
        let entry = self.atoms.entry(at).or_insert_with(Rational::zero);
        *entry += weight;
        if entry.is_zero() {
            self.atoms.retain(|_, w| !w.is_zero());
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.atoms.iter()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn weight_at(&self, at: &Rational) -> Rational {
        self.atoms.get(at).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_mass(&self) -> Rational {
        self.atoms.values().sum()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_atoms(self.atoms.iter().map(|(x, w)| (x.clone(), w * c)))
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, w) in &other.atoms {
            out.add_atom(x.clone(), w.clone());
        }
        out
    }

    /// `m_k = sum_i w_i x_i^k` for `k = 0..=order`.
    pub fn moments(&self, order: usize) -> MomentSequence {
        let mut out = vec![Rational::zero(); order + 1];
        for (x, w) in &self.atoms {
            let mut p = w.clone();
            for slot in out.iter_mut() {
                *slot += &p;
                p *= x;
            }
        }
        MomentSequence::new(out)
    }
}

impl fmt::Display for SignedAtomicMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .atoms
            .iter()
            .map(|(x, w)| format!("({w})·δ[{x}]"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for SignedAtomicMeasure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[String; 2]> = self
            .atoms
            .iter()
            .map(|(x, w)| [format_rational(x), format_rational(w)])
            .collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SignedAtomicMeasure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<[String; 2]> = Vec::deserialize(d)?;
        let mut atoms = Vec::with_capacity(pairs.len());
        for [x, w] in pairs {
            let x = parse_rational(&x).map_err(D::Error::custom)?;
            let w = parse_rational(&w).map_err(D::Error::custom)?;
            atoms.push((x, w));
        }
        Ok(Self::from_atoms(atoms))
    }
}

/// Exact moments `m_0..m_N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MomentSequence {
    moments: Vec<Rational>,
}

impl MomentSequence {
    pub fn new(mut moments: Vec<Rational>) -> Self {
        if moments.is_empty() {
            moments.push(Rational::zero());
        }
        Self { moments }
    }

    pub fn from_ints(ms: &[i64]) -> Self {
        Self::new(ms.iter().map(|&m| int(m)).collect())
    }

    pub fn order(&self) -> usize {
        self.moments.len() - 1
    }

    pub fn get(&self, k: usize) -> &Rational {
        &self.moments[k]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.moments
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.moments[..=order.min(self.order())].to_vec())
    }

    pub fn is_probability(&self) -> bool {
        self.moments[0].is_one()
    }

    pub(crate) fn require_probability(&self) -> Result<()> {
        if self.is_probability() {
            Ok(())
        } else {
            Err(Error::NotAProbabilitySequence(format_rational(&self.moments[0])))
        }
    }

    /// Moment generating series `f(z) = sum m_k z^k`.
    pub fn generating_series(&self) -> TruncatedSeries {
        TruncatedSeries::new(self.moments.clone())
    }

    pub fn from_series(f: &TruncatedSeries) -> Self {
        Self::new(f.coeffs().to_vec())
    }

    /// First index where the two sequences disagree, over the common order.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        self.generating_series()
            .first_difference(&other.generating_series())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.moments.iter().map(format_rational).collect()
    }
}

impl fmt::Display for MomentSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_strings().join(", "))
    }
}

impl Serialize for MomentSequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MomentSequence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        let ms = raw
            .iter()
            .map(|m| parse_rational(m).map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self::new(ms))
    }
}

/// Named measures appearing as spectral measures of quantum permutation groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CatalogMeasure {
    Dirac(Rational),
    /// Spectral measure of the quantum symmetric group on `n` points.
    Eta(u32),
    /// Fixed-point law of the classical symmetric group `S_n`.
    Nu(u32),
    /// Fixed-point law of the dihedral group `D_m` acting on an `m`-gon.
    Dihedral(u32),
    /// A group of order `n` acting on itself.
    UniformGroup(u32),
    Semicircle,
    FreePoisson,
    Poisson,
    /// `eta_2^{⊠a} ⊠ eta_3^{⊠b} ⊠ eta_4^{⊠c}`.
    FussCatalan { a: u32, b: u32, c: u32 },
    Cube,
    TwoRectangles,
}

/// What the catalog hands back: atoms when the law is finite, exact moments otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogValue {
    Atomic(SignedAtomicMeasure),
    Moments(MomentSequence),
}

impl CatalogValue {
    pub fn moments(&self, order: usize) -> MomentSequence {
        match self {
            CatalogValue::Atomic(a) => a.moments(order),
            CatalogValue::Moments(m) => m.truncate(order),
        }
    }
}

impl CatalogMeasure {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            CatalogMeasure::Eta(0) => bad("eta(n) needs n >= 1".into()),
            CatalogMeasure::Nu(0) => bad("nu(n) needs n >= 1".into()),
            CatalogMeasure::UniformGroup(0) => bad("uniform_group(n) needs n >= 1".into()),
            CatalogMeasure::Dihedral(m) if m < 3 => bad(format!("dihedral(m) needs m >= 3, got {m}")),
            _ => Ok(()),
        }
    }

    /// Atoms for the finite laws, `None` for the absolutely continuous families.
    pub fn atoms(&self) -> Result<Option<SignedAtomicMeasure>> {
        self.validate()?;
        let m = match self {
            CatalogMeasure::Dirac(a) => SignedAtomicMeasure::dirac(a.clone()),
            CatalogMeasure::Eta(1) => SignedAtomicMeasure::dirac(int(1)),
            CatalogMeasure::Eta(2) => uniform_group(2),
            CatalogMeasure::Eta(3) => {
                SignedAtomicMeasure::from_atoms([(int(0), rat(2, 6)), (int(1), rat(3, 6)), (int(3), rat(1, 6))])
            }
            CatalogMeasure::Nu(n) => nu(*n),
            CatalogMeasure::Dihedral(m) => dihedral(*m),
            CatalogMeasure::UniformGroup(n) => uniform_group(*n),
            _ => return Ok(None),
        };
        Ok(Some(m))
    }

    /// Atoms or exact moments up to `order`.
    pub fn materialize(&self, order: usize) -> Result<CatalogValue> {
        if let Some(a) = self.atoms()? {
            return Ok(CatalogValue::Atomic(a));
        }
        let ms = match self {
            CatalogMeasure::Eta(_) | CatalogMeasure::FreePoisson => catalan_moments(order),
            CatalogMeasure::Semicircle => {
                let cat = catalan_moments(order / 2);
                let v = (0..=order)
                    .map(|k| if k % 2 == 0 { cat.get(k / 2).clone() } else { Rational::zero() })
                    .collect();
                MomentSequence::new(v)
            }
            CatalogMeasure::Poisson => MomentSequence::new(bell_numbers(order)),
            CatalogMeasure::FussCatalan { a: 0, b: 0, c } => fuss_catalan_moments(*c, order),
            CatalogMeasure::FussCatalan { a, b, c } => fuss_catalan_general(*a, *b, *c, order)?,
            CatalogMeasure::Cube => cube_moments(order),
            CatalogMeasure::TwoRectangles => two_rectangles_moments(order)?,
            _ => unreachable!("atomic entries handled above"),
        };
        Ok(CatalogValue::Moments(ms))
    }

    pub fn name(&self) -> String {
        match self {
            CatalogMeasure::Dirac(a) => format!("dirac:{a}"),
            CatalogMeasure::Eta(n) => format!("eta:{n}"),
            CatalogMeasure::Nu(n) => format!("nu:{n}"),
            CatalogMeasure::Dihedral(m) => format!("dihedral:{m}"),
            CatalogMeasure::UniformGroup(n) => format!("uniform_group:{n}"),
            CatalogMeasure::Semicircle => "semicircle".into(),
            CatalogMeasure::FreePoisson => "free_poisson".into(),
            CatalogMeasure::Poisson => "poisson".into(),
            CatalogMeasure::FussCatalan { a, b, c } => format!("fuss_catalan:{a},{b},{c}"),
            CatalogMeasure::Cube => "cube".into(),
            CatalogMeasure::TwoRectangles => "two_rectangles".into(),
        }
    }
}

impl fmt::Display for CatalogMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for CatalogMeasure {
    type Err = Error;

    /// `name` or `name:params`, e.g. `eta:4`, `dirac:3/2`, `fuss_catalan:0,1,2`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = match s.split_once(':') {
            Some((n, p)) => (n.trim(), Some(p.trim())),
            None => (s.trim(), None),
        };
        let one_int = |p: Option<&str>| -> Result<u32> {
            p.ok_or_else(|| Error::InvalidParameter(format!("`{name}` needs a parameter")))?
                .parse::<u32>()
                .map_err(|_| Error::InvalidParameter(format!("bad parameter for `{name}`")))
        };
        let m = match name {
            "dirac" => CatalogMeasure::Dirac(parse_rational(
                params.ok_or_else(|| Error::InvalidParameter("dirac needs a location".into()))?,
            )?),
            "eta" => CatalogMeasure::Eta(one_int(params)?),
            "nu" => CatalogMeasure::Nu(one_int(params)?),
            "dihedral" => CatalogMeasure::Dihedral(one_int(params)?),
            "uniform_group" => CatalogMeasure::UniformGroup(one_int(params)?),
            "semicircle" => CatalogMeasure::Semicircle,
            "free_poisson" => CatalogMeasure::FreePoisson,
            "poisson" => CatalogMeasure::Poisson,
            "cube" => CatalogMeasure::Cube,
            "two_rectangles" => CatalogMeasure::TwoRectangles,
            "fuss_catalan" => {
                let raw = params.ok_or_else(|| Error::InvalidParameter("fuss_catalan needs a,b,c".into()))?;
                let v: Vec<u32> = raw
                    .split(',')
                    .map(|t| t.trim().parse::<u32>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::InvalidParameter(format!("bad fuss_catalan parameters `{raw}`")))?;
                match v.as_slice() {
                    [a, b, c] => CatalogMeasure::FussCatalan { a: *a, b: *b, c: *c },
                    [s] => CatalogMeasure::FussCatalan { a: 0, b: 0, c: *s },
                    _ => return Err(Error::InvalidParameter(format!("bad fuss_catalan parameters `{raw}`"))),
                }
            }
            other => return Err(Error::UnknownCatalogName(other.to_string())),
        };
        m.validate()?;
        Ok(m)
    }
}

/// `catalog_measure`: atoms for finite laws, exact moments up to `order` otherwise.
pub fn catalog_measure(name: &CatalogMeasure, order: usize) -> Result<CatalogValue> {
    name.materialize(order)
}

/// `moments_of` for a catalog entry.
pub fn moments_of(name: &CatalogMeasure, order: usize) -> Result<MomentSequence> {
    Ok(name.materialize(order)?.moments(order))
}

/// `(n-1)/n δ_0 + 1/n δ_n`: a group of order `n` acting on itself.
pub fn uniform_group(n: u32) -> SignedAtomicMeasure {
    let n = i64::from(n);
    SignedAtomicMeasure::from_atoms([(int(0), rat(n - 1, n)), (int(n), rat(1, n))])
}

/// Fixed-point law of `S_n`: weight `binom(n,s) D(n-s) / n!` at `s`, with `D` the derangement numbers.
pub fn nu(n: u32) -> SignedAtomicMeasure {
    let n = n as usize;
    let mut der = vec![BigInt::one(), BigInt::zero()];
    for k in 2..=n {
        let next = BigInt::from(k - 1) * (&der[k - 1] + &der[k - 2]);
        der.push(next);
    }
    let fact = factorial(n);
    SignedAtomicMeasure::from_atoms((0..=n).map(|s| {
        let w = binomial(n, s) * &der[n - s];
        (int(s as i64), Rational::new(w, fact.clone()))
    }))
}

/// Fixed-point law of `D_m` on the vertices of an `m`-gon.
pub fn dihedral(m: u32) -> SignedAtomicMeasure {
    let k = i64::from(m / 2);
    let mm = i64::from(m);
    if m.is_multiple_of(2) {
        let d = 4 * k;
        SignedAtomicMeasure::from_atoms([
            (int(0), rat(3 * k - 1, d)),
            (int(2), rat(k, d)),
            (int(mm), rat(1, d)),
        ])
    } else {
        let d = 4 * k + 2;
        SignedAtomicMeasure::from_atoms([
            (int(0), rat(2 * k, d)),
            (int(1), rat(2 * k + 1, d)),
            (int(mm), rat(1, d)),
        ])
    }
}

pub(crate) fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub(crate) fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Catalan numbers `binom(2k,k)/(k+1)`.
pub fn catalan_moments(order: usize) -> MomentSequence {
    fuss_catalan_moments(1, order)
}

/// `binom((s+1)k, k) / (sk+1)`; `s = 0` gives `δ_1`.
pub fn fuss_catalan_moments(s: u32, order: usize) -> MomentSequence {
    let s = s as usize;
    MomentSequence::new(
        (0..=order)
            .map(|k| Rational::new(binomial((s + 1) * k, k), BigInt::from(s * k + 1)))
            .collect(),
    )
}

/// Bell numbers via the Bell triangle.
pub fn bell_numbers(order: usize) -> Vec<Rational> {
    let mut out = vec![BigInt::one()];
    let mut row = vec![BigInt::one()];
    while out.len() <= order {
        let mut next = vec![row.last().cloned().unwrap()];
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        out.push(next[0].clone());
        row = next;
    }
    out.truncate(order + 1);
    out.into_iter().map(Rational::from_integer).collect()
}

/// `1` then `2^{k-1}/(k+1) binom(2k,k)`.
pub fn cube_moments(order: usize) -> MomentSequence {
    MomentSequence::new(
        (0..=order)
            .map(|k| {
                if k == 0 {
                    return Rational::one();
                }
                let p = num_traits::pow(BigInt::from(2), k - 1);
                Rational::new(p * binomial(2 * k, k), BigInt::from(k + 1))
            })
            .collect(),
    )
}

/// Root with `f(0) = 1` of `(8z-1) f^2 - (10z-1) f + 3z = 0`.
pub fn two_rectangles_moments(order: usize) -> Result<MomentSequence> {
    let a = TruncatedSeries::from_ints(&[-1, 8], order);
    let b = TruncatedSeries::from_ints(&[1, -10], order);
    let c = TruncatedSeries::from_ints(&[0, 3], order);
    let f = TruncatedSeries::solve_quadratic(&a, &b, &c, int(1))?;
    Ok(MomentSequence::from_series(&f))
}

fn fuss_catalan_general(a: u32, b: u32, c: u32, order: usize) -> Result<MomentSequence> {
    let mut s = TruncatedSeries::one(order.saturating_sub(1));
    for (count, n) in [(a, 2u32), (b, 3), (c, 4)] {
        if count == 0 {
            continue;
        }
        let sn = transforms::s_transform(&moments_of(&CatalogMeasure::Eta(n), order)?, order)?;
        s = s.mul(&sn.series.pow(count));
    }
    transforms::moments_from_s_series(&s)
}
