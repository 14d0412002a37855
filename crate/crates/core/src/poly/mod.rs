//! Exact multivariate polynomials over the rationals.
//!
//! A [`Polynomial`] is a sparse map from exponent vectors to nonzero
//! [`BigRational`] coefficients. Monomials are ordered graded-lexicographically
//! with `x1 > x2 > ... > xn`; printing and serialization list terms from the
//! leading (largest) monomial down.

mod parse;
mod root;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use parse::parse_polynomial;

/// Exponent vector of a monomial, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }

    /// Every monomial of total degree exactly `degree` in `nvars` variables,
    /// leading monomial first.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        fn rec(nvars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == nvars {
                prefix.push(left);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=left).rev() {
                prefix.push(e);
                rec(nvars, left - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if degree == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(nvars, degree, &mut Vec::with_capacity(nvars), &mut out);
        out
    }

    /// Every monomial of total degree at most `degree`, ascending in degree.
    pub fn all_up_to_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        (0..=degree)
            .flat_map(|k| Monomial::all_of_degree(nvars, k))
            .collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// A polynomial in `nvars` variables with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolynomialJson", into = "PolynomialJson")]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

/// Homogeneous piece of a polynomial together with its degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPiece {
    pub degree: u32,
    pub part: Polynomial,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    /// The variable `x_{i+1}` (indices are zero-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        Self::term(Monomial::var(nvars, i), BigRational::one())
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs; like terms
    /// are merged and zero results dropped.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BigRational, Vec<u32>)>,
    {
        let mut p = Self::zero(nvars);
        for (c, e) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms from the leading monomial down.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.leading_term().map(|(_, c)| c)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    /// Degree in the first `k` variables only, the rest treated as parameters.
    pub fn partial_degree(&self, k: usize) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| m.0[..k].iter().sum())
            .max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_constant() {
            Some(self.coeff(&Monomial::one(self.nvars)))
        } else {
            None
        }
    }

    /// The constant term.
    pub fn constant_value_at_origin(&self) -> BigRational {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// True when the polynomial involves `x_{i+1}`.
    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.mul(mono), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative with respect to `x_{i+1}`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c * rat(e as i64));
        }
        out
    }

    /// Sum of the terms of total degree exactly `k`.
    pub fn graded_component(&self, k: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn graded_pieces(&self) -> Vec<GradedPiece> {
        self.degree_support()
            .into_iter()
            .map(|degree| GradedPiece {
                degree,
                part: self.graded_component(degree),
            })
            .collect()
    }

    /// Degrees `k` whose graded component is nonzero.
    pub fn degree_support(&self) -> BTreeSet<u32> {
        self.terms.keys().map(Monomial::degree).collect()
    }

    /// Same as [`degree_support`](Self::degree_support) but counting only the
    /// first `k` variables.
    pub fn partial_degree_support(&self, k: usize) -> BTreeSet<u32> {
        self.terms.keys().map(|m| m.0[..k].iter().sum()).collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree_support().len() <= 1
    }

    /// Substitutes `images[i]` for `x_{i+1}`; the result lives in the ring of
    /// the images.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: images.len(),
            });
        }
        let target = images.first().map_or(0, |p| p.nvars);
        if let Some(bad) = images.iter().find(|p| p.nvars != target) {
            return Err(Error::DimensionMismatch {
                expected: target,
                found: bad.nvars,
            });
        }
        let mut max_exp = vec![0u32; self.nvars];
        for m in self.terms.keys() {
            for (slot, &e) in max_exp.iter_mut().zip(&m.0) {
                *slot = (*slot).max(e);
            }
        }
        let powers: Vec<Vec<Polynomial>> = images
            .iter()
            .zip(&max_exp)
            .map(|(p, &top)| {
                let mut v = Vec::with_capacity(top as usize + 1);
                v.push(Self::one(target));
                for k in 1..=top as usize {
                    let next = &v[k - 1] * p;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut prod = Self::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    prod = &prod * &powers[i][e as usize];
                }
            }
            for (mm, cc) in prod.terms {
                *acc.entry(mm).or_insert_with(BigRational::zero) += cc;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Polynomial {
            nvars: target,
            terms: acc,
        })
    }

    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// Appends `k` fresh variables after the existing ones.
    pub fn extend_vars(&self, k: usize) -> Polynomial {
        self.embed(self.nvars + k, &(0..self.nvars).collect::<Vec<_>>())
    }

    /// Re-indexes variables: `x_{i+1}` becomes `x_{positions[i]+1}` in a ring
    /// with `nvars` variables.
    pub fn embed(&self, nvars: usize, positions: &[usize]) -> Polynomial {
        assert_eq!(positions.len(), self.nvars);
        let mut out = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &x) in m.0.iter().enumerate() {
                e[positions[i]] += x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Drops variables the polynomial does not use, keeping `keep` in order.
    /// Returns `None` if a dropped variable occurs.
    pub fn restrict(&self, keep: &[usize]) -> Option<Polynomial> {
        let mut out = Self::zero(keep.len());
        for (m, c) in &self.terms {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 && !keep.contains(&i) {
                    return None;
                }
            }
            out.add_term(Monomial(keep.iter().map(|&i| m.0[i]).collect()), c.clone());
        }
        Some(out)
    }

    /// Cancels formal inverse pairs: for each `(t, s)` the relation `t*s = 1`
    /// is applied to every monomial.
    pub fn reduce_laurent(&self, pairs: &[(usize, usize)]) -> Polynomial {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            for &(t, s) in pairs {
                let k = e[t].min(e[s]);
                e[t] -= k;
                e[s] -= k;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Exact division by a monomial; `None` if some term is not divisible.
    pub fn div_monomial(&self, mono: &Monomial) -> Option<Polynomial> {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.div(mono)?, c.clone());
        }
        Some(out)
    }

    /// The polynomial whose `d`-th power is `self`, normalized to a positive
    /// leading coefficient when `d` is even.
    pub fn dth_root(&self, d: u32) -> Result<Polynomial> {
        root::dth_root(self, d)
    }

    pub fn parse(text: &str, nvars: usize) -> Result<Polynomial> {
        parse_polynomial(text, nvars)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

fn check_same_ring(a: &Polynomial, b: &Polynomial) {
    assert_eq!(
        a.nvars, b.nvars,
        "polynomials from rings with different numbers of variables"
    );
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        check_same_ring(self, rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        check_same_ring(self, rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

/// Coefficients scaled to integers by the lcm of their denominators.
fn integer_form(p: &Polynomial) -> (Vec<(&Monomial, BigInt)>, BigInt) {
    let lcm = p
        .terms
        .values()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = p
        .terms
        .iter()
        .map(|(m, c)| (m, c.numer() * (&lcm / c.denom())))
        .collect();
    (ints, lcm)
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        check_same_ring(self, rhs);
        let (a, la) = integer_form(self);
        let (b, lb) = integer_form(rhs);
        let mut acc: std::collections::HashMap<Monomial, BigInt> =
            std::collections::HashMap::with_capacity(a.len() * b.len());
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                *acc.entry(ma.mul(mb)).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        let den = la * lb;
        Polynomial {
            nvars: self.nvars,
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m, BigRational::new(c, den.clone())))
                .collect(),
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    c: String,
    e: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    nvars: usize,
    terms: Vec<TermJson>,
}

impl From<Polynomial> for PolynomialJson {
    fn from(p: Polynomial) -> Self {
        PolynomialJson {
            nvars: p.nvars,
            terms: p
                .terms()
                .map(|(m, c)| TermJson {
                    c: c.to_string(),
                    e: m.0.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<PolynomialJson> for Polynomial {
    type Error = Error;
    fn try_from(j: PolynomialJson) -> Result<Self> {
        if j.nvars == 0 {
            return Err(Error::InvalidArgument("nvars must be positive".into()));
        }
        let mut p = Polynomial::zero(j.nvars);
        for t in j.terms {
            let c = parse_rational(&t.c)?;
            if c.is_zero() {
                return Err(Error::InvalidArgument("zero coefficient in term list".into()));
            }
            if t.e.len() != j.nvars {
                return Err(Error::DimensionMismatch {
                    expected: j.nvars,
                    found: t.e.len(),
                });
            }
            let m = Monomial(t.e);
            if p.terms.contains_key(&m) {
                return Err(Error::InvalidArgument(format!("duplicate monomial {m}")));
            }
            p.terms.insert(m, c);
        }
        Ok(p)
    }
}

/// Parses `a` or `a/b` with optional leading sign.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse {
        pos: 0,
        msg: format!("invalid rational literal {s:?}"),
    };
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Serde adapter writing a rational as the string `"a"` or `"a/b"`.
pub mod rational_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(de)?;
        super::parse_rational(&text).map_err(serde::de::Error::custom)
    }
}
