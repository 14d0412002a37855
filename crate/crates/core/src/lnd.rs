//! Derivations `D = Σ a_i ∂/∂x_i` of the polynomial ring, their local
//! nilpotency, exponentials and descent to invariant rings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};

use crate::endo::PolyMap;
use crate::equilift::split_into_generators;
use crate::error::{Error, Result};
use crate::linalg::{nullspace, rref, Matrix};
use crate::poly::{Monomial, Polynomial};
use crate::quotient::veronese_monomials;

/// Iteration budget used when a derivation arrives without a certificate.
pub const DEFAULT_NILPOTENCY_BOUND: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    /// Variable order, first to last, in which each coefficient of
    /// `∂/∂x_{order[j]}` only involves the variables after it.
    Triangular(Vec<usize>),
    /// Every `D^k(x_i)` vanished for some `k ≤ bound`.
    BoundedNilpotent(u32),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    nvars: usize,
    coeffs: Vec<Polynomial>,
    cert: Certification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    CertifiedYes { order: Vec<usize> },
    YesUpToBound { bound: u32 },
    /// `D` acts on the span of the iterates of `x_{variable+1}` with a
    /// nonzero eigenvalue.
    No { variable: usize, witness: String },
    Unknown,
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::CertifiedYes { .. } | Verdict::YesUpToBound { .. })
    }
}

impl Derivation {
    /// Builds a derivation and attaches a triangular certificate when one exists.
    pub fn new(coeffs: Vec<Polynomial>) -> Result<Self> {
        let nvars = coeffs.len();
        if nvars == 0 {
            return Err(Error::InvalidArgument("a derivation needs at least one variable".into()));
        }
        if let Some(bad) = coeffs.iter().find(|c| c.nvars() != nvars) {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: bad.nvars(),
            });
        }
        let cert = match triangular_order(&coeffs) {
            Some(order) => Certification::Triangular(order),
            None => Certification::Unknown,
        };
        Ok(Derivation { nvars, coeffs, cert })
    }

    pub fn parse(coeffs: &[&str], nvars: usize) -> Result<Self> {
        if coeffs.len() != nvars {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: coeffs.len(),
            });
        }
        let coeffs = coeffs
            .iter()
            .map(|c| Polynomial::parse(c, nvars))
            .collect::<Result<Vec<_>>>()?;
        Derivation::new(coeffs)
    }

    pub fn zero(nvars: usize) -> Self {
        Derivation::new(vec![Polynomial::zero(nvars); nvars]).expect("valid shape")
    }

    /// `∂/∂x_{i+1}`.
    pub fn partial(nvars: usize, i: usize) -> Self {
        let mut coeffs = vec![Polynomial::zero(nvars); nvars];
        coeffs[i] = Polynomial::one(nvars);
        Derivation::new(coeffs).expect("valid shape")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn certification(&self) -> &Certification {
        &self.cert
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial::is_zero)
    }

    /// Runs the nilpotency test and records a positive outcome.
    pub fn certify(&mut self, bound: u32) -> Verdict {
        let v = is_locally_nilpotent(self, bound);
        match &v {
            Verdict::CertifiedYes { order } => self.cert = Certification::Triangular(order.clone()),
            Verdict::YesUpToBound { bound } => self.cert = Certification::BoundedNilpotent(*bound),
            _ => {}
        }
        v
    }

    /// Same derivation on a ring with `k` extra variables that it kills.
    pub fn extend_vars(&self, k: usize) -> Derivation {
        let n = self.nvars + k;
        let mut coeffs: Vec<Polynomial> = self.coeffs.iter().map(|c| c.extend_vars(k)).collect();
        coeffs.resize(n, Polynomial::zero(n));
        let cert = match &self.cert {
            Certification::Triangular(order) => {
                let mut o: Vec<usize> = order.clone();
                o.extend(self.nvars..n);
                Certification::Triangular(o)
            }
            other => other.clone(),
        };
        Derivation { nvars: n, coeffs, cert }
    }

    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        derive(self, p)
    }
}

impl std::fmt::Display for Derivation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                if c.num_terms() > 1 {
                    format!("({c})*d/dx{}", i + 1)
                } else {
                    format!("{c}*d/dx{}", i + 1)
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Greedy search for a triangular order: the last variable needs a constant
/// coefficient, and each earlier one may depend only on variables already
/// placed after it.
fn triangular_order(coeffs: &[Polynomial]) -> Option<Vec<usize>> {
    let n = coeffs.len();
    let mut placed: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    while placed.len() < n {
        let next = (0..n).find(|&i| {
            !used[i] && (0..n).all(|j| !coeffs[i].depends_on(j) || (used[j] && j != i))
        })?;
        used[next] = true;
        placed.push(next);
    }
    placed.reverse();
    Some(placed)
}

pub fn derive(d: &Derivation, p: &Polynomial) -> Result<Polynomial> {
    if p.nvars() != d.nvars {
        return Err(Error::DimensionMismatch {
            expected: d.nvars,
            found: p.nvars(),
        });
    }
    let mut out = Polynomial::zero(d.nvars);
    for (i, c) in d.coeffs.iter().enumerate() {
        if !c.is_zero() && p.depends_on(i) {
            out = &out + &(c * &p.derivative(i));
        }
    }
    Ok(out)
}

fn coefficient_vectors(polys: &[Polynomial]) -> (Vec<Monomial>, Matrix) {
    let mut monos: Vec<Monomial> = polys
        .iter()
        .flat_map(|p| p.terms().map(|(m, _)| m.clone()))
        .collect();
    monos.sort();
    monos.dedup();
    let rows = monos
        .iter()
        .map(|m| polys.iter().map(|p| p.coeff(m)).collect())
        .collect();
    (monos, rows)
}

/// The first linear dependency `D^m(x) = Σ_{j<m} c_j D^j(x)` among the
/// iterates, if it appears within `bound` steps. Any nonzero `c_j` means `D`
/// is not nilpotent on that finite-dimensional invariant span.
fn first_dependency(iterates: &[Polynomial]) -> Option<Vec<BigRational>> {
    let m = iterates.len() - 1;
    let (_, mat) = coefficient_vectors(iterates);
    let ns = nullspace(&mat, iterates.len());
    let v = ns.into_iter().find(|v| !v[m].is_zero())?;
    let scale = -v[m].clone();
    Some(v[..m].iter().map(|c| c / &scale).collect())
}

pub fn is_locally_nilpotent(d: &Derivation, bound: u32) -> Verdict {
    if let Some(order) = triangular_order(&d.coeffs) {
        return Verdict::CertifiedYes { order };
    }
    let mut all_vanish = true;
    for i in 0..d.nvars {
        let mut iterates = vec![Polynomial::var(d.nvars, i)];
        let mut vanished = false;
        for _ in 0..bound {
            let next = derive(d, iterates.last().unwrap()).expect("same ring");
            if next.is_zero() {
                vanished = true;
                break;
            }
            iterates.push(next);
            if let Some(c) = first_dependency(&iterates) {
                if c.iter().any(|x| !x.is_zero()) {
                    let k = iterates.len() - 1;
                    return Verdict::No {
                        variable: i,
                        witness: format!(
                            "D^{k}(x{}) is a nonzero combination of lower iterates",
                            i + 1
                        ),
                    };
                }
            }
        }
        all_vanish &= vanished;
    }
    if all_vanish {
        Verdict::YesUpToBound { bound }
    } else {
        Verdict::Unknown
    }
}

fn ensure_nilpotent(d: &Derivation) -> Result<()> {
    match d.cert {
        Certification::Triangular(_) | Certification::BoundedNilpotent(_) => Ok(()),
        Certification::Unknown => {
            if is_locally_nilpotent(d, DEFAULT_NILPOTENCY_BOUND).is_yes() {
                Ok(())
            } else {
                Err(Error::NotLnd)
            }
        }
    }
}

fn factorial(k: u32) -> BigRational {
    BigRational::from_integer((1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j)))
}

/// `Σ_k t^k D^k(p) / k!` for a locally nilpotent `D` (on the ring of `p`).
fn exp_series(d: &Derivation, t: &Polynomial, p: &Polynomial) -> Result<Polynomial> {
    let mut out = Polynomial::zero(d.nvars);
    let mut term = p.clone();
    let mut tk = Polynomial::one(d.nvars);
    let mut k = 0u32;
    while !term.is_zero() {
        out = &out + &(&tk * &term).scale(&(BigRational::one() / factorial(k)));
        term = derive(d, &term)?;
        tk = &tk * t;
        k += 1;
        if k > 4096 {
            return Err(Error::Internal("exponential series did not terminate".into()));
        }
    }
    Ok(out)
}

/// The automorphism `exp(tD)`: `x_i ↦ Σ_k t^k D^k(x_i)/k!`.
///
/// `t` may live in a ring with extra trailing variables (formal parameters),
/// in which case `D` is extended to kill them and the result is a map on the
/// larger ring fixing the parameters. `t` must lie in the kernel of `D`.
pub fn exp_action(d: &Derivation, t: &Polynomial) -> Result<PolyMap> {
    ensure_nilpotent(d)?;
    if t.nvars() < d.nvars {
        return Err(Error::DimensionMismatch {
            expected: d.nvars,
            found: t.nvars(),
        });
    }
    let big = d.extend_vars(t.nvars() - d.nvars);
    if !derive(&big, t)?.is_zero() {
        return Err(Error::InvalidArgument("t must be annihilated by D".into()));
    }
    let comps = (0..big.nvars)
        .map(|i| exp_series(&big, t, &Polynomial::var(big.nvars, i)))
        .collect::<Result<Vec<_>>>()?;
    PolyMap::new(big.nvars, comps)
}

/// `exp(sD)` at a rational time.
pub fn exp_at(d: &Derivation, s: &BigRational) -> Result<PolyMap> {
    exp_action(d, &Polynomial::constant(d.nvars, s.clone()))
}

/// A one-parameter unipotent group `t ↦ exp(tD)`.
#[derive(Clone, Debug)]
pub struct OneParamGroup {
    generator: Derivation,
}

impl OneParamGroup {
    pub fn new(generator: Derivation) -> Result<Self> {
        ensure_nilpotent(&generator)?;
        Ok(OneParamGroup { generator })
    }

    pub fn generator(&self) -> &Derivation {
        &self.generator
    }

    /// `exp(tD)` with `t` the extra variable `x_{n+1}`.
    pub fn formal(&self) -> PolyMap {
        let n = self.generator.nvars;
        exp_action(&self.generator, &Polynomial::var(n + 1, n)).expect("certified generator")
    }

    /// `exp(tD)` with the given parameter expression.
    pub fn at(&self, t: &Polynomial) -> Result<PolyMap> {
        exp_action(&self.generator, t)
    }
}

/// The modification `f·D` by an invariant `f`.
pub fn modify(f: &Polynomial, d: &Derivation) -> Result<Derivation> {
    if !derive(d, f)?.is_zero() {
        return Err(Error::NotInvariant);
    }
    let mut out = Derivation::new(d.coeffs.iter().map(|c| f * c).collect())?;
    if out.cert == Certification::Unknown && d.cert != Certification::Unknown {
        out.certify(DEFAULT_NILPOTENCY_BOUND);
    }
    Ok(out)
}

/// Row-reduces polynomials to a basis with distinct monic leading terms,
/// listed by ascending leading monomial.
pub fn echelon_basis(polys: &[Polynomial], nvars: usize) -> Vec<Polynomial> {
    if polys.is_empty() {
        return Vec::new();
    }
    let (mut monos, _) = coefficient_vectors(polys);
    monos.reverse();
    let mut mat: Matrix = polys
        .iter()
        .map(|p| monos.iter().map(|m| p.coeff(m)).collect())
        .collect();
    let pivots = rref(&mut mat);
    let mut out: Vec<Polynomial> = mat
        .iter()
        .take(pivots.len())
        .map(|row| {
            Polynomial::from_terms(
                nvars,
                monos
                    .iter()
                    .zip(row)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(m, c)| (c.clone(), m.exponents().to_vec())),
            )
            .expect("well-formed terms")
        })
        .collect();
    out.reverse();
    out
}

/// A basis of `{p : deg p ≤ bound, D(p) = 0}`.
pub fn kernel_basis_up_to_degree(d: &Derivation, bound: u32) -> Vec<Polynomial> {
    let n = d.nvars;
    let monos = Monomial::all_up_to_degree(n, bound);
    let images: Vec<Polynomial> = monos
        .iter()
        .map(|m| derive(d, &Polynomial::term(m.clone(), BigRational::one())).expect("same ring"))
        .collect();
    let (_, mat) = coefficient_vectors(&images);
    let ns = if mat.is_empty() {
        (0..monos.len())
            .map(|j| {
                let mut v = vec![BigRational::zero(); monos.len()];
                v[j] = BigRational::one();
                v
            })
            .collect()
    } else {
        nullspace(&mat, monos.len())
    };
    let kernel: Vec<Polynomial> = ns
        .iter()
        .map(|v| {
            Polynomial::from_terms(
                n,
                monos
                    .iter()
                    .zip(v)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(m, c)| (c.clone(), m.exponents().to_vec())),
            )
            .expect("well-formed terms")
        })
        .collect();
    echelon_basis(&kernel, n)
}

/// The derivation induced on the invariant ring of `μ_d`, recorded by its
/// values on the degree-`d` monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientDerivationTable {
    pub d: u32,
    pub n: usize,
    pub images: BTreeMap<Monomial, Polynomial>,
}

impl QuotientDerivationTable {
    pub fn is_zero(&self) -> bool {
        self.images.values().all(Polynomial::is_zero)
    }

    /// Applies the induced derivation to an invariant polynomial using only
    /// the table and the Leibniz rule.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.nvars() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.nvars(),
            });
        }
        let mut out = Polynomial::zero(self.n);
        for (m, c) in p.terms() {
            if m.degree() % self.d != 0 {
                return Err(Error::NotEquivariant {
                    d: self.d,
                    reason: format!("monomial {m} is not invariant"),
                });
            }
            let gens = split_into_generators(m, self.d);
            for j in 0..gens.len() {
                let mut rest = Monomial::one(self.n);
                for (l, g) in gens.iter().enumerate() {
                    if l != j {
                        rest = rest.mul(g);
                    }
                }
                out = &out + &self.images[&gens[j]].mul_monomial(&rest, c);
            }
        }
        Ok(out)
    }

    /// Images of the generators under `exp(tD)` with `t = x_{n+1}`, computed
    /// from the table alone.
    pub fn exp_formal(&self) -> Result<BTreeMap<Monomial, Polynomial>> {
        let n = self.n;
        let t = Polynomial::var(n + 1, n);
        self.images
            .keys()
            .map(|g| {
                let mut term = Polynomial::term(g.clone(), BigRational::one());
                let mut out = Polynomial::zero(n + 1);
                let mut tk = Polynomial::one(n + 1);
                let mut k = 0u32;
                while !term.is_zero() {
                    let piece = (&tk * &term.extend_vars(1)).scale(&(BigRational::one() / factorial(k)));
                    out = &out + &piece;
                    term = self.apply(&term)?;
                    tk = &tk * &t;
                    k += 1;
                    if k > 4096 {
                        return Err(Error::Internal("exponential series did not terminate".into()));
                    }
                }
                Ok((g.clone(), out))
            })
            .collect()
    }
}

impl Serialize for QuotientDerivationTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let images: Vec<(String, &Polynomial)> =
            self.images.iter().rev().map(|(m, p)| (m.to_string(), p)).collect();
        struct Ordered<'a>(Vec<(String, &'a Polynomial)>);
        impl Serialize for Ordered<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (k, v) in &self.0 {
                    map.serialize_entry(k, v)?;
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("d", &self.d)?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("images", &Ordered(images))?;
        map.end()
    }
}

/// Restricts an equivariant locally nilpotent derivation to the invariants.
pub fn descend_lnd(d: &Derivation, order: u32) -> Result<QuotientDerivationTable> {
    if order == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    ensure_nilpotent(d)?;
    for (i, c) in d.coeffs.iter().enumerate() {
        if let Some(k) = c.degree_support().into_iter().find(|k| k % order != 1 % order) {
            return Err(Error::NotEquivariant {
                d: order,
                reason: format!("coefficient of d/dx{} has degree {k}", i + 1),
            });
        }
    }
    let images = veronese_monomials(order, d.nvars)
        .into_iter()
        .map(|m| {
            let img = derive(d, &Polynomial::term(m.clone(), BigRational::one()))?;
            Ok((m, img))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(QuotientDerivationTable {
        d: order,
        n: d.nvars,
        images,
    })
}

#[derive(Serialize, Deserialize)]
struct DerivationJson {
    nvars: usize,
    coeffs: Vec<Polynomial>,
    cert: String,
}

impl Serialize for Derivation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let cert = match self.cert {
            Certification::Triangular(_) => "triangular",
            Certification::BoundedNilpotent(_) => "bounded",
            Certification::Unknown => "unknown",
        };
        DerivationJson {
            nvars: self.nvars,
            coeffs: self.coeffs.clone(),
            cert: cert.into(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Derivation {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = DerivationJson::deserialize(de)?;
        if j.coeffs.len() != j.nvars {
            return Err(D::Error::custom("coeffs must have length nvars"));
        }
        let mut out = Derivation::new(j.coeffs).map_err(D::Error::custom)?;
        match (j.cert.as_str(), &out.cert) {
            ("triangular", Certification::Triangular(_)) | ("unknown", _) => {}
            ("triangular", _) => return Err(D::Error::custom("no triangular order exists")),
            ("bounded", _) => {
                if !out.certify(DEFAULT_NILPOTENCY_BOUND).is_yes() {
                    return Err(D::Error::custom("bounded certificate could not be reproduced"));
                }
            }
            (other, _) => return Err(D::Error::custom(format!("unknown cert {other:?}"))),
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilift::generator_images;
    use crate::poly::rat;

    fn der(c: &[&str]) -> Derivation {
        Derivation::parse(c, c.len()).unwrap()
    }

    fn p(s: &str, n: usize) -> Polynomial {
        Polynomial::parse(s, n).unwrap()
    }

    #[test]
    fn derive_examples() {
        assert_eq!(derive(&der(&["x2", "0"]), &p("x1^2", 2)).unwrap(), p("2*x1*x2", 2));
        assert!(derive(&der(&["x1*x2", "x1"]), &p("5", 2)).unwrap().is_zero());
        assert_eq!(derive(&der(&["1"]), &p("x1^3", 1)).unwrap(), p("3*x1^2", 1));
        assert!(derive(&der(&["1"]), &p("x1", 2)).is_err());
    }

    #[test]
    fn nilpotency_verdicts() {
        assert_eq!(
            is_locally_nilpotent(&der(&["x2", "0"]), 10),
            Verdict::CertifiedYes { order: vec![0, 1] }
        );
        assert!(matches!(
            is_locally_nilpotent(&der(&["x1", "0"]), 10),
            Verdict::No { variable: 0, .. }
        ));
        assert!(matches!(
            is_locally_nilpotent(&der(&["x2^2", "1"]), 10),
            Verdict::CertifiedYes { .. }
        ));
        // rotation-like: D(x1) = x2, D(x2) = -x1 has eigenvalues ±i
        assert!(matches!(
            is_locally_nilpotent(&der(&["x2", "-x1"]), 10),
            Verdict::No { .. }
        ));
    }

    #[test]
    fn conjugated_triangular_is_nilpotent_up_to_bound() {
        // D = x2 d/dx1 conjugated by the shear (x1, x2 + x1^2)
        // is not triangular in the given coordinates but is still nilpotent.
        let d = der(&["x2 - x1^2", "2*x1*(x2 - x1^2)"]);
        assert_eq!(triangular_order(d.coeffs()), None);
        assert!(matches!(is_locally_nilpotent(&d, 10), Verdict::YesUpToBound { .. }));
    }

    #[test]
    fn exp_examples() {
        let d = der(&["x2", "0"]);
        let t = Polynomial::var(3, 2);
        let e = exp_action(&d, &t).unwrap();
        assert_eq!(e, PolyMap::parse(&["x1 + x3*x2", "x2", "x3"], 3).unwrap());
        let e = exp_at(&der(&["x2^2", "0"]), &rat(1)).unwrap();
        assert_eq!(e, PolyMap::parse(&["x1 + x2^2", "x2"], 2).unwrap());
        assert!(exp_at(&Derivation::zero(3), &rat(7)).unwrap().is_identity());
        assert!(matches!(exp_at(&der(&["x1", "0"]), &rat(1)), Err(Error::NotLnd)));
    }

    #[test]
    fn exp_with_nonlinear_flow() {
        // D = x2^2 d/dx1 + d/dx2: x1 ↦ x1 + t x2^2 + t^2 x2 + t^3/3
        let e = exp_at(&der(&["x2^2", "1"]), &rat(1)).unwrap();
        assert_eq!(e, PolyMap::parse(&["x1 + x2^2 + x2 + 1/3", "x2 + 1"], 2).unwrap());
    }

    #[test]
    fn one_parameter_law() {
        let d = der(&["x2^2", "x3", "0"]);
        let s = Polynomial::var(5, 3);
        let t = Polynomial::var(5, 4);
        let es = exp_action(&d, &s).unwrap();
        let et = exp_action(&d, &t).unwrap();
        let est = exp_action(&d, &(&s + &t)).unwrap();
        assert_eq!(es.compose(&et).unwrap(), est);
        let em = exp_action(&d, &(-&t)).unwrap();
        assert!(et.compose(&em).unwrap().is_identity());
    }

    #[test]
    fn modification_examples() {
        let d = der(&["1", "0"]);
        let f = p("x2^2", 2);
        let m = modify(&f, &d).unwrap();
        assert_eq!(m, der(&["x2^2", "0"]));
        let g = OneParamGroup::new(m).unwrap();
        let formal = g.formal();
        assert_eq!(formal, PolyMap::parse(&["x1 + x3*x2^2", "x2", "x3"], 3).unwrap());
        // (f·λ)(s)x = λ(f(x)s)x at sample points and times
        for (a, b) in [(1, 2), (0, 3), (5, 1)] {
            for s in [-2i64, 1, 3] {
                let pt = vec![rat(a), rat(b)];
                let lhs = exp_at(g.generator(), &rat(s)).unwrap().evaluate(&pt).unwrap();
                let fs = f.evaluate(&pt).unwrap() * rat(s);
                let rhs = exp_at(&d, &fs).unwrap().evaluate(&pt).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        let any = der(&["x2", "x3", "0"]);
        assert_eq!(modify(&Polynomial::one(3), &any).unwrap(), any);
        assert!(matches!(modify(&p("x1", 2), &d), Err(Error::NotInvariant)));
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis_up_to_degree(&der(&["x2", "0"]), 3);
        let s: Vec<String> = k.iter().map(|p| p.to_string()).collect();
        assert_eq!(s, vec!["1", "x2", "x2^2", "x2^3"]);
        let k = kernel_basis_up_to_degree(&Derivation::zero(3), 1);
        assert_eq!(k.len(), 4);
        let k = kernel_basis_up_to_degree(&Derivation::partial(2, 0), 2);
        let s: Vec<String> = k.iter().map(|p| p.to_string()).collect();
        assert_eq!(s, vec!["1", "x2", "x2^2"]);
    }

    #[test]
    fn kernel_of_three_variable_shear() {
        // D = x2 d/dx1 + x3 d/dx2 has the invariant x2^2 - 2 x1 x3 in degree 2
        let k = kernel_basis_up_to_degree(&der(&["x2", "x3", "0"]), 2);
        assert_eq!(k.len(), 4);
        let target = p("x2^2 - 2*x1*x3", 3);
        let mut all = k.clone();
        all.push(target);
        assert_eq!(echelon_basis(&all, 3).len(), 4);
    }

    #[test]
    fn descend_examples() {
        let d = der(&["x2^3", "0"]);
        let table = descend_lnd(&d, 2).unwrap();
        let img = |e: [u32; 2]| table.images[&Monomial::new(e.to_vec())].clone();
        assert_eq!(img([2, 0]), p("2*x1*x2^3", 2));
        assert_eq!(img([1, 1]), p("x2^4", 2));
        assert!(img([0, 2]).is_zero());
        assert!(descend_lnd(&Derivation::zero(2), 2).unwrap().is_zero());
        assert!(matches!(
            descend_lnd(&der(&["x2^2", "0"]), 2),
            Err(Error::NotEquivariant { .. })
        ));
    }

    #[test]
    fn descended_exponential_matches() {
        for (coeffs, d) in [
            (vec!["x2^3", "0"], 2u32),
            (vec!["x2^4 + x2", "0"], 3),
            (vec!["x2^3 + x3^3", "x3^3", "0"], 2),
        ] {
            let der_ = Derivation::parse(&coeffs, coeffs.len()).unwrap();
            let n = der_.nvars();
            let table = descend_lnd(&der_, d).unwrap();
            let group = OneParamGroup::new(der_).unwrap();
            let lhs = generator_images(&group.formal(), d, n).unwrap();
            let rhs = table.exp_formal().unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn json_round_trip() {
        let d = der(&["x2", "0"]);
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(
            s,
            r#"{"nvars":2,"coeffs":[{"nvars":2,"terms":[{"c":"1","e":[0,1]}]},{"nvars":2,"terms":[]}],"cert":"triangular"}"#
        );
        let back: Derivation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        let bad = s.replace(r#""e":[0,1]"#, r#""e":[1,0]"#);
        assert!(serde_json::from_str::<Derivation>(&bad).is_err());
    }
}
