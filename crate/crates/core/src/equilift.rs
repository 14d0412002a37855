//! Equivariance under scalar multiplication by `d`-th roots of unity, descent
//! of equivariant automorphisms to the quotient `A^n/μ_d`, and the algebraic
//! lift back.
//!
//! Roots of unity never appear as coefficients. A diagonal map
//! `(ξ^{e_1} x_1, ..., ξ^{e_n} x_n)` for a fixed formal primitive root `ξ` is
//! a [`MuScalar`] holding the exponents modulo `d`.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};

use crate::endo::{Automorphism, PolyMap};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};
use crate::quotient::veronese_monomials;

/// Diagonal root-of-unity map, exponents reduced mod `d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MuScalar {
    pub d: u32,
    pub exponents: Vec<u32>,
}

impl MuScalar {
    pub fn new(d: u32, exponents: Vec<i64>) -> Self {
        MuScalar {
            d,
            exponents: exponents
                .into_iter()
                .map(|e| e.rem_euclid(d as i64) as u32)
                .collect(),
        }
    }

    pub fn scalar(d: u32, n: usize, e: u32) -> Self {
        MuScalar {
            d,
            exponents: vec![e % d; n],
        }
    }

    pub fn is_scalar(&self) -> bool {
        self.exponents.windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Exponent of `ξ` picked up by the monomial `x^α`.
    pub fn weight_on(&self, m: &Monomial) -> u32 {
        let s: u64 = m
            .exponents()
            .iter()
            .zip(&self.exponents)
            .map(|(&a, &e)| a as u64 * e as u64)
            .sum();
        (s % self.d as u64) as u32
    }

    /// True when `ξ^{exponent}` is a rational number (only `±1`).
    fn rational_sign(d: u32, e: u32) -> Option<i64> {
        if e % d == 0 {
            Some(1)
        } else if d % 2 == 0 && e == d / 2 {
            Some(-1)
        } else {
            None
        }
    }
}

/// True iff every component has degree support in `{kd + 1}`.
pub fn is_mu_d_equivariant(f: &PolyMap, d: u32) -> bool {
    is_mu_d_equivariant_in(f, d, f.nvars())
}

/// Equivariance test for maps whose last variables are formal parameters:
/// only the first `space` variables count towards degrees.
pub fn is_mu_d_equivariant_in(f: &PolyMap, d: u32, space: usize) -> bool {
    assert!(d >= 1);
    f.components()[..space].iter().all(|c| {
        c.partial_degree_support(space)
            .into_iter()
            .all(|k| k % d == 1 % d)
    })
}

/// An automorphism of `A^n/μ_d`, given by the images of the degree-`d`
/// monomials that generate the invariant ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientAuto {
    d: u32,
    n: usize,
    images: BTreeMap<Monomial, Polynomial>,
    provenance: Option<Automorphism>,
}

impl QuotientAuto {
    /// Builds a quotient automorphism from generator images, checking that
    /// every generator has an image in the invariant ring and that the
    /// quadratic Veronese relations hold among the images.
    pub fn from_images(d: u32, n: usize, images: BTreeMap<Monomial, Polynomial>) -> Result<Self> {
        if d == 0 || n == 0 {
            return Err(Error::InvalidArgument("d and n must be positive".into()));
        }
        let gens = veronese_monomials(d, n);
        if images.len() != gens.len() {
            return Err(Error::NotLiftable(format!(
                "expected images of {} generators, found {}",
                gens.len(),
                images.len()
            )));
        }
        for g in &gens {
            let img = images
                .get(g)
                .ok_or_else(|| Error::NotLiftable(format!("missing image of {g}")))?;
            if img.nvars() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: img.nvars(),
                });
            }
            if img.degree_support().iter().any(|k| k % d != 0) {
                return Err(Error::NotLiftable(format!(
                    "image of {g} is not in the invariant ring"
                )));
            }
        }
        let q = QuotientAuto {
            d,
            n,
            images,
            provenance: None,
        };
        q.check_relations()?;
        Ok(q)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn images(&self) -> &BTreeMap<Monomial, Polynomial> {
        &self.images
    }

    pub fn image(&self, m: &Monomial) -> Option<&Polynomial> {
        self.images.get(m)
    }

    pub fn provenance(&self) -> Option<&Automorphism> {
        self.provenance.as_ref()
    }

    /// Checks `φ(a)φ(b) = φ(c)φ(e)` whenever `ab = ce` among generators.
    fn check_relations(&self) -> Result<()> {
        let gens: Vec<&Monomial> = self.images.keys().collect();
        let mut by_product: BTreeMap<Monomial, (Polynomial, &Monomial, &Monomial)> =
            BTreeMap::new();
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i..] {
                let prod = &self.images[*a] * &self.images[*b];
                match by_product.get(&a.mul(b)) {
                    Some((p, c, e)) => {
                        if *p != prod {
                            return Err(Error::NotLiftable(format!(
                                "images violate the relation {a}*{b} = {c}*{e}"
                            )));
                        }
                    }
                    None => {
                        by_product.insert(a.mul(b), (prod, a, b));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().all(|(m, p)| *p == Polynomial::term(m.clone(), BigRational::one()))
    }

    /// Pull-back of an invariant polynomial: each monomial of degree `dk` is
    /// split into `k` generators whose images are multiplied.
    pub fn pullback(&self, p: &Polynomial) -> Result<Polynomial> {
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
            let mut prod = Polynomial::constant(self.n, c.clone());
            for g in split_into_generators(m, self.d) {
                prod = &prod * &self.images[&g];
            }
            out = &out + &prod;
        }
        Ok(out)
    }

    /// `self ∘ other` as maps of the quotient.
    pub fn compose(&self, other: &QuotientAuto) -> Result<QuotientAuto> {
        if self.d != other.d || self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let images = self
            .images
            .iter()
            .map(|(m, img)| Ok((m.clone(), other.pullback(img)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let provenance = match (&self.provenance, &other.provenance) {
            (Some(a), Some(b)) => Some(a.compose(b)?),
            _ => None,
        };
        Ok(QuotientAuto {
            d: self.d,
            n: self.n,
            images,
            provenance,
        })
    }
}

/// Splits a monomial of degree `dk` into `k` degree-`d` monomials, greedily
/// from the first variable.
pub(crate) fn split_into_generators(m: &Monomial, d: u32) -> Vec<Monomial> {
    let mut rest: Vec<u32> = m.exponents().to_vec();
    let k = m.degree() / d;
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        let mut g = vec![0u32; rest.len()];
        let mut need = d;
        for (slot, r) in g.iter_mut().zip(rest.iter_mut()) {
            let take = need.min(*r);
            *slot += take;
            *r -= take;
            need -= take;
            if need == 0 {
                break;
            }
        }
        out.push(Monomial::new(g));
    }
    out
}

/// Images of the degree-`d` monomials in the first `n` variables under
/// pull-back by `f`. Extra variables of `f` are carried along as parameters.
pub fn generator_images(f: &PolyMap, d: u32, n: usize) -> Result<BTreeMap<Monomial, Polynomial>> {
    let total = f.nvars();
    veronese_monomials(d, n)
        .into_iter()
        .map(|m| {
            let mut e = m.exponents().to_vec();
            e.resize(total, 0);
            let img = f.pullback(&Polynomial::term(Monomial::new(e), BigRational::one()))?;
            Ok((m, img))
        })
        .collect()
}

/// The quotient automorphism induced by an equivariant automorphism.
pub fn descend(f: &Automorphism, d: u32) -> Result<QuotientAuto> {
    if !is_mu_d_equivariant(f.map(), d) {
        return Err(Error::NotEquivariant {
            d,
            reason: "some component has a degree not congruent to 1".into(),
        });
    }
    let n = f.nvars();
    Ok(QuotientAuto {
        d,
        n,
        images: generator_images(f.map(), d, n)?,
        provenance: Some(f.clone()),
    })
}

/// Result of lifting a quotient automorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lift {
    /// The rational representative.
    pub map: PolyMap,
    /// Root-of-unity exponents of each component relative to the
    /// positively normalized `d`-th roots of the images of `x_i^d`.
    pub exponents: MuScalar,
    /// Every lift is `ξ^e · map` for one of these scalars.
    pub ambiguity: Vec<MuScalar>,
}

/// Lifts an automorphism of the quotient to one of affine space.
pub fn lift(q: &QuotientAuto) -> Result<Lift> {
    let (d, n) = (q.d, q.n);
    let pure = |i: usize| {
        let mut e = vec![0; n];
        e[i] = d;
        Monomial::new(e)
    };
    let mut roots = Vec::with_capacity(n);
    for i in 0..n {
        let img = &q.images[&pure(i)];
        if img.is_zero() {
            return Err(Error::NotLiftable(format!("image of x{}^{d} is zero", i + 1)));
        }
        let r = img.dth_root(d).map_err(|e| match e {
            Error::NotAPower { .. } => {
                Error::NotLiftable(format!("image of x{}^{d} is not a {d}-th power", i + 1))
            }
            other => other,
        })?;
        roots.push(r);
    }

    // Relative exponents from the mixed generators x_1^{d-1} x_j: the image
    // equals ξ^{(d-1)e_1 + e_j} r_1^{d-1} r_j with e_1 = 0.
    let mut exps = vec![0u32; n];
    if d > 1 {
        for j in 1..n {
            let mut e = vec![0; n];
            e[0] = d - 1;
            e[j] = 1;
            let img = &q.images[&Monomial::new(e)];
            let base = &roots[0].pow(d - 1) * &roots[j];
            let sign = if *img == base {
                1
            } else if *img == -&base {
                -1
            } else {
                return Err(Error::NotLiftable(format!(
                    "mixed generator x1^{}*x{} is inconsistent with the roots",
                    d - 1,
                    j + 1
                )));
            };
            // a rational ratio must be ±1, i.e. ξ^0 or ξ^{d/2}
            exps[j] = match (sign, d % 2) {
                (1, _) => 0,
                (_, 0) => d / 2,
                _ => {
                    return Err(Error::NotLiftable(
                        "mixed generator needs a non-rational root of unity".into(),
                    ))
                }
            };
        }
    }

    let components: Vec<Polynomial> = roots
        .iter()
        .zip(&exps)
        .map(|(r, &e)| match MuScalar::rational_sign(d, e) {
            Some(1) => r.clone(),
            _ => -r,
        })
        .collect();
    let map = PolyMap::new(n, components)?;

    let recomputed = generator_images(&map, d, n)?;
    if recomputed != q.images {
        return Err(Error::NotLiftable(
            "lifted map does not reproduce the generator images".into(),
        ));
    }
    Ok(Lift {
        map,
        exponents: MuScalar {
            d,
            exponents: exps,
        },
        ambiguity: (0..d).map(|e| MuScalar::scalar(d, n, e)).collect(),
    })
}

/// Finds the scalar `ξ^e` with `g = ξ^e f`, if one exists with both maps
/// rational.
pub fn scalar_relation(f: &PolyMap, g: &PolyMap, d: u32) -> Option<MuScalar> {
    if f == g {
        return Some(MuScalar::scalar(d, f.nvars(), 0));
    }
    if d % 2 == 0 && f.map_components(|c| -c) == *g {
        return Some(MuScalar::scalar(d, f.nvars(), d / 2));
    }
    None
}

/// Diagonal root-of-unity maps acting trivially on every generator of the
/// invariant ring.
///
/// The mixed generators `x_i^{d-1} x_j` and `x_i^d` force `e_i ≡ e_j`, so the
/// candidates are the scalars; each is then checked against all generators.
pub fn phi_d_diagonal_kernel(d: u32, n: usize) -> Vec<MuScalar> {
    let gens = veronese_monomials(d, n);
    (0..d)
        .map(|e| MuScalar::scalar(d, n, e))
        .filter(|s| gens.iter().all(|g| s.weight_on(g) == 0))
        .collect()
}

/// Order of the group of scalar matrices in `SL_n` acting trivially on the
/// invariant ring: `ζ = ξ_n^e` with `ζ^d = 1`.
pub fn sl_scalar_kernel(n: u32, d: u32) -> u32 {
    (0..n).filter(|&e| (e as u64 * d as u64) % n as u64 == 0).count() as u32
}

/// `gcd(n, d)`, used for the quotient torus lattice index.
pub fn scalar_kernel_order(n: u32, d: u32) -> u32 {
    n.gcd(&d)
}

// JSON ----------------------------------------------------------------------

impl Serialize for QuotientAuto {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Images<'a>(&'a BTreeMap<Monomial, Polynomial>);
        impl Serialize for Images<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (m, p) in self.0.iter().rev() {
                    map.serialize_entry(&m.to_string(), p)?;
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("d", &self.d)?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("images", &Images(&self.images))?;
        map.end()
    }
}

#[derive(Deserialize)]
struct QuotientAutoJson {
    d: u32,
    n: usize,
    images: BTreeMap<String, Polynomial>,
}

impl<'de> Deserialize<'de> for QuotientAuto {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = QuotientAutoJson::deserialize(de)?;
        let mut images = BTreeMap::new();
        for (k, v) in j.images {
            let key = Polynomial::parse(&k, j.n).map_err(D::Error::custom)?;
            let (m, c) = match (key.num_terms(), key.leading_term()) {
                (1, Some((m, c))) => (m.clone(), c.clone()),
                _ => return Err(D::Error::custom(format!("{k:?} is not a monomial"))),
            };
            if !c.is_one() || m.degree() != j.d {
                return Err(D::Error::custom(format!("{k:?} is not a generator")));
            }
            images.insert(m, v);
        }
        QuotientAuto::from_images(j.d, j.n, images).map_err(D::Error::custom)
    }
}

impl Serialize for Lift {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("map", &self.map)?;
        map.serialize_entry("exponents", &self.exponents.exponents)?;
        map.serialize_entry(
            "ambiguity",
            &self
                .ambiguity
                .iter()
                .map(|m| m.exponents.clone())
                .collect::<Vec<_>>(),
        )?;
        map.end()
    }
}
