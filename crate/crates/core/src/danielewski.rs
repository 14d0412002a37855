//! The affine quadric `X = V(xz + y² − 1) ≅ SL₂/T` and its automorphisms
//! `J(α, P) = (αx + 2αyP(z) − αzP(z)², y − zP(z), z/α)`, the involution
//! `τ = −id`, and weights of root subgroups with respect to the torus
//! `t ↦ (tx, y, t⁻¹z)`.
//!
//! Equalities of maps are tested modulo the ideal of the quadric, using the
//! normal form in which every power `y^e` with `e ≥ 2` is rewritten via
//! `y² = 1 − xz`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::endo::PolyMap;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;

/// A rational point of `V(xz + y² − 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfacePoint {
    #[serde(with = "crate::poly::rational_string")]
    pub x: BigRational,
    #[serde(with = "crate::poly::rational_string")]
    pub y: BigRational,
    #[serde(with = "crate::poly::rational_string")]
    pub z: BigRational,
}

impl SurfacePoint {
    pub fn new(x: BigRational, y: BigRational, z: BigRational) -> Result<Self> {
        if &x * &z + &y * &y != BigRational::one() {
            return Err(Error::InvalidArgument("point is not on xz + y^2 = 1".into()));
        }
        Ok(SurfacePoint { x, y, z })
    }

    pub fn coords(&self) -> [BigRational; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }
}

/// `xz + y² − 1` in a ring whose first three variables are `x, y, z`.
pub fn quadric(nvars: usize) -> Polynomial {
    let v = |i| Polynomial::var(nvars, i);
    &(&(&v(X) * &v(Z)) + &v(Y).pow(2)) - &Polynomial::one(nvars)
}

/// Normal form modulo the quadric: no monomial contains `y²`.
pub fn normal_form(p: &Polynomial) -> Polynomial {
    let n = p.nvars();
    let one_minus_xz = &Polynomial::one(n) - &(&Polynomial::var(n, X) * &Polynomial::var(n, Z));
    let mut out = Polynomial::zero(n);
    for (m, c) in p.terms() {
        let e = m.exponents()[Y];
        let mut rest = m.exponents().to_vec();
        rest[Y] = e % 2;
        let base = Polynomial::term(Monomial::new(rest), c.clone());
        out = &out + &(&base * &one_minus_xz.pow(e / 2));
    }
    out
}

pub fn congruent(f: &PolyMap, g: &PolyMap) -> bool {
    f.nvars() == g.nvars()
        && f.components()
            .iter()
            .zip(g.components())
            .all(|(a, b)| normal_form(&(a - b)).is_zero())
}

fn preserves_quadric(map: &PolyMap) -> Result<bool> {
    let q = quadric(map.nvars());
    Ok(normal_form(&map.pullback(&q)?).is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SurfaceTag {
    #[serde(rename = "JT")]
    Jt {
        alpha: String,
        /// Univariate polynomial, written in `x1`, standing for `P(z)`.
        p: Polynomial,
    },
    #[serde(rename = "Tau")]
    Tau,
    #[serde(rename = "Torus")]
    Torus { t: String },
    #[serde(rename = "Raw")]
    Raw,
}

/// An automorphism of the quadric, stored as a map of the ambient 3-space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceAuto {
    pub map: PolyMap,
    pub tag: SurfaceTag,
}

impl SurfaceAuto {
    /// Wraps a map after checking that it preserves the quadric ideal.
    pub fn from_map(map: PolyMap) -> Result<Self> {
        if map.nvars() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: map.nvars(),
            });
        }
        if !preserves_quadric(&map)? {
            return Err(Error::NotAutomorphism(
                "the map does not preserve xz + y^2 - 1".into(),
            ));
        }
        Ok(SurfaceAuto {
            map,
            tag: SurfaceTag::Raw,
        })
    }

    pub fn tau() -> Self {
        let map = PolyMap::parse(&["-x", "-y", "-z"], 3).expect("valid");
        SurfaceAuto {
            map,
            tag: SurfaceTag::Tau,
        }
    }

    pub fn torus(t: &BigRational) -> Result<Self> {
        let mut a = jt_auto(t, &Polynomial::zero(1))?;
        a.tag = SurfaceTag::Torus { t: t.to_string() };
        Ok(a)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SurfaceAuto) -> Result<SurfaceAuto> {
        Ok(SurfaceAuto {
            map: self.map.compose(&other.map)?,
            tag: SurfaceTag::Raw,
        })
    }

    pub fn apply(&self, p: &SurfacePoint) -> Result<SurfacePoint> {
        let v = self.map.evaluate(&p.coords())?;
        SurfacePoint::new(v[0].clone(), v[1].clone(), v[2].clone())
    }

    /// Recognizes a member of the `J(α, P)` family, reading `α` from the
    /// `z`-component and `P` from the `y`-component, then checking the
    /// whole map against the family formula.
    pub fn as_jt(&self) -> Option<(BigRational, Polynomial)> {
        let z = Polynomial::var(3, Z);
        let zc = self.map.component(Z);
        if zc.num_terms() != 1 {
            return None;
        }
        let (m, c) = zc.leading_term()?;
        if m != z.leading_term()?.0 {
            return None;
        }
        let alpha = BigRational::one() / c;
        let y = Polynomial::var(3, Y);
        let shift = &y - self.map.component(Y);
        let p3 = shift.div_monomial(&Monomial::var(3, Z))?;
        if (0..2).any(|v| p3.depends_on(v)) {
            return None;
        }
        let p = p3.restrict(&[Z])?;
        let candidate = jt_auto(&alpha, &p).ok()?;
        congruent(&candidate.map, &self.map).then_some((alpha, p))
    }
}

/// `P(z)` as a polynomial on the ambient space with `nvars` variables.
fn lift_p(p: &Polynomial, nvars: usize) -> Polynomial {
    p.embed(nvars, &[Z])
}

fn jt_components(alpha: &Polynomial, inv_alpha: &Polynomial, p: &Polynomial) -> Vec<Polynomial> {
    let n = p.nvars();
    let v = |i| Polynomial::var(n, i);
    let two = Polynomial::constant(n, BigRational::from_integer(BigInt::from(2)));
    let x = &(&v(X) + &(&(&two * &v(Y)) * p)) - &(&v(Z) * &p.pow(2));
    vec![alpha * &x, &v(Y) - &(&v(Z) * p), inv_alpha * &v(Z)]
}

/// `J(α, P)` for a univariate `P` (written in `x1`, meaning `z`).
pub fn jt_auto(alpha: &BigRational, p: &Polynomial) -> Result<SurfaceAuto> {
    if alpha.is_zero() {
        return Err(Error::InvalidArgument("alpha must be nonzero".into()));
    }
    if p.nvars() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: p.nvars(),
        });
    }
    let a = Polynomial::constant(3, alpha.clone());
    let ai = Polynomial::constant(3, BigRational::one() / alpha);
    let map = PolyMap::new(3, jt_components(&a, &ai, &lift_p(p, 3)))?;
    debug_assert!(preserves_quadric(&map).unwrap_or(false));
    Ok(SurfaceAuto {
        map,
        tag: SurfaceTag::Jt {
            alpha: alpha.to_string(),
            p: p.clone(),
        },
    })
}

pub fn tau_commutes(phi: &SurfaceAuto) -> Result<bool> {
    let tau = SurfaceAuto::tau().map;
    let conj = tau.compose(&phi.map)?.compose(&tau)?;
    Ok(congruent(&conj, &phi.map))
}

/// Variables of the formal conjugation ring: `x, y, z, c, t, s` with `ts = 1`.
const C: usize = 3;
const T: usize = 4;
const S: usize = 5;
const FORMAL: usize = 6;

fn formal_map(xyz: [Polynomial; 3]) -> Result<PolyMap> {
    let mut comps: Vec<Polynomial> = xyz.into();
    comps.extend((3..FORMAL).map(|i| Polynomial::var(FORMAL, i)));
    PolyMap::new(FORMAL, comps)
}

fn formal_jt(p: &Polynomial) -> Result<PolyMap> {
    let one = Polynomial::one(FORMAL);
    let c = jt_components(&one, &one, p);
    formal_map([c[0].clone(), c[1].clone(), c[2].clone()])
}

/// `(tx, y, t⁻¹z) ∘ φ ∘ (t⁻¹x, y, tz)` in the formal ring, reduced by `ts = 1`.
fn conjugate_by_torus(phi: &PolyMap) -> Result<PolyMap> {
    let v = |i| Polynomial::var(FORMAL, i);
    let t = formal_map([&v(T) * &v(X), v(Y), &v(S) * &v(Z)])?;
    let t_inv = formal_map([&v(S) * &v(X), v(Y), &v(T) * &v(Z)])?;
    let conj = t.compose(&phi.compose(&t_inv)?)?;
    Ok(conj.map_components(|p| p.reduce_laurent(&[(T, S)])))
}

/// Checks `(tx, y, t⁻¹z)∘J(1, P)∘(t⁻¹x, y, tz) = J(1, tP(tz))` with formal `t`.
pub fn conjugation_identity_check(p: &Polynomial) -> Result<bool> {
    if p.nvars() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: p.nvars(),
        });
    }
    let v = |i| Polynomial::var(FORMAL, i);
    let lhs = conjugate_by_torus(&formal_jt(&lift_p(p, FORMAL))?)?;
    let p_tz = p.substitute(&[&v(T) * &v(Z)])?;
    let rhs = formal_jt(&(&v(T) * &p_tz))?;
    Ok(congruent(&lhs, &rhs))
}

/// The weight of `U_i = {J(1, c·z^i)}`: the exponent `k` with
/// `t∘U_i(c)∘t⁻¹ = U_i(t^k c)`, read off and then verified.
pub fn surface_weight(i: u32) -> Result<u32> {
    let v = |k| Polynomial::var(FORMAL, k);
    let p = &v(C) * &v(Z).pow(i);
    let conj = conjugate_by_torus(&formal_jt(&p)?)?;
    // y-component is y − z·(t^k c z^i)
    let shift = &v(Y) - conj.component(Y);
    let mut expect = vec![0u32; FORMAL];
    expect[C] = 1;
    expect[Z] = i + 1;
    let weight = match shift.num_terms() {
        1 => {
            let (m, coef) = shift.leading_term().expect("one term");
            let e = m.exponents();
            let matches = coef.is_one()
                && e.iter()
                    .enumerate()
                    .all(|(k, &a)| k == T || a == expect[k])
                && e[S] == 0;
            if !matches {
                return Err(Error::Internal(format!("unexpected conjugate {conj}")));
            }
            e[T]
        }
        _ => return Err(Error::Internal(format!("unexpected conjugate {conj}"))),
    };
    let rhs = formal_jt(&(&v(T).pow(weight) * &p))?;
    if !congruent(&conj, &rhs) {
        return Err(Error::Internal("conjugation law failed".into()));
    }
    Ok(weight)
}

/// Weights of the root subgroups `U_i`, `i < bound`, keeping only the
/// subgroups commuting with `τ` when requested.
pub fn weight_set_surface(tau_commuting: bool, bound: u32) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for i in 0..bound {
        if tau_commuting {
            let u = jt_auto(&BigRational::one(), &Polynomial::var(1, 0).pow(i))?;
            if !tau_commutes(&u)? {
                continue;
            }
        }
        let w = surface_weight(i)?;
        if w <= bound {
            out.push(w);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Normal-form monomials `x^a y^e z^c` (`e ≤ 1`) of even degree `≤ bound`,
/// a basis of the `τ`-invariant functions of degree at most `bound`.
pub fn tau_invariant_basis(bound: u32) -> Vec<Polynomial> {
    Monomial::all_up_to_degree(3, bound)
        .into_iter()
        .filter(|m| m.degree() % 2 == 0 && m.exponents()[Y] <= 1)
        .map(|m| Polynomial::term(m, BigRational::one()))
        .collect()
}

/// The quotient map `SL₂ → SL₂/T`, `[[a, b], [c, d]] ↦ (ab, ad, cd)` on
/// `V(xz − y² + y)`, together with its image on `V(xz + y² − 1)` under
/// `(x, y, z) ↦ (2x, 2y − 1, −2z)`.
pub fn sl2t_quotient(m: &[[BigRational; 2]; 2]) -> Result<([BigRational; 3], SurfacePoint)> {
    let [[a, b], [c, d]] = m;
    if a * d - b * c != BigRational::one() {
        return Err(Error::NotDeterminantOne);
    }
    let p = [a * b, a * d, c * d];
    let two = BigRational::from_integer(BigInt::from(2));
    let rel = &p[0] * &p[2] - &p[1] * &p[1] + &p[1];
    if !rel.is_zero() {
        return Err(Error::Internal("quotient point off the surface".into()));
    }
    let image = SurfacePoint::new(
        &two * &p[0],
        &two * &p[1] - BigRational::one(),
        -(&two * &p[2]),
    )?;
    Ok((p, image))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn z(s: &str) -> Polynomial {
        Polynomial::parse(s, 1).unwrap()
    }

    fn map(c: [&str; 3]) -> PolyMap {
        PolyMap::parse(&c, 3).unwrap()
    }

    #[test]
    fn jt_examples() {
        let a = jt_auto(&rat(1), &z("x1")).unwrap();
        assert_eq!(a.map, map(["x + 2*y*z - z^3", "y - z^2", "z"]));
        assert!(jt_auto(&rat(1), &z("0")).unwrap().map.is_identity());
        assert_eq!(jt_auto(&rat(2), &z("0")).unwrap().map, map(["2*x", "y", "1/2*z"]));
        assert!(jt_auto(&rat(0), &z("1")).is_err());
        assert!(preserves_quadric(&a.map).unwrap());
    }

    #[test]
    fn normal_form_reduces_squares() {
        let p = Polynomial::parse("y^3 + x*z*y", 3).unwrap();
        assert_eq!(normal_form(&p), Polynomial::parse("y", 3).unwrap());
        assert!(normal_form(&quadric(3)).is_zero());
    }

    #[test]
    fn raw_maps_are_checked() {
        assert!(SurfaceAuto::from_map(map(["z", "-y", "x"])).is_ok());
        assert!(SurfaceAuto::from_map(map(["x + 1", "y", "z"])).is_err());
    }

    #[test]
    fn tau_examples() {
        assert!(tau_commutes(&jt_auto(&rat(1), &z("x1^2")).unwrap()).unwrap());
        assert!(!tau_commutes(&jt_auto(&rat(1), &z("x1")).unwrap()).unwrap());
        assert!(tau_commutes(&SurfaceAuto::tau()).unwrap());
    }

    #[test]
    fn conjugation_identity_examples() {
        for p in ["x1", "1", "x1^2 + 1", "3*x1^5 - x1"] {
            assert!(conjugation_identity_check(&z(p)).unwrap(), "{p}");
        }
    }

    #[test]
    fn weights() {
        assert_eq!(surface_weight(1).unwrap(), 2);
        assert_eq!(surface_weight(0).unwrap(), 1);
        assert_eq!(surface_weight(4).unwrap(), 5);
        assert_eq!(weight_set_surface(false, 5).unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(weight_set_surface(true, 9).unwrap(), vec![1, 3, 5, 7, 9]);
        assert_eq!(weight_set_surface(true, 1).unwrap(), vec![1]);
    }

    #[test]
    fn invariant_basis() {
        assert_eq!(tau_invariant_basis(0).len(), 1);
        assert_eq!(tau_invariant_basis(1).len(), 1);
        assert_eq!(tau_invariant_basis(2).len(), 6);
        // the basis is independent modulo the quadric: normal forms are themselves
        for b in tau_invariant_basis(4) {
            assert_eq!(normal_form(&b), b);
        }
    }

    #[test]
    fn quotient_points() {
        let id = [[rat(1), rat(0)], [rat(0), rat(1)]];
        let (p, img) = sl2t_quotient(&id).unwrap();
        assert_eq!(p, [rat(0), rat(1), rat(0)]);
        assert_eq!(img.coords(), [rat(0), rat(1), rat(0)]);
        let (p, _) = sl2t_quotient(&[[rat(1), rat(1)], [rat(0), rat(1)]]).unwrap();
        assert_eq!(p, [rat(1), rat(1), rat(0)]);
        let (p, _) = sl2t_quotient(&[[rat(1), rat(0)], [rat(1), rat(1)]]).unwrap();
        assert_eq!(p, [rat(0), rat(1), rat(1)]);
        let (_, img) = sl2t_quotient(&[[rat(2), ratio(3, 2)], [rat(2), rat(2)]]).unwrap();
        let phi = jt_auto(&ratio(-3, 4), &z("x1^3 - 2")).unwrap();
        assert!(phi.apply(&img).is_ok());
        assert!(matches!(
            sl2t_quotient(&[[rat(1), rat(1)], [rat(1), rat(1)]]),
            Err(Error::NotDeterminantOne)
        ));
    }

    #[test]
    fn composites_stay_in_the_family() {
        let a = jt_auto(&rat(2), &z("x1^2 + 1")).unwrap();
        let b = jt_auto(&ratio(-1, 3), &z("x1 - 5")).unwrap();
        let ab = a.compose(&b).unwrap();
        let (alpha, r) = ab.as_jt().expect("composite is a family member");
        assert_eq!(alpha, ratio(-2, 3));
        // R(z) = Q(z) + P(z/β)/β with β = −1/3
        assert_eq!(r, z("-27*x1^2 + x1 - 8"));
        assert!(SurfaceAuto::tau().as_jt().is_none());
    }
}
