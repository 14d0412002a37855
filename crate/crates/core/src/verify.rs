//! Seeded random instance generators and batch verification drivers.
//!
//! Every driver is deterministic for a given seed and returns a
//! [`SuiteReport`] with a one-line summary.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::danielewski::{
    conjugation_identity_check, jt_auto, normal_form, quadric, surface_weight, tau_commutes,
    weight_set_surface,
};
use crate::endo::{rational_det, AutoWord, Automorphism, Letter, PolyMap};
use crate::equilift::{
    descend, is_mu_d_equivariant, lift, phi_d_diagonal_kernel, scalar_relation, sl_scalar_kernel,
};
use crate::error::{Error, Result};
use crate::lnd::{exp_action, exp_at, kernel_basis_up_to_degree, modify, Derivation, echelon_basis};
use crate::plane::{equivariant_decompose, jvdk_decompose};
use crate::poly::{Monomial, Polynomial};
use crate::quotient::{recognize_asdn, semigroup_closure, semigroup_saturate};
use crate::roots::{
    enumerate_root_subgroups, is_multiplicity_free, u_invariant_weight_multiplicities,
    verify_conjugation_law, weight_set_quotient,
};

pub const DEFAULT_SEED: u64 = 20240601;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational(rng: &mut impl Rng, span: i64) -> BigRational {
    let num = rng.gen_range(-span..=span);
    let den = rng.gen_range(1..=3);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn random_nonzero_rational(rng: &mut impl Rng, span: i64) -> BigRational {
    loop {
        let r = random_rational(rng, span);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Random polynomial in the variables `vars` of a ring with `nvars`
/// variables, using only total degrees accepted by `allow`.
pub fn random_poly_in(
    rng: &mut impl Rng,
    nvars: usize,
    vars: &[usize],
    max_degree: u32,
    allow: impl Fn(u32) -> bool,
    max_terms: usize,
) -> Polynomial {
    let mut out = Polynomial::zero(nvars);
    if vars.is_empty() {
        if allow(0) {
            return Polynomial::constant(nvars, random_rational(rng, 4));
        }
        return out;
    }
    let degrees: Vec<u32> = (0..=max_degree).filter(|&k| allow(k)).collect();
    if degrees.is_empty() {
        return out;
    }
    for _ in 0..rng.gen_range(1..=max_terms) {
        let k = *degrees.choose(rng).expect("nonempty");
        let mut e = vec![0u32; nvars];
        for _ in 0..k {
            e[*vars.choose(rng).expect("nonempty")] += 1;
        }
        let term = Polynomial::term(Monomial::new(e), random_nonzero_rational(rng, 4));
        out = &out + &term;
    }
    out
}

pub fn random_univariate(rng: &mut impl Rng, max_degree: u32) -> Polynomial {
    let mut out = Polynomial::zero(1);
    for k in 0..=max_degree {
        if rng.gen_bool(0.6) {
            out = &out + &Polynomial::var(1, 0).pow(k).scale(&random_rational(rng, 5));
        }
    }
    out
}

fn random_invertible_matrix(rng: &mut impl Rng, n: usize) -> Vec<Vec<BigRational>> {
    loop {
        let m: Vec<Vec<BigRational>> = (0..n)
            .map(|_| (0..n).map(|_| BigRational::from_integer(rng.gen_range(-2..=2).into())).collect())
            .collect();
        if !rational_det(&m).is_zero() {
            return m;
        }
    }
}

/// A random elementary letter. With `d = Some(k)`, `k ≥ 2`, the letter
/// commutes with scalar multiplication by `k`-th roots of unity.
pub fn random_letter(rng: &mut impl Rng, n: usize, d: Option<u32>, letter_degree: u32) -> Letter {
    let equivariant = matches!(d, Some(k) if k >= 2);
    if rng.gen_bool(0.4) {
        let translation = (0..n)
            .map(|_| {
                if equivariant {
                    BigRational::zero()
                } else {
                    random_rational(rng, 3)
                }
            })
            .collect();
        return Letter::affine(random_invertible_matrix(rng, n), translation).expect("invertible");
    }
    let i = rng.gen_range(0..n);
    let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
    let k = d.unwrap_or(1).max(1);
    let poly = random_poly_in(rng, n, &others, letter_degree, |deg| deg % k == 1 % k, 2);
    let poly = if others.is_empty() && equivariant { Polynomial::zero(n) } else { poly };
    Letter::triangular(i, random_nonzero_rational(rng, 3), poly).expect("avoids x_i")
}

/// A random tame word whose evaluation has degree at most `max_degree`.
pub fn random_tame_word(
    rng: &mut impl Rng,
    n: usize,
    d: Option<u32>,
    max_letters: usize,
    letter_degree: u32,
    max_degree: u32,
) -> AutoWord {
    let mut letters = Vec::new();
    let mut current = PolyMap::identity(n);
    for _ in 0..rng.gen_range(1..=max_letters) {
        for _attempt in 0..8 {
            let l = random_letter(rng, n, d, letter_degree);
            let next = current.compose(&l.to_map()).expect("same dimension");
            if next.degree() <= max_degree {
                letters.push(l);
                current = next;
                break;
            }
        }
    }
    AutoWord::new(n, letters).expect("same dimension")
}

/// A random derivation that is triangular for a random variable order.
pub fn random_triangular_derivation(rng: &mut impl Rng, n: usize, max_degree: u32) -> Derivation {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut coeffs = vec![Polynomial::zero(n); n];
    for (pos, &i) in order.iter().enumerate() {
        let later = &order[pos + 1..];
        coeffs[i] = random_poly_in(rng, n, later, max_degree, |_| true, 3);
    }
    Derivation::new(coeffs).expect("well-formed")
}

/// Random progressions `(d_i, k_i)` with `d_i ≤ 12`, `k_i ≤ 5`, at most four.
pub fn random_semigroup_gens(rng: &mut impl Rng) -> Vec<(u64, u64)> {
    (0..rng.gen_range(1..=4))
        .map(|_| (rng.gen_range(1..=12), rng.gen_range(1..=5)))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: usize,
    pub millis: u128,
    pub detail: String,
}

impl std::fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:<13} {}  checks={:<5} time={}ms  {}",
            self.suite,
            if self.passed { "PASS" } else { "FAIL" },
            self.checks,
            self.millis,
            self.detail
        )
    }
}

pub const SUITES: &[&str] = &[
    "weights",
    "lift",
    "kernels",
    "plane",
    "conjugation",
    "surface",
    "semigroup",
    "lnd",
    "multiplicity",
];

struct Tally {
    checks: usize,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checks: 0,
            failure: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut rng = rng(seed);
    let mut t = Tally::new();
    match name {
        "weights" => suite_weights(&mut t)?,
        "lift" => suite_lift(&mut t, &mut rng)?,
        "kernels" => suite_kernels(&mut t),
        "plane" => suite_plane(&mut t, &mut rng)?,
        "conjugation" => suite_conjugation(&mut t)?,
        "surface" => suite_surface(&mut t, &mut rng)?,
        "semigroup" => suite_semigroup(&mut t, &mut rng)?,
        "lnd" => suite_lnd(&mut t, &mut rng)?,
        "multiplicity" => suite_multiplicity(&mut t)?,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown suite {other:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
    }
    Ok(SuiteReport {
        suite: name.into(),
        passed: t.failure.is_none(),
        checks: t.checks,
        millis: start.elapsed().as_millis(),
        detail: t.failure.unwrap_or_else(|| "all checks hold".into()),
    })
}

fn suite_weights(t: &mut Tally) -> Result<()> {
    let b = 21;
    let q2 = weight_set_quotient(2, 2, b)?;
    let q4 = weight_set_quotient(4, 2, b)?;
    let s_all: Vec<u64> = weight_set_surface(false, b as u32)?.into_iter().map(u64::from).collect();
    let s_tau: Vec<u64> = weight_set_surface(true, b as u32)?.into_iter().map(u64::from).collect();
    t.check(q2 == (1..=b).collect::<Vec<_>>(), || format!("A_(2,2) weights {q2:?}"));
    t.check(q4 == (1..=b).step_by(2).collect::<Vec<_>>(), || format!("A_(4,2) weights {q4:?}"));
    t.check(q2 == s_all, || "SL2/T weights differ from A_(2,2)".into());
    t.check(q4 == s_tau, || "SL2/N(T) weights differ from A_(4,2)".into());
    t.check(q2 != q4, || "the two weight sets coincide".into());
    Ok(())
}

fn suite_lift(t: &mut Tally, rng: &mut ChaCha8Rng) -> Result<()> {
    for _ in 0..100 {
        let d = *[2u32, 3, 4].choose(rng).expect("nonempty");
        let n = *[2usize, 3].choose(rng).expect("nonempty");
        let word = random_tame_word(rng, n, Some(d), 4, 2 * d + 1, 9);
        let f = Automorphism::from_word(&word);
        t.check(is_mu_d_equivariant(f.map(), d), || format!("generated word not equivariant: {}", f.map()));
        let q = descend(&f, d)?;
        let l = lift(&q)?;
        let rel = scalar_relation(f.map(), &l.map, d);
        t.check(rel.is_some(), || format!("lift of {} is {}", f.map(), l.map));
    }
    Ok(())
}

fn suite_kernels(t: &mut Tally) {
    for d in 1..=6u32 {
        for n in 1..=4usize {
            let k = phi_d_diagonal_kernel(d, n);
            t.check(k.len() == d as usize, || format!("kernel size {} for d={d}, n={n}", k.len()));
        }
    }
    for n in 1..=12u32 {
        for d in 1..=12u32 {
            let g = num_integer::gcd(n, d);
            t.check(sl_scalar_kernel(n, d) == g, || format!("SL kernel for n={n}, d={d}"));
        }
    }
}

fn suite_plane(t: &mut Tally, rng: &mut ChaCha8Rng) -> Result<()> {
    for _ in 0..100 {
        let w = random_tame_word(rng, 2, None, 6, 4, 64);
        let f = w.eval();
        let dec = jvdk_decompose(&f)?;
        t.check(dec.eval() == f, || format!("recomposition failed for {f}"));
        t.check(dec.is_normal(), || format!("word for {f} not normalized"));
    }
    for _ in 0..30 {
        let k = rng.gen_range(2..=4);
        let w = random_tame_word(rng, 2, Some(k), 4, 2 * k + 1, 27);
        let f = w.eval();
        let dec = equivariant_decompose(&f, k)?;
        t.check(dec.eval() == f, || format!("equivariant recomposition failed for {f}"));
        for l in &dec.letters {
            t.check(is_mu_d_equivariant(&l.to_map(), k), || format!("letter {} not equivariant", l.to_map()));
        }
    }
    Ok(())
}

fn suite_conjugation(t: &mut Tally) -> Result<()> {
    for n in [2usize, 3] {
        for u in enumerate_root_subgroups(n, None, 6) {
            let ok = verify_conjugation_law(&u)?;
            t.check(ok, || format!("conjugation law fails for {u:?}"));
        }
    }
    Ok(())
}

fn suite_surface(t: &mut Tally, rng: &mut ChaCha8Rng) -> Result<()> {
    for _ in 0..20 {
        let alpha = random_nonzero_rational(rng, 5);
        let p = random_univariate(rng, 6);
        let a = jt_auto(&alpha, &p)?;
        let pulled = a.map.pullback(&quadric(3))?;
        t.check(normal_form(&(&pulled - &quadric(3))).is_zero(), || format!("J({alpha}, {p}) moves the quadric"));
        let even = p.terms().all(|(m, _)| m.degree() % 2 == 0);
        t.check(tau_commutes(&a)? == even, || format!("tau criterion fails for P = {p}"));
    }
    for p in ["1", "x1", "x1^2", "x1^2 + 1", "x1^5"] {
        let ok = conjugation_identity_check(&Polynomial::parse(p, 1)?)?;
        t.check(ok, || format!("conjugation identity fails for P = {p}"));
    }
    for i in 0..=10 {
        let w = surface_weight(i)?;
        t.check(w == i + 1, || format!("weight of U_{i} is {w}"));
    }
    Ok(())
}

fn suite_semigroup(t: &mut Tally, rng: &mut ChaCha8Rng) -> Result<()> {
    for _ in 0..50 {
        let gens = random_semigroup_gens(rng);
        let sat = semigroup_saturate(&gens, 500)?;
        let d = gens.iter().fold(0, |a, &(di, _)| num_integer::gcd(a, di));
        let e = gens.iter().map(|&(di, ki)| di * ki).min().expect("nonempty");
        t.check(sat.d == d && sat.s * d == e, || format!("saturation of {gens:?} gave ({}, {})", sat.d, sat.s));
        t.check(recognize_asdn(&sat.semigroup) == Some((sat.d, sat.s)), || format!("recognition failed for {gens:?}"));
    }
    let sat = semigroup_saturate(&[(4, 2), (6, 1)], 500)?;
    t.check((sat.d, sat.s) == (2, 3), || "worked example".into());
    let raw = semigroup_closure(&[(4, 2), (6, 1)], 500)?;
    t.check(recognize_asdn(&raw).is_none(), || "unsaturated example recognized".into());
    Ok(())
}

fn suite_lnd(t: &mut Tally, rng: &mut ChaCha8Rng) -> Result<()> {
    for _ in 0..20 {
        let n = rng.gen_range(1..=3);
        let d = random_triangular_derivation(rng, n, 4);
        let total = n + 2;
        let s = Polynomial::var(total, n);
        let tt = Polynomial::var(total, n + 1);
        let es = exp_action(&d, &s)?;
        let et = exp_action(&d, &tt)?;
        let est = exp_action(&d, &(&s + &tt))?;
        t.check(es.compose(&et)? == est, || format!("group law fails for {d}"));
        let back = exp_action(&d, &(-&tt))?;
        t.check(et.compose(&back)?.is_identity(), || format!("inverse law fails for {d}"));

        let invariants = kernel_basis_up_to_degree(&d, 2);
        let f = invariants
            .iter()
            .rev()
            .find(|p| !p.is_constant())
            .cloned()
            .unwrap_or_else(|| Polynomial::constant(n, random_nonzero_rational(rng, 3)));
        let fd = modify(&f, &d)?;
        let bound = if n == 3 { 6 } else { 8 };
        let k1 = kernel_basis_up_to_degree(&d, bound);
        let k2 = kernel_basis_up_to_degree(&fd, bound);
        let joint: Vec<Polynomial> = k1.iter().chain(&k2).cloned().collect();
        t.check(k1.len() == k2.len() && echelon_basis(&joint, n).len() == k1.len(), || {
            format!("kernels of {d} and its modification by {f} differ")
        });
        for _ in 0..10 {
            let pt: Vec<BigRational> = (0..n).map(|_| random_rational(rng, 5)).collect();
            let time = random_rational(rng, 4);
            let lhs = exp_at(&fd, &time)?.evaluate(&pt)?;
            let ft = f.evaluate(&pt)? * &time;
            let rhs = exp_at(&d, &ft)?.evaluate(&pt)?;
            t.check(lhs == rhs, || format!("pointwise modification law fails for {d} at {pt:?}"));
        }
    }
    Ok(())
}

fn suite_multiplicity(t: &mut Tally) -> Result<()> {
    for u in enumerate_root_subgroups(2, None, 10) {
        let mult = u_invariant_weight_multiplicities(&u, 10)?;
        let weights: Vec<&Vec<i64>> = mult.keys().collect();
        t.check(mult.values().all(|&m| m == 1) && is_multiplicity_free(&weights), || {
            format!("invariants of {u:?} are not multiplicity-free")
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a = random_tame_word(&mut rng(7), 3, Some(2), 4, 5, 9);
        let b = random_tame_word(&mut rng(7), 3, Some(2), 4, 5, 9);
        assert_eq!(a.eval(), b.eval());
        assert!(a.eval().degree() <= 9);
    }

    #[test]
    fn equivariant_letters_are_equivariant() {
        let mut r = rng(3);
        for _ in 0..50 {
            let d = r.gen_range(2..=5);
            let l = random_letter(&mut r, 3, Some(d), 2 * d + 1);
            assert!(is_mu_d_equivariant(&l.to_map(), d));
        }
    }

    #[test]
    fn triangular_derivations_are_certified() {
        let mut r = rng(11);
        for _ in 0..30 {
            let d = random_triangular_derivation(&mut r, 3, 4);
            assert!(matches!(d.certification(), crate::lnd::Certification::Triangular(_)));
        }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nope", 1).is_err());
    }

    #[test]
    fn quick_suites_pass() {
        for s in ["weights", "kernels", "multiplicity"] {
            let r = run_suite(s, DEFAULT_SEED).unwrap();
            assert!(r.passed, "{r}");
        }
    }
}
