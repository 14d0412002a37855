//! Acceptance table. Every criterion is checked against an oracle written
//! here, independent of the library routine under test, and reported as one
//! PASS/FAIL line. Run with `--nocapture` to see the table.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use affauto::danielewski::{conjugation_identity_check, jt_auto, surface_weight, tau_commutes, weight_set_surface};
use affauto::endo::Automorphism;
use affauto::equilift::{descend, is_mu_d_equivariant, lift, phi_d_diagonal_kernel, sl_scalar_kernel};
use affauto::lnd::{exp_action, exp_at, kernel_basis_up_to_degree, modify, Derivation};
use affauto::plane::{equivariant_decompose, jvdk_decompose};
use affauto::poly::Polynomial;
use affauto::quotient::{recognize_asdn, semigroup_saturate};
use affauto::roots::{
    enumerate_root_subgroups, is_multiplicity_free, u_invariant_weight_multiplicities,
    verify_conjugation_law, weight_set_quotient,
};
use affauto::verify::{
    random_nonzero_rational, random_rational, random_semigroup_gens, random_tame_word,
    random_triangular_derivation, random_univariate, rng,
};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

const SEED: u64 = 20240601;

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: affauto::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("library error: {e}"))
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

// ---------------------------------------------------------------- oracles

/// Applies the derivation with the given coefficients, differentiating term
/// by term.
fn apply_derivation(coeffs: &[Polynomial], p: &Polynomial) -> Polynomial {
    let n = coeffs.len();
    let mut out = Polynomial::zero(n);
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let terms: Vec<(BigRational, Vec<u32>)> = p
            .terms()
            .filter(|(m, _)| m.exponents()[i] > 0)
            .map(|(m, a)| {
                let mut e = m.exponents().to_vec();
                let k = e[i];
                e[i] -= 1;
                (a * rat(k as i64), e)
            })
            .collect();
        let dp = Polynomial::from_terms(n, terms).expect("same arity");
        out = &out + &(c * &dp);
    }
    out
}

/// `exp(tD)` evaluated at a point by summing the terminating series.
fn exp_numeric(coeffs: &[Polynomial], t: &BigRational, pt: &[BigRational]) -> Result<Vec<BigRational>, String> {
    let n = coeffs.len();
    (0..n)
        .map(|j| {
            let mut q = Polynomial::var(n, j);
            let mut sum = BigRational::zero();
            let mut factor = BigRational::one();
            for k in 0..200u32 {
                if q.is_zero() {
                    return Ok(sum);
                }
                sum += &factor * q.evaluate(pt).map_err(|e| e.to_string())?;
                factor = factor * t / rat(k as i64 + 1);
                q = apply_derivation(coeffs, &q);
            }
            Err("series did not terminate".into())
        })
        .collect()
}

/// Closure of the progressions `{k d_i : k ≥ k_i}` under addition, by dynamic
/// programming over `0..=bound`.
fn closure_oracle(gens: &[u64], bound: u64) -> BTreeSet<u64> {
    let b = bound as usize;
    let mut reach = vec![false; b + 1];
    reach[0] = true;
    for v in 1..=b {
        reach[v] = gens.iter().any(|&g| g as usize <= v && reach[v - g as usize]);
    }
    (0..=bound).filter(|&v| reach[v as usize]).collect()
}

fn saturation_oracle(gens: &[(u64, u64)], bound: u64) -> BTreeSet<u64> {
    let d = gens.iter().fold(0, |a, &(di, _)| a.gcd(&di));
    let mut seeds: Vec<u64> = gens
        .iter()
        .flat_map(|&(di, ki)| (ki..).map(move |k| k * di).take_while(move |&v| v <= bound))
        .collect();
    let mut set = closure_oracle(&seeds, bound);
    loop {
        for &g in set.iter().filter(|&&g| g > 0) {
            seeds.extend((1..).map(|k| g + k * d).take_while(|&v| v <= bound));
        }
        seeds.extend(set.iter().copied().filter(|&g| g > 0));
        seeds.sort_unstable();
        seeds.dedup();
        let next = closure_oracle(&seeds, bound);
        if next == set {
            return set;
        }
        set = next;
    }
}

// ---------------------------------------------------------------- criteria

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let b = 21u64;
    let all: Vec<u64> = (1..=b).collect();
    let odd: Vec<u64> = (1..=b).filter(|w| w % 2 == 1).collect();
    // weights (jd + 2)/2 of the root subgroups x_j^(jd+1) d/dx_i on A^2/mu_d, d even
    let formula = |d: u64| -> Vec<u64> {
        (0..).map(|j| (j * d + 2) / 2).take_while(|&w| w <= b).collect::<BTreeSet<_>>().into_iter().collect()
    };
    let q2 = lib(weight_set_quotient(2, 2, b))?;
    let q4 = lib(weight_set_quotient(4, 2, b))?;
    let s_all: Vec<u64> = lib(weight_set_surface(false, b as u32))?.into_iter().map(u64::from).collect();
    let s_tau: Vec<u64> = lib(weight_set_surface(true, b as u32))?.into_iter().map(u64::from).collect();
    ensure(q2 == all && formula(2) == all, || format!("d=2 weights {q2:?}"))?;
    ensure(q4 == odd && formula(4) == odd, || format!("d=4 weights {q4:?}"))?;
    ensure(s_all == all, || format!("surface weights {s_all:?}"))?;
    ensure(s_tau == odd, || format!("tau-commuting surface weights {s_tau:?}"))?;
    ensure(q2 != q4, || "weight sets coincide".into())?;
    ensure(start.elapsed() < Duration::from_secs(5), || format!("took {:?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut r = rng(SEED);
    for case in 0..100 {
        let d = *[2u32, 3, 4].choose(&mut r).unwrap();
        let n = *[2usize, 3].choose(&mut r).unwrap();
        let word = random_tame_word(&mut r, n, Some(d), 4, 2 * d + 1, 9);
        let f = Automorphism::from_word(&word);
        ensure(f.map().degree() <= 9, || format!("case {case}: degree {}", f.map().degree()))?;
        // equivariance oracle: every term of every component has degree ≡ 1 mod d
        let equivariant = f
            .map()
            .components()
            .iter()
            .all(|c| c.terms().all(|(m, _)| m.degree() % d == 1 % d));
        ensure(equivariant && is_mu_d_equivariant(f.map(), d), || format!("case {case}: {} not equivariant", f.map()))?;
        let l = lib(descend(&f, d).and_then(|q| lift(&q)))?;
        // the only rational d-th roots of unity are 1 and, for even d, -1
        let neg = f.map().map_components(|c| -c);
        let matches = l.map == *f.map() || (d % 2 == 0 && l.map == neg);
        ensure(matches, || format!("case {case}: lift of {} is {}", f.map(), l.map))?;
    }
    ensure(start.elapsed() < Duration::from_secs(60), || format!("took {:?}", start.elapsed()))
}

fn criterion_3() -> Outcome {
    for d in 1..=6u32 {
        for n in 1..=4usize {
            // count diagonal exponent vectors in (Z/d)^n fixing every degree-d monomial
            let monomials: Vec<Vec<u32>> = (0..(d + 1).pow(n as u32))
                .map(|mut code| {
                    (0..n)
                        .map(|_| {
                            let e = code % (d + 1);
                            code /= d + 1;
                            e
                        })
                        .collect::<Vec<u32>>()
                })
                .filter(|e| e.iter().sum::<u32>() == d)
                .collect();
            let brute = (0..d.pow(n as u32))
                .filter(|&code| {
                    let mut c = code;
                    let e: Vec<u32> = (0..n)
                        .map(|_| {
                            let v = c % d;
                            c /= d;
                            v
                        })
                        .collect();
                    monomials
                        .iter()
                        .all(|m| m.iter().zip(&e).map(|(a, b)| a * b).sum::<u32>() % d == 0)
                })
                .count();
            let k = phi_d_diagonal_kernel(d, n);
            ensure(brute == d as usize && k.len() == brute, || format!("d={d}, n={n}: {} vs {brute}", k.len()))?;
            ensure(k.iter().all(|s| s.is_scalar()), || format!("d={d}, n={n}: non-scalar kernel element"))?;
        }
    }
    for n in 1..=12u32 {
        for d in 1..=12u32 {
            let brute = (0..d).filter(|j| (j * n) % d == 0).count() as u32;
            ensure(sl_scalar_kernel(n, d) == brute, || format!("n={n}, d={d}: {}", sl_scalar_kernel(n, d)))?;
        }
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut r = rng(SEED + 4);
    let points: Vec<Vec<BigRational>> = (0..3).map(|_| (0..2).map(|_| random_rational(&mut r, 5)).collect()).collect();
    for case in 0..100 {
        let f = random_tame_word(&mut r, 2, None, 6, 4, 64).eval();
        let w = lib(jvdk_decompose(&f))?;
        ensure(w.eval() == f, || format!("case {case}: recomposition of {f}"))?;
        // evaluate letter by letter (rightmost acts first) without symbolic composition
        for pt in &points {
            let mut v = pt.clone();
            for l in w.letters.iter().rev() {
                v = lib(l.to_map().evaluate(&v))?;
            }
            ensure(v == lib(f.evaluate(pt))?, || format!("case {case}: pointwise mismatch"))?;
        }
    }
    for case in 0..100 {
        let k = r.gen_range(2..=4u32);
        let f = random_tame_word(&mut r, 2, Some(k), 4, 2 * k + 1, 27).eval();
        let w = lib(equivariant_decompose(&f, k))?;
        ensure(w.eval() == f, || format!("equivariant case {case}: recomposition of {f}"))?;
        for l in &w.letters {
            let m = l.to_map();
            let ok = m.components().iter().all(|c| c.terms().all(|(mono, _)| mono.degree() % k == 1 % k));
            ensure(ok, || format!("equivariant case {case}: letter {m} fails the mu_{k} test"))?;
        }
    }
    ensure(start.elapsed() < Duration::from_secs(60), || format!("took {:?}", start.elapsed()))
}

fn criterion_5() -> Outcome {
    let mut r = rng(SEED + 5);
    for n in [2usize, 3] {
        let subgroups = enumerate_root_subgroups(n, None, 6);
        // every (i, m) with m avoiding x_i and deg m ≤ 6
        let expected: usize = if n == 2 { 2 * 7 } else { 3 * 28 };
        ensure(subgroups.len() == expected, || format!("n={n}: {} root subgroups", subgroups.len()))?;
        for u in subgroups {
            ensure(lib(verify_conjugation_law(&u))?, || format!("symbolic law fails for {u:?}"))?;
            let t: Vec<BigRational> = (0..n).map(|_| random_nonzero_rational(&mut r, 4)).collect();
            let c = random_rational(&mut r, 4);
            let x: Vec<BigRational> = (0..n).map(|_| random_rational(&mut r, 4)).collect();
            let y: Vec<BigRational> = x.iter().zip(&t).map(|(a, b)| a / b).collect();
            let uy = lib(u.letter(c.clone()).to_map().evaluate(&y))?;
            let lhs: Vec<BigRational> = uy.iter().zip(&t).map(|(a, b)| a * b).collect();
            let mut lambda = t[u.i].clone();
            for (tj, &mj) in t.iter().zip(&u.m) {
                for _ in 0..mj {
                    lambda /= tj;
                }
            }
            let rhs = lib(u.letter(lambda * c).to_map().evaluate(&x))?;
            ensure(lhs == rhs, || format!("pointwise law fails for {u:?}"))?;
        }
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let mut r = rng(SEED + 6);
    for case in 0..20 {
        let alpha = random_nonzero_rational(&mut r, 5);
        let p = random_univariate(&mut r, 6);
        let a = lib(jt_auto(&alpha, &p))?;
        let even = p.terms().all(|(m, _)| m.degree() % 2 == 0);
        let mut commutes = true;
        for _ in 0..5 {
            let x = random_nonzero_rational(&mut r, 5);
            let y = random_rational(&mut r, 5);
            let z = (BigRational::one() - &y * &y) / &x;
            let pt = vec![x, y, z];
            let img = lib(a.map.evaluate(&pt))?;
            ensure(&img[0] * &img[2] + &img[1] * &img[1] == BigRational::one(), || {
                format!("case {case}: J({alpha}, {p}) leaves the quadric")
            })?;
            let neg: Vec<BigRational> = pt.iter().map(|v| -v).collect();
            let lhs = lib(a.map.evaluate(&neg))?;
            commutes &= lhs.iter().zip(&img).all(|(u, v)| *u == -v);
        }
        ensure(lib(tau_commutes(&a))? == even && commutes == even, || {
            format!("case {case}: tau criterion for P = {p}")
        })?;
    }
    for p in ["1", "x1", "x1^2", "x1^2 + 1", "x1^5"] {
        let poly = lib(Polynomial::parse(p, 1))?;
        ensure(lib(conjugation_identity_check(&poly))?, || format!("identity fails for {p}"))?;
    }
    for i in 0..=10u32 {
        let w = lib(surface_weight(i))?;
        ensure(w == i + 1, || format!("weight of U_{i} is {w}"))?;
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut r = rng(SEED + 7);
    let bound = 500;
    let mut cases: Vec<Vec<(u64, u64)>> = (0..50).map(|_| random_semigroup_gens(&mut r)).collect();
    cases.push(vec![(4, 2), (6, 1)]);
    for gens in &cases {
        let sat = lib(semigroup_saturate(gens, bound))?;
        let oracle = saturation_oracle(gens, bound);
        let members: BTreeSet<u64> = sat.semigroup.members.iter().copied().collect();
        ensure(members == oracle, || format!("{gens:?}: saturated members differ"))?;
        let d = gens.iter().fold(0, |a, &(di, _)| a.gcd(&di));
        let first = *oracle.iter().find(|&&v| v > 0).ok_or("empty saturation")?;
        let s = first / d;
        let shape: BTreeSet<u64> = std::iter::once(0).chain((s..).map(|k| k * d).take_while(|&v| v <= bound)).collect();
        ensure(oracle == shape, || format!("{gens:?}: oracle set is not {{0}} ∪ dN_(>=s)"))?;
        ensure((sat.d, sat.s) == (d, s), || format!("{gens:?}: ({}, {}) vs ({d}, {s})", sat.d, sat.s))?;
        ensure(recognize_asdn(&sat.semigroup) == Some((d, s)), || format!("{gens:?}: recognition"))?;
    }
    let worked = lib(semigroup_saturate(&[(4, 2), (6, 1)], bound))?;
    ensure((worked.d, worked.s) == (2, 3), || format!("worked example gave ({}, {})", worked.d, worked.s))?;
    ensure(start.elapsed() < Duration::from_secs(10), || format!("took {:?}", start.elapsed()))
}

fn criterion_8() -> Outcome {
    let mut r = rng(SEED + 8);
    for case in 0..20 {
        let n = r.gen_range(1..=3usize);
        let d = random_triangular_derivation(&mut r, n, 4);
        let coeffs = d.coeffs().to_vec();

        // group law with formal parameters s = x_{n+1}, t = x_{n+2}
        let total = n + 2;
        let s = Polynomial::var(total, n);
        let t = Polynomial::var(total, n + 1);
        let es = lib(exp_action(&d, &s))?;
        let et = lib(exp_action(&d, &t))?;
        let est = lib(exp_action(&d, &(&s + &t)))?;
        ensure(lib(es.compose(&et))? == est, || format!("case {case}: formal group law for {d}"))?;

        // invariants and the modification by one of them
        let kernel = kernel_basis_up_to_degree(&d, 8);
        for k in &kernel {
            ensure(apply_derivation(&coeffs, k).is_zero(), || format!("case {case}: {k} is not an invariant"))?;
        }
        let f = kernel
            .iter()
            .rev()
            .find(|p| !p.is_constant())
            .cloned()
            .unwrap_or_else(|| Polynomial::constant(n, random_nonzero_rational(&mut r, 3)));
        let fd: Derivation = lib(modify(&f, &d))?;
        let fcoeffs = fd.coeffs().to_vec();
        let kernel_f = kernel_basis_up_to_degree(&fd, 8);
        ensure(kernel.len() == kernel_f.len(), || format!("case {case}: kernel dimensions differ"))?;
        for k in &kernel_f {
            ensure(apply_derivation(&coeffs, k).is_zero(), || format!("case {case}: {k} not D-invariant"))?;
        }

        for _ in 0..10 {
            let pt: Vec<BigRational> = (0..n).map(|_| random_rational(&mut r, 5)).collect();
            let a = random_rational(&mut r, 4);
            let b = random_rational(&mut r, 4);
            let lib_pt = lib(lib(exp_at(&d, &a))?.evaluate(&pt))?;
            ensure(lib_pt == exp_numeric(&coeffs, &a, &pt)?, || format!("case {case}: exp_at disagrees with the series"))?;
            let composed = exp_numeric(&coeffs, &a, &exp_numeric(&coeffs, &b, &pt)?)?;
            ensure(composed == exp_numeric(&coeffs, &(&a + &b), &pt)?, || format!("case {case}: pointwise group law"))?;
            let lhs = exp_numeric(&fcoeffs, &a, &pt)?;
            let ft = lib(f.evaluate(&pt))? * &a;
            let rhs = exp_numeric(&coeffs, &ft, &pt)?;
            ensure(lhs == rhs, || format!("case {case}: modification law at {pt:?}"))?;
        }
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    let subgroups = enumerate_root_subgroups(2, None, 10);
    ensure(subgroups.len() == 22, || format!("{} root subgroups", subgroups.len()))?;
    for u in subgroups {
        let mult = lib(u_invariant_weight_multiplicities(&u, 10))?;
        // the invariants of m·d/dx_i in two variables are the polynomials in
        // the other variable x_j; x_j^e has special weight ±e
        let j = 1 - u.i;
        let sign: i64 = if j == 0 { 1 } else { -1 };
        let expected: BTreeSet<Vec<i64>> = (0..=10).map(|e| vec![sign * e]).collect();
        let got: BTreeSet<Vec<i64>> = mult.keys().cloned().collect();
        ensure(got == expected, || format!("{u:?}: weights {got:?}"))?;
        let weights: Vec<&Vec<i64>> = mult.keys().collect();
        ensure(mult.values().all(|&m| m == 1) && is_multiplicity_free(&weights), || {
            format!("{u:?}: not multiplicity-free")
        })?;
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 weight-set discrimination", criterion_1),
        ("2 lift/descend round trip", criterion_2),
        ("3 kernel computations", criterion_3),
        ("4 plane decomposition round trip", criterion_4),
        ("5 root subgroup conjugation law", criterion_5),
        ("6 quadric surface identities", criterion_6),
        ("7 semigroup saturation vs oracle", criterion_7),
        ("8 locally nilpotent derivations", criterion_8),
        ("9 multiplicity-freeness", criterion_9),
    ];
    let mut failures = Vec::new();
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let ms = start.elapsed().as_millis();
        match &outcome {
            Ok(()) => println!("PASS  criterion {name:<36} {ms:>6} ms"),
            Err(why) => {
                println!("FAIL  criterion {name:<36} {ms:>6} ms  {why}");
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
