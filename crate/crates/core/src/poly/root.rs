use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{Monomial, Polynomial};
use crate::error::{Error, Result};

/// Exact rational `d`-th root, positive for even `d`.
pub fn rational_root(c: &BigRational, d: u32) -> Option<BigRational> {
    if c.is_negative() && d % 2 == 0 {
        return None;
    }
    let int_root = |n: &BigInt| -> Option<BigInt> {
        let r = n.abs().nth_root(d);
        (num_traits::pow(r.clone(), d as usize) == n.abs()).then_some(r)
    };
    let n = int_root(c.numer())?;
    let m = int_root(c.denom())?;
    let r = BigRational::new(n, m);
    Some(if c.is_negative() { -r } else { r })
}

pub(super) fn dth_root(p: &Polynomial, d: u32) -> Result<Polynomial> {
    if d == 0 {
        return Err(Error::InvalidArgument("root order must be at least 1".into()));
    }
    let (lead_mono, lead_coeff) = match p.leading_term() {
        Some((m, c)) => (m.clone(), c.clone()),
        None => return Err(Error::InvalidArgument("root of the zero polynomial".into())),
    };
    if d == 1 {
        return Ok(p.clone());
    }
    let not_a_power = || Error::NotAPower { d };

    let monic = p.scale(&(BigRational::one() / &lead_coeff));
    if lead_mono.exponents().iter().any(|e| e % d != 0) {
        return Err(not_a_power());
    }
    let top = Monomial::new(lead_mono.exponents().iter().map(|e| e / d).collect());
    // d * LM(q)^(d-1); every correction term is the quotient of the
    // remainder's leading monomial by this monomial.
    let pivot = top.pow(d - 1);
    let d_rat = BigRational::from_integer(BigInt::from(d));

    // powers[k] = q^k, updated in place as terms are appended to q
    let nvars = p.nvars();
    let mut powers: Vec<Polynomial> = (0..=d)
        .map(|k| Polynomial::term(top.pow(k), BigRational::one()))
        .collect();
    let binom = binomials(d);
    let mut last = top;
    while let Some((rm, rc)) = first_difference(&monic, &powers[d as usize]) {
        let next = rm.div(&pivot).ok_or_else(not_a_power)?;
        if next >= last {
            return Err(not_a_power());
        }
        let c = rc / &d_rat;
        let mut t_pows = vec![(Monomial::one(nvars), BigRational::one())];
        for j in 1..=d as usize {
            let (m, k) = &t_pows[j - 1];
            t_pows.push((m.mul(&next), k * &c));
        }
        for k in (1..=d as usize).rev() {
            let mut updated = powers[k].clone();
            for j in 1..=k {
                let (m, tc) = &t_pows[j];
                let coeff = tc * &binom[k][j];
                updated = &updated + &powers[k - j].mul_monomial(m, &coeff);
            }
            powers[k] = updated;
        }
        last = next;
    }
    let q = powers.swap_remove(1);

    let scalar = rational_root(&lead_coeff, d).ok_or(Error::ScalarNotDthPower {
        d,
        constant: lead_coeff.clone(),
    })?;
    let root = q.scale(&scalar);
    if &root.pow(d) != p {
        return Err(Error::Internal("d-th root failed verification".into()));
    }
    Ok(root)
}

/// Leading term of `a − b`.
fn first_difference(a: &Polynomial, b: &Polynomial) -> Option<(Monomial, BigRational)> {
    let mut ia = a.terms().peekable();
    let mut ib = b.terms().peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (None, None) => return None,
            (Some((m, c)), None) => return Some(((*m).clone(), (*c).clone())),
            (None, Some((m, c))) => return Some(((*m).clone(), -(*c).clone())),
            (Some((ma, ca)), Some((mb, cb))) => {
                if ma > mb {
                    return Some(((*ma).clone(), (*ca).clone()));
                }
                if mb > ma {
                    return Some(((*mb).clone(), -(*cb).clone()));
                }
                if ca != cb {
                    return Some(((*ma).clone(), *ca - *cb));
                }
                ia.next();
                ib.next();
            }
        }
    }
}

fn binomials(d: u32) -> Vec<Vec<BigRational>> {
    let d = d as usize;
    let mut rows: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]];
    for k in 1..=d {
        let prev = &rows[k - 1];
        let mut row = vec![BigRational::one(); k + 1];
        for j in 1..k {
            row[j] = &prev[j - 1] + &prev[j];
        }
        rows.push(row);
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{ratio, Polynomial};

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s, 2).unwrap()
    }

    #[test]
    fn square_root_of_perfect_square() {
        let q = p("x1^2 + 2*x1*x2^3 + x2^6").dth_root(2).unwrap();
        assert_eq!(q, p("x1 + x2^3"));
        // oracle: squaring reproduces the input term by term
        assert_eq!(q.pow(2), p("x1^2 + 2*x1*x2^3 + x2^6"));
    }

    #[test]
    fn monomial_cube_root() {
        assert_eq!(p("x1^3").dth_root(3).unwrap(), p("x1"));
    }

    #[test]
    fn sum_of_squares_is_not_a_square() {
        assert_eq!(p("x1^2 + x2^2").dth_root(2), Err(Error::NotAPower { d: 2 }));
        // oracle: no small rational linear form squares to x1^2 + x2^2
        let target = p("x1^2 + x2^2");
        let vals: Vec<BigRational> = (-4..=4)
            .flat_map(|n| (1..=3).map(move |m| ratio(n, m)))
            .collect();
        for a in &vals {
            for b in &vals {
                let cand = &p("x1").scale(a) + &p("x2").scale(b);
                assert_ne!(cand.pow(2), target);
            }
        }
    }

    #[test]
    fn even_roots_have_positive_leading_coefficient() {
        let q = p("x1^2 - 2*x1 + 1").dth_root(2).unwrap();
        assert_eq!(q, p("x1 - 1"));
    }

    #[test]
    fn odd_roots_keep_sign() {
        let q = p("-8*x1^3").dth_root(3).unwrap();
        assert_eq!(q, p("-2*x1"));
    }

    #[test]
    fn scalar_obstruction_is_reported() {
        match p("2*x1^2").dth_root(2) {
            Err(Error::ScalarNotDthPower { d: 2, constant }) => assert_eq!(constant, ratio(2, 1)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            p("-x1^2").dth_root(2),
            Err(Error::ScalarNotDthPower { .. })
        ));
    }

    #[test]
    fn rational_content_roots() {
        let q = p("4/9*x1^2 + 4/3*x1*x2 + x2^2").dth_root(2).unwrap();
        assert_eq!(q, p("2/3*x1 + x2"));
    }
}
