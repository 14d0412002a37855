//! Veronese subrings `C ⊕ ⊕_{k ≥ s} C[x]_{dk}` and their degree semigroups.
//!
//! A degree semigroup is kept as an explicit enumeration up to a bound
//! together with a certified conductor: once the set contains a run of
//! `e/g` consecutive multiples of its gcd `g` (with `e` its least nonzero
//! member), adding `e` shows it contains every later multiple as well.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};

/// The ring `C ⊕ ⊕_{k ≥ s} C[x_1..x_n]_{dk}`; `s = 1` is the invariant ring
/// of `μ_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VeroneseRing {
    pub n: usize,
    pub d: u32,
    pub s: u32,
}

impl VeroneseRing {
    pub fn new(n: usize, d: u32, s: u32) -> Result<Self> {
        if n == 0 || d == 0 || s == 0 {
            return Err(Error::InvalidArgument(
                "n, d and s must all be at least 1".into(),
            ));
        }
        Ok(VeroneseRing { n, d, s })
    }

    /// The normal ring of invariants.
    pub fn invariants(n: usize, d: u32) -> Result<Self> {
        Self::new(n, d, 1)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        ring_membership(p, self)
    }
}

/// Degree-`d` monomials in `n` variables, leading first.
pub fn veronese_monomials(d: u32, n: usize) -> Vec<Monomial> {
    Monomial::all_of_degree(n, d)
}

/// Generators of the invariant ring: all monomials of total degree `d`.
pub fn veronese_generators(d: u32, n: usize) -> Vec<Polynomial> {
    veronese_monomials(d, n)
        .into_iter()
        .map(|m| Polynomial::term(m, num_traits::One::one()))
        .collect()
}

pub fn ring_membership(p: &Polynomial, ring: &VeroneseRing) -> bool {
    p.nvars() == ring.n
        && p
            .degree_support()
            .into_iter()
            .all(|k| k == 0 || (k % ring.d == 0 && k / ring.d >= ring.s))
}

/// A finitely generated additive submonoid of `N`, enumerated up to `bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSemigroup {
    /// Progressions `{k d_i : k ≥ k_i}` as `(d_i, k_i)` pairs.
    pub gens: Vec<(u64, u64)>,
    pub bound: u64,
    /// Sorted members up to `bound`, starting with 0.
    pub members: Vec<u64>,
    pub gcd: u64,
    /// Least positive `m` with `m + gcd·N` contained in the set.
    pub conductor: u64,
}

impl DegreeSemigroup {
    /// Wraps an explicit member list, checking additive closure within the
    /// bound and certifying the conductor.
    pub fn from_members(members: BTreeSet<u64>, bound: u64) -> Result<Self> {
        if !members.contains(&0) {
            return Err(Error::InvalidArgument("a degree semigroup contains 0".into()));
        }
        if let Some(&m) = members.iter().next_back() {
            if m > bound {
                return Err(Error::InvalidArgument(format!(
                    "member {m} exceeds the bound {bound}"
                )));
            }
        }
        for &a in &members {
            for &b in members.range(a..) {
                if a + b <= bound && !members.contains(&(a + b)) {
                    return Err(Error::InvalidArgument(format!(
                        "not closed under addition: {a} + {b} missing"
                    )));
                }
            }
        }
        let members: Vec<u64> = members.into_iter().collect();
        let (gcd, conductor) = certify(&members, bound, None)?;
        Ok(DegreeSemigroup {
            gens: Vec::new(),
            bound,
            members,
            gcd,
            conductor,
        })
    }

    pub fn contains(&self, m: u64) -> Option<bool> {
        if m <= self.bound {
            Some(self.members.binary_search(&m).is_ok())
        } else if m >= self.conductor {
            Some(m % self.gcd == 0)
        } else {
            None
        }
    }

    pub fn min_nonzero(&self) -> Option<u64> {
        self.members.iter().copied().find(|&m| m > 0)
    }
}

fn certify(members: &[u64], bound: u64, gcd: Option<u64>) -> Result<(u64, u64)> {
    let too_small = |why: &str| Error::BoundTooSmall {
        bound,
        reason: why.into(),
    };
    let g = gcd.unwrap_or_else(|| members.iter().fold(0u64, |acc, &m| acc.gcd(&m)));
    let e = members
        .iter()
        .copied()
        .find(|&m| m > 0)
        .ok_or_else(|| too_small("no nonzero member within the bound"))?;
    let run = e / g;
    let set: BTreeSet<u64> = members.iter().copied().collect();
    let mut start = g;
    while start + (run - 1) * g <= bound {
        if (0..run).all(|j| set.contains(&(start + j * g))) {
            return Ok((g, start));
        }
        start += g;
    }
    Err(too_small("no certified run of consecutive multiples of the gcd"))
}

fn validate_gens(gens: &[(u64, u64)]) -> Result<()> {
    if gens.is_empty() {
        return Err(Error::InvalidArgument("at least one generator is needed".into()));
    }
    if gens.iter().any(|&(d, k)| d == 0 || k == 0) {
        return Err(Error::InvalidArgument(
            "generator pairs (d, k) must be positive".into(),
        ));
    }
    Ok(())
}

/// Additive closure of `{0} ∪ ⋃_i {k d_i : k ≥ k_i}` up to `bound`.
pub fn semigroup_closure(gens: &[(u64, u64)], bound: u64) -> Result<DegreeSemigroup> {
    validate_gens(gens)?;
    let mut elements = BTreeSet::new();
    for &(d, k) in gens {
        let mut v = d * k;
        while v <= bound {
            elements.insert(v);
            v += d;
        }
    }
    let mut reach = vec![false; bound as usize + 1];
    reach[0] = true;
    for v in 1..=bound as usize {
        reach[v] = elements
            .iter()
            .take_while(|&&e| e as usize <= v)
            .any(|&e| reach[v - e as usize]);
    }
    let members: Vec<u64> = (0..=bound).filter(|&v| reach[v as usize]).collect();
    let g = gens.iter().fold(0u64, |acc, &(d, _)| acc.gcd(&d));
    let (gcd, conductor) = certify(&members, bound, Some(g))?;
    Ok(DegreeSemigroup {
        gens: gens.to_vec(),
        bound,
        members,
        gcd,
        conductor,
    })
}

/// Outcome of saturation: the set is `{0} ∪ {kd : k ≥ s}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Saturation {
    pub d: u64,
    pub s: u64,
    pub semigroup: DegreeSemigroup,
}

/// Closes the semigroup under the rule `g > 0 ⇒ g + kd ∈ Ω` (with `d` the gcd
/// of the `d_i`) and under addition, then reads off `(d, s)`.
pub fn semigroup_saturate(gens: &[(u64, u64)], bound: u64) -> Result<Saturation> {
    let closed = semigroup_closure(gens, bound)?;
    let d = gens.iter().fold(0u64, |acc, &(di, _)| acc.gcd(&di));
    let mut set: BTreeSet<u64> = closed.members.iter().copied().collect();
    loop {
        let mut next = set.clone();
        for &g in set.iter().filter(|&&g| g > 0) {
            let mut v = g + d;
            while v <= bound {
                next.insert(v);
                v += d;
            }
        }
        let snapshot: Vec<u64> = next.iter().copied().collect();
        for (i, &a) in snapshot.iter().enumerate() {
            for &b in &snapshot[i..] {
                if a + b > bound {
                    break;
                }
                next.insert(a + b);
            }
        }
        if next == set {
            break;
        }
        set = next;
    }
    let mut semigroup = DegreeSemigroup::from_members(set, bound)?;
    semigroup.gens = gens.to_vec();
    let (rd, s) = recognize_asdn(&semigroup).ok_or_else(|| {
        Error::Internal("saturated set does not have the form {0} ∪ {kd : k ≥ s}".into())
    })?;
    if rd != d {
        return Err(Error::Internal("saturated gcd differs from gcd of the d_i".into()));
    }
    Ok(Saturation { d, s, semigroup })
}

/// `(d, s)` if the set is exactly `{0} ∪ {kd : k ≥ s}`.
pub fn recognize_asdn(omega: &DegreeSemigroup) -> Option<(u64, u64)> {
    let first = omega.min_nonzero()?;
    (first == omega.conductor).then(|| (omega.gcd, omega.conductor / omega.gcd))
}
