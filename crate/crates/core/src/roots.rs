//! Torus characters of root subgroups `U = {x_i ↦ x_i + c·m}` and the
//! weight sets they produce on the quotients `A^n/μ_d`.
//!
//! Lattice conventions. The full torus `T_n` has character lattice `Z^n`.
//! For `T'_n = {∏ t_i = 1}` characters are `Z^n` modulo the all-ones vector;
//! the reduced representative has last entry zero and we keep the first
//! `n − 1` entries. The torus `T_d` acting on the quotient is `T'_n` modulo
//! the scalars `μ_g`, `g = gcd(n, d)`, so its characters are those of `T'_n`
//! trivial on `μ_g`. That sublattice has Hermite basis `e_i + (g−1)e_{n−1}`
//! (for `i < n−1`) and `g·e_{n−1}`.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::endo::{Letter, PolyMap};
use crate::error::{Error, Result};
use crate::lnd::{kernel_basis_up_to_degree, Derivation};
use crate::poly::{Monomial, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TorusLattice {
    Full { n: usize },
    Special { n: usize },
    Quotient { n: usize, d: u32 },
}

impl TorusLattice {
    pub fn n(&self) -> usize {
        match *self {
            TorusLattice::Full { n } | TorusLattice::Special { n } | TorusLattice::Quotient { n, .. } => n,
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            TorusLattice::Full { n } => n,
            _ => self.n() - 1,
        }
    }

    /// Index of the lattice inside the special lattice (quotient kind only).
    pub fn index(&self) -> u32 {
        match *self {
            TorusLattice::Quotient { n, d } => (n as u32).gcd(&d),
            _ => 1,
        }
    }

    /// Basis rows, written in special-lattice coordinates for the quotient kind.
    pub fn basis(&self) -> Vec<Vec<i64>> {
        let r = self.rank();
        let unit = |i: usize| {
            let mut v = vec![0i64; r];
            v[i] = 1;
            v
        };
        match *self {
            TorusLattice::Quotient { .. } => {
                let g = self.index() as i64;
                (0..r)
                    .map(|i| {
                        let mut v = unit(i);
                        if i + 1 < r {
                            v[r - 1] = g - 1;
                        } else {
                            v[r - 1] = g;
                        }
                        v
                    })
                    .collect()
            }
            _ => (0..r).map(unit).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Character {
    pub lattice: TorusLattice,
    pub vector: Vec<i64>,
}

impl Character {
    /// Reduces an exponent vector on `T_n` to the given full or special lattice.
    pub fn from_exponents(exps: &[i64], lattice: TorusLattice) -> Result<Character> {
        if exps.len() != lattice.n() {
            return Err(Error::DimensionMismatch {
                expected: lattice.n(),
                found: exps.len(),
            });
        }
        let vector = match lattice {
            TorusLattice::Full { .. } => exps.to_vec(),
            TorusLattice::Special { n } => exps[..n - 1].iter().map(|v| v - exps[n - 1]).collect(),
            TorusLattice::Quotient { .. } => {
                return Err(Error::InvalidArgument(
                    "quotient characters are obtained by descent".into(),
                ))
            }
        };
        Ok(Character { lattice, vector })
    }

    /// Positive normal form of a rank-one character.
    pub fn weight(&self) -> Option<u64> {
        (self.vector.len() == 1).then(|| self.vector[0].unsigned_abs())
    }

    pub fn is_trivial(&self) -> bool {
        self.vector.iter().all(|&v| v == 0)
    }
}

impl std::fmt::Display for Character {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.vector.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The subgroup `c ↦ (x_1, …, x_i + c·m, …, x_n)`; `i` is 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootSubgroupDesc {
    pub i: usize,
    pub m: Vec<u32>,
}

impl RootSubgroupDesc {
    pub fn new(i: usize, m: Vec<u32>) -> Result<Self> {
        if i >= m.len() {
            return Err(Error::InvalidArgument(format!("index {} out of range", i + 1)));
        }
        if m[i] != 0 {
            return Err(Error::InvalidArgument(format!(
                "the monomial must not involve x{}",
                i + 1
            )));
        }
        Ok(RootSubgroupDesc { i, m })
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn degree(&self) -> u32 {
        self.m.iter().sum()
    }

    pub fn monomial(&self) -> Polynomial {
        Polynomial::term(Monomial::new(self.m.clone()), BigRational::one())
    }

    /// The element at a rational parameter.
    pub fn letter(&self, c: BigRational) -> Letter {
        Letter::triangular(self.i, BigRational::one(), self.monomial().scale(&c))
            .expect("monomial avoids x_i")
    }

    /// `m·∂/∂x_i`.
    pub fn derivation(&self) -> Derivation {
        let n = self.n();
        let mut coeffs = vec![Polynomial::zero(n); n];
        coeffs[self.i] = self.monomial();
        Derivation::new(coeffs).expect("well-formed")
    }

    /// The modification by a monomial in the other variables.
    pub fn modify(&self, f: &[u32]) -> Result<RootSubgroupDesc> {
        if f.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: f.len(),
            });
        }
        RootSubgroupDesc::new(self.i, self.m.iter().zip(f).map(|(a, b)| a + b).collect())
            .map_err(|_| Error::NotInvariant)
    }

    /// Exponents of `ε_i − Σ_j m_j ε_j` on `T_n`.
    pub fn exponents(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.m.iter().map(|&a| -(a as i64)).collect();
        v[self.i] += 1;
        v
    }
}

#[derive(Serialize, Deserialize)]
struct RootJson {
    i: usize,
    m: Vec<u32>,
}

impl Serialize for RootSubgroupDesc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RootJson {
            i: self.i + 1,
            m: self.m.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootSubgroupDesc {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = RootJson::deserialize(de)?;
        if j.i == 0 {
            return Err(D::Error::custom("indices are 1-based"));
        }
        RootSubgroupDesc::new(j.i - 1, j.m).map_err(D::Error::custom)
    }
}

pub fn character_of(u: &RootSubgroupDesc, lattice: TorusLattice) -> Result<Character> {
    if lattice.n() != u.n() {
        return Err(Error::DimensionMismatch {
            expected: lattice.n(),
            found: u.n(),
        });
    }
    Character::from_exponents(&u.exponents(), lattice)
}

/// Weight of the function `x^e` under `(t·f)(x) = f(t⁻¹x)`.
pub fn monomial_weight(e: &[u32], lattice: TorusLattice) -> Result<Character> {
    let v: Vec<i64> = e.iter().map(|&a| -(a as i64)).collect();
    Character::from_exponents(&v, lattice)
}

/// Checks `t∘U(c)∘t⁻¹ = U(ξ(t)c)` as an identity of maps whose entries are
/// polynomials in `x`, `c`, `t_j` and `s_j = t_j⁻¹`.
pub fn verify_conjugation_law(u: &RootSubgroupDesc) -> Result<bool> {
    let n = u.n();
    let total = 2 + 3 * n;
    let c = n;
    let t = |j: usize| n + 1 + j;
    let s = |j: usize| 1 + 2 * n + j;
    let var = |k: usize| Polynomial::var(total, k);
    let with_params = |comps: Vec<Polynomial>| {
        let mut all = comps;
        all.extend((n..total).map(var));
        PolyMap::new(total, all)
    };
    let torus = with_params((0..n).map(|j| &var(t(j)) * &var(j)).collect())?;
    let torus_inv = with_params((0..n).map(|j| &var(s(j)) * &var(j)).collect())?;
    let m = u.monomial().extend_vars(total - n);
    let shear = |coef: Polynomial| {
        with_params(
            (0..n)
                .map(|j| if j == u.i { &var(j) + &(&coef * &m) } else { var(j) })
                .collect(),
        )
    };
    let lhs = torus.compose(&shear(var(c))?)?.compose(&torus_inv)?;
    let mut xi = Polynomial::one(total);
    for (j, &e) in u.exponents().iter().enumerate() {
        let base = if e >= 0 { var(t(j)) } else { var(s(j)) };
        xi = &xi * &base.pow(e.unsigned_abs() as u32);
    }
    let rhs = shear(&xi * &var(c))?;
    let pairs: Vec<(usize, usize)> = (0..n).map(|j| (t(j), s(j))).collect();
    let reduce = |f: &PolyMap| f.map_components(|p| p.reduce_laurent(&pairs));
    Ok(reduce(&lhs) == reduce(&rhs))
}

/// All `U` with `deg m ≤ bound`, optionally restricted to `deg m ≡ 1 mod d`.
pub fn enumerate_root_subgroups(n: usize, d: Option<u32>, bound: u32) -> Vec<RootSubgroupDesc> {
    let mut out = Vec::new();
    for i in 0..n {
        for deg in 0..=bound {
            if let Some(d) = d {
                if d > 0 && deg % d != 1 % d {
                    continue;
                }
            }
            let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let mut monos = Monomial::all_of_degree(n - 1, deg);
            monos.reverse();
            for mono in monos {
                let mut m = vec![0u32; n];
                for (&pos, &e) in others.iter().zip(mono.exponents()) {
                    m[pos] = e;
                }
                out.push(RootSubgroupDesc { i, m });
            }
        }
    }
    out
}

/// Rewrites a special-lattice character in the Hermite basis of the
/// quotient lattice for `T_d`.
pub fn descend_character(chi: &Character, d: u32) -> Result<Character> {
    let n = match chi.lattice {
        TorusLattice::Special { n } => n,
        _ => {
            return Err(Error::InvalidArgument(
                "descent starts from a character of the special torus".into(),
            ))
        }
    };
    if d == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    let lattice = TorusLattice::Quotient { n, d };
    let g = lattice.index() as i64;
    let c = &chi.vector;
    let sum: i64 = c.iter().sum();
    if sum.rem_euclid(g) != 0 {
        return Err(Error::NotDescendable(format!(
            "the character takes the value ζ^{} on scalars of order {g}",
            sum.rem_euclid(g)
        )));
    }
    let r = c.len();
    let mut vector: Vec<i64> = c.clone();
    if r > 0 {
        let head: i64 = c[..r - 1].iter().sum();
        vector[r - 1] = (c[r - 1] - (g - 1) * head) / g;
    }
    Ok(Character { lattice, vector })
}

/// Descended characters of the equivariant root subgroups with `deg m ≤ degree_bound`.
pub fn quotient_root_characters(
    d: u32,
    n: usize,
    degree_bound: u32,
) -> Result<Vec<(RootSubgroupDesc, Character)>> {
    enumerate_root_subgroups(n, Some(d), degree_bound)
        .into_iter()
        .map(|u| {
            let chi = character_of(&u, TorusLattice::Special { n })?;
            let down = descend_character(&chi, d)?;
            Ok((u, down))
        })
        .collect()
}

/// Positive weights of descended equivariant root subgroups of the plane
/// quotient, up to a bound on the weight itself.
pub fn weight_set_quotient(d: u32, n: usize, bound: u64) -> Result<Vec<u64>> {
    if n != 2 {
        return Err(Error::Unsupported(
            "weight sets are positive integers only for rank-one tori (n = 2); \
             use quotient_root_characters for larger n"
                .into(),
        ));
    }
    if d == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    let g = 2u64.gcd(&(d as u64));
    let degree_bound = u32::try_from(g * bound).map_err(|_| Error::BoundTooSmall {
        bound,
        reason: "weight bound too large".into(),
    })?;
    let mut weights: Vec<u64> = quotient_root_characters(d, 2, degree_bound)?
        .into_iter()
        .filter_map(|(_, chi)| chi.weight())
        .filter(|&w| w >= 1 && w <= bound)
        .collect();
    weights.sort_unstable();
    weights.dedup();
    Ok(weights)
}

pub fn is_multiplicity_free<T: Ord>(weights: &[T]) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    weights.iter().all(|w| seen.insert(w))
}

/// Weights of `T'_n` on the invariants of `U` of degree at most `bound`,
/// with multiplicities. Here `x^e` is given the weight `t ↦ t^e`, so `x_2^k`
/// on `T'_2` has weight `−k`.
pub fn u_invariant_weight_multiplicities(
    u: &RootSubgroupDesc,
    bound: u32,
) -> Result<BTreeMap<Vec<i64>, usize>> {
    let n = u.n();
    let lattice = TorusLattice::Special { n };
    let basis = kernel_basis_up_to_degree(&u.derivation(), bound);
    let mut out: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for p in &basis {
        // U is normalized by the torus, so its invariants split into weight
        // vectors; the echelon basis respects that splitting.
        let mut ws = p
            .terms()
            .map(|(m, _)| {
                let e: Vec<i64> = m.exponents().iter().map(|&a| a as i64).collect();
                Character::from_exponents(&e, lattice).map(|c| c.vector)
            });
        let w = ws.next().expect("nonzero basis element")?;
        for other in ws {
            if other? != w {
                return Err(Error::Internal("kernel basis element is not a weight vector".into()));
            }
        }
        *out.entry(w).or_insert(0) += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn root(i: usize, m: &[u32]) -> RootSubgroupDesc {
        RootSubgroupDesc::new(i, m.to_vec()).unwrap()
    }

    const T2: TorusLattice = TorusLattice::Special { n: 2 };

    #[test]
    fn character_examples() {
        let chi = character_of(&root(0, &[0, 2, 0]), TorusLattice::Special { n: 3 }).unwrap();
        assert_eq!(chi.vector, vec![1, -2]);
        assert_eq!(character_of(&root(0, &[0, 0]), T2).unwrap().vector, vec![1]);
        assert_eq!(character_of(&root(0, &[0, 3]), T2).unwrap().vector, vec![4]);
        assert_eq!(character_of(&root(1, &[3, 0]), T2).unwrap().weight(), Some(4));
        let full = character_of(&root(1, &[2, 0, 1]), TorusLattice::Full { n: 3 }).unwrap();
        assert_eq!(full.vector, vec![-2, 1, -1]);
    }

    #[test]
    fn conjugation_law_holds_for_enumerated_subgroups() {
        for n in 1..=3 {
            for u in enumerate_root_subgroups(n, None, 2) {
                assert!(verify_conjugation_law(&u).unwrap(), "{u:?}");
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_root_subgroups(2, None, 3).len(), 8);
        let e = enumerate_root_subgroups(2, Some(2), 5);
        assert_eq!(e.len(), 6);
        assert!(e.iter().all(|u| [1, 3, 5].contains(&u.degree())));
        let e = enumerate_root_subgroups(2, Some(4), 5);
        assert_eq!(e.len(), 4);
        assert!(e.iter().all(|u| [1, 5].contains(&u.degree())));
        // three variables: 3 directions times monomials of degree ≤ 1 in two others
        assert_eq!(enumerate_root_subgroups(3, None, 1).len(), 9);
    }

    #[test]
    fn descent_examples() {
        let chi = Character { lattice: T2, vector: vec![4] };
        let down = descend_character(&chi, 2).unwrap();
        assert_eq!(down.vector, vec![2]);
        let chi = Character { lattice: T2, vector: vec![3] };
        assert!(matches!(descend_character(&chi, 2), Err(Error::NotDescendable(_))));
        let chi = character_of(&root(0, &[0, 2, 0]), TorusLattice::Special { n: 3 }).unwrap();
        assert!(matches!(descend_character(&chi, 3), Err(Error::NotDescendable(_))));
    }

    #[test]
    fn descent_coordinates_reconstruct_the_character() {
        for (n, d) in [(3usize, 3u32), (4, 2), (4, 6), (3, 1), (2, 6)] {
            let lattice = TorusLattice::Quotient { n, d };
            let basis = lattice.basis();
            for u in enumerate_root_subgroups(n, Some(d), 4) {
                let chi = character_of(&u, TorusLattice::Special { n }).unwrap();
                let down = descend_character(&chi, d).unwrap();
                let mut back = vec![0i64; n - 1];
                for (a, row) in down.vector.iter().zip(&basis) {
                    for (b, r) in back.iter_mut().zip(row) {
                        *b += a * r;
                    }
                }
                assert_eq!(back, chi.vector);
            }
        }
    }

    #[test]
    fn equivariant_characters_always_descend() {
        for n in 2..=4 {
            for d in 1..=6 {
                assert!(quotient_root_characters(d, n, 7).is_ok());
            }
        }
    }

    #[test]
    fn weight_set_examples() {
        assert_eq!(weight_set_quotient(2, 2, 6).unwrap(), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(weight_set_quotient(4, 2, 9).unwrap(), vec![1, 3, 5, 7, 9]);
        assert_eq!(weight_set_quotient(1, 2, 4).unwrap(), vec![1, 2, 3, 4]);
        assert!(matches!(weight_set_quotient(2, 3, 4), Err(Error::Unsupported(_))));
    }

    #[test]
    fn weight_sets_for_even_d_match_closed_form() {
        for d in (2..=12).step_by(2) {
            let b = 40;
            let closed: Vec<u64> = (0..)
                .map(|k| (k * d as u64 + 2) / 2)
                .take_while(|&w| w <= b)
                .collect();
            assert_eq!(weight_set_quotient(d, 2, b).unwrap(), closed, "d = {d}");
        }
    }

    #[test]
    fn multiplicity_freeness() {
        assert!(is_multiplicity_free(&[1, 2, 3]));
        assert!(!is_multiplicity_free(&[1, 1, 2]));
        assert!(is_multiplicity_free(&weight_set_quotient(2, 2, 20).unwrap()));
    }

    #[test]
    fn invariant_weights() {
        let w = u_invariant_weight_multiplicities(&root(0, &[0, 1]), 5).unwrap();
        let expect: BTreeMap<Vec<i64>, usize> = (0..=5).map(|k| (vec![-k], 1)).collect();
        assert_eq!(w, expect);
        let w = u_invariant_weight_multiplicities(&root(0, &[0, 0]), 4).unwrap();
        assert!(w.values().all(|&m| m == 1));
        assert_eq!(w.len(), 5);
        let w = u_invariant_weight_multiplicities(&root(0, &[0, 3]), 0).unwrap();
        assert_eq!(w, BTreeMap::from([(vec![0], 1)]));
    }

    #[test]
    fn modification_shifts_the_character() {
        let u = root(0, &[0, 1, 2]);
        let lattice = TorusLattice::Special { n: 3 };
        for f in [[0u32, 2, 0], [0, 1, 1], [0, 0, 3]] {
            let fu = u.modify(&f).unwrap();
            let lhs = character_of(&fu, lattice).unwrap().vector;
            let a = character_of(&u, lattice).unwrap().vector;
            let b = monomial_weight(&f, lattice).unwrap().vector;
            let rhs: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            assert_eq!(lhs, rhs);
            assert!(verify_conjugation_law(&fu).unwrap());
        }
        assert!(u.modify(&[1, 0, 0]).is_err());
    }

    #[test]
    fn json_uses_one_based_index() {
        let s = serde_json::to_string(&root(1, &[3, 0])).unwrap();
        assert_eq!(s, r#"{"i":2,"m":[3,0]}"#);
        let back: RootSubgroupDesc = serde_json::from_str(&s).unwrap();
        assert_eq!(back, root(1, &[3, 0]));
        assert!(serde_json::from_str::<RootSubgroupDesc>(r#"{"i":1,"m":[1,0]}"#).is_err());
    }
}
