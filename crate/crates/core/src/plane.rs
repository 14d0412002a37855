//! Automorphisms of the plane as words in the amalgam of the affine group and
//! the de Jonquières group `J = {(ax + b, cy + f(x))}`.
//!
//! Decomposition is the classical degree reduction: while some component has
//! degree above one, the leading form of the higher-degree component is a
//! scalar multiple of a power of the other leading form, and a triangular
//! (or, at equal degree, affine) factor cancels it.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::endo::{rational_det, AutoWord, Letter, PolyMap};
use crate::equilift::is_mu_d_equivariant;
use crate::error::{Error, Result};
use crate::poly::{parse_rational, Monomial, Polynomial};

/// A factor of the amalgam.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AmalgamLetter {
    /// `v ↦ M v + t` with `M` invertible.
    Affine {
        matrix: [[BigRational; 2]; 2],
        translation: [BigRational; 2],
    },
    /// `(x, y) ↦ (a x + b, c y + f(x))` with `a, c ≠ 0`.
    Jonquieres {
        a: BigRational,
        b: BigRational,
        c: BigRational,
        f: Polynomial,
    },
}

impl AmalgamLetter {
    pub fn to_map(&self) -> PolyMap {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        match self {
            AmalgamLetter::Affine {
                matrix,
                translation,
            } => {
                let comp = |r: usize| {
                    &(&x.scale(&matrix[r][0]) + &y.scale(&matrix[r][1]))
                        + &Polynomial::constant(2, translation[r].clone())
                };
                PolyMap::new(2, vec![comp(0), comp(1)]).expect("two components")
            }
            AmalgamLetter::Jonquieres { a, b, c, f } => {
                let first = &x.scale(a) + &Polynomial::constant(2, b.clone());
                let second = &y.scale(c) + f;
                PolyMap::new(2, vec![first, second]).expect("two components")
            }
        }
    }

    /// Reads an affine map back as a letter.
    fn affine_from_map(g: &PolyMap) -> Option<AmalgamLetter> {
        if g.degree() > 1 {
            return None;
        }
        let lin = |p: &Polynomial, j: usize| p.coeff(&Monomial::var(2, j));
        let matrix = [
            [lin(g.component(0), 0), lin(g.component(0), 1)],
            [lin(g.component(1), 0), lin(g.component(1), 1)],
        ];
        let translation = [
            g.component(0).constant_value_at_origin(),
            g.component(1).constant_value_at_origin(),
        ];
        Some(AmalgamLetter::Affine {
            matrix,
            translation,
        })
    }

    /// Reads a map of de Jonquières shape back as a letter.
    fn jonquieres_from_map(g: &PolyMap) -> Option<AmalgamLetter> {
        let (p, q) = (g.component(0), g.component(1));
        if p.degree().unwrap_or(0) > 1 || p.depends_on(1) {
            return None;
        }
        let a = p.coeff(&Monomial::var(2, 0));
        let b = p.constant_value_at_origin();
        let c = q.coeff(&Monomial::var(2, 1));
        let f = q - &Polynomial::var(2, 1).scale(&c);
        if f.depends_on(1) || a.is_zero() || c.is_zero() {
            return None;
        }
        Some(AmalgamLetter::Jonquieres { a, b, c, f })
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, AmalgamLetter::Affine { .. })
    }

    /// True for letters in the intersection of the two factors.
    pub fn in_intersection(&self) -> bool {
        match self {
            AmalgamLetter::Affine { matrix, .. } => matrix[0][1].is_zero(),
            AmalgamLetter::Jonquieres { f, .. } => f.degree().unwrap_or(0) <= 1,
        }
    }

    fn as_auto_letters(&self) -> Vec<Letter> {
        match self {
            AmalgamLetter::Affine {
                matrix,
                translation,
            } => vec![Letter::affine(
                matrix.iter().map(|r| r.to_vec()).collect(),
                translation.to_vec(),
            )
            .expect("amalgam affine letters are invertible")],
            AmalgamLetter::Jonquieres { a, b, c, f } => {
                // (a x + b, c y + f(x)) = (a x + b, y) ∘ (x, c y + f(x))
                let scale = Letter::affine(
                    vec![
                        vec![a.clone(), BigRational::zero()],
                        vec![BigRational::zero(), BigRational::one()],
                    ],
                    vec![b.clone(), BigRational::zero()],
                )
                .expect("a is nonzero");
                let tri = Letter::triangular(1, c.clone(), f.clone()).expect("f only involves x");
                vec![scale, tri]
            }
        }
    }
}

/// A word in the amalgam; evaluates to `L1 ∘ L2 ∘ ... ∘ Lk`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmalgamWord {
    pub letters: Vec<AmalgamLetter>,
    pub normalized: bool,
}

impl AmalgamWord {
    pub fn eval(&self) -> PolyMap {
        self.to_auto_word().eval()
    }

    pub fn to_auto_word(&self) -> AutoWord {
        let letters = self
            .letters
            .iter()
            .flat_map(AmalgamLetter::as_auto_letters)
            .collect();
        AutoWord::new(2, letters).expect("plane letters")
    }

    pub fn inverse(&self) -> AutoWord {
        self.to_auto_word().inverse()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Normal-form conditions: alternating factor types and no letter from
    /// the intersection except a lone terminal letter.
    pub fn is_normal(&self) -> bool {
        let alternating = self
            .letters
            .windows(2)
            .all(|w| w[0].is_affine() != w[1].is_affine());
        let k = self.letters.len();
        let interior_ok = self
            .letters
            .iter()
            .enumerate()
            .all(|(i, l)| !l.in_intersection() || i + 1 == k);
        alternating && interior_ok
    }
}

/// Greedy left-to-right normalization; only the evaluated map is canonical.
fn normalize(mut letters: Vec<AmalgamLetter>) -> Vec<AmalgamLetter> {
    loop {
        let mut changed = false;

        // intersection letters are represented as affine letters
        for l in letters.iter_mut() {
            if let AmalgamLetter::Jonquieres { .. } = l {
                if l.in_intersection() {
                    *l = AmalgamLetter::affine_from_map(&l.to_map()).expect("degree at most one");
                    changed = true;
                }
            }
        }

        let before = letters.len();
        letters.retain(|l| !l.to_map().is_identity());
        changed |= letters.len() != before;

        // merge neighbours of the same factor
        let mut merged: Vec<AmalgamLetter> = Vec::with_capacity(letters.len());
        for l in letters.drain(..) {
            match merged.last_mut() {
                Some(prev) if prev.is_affine() == l.is_affine() => {
                    let g = prev.to_map().compose(&l.to_map()).expect("plane maps");
                    *prev = if l.is_affine() {
                        AmalgamLetter::affine_from_map(&g)
                    } else {
                        AmalgamLetter::jonquieres_from_map(&g)
                    }
                    .expect("factors are subgroups");
                    changed = true;
                }
                _ => merged.push(l),
            }
        }
        letters = merged;

        // absorb affine letters of the intersection into a de Jonquières neighbour
        if letters.len() > 1 {
            if let Some(i) = letters
                .iter()
                .position(|l| l.is_affine() && l.in_intersection())
            {
                let (j, left) = if i + 1 < letters.len() {
                    (i + 1, false)
                } else {
                    (i - 1, true)
                };
                let g = if left {
                    letters[j].to_map().compose(&letters[i].to_map())
                } else {
                    letters[i].to_map().compose(&letters[j].to_map())
                }
                .expect("plane maps");
                letters[j] =
                    AmalgamLetter::jonquieres_from_map(&g).expect("intersection is inside J");
                letters.remove(i);
                changed = true;
            }
        }

        if !changed {
            return letters;
        }
    }
}

fn leading_form(p: &Polynomial) -> Polynomial {
    p.graded_component(p.degree().unwrap_or(0))
}

/// Decomposes a plane automorphism into amalgam factors.
///
/// Fails with `NotAutomorphism` if the Jacobian determinant is not a nonzero
/// constant or the degree reduction gets stuck.
pub fn jvdk_decompose(f: &PolyMap) -> Result<AmalgamWord> {
    let trace = decompose_with_trace(f)?;
    Ok(trace.0)
}

/// Decomposition plus the sequence of `max(deg g1, deg g2)` after each
/// reduction step.
pub fn decompose_with_trace(f: &PolyMap) -> Result<(AmalgamWord, Vec<u32>)> {
    if f.nvars() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: f.nvars(),
        });
    }
    let jac = f.jacobian();
    match jac.constant_det() {
        Some(c) if !c.is_zero() => {}
        _ => {
            return Err(Error::NotAutomorphism(format!(
                "Jacobian determinant {} is not a nonzero constant",
                jac.det
            )))
        }
    }

    let stuck = |why: &str| Error::NotAutomorphism(format!("degree reduction stalls: {why}"));
    let mut letters = Vec::new();
    let mut degrees = Vec::new();
    let (mut g1, mut g2) = (f.component(0).clone(), f.component(1).clone());
    let x = Polynomial::var(2, 0);

    let budget = 4 * (f.degree() as usize + 2);
    for _ in 0..budget {
        let (Some(d1), Some(d2)) = (g1.degree(), g2.degree()) else {
            return Err(stuck("zero component"));
        };
        if d1 <= 1 && d2 <= 1 {
            let g = PolyMap::new(2, vec![g1, g2])?;
            let letter = AmalgamLetter::affine_from_map(&g).expect("affine");
            if let AmalgamLetter::Affine { matrix, .. } = &letter {
                let m: Vec<Vec<BigRational>> = matrix.iter().map(|r| r.to_vec()).collect();
                if rational_det(&m).is_zero() {
                    return Err(stuck("singular linear part"));
                }
            }
            letters.push(letter);
            degrees.push(1);
            let word = AmalgamWord {
                letters: normalize(letters),
                normalized: true,
            };
            if &word.eval() != f {
                return Err(Error::Internal("decomposition does not recompose".into()));
            }
            return Ok((word, degrees));
        }
        if d1 > d2 {
            letters.push(AmalgamLetter::Affine {
                matrix: [
                    [BigRational::zero(), BigRational::one()],
                    [BigRational::one(), BigRational::zero()],
                ],
                translation: [BigRational::zero(), BigRational::zero()],
            });
            std::mem::swap(&mut g1, &mut g2);
            continue;
        }
        if d1 == 0 {
            return Err(stuck("constant component"));
        }
        let (top1, top2) = (leading_form(&g1), leading_form(&g2));
        if d1 == d2 {
            let c = top1.leading_coeff().unwrap() / top2.leading_coeff().unwrap();
            if top1 != top2.scale(&c) {
                return Err(stuck("leading forms of equal degree are not proportional"));
            }
            // g = (x + c y, y) ∘ (g1 - c g2, g2)
            letters.push(AmalgamLetter::Affine {
                matrix: [
                    [BigRational::one(), c.clone()],
                    [BigRational::zero(), BigRational::one()],
                ],
                translation: [BigRational::zero(), BigRational::zero()],
            });
            g1 = &g1 - &g2.scale(&c);
        } else {
            if d2 % d1 != 0 {
                return Err(stuck("degrees do not divide"));
            }
            let k = d2 / d1;
            let top1k = top1.pow(k);
            let c = top2.leading_coeff().unwrap() / top1k.leading_coeff().unwrap();
            if top2 != top1k.scale(&c) {
                return Err(stuck("leading form is not a power of the other"));
            }
            // g = (x, y + c x^k) ∘ (g1, g2 - c g1^k)
            letters.push(AmalgamLetter::Jonquieres {
                a: BigRational::one(),
                b: BigRational::zero(),
                c: BigRational::one(),
                f: x.pow(k).scale(&c),
            });
            g2 = &g2 - &g1.pow(k).scale(&c);
        }
        degrees.push(g1.degree().unwrap_or(0).max(g2.degree().unwrap_or(0)));
    }
    Err(stuck("iteration budget exhausted"))
}

/// Decomposition whose letters all commute with scalar multiplication by
/// `k`-th roots of unity.
pub fn equivariant_decompose(f: &PolyMap, k: u32) -> Result<AmalgamWord> {
    if !is_mu_d_equivariant(f, k) {
        return Err(Error::NotEquivariant {
            d: k,
            reason: "some component has a degree not congruent to 1".into(),
        });
    }
    let word = jvdk_decompose(f)?;
    for l in &word.letters {
        if !is_mu_d_equivariant(&l.to_map(), k) {
            return Err(Error::Internal(format!(
                "decomposition produced a letter {} that is not mu_{k}-equivariant",
                l.to_map()
            )));
        }
    }
    Ok(word)
}

/// The Jacobian determinant `j(f)`.
pub fn special_jacobian(f: &PolyMap) -> Polynomial {
    f.jacobian().det
}

/// `j(f)` of a quotient automorphism, computed on its lift.
pub fn special_jacobian_quotient(q: &crate::equilift::QuotientAuto) -> Result<Polynomial> {
    let lifted = crate::equilift::lift(q)?;
    Ok(special_jacobian(&lifted.map))
}

/// Membership test for the subgroup generated by unipotent elements:
/// `j(f)` is a nonzero constant.
pub fn in_unipotent_subgroup(f: &PolyMap) -> bool {
    matches!(special_jacobian(f).constant_value(), Some(c) if !c.is_zero())
}

// JSON ----------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum AmalgamLetterJson {
    Affine {
        matrix: [[String; 2]; 2],
        translation: [String; 2],
    },
    Jonquieres {
        a: String,
        b: String,
        c: String,
        f: Polynomial,
    },
}

#[derive(Serialize, Deserialize)]
struct AmalgamWordJson {
    letters: Vec<AmalgamLetterJson>,
    normalized: bool,
}

impl Serialize for AmalgamWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let letters = self
            .letters
            .iter()
            .map(|l| match l {
                AmalgamLetter::Affine {
                    matrix,
                    translation,
                } => AmalgamLetterJson::Affine {
                    matrix: matrix.clone().map(|r| r.map(|v| v.to_string())),
                    translation: translation.clone().map(|v| v.to_string()),
                },
                AmalgamLetter::Jonquieres { a, b, c, f } => AmalgamLetterJson::Jonquieres {
                    a: a.to_string(),
                    b: b.to_string(),
                    c: c.to_string(),
                    f: f.clone(),
                },
            })
            .collect();
        AmalgamWordJson {
            letters,
            normalized: self.normalized,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AmalgamWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = AmalgamWordJson::deserialize(d)?;
        let r = |s: &String| parse_rational(s).map_err(D::Error::custom);
        let mut letters = Vec::new();
        for l in j.letters {
            letters.push(match l {
                AmalgamLetterJson::Affine {
                    matrix,
                    translation,
                } => {
                    let m = [
                        [r(&matrix[0][0])?, r(&matrix[0][1])?],
                        [r(&matrix[1][0])?, r(&matrix[1][1])?],
                    ];
                    let rows: Vec<Vec<BigRational>> = m.iter().map(|x| x.to_vec()).collect();
                    if rational_det(&rows).is_zero() {
                        return Err(D::Error::custom("singular affine letter"));
                    }
                    AmalgamLetter::Affine {
                        matrix: m,
                        translation: [r(&translation[0])?, r(&translation[1])?],
                    }
                }
                AmalgamLetterJson::Jonquieres { a, b, c, f } => {
                    let (a, b, c) = (r(&a)?, r(&b)?, r(&c)?);
                    if a.is_zero() || c.is_zero() || f.nvars() != 2 || f.depends_on(1) {
                        return Err(D::Error::custom("invalid de Jonquieres letter"));
                    }
                    AmalgamLetter::Jonquieres { a, b, c, f }
                }
            });
        }
        Ok(AmalgamWord {
            letters,
            normalized: j.normalized,
        })
    }
}
