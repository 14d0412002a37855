//! Polynomial endomorphisms of affine space.
//!
//! Composition follows the usual convention: `f.compose(&g)` is `f ∘ g`,
//! the map `v ↦ f(g(v))`, so `(f ∘ g)_i = f_i(g_1, ..., g_n)`.
//!
//! Raw [`PolyMap`]s are never assumed to be invertible. An [`Automorphism`]
//! carries its inverse, obtained from a word in elementary generators, from
//! the plane decomposition, or from an explicitly verified witness.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{parse_rational, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolyMapJson", into = "PolyMapJson")]
pub struct PolyMap {
    nvars: usize,
    components: Vec<Polynomial>,
}

#[derive(Serialize, Deserialize)]
struct PolyMapJson {
    nvars: usize,
    components: Vec<Polynomial>,
}

impl From<PolyMap> for PolyMapJson {
    fn from(f: PolyMap) -> Self {
        PolyMapJson {
            nvars: f.nvars,
            components: f.components,
        }
    }
}

impl TryFrom<PolyMapJson> for PolyMap {
    type Error = Error;
    fn try_from(j: PolyMapJson) -> Result<Self> {
        PolyMap::new(j.nvars, j.components)
    }
}

impl PolyMap {
    /// Builds a map from its component images; component `i` is the image of
    /// `x_{i+1}`.
    pub fn new(nvars: usize, components: Vec<Polynomial>) -> Result<Self> {
        if components.len() != nvars {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: components.len(),
            });
        }
        if let Some(c) = components.iter().find(|c| c.nvars() != nvars) {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: c.nvars(),
            });
        }
        Ok(PolyMap { nvars, components })
    }

    pub fn identity(nvars: usize) -> Self {
        PolyMap {
            nvars,
            components: (0..nvars).map(|i| Polynomial::var(nvars, i)).collect(),
        }
    }

    /// Parses one polynomial per component.
    pub fn parse(components: &[&str], nvars: usize) -> Result<Self> {
        let comps = components
            .iter()
            .map(|s| Polynomial::parse(s, nvars))
            .collect::<Result<Vec<_>>>()?;
        Self::new(nvars, comps)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.nvars)
    }

    /// Largest component degree (zero components count as degree 0).
    pub fn degree(&self) -> u32 {
        self.components
            .iter()
            .filter_map(Polynomial::degree)
            .max()
            .unwrap_or(0)
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &PolyMap) -> Result<PolyMap> {
        if self.nvars != g.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: g.nvars,
            });
        }
        let components = self
            .components
            .iter()
            .map(|c| c.substitute(&g.components))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMap {
            nvars: self.nvars,
            components,
        })
    }

    /// `p ∘ self`, the pull-back of `p` along this map.
    pub fn pullback(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.nvars() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: p.nvars(),
            });
        }
        p.substitute(&self.components)
    }

    pub fn evaluate(&self, point: &[BigRational]) -> Result<Vec<BigRational>> {
        self.components.iter().map(|c| c.evaluate(point)).collect()
    }

    /// Applies `f` to every component.
    pub fn map_components(&self, f: impl Fn(&Polynomial) -> Polynomial) -> PolyMap {
        PolyMap {
            nvars: self.nvars,
            components: self.components.iter().map(f).collect(),
        }
    }

    /// Extends to `nvars + k` variables, acting as the identity on the new ones.
    pub fn extend_vars(&self, k: usize) -> PolyMap {
        let n = self.nvars + k;
        let mut components: Vec<Polynomial> =
            self.components.iter().map(|c| c.extend_vars(k)).collect();
        components.extend((self.nvars..n).map(|i| Polynomial::var(n, i)));
        PolyMap {
            nvars: n,
            components,
        }
    }

    pub fn jacobian(&self) -> JacobianData {
        jacobian(self)
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Jacobian matrix `(∂f_i/∂x_j)` with its exact determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianData {
    pub matrix: Vec<Vec<Polynomial>>,
    pub det: Polynomial,
}

impl JacobianData {
    /// The determinant as a rational constant, if it is one.
    pub fn constant_det(&self) -> Option<BigRational> {
        self.det.constant_value()
    }
}

pub fn jacobian(f: &PolyMap) -> JacobianData {
    let n = f.nvars;
    let matrix: Vec<Vec<Polynomial>> = f
        .components
        .iter()
        .map(|c| (0..n).map(|j| c.derivative(j)).collect())
        .collect();
    let det = poly_det(&matrix, n);
    JacobianData { matrix, det }
}

/// Laplace expansion along the first row.
fn poly_det(m: &[Vec<Polynomial>], nvars: usize) -> Polynomial {
    let size = m.len();
    if size == 0 {
        return Polynomial::one(nvars);
    }
    if size == 1 {
        return m[0][0].clone();
    }
    if size == 2 {
        return &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
    }
    let mut total = Polynomial::zero(nvars);
    for j in 0..size {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * &poly_det(&minor, nvars);
        total = if j % 2 == 0 {
            &total + &term
        } else {
            &total - &term
        };
    }
    total
}

/// Determinant of a rational matrix by elimination.
pub fn rational_det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let pivot = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot[c];
            for (x, y) in row.iter_mut().zip(&pivot).skip(c) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Inverse of an invertible rational matrix.
pub fn rational_inverse(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    let pivots = crate::linalg::rref(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// One elementary generator of the tame subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Letter {
    /// `x ↦ M x + b`.
    Affine {
        matrix: Vec<Vec<BigRational>>,
        translation: Vec<BigRational>,
    },
    /// `x_i ↦ a x_i + P`, other variables fixed; `P` does not involve `x_i`.
    Triangular {
        index: usize,
        scalar: BigRational,
        poly: Polynomial,
    },
}

impl Letter {
    pub fn affine(matrix: Vec<Vec<BigRational>>, translation: Vec<BigRational>) -> Result<Self> {
        let n = matrix.len();
        if translation.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: translation.len(),
            });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        if rational_det(&matrix).is_zero() {
            return Err(Error::NotInvertible("singular affine matrix".into()));
        }
        Ok(Letter::Affine {
            matrix,
            translation,
        })
    }

    pub fn linear(matrix: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = matrix.len();
        Self::affine(matrix, vec![BigRational::zero(); n])
    }

    pub fn triangular(index: usize, scalar: BigRational, poly: Polynomial) -> Result<Self> {
        if index >= poly.nvars() {
            return Err(Error::InvalidArgument(format!(
                "triangular index {} out of range",
                index + 1
            )));
        }
        if scalar.is_zero() {
            return Err(Error::NotInvertible("triangular scalar is zero".into()));
        }
        if poly.depends_on(index) {
            return Err(Error::InvalidArgument(format!(
                "triangular polynomial must not involve x{}",
                index + 1
            )));
        }
        Ok(Letter::Triangular {
            index,
            scalar,
            poly,
        })
    }

    /// The permutation swapping `x_{i+1}` and `x_{j+1}`.
    pub fn swap(n: usize, i: usize, j: usize) -> Self {
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for (k, row) in m.iter_mut().enumerate() {
            let t = if k == i {
                j
            } else if k == j {
                i
            } else {
                k
            };
            row[t] = BigRational::one();
        }
        Letter::Affine {
            matrix: m,
            translation: vec![BigRational::zero(); n],
        }
    }

    pub fn nvars(&self) -> usize {
        match self {
            Letter::Affine { matrix, .. } => matrix.len(),
            Letter::Triangular { poly, .. } => poly.nvars(),
        }
    }

    pub fn to_map(&self) -> PolyMap {
        match self {
            Letter::Affine {
                matrix,
                translation,
            } => {
                let n = matrix.len();
                let components = matrix
                    .iter()
                    .zip(translation)
                    .map(|(row, b)| {
                        let mut c = Polynomial::constant(n, b.clone());
                        for (j, a) in row.iter().enumerate() {
                            c = &c + &Polynomial::var(n, j).scale(a);
                        }
                        c
                    })
                    .collect();
                PolyMap {
                    nvars: n,
                    components,
                }
            }
            Letter::Triangular {
                index,
                scalar,
                poly,
            } => {
                let n = poly.nvars();
                let mut f = PolyMap::identity(n);
                f.components[*index] = &Polynomial::var(n, *index).scale(scalar) + poly;
                f
            }
        }
    }

    pub fn inverse(&self) -> Letter {
        match self {
            Letter::Affine {
                matrix,
                translation,
            } => {
                let inv = rational_inverse(matrix).expect("affine letters are invertible");
                let t = inv
                    .iter()
                    .map(|row| -row.iter().zip(translation).map(|(a, b)| a * b).sum::<BigRational>())
                    .collect();
                Letter::Affine {
                    matrix: inv,
                    translation: t,
                }
            }
            Letter::Triangular {
                index,
                scalar,
                poly,
            } => {
                let inv = BigRational::one() / scalar;
                Letter::Triangular {
                    index: *index,
                    scalar: inv.clone(),
                    poly: poly.scale(&-inv),
                }
            }
        }
    }
}

/// A word in affine and triangular generators; it evaluates to the
/// composition `L1 ∘ L2 ∘ ... ∘ Lk`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutoWord {
    nvars: usize,
    letters: Vec<Letter>,
}

impl AutoWord {
    pub fn new(nvars: usize, letters: Vec<Letter>) -> Result<Self> {
        if let Some(l) = letters.iter().find(|l| l.nvars() != nvars) {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: l.nvars(),
            });
        }
        Ok(AutoWord { nvars, letters })
    }

    pub fn empty(nvars: usize) -> Self {
        AutoWord {
            nvars,
            letters: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn concat(&self, other: &AutoWord) -> Result<AutoWord> {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        AutoWord::new(self.nvars, letters)
    }

    /// Reversed word of inverted letters.
    pub fn inverse(&self) -> AutoWord {
        AutoWord {
            nvars: self.nvars,
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    pub fn eval(&self) -> PolyMap {
        word_eval(self)
    }
}

pub fn word_eval(w: &AutoWord) -> PolyMap {
    // Right to left keeps each substitution small: L_i ∘ (L_{i+1} ∘ ...).
    let mut acc = PolyMap::identity(w.nvars);
    for letter in w.letters.iter().rev() {
        acc = letter
            .to_map()
            .compose(&acc)
            .expect("letters share the word's dimension");
    }
    acc
}

pub fn compose(f: &PolyMap, g: &PolyMap) -> Result<PolyMap> {
    f.compose(g)
}

pub fn pullback(f: &PolyMap, p: &Polynomial) -> Result<Polynomial> {
    f.pullback(p)
}

/// A polynomial map together with a verified two-sided inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    map: PolyMap,
    inverse: PolyMap,
}

impl Automorphism {
    pub fn identity(n: usize) -> Self {
        Automorphism {
            map: PolyMap::identity(n),
            inverse: PolyMap::identity(n),
        }
    }

    pub fn from_word(w: &AutoWord) -> Self {
        Automorphism {
            map: w.eval(),
            inverse: w.inverse().eval(),
        }
    }

    /// Certifies `map` by checking `map ∘ witness = witness ∘ map = id`.
    pub fn with_witness(map: PolyMap, witness: PolyMap) -> Result<Self> {
        let id = PolyMap::identity(map.nvars);
        if map.compose(&witness)? != id || witness.compose(&map)? != id {
            return Err(Error::NotInvertible("witness is not a two-sided inverse".into()));
        }
        Ok(Automorphism {
            map,
            inverse: witness,
        })
    }

    /// Certifies a map of the plane through its amalgam decomposition.
    pub fn from_plane_map(map: PolyMap) -> Result<Self> {
        if map.nvars != 2 {
            return Err(Error::Unsupported(
                "decomposition-based certification needs two variables".into(),
            ));
        }
        let word = crate::plane::jvdk_decompose(&map)
            .map_err(|e| Error::NotInvertible(e.to_string()))?;
        let inverse = word.inverse().eval();
        Self::with_witness(map, inverse)
    }

    pub fn map(&self) -> &PolyMap {
        &self.map
    }

    pub fn inverse_map(&self) -> &PolyMap {
        &self.inverse
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism {
            map: self.inverse.clone(),
            inverse: self.map.clone(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.map.nvars
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        Ok(Automorphism {
            map: self.map.compose(&other.map)?,
            inverse: other.inverse.compose(&self.inverse)?,
        })
    }
}

/// Inverse of `f`, certified by a witness, the plane decomposition, or (in one
/// variable) the affine formula.
pub fn invert(f: &PolyMap, witness: Option<&PolyMap>) -> Result<PolyMap> {
    if let Some(w) = witness {
        return Automorphism::with_witness(f.clone(), w.clone()).map(|a| a.inverse);
    }
    let jac = jacobian(f);
    match jac.constant_det() {
        Some(c) if !c.is_zero() => {}
        _ => {
            return Err(Error::NotInvertible(format!(
                "Jacobian determinant {} is not a nonzero constant",
                jac.det
            )))
        }
    }
    match f.nvars {
        1 => {
            // constant nonzero derivative means f = a x + b
            let c = f.component(0);
            let a = c.derivative(0).constant_value().expect("checked above");
            let b = c.constant_value_at_origin();
            let inv = &Polynomial::var(1, 0).scale(&(BigRational::one() / &a))
                - &Polynomial::constant(1, b / &a);
            PolyMap::new(1, vec![inv])
        }
        2 => Automorphism::from_plane_map(f.clone()).map(|a| a.inverse),
        n => Err(Error::Unsupported(format!(
            "cannot certify invertibility of a raw map in {n} variables without a witness"
        ))),
    }
}

// JSON forms for words -------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum LetterJson {
    Affine {
        matrix: Vec<Vec<String>>,
        translation: Vec<String>,
    },
    Triangular {
        index: usize,
        scalar: String,
        poly: Polynomial,
    },
}

#[derive(Serialize, Deserialize)]
struct AutoWordJson {
    nvars: usize,
    letters: Vec<LetterJson>,
}

impl Serialize for AutoWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let letters = self
            .letters
            .iter()
            .map(|l| match l {
                Letter::Affine {
                    matrix,
                    translation,
                } => LetterJson::Affine {
                    matrix: matrix
                        .iter()
                        .map(|r| r.iter().map(ToString::to_string).collect())
                        .collect(),
                    translation: translation.iter().map(ToString::to_string).collect(),
                },
                Letter::Triangular {
                    index,
                    scalar,
                    poly,
                } => LetterJson::Triangular {
                    index: index + 1,
                    scalar: scalar.to_string(),
                    poly: poly.clone(),
                },
            })
            .collect();
        AutoWordJson {
            nvars: self.nvars,
            letters,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AutoWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = AutoWordJson::deserialize(d)?;
        let conv = |r: Result<Letter>| r.map_err(D::Error::custom);
        let rats = |v: &[String]| -> std::result::Result<Vec<BigRational>, D::Error> {
            v.iter()
                .map(|s| parse_rational(s).map_err(D::Error::custom))
                .collect()
        };
        let mut letters = Vec::new();
        for l in j.letters {
            letters.push(match l {
                LetterJson::Affine {
                    matrix,
                    translation,
                } => {
                    let m = matrix
                        .iter()
                        .map(|r| rats(r))
                        .collect::<std::result::Result<Vec<_>, _>>()?;
                    conv(Letter::affine(m, rats(&translation)?))?
                }
                LetterJson::Triangular {
                    index,
                    scalar,
                    poly,
                } => {
                    if index == 0 {
                        return Err(D::Error::custom("letter indices are 1-based"));
                    }
                    let a = parse_rational(&scalar).map_err(D::Error::custom)?;
                    conv(Letter::triangular(index - 1, a, poly))?
                }
            });
        }
        AutoWord::new(j.nvars, letters).map_err(D::Error::custom)
    }
}
