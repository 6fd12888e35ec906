//! Exact lattice and rational arithmetic shared by the geometric modules.
//!
//! Exponent vectors live in N² or N³. Weight vectors are integer vectors,
//! kept primitive when they stand for a face normal. All lattice
//! computations run on `i128` intermediates; with exponents bounded by
//! [`MAX_EXPONENT`] no product or sum can overflow, so every result is exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest exponent accepted anywhere in the crate.
pub const MAX_EXPONENT: u32 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("unsupported dimension {0} (expected 2 or 3)")]
    UnsupportedDimension(usize),
    #[error("exponent {0} exceeds the maximum {MAX_EXPONENT}")]
    ExponentTooLarge(u64),
    #[error("points are collinear")]
    Degenerate,
    #[error("plane through the points has no strictly positive normal")]
    NotInnerNormal,
    #[error("weight vector {0} is not strictly positive")]
    NonPositiveWeight(WeightVector),
    #[error("zero weight vector")]
    ZeroWeight,
    #[error("empty point set")]
    EmptySupport,
}

/// A coordinate axis of the ambient space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Axis> {
        Axis::ALL.get(i).copied()
    }

    /// The axes of a `dim`-dimensional space.
    pub fn all(dim: usize) -> &'static [Axis] {
        &Axis::ALL[..dim.min(3)]
    }

    pub fn name(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }

    /// The two axes other than `self`, in increasing order.
    pub fn others(self) -> [Axis; 2] {
        match self {
            Axis::X => [Axis::Y, Axis::Z],
            Axis::Y => [Axis::X, Axis::Z],
            Axis::Z => [Axis::X, Axis::Y],
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(format!("unknown axis '{other}'")),
        }
    }
}

/// A lattice point of N² or N³, identified with a monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(coords: Vec<u32>) -> Result<Self, LatticeError> {
        if coords.len() != 2 && coords.len() != 3 {
            return Err(LatticeError::UnsupportedDimension(coords.len()));
        }
        if let Some(&c) = coords.iter().find(|&&c| c > MAX_EXPONENT) {
            return Err(LatticeError::ExponentTooLarge(c as u64));
        }
        Ok(ExponentVector(coords))
    }

    pub fn zero(dim: usize) -> Self {
        ExponentVector(vec![0; dim])
    }

    /// `m · e_axis`.
    pub fn pure_power(dim: usize, axis: Axis, m: u32) -> Self {
        let mut v = vec![0; dim];
        v[axis.index()] = m;
        ExponentVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, axis: Axis) -> u32 {
        self.0[axis.index()]
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    /// Coordinates as `i128`, padded to length 3.
    pub fn lift(&self) -> [i128; 3] {
        let mut out = [0i128; 3];
        for (o, &c) in out.iter_mut().zip(&self.0) {
            *o = c as i128;
        }
        out
    }

    /// `self − e_axis`, if that stays in the lattice.
    pub fn lowered(&self, axis: Axis) -> Option<ExponentVector> {
        let i = axis.index();
        if self.0[i] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Some(ExponentVector(v))
    }

    /// Drops the coordinate of `axis`.
    pub fn without(&self, axis: Axis) -> ExponentVector {
        let v = self
            .0
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != axis.index())
            .map(|(_, &c)| c)
            .collect();
        ExponentVector(v)
    }

    /// True when `self ≥ other` coordinatewise.
    pub fn dominates(&self, other: &ExponentVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

impl TryFrom<Vec<u32>> for ExponentVector {
    type Error = LatticeError;

    fn try_from(v: Vec<u32>) -> Result<Self, Self::Error> {
        ExponentVector::new(v)
    }
}

impl From<ExponentVector> for Vec<u32> {
    fn from(v: ExponentVector) -> Self {
        v.0
    }
}

impl<const N: usize> From<[u32; N]> for ExponentVector {
    fn from(a: [u32; N]) -> Self {
        ExponentVector::new(a.to_vec()).expect("invalid exponent vector literal")
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An integer weight vector. Face normals are kept primitive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct WeightVector(Vec<i64>);

impl WeightVector {
    pub fn new(coords: Vec<i64>) -> Result<Self, LatticeError> {
        if coords.len() != 2 && coords.len() != 3 {
            return Err(LatticeError::UnsupportedDimension(coords.len()));
        }
        if coords.iter().all(|&c| c == 0) {
            return Err(LatticeError::ZeroWeight);
        }
        Ok(WeightVector(coords))
    }

    pub(crate) fn from_i128(coords: &[i128]) -> Result<Self, LatticeError> {
        let v = coords
            .iter()
            .map(|&c| i64::try_from(c).expect("weight entry out of range"))
            .collect();
        WeightVector::new(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn get(&self, axis: Axis) -> i64 {
        self.0[axis.index()]
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c > 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// Divides out the gcd of the entries.
    pub fn primitive(&self) -> WeightVector {
        let g = self.0.iter().fold(0i64, |g, &c| g.gcd(&c));
        WeightVector(self.0.iter().map(|&c| c / g).collect())
    }

    pub fn scaled(&self, k: i64) -> WeightVector {
        WeightVector(self.0.iter().map(|&c| c * k).collect())
    }

    pub(crate) fn lift(&self) -> [i128; 3] {
        let mut out = [0i128; 3];
        for (o, &c) in out.iter_mut().zip(&self.0) {
            *o = c as i128;
        }
        out
    }
}

impl TryFrom<Vec<i64>> for WeightVector {
    type Error = LatticeError;

    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        WeightVector::new(v)
    }
}

impl From<WeightVector> for Vec<i64> {
    fn from(v: WeightVector) -> Self {
        v.0
    }
}

impl<const N: usize> From<[i64; N]> for WeightVector {
    fn from(a: [i64; N]) -> Self {
        WeightVector::new(a.to_vec()).expect("invalid weight vector literal")
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Exact rational number, always in lowest terms with a positive denominator.
///
/// Serializes as the string `"p/q"`, or `"p"` when `q = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Rational {
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Rational {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Rational {
        Rational(BigRational::zero())
    }

    pub fn one() -> Rational {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn pow(&self, e: u32) -> Rational {
        Rational(num_traits::pow(self.0.clone(), e as usize))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| format!("bad rational '{s}'"))?;
        let d: BigInt = d.parse().map_err(|_| format!("bad rational '{s}'"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in '{s}'"));
        }
        Ok(Rational::new(n, d))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

/// `⟨w, p⟩`.
pub fn inner_product(w: &WeightVector, p: &ExponentVector) -> Result<i128, LatticeError> {
    if w.dim() != p.dim() {
        return Err(LatticeError::DimensionMismatch(w.dim(), p.dim()));
    }
    Ok(dot(&w.lift(), &p.lift()))
}

pub(crate) fn dot(a: &[i128; 3], b: &[i128; 3]) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn sub(a: &[i128; 3], b: &[i128; 3]) -> [i128; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn cross(a: &[i128; 3], b: &[i128; 3]) -> [i128; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn gcd_all(v: &[i128]) -> i128 {
    v.iter().fold(0i128, |g, &c| g.gcd(&c))
}

/// Divides a non-zero integer vector by the gcd of its entries.
pub(crate) fn make_primitive(v: &[i128]) -> Vec<i128> {
    let g = gcd_all(v);
    debug_assert!(g > 0);
    v.iter().map(|&c| c / g).collect()
}

/// Rank of a set of integer vectors in Z³.
pub(crate) fn rank(vectors: &[[i128; 3]]) -> usize {
    let mut basis: Vec<[i128; 3]> = Vec::with_capacity(3);
    for v in vectors {
        let independent = match basis.len() {
            0 => v.iter().any(|&c| c != 0),
            1 => cross(&basis[0], v).iter().any(|&c| c != 0),
            2 => dot(&cross(&basis[0], &basis[1]), v) != 0,
            _ => false,
        };
        if independent {
            basis.push(*v);
            if basis.len() == 3 {
                break;
            }
        }
    }
    basis.len()
}

/// Dimension of the affine hull of `points`, plus the extra `directions`.
pub(crate) fn affine_dim(points: &[[i128; 3]], directions: &[[i128; 3]]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let mut vs: Vec<[i128; 3]> = points[1..].iter().map(|p| sub(p, first)).collect();
    vs.extend_from_slice(directions);
    rank(&vs)
}

/// Primitive normal of the plane through three points, oriented to be
/// strictly positive.
pub fn primitive_positive_normal(
    p1: &ExponentVector,
    p2: &ExponentVector,
    p3: &ExponentVector,
) -> Result<WeightVector, LatticeError> {
    for p in [p2, p3] {
        if p.dim() != p1.dim() {
            return Err(LatticeError::DimensionMismatch(p1.dim(), p.dim()));
        }
    }
    if p1.dim() != 3 {
        return Err(LatticeError::UnsupportedDimension(p1.dim()));
    }
    let (a, b, c) = (p1.lift(), p2.lift(), p3.lift());
    let n = cross(&sub(&b, &a), &sub(&c, &a));
    if n.iter().all(|&x| x == 0) {
        return Err(LatticeError::Degenerate);
    }
    let n = make_primitive(&n);
    let oriented: Vec<i128> = if n.iter().all(|&x| x > 0) {
        n
    } else if n.iter().all(|&x| x < 0) {
        n.iter().map(|&x| -x).collect()
    } else {
        return Err(LatticeError::NotInnerNormal);
    };
    WeightVector::from_i128(&oriented)
}

/// Minimum of `⟨w, ·⟩` over `points`, together with every point attaining it.
pub fn weighted_min<'a>(
    w: &WeightVector,
    points: impl IntoIterator<Item = &'a ExponentVector>,
) -> Result<(i128, Vec<ExponentVector>), LatticeError> {
    if !w.is_positive() {
        return Err(LatticeError::NonPositiveWeight(w.clone()));
    }
    let mut best: Option<i128> = None;
    let mut argmin = Vec::new();
    for p in points {
        let v = inner_product(w, p)?;
        match best.map(|b| v.cmp(&b)) {
            None | Some(Ordering::Less) => {
                best = Some(v);
                argmin.clear();
                argmin.push(p.clone());
            }
            Some(Ordering::Equal) => argmin.push(p.clone()),
            Some(Ordering::Greater) => {}
        }
    }
    let level = best.ok_or(LatticeError::EmptySupport)?;
    argmin.sort();
    Ok((level, argmin))
}
