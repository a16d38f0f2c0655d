//! The Picard lattice of the plane blown up at `r` points.
//!
//! A class is stored in the exceptional basis as `(d0; m1, ..., mr)` and
//! denotes `d0*l - m1*e1 - ... - mr*er`, where `l` is the pullback of a line
//! and `ei` are the exceptional classes. Under this sign convention a plane
//! curve of degree `d` passing through the points with multiplicities `mi`
//! has nonnegative coordinates, and:
//!
//! * the exceptional class `ei` is stored with `mi = -1`,
//! * the canonical class `K = -3l + e1 + ... + er` is stored as `(-3; -1, ..., -1)`,
//! * `a . b = a0*b0 - sum(a.mi * b.mi)`, so `K . D = -3*d0 + sum(mi)`.
//!
//! All arithmetic is checked 64-bit integer arithmetic; overflow is an error.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cone::ConeDesc;
use crate::error::{Error, Result};

/// A divisor class `d0*l - sum(mi*ei)`.
///
/// Ordering is lexicographic on `(d0, m1, ..., mr)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DivisorClass {
    d0: i64,
    m: Vec<i64>,
}

impl DivisorClass {
    pub fn new(d0: i64, m: Vec<i64>) -> Self {
        DivisorClass { d0, m }
    }

    /// Builds a class from the flat coordinate list `[d0, m1, ..., mr]`.
    pub fn from_coords(coords: &[i64]) -> Option<Self> {
        let (&d0, m) = coords.split_first()?;
        Some(DivisorClass::new(d0, m.to_vec()))
    }

    pub fn zero(r: usize) -> Self {
        DivisorClass::new(0, vec![0; r])
    }

    /// The line class `l`.
    pub fn line(r: usize) -> Self {
        DivisorClass::new(1, vec![0; r])
    }

    /// The exceptional class `ei`, with `i` counted from 1.
    pub fn exceptional(r: usize, i: usize) -> Self {
        assert!(
            i >= 1 && i <= r,
            "exceptional index {i} out of range 1..={r}"
        );
        let mut m = vec![0; r];
        m[i - 1] = -1;
        DivisorClass::new(0, m)
    }

    /// `l` minus the listed exceptional classes (indices from 1).
    pub fn line_through(r: usize, points: &[usize]) -> Self {
        let mut m = vec![0; r];
        for &p in points {
            m[p - 1] += 1;
        }
        DivisorClass::new(1, m)
    }

    pub fn d0(&self) -> i64 {
        self.d0
    }

    pub fn m(&self) -> &[i64] {
        &self.m
    }

    /// Number of blown-up points this class is expressed over.
    pub fn r(&self) -> usize {
        self.m.len()
    }

    /// Coordinates `[d0, m1, ..., mr]`.
    pub fn coords(&self) -> Vec<i64> {
        let mut v = Vec::with_capacity(self.m.len() + 1);
        v.push(self.d0);
        v.extend_from_slice(&self.m);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.d0 == 0 && self.m.iter().all(|&x| x == 0)
    }

    fn check_rank(&self, other: &DivisorClass) -> Result<()> {
        if self.m.len() != other.m.len() {
            return Err(Error::RankMismatch {
                expected: self.m.len(),
                found: other.m.len(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.check_rank(other)?;
        let d0 = self
            .d0
            .checked_add(other.d0)
            .ok_or(Error::Overflow("class sum"))?;
        let m = self
            .m
            .iter()
            .zip(&other.m)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("class sum")))
            .collect::<Result<Vec<_>>>()?;
        Ok(DivisorClass::new(d0, m))
    }

    pub fn checked_sub(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.checked_add(&other.checked_neg()?)
    }

    pub fn checked_neg(&self) -> Result<DivisorClass> {
        self.checked_scale(-1)
    }

    pub fn checked_scale(&self, s: i64) -> Result<DivisorClass> {
        let d0 = self
            .d0
            .checked_mul(s)
            .ok_or(Error::Overflow("class scaling"))?;
        let m = self
            .m
            .iter()
            .map(|a| a.checked_mul(s).ok_or(Error::Overflow("class scaling")))
            .collect::<Result<Vec<_>>>()?;
        Ok(DivisorClass::new(d0, m))
    }

    /// `self + s * other`.
    pub fn checked_add_scaled(&self, s: i64, other: &DivisorClass) -> Result<DivisorClass> {
        self.checked_add(&other.checked_scale(s)?)
    }

    /// Divides out the gcd of the coordinates. The zero class is returned unchanged.
    pub fn primitive(&self) -> DivisorClass {
        let g = self
            .m
            .iter()
            .fold(self.d0.unsigned_abs(), |g, &x| gcd(g, x.unsigned_abs()));
        if g <= 1 {
            return self.clone();
        }
        let g = g as i64;
        DivisorClass::new(self.d0 / g, self.m.iter().map(|x| x / g).collect())
    }

    /// Parses `"d0,m1,...,mr"` and requires exactly `r + 1` fields.
    pub fn parse_with_rank(s: &str, r: usize) -> Result<DivisorClass> {
        let class: DivisorClass = s.parse()?;
        if class.r() != r {
            return Err(Error::ClassParse {
                input: s.to_string(),
                reason: format!("expected {} fields, found {}", r + 1, class.r() + 1),
            });
        }
        Ok(class)
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.d0)?;
        for (i, x) in self.m.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {x}")?;
        }
        write!(f, ")")
    }
}

/// Displays in the comma-separated form accepted by [`FromStr`].
impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.d0)?;
        for x in &self.m {
            write!(f, ",{x}")?;
        }
        Ok(())
    }
}

impl FromStr for DivisorClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: String| Error::ClassParse {
            input: s.to_string(),
            reason,
        };
        let coords = s
            .split(',')
            .map(|field| {
                let field = field.trim();
                field
                    .parse::<i64>()
                    .map_err(|e| err(format!("field {field:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        DivisorClass::from_coords(&coords).ok_or_else(|| err("empty class".into()))
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<i64>::deserialize(deserializer)?;
        DivisorClass::from_coords(&coords).ok_or_else(|| {
            serde::de::Error::custom("a divisor class needs at least the d0 coordinate")
        })
    }
}

/// Intersection number `a . b = a0*b0 - sum(a.mi * b.mi)`.
pub fn intersect(a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
    a.check_rank(b)?;
    let overflow = || Error::Overflow("intersection product");
    let mut acc = a.d0.checked_mul(b.d0).ok_or_else(overflow)?;
    for (x, y) in a.m.iter().zip(&b.m) {
        let p = x.checked_mul(*y).ok_or_else(overflow)?;
        acc = acc.checked_sub(p).ok_or_else(overflow)?;
    }
    Ok(acc)
}

/// The Picard lattice of the blow-up of the plane at `r` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceModel {
    r: usize,
}

impl SurfaceModel {
    /// Arithmetic genus of the surface itself, always 0 for rational surfaces.
    pub const PA: i64 = 0;

    pub fn new(r: usize) -> Self {
        SurfaceModel { r }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Rank of the Picard group, `r + 1`.
    pub fn rank(&self) -> usize {
        self.r + 1
    }

    pub fn canonical(&self) -> DivisorClass {
        DivisorClass::new(-3, vec![-1; self.r])
    }

    pub fn anticanonical(&self) -> DivisorClass {
        DivisorClass::new(3, vec![1; self.r])
    }

    /// `K^2 = 9 - r`.
    pub fn k_squared(&self) -> i64 {
        9 - self.r as i64
    }

    pub fn check(&self, d: &DivisorClass) -> Result<()> {
        if d.r() != self.r {
            return Err(Error::RankMismatch {
                expected: self.r,
                found: d.r(),
            });
        }
        Ok(())
    }

    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
        self.check(a)?;
        intersect(a, b)
    }

    pub fn square(&self, d: &DivisorClass) -> Result<i64> {
        self.intersect(d, d)
    }

    /// `D . K`.
    pub fn k_degree(&self, d: &DivisorClass) -> Result<i64> {
        self.intersect(d, &self.canonical())
    }

    /// Riemann-Roch right-hand side `chi(O(D)) = 1 + pa + (D^2 - D.K)/2`.
    pub fn euler_characteristic(&self, d: &DivisorClass) -> Result<i64> {
        let sq = self.square(d)?;
        let dk = self.k_degree(d)?;
        let diff = sq
            .checked_sub(dk)
            .ok_or(Error::Overflow("Euler characteristic"))?;
        if diff % 2 != 0 {
            return Err(Error::InvariantBreach(format!(
                "D^2 - D.K = {diff} is odd for {d:?}"
            )));
        }
        Ok(1 + Self::PA + diff / 2)
    }

    /// Adjunction genus `1 + (D^2 + D.K)/2`.
    pub fn arithmetic_genus(&self, d: &DivisorClass) -> Result<i64> {
        let sq = self.square(d)?;
        let dk = self.k_degree(d)?;
        let sum = sq
            .checked_add(dk)
            .ok_or(Error::Overflow("arithmetic genus"))?;
        if sum % 2 != 0 {
            return Err(Error::InvariantBreach(format!(
                "D^2 + D.K = {sum} is odd for {d:?}"
            )));
        }
        Ok(1 + sum / 2)
    }

    /// Lower bound on `h0(D)`.
    ///
    /// When `K - D` lies outside the effective cone the `h0(K - D)` term of
    /// Riemann-Roch vanishes and `h0(D) >= chi(D)`. Otherwise the bound is
    /// uninformative and 0 is returned.
    pub fn h0_lower_bound(&self, d: &DivisorClass, eff_cone: &ConeDesc) -> Result<i64> {
        let chi = self.euler_characteristic(d)?;
        let residual = self.canonical().checked_sub(d)?;
        if eff_cone.contains(&residual)? {
            return Ok(0);
        }
        Ok(chi.max(0))
    }

    /// `R^2 = -2` and `R.K = 0`.
    pub fn is_root(&self, d: &DivisorClass) -> Result<bool> {
        Ok(self.square(d)? == -2 && self.k_degree(d)? == 0)
    }

    /// `C^2 = -1` and `C.K = -1`.
    pub fn is_minus_one_class(&self, d: &DivisorClass) -> Result<bool> {
        Ok(self.square(d)? == -1 && self.k_degree(d)? == -1)
    }
}
