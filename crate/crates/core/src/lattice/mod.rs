//! Integral lattices: a free abelian group of finite rank with a symmetric
//! integer Gram matrix. Everything here is exact; no floating point.

pub(crate) mod enumerate;
mod normal_form;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{gcd_all, json};
use crate::error::{Error, Result};

pub use enumerate::enumerate_bounded_norm;
pub use normal_form::{integer_kernel, row_hermite_form};

/// Coordinates of a vector in the basis of some ambient lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeVector {
    #[serde(with = "json::vec")]
    pub coords: Vec<BigInt>,
}

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector { coords }
    }

    pub fn from_i64s(xs: &[i64]) -> Self {
        LatticeVector::new(xs.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector::new(vec![BigInt::zero(); rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.coords[i] = BigInt::one();
        v
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        LatticeVector::new(self.coords.iter().map(|x| x * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        LatticeVector::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        LatticeVector::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        LatticeVector::new(self.coords.iter().map(|x| -x).collect())
    }

    /// Exact division of every coordinate; `None` if `k` does not divide all of them.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        if k.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(self.len());
        for x in &self.coords {
            let (q, r) = x.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(LatticeVector::new(out))
    }

    /// gcd of the coordinates.
    pub fn divisibility(&self) -> Result<BigInt> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(gcd_all(&self.coords))
    }

    pub fn is_primitive(&self) -> Result<bool> {
        Ok(self.divisibility()?.is_one())
    }

    /// Primitive generator of the ray through `self`, with the first nonzero
    /// coordinate made positive. This is how walls are normalized.
    pub fn ray_normalized(&self) -> Result<Self> {
        let g = self.divisibility()?;
        let mut v = self.div_exact(&g).expect("gcd divides");
        if v.coords.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            v = v.neg();
        }
        Ok(v)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Plain JSON array form of a [`LatticeVector`], used when a vector is embedded
/// in a larger document (`"ample": [1, 3]`).
pub mod coords_json {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &LatticeVector, s: S) -> std::result::Result<S::Ok, S::Error> {
        json::vec::serialize(&v.coords, s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<LatticeVector, D::Error> {
        json::vec::deserialize(d).map(LatticeVector::new)
    }

    pub mod list {
        use super::*;
        use serde::Deserialize;
        pub fn serialize<S: Serializer>(
            vs: &[LatticeVector],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            let m: Vec<Vec<BigInt>> = vs.iter().map(|v| v.coords.clone()).collect();
            json::matrix::serialize(&m, s)
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<LatticeVector>, D::Error> {
            #[derive(Deserialize)]
            struct Rows(#[serde(with = "json::matrix")] Vec<Vec<BigInt>>);
            let Rows(m) = Rows::deserialize(d)?;
            Ok(m.into_iter().map(LatticeVector::new).collect())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLattice {
    rank: usize,
    #[serde(with = "json::matrix")]
    gram: Vec<Vec<BigInt>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

/// A lattice given by its Gram matrix in a fixed basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLattice", into = "RawLattice")]
pub struct IntLattice {
    gram: Vec<Vec<BigInt>>,
    label: Option<String>,
}

impl TryFrom<RawLattice> for IntLattice {
    type Error = Error;
    fn try_from(raw: RawLattice) -> Result<Self> {
        if raw.gram.len() != raw.rank {
            return Err(Error::InvalidLattice(format!(
                "rank {} but gram has {} rows",
                raw.rank,
                raw.gram.len()
            )));
        }
        let mut l = IntLattice::new(raw.gram)?;
        l.label = raw.label;
        Ok(l)
    }
}

impl From<IntLattice> for RawLattice {
    fn from(l: IntLattice) -> Self {
        RawLattice { rank: l.rank(), gram: l.gram, label: l.label }
    }
}

impl IntLattice {
    pub fn new(gram: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidLattice(format!("row {i} has length {}, expected {n}", row.len())));
            }
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidLattice(format!("gram not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(IntLattice { gram, label: None })
    }

    pub fn from_i64s(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn zero_rank() -> Self {
        IntLattice { gram: Vec::new(), label: None }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i].is_even())
    }

    pub fn check(&self, x: &LatticeVector) -> Result<()> {
        if x.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: x.len() });
        }
        Ok(())
    }

    /// `x^T G y`.
    pub fn bilinear(&self, x: &LatticeVector, y: &LatticeVector) -> Result<BigInt> {
        self.check(x)?;
        self.check(y)?;
        let gy = self.apply(y);
        Ok(x.coords.iter().zip(&gy).map(|(a, b)| a * b).sum())
    }

    pub fn square(&self, x: &LatticeVector) -> Result<BigInt> {
        self.bilinear(x, x)
    }

    /// `G y`, the linear form `x ↦ x·y` in coordinates.
    pub(crate) fn apply(&self, y: &LatticeVector) -> Vec<BigInt> {
        self.gram
            .iter()
            .map(|row| row.iter().zip(&y.coords).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Named lattices: `U`, `E8_minus`, `A1_minus`, `rank1(n)`.
    pub fn standard(name: &str) -> Result<Self> {
        let name = name.trim();
        let lattice = match name {
            "U" => IntLattice::from_i64s(&[&[0, 1], &[1, 0]])?,
            "E8_minus" => e8_minus(),
            "A1_minus" => IntLattice::from_i64s(&[&[-2]])?,
            _ => {
                let inner = name
                    .strip_prefix("rank1(")
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| Error::UnknownLattice(name.to_string()))?;
                let n: BigInt = inner
                    .trim()
                    .parse()
                    .map_err(|_| Error::UnknownLattice(name.to_string()))?;
                IntLattice::new(vec![vec![n]])?
            }
        };
        Ok(lattice.with_label(name))
    }

    /// Orthogonal direct sum (block-diagonal Gram).
    pub fn direct_sum(&self, other: &IntLattice) -> IntLattice {
        let (n, m) = (self.rank(), other.rank());
        let mut gram = vec![vec![BigInt::zero(); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                gram[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                gram[n + i][n + j] = other.gram[i][j].clone();
            }
        }
        let label = match (&self.label, &other.label) {
            (Some(a), Some(b)) => Some(format!("{a}+{b}")),
            _ => None,
        };
        IntLattice { gram, label }
    }

    pub fn direct_sum_all<'a>(parts: impl IntoIterator<Item = &'a IntLattice>) -> IntLattice {
        parts
            .into_iter()
            .fold(IntLattice::zero_rank(), |acc, l| acc.direct_sum(l))
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for d in diagonalize(&self.gram) {
            if d.is_positive() {
                sig.positive += 1;
            } else if d.is_negative() {
                sig.negative += 1;
            } else {
                sig.null += 1;
            }
        }
        sig
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.gram)
    }

    /// `|det G|`.
    pub fn discriminant(&self) -> BigInt {
        self.determinant().abs()
    }

    pub fn is_negative_definite(&self) -> bool {
        let s = self.signature();
        s.positive == 0 && s.null == 0
    }

    /// Saturated sublattice `{x : x·v = 0 for all v in vs}`.
    pub fn orthogonal_complement(&self, vs: &[LatticeVector]) -> Result<SublatticeEmbedding> {
        for v in vs {
            self.check(v)?;
        }
        let rows: Vec<Vec<BigInt>> = vs.iter().map(|v| self.apply(v)).collect();
        let kernel = integer_kernel(&rows, self.rank());
        let basis = row_hermite_form(kernel);
        SublatticeEmbedding::new(self.clone(), basis.into_iter().map(LatticeVector::new).collect())
    }

    /// The lattice `(Z^n, -G)`.
    pub fn negated(&self) -> IntLattice {
        IntLattice {
            gram: self.gram.iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
            label: self.label.as_ref().map(|l| format!("{l}(-1)")),
        }
    }
}

fn e8_minus() -> IntLattice {
    // Dynkin diagram T(2,3,5): a chain 0-1-2-3-4-5-6 with node 7 attached to node 4.
    let mut gram = vec![vec![BigInt::zero(); 8]; 8];
    for (i, row) in gram.iter_mut().enumerate() {
        row[i] = BigInt::from(-2);
    }
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    for (a, b) in edges {
        gram[a][b] = BigInt::one();
        gram[b][a] = BigInt::one();
    }
    IntLattice { gram, label: None }
}

/// Inertia of a real symmetric form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub null: usize,
}

impl Signature {
    pub fn new(positive: usize, negative: usize, null: usize) -> Self {
        Signature { positive, negative, null }
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.positive, self.negative, self.null]
    }
}

impl std::ops::Add for Signature {
    type Output = Signature;
    fn add(self, o: Signature) -> Signature {
        Signature::new(self.positive + o.positive, self.negative + o.negative, self.null + o.null)
    }
}

/// Congruence diagonalization over Q. Returns the diagonal; its sign pattern
/// is the inertia of the form.
pub fn diagonalize(gram: &[Vec<BigInt>]) -> Vec<BigRational> {
    let n = gram.len();
    let mut a: Vec<Vec<BigRational>> = gram
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        let pivot = (k..n).find(|&i| !a[i][i].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => {
                // All remaining diagonal entries vanish. Use an off-diagonal
                // entry a_ij: replacing e_i by e_i + e_j gives diagonal 2 a_ij.
                let off = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
                match off {
                    Some((i, j)) => {
                        for c in 0..n {
                            let t = a[j][c].clone();
                            a[i][c] += t;
                        }
                        for r in 0..n {
                            let t = a[r][j].clone();
                            a[r][i] += t;
                        }
                        i
                    }
                    None => {
                        diag.extend((k..n).map(|_| BigRational::zero()));
                        return diag;
                    }
                }
            }
        };
        a.swap(k, pivot);
        for row in a.iter_mut() {
            row.swap(k, pivot);
        }
        let p = a[k][k].clone();
        for j in k + 1..n {
            if a[j][k].is_zero() {
                continue;
            }
            let factor = &a[j][k] / &p;
            for c in k..n {
                let t = &factor * &a[k][c];
                a[j][c] -= t;
            }
            for r in k..n {
                let t = &factor * &a[r][k];
                a[r][j] -= t;
            }
        }
        diag.push(p);
    }
    diag
}

/// Bareiss fraction-free elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// A saturated sublattice together with its induced Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SublatticeEmbedding {
    pub ambient: IntLattice,
    pub basis: Vec<LatticeVector>,
    pub induced: IntLattice,
}

impl SublatticeEmbedding {
    pub fn new(ambient: IntLattice, basis: Vec<LatticeVector>) -> Result<Self> {
        let mut gram = Vec::with_capacity(basis.len());
        for b in &basis {
            let mut row = Vec::with_capacity(basis.len());
            for c in &basis {
                row.push(ambient.bilinear(b, c)?);
            }
            gram.push(row);
        }
        let induced = IntLattice::new(gram)?;
        Ok(SublatticeEmbedding { ambient, basis, induced })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Ambient coordinates of a vector given in sublattice coordinates.
    pub fn lift(&self, x: &LatticeVector) -> LatticeVector {
        let mut out = LatticeVector::zero(self.ambient.rank());
        for (k, b) in x.coords.iter().zip(&self.basis) {
            out = out.add(&b.scaled(k));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn v(xs: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(xs)
    }

    #[test]
    fn bilinear_examples() {
        let u = IntLattice::standard("U").unwrap();
        assert_eq!(u.bilinear(&v(&[1, 0]), &v(&[0, 1])).unwrap(), int(1));
        assert_eq!(u.square(&v(&[1, 1])).unwrap(), int(2));
        let a1 = IntLattice::standard("rank1(-2)").unwrap();
        assert_eq!(a1.square(&v(&[1])).unwrap(), int(-2));
        assert!(matches!(
            u.bilinear(&v(&[1]), &v(&[1, 0])),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn standard_lattices() {
        let u = IntLattice::standard("U").unwrap();
        assert_eq!(u.gram(), &[vec![int(0), int(1)], vec![int(1), int(0)]]);
        let e8 = IntLattice::standard("E8_minus").unwrap();
        assert_eq!(e8.signature(), Signature::new(0, 8, 0));
        assert_eq!(e8.discriminant(), int(1));
        assert!(e8.is_even());
        assert_eq!(IntLattice::standard("A1_minus").unwrap().gram(), &[vec![int(-2)]]);
        assert_eq!(IntLattice::standard("rank1(-2)").unwrap().gram(), &[vec![int(-2)]]);
        assert!(matches!(IntLattice::standard("D4"), Err(Error::UnknownLattice(_))));
    }

    #[test]
    fn sums_signatures_discriminants() {
        let u = IntLattice::standard("U").unwrap();
        let e8 = IntLattice::standard("E8_minus").unwrap();
        assert_eq!(u.signature(), Signature::new(1, 1, 0));
        assert_eq!(u.discriminant(), int(1));
        assert_eq!(u.determinant(), int(-1));
        let uu = u.direct_sum(&u);
        assert_eq!(uu.rank(), 4);
        assert_eq!(uu.signature(), Signature::new(2, 2, 0));
        assert_eq!(u.direct_sum(&IntLattice::zero_rank()).gram(), u.gram());
        let u4 = IntLattice::direct_sum_all([&u, &u, &u, &u]);
        assert_eq!(u4.discriminant(), int(1));
        let k3 = IntLattice::direct_sum_all([&u, &u, &u, &u, &e8, &e8]);
        assert_eq!(k3.rank(), 24);
        assert_eq!(k3.signature(), Signature::new(4, 20, 0));
        assert_eq!(k3.discriminant(), int(1));
        assert_eq!(IntLattice::zero_rank().signature(), Signature::new(0, 0, 0));
        assert_eq!(IntLattice::standard("rank1(-2)").unwrap().discriminant(), int(2));
    }

    #[test]
    fn signature_handles_zero_diagonal_and_degenerate_forms() {
        let l = IntLattice::from_i64s(&[&[0, 0, 1], &[0, 0, 0], &[1, 0, 0]]).unwrap();
        assert_eq!(l.signature(), Signature::new(1, 1, 1));
        let z = IntLattice::from_i64s(&[&[0, 0], &[0, 0]]).unwrap();
        assert_eq!(z.signature(), Signature::new(0, 0, 2));
        assert_eq!(z.determinant(), int(0));
    }

    #[test]
    fn complement_examples() {
        let u = IntLattice::standard("U").unwrap();
        let c = u.orthogonal_complement(&[v(&[1, 1])]).unwrap();
        assert_eq!(c.rank(), 1);
        assert_eq!(c.induced.gram(), &[vec![int(-2)]]);
        assert!(c.basis[0] == v(&[1, -1]) || c.basis[0] == v(&[-1, 1]));

        let c = u.orthogonal_complement(&[v(&[1, 0])]).unwrap();
        assert_eq!(c.basis, vec![v(&[1, 0])]);
        assert_eq!(c.induced.gram(), &[vec![int(0)]]);

        let a1 = IntLattice::standard("rank1(-2)").unwrap();
        assert_eq!(a1.orthogonal_complement(&[v(&[1])]).unwrap().rank(), 0);
    }

    #[test]
    fn complement_is_saturated_for_non_primitive_input() {
        // x·(2,4) = 0 in U: kernel of (4,2) is spanned by (1,-2), not (2,-4).
        let u = IntLattice::standard("U").unwrap();
        let c = u.orthogonal_complement(&[v(&[2, 4])]).unwrap();
        assert_eq!(c.rank(), 1);
        assert!(c.basis[0].is_primitive().unwrap());
    }

    #[test]
    fn primitivity() {
        assert_eq!(v(&[2, 4]).divisibility().unwrap(), int(2));
        assert!(!v(&[2, 4]).is_primitive().unwrap());
        assert!(v(&[1, 0]).is_primitive().unwrap());
        assert!(v(&[6, 10, 15]).is_primitive().unwrap());
        assert_eq!(v(&[0, 0]).divisibility(), Err(Error::ZeroVector));
    }

    #[test]
    fn ray_normalization() {
        assert_eq!(v(&[-2, 2]).ray_normalized().unwrap(), v(&[1, -1]));
        assert_eq!(v(&[0, -3]).ray_normalized().unwrap(), v(&[0, 1]));
    }

    #[test]
    fn json_schema() {
        let l: IntLattice =
            serde_json::from_str(r#"{"rank":2,"gram":[[0,1],[1,0]],"label":"U"}"#).unwrap();
        assert_eq!(l.label(), Some("U"));
        assert!(serde_json::from_str::<IntLattice>(r#"{"rank":2,"gram":[[0,1.0],[1,0]]}"#).is_err());
        assert!(serde_json::from_str::<IntLattice>(r#"{"rank":1,"gram":[[0,1],[1,0]]}"#).is_err());
        assert!(serde_json::from_str::<IntLattice>(r#"{"rank":2,"gram":[[0,1],[2,0]]}"#).is_err());
        let x: LatticeVector = serde_json::from_str(r#"{"coords":[1,-2]}"#).unwrap();
        assert_eq!(x, v(&[1, -2]));
        assert_eq!(serde_json::to_string(&x).unwrap(), r#"{"coords":[1,-2]}"#);
    }
}
