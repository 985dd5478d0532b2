//! Mukai vectors `(r, c, s)` over a surface model: pairing, cup product,
//! twists by line bundles, Euler characteristics and wall divisors.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{gcd_all, json};
use crate::error::{Error, Result};
use crate::lattice::{coords_json, IntLattice, LatticeVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurfaceKind {
    K3,
    Abelian,
}

impl SurfaceKind {
    /// The correction `ε` in `v(F) = (rk, c1, ch2 + ε·rk)`.
    pub fn epsilon(self) -> BigInt {
        match self {
            SurfaceKind::K3 => BigInt::one(),
            SurfaceKind::Abelian => BigInt::zero(),
        }
    }
}

impl FromStr for SurfaceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "k3" => Ok(SurfaceKind::K3),
            "abelian" => Ok(SurfaceKind::Abelian),
            other => Err(Error::Parse(format!("unknown surface kind `{other}`"))),
        }
    }
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurfaceKind::K3 => "K3",
            SurfaceKind::Abelian => "Abelian",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSurface {
    kind: SurfaceKind,
    ns: IntLattice,
    #[serde(with = "coords_json")]
    ample: LatticeVector,
    #[serde(default, with = "coords_json::list")]
    ample_constraints: Vec<LatticeVector>,
}

/// A K3 or abelian surface, seen through its Néron–Severi lattice and a
/// declared ample class. `ample_constraints` are classes `C` with the rule
/// "x ample ⇒ x·C > 0"; together with `x² > 0` they stand in for the ample cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSurface", into = "RawSurface")]
pub struct SurfaceModel {
    pub kind: SurfaceKind,
    pub ns: IntLattice,
    pub ample: LatticeVector,
    pub ample_constraints: Vec<LatticeVector>,
}

impl TryFrom<RawSurface> for SurfaceModel {
    type Error = Error;
    fn try_from(r: RawSurface) -> Result<Self> {
        SurfaceModel::new(r.kind, r.ns, r.ample, r.ample_constraints)
    }
}

impl From<SurfaceModel> for RawSurface {
    fn from(s: SurfaceModel) -> Self {
        RawSurface { kind: s.kind, ns: s.ns, ample: s.ample, ample_constraints: s.ample_constraints }
    }
}

impl SurfaceModel {
    pub fn new(
        kind: SurfaceKind,
        ns: IntLattice,
        ample: LatticeVector,
        ample_constraints: Vec<LatticeVector>,
    ) -> Result<Self> {
        if !ns.is_even() {
            return Err(Error::InvalidSurface("Néron–Severi lattice must be even".into()));
        }
        ns.check(&ample)?;
        if !ns.square(&ample)?.is_positive() {
            return Err(Error::InvalidSurface("declared ample class has non-positive square".into()));
        }
        for c in &ample_constraints {
            if !ns.bilinear(&ample, c)?.is_positive() {
                return Err(Error::InvalidSurface(format!(
                    "declared ample class violates constraint {c}"
                )));
            }
        }
        Ok(SurfaceModel { kind, ns, ample, ample_constraints })
    }

    /// Picard rank one, `NS = Z·h` with `h² = degree`, `h` ample.
    pub fn rho1(kind: SurfaceKind, degree: i64) -> Result<Self> {
        let ns = IntLattice::from_i64s(&[&[degree]])?.with_label(format!("<{degree}>"));
        SurfaceModel::new(kind, ns, LatticeVector::from_i64s(&[1]), Vec::new())
    }

    /// The degree-2, Picard-rank-one model every reduction ends on.
    pub fn canonical_target(kind: SurfaceKind) -> Self {
        Self::rho1(kind, 2).expect("valid model")
    }

    /// Elliptic model with `NS = Zσ ⊕ Zf`, `f² = 0`, `σ·f = 1` and `σ² = -2`
    /// (K3, section) or `σ² = 0` (abelian). The declared ample class is
    /// `σ + 3f` resp. `σ + f`, with constraints `x·σ > 0`, `x·f > 0`.
    pub fn elliptic(kind: SurfaceKind) -> Self {
        let (s2, l) = match kind {
            SurfaceKind::K3 => (-2, 3),
            SurfaceKind::Abelian => (0, 1),
        };
        let ns = IntLattice::from_i64s(&[&[s2, 1], &[1, 0]])
            .expect("symmetric")
            .with_label("elliptic");
        SurfaceModel::new(
            kind,
            ns,
            LatticeVector::from_i64s(&[1, l]),
            vec![LatticeVector::from_i64s(&[1, 0]), LatticeVector::from_i64s(&[0, 1])],
        )
        .expect("valid model")
    }

    /// Named models: `k3-elliptic`, `abelian-elliptic`, `k3-deg2`, `abelian-deg2`.
    pub fn preset(name: &str) -> Option<Self> {
        Some(match name {
            "k3-elliptic" => Self::elliptic(SurfaceKind::K3),
            "abelian-elliptic" => Self::elliptic(SurfaceKind::Abelian),
            "k3-deg2" => Self::canonical_target(SurfaceKind::K3),
            "abelian-deg2" => Self::canonical_target(SurfaceKind::Abelian),
            _ => return None,
        })
    }

    pub fn rho(&self) -> usize {
        self.ns.rank()
    }

    pub fn epsilon(&self) -> BigInt {
        self.kind.epsilon()
    }

    /// `σ² / 2` when the Néron–Severi Gram matrix has the elliptic shape
    /// `[[2e, 1], [1, 0]]`.
    pub fn elliptic_e(&self) -> Option<BigInt> {
        let g = self.ns.gram();
        if g.len() == 2 && g[0][1].is_one() && g[1][1].is_zero() && g[0][0].is_even() {
            Some(&g[0][0] / 2)
        } else {
            None
        }
    }

    pub fn is_canonical_target(&self) -> bool {
        self.ns.rank() == 1 && self.ns.gram()[0][0] == BigInt::from(2)
    }

    /// Membership in the declared positive-cone data: positive square, positive
    /// against the declared ample class and every constraint.
    pub fn is_numerically_ample(&self, x: &LatticeVector) -> Result<bool> {
        self.ns.check(x)?;
        if !self.ns.square(x)?.is_positive() || !self.ns.bilinear(x, &self.ample)?.is_positive() {
            return Ok(false);
        }
        for c in &self.ample_constraints {
            if !self.ns.bilinear(x, c)?.is_positive() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Numerical surrogate for effectivity of a divisor class: positive
    /// degree against the declared ample class and `ξ² >= -2`.
    pub fn is_numerically_effective_class(&self, xi: &LatticeVector) -> Result<bool> {
        Ok(self.ns.bilinear(xi, &self.ample)?.is_positive() && self.ns.square(xi)? >= BigInt::from(-2))
    }

    fn check(&self, v: &MukaiVector) -> Result<()> {
        if v.c.len() != self.rho() {
            return Err(Error::SurfaceMismatch(format!(
                "vector has {} NS coordinates, surface has Picard rank {}",
                v.c.len(),
                self.rho()
            )));
        }
        Ok(())
    }

    /// `(v, u) = c_v·c_u − r_v s_u − s_v r_u`.
    pub fn mukai_pairing(&self, v: &MukaiVector, u: &MukaiVector) -> Result<BigInt> {
        self.check(v)?;
        self.check(u)?;
        Ok(self.ns.bilinear(&v.c, &u.c)? - &v.r * &u.s - &v.s * &u.r)
    }

    pub fn square(&self, v: &MukaiVector) -> Result<BigInt> {
        self.mukai_pairing(v, v)
    }

    /// `v(F) = (rk, c1, ch2 + ε·rk)`.
    pub fn mukai_vector_of_sheaf(&self, rk: &BigInt, c1: &LatticeVector, ch2: &BigInt) -> Result<MukaiVector> {
        if rk.is_negative() {
            return Err(Error::NegativeRank(rk.to_string()));
        }
        self.ns.check(c1)?;
        Ok(MukaiVector::new(rk.clone(), c1.clone(), ch2 + self.epsilon() * rk))
    }

    /// Cup product on `H^{2*}`.
    pub fn mukai_product(&self, v: &MukaiVector, u: &MukaiVector) -> Result<MukaiVector> {
        self.check(v)?;
        self.check(u)?;
        let r = &v.r * &u.r;
        let c = u.c.scaled(&v.r).add(&v.c.scaled(&u.r));
        let s = &v.r * &u.s + &u.r * &v.s + self.ns.bilinear(&v.c, &u.c)?;
        Ok(MukaiVector::new(r, c, s))
    }

    /// `ch(L) = (1, c, c²/2)`.
    pub fn ch_line_bundle(&self, c: &LatticeVector) -> Result<MukaiVector> {
        let sq = self.ns.square(c)?;
        if sq.is_odd() {
            return Err(Error::OddSquare(sq.to_string()));
        }
        Ok(MukaiVector::new(BigInt::one(), c.clone(), sq / 2))
    }

    /// `v · ch(L)` for `c1(L) = c`.
    pub fn twist(&self, v: &MukaiVector, c: &LatticeVector) -> Result<MukaiVector> {
        self.mukai_product(v, &self.ch_line_bundle(c)?)
    }

    pub fn chi_pairing(&self, v: &MukaiVector, u: &MukaiVector) -> Result<BigInt> {
        Ok(-self.mukai_pairing(v, u)?)
    }

    /// `χ(v) = χ(v, v(O_S))`, i.e. `ε·r + s`.
    pub fn euler_characteristic(&self, v: &MukaiVector) -> Result<BigInt> {
        let structure_sheaf = MukaiVector::new(BigInt::one(), LatticeVector::zero(self.rho()), self.epsilon());
        self.chi_pairing(v, &structure_sheaf)
    }

    /// The wall bound `|v|` for `v0 >= 2`.
    pub fn norm_bound(&self, v: &MukaiVector) -> Result<BigRational> {
        if v.r < BigInt::from(2) {
            return Err(Error::RankTooSmall(v.r.to_string()));
        }
        let sq = BigRational::from_integer(self.square(v)?);
        let r2 = BigRational::from_integer(&v.r * &v.r);
        let tail = match self.kind {
            SurfaceKind::K3 => &r2 * &r2,
            SurfaceKind::Abelian => r2.clone(),
        };
        Ok(&r2 / BigRational::from_integer(4.into()) * sq + tail / BigRational::from_integer(2.into()))
    }

    /// If `u = v · ch(L)` for some line bundle, returns `c1(L)`.
    pub fn are_equivalent(&self, v: &MukaiVector, u: &MukaiVector) -> Result<Option<LatticeVector>> {
        self.check(v)?;
        self.check(u)?;
        if !v.r.is_positive() || !u.r.is_positive() {
            return Err(Error::NonPositiveRank);
        }
        if v.r != u.r {
            return Ok(None);
        }
        let Some(c) = u.c.sub(&v.c).div_exact(&v.r) else {
            return Ok(None);
        };
        match self.twist(v, &c) {
            Ok(t) if &t == u => Ok(Some(c)),
            _ => Ok(None),
        }
    }

    /// Coefficients of the reduced Hilbert polynomial
    /// `n² + 2(v1·H)/(v0 H²)·n + 2(v0+v2)/(v0 H²)`.
    pub fn reduced_hilbert_coeffs(&self, v: &MukaiVector, h: &LatticeVector) -> Result<HilbertCoeffs> {
        self.check(v)?;
        if v.r.is_zero() {
            return Err(Error::RankZeroHilbert);
        }
        if v.r.is_negative() {
            return Err(Error::NegativeRank(v.r.to_string()));
        }
        let h2 = self.ns.square(h)?;
        if !h2.is_positive() {
            return Err(Error::NotPositiveSquare);
        }
        let denom = &v.r * &h2;
        let two = BigInt::from(2);
        Ok(HilbertCoeffs([
            BigRational::one(),
            BigRational::new(&two * self.ns.bilinear(&v.c, h)?, denom.clone()),
            BigRational::new(&two * (&v.r + &v.s), denom),
        ]))
    }

    /// Divisor attached to a pair `(v, u)`: `u0 v1 − v0 u1` when `v0 > 0`,
    /// `u2 v1 − v2 u1` when `v0 = 0`.
    pub fn wall_divisor_of_pair(&self, v: &MukaiVector, u: &MukaiVector) -> Result<LatticeVector> {
        self.check(v)?;
        self.check(u)?;
        if v.r.is_positive() {
            Ok(v.c.scaled(&u.r).sub(&u.c.scaled(&v.r)))
        } else if v.r.is_zero() {
            if v.s.is_zero() {
                return Err(Error::DegenerateRankZero);
            }
            Ok(v.c.scaled(&u.s).sub(&u.c.scaled(&v.s)))
        } else {
            Err(Error::NegativeRank(v.r.to_string()))
        }
    }

    /// Numerical type of the moduli space of a primitive Mukai vector, plus the
    /// `v = 2w, w² = 2` case.
    pub fn classify_primitive_moduli(&self, v: &MukaiVector) -> Result<Classification> {
        self.check(v)?;
        if v.r.is_negative() {
            return Err(Error::NegativeRank(v.r.to_string()));
        }
        let sq = self.square(v)?;
        let div = v.divisibility()?;
        if div == BigInt::from(2) {
            let w = v.halved().expect("divisible by 2");
            if self.square(&w)? == BigInt::from(2) {
                let fiber_dimension = match self.kind {
                    SurfaceKind::K3 => None,
                    SurfaceKind::Abelian => Some(6),
                };
                return Ok(Classification { kind: ModuliKind::OlsSingular, dimension: 10.into(), fiber_dimension });
            }
        }
        if !div.is_one() {
            return Err(Error::Unclassified(format!("non-primitive vector with divisibility {div}")));
        }
        let classification = match self.kind {
            SurfaceKind::K3 if sq == BigInt::from(-2) => Classification::new(ModuliKind::Point, BigInt::zero()),
            SurfaceKind::K3 if sq.is_zero() => Classification::new(ModuliKind::K3Surface, 2.into()),
            SurfaceKind::K3 if sq >= BigInt::from(2) => {
                Classification::new(ModuliKind::IrreducibleSymplectic, &sq + 2)
            }
            SurfaceKind::Abelian if sq >= BigInt::from(6) => Classification::new(ModuliKind::KummerType, &sq - 2),
            _ => return Err(Error::Unclassified(format!("{} surface with v² = {sq}", self.kind))),
        };
        Ok(classification)
    }
}

/// `(r, c, s)` with `c` in Néron–Severi coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MukaiVector {
    #[serde(with = "json::scalar")]
    pub r: BigInt,
    #[serde(with = "coords_json")]
    pub c: LatticeVector,
    #[serde(with = "json::scalar")]
    pub s: BigInt,
}

impl MukaiVector {
    pub fn new(r: BigInt, c: LatticeVector, s: BigInt) -> Self {
        MukaiVector { r, c, s }
    }

    pub fn from_i64s(r: i64, c: &[i64], s: i64) -> Self {
        MukaiVector::new(r.into(), LatticeVector::from_i64s(c), s.into())
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        MukaiVector::new(&self.r * k, self.c.scaled(k), &self.s * k)
    }

    /// `(r, −c, s)`.
    pub fn dual(&self) -> Self {
        MukaiVector::new(self.r.clone(), self.c.neg(), self.s.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero() && self.c.is_zero()
    }

    pub fn divisibility(&self) -> Result<BigInt> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(gcd_all(std::iter::once(&self.r).chain(&self.c.coords).chain(std::iter::once(&self.s))))
    }

    pub fn is_primitive(&self) -> Result<bool> {
        Ok(self.divisibility()?.is_one())
    }

    /// `w` with `self = 2w`, if every component is even.
    pub fn halved(&self) -> Option<Self> {
        let two = BigInt::from(2);
        if !self.r.is_even() || !self.s.is_even() {
            return None;
        }
        Some(MukaiVector::new(&self.r / &two, self.c.div_exact(&two)?, &self.s / &two))
    }
}

/// Compact text form `r,(c1,...,cρ),s`.
impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.r, self.c, self.s)
    }
}

impl FromStr for MukaiVector {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected `r,(c1,...,cρ),s`, found `{text}`"));
        let t = text.trim();
        let open = t.find('(').ok_or_else(bad)?;
        let close = t.rfind(')').ok_or_else(bad)?;
        if close < open {
            return Err(bad());
        }
        let r = t[..open].trim().strip_suffix(',').ok_or_else(bad)?.trim();
        let s = t[close + 1..].trim().strip_prefix(',').ok_or_else(bad)?.trim();
        let inner = t[open + 1..close].trim();
        let coords = if inner.is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|x| x.trim().parse::<BigInt>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(MukaiVector::new(
            r.parse().map_err(|_| bad())?,
            LatticeVector::new(coords),
            s.parse().map_err(|_| bad())?,
        ))
    }
}

/// Parses a comma-separated class such as `1,3`.
pub fn parse_class(text: &str) -> Result<LatticeVector> {
    let t = text.trim().trim_start_matches('(').trim_end_matches(')');
    if t.is_empty() {
        return Ok(LatticeVector::new(Vec::new()));
    }
    t.split(',')
        .map(|x| x.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("bad class `{text}`"))))
        .collect::<Result<Vec<_>>>()
        .map(LatticeVector::new)
}

/// `(1, b, c)` of a reduced Hilbert polynomial; ordered lexicographically,
/// which is the order of the polynomials for `n ≫ 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HilbertCoeffs(pub [BigRational; 3]);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModuliKind {
    Point,
    K3Surface,
    IrreducibleSymplectic,
    KummerType,
    /// `v = 2w`, `w² = 2`: singular, with a symplectic resolution.
    OlsSingular,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: ModuliKind,
    #[serde(with = "json::scalar")]
    pub dimension: BigInt,
    /// Dimension of the Albanese fiber for abelian surfaces in the `2w` case.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fiber_dimension: Option<u32>,
}

impl Classification {
    fn new(kind: ModuliKind, dimension: BigInt) -> Self {
        Classification { kind, dimension, fiber_dimension: None }
    }
}
