//! Validation of `(S, v, H)` triples with `v = 2w`, `w` primitive, `w² = 2`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::json;
use crate::chambers::{is_in_chamber, rank0_genericity, GenericityCertificate, GenericityVerdict};
use crate::error::{Error, Result};
use crate::lattice::{coords_json, LatticeVector};
use crate::mukai::{MukaiVector, SurfaceModel};

/// One failed clause of the triple conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OlsViolation {
    /// Some component of `v` is odd.
    NotTwice,
    HalfNotPrimitive,
    HalfSquare(#[serde(with = "json::scalar")] BigInt),
    NegativeRank,
    /// Rank 0 and `c(w)` fails the numerical effectivity rule.
    NotEffective,
    PolarizationNotPrimitive,
    PolarizationNotAmple,
    /// `H` lies on a candidate wall.
    NotGeneric,
}

impl std::fmt::Display for OlsViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OlsViolation::NotTwice => f.write_str("v is not twice an integral vector"),
            OlsViolation::HalfNotPrimitive => f.write_str("w = v/2 is not primitive"),
            OlsViolation::HalfSquare(x) => write!(f, "w² = {x}, expected 2"),
            OlsViolation::NegativeRank => f.write_str("w has negative rank"),
            OlsViolation::NotEffective => f.write_str("rank-0 c(w) is not numerically effective"),
            OlsViolation::PolarizationNotPrimitive => f.write_str("H is not primitive"),
            OlsViolation::PolarizationNotAmple => f.write_str("H is not in the declared ample cone"),
            OlsViolation::NotGeneric => f.write_str("H lies on a wall"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OlsTriple {
    pub surface: SurfaceModel,
    pub v: MukaiVector,
    pub w: MukaiVector,
    #[serde(rename = "H", with = "coords_json")]
    pub h: LatticeVector,
    pub genericity_certificate: GenericityCertificate,
}

/// Input form of a triple: the half `w` and the certificate are recomputed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleInput {
    pub surface: SurfaceModel,
    pub v: MukaiVector,
    #[serde(rename = "H", with = "coords_json")]
    pub h: LatticeVector,
    /// Sub-object candidates for rank-0 wall detection.
    #[serde(default)]
    pub rank0_candidates: Vec<MukaiVector>,
}

impl TripleInput {
    pub fn validate(&self) -> Result<OlsTriple> {
        validate_ols_with(&self.surface, &self.v, &self.h, &self.rank0_candidates)
    }
}

pub fn validate_ols(surface: &SurfaceModel, v: &MukaiVector, h: &LatticeVector) -> Result<OlsTriple> {
    validate_ols_with(surface, v, h, &[])
}

/// Checks every clause and reports all failures at once.
pub fn validate_ols_with(
    surface: &SurfaceModel,
    v: &MukaiVector,
    h: &LatticeVector,
    rank0_candidates: &[MukaiVector],
) -> Result<OlsTriple> {
    surface.ns.check(h)?;
    surface.square(v)?;
    let mut bad = Vec::new();

    let h_ok = match h.is_primitive() {
        Ok(true) => true,
        _ => {
            bad.push(OlsViolation::PolarizationNotPrimitive);
            false
        }
    };
    let ample = surface.is_numerically_ample(h)?;
    if !ample {
        bad.push(OlsViolation::PolarizationNotAmple);
    }

    let w = match v.halved() {
        Some(w) if !w.is_zero() => w,
        _ => {
            bad.push(OlsViolation::NotTwice);
            return Err(Error::Ols(bad));
        }
    };
    if !w.is_primitive()? {
        bad.push(OlsViolation::HalfNotPrimitive);
    }
    let w2 = surface.square(&w)?;
    if w2 != BigInt::from(2) {
        bad.push(OlsViolation::HalfSquare(w2));
    }
    if w.r.is_negative() {
        bad.push(OlsViolation::NegativeRank);
    }
    if w.r.is_zero()
        && !(surface.is_numerically_effective_class(&w.c)? && surface.ns.bilinear(&w.c, h)?.is_positive())
    {
        bad.push(OlsViolation::NotEffective);
    }
    if !bad.is_empty() || !h_ok || !ample {
        return Err(Error::Ols(bad));
    }

    let cert = if w.r.is_zero() {
        rank0_genericity(surface, h, v, rank0_candidates)?
    } else {
        is_in_chamber(surface, h, v)?
    };
    if cert.verdict != GenericityVerdict::InChamber {
        return Err(Error::Ols(vec![OlsViolation::NotGeneric]));
    }
    Ok(OlsTriple { surface: surface.clone(), v: v.clone(), w, h: h.clone(), genericity_certificate: cert })
}

impl OlsTriple {
    /// Re-runs validation on the stored data.
    pub fn revalidate(&self) -> Result<OlsTriple> {
        validate_ols(&self.surface, &self.v, &self.h)
    }

    pub fn w_is_rank_zero(&self) -> bool {
        self.w.r.is_zero()
    }

    pub fn polarization_is_h(&self) -> bool {
        self.surface.rho() == 1 && self.h.coords[0].is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mukai::SurfaceKind;

    fn mv(r: i64, c: &[i64], s: i64) -> MukaiVector {
        MukaiVector::from_i64s(r, c, s)
    }
    fn lv(xs: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(xs)
    }
    fn violations(r: Result<OlsTriple>) -> Vec<OlsViolation> {
        match r {
            Err(Error::Ols(v)) => v,
            other => panic!("expected violations, got {other:?}"),
        }
    }

    #[test]
    fn canonical_target_is_valid() {
        let x = SurfaceModel::canonical_target(SurfaceKind::K3);
        let t = validate_ols(&x, &mv(0, &[2], 0), &lv(&[1])).unwrap();
        assert_eq!(t.w, mv(0, &[1], 0));
        assert_eq!(t.genericity_certificate.verdict, GenericityVerdict::InChamber);
    }

    #[test]
    fn rank_two_vector_on_k3() {
        let x = SurfaceModel::canonical_target(SurfaceKind::K3);
        let t = validate_ols(&x, &mv(2, &[0], -2), &lv(&[1])).unwrap();
        assert_eq!(t.w, mv(1, &[0], -1));
    }

    #[test]
    fn not_twice() {
        let x = SurfaceModel::canonical_target(SurfaceKind::K3);
        assert_eq!(violations(validate_ols(&x, &mv(3, &[0], -3), &lv(&[1]))), vec![OlsViolation::NotTwice]);
    }

    #[test]
    fn each_clause_is_reported() {
        let x = SurfaceModel::canonical_target(SurfaceKind::K3);
        assert_eq!(
            violations(validate_ols(&x, &mv(4, &[0], -4), &lv(&[1]))),
            vec![OlsViolation::HalfNotPrimitive, OlsViolation::HalfSquare(BigInt::from(8))]
        );
        assert_eq!(
            violations(validate_ols(&x, &mv(-2, &[0], 2), &lv(&[1]))),
            vec![OlsViolation::NegativeRank]
        );
        assert_eq!(
            violations(validate_ols(&x, &mv(0, &[-2], 0), &lv(&[1]))),
            vec![OlsViolation::NotEffective]
        );
        assert_eq!(
            violations(validate_ols(&x, &mv(2, &[0], -2), &lv(&[2]))),
            vec![OlsViolation::PolarizationNotPrimitive]
        );
        assert_eq!(
            violations(validate_ols(&x, &mv(2, &[0], -2), &lv(&[-1]))),
            vec![OlsViolation::PolarizationNotAmple]
        );
    }

    #[test]
    fn polarization_on_a_wall_is_rejected() {
        // w = (1, σ + 2f, 0), |2w| = 16, and σ − f is a wall through σ + 3f.
        let e = SurfaceModel::elliptic(SurfaceKind::K3);
        let v = mv(2, &[2, 4], 0);
        assert_eq!(violations(validate_ols(&e, &v, &lv(&[1, 3]))), vec![OlsViolation::NotGeneric]);
    }

    #[test]
    fn json_round_trip() {
        let x = SurfaceModel::canonical_target(SurfaceKind::Abelian);
        let t = validate_ols(&x, &mv(2, &[0], -2), &lv(&[1])).unwrap();
        let text = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<OlsTriple>(&text).unwrap(), t);
    }
}
