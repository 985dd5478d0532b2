//! Walls and chambers in the ample cone.
//!
//! For `v0 >= 2` the candidate wall divisors are
//! `W_v = {D in NS : −|v| <= D² < 0}`, a superset of the walls that can
//! actually destabilize. Every enumeration here is finite for a provable
//! reason (a definite restriction or an explicit bound), and every returned
//! certificate can be re-checked with the bilinear form alone.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{floor_rat, json};
use crate::error::{Error, Result};
use crate::lattice::{coords_json, enumerate_bounded_norm, IntLattice, LatticeVector};
use crate::mukai::{MukaiVector, SurfaceKind, SurfaceModel};

/// A wall divisor `D` with the data needed to re-check it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallCertificate {
    #[serde(rename = "D", with = "coords_json")]
    pub d: LatticeVector,
    #[serde(rename = "D_square", with = "json::scalar")]
    pub d_square: BigInt,
    /// `D·X` for each named class `X` that was queried (`"H"`, `"H'"`, `"f"`).
    #[serde(with = "json::int_map")]
    pub pairings: BTreeMap<String, BigInt>,
    /// Where the wall meets `H_t = tH + (1−t)H'`; `None` when not a segment
    /// query or when the whole segment lies on the wall.
    #[serde(with = "json::opt_rational", default)]
    pub crossing_parameter: Option<BigRational>,
}

impl WallCertificate {
    fn new(ns: &IntLattice, d: LatticeVector, named: &[(&str, &LatticeVector)]) -> Result<Self> {
        let d_square = ns.square(&d)?;
        let mut pairings = BTreeMap::new();
        for (name, x) in named {
            pairings.insert(name.to_string(), ns.bilinear(&d, x)?);
        }
        Ok(WallCertificate { d, d_square, pairings, crossing_parameter: None })
    }

    pub fn pairing(&self, name: &str) -> Option<&BigInt> {
        self.pairings.get(name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GenericityVerdict {
    /// No candidate wall through `H`; `H` is generic.
    InChamber,
    /// `H` lies on a candidate wall. Genericity is undecided.
    OnWall,
    /// On a wall (possibly), but odd Euler characteristic rules out strictly
    /// semistable sheaves, so `H` is generic.
    GenericByParity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityCertificate {
    pub verdict: GenericityVerdict,
    pub witnesses: Vec<WallCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity_note: Option<String>,
    /// Set for rank-0 vectors: walls were searched only among these many
    /// supplied sub-object candidates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank0_candidates_checked: Option<usize>,
}

impl GenericityCertificate {
    pub fn is_generic(&self) -> bool {
        self.verdict != GenericityVerdict::OnWall
    }
}

/// `|v|` rounded down: `D² >= −|v|` iff `D² >= −floor(|v|)` for integral `D²`.
fn wall_bound(surface: &SurfaceModel, v: &MukaiVector) -> Result<BigInt> {
    Ok(floor_rat(&surface.norm_bound(v)?))
}

fn positive_square(surface: &SurfaceModel, h: &LatticeVector) -> Result<BigInt> {
    let h2 = surface.ns.square(h)?;
    if !h2.is_positive() {
        return Err(Error::NotPositiveSquare);
    }
    Ok(h2)
}

/// Normalizes to primitive rays, drops duplicates, sorts lexicographically.
fn distinct_rays(ds: impl IntoIterator<Item = LatticeVector>) -> Result<Vec<LatticeVector>> {
    let mut set = BTreeSet::new();
    for d in ds {
        set.insert(d.ray_normalized()?);
    }
    Ok(set.into_iter().collect())
}

/// All wall rays `D ∈ W_v` with `D·H = 0`, normalized to primitive
/// generators with first nonzero coordinate positive.
///
/// Works for any Picard rank: `H^⊥` is negative definite by the Hodge index
/// theorem, so the search is a bounded-norm enumeration there.
pub fn walls_through(surface: &SurfaceModel, h: &LatticeVector, v: &MukaiVector) -> Result<Vec<WallCertificate>> {
    positive_square(surface, h)?;
    let bound = wall_bound(surface, v)?;
    if bound.is_zero() {
        return Ok(Vec::new());
    }
    let complement = surface.ns.orthogonal_complement(std::slice::from_ref(h))?;
    let short = enumerate_bounded_norm(&complement.induced, &-&bound, &-BigInt::one())?;
    distinct_rays(short.iter().map(|x| complement.lift(x)))?
        .into_iter()
        .map(|d| WallCertificate::new(&surface.ns, d, &[("H", h)]))
        .collect()
}

/// Chamber test for `v0 >= 2`.
pub fn is_in_chamber(surface: &SurfaceModel, h: &LatticeVector, v: &MukaiVector) -> Result<GenericityCertificate> {
    let witnesses = walls_through(surface, h, v)?;
    let verdict = if witnesses.is_empty() { GenericityVerdict::InChamber } else { GenericityVerdict::OnWall };
    Ok(GenericityCertificate { verdict, witnesses, parity_note: None, rank0_candidates_checked: None })
}

/// For primitive `v` of rank 2: an odd Euler characteristic means no sheaf
/// with vector `v` splits into two summands with proportional vectors, so
/// every polarization is `v`-generic.
pub fn odd_chi_genericity(surface: &SurfaceModel, v: &MukaiVector) -> Result<bool> {
    if v.r != BigInt::from(2) {
        return Err(Error::Inapplicable(format!("parity test needs rank 2, found {}", v.r)));
    }
    if !v.is_primitive()? {
        return Err(Error::Inapplicable("parity test needs a primitive vector".into()));
    }
    Ok(surface.euler_characteristic(v)?.is_odd())
}

/// Chamber test combined with the parity argument when it applies.
pub fn genericity_certificate(
    surface: &SurfaceModel,
    h: &LatticeVector,
    v: &MukaiVector,
) -> Result<GenericityCertificate> {
    let mut cert = is_in_chamber(surface, h, v)?;
    if cert.verdict == GenericityVerdict::OnWall && odd_chi_genericity(surface, v).unwrap_or(false) {
        cert.verdict = GenericityVerdict::GenericByParity;
        cert.parity_note = Some(format!(
            "χ(v) = {} is odd: a strictly semistable sheaf would have even χ",
            surface.euler_characteristic(v)?
        ));
    }
    Ok(cert)
}

/// Rank-0 genericity against the supplied candidate sub-objects.
pub fn rank0_genericity(
    surface: &SurfaceModel,
    h: &LatticeVector,
    v: &MukaiVector,
    candidates: &[MukaiVector],
) -> Result<GenericityCertificate> {
    positive_square(surface, h)?;
    // Tensoring by H preserves H-stability, so v2 = 0 is moved off zero first.
    let (v, candidates) = if v.s.is_zero() {
        let twisted: Vec<MukaiVector> = candidates.iter().map(|u| surface.twist(u, h)).collect::<Result<_>>()?;
        (surface.twist(v, h)?, twisted)
    } else {
        (v.clone(), candidates.to_vec())
    };
    if v.s.is_zero() {
        return Err(Error::DegenerateRankZero);
    }
    let witnesses: Vec<WallCertificate> = enumerate_walls_rank0(surface, &v, &candidates)?
        .into_iter()
        .filter(|w| surface.ns.bilinear(&w.d, h).map(|x| x.is_zero()).unwrap_or(false))
        .map(|w| WallCertificate::new(&surface.ns, w.d, &[("H", h)]))
        .collect::<Result<_>>()?;
    let verdict = if witnesses.is_empty() { GenericityVerdict::InChamber } else { GenericityVerdict::OnWall };
    Ok(GenericityCertificate { verdict, witnesses, parity_note: None, rank0_candidates_checked: Some(candidates.len()) })
}

fn same_component(surface: &SurfaceModel, h: &LatticeVector, h2: &LatticeVector) -> Result<()> {
    positive_square(surface, h)?;
    positive_square(surface, h2)?;
    if !surface.ns.bilinear(h, h2)?.is_positive() {
        return Err(Error::DifferentComponents);
    }
    Ok(())
}

/// Walls `D ∈ W_v` meeting the segment `H_t = tH + (1−t)H'`, `t ∈ [0, 1]`,
/// with the exact crossing parameter `t = D·H' / (D·H' − D·H)`.
///
/// A wall meets the segment iff `(D·H)(D·H') <= 0`. For such `D` the form
/// `Q(D) = −D² + 2(H·H')(D·H)(D·H')/|Δ|`, with `Δ` the Gram determinant of
/// `span(H, H')`, is positive definite and bounded by `|v|`; the candidates
/// are the short vectors of `|Δ|·Q`. Output is ordered by `t`, then by `D`.
pub fn walls_meeting_segment(
    surface: &SurfaceModel,
    h: &LatticeVector,
    h_prime: &LatticeVector,
    v: &MukaiVector,
) -> Result<Vec<WallCertificate>> {
    same_component(surface, h, h_prime)?;
    let ns = &surface.ns;
    let bound = wall_bound(surface, v)?;
    let named = [("H", h), ("H'", h_prime)];

    let hh = ns.square(h)?;
    let hp = ns.square(h_prime)?;
    let hhp = ns.bilinear(h, h_prime)?;
    let delta = (&hh * &hp - &hhp * &hhp).abs();

    let mut walls = if delta.is_zero() {
        // Proportional endpoints: the segment is a single ray.
        walls_through(surface, h, v)?
            .into_iter()
            .map(|w| WallCertificate::new(ns, w.d, &named))
            .collect::<Result<Vec<_>>>()?
    } else {
        if bound.is_zero() {
            return Ok(Vec::new());
        }
        let a = ns.apply(h);
        let b = ns.apply(h_prime);
        let n = ns.rank();
        let mut q = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                q[i][j] = -&delta * &ns.gram()[i][j] + &hhp * (&a[i] * &b[j] + &a[j] * &b[i]);
            }
        }
        let candidates = crate::lattice::enumerate::short_vectors(&q, &(&delta * &bound));
        let hits = candidates.into_iter().filter(|d| {
            if d.is_zero() {
                return false;
            }
            let sq = ns.square(d).expect("checked");
            if !(sq.is_negative() && sq >= -&bound) {
                return false;
            }
            let (x, y) = (ns.bilinear(d, h).expect("checked"), ns.bilinear(d, h_prime).expect("checked"));
            !(x * y).is_positive()
        });
        distinct_rays(hits)?
            .into_iter()
            .map(|d| WallCertificate::new(ns, d, &named))
            .collect::<Result<Vec<_>>>()?
    };
    for w in walls.iter_mut() {
        let x = &w.pairings["H"];
        let y = &w.pairings["H'"];
        w.crossing_parameter = if x == y { None } else { Some(BigRational::new(y.clone(), y - x)) };
    }
    walls.sort_by(|p, q| (&p.crossing_parameter, &p.d).cmp(&(&q.crossing_parameter, &q.d)));
    Ok(walls)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberClosureReport {
    pub same_closure: bool,
    /// Walls crossing the open segment.
    pub blocking: Vec<WallCertificate>,
    /// Walls touching only an endpoint, or containing the whole segment.
    pub contacts: Vec<WallCertificate>,
}

/// Whether `H` and `H'` lie in the closure of a common chamber, i.e. no
/// wall crosses the open segment between them.
pub fn same_chamber_closure(
    surface: &SurfaceModel,
    h: &LatticeVector,
    h_prime: &LatticeVector,
    v: &MukaiVector,
) -> Result<ChamberClosureReport> {
    let walls = walls_meeting_segment(surface, h, h_prime, v)?;
    let (blocking, contacts): (Vec<_>, Vec<_>) = walls.into_iter().partition(|w| match &w.crossing_parameter {
        Some(t) => t.is_positive() && t < &BigRational::one(),
        None => false,
    });
    Ok(ChamberClosureReport { same_closure: blocking.is_empty(), blocking, contacts })
}

/// The complete list `W_v` on an elliptic model `NS = Zσ ⊕ Zf` with Gram
/// `[[2e, 1], [1, 0]]`. Returns every `D = aσ + bf` (both signs, not reduced
/// to rays), ordered lexicographically.
///
/// `D² = 2a(ea + b)` with `ea + b` a nonzero integer, so
/// `0 < 2|a|·|ea + b| <= |v|` gives `|a| <= |v|/2` and the list is complete.
pub fn enumerate_walls_rank2_elliptic(surface: &SurfaceModel, v: &MukaiVector) -> Result<Vec<WallCertificate>> {
    let e = surface.elliptic_e().ok_or(Error::NotEllipticBasis)?;
    let bound = wall_bound(surface, v)?;
    let mut out = Vec::new();
    let amax: BigInt = &bound / 2;
    let mut a = -amax.clone();
    while a <= amax {
        if !a.is_zero() {
            // m = ea + b with 2am in [−bound, −1]
            let mmax = &bound / (2 * a.abs());
            let mut m = BigInt::one();
            while m <= mmax {
                let m_signed = if a.is_positive() { -&m } else { m.clone() };
                let b = &m_signed - &e * &a;
                out.push(LatticeVector::new(vec![a.clone(), b]));
                m += 1;
            }
        }
        a += 1;
    }
    out.sort();
    out.into_iter().map(|d| WallCertificate::new(&surface.ns, d, &[])).collect()
}

/// Primitive wall rays of `W_v`, one per `±` pair.
pub fn wall_rays(walls: &[WallCertificate]) -> Result<Vec<LatticeVector>> {
    distinct_rays(walls.iter().map(|w| w.d.clone()))
}

/// Rank-0 walls from supplied sub-object vectors `u = (0, u1, u2)`,
/// deduplicated up to sign and positive scaling.
pub fn enumerate_walls_rank0(
    surface: &SurfaceModel,
    v: &MukaiVector,
    candidates: &[MukaiVector],
) -> Result<Vec<WallCertificate>> {
    if !v.r.is_zero() {
        return Err(Error::Inapplicable(format!("rank-0 walls need v0 = 0, found {}", v.r)));
    }
    if v.s.is_zero() {
        return Err(Error::DegenerateRankZero);
    }
    let mut ds = Vec::new();
    for u in candidates {
        let d = surface.wall_divisor_of_pair(v, u)?;
        if !d.is_zero() {
            ds.push(d);
        }
    }
    distinct_rays(ds)?
        .into_iter()
        .map(|d| WallCertificate::new(&surface.ns, d, &[]))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuitabilityReport {
    pub suitable: bool,
    /// The sufficient bound `l >= |v| + 1` (K3) or `l >= |v|` (abelian) holds.
    pub by_bound: bool,
    #[serde(with = "json::scalar")]
    pub l: BigInt,
    #[serde(with = "json::rational")]
    pub norm_bound: BigRational,
    /// Walls on which `D·H` and `D·f` do not have the same strict sign.
    pub witnesses: Vec<WallCertificate>,
}

/// The `l`-bound above which `σ + lf` is guaranteed suitable.
pub fn suitability_bound(kind: SurfaceKind, norm: &BigRational) -> BigRational {
    match kind {
        SurfaceKind::K3 => norm + BigRational::one(),
        SurfaceKind::Abelian => norm.clone(),
    }
}

/// Suitability of `H = σ + lf` on an elliptic model: `D·H` and `D·f` have
/// the same sign for every `D ∈ W_v`.
pub fn is_v_suitable(surface: &SurfaceModel, h: &LatticeVector, v: &MukaiVector) -> Result<SuitabilityReport> {
    surface.elliptic_e().ok_or(Error::NotEllipticBasis)?;
    surface.ns.check(h)?;
    if !h.coords[0].is_one() {
        return Err(Error::NotSigmaPlusLf);
    }
    let l = h.coords[1].clone();
    let f = LatticeVector::from_i64s(&[0, 1]);
    let norm = surface.norm_bound(v)?;
    let by_bound = BigRational::from_integer(l.clone()) >= suitability_bound(surface.kind, &norm);
    let mut bad = Vec::new();
    for w in enumerate_walls_rank2_elliptic(surface, v)? {
        let dh = surface.ns.bilinear(&w.d, h)?;
        let df = surface.ns.bilinear(&w.d, &f)?;
        if dh.signum() != df.signum() || dh.is_zero() {
            bad.push(w.d);
        }
    }
    let witnesses = distinct_rays(bad)?
        .into_iter()
        .map(|d| WallCertificate::new(&surface.ns, d, &[("H", h), ("f", &f)]))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuitabilityReport { suitable: witnesses.is_empty(), by_bound, l, norm_bound: norm, witnesses })
}

/// Result of an explicit box scan; never a complete wall list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxScan {
    pub certified: bool,
    #[serde(with = "json::scalar")]
    pub box_bound: BigInt,
    pub walls: Vec<WallCertificate>,
}

/// Scans `|coords| <= bound` for wall rays of `W_v`. For Picard rank >= 3 the
/// set `W_v` is infinite, so the result is labeled uncertified.
pub fn box_scan_walls(surface: &SurfaceModel, v: &MukaiVector, bound: u32) -> Result<BoxScan> {
    let wb = wall_bound(surface, v)?;
    let n = surface.rho();
    let b = bound as i64;
    let mut found = Vec::new();
    let mut x = vec![-b; n];
    if n > 0 {
        loop {
            let d = LatticeVector::from_i64s(&x);
            if !d.is_zero() {
                let sq = surface.ns.square(&d)?;
                if sq.is_negative() && sq >= -&wb {
                    found.push(d);
                }
            }
            let mut i = 0;
            loop {
                if i == n {
                    break;
                }
                x[i] += 1;
                if x[i] <= b {
                    break;
                }
                x[i] = -b;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    let walls = distinct_rays(found)?
        .into_iter()
        .map(|d| WallCertificate::new(&surface.ns, d, &[]))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoxScan { certified: false, box_bound: bound.into(), walls })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn lv(xs: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(xs)
    }
    fn mv(r: i64, c: &[i64], s: i64) -> MukaiVector {
        MukaiVector::from_i64s(r, c, s)
    }
    fn k3() -> SurfaceModel {
        SurfaceModel::elliptic(SurfaceKind::K3)
    }
    fn rays(ws: &[WallCertificate]) -> Vec<LatticeVector> {
        ws.iter().map(|w| w.d.clone()).collect()
    }

    #[test]
    fn wall_through_sigma_plus_3f() {
        let ws = walls_through(&k3(), &lv(&[1, 3]), &mv(2, &[1, 2], 1)).unwrap();
        assert_eq!(rays(&ws), vec![lv(&[1, -1])]);
        assert_eq!(ws[0].d_square, int(-4));
        assert_eq!(ws[0].pairing("H"), Some(&int(0)));
    }

    #[test]
    fn sigma_plus_4f_lies_on_the_sigma_minus_2f_wall() {
        // (σ − 2f)² = −6 = −|v| and (σ − 2f)·(σ + 4f) = 0.
        let ws = walls_through(&k3(), &lv(&[1, 4]), &mv(2, &[1, 2], 1)).unwrap();
        assert_eq!(rays(&ws), vec![lv(&[1, -2])]);
        assert_eq!(ws[0].d_square, int(-6));
    }

    #[test]
    fn sigma_plus_5f_is_in_a_chamber() {
        let c = is_in_chamber(&k3(), &lv(&[1, 5]), &mv(2, &[1, 2], 1)).unwrap();
        assert_eq!(c.verdict, GenericityVerdict::InChamber);
        assert!(c.witnesses.is_empty());
    }

    #[test]
    fn picard_rank_one_has_no_walls() {
        let x = SurfaceModel::canonical_target(SurfaceKind::K3);
        assert!(walls_through(&x, &lv(&[1]), &mv(2, &[0], -2)).unwrap().is_empty());
        assert_eq!(
            is_in_chamber(&x, &lv(&[1]), &mv(2, &[0], -2)).unwrap().verdict,
            GenericityVerdict::InChamber
        );
        assert!(walls_meeting_segment(&x, &lv(&[1]), &lv(&[3]), &mv(2, &[0], -2)).unwrap().is_empty());
    }

    #[test]
    fn on_wall_but_generic_by_parity() {
        let v = mv(2, &[1, 2], 1);
        let c = is_in_chamber(&k3(), &lv(&[1, 3]), &v).unwrap();
        assert_eq!(c.verdict, GenericityVerdict::OnWall);
        assert_eq!(rays(&c.witnesses), vec![lv(&[1, -1])]);
        let g = genericity_certificate(&k3(), &lv(&[1, 3]), &v).unwrap();
        assert_eq!(g.verdict, GenericityVerdict::GenericByParity);
        assert!(g.is_generic());
    }

    #[test]
    fn parity() {
        assert!(odd_chi_genericity(&k3(), &mv(2, &[1, 2], 1)).unwrap());
        assert!(!odd_chi_genericity(&k3(), &mv(2, &[1, 2], 2)).unwrap());
        let ab = SurfaceModel::elliptic(SurfaceKind::Abelian);
        assert!(odd_chi_genericity(&ab, &mv(2, &[1, 2], 1)).unwrap());
        assert!(matches!(odd_chi_genericity(&k3(), &mv(3, &[1, 2], 1)), Err(Error::Inapplicable(_))));
        assert!(matches!(odd_chi_genericity(&k3(), &mv(2, &[0, 2], 2)), Err(Error::Inapplicable(_))));
    }

    #[test]
    fn segment_from_3f_to_10f() {
        let ws = walls_meeting_segment(&k3(), &lv(&[1, 3]), &lv(&[1, 10]), &mv(2, &[1, 2], 1)).unwrap();
        assert_eq!(rays(&ws), vec![lv(&[1, -2]), lv(&[1, -1])]);
        assert_eq!(ws[0].crossing_parameter, Some(rat(6, 7)));
        assert_eq!(ws[1].crossing_parameter, Some(rat(1, 1)));
        let report = same_chamber_closure(&k3(), &lv(&[1, 3]), &lv(&[1, 10]), &mv(2, &[1, 2], 1)).unwrap();
        assert!(!report.same_closure);
        assert_eq!(rays(&report.blocking), vec![lv(&[1, -2])]);
    }

    #[test]
    fn segment_with_only_endpoint_contacts() {
        let v = mv(2, &[1, 2], 1);
        let report = same_chamber_closure(&k3(), &lv(&[1, 3]), &lv(&[1, 4]), &v).unwrap();
        assert!(report.same_closure);
        assert_eq!(report.contacts.len(), 2);
        let same = same_chamber_closure(&k3(), &lv(&[1, 3]), &lv(&[1, 3]), &v).unwrap();
        assert!(same.same_closure);
        assert!(walls_meeting_segment(&k3(), &lv(&[1, 5]), &lv(&[1, 5]), &v).unwrap().is_empty());
    }

    #[test]
    fn segment_rejects_opposite_components() {
        let v = mv(2, &[1, 2], 1);
        assert_eq!(
            walls_meeting_segment(&k3(), &lv(&[1, 3]), &lv(&[-1, -3]), &v),
            Err(Error::DifferentComponents)
        );
    }

    #[test]
    fn ten_walls_on_the_elliptic_k3() {
        let ws = enumerate_walls_rank2_elliptic(&k3(), &mv(2, &[1, 2], 1)).unwrap();
        let mut want: Vec<LatticeVector> = [[1, 0], [1, -1], [1, -2], [2, 1], [3, 2]]
            .iter()
            .flat_map(|c| [lv(c), lv(c).neg()])
            .collect();
        want.sort();
        assert_eq!(rays(&ws), want);
        assert_eq!(wall_rays(&ws).unwrap().len(), 5);
    }

    #[test]
    fn abelian_walls_with_norm_four() {
        let ab = SurfaceModel::elliptic(SurfaceKind::Abelian);
        let v = mv(2, &[1, 3], 1);
        assert_eq!(ab.norm_bound(&v).unwrap(), rat(4, 1));
        let ws = enumerate_walls_rank2_elliptic(&ab, &v).unwrap();
        let mut want: Vec<LatticeVector> = [[1, -1], [1, -2], [2, -1]]
            .iter()
            .flat_map(|c| [lv(c), lv(c).neg()])
            .collect();
        want.sort();
        assert_eq!(rays(&ws), want);
    }

    #[test]
    fn no_walls_below_norm_two() {
        let v = mv(2, &[1, 0], 1);
        assert_eq!(k3().norm_bound(&v).unwrap(), rat(2, 1));
        assert_eq!(wall_rays(&enumerate_walls_rank2_elliptic(&k3(), &v).unwrap()).unwrap(), vec![lv(&[1, 0])]);
        let ab = SurfaceModel::elliptic(SurfaceKind::Abelian);
        let v = mv(2, &[1, 0], 1);
        assert_eq!(ab.norm_bound(&v).unwrap(), rat(-2, 1));
        assert!(enumerate_walls_rank2_elliptic(&ab, &v).unwrap().is_empty());
    }

    #[test]
    fn rank_zero_walls() {
        let v = mv(0, &[2, 2], 2);
        let ws = enumerate_walls_rank0(&k3(), &v, &[mv(0, &[1, 0], 1)]).unwrap();
        assert_eq!(rays(&ws), vec![lv(&[0, 1])]);
        assert!(enumerate_walls_rank0(&k3(), &mv(0, &[1, 1], 3), &[mv(0, &[1, 1], 3)]).unwrap().is_empty());
        assert!(enumerate_walls_rank0(&k3(), &v, &[]).unwrap().is_empty());
        assert_eq!(enumerate_walls_rank0(&k3(), &mv(0, &[1, 1], 0), &[]), Err(Error::DegenerateRankZero));
    }

    #[test]
    fn suitability() {
        let v = mv(2, &[1, 2], 1);
        let r = is_v_suitable(&k3(), &lv(&[1, 7]), &v).unwrap();
        assert!(r.suitable && r.by_bound);
        let r = is_v_suitable(&k3(), &lv(&[1, 5]), &v).unwrap();
        assert!(r.suitable && !r.by_bound);
        let r = is_v_suitable(&k3(), &lv(&[1, 1]), &v).unwrap();
        assert!(!r.suitable);
        assert!(rays(&r.witnesses).contains(&lv(&[1, -1])));
        let w = r.witnesses.iter().find(|w| w.d == lv(&[1, -1])).unwrap();
        assert_eq!(w.pairing("f"), Some(&int(1)));
        assert_eq!(w.pairing("H"), Some(&int(-2)));
        assert_eq!(is_v_suitable(&k3(), &lv(&[2, 7]), &v).unwrap_err(), Error::NotSigmaPlusLf);
    }

    #[test]
    fn box_scan_is_never_certified() {
        let s = box_scan_walls(&k3(), &mv(2, &[1, 2], 1), 4).unwrap();
        assert!(!s.certified);
        assert_eq!(s.walls.len(), 5);
    }
}
