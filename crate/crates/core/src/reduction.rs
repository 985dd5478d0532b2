//! Reduction of `v = 2w`, `w² = 2` data to the canonical vector `2(0, h, 0)`
//! on the degree-2, Picard-rank-one model, as a chain of checked moves.
//!
//! Moves act on Mukai vectors only. Tensor moves and Fourier–Mukai swaps are
//! explicit isometries; deformation moves are symbolic re-basings whose
//! preconditions (equal positive rank, equal square, the `2w` shape) are
//! checked here while the existence of the connecting family is not.
//!
//! Two sizes are configuration rather than derived: the "large `a`" threshold
//! for the rank-0 swap and the "large `n`" threshold for the positive-rank
//! swap. Moves that rely on them are flagged `conditional`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{ceil_rat, isqrt, json};
use crate::chambers::{same_chamber_closure, suitability_bound};
use crate::error::{Error, Result};
use crate::lattice::{coords_json, LatticeVector};
use crate::mukai::{MukaiVector, SurfaceKind, SurfaceModel};
use crate::ols::OlsTriple;

pub const TENSOR: &str = "tensor-isomorphism";
pub const TENSOR_RANK0: &str = "tensor-by-polarization";
pub const DEFORM: &str = "elliptic-deformation";
pub const FM_RANK0: &str = "fourier-mukai-rank0";
pub const FM_POSRANK: &str = "fourier-mukai-posrank";
pub const CHAMBER: &str = "chamber-closure";

/// Surface, vector and polarization at some point of a trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct State {
    pub surface: SurfaceModel,
    pub v: MukaiVector,
    #[serde(rename = "H", with = "coords_json")]
    pub h: LatticeVector,
}

impl State {
    pub fn from_triple(t: &OlsTriple) -> Self {
        State { surface: t.surface.clone(), v: t.v.clone(), h: t.h.clone() }
    }

    /// `2(0, h, 0)` on the degree-2, Picard-rank-one model with `H = h`.
    pub fn canonical(kind: SurfaceKind) -> Self {
        State {
            surface: SurfaceModel::canonical_target(kind),
            v: MukaiVector::from_i64s(0, &[2], 0),
            h: LatticeVector::from_i64s(&[1]),
        }
    }

    /// Compares the data only; lattice labels and ample constraints are ignored.
    pub fn is_canonical(&self, kind: SurfaceKind) -> bool {
        let c = State::canonical(kind);
        self.surface.kind == kind
            && self.surface.ns.gram() == c.surface.ns.gram()
            && self.v == c.v
            && self.h == c.h
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// `2(0, ξ, a) → 2(a, ξ, 0)`.
    Forward,
    /// `2(a, ξ, 0) → 2(0, ξ, a)`.
    Reverse,
}

/// The elliptic images used to connect the two ends of a deformation move.
///
/// Both ends of rank `r` are sent to `2(r, σ + l_i f, a_i)` on the elliptic
/// model of the same kind, with `a_i` shifted by a common `k >= 0` (a twist
/// by `kf` on the elliptic side) until `σ + l_i f` passes the suitability
/// bound. The images are then related by the twist `(a1 − a2)f`, which forces
/// `l1 = l2 + r(a1 − a2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticBridge {
    #[serde(with = "json::scalar")]
    pub r: BigInt,
    #[serde(with = "json::scalar")]
    pub shift: BigInt,
    #[serde(with = "json::scalar")]
    pub l_source: BigInt,
    #[serde(with = "json::scalar")]
    pub a_source: BigInt,
    #[serde(with = "json::scalar")]
    pub l_target: BigInt,
    #[serde(with = "json::scalar")]
    pub a_target: BigInt,
    /// `a_source − a_target`, the `f`-coefficient of the connecting twist.
    #[serde(with = "json::scalar")]
    pub twist_f: BigInt,
    #[serde(with = "json::rational")]
    pub suitability_bound: BigRational,
}

impl EllipticBridge {
    fn new(kind: SurfaceKind, source: &MukaiVector, target: &MukaiVector) -> Result<Self> {
        let ws = source.halved().ok_or_else(|| Error::NotOlsShape(source.to_string()))?;
        let wt = target.halved().ok_or_else(|| Error::NotOlsShape(target.to_string()))?;
        let y = SurfaceModel::elliptic(kind);
        // (σ + lf)² = 2e + 2l and w² = 2 give l = r·a + 1 − e.
        let offset = BigInt::one() - y.elliptic_e().expect("elliptic");
        let l_of = |a: &BigInt| &ws.r * a + &offset;
        let norm = bridge_norm(kind, &ws.r);
        let bound = suitability_bound(kind, &norm);
        let low = ws.s.clone().min(wt.s.clone());
        let need = ceil_rat(&((&bound - BigRational::from_integer(l_of(&low))) / BigRational::from_integer(ws.r.clone())));
        let shift = need.max(BigInt::zero());
        let (a_source, a_target) = (&ws.s + &shift, &wt.s + &shift);
        Ok(EllipticBridge {
            l_source: l_of(&a_source),
            l_target: l_of(&a_target),
            twist_f: &a_source - &a_target,
            r: ws.r,
            shift,
            a_source,
            a_target,
            suitability_bound: bound,
        })
    }

    /// `l1 − l2 − r(a1 − a2)`; zero when the images are twist-related.
    pub fn k1k2_residual(&self) -> BigInt {
        &self.l_source - &self.l_target - &self.r * (&self.a_source - &self.a_target)
    }

    pub fn source_image(&self) -> MukaiVector {
        MukaiVector::new(self.r.clone(), LatticeVector::new(vec![BigInt::one(), self.l_source.clone()]), self.a_source.clone())
            .scaled(&2.into())
    }

    pub fn target_image(&self) -> MukaiVector {
        MukaiVector::new(self.r.clone(), LatticeVector::new(vec![BigInt::one(), self.l_target.clone()]), self.a_target.clone())
            .scaled(&2.into())
    }

    /// Re-checks the bridge on the elliptic model of `kind`: both images have
    /// the `2w` shape, both polarizations pass the bound, and the twist by
    /// `twist_f·f` carries the target image to the source image.
    pub fn check(&self, kind: SurfaceKind) -> Result<()> {
        let y = SurfaceModel::elliptic(kind);
        let (s, t) = (self.source_image(), self.target_image());
        check_shape(&y, &s)?;
        check_shape(&y, &t)?;
        for l in [&self.l_source, &self.l_target] {
            if BigRational::from_integer(l.clone()) < self.suitability_bound {
                return Err(Error::ThresholdNotMet {
                    value: l.to_string(),
                    threshold: self.suitability_bound.to_string(),
                });
            }
        }
        let f = LatticeVector::new(vec![BigInt::zero(), self.twist_f.clone()]);
        if y.are_equivalent(&t, &s)? != Some(f) || !self.k1k2_residual().is_zero() {
            return Err(Error::InvariantBreach { index: 0, detail: "elliptic images are not twist-related".into() });
        }
        Ok(())
    }
}

/// `|v|` for `v0 = 2r`, `v² = 8`; it depends on nothing else.
fn bridge_norm(kind: SurfaceKind, r: &BigInt) -> BigRational {
    let v02 = BigRational::from_integer(r * r * 4);
    let tail = match kind {
        SurfaceKind::K3 => &v02 * &v02,
        SurfaceKind::Abelian => v02.clone(),
    };
    &v02 * BigRational::from_integer(2.into()) + tail / BigRational::from_integer(2.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveKind {
    Tensor {
        #[serde(with = "coords_json")]
        c: LatticeVector,
    },
    Deform {
        target: SurfaceModel,
        #[serde(rename = "target_H", with = "coords_json")]
        target_h: LatticeVector,
        bridge: EllipticBridge,
        /// `l1 − l2 − r(a1 − a2)` measured on the two ends themselves when
        /// both are of the `2(r, σ + lf, a)` shape on elliptic models.
        #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_int")]
        direct_k1k2_residual: Option<BigInt>,
    },
    FmRank0Swap {
        direction: Direction,
        #[serde(with = "json::scalar")]
        threshold: BigInt,
    },
    FmPosRankSwap {
        #[serde(with = "json::scalar")]
        n: BigInt,
        #[serde(with = "json::scalar")]
        threshold: BigInt,
    },
    ChamberChange {
        #[serde(rename = "H_prime", with = "coords_json")]
        h_prime: LatticeVector,
    },
}

mod opt_int {
    use super::json::JsonInt;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|x| JsonInt(x.clone())).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Ok(Option::<JsonInt>::deserialize(d)?.map(|x| x.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub kind: MoveKind,
    pub before: MukaiVector,
    pub after: MukaiVector,
    pub justification: String,
    /// Valid only under a configured "large enough" threshold.
    #[serde(default)]
    pub conditional: bool,
}

impl Move {
    fn label(&self) -> String {
        match &self.kind {
            MoveKind::Tensor { c } => format!("tensor c={c}"),
            MoveKind::Deform { target, .. } => {
                format!("deform onto {}", target.ns.label().unwrap_or("surface"))
            }
            MoveKind::FmRank0Swap { direction, threshold } => {
                format!("rank-0 swap {direction:?} (a >= {threshold})")
            }
            MoveKind::FmPosRankSwap { n, threshold } => format!("positive-rank swap n={n} (n >= {threshold})"),
            MoveKind::ChamberChange { h_prime } => format!("chamber change H'={h_prime}"),
        }
    }
}

/// `2w` with `w` primitive of square 2.
pub fn check_shape(surface: &SurfaceModel, v: &MukaiVector) -> Result<MukaiVector> {
    let w = v.halved().ok_or_else(|| Error::NotOlsShape(format!("{v} has an odd component")))?;
    if w.is_zero() || !w.is_primitive()? {
        return Err(Error::NotOlsShape(format!("{v}: half is not primitive")));
    }
    let sq = surface.square(&w)?;
    if sq != BigInt::from(2) {
        return Err(Error::NotOlsShape(format!("{v}: half has square {sq}")));
    }
    Ok(w)
}

fn fmt_twice(v: &MukaiVector) -> String {
    match v.halved() {
        Some(w) => format!("2({w})"),
        None => format!("({v})"),
    }
}

/// `c = k·h` for an integer `k`, if any.
fn multiple_of(c: &LatticeVector, h: &LatticeVector) -> Option<BigInt> {
    let i = h.coords.iter().position(|x| !x.is_zero())?;
    let (k, rem) = c.coords[i].div_rem(&h.coords[i]);
    (rem.is_zero() && h.scaled(&k) == *c).then_some(k)
}

/// `v ↦ v·ch(c)`. At rank 0 only multiples of the polarization are allowed.
pub fn tensor_move(surface: &SurfaceModel, h: &LatticeVector, v: &MukaiVector, c: &LatticeVector) -> Result<Move> {
    let rank0 = v.r.is_zero();
    if rank0 && multiple_of(c, h).is_none() && !c.is_zero() {
        return Err(Error::RankZeroTensorNotMultipleOfH);
    }
    let after = surface.twist(v, c)?;
    Ok(Move {
        kind: MoveKind::Tensor { c: c.clone() },
        before: v.clone(),
        after,
        justification: (if rank0 { TENSOR_RANK0 } else { TENSOR }).into(),
        conditional: false,
    })
}

/// `2(0, ξ, a) ↔ 2(a, ξ, 0)` with `a >= threshold`.
pub fn fm_rank0_swap(v: &MukaiVector, direction: Direction, threshold: &BigInt) -> Result<Move> {
    let w = v.halved().ok_or_else(|| Error::WrongShape(format!("{v} is not 2w")))?;
    let (a, after) = match direction {
        Direction::Forward => {
            if !w.r.is_zero() {
                return Err(Error::WrongShape(format!("expected 2(0, ξ, a), found {}", fmt_twice(v))));
            }
            (w.s.clone(), MukaiVector::new(w.s.clone(), w.c.clone(), BigInt::zero()))
        }
        Direction::Reverse => {
            if !w.s.is_zero() {
                return Err(Error::WrongShape(format!("expected 2(a, ξ, 0), found {}", fmt_twice(v))));
            }
            (w.r.clone(), MukaiVector::new(BigInt::zero(), w.c.clone(), w.r.clone()))
        }
    };
    if &a < threshold {
        return Err(Error::ThresholdNotMet { value: a.to_string(), threshold: threshold.to_string() });
    }
    Ok(Move {
        kind: MoveKind::FmRank0Swap { direction, threshold: threshold.clone() },
        before: v.clone(),
        after: after.scaled(&2.into()),
        justification: FM_RANK0.into(),
        conditional: true,
    })
}

/// `2(r, nh, a) → 2(a, nh, r)` on `NS = Z·h`, where `a = (n² − 1)/r`.
pub fn fm_posrank_swap(surface: &SurfaceModel, v: &MukaiVector, n: &BigInt, threshold: &BigInt) -> Result<Move> {
    if surface.rho() != 1 {
        return Err(Error::WrongShape(format!("needs Picard rank 1, found {}", surface.rho())));
    }
    let w = v.halved().ok_or_else(|| Error::WrongShape(format!("{v} is not 2w")))?;
    if !w.r.is_positive() {
        return Err(Error::NonPositiveRank);
    }
    if w.c.coords[0] != *n {
        return Err(Error::WrongShape(format!("expected c = {n}h, found {}", w.c)));
    }
    let m: BigInt = n * n - 1;
    if !m.is_multiple_of(&w.r) {
        return Err(Error::NotDivisible(format!("{} does not divide {n}² − 1", w.r)));
    }
    if w.s != &m / &w.r {
        return Err(Error::WrongShape(format!("expected a = ({n}² − 1)/{}, found {}", w.r, w.s)));
    }
    if n < threshold {
        return Err(Error::ThresholdNotMet { value: n.to_string(), threshold: threshold.to_string() });
    }
    let after = MukaiVector::new(w.s.clone(), w.c.clone(), w.r.clone()).scaled(&2.into());
    Ok(Move {
        kind: MoveKind::FmPosRankSwap { n: n.clone(), threshold: threshold.clone() },
        before: v.clone(),
        after,
        justification: FM_POSRANK.into(),
        conditional: true,
    })
}

/// Smallest `n >= min_n`, `n <= cap`, with `r | n² − 1` and `(n² − 1)/r` even.
pub fn choose_n(r: &BigInt, min_n: &BigInt, cap: &BigInt) -> Result<BigInt> {
    if !r.is_positive() {
        return Err(Error::NonPositiveRank);
    }
    let mut n = min_n.clone().max(BigInt::one());
    while &n <= cap {
        let m: BigInt = &n * &n - 1;
        if m.is_multiple_of(r) && (&m / r).is_even() {
            return Ok(n);
        }
        n += 1;
    }
    Err(Error::NotFoundBelowCap(cap.to_string()))
}

/// Tensor by `d·A` (A the declared ample class) for the least `d <= cap`
/// making `ξ + r·d·A` primitive and numerically ample.
pub fn normalize_c1(surface: &SurfaceModel, h: &LatticeVector, v: &MukaiVector, cap: &BigInt) -> Result<Move> {
    if surface.rho() < 2 {
        return Err(Error::RhoTooSmall);
    }
    let w = v.halved().ok_or_else(|| Error::NotOlsShape(v.to_string()))?;
    if !w.r.is_positive() {
        return Err(Error::NonPositiveRank);
    }
    let a = &surface.ample;
    let mut d = BigInt::zero();
    while &d <= cap {
        let xi = w.c.add(&a.scaled(&(&w.r * &d)));
        if !xi.is_zero() && xi.is_primitive()? && surface.is_numerically_ample(&xi)? {
            return tensor_move(surface, h, v, &a.scaled(&d));
        }
        d += 1;
    }
    Err(Error::NotFoundBelowCap(cap.to_string()))
}

fn elliptic_l(surface: &SurfaceModel, v: &MukaiVector) -> Option<(BigInt, BigInt)> {
    surface.elliptic_e()?;
    let w = v.halved()?;
    w.c.coords[0].is_one().then(|| (w.c.coords[1].clone(), w.s.clone()))
}

/// Symbolic deformation from `from` to `(target, target_v, target_h)`.
pub fn deform_move(
    from: &State,
    target: &SurfaceModel,
    target_v: &MukaiVector,
    target_h: &LatticeVector,
) -> Result<Move> {
    let v = &from.v;
    if v.r.is_zero() || target_v.r.is_zero() {
        return Err(Error::RankZeroDeformUnsupported);
    }
    if v.r != target_v.r {
        return Err(Error::RankMismatch(v.r.to_string(), target_v.r.to_string()));
    }
    if !v.r.is_positive() {
        return Err(Error::NonPositiveRank);
    }
    let (s1, s2) = (from.surface.square(v)?, target.square(target_v)?);
    if s1 != s2 {
        return Err(Error::SquareMismatch(s1.to_string(), s2.to_string()));
    }
    if from.surface.kind != target.kind {
        return Err(Error::SurfaceMismatch(format!("{} vs {}", from.surface.kind, target.kind)));
    }
    check_shape(&from.surface, v)?;
    check_shape(target, target_v)?;
    if !target_h.is_primitive()? || !target.is_numerically_ample(target_h)? {
        return Err(Error::NotGeneric(format!("target polarization {target_h} is not primitive ample")));
    }
    let bridge = EllipticBridge::new(target.kind, v, target_v)?;
    bridge.check(target.kind)?;
    let direct: Option<BigInt> = match (elliptic_l(&from.surface, v), elliptic_l(target, target_v)) {
        (Some((l1, a1)), Some((l2, a2))) => Some(&l1 - &l2 - (&v.r / 2) * (&a1 - &a2)),
        _ => None,
    };
    if let Some(res) = &direct {
        if !res.is_zero() {
            return Err(Error::InvariantBreach { index: 0, detail: format!("l1 − l2 − r(a1 − a2) = {res}") });
        }
    }
    Ok(Move {
        kind: MoveKind::Deform {
            target: target.clone(),
            target_h: target_h.clone(),
            bridge,
            direct_k1k2_residual: direct,
        },
        before: v.clone(),
        after: target_v.clone(),
        justification: DEFORM.into(),
        conditional: false,
    })
}

/// Replaces the polarization by `h_prime` in the closure of a common chamber.
pub fn chamber_change_move(from: &State, h_prime: &LatticeVector) -> Result<Move> {
    let s = &from.surface;
    if !h_prime.is_primitive()? || !s.is_numerically_ample(h_prime)? {
        return Err(Error::NotGeneric(format!("{h_prime} is not primitive ample")));
    }
    if from.v.r >= BigInt::from(2) {
        let report = same_chamber_closure(s, &from.h, h_prime, &from.v)?;
        if !report.same_closure {
            return Err(Error::NotGeneric(format!("{} wall(s) separate H and H'", report.blocking.len())));
        }
    } else if s.rho() > 1 {
        return Err(Error::Inapplicable("chamber change at rank < 2 needs Picard rank 1".into()));
    }
    Ok(Move {
        kind: MoveKind::ChamberChange { h_prime: h_prime.clone() },
        before: from.v.clone(),
        after: from.v.clone(),
        justification: CHAMBER.into(),
        conditional: false,
    })
}

/// Thresholds and caps; unset fields take the defaults of [`ResolvedConfig`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionConfig {
    #[serde(default)]
    pub threshold_a: Option<u64>,
    #[serde(default)]
    pub threshold_n: Option<u64>,
    #[serde(default)]
    pub cap_n: Option<u64>,
    #[serde(default)]
    pub cap_c1: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    /// Least `a` accepted by a rank-0 swap. Default `|v| + 2` for a rank-2
    /// vector of square 8: 18 (K3), 12 (abelian).
    #[serde(with = "json::scalar")]
    pub threshold_a: BigInt,
    /// Lower bound for `n` in addition to `(n² − 1)/r >= threshold_a`.
    #[serde(with = "json::scalar")]
    pub threshold_n: BigInt,
    /// Extra room scanned above the least admissible `n`.
    #[serde(with = "json::scalar")]
    pub cap_n: BigInt,
    #[serde(with = "json::scalar")]
    pub cap_c1: BigInt,
}

impl ReductionConfig {
    pub fn resolve(&self, kind: SurfaceKind) -> ResolvedConfig {
        let reference = bridge_norm(kind, &BigInt::one());
        let default_a = ceil_rat(&reference) + 2;
        ResolvedConfig {
            threshold_a: self.threshold_a.map(BigInt::from).unwrap_or(default_a),
            threshold_n: self.threshold_n.map(BigInt::from).unwrap_or_else(BigInt::one),
            cap_n: self.cap_n.map(BigInt::from).unwrap_or_else(|| BigInt::from(0)),
            cap_c1: self.cap_c1.map(BigInt::from).unwrap_or_else(|| BigInt::from(64)),
        }
    }
}

impl ResolvedConfig {
    /// Least `n` with `n² >= r·threshold_a + 1` and `n >= threshold_n`.
    pub fn min_n(&self, r: &BigInt) -> BigInt {
        let target = r * &self.threshold_a + 1;
        let mut n = isqrt(&target);
        if &n * &n < target {
            n += 1;
        }
        n.max(self.threshold_n.clone())
    }

    /// `n ≡ 1 (mod 2r)` always qualifies, so `2r` steps always suffice.
    pub fn n_cap(&self, r: &BigInt, min_n: &BigInt) -> BigInt {
        min_n + r * 2 + 2 + &self.cap_n
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionTrace {
    pub start: State,
    pub config: ResolvedConfig,
    pub moves: Vec<Move>,
    pub end: State,
    /// Set when a rank-0 input had to go through the swap because twisting
    /// by `H` cannot change the parity of `a`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

struct Builder {
    state: State,
    moves: Vec<Move>,
}

impl Builder {
    fn push(&mut self, m: Move) -> Result<()> {
        let index = self.moves.len();
        let breach = |detail: String| Error::InvariantBreach { index, detail };
        if m.before != self.state.v {
            return Err(breach("chain broken".into()));
        }
        let mut next = self.state.clone();
        match &m.kind {
            MoveKind::Deform { target, target_h, .. } => {
                next.surface = target.clone();
                next.h = target_h.clone();
            }
            MoveKind::ChamberChange { h_prime } => next.h = h_prime.clone(),
            _ => {}
        }
        check_shape(&next.surface, &m.after).map_err(|e| breach(e.to_string()))?;
        let (b, a) = (self.state.surface.square(&m.before)?, next.surface.square(&m.after)?);
        if a != b || a != BigInt::from(8) {
            return Err(breach(format!("square {b} → {a}")));
        }
        next.v = m.after.clone();
        self.state = next;
        self.moves.push(m);
        Ok(())
    }
}

/// Builds the move chain for a validated triple.
pub fn reduce(triple: &OlsTriple, config: &ReductionConfig) -> Result<ReductionTrace> {
    let kind = triple.surface.kind;
    let cfg = config.resolve(kind);
    let start = State::from_triple(triple);
    let mut b = Builder { state: start.clone(), moves: Vec::new() };
    let mut note = None;
    let two = BigInt::from(2);

    let w = check_shape(&start.surface, &start.v)?;
    if w.r.is_zero() {
        let on_target = start.surface.is_canonical_target() && start.h.coords[0].is_one();
        if on_target && w.s.is_even() {
            // 2(0, h, a) with a even: twist straight down to 2(0, h, 0).
            if !w.s.is_zero() {
                let c = start.h.scaled(&-(&w.s / &two));
                b.push(tensor_move(&start.surface, &start.h, &start.v, &c)?)?;
            }
            let end = b.state.clone();
            return Ok(ReductionTrace { start, config: cfg, moves: b.moves, end, note });
        }
        if on_target {
            note = Some("a is odd and ξ·H = 2 is even, so twisting by H keeps a odd; routed through the swap".into());
        }
        // Raise a to the threshold by twisting with H, then swap to positive rank.
        let xi_h = start.surface.ns.bilinear(&w.c, &start.h)?;
        if !xi_h.is_positive() {
            return Err(Error::Ols(vec![crate::ols::OlsViolation::NotEffective]));
        }
        let gap = &cfg.threshold_a - &w.s;
        let d = if gap.is_positive() { gap.div_ceil(&xi_h) } else { BigInt::zero() };
        if !d.is_zero() {
            let s = b.state.clone();
            b.push(tensor_move(&s.surface, &s.h, &s.v, &s.h.scaled(&d))?)?;
        }
        let v = b.state.v.clone();
        b.push(fm_rank0_swap(&v, Direction::Forward, &cfg.threshold_a)?)?;
    }

    // Positive rank.
    let s = b.state.clone();
    if s.surface.rho() >= 2 {
        match normalize_c1(&s.surface, &s.h, &s.v, &cfg.cap_c1) {
            Ok(m) => {
                if m.before != m.after {
                    b.push(m)?;
                }
            }
            Err(Error::NotFoundBelowCap(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let r = b.state.v.r.clone() / &two;
    let min_n = cfg.min_n(&r);
    let n = choose_n(&r, &min_n, &cfg.n_cap(&r, &min_n))?;
    let a: BigInt = (&n * &n - 1) / &r;
    let x = SurfaceModel::canonical_target(kind);
    let h = LatticeVector::from_i64s(&[1]);
    let nh = LatticeVector::new(vec![n.clone()]);

    let target = MukaiVector::new(r.clone(), nh.clone(), a.clone()).scaled(&two);
    let s = b.state.clone();
    b.push(deform_move(&s, &x, &target, &h)?)?;

    let v = b.state.v.clone();
    b.push(fm_posrank_swap(&x, &v, &n, &min_n)?)?;

    let target = MukaiVector::new(a.clone(), h.clone(), BigInt::zero()).scaled(&two);
    let s = b.state.clone();
    b.push(deform_move(&s, &x, &target, &h)?)?;

    let v = b.state.v.clone();
    b.push(fm_rank0_swap(&v, Direction::Reverse, &cfg.threshold_a)?)?;

    let v = b.state.v.clone();
    b.push(tensor_move(&x, &h, &v, &h.scaled(&-(&a / &two)))?)?;

    let end = b.state.clone();
    if !end.is_canonical(kind) {
        return Err(Error::InvariantBreach { index: b.moves.len(), detail: "did not reach 2(0, h, 0)".into() });
    }
    Ok(ReductionTrace { start, config: cfg, moves: b.moves, end, note })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Failure {
    ChainBroken,
    SquareChanged {
        #[serde(with = "json::scalar")]
        before: BigInt,
        #[serde(with = "json::scalar")]
        after: BigInt,
    },
    NotTwiceSquareTwo(String),
    Precondition { code: String, detail: String },
    AfterMismatch,
    KindChanged,
    EndMismatch,
    NotCanonicalTarget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveCheck {
    pub index: usize,
    pub pass: bool,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub moves: Vec<MoveCheck>,
    pub end_failures: Vec<Failure>,
}

impl VerifyReport {
    pub fn first_failure(&self) -> Option<usize> {
        self.moves.iter().find(|m| !m.pass).map(|m| m.index)
    }
}

fn precondition(e: Error) -> Failure {
    Failure::Precondition { code: e.code().into(), detail: e.to_string() }
}

/// Re-derives every move from the state before it and checks the shared
/// invariants. Never fails; problems are reported.
pub fn verify_trace(trace: &ReductionTrace) -> VerifyReport {
    let kind = trace.start.surface.kind;
    let mut state = trace.start.clone();
    let mut checks = Vec::with_capacity(trace.moves.len());
    for (index, m) in trace.moves.iter().enumerate() {
        let mut failures = Vec::new();
        if m.before != state.v {
            failures.push(Failure::ChainBroken);
        }
        let mut next = state.clone();
        let rebuilt = match &m.kind {
            MoveKind::Tensor { c } => tensor_move(&state.surface, &state.h, &m.before, c),
            MoveKind::FmRank0Swap { direction, threshold } => fm_rank0_swap(&m.before, *direction, threshold),
            MoveKind::FmPosRankSwap { n, threshold } => fm_posrank_swap(&state.surface, &m.before, n, threshold),
            MoveKind::Deform { target, target_h, .. } => {
                if target.kind != kind {
                    failures.push(Failure::KindChanged);
                }
                next.surface = target.clone();
                next.h = target_h.clone();
                let from = State { v: m.before.clone(), ..state.clone() };
                deform_move(&from, target, &m.after, target_h)
            }
            MoveKind::ChamberChange { h_prime } => {
                next.h = h_prime.clone();
                chamber_change_move(&State { v: m.before.clone(), ..state.clone() }, h_prime)
            }
        };
        match rebuilt {
            Ok(r) => {
                if r.after != m.after || r.kind != m.kind {
                    failures.push(Failure::AfterMismatch);
                }
            }
            Err(e) => failures.push(precondition(e)),
        }
        match (state.surface.square(&m.before), next.surface.square(&m.after)) {
            (Ok(b), Ok(a)) => {
                if a != b || a != BigInt::from(8) {
                    failures.push(Failure::SquareChanged { before: b, after: a });
                }
            }
            (Err(e), _) | (_, Err(e)) => failures.push(precondition(e)),
        }
        if let Err(e) = check_shape(&next.surface, &m.after) {
            failures.push(Failure::NotTwiceSquareTwo(e.to_string()));
        }
        next.v = m.after.clone();
        state = next;
        checks.push(MoveCheck { index, pass: failures.is_empty(), failures });
    }
    let mut end_failures = Vec::new();
    if state != trace.end {
        end_failures.push(Failure::EndMismatch);
    }
    if !trace.end.is_canonical(kind) {
        end_failures.push(Failure::NotCanonicalTarget);
    }
    let pass = end_failures.is_empty() && checks.iter().all(|c| c.pass);
    VerifyReport { pass, moves: checks, end_failures }
}

/// One line per move, for reading.
pub fn render_text(trace: &ReductionTrace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "start {} on {}, H={}", fmt_twice(&trace.start.v), describe(&trace.start.surface), trace.start.h);
    for (i, m) in trace.moves.iter().enumerate() {
        let flag = if m.conditional { " [conditional]" } else { "" };
        let _ = writeln!(
            out,
            "{:>2}. {}: {} -> {} ({}){flag}",
            i + 1,
            m.label(),
            fmt_twice(&m.before),
            fmt_twice(&m.after),
            m.justification
        );
    }
    let _ = writeln!(out, "end {} on {}, H={}", fmt_twice(&trace.end.v), describe(&trace.end.surface), trace.end.h);
    if let Some(n) = &trace.note {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

fn describe(s: &SurfaceModel) -> String {
    format!("{} {}", s.kind, s.ns.label().unwrap_or("NS"))
}
