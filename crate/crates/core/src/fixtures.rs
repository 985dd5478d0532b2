//! Worked examples with known answers, replayed by `mukai fixtures`.

use num_bigint::BigInt;

use crate::arith::{fmt_rat, rat};
use crate::chambers::{
    enumerate_walls_rank2_elliptic, is_in_chamber, is_v_suitable, odd_chi_genericity, same_chamber_closure,
    walls_meeting_segment, walls_through, wall_rays, GenericityVerdict,
};
use crate::error::Result;
use crate::lattice::LatticeVector;
use crate::mukai::{ModuliKind, MukaiVector, SurfaceKind, SurfaceModel};
use crate::ols::validate_ols;
use crate::perp::{full_perp_report, resolution_b2};
use crate::reduction::{
    choose_n, deform_move, fm_posrank_swap, fm_rank0_swap, reduce, tensor_move, verify_trace, Direction, MoveKind,
    ReductionConfig, State,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureResult {
    pub id: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn mv(r: i64, c: &[i64], s: i64) -> MukaiVector {
    MukaiVector::from_i64s(r, c, s)
}

fn lv(xs: &[i64]) -> LatticeVector {
    LatticeVector::from_i64s(xs)
}

fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

type Check = fn() -> Result<(bool, String)>;

fn k3e() -> SurfaceModel {
    SurfaceModel::elliptic(SurfaceKind::K3)
}

fn x(kind: SurfaceKind) -> SurfaceModel {
    SurfaceModel::canonical_target(kind)
}

const CHECKS: &[(&str, Check)] = &[
    ("norm-bound-elliptic-k3", || {
        let n = k3e().norm_bound(&mv(2, &[1, 2], 1))?;
        Ok((n == rat(6, 1), format!("|v| = {}", fmt_rat(&n))))
    }),
    ("square-of-sigma-minus-f", || {
        let d = lv(&[1, -1]);
        let (sq, dh) = (k3e().ns.square(&d)?, k3e().ns.bilinear(&d, &lv(&[1, 3]))?);
        Ok((sq == int(-4) && dh == int(0), format!("D² = {sq}, D·H = {dh}")))
    }),
    ("wall-through-sigma-plus-3f", || {
        let ws = walls_through(&k3e(), &lv(&[1, 3]), &mv(2, &[1, 2], 1))?;
        let found = ws.iter().any(|w| w.d == lv(&[1, -1]) && w.d_square == int(-4));
        Ok((found, format!("{} wall(s)", ws.len())))
    }),
    ("sigma-plus-3f-not-in-chamber", || {
        let c = is_in_chamber(&k3e(), &lv(&[1, 3]), &mv(2, &[1, 2], 1))?;
        Ok((c.verdict == GenericityVerdict::OnWall, format!("{:?}", c.verdict)))
    }),
    ("odd-euler-characteristic", || {
        let v = mv(2, &[1, 2], 1);
        let chi = k3e().euler_characteristic(&v)?;
        Ok((odd_chi_genericity(&k3e(), &v)? && chi == int(3), format!("χ = {chi}")))
    }),
    ("half-square-identity", || {
        // ξ² = 2ra + 2 for w = (1, σ + 2f, 0) and (2, 3σ + 8f, 7)
        let ok = [mv(1, &[1, 2], 0), mv(2, &[3, 8], 7)]
            .iter()
            .all(|w| k3e().square(w).map(|s| s == int(2)).unwrap_or(false));
        Ok((ok, "w² = 2".into()))
    }),
    ("twist-of-rank-zero-by-kh", || {
        let p = x(SurfaceKind::K3).mukai_product(&mv(0, &[1], 0), &mv(1, &[3], 9))?;
        Ok((p == mv(0, &[1], 6), format!("{p}")))
    }),
    ("twist-of-rank-zero-by-dh", || {
        let e = k3e();
        let h = lv(&[1, 3]);
        let line = e.ch_line_bundle(&h.scaled(&int(2)))?;
        let p = e.mukai_product(&mv(0, &[1, 2], 1), &line)?;
        Ok((p == mv(0, &[1, 2], 1 + 2 * 3), format!("{p}")))
    }),
    ("dual-formula", || {
        let d = mv(2, &[1, 2], -2).dual();
        Ok((d == mv(2, &[-1, -2], -2), format!("{d}")))
    }),
    ("twist-equivalence-of-elliptic-images", || {
        // l1 = l2 + r(a1 − a2) with r = 2, a1 = 4, a2 = 2
        let c = k3e().are_equivalent(&mv(4, &[2, 12], 4), &mv(4, &[2, 20], 8))?;
        Ok((c == Some(lv(&[0, 2])), format!("{c:?}")))
    }),
    ("classify-point", || {
        let c = x(SurfaceKind::K3).classify_primitive_moduli(&mv(1, &[0], 1))?;
        Ok((c.kind == ModuliKind::Point && c.dimension == int(0), format!("{:?} {}", c.kind, c.dimension)))
    }),
    ("classify-dimension-ten", || {
        let c = x(SurfaceKind::K3).classify_primitive_moduli(&mv(1, &[0], -4))?;
        Ok((
            c.kind == ModuliKind::IrreducibleSymplectic && c.dimension == int(10),
            format!("{:?} {}", c.kind, c.dimension),
        ))
    }),
    ("classify-kummer-type", || {
        let c = x(SurfaceKind::Abelian).classify_primitive_moduli(&mv(1, &[0], -3))?;
        Ok((c.kind == ModuliKind::KummerType && c.dimension == int(4), format!("{:?} {}", c.kind, c.dimension)))
    }),
    ("classify-singular-ten", || {
        let c = x(SurfaceKind::K3).classify_primitive_moduli(&mv(2, &[0], -2))?;
        Ok((c.kind == ModuliKind::OlsSingular && c.dimension == int(10), format!("{:?} {}", c.kind, c.dimension)))
    }),
    ("suitable-by-bound", || {
        let r = is_v_suitable(&k3e(), &lv(&[1, 7]), &mv(2, &[1, 2], 1))?;
        Ok((r.suitable && r.by_bound, format!("suitable={} by_bound={}", r.suitable, r.by_bound)))
    }),
    ("suitable-below-bound", || {
        let r = is_v_suitable(&k3e(), &lv(&[1, 5]), &mv(2, &[1, 2], 1))?;
        Ok((r.suitable && !r.by_bound, format!("suitable={} by_bound={}", r.suitable, r.by_bound)))
    }),
    ("ten-walls", || {
        let ws = enumerate_walls_rank2_elliptic(&k3e(), &mv(2, &[1, 2], 1))?;
        let rays = wall_rays(&ws)?;
        Ok((ws.len() == 10 && rays.len() == 5, format!("{} walls, {} rays", ws.len(), rays.len())))
    }),
    ("segment-crossing", || {
        let ws = walls_meeting_segment(&k3e(), &lv(&[1, 3]), &lv(&[1, 10]), &mv(2, &[1, 2], 1))?;
        let t = ws.iter().find(|w| w.d == lv(&[1, -2])).and_then(|w| w.crossing_parameter.clone());
        Ok((t == Some(rat(6, 7)) && ws.len() == 2, format!("{} wall(s), t = {:?}", ws.len(), t.map(|q| fmt_rat(&q)))))
    }),
    ("segment-closure", || {
        let v = mv(2, &[1, 2], 1);
        let a = same_chamber_closure(&k3e(), &lv(&[1, 3]), &lv(&[1, 4]), &v)?.same_closure;
        let b = same_chamber_closure(&k3e(), &lv(&[1, 3]), &lv(&[1, 10]), &v)?.same_closure;
        Ok((a && !b, format!("3f..4f {a}, 3f..10f {b}")))
    }),
    ("step-one-tensor", || {
        let m = tensor_move(&x(SurfaceKind::K3), &lv(&[1]), &mv(0, &[2], 8), &lv(&[-2]))?;
        Ok((m.after == mv(0, &[2], 0), format!("{}", m.after)))
    }),
    ("rank-zero-swap", || {
        let m = fm_rank0_swap(&mv(0, &[2], 10), Direction::Forward, &int(5))?;
        Ok((m.after == mv(10, &[2], 0), format!("{}", m.after)))
    }),
    ("positive-rank-swap", || {
        let m = fm_posrank_swap(&x(SurfaceKind::K3), &mv(4, &[6], 8), &int(3), &int(3))?;
        Ok((m.after == mv(8, &[6], 4), format!("{}", m.after)))
    }),
    ("choose-even-a", || {
        let ns = [choose_n(&int(2), &int(3), &int(50))?, choose_n(&int(1), &int(2), &int(50))?, choose_n(&int(3), &int(4), &int(50))?];
        Ok((ns == [int(3), int(3), int(5)], format!("{:?}", ns.map(|n| n.to_string()))))
    }),
    ("elliptic-deform-relation", || {
        let from = State { surface: k3e(), v: mv(4, &[2, 20], 8), h: lv(&[1, 30]) };
        let m = deform_move(&from, &k3e(), &mv(4, &[2, 12], 4), &lv(&[1, 30]))?;
        let ok = matches!(&m.kind, MoveKind::Deform { bridge, direct_k1k2_residual: Some(d), .. }
            if bridge.k1k2_residual() == int(0) && *d == int(0));
        Ok((ok, "l1 − l2 − r(a1 − a2) = 0".into()))
    }),
    ("reduce-rank-two", || {
        let t = validate_ols(&x(SurfaceKind::K3), &mv(2, &[0], -2), &lv(&[1]))?;
        let trace = reduce(&t, &ReductionConfig::default())?;
        let ok = verify_trace(&trace).pass && trace.moves.len() == 5;
        Ok((ok, format!("{} moves", trace.moves.len())))
    }),
    ("reduce-abelian-rank-zero", || {
        let t = validate_ols(&SurfaceModel::elliptic(SurfaceKind::Abelian), &mv(0, &[2, 2], 2), &lv(&[1, 1]))?;
        let trace = reduce(&t, &ReductionConfig::default())?;
        Ok((verify_trace(&trace).pass, format!("{} moves", trace.moves.len())))
    }),
    ("betti-k3", || {
        let r = full_perp_report(SurfaceKind::K3);
        let b2 = resolution_b2(SurfaceKind::K3);
        let ok = b2 == 24 && r.rank == 23 && r.signature == [3, 20, 0] && r.discriminant == int(2);
        Ok((ok, format!("b2 = {b2}, rank {} disc {}", r.rank, r.discriminant)))
    }),
    ("betti-abelian", || {
        let r = full_perp_report(SurfaceKind::Abelian);
        let b2 = resolution_b2(SurfaceKind::Abelian);
        let ok = b2 == 8 && r.rank == 7 && r.signature == [3, 4, 0] && r.discriminant == int(2);
        Ok((ok, format!("b2 = {b2}, rank {} disc {}", r.rank, r.discriminant)))
    }),
];

pub fn run_fixtures() -> Vec<FixtureResult> {
    CHECKS
        .iter()
        .map(|(id, check)| match check() {
            Ok((pass, detail)) => FixtureResult { id, pass, detail },
            Err(e) => FixtureResult { id, pass: false, detail: format!("error {}: {e}", e.code()) },
        })
        .collect()
}

pub fn render_table(results: &[FixtureResult]) -> String {
    let width = results.iter().map(|r| r.id.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in results {
        let tag = if r.pass { "PASS" } else { "FAIL" };
        out.push_str(&format!("{tag}  {:<width$}  {}\n", r.id, r.detail));
    }
    let passed = results.iter().filter(|r| r.pass).count();
    out.push_str(&format!("{passed}/{} passed\n", results.len()));
    out
}
