use mukai_core::chambers::{walls_meeting_segment, walls_through};
use mukai_core::ols::validate_ols;
use mukai_core::reduction::{fm_rank0_swap, reduce, verify_trace, Direction, ReductionConfig, ReductionTrace};
use mukai_core::{IntLattice, LatticeVector, MukaiVector, SurfaceKind, SurfaceModel};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn mv(r: i64, c: &[i64], s: i64) -> MukaiVector {
    MukaiVector::from_i64s(r, c, s)
}

fn lv(xs: &[i64]) -> LatticeVector {
    LatticeVector::from_i64s(xs)
}

fn elliptic() -> impl Strategy<Value = SurfaceModel> {
    prop_oneof![Just(SurfaceModel::elliptic(SurfaceKind::K3)), Just(SurfaceModel::elliptic(SurfaceKind::Abelian))]
}

fn class2() -> impl Strategy<Value = LatticeVector> {
    proptest::collection::vec(-20i64..20, 2).prop_map(|c| lv(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ray_normalization_is_canonical(c in proptest::collection::vec(-50i64..50, 1..5), k in 1i64..6) {
        let x = lv(&c);
        prop_assume!(!x.is_zero());
        let r = x.ray_normalized().unwrap();
        prop_assert!(r.is_primitive().unwrap());
        prop_assert_eq!(r.ray_normalized().unwrap(), r.clone());
        prop_assert_eq!(x.neg().scaled(&k.into()).ray_normalized().unwrap(), r);
    }

    #[test]
    fn twists_compose(s in elliptic(), r in -9i64..9, c in class2(), t in -9i64..9, a in class2(), b in class2()) {
        let v = MukaiVector::new(r.into(), c, t.into());
        let once = s.twist(&v, &a.add(&b)).unwrap();
        let twice = s.twist(&s.twist(&v, &a).unwrap(), &b).unwrap();
        prop_assert_eq!(once, twice);
        prop_assert_eq!(s.twist(&s.twist(&v, &a).unwrap(), &a.neg()).unwrap(), v);
    }

    #[test]
    fn norm_bound_is_twist_invariant(s in elliptic(), r in 2i64..8, c in class2(), t in -9i64..9, a in class2()) {
        let v = MukaiVector::new(r.into(), c, t.into());
        prop_assert_eq!(s.norm_bound(&v).unwrap(), s.norm_bound(&s.twist(&v, &a).unwrap()).unwrap());
    }

    #[test]
    fn walls_through_are_walls(s in elliptic(), r in 2i64..5, c in class2(), t in -5i64..5, l in 3i64..40) {
        let v = MukaiVector::new(r.into(), c, t.into());
        let h = lv(&[1, l]);
        let bound = s.norm_bound(&v).unwrap().floor().to_integer();
        for w in walls_through(&s, &h, &v).unwrap() {
            prop_assert!(s.ns.bilinear(&w.d, &h).unwrap().is_zero());
            prop_assert!(w.d_square.is_negative() && w.d_square >= -bound.clone());
            prop_assert!(w.d.is_primitive().unwrap());
        }
    }

    #[test]
    fn segment_parameters_lie_in_the_unit_interval(s in elliptic(), l in 3i64..30, m in 3i64..30) {
        prop_assume!(l != m);
        let v = mv(2, &[1, 2], 1);
        for w in walls_meeting_segment(&s, &lv(&[1, l]), &lv(&[1, m]), &v).unwrap() {
            let t = w.crossing_parameter.expect("distinct endpoints");
            prop_assert!(!t.is_negative() && t <= num_traits::One::one());
        }
    }

    #[test]
    fn complements_are_orthogonal_and_saturated_in_rank(x in proptest::collection::vec(-6i64..6, 4)) {
        let u = IntLattice::standard("U").unwrap();
        let l = u.direct_sum(&u);
        let x = lv(&x);
        prop_assume!(!x.is_zero());
        let c = l.orthogonal_complement(std::slice::from_ref(&x)).unwrap();
        prop_assert_eq!(c.rank(), 3);
        for b in &c.basis {
            prop_assert!(l.bilinear(b, &x).unwrap().is_zero());
        }
        let sq = l.square(&x).unwrap();
        if !sq.is_zero() && x.is_primitive().unwrap() {
            prop_assert_eq!(c.induced.discriminant(), sq.abs());
        }
    }

    #[test]
    fn rank_zero_swap_round_trips(x in -20i64..20, a in 1i64..40) {
        let v = mv(0, &[2 * x], 2 * a);
        let there = fm_rank0_swap(&v, Direction::Forward, &BigInt::from(a)).unwrap();
        let back = fm_rank0_swap(&there.after, Direction::Reverse, &BigInt::from(a)).unwrap();
        prop_assert_eq!(back.after, v);
    }

    #[test]
    fn mukai_vectors_round_trip_through_json(r in -99i64..99, c in proptest::collection::vec(-99i64..99, 0..4), s in -99i64..99) {
        let v = mv(r, &c, s);
        let text = serde_json::to_string(&v).unwrap();
        prop_assert_eq!(serde_json::from_str::<MukaiVector>(&text).unwrap(), v.clone());
        prop_assert_eq!(v.to_string().parse::<MukaiVector>().unwrap(), v);
    }
}

fn rank_two_trace(kind: SurfaceKind) -> ReductionTrace {
    let x = SurfaceModel::canonical_target(kind);
    reduce(&validate_ols(&x, &mv(2, &[0], -2), &lv(&[1])).unwrap(), &ReductionConfig::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Any change to a single integer of a verified trace is caught.
    #[test]
    fn tampering_is_detected(k3 in any::<bool>(), which in 0usize..64, field in 0usize..3, delta in prop_oneof![-5i64..0, 1i64..6]) {
        let kind = if k3 { SurfaceKind::K3 } else { SurfaceKind::Abelian };
        let trace = rank_two_trace(kind);
        prop_assert!(verify_trace(&trace).pass);
        let mut bad = trace.clone();
        let i = which % bad.moves.len();
        let after = &mut bad.moves[i].after;
        match field {
            0 => after.r += delta,
            1 => after.c.coords[0] += delta,
            _ => after.s += delta,
        }
        prop_assert!(!verify_trace(&bad).pass);
    }
}

#[test]
fn traces_round_trip_through_json() {
    for kind in [SurfaceKind::K3, SurfaceKind::Abelian] {
        let trace = rank_two_trace(kind);
        let text = serde_json::to_string(&trace).unwrap();
        let back: ReductionTrace = serde_json::from_str(&text).unwrap();
        assert_eq!(back, trace);
        assert!(verify_trace(&back).pass);
    }
}
