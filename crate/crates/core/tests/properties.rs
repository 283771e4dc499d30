use proptest::prelude::*;

use tdrl_core::neighborhood::{ball_in, ball_out, Limits};
use tdrl_core::perm::{
    apply, apply_windowed, canonical_pattern, inverse_reversible_pattern, is_reversible_pattern,
    relabel, OpKind, Pattern, Permutation, WindowedOp,
};

fn kind() -> impl Strategy<Value = OpKind> {
    prop_oneof![Just(OpKind::Tdrl), Just(OpKind::Mtdrl)]
}

fn perm_of(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn perm() -> impl Strategy<Value = Permutation> {
    (1usize..=12).prop_flat_map(perm_of)
}

fn perm_and_pattern() -> impl Strategy<Value = (Permutation, Pattern)> {
    (1usize..=12).prop_flat_map(|n| {
        (perm_of(n), prop::collection::vec(any::<bool>(), n))
            .prop_map(|(p, bits)| (p, Pattern::new(bits).unwrap()))
    })
}

/// Permutation, relabelling and a windowed operation that fits.
fn windowed_case() -> impl Strategy<Value = (Permutation, Permutation, WindowedOp)> {
    (1usize..=10)
        .prop_flat_map(|n| (Just(n), 1..=n))
        .prop_flat_map(|(n, k)| {
            (
                perm_of(n),
                perm_of(n),
                kind(),
                1..=n - k + 1,
                prop::collection::vec(any::<bool>(), k),
            )
        })
        .prop_map(|(p, sigma, kind, start, bits)| {
            (p, sigma, WindowedOp::new(kind, start, Pattern::new(bits).unwrap()))
        })
}

fn reversible_pattern() -> impl Strategy<Value = Pattern> {
    (0usize..4, 0usize..4, 0usize..4, 0usize..4)
        .prop_filter("nonempty", |(r, s, t, u)| r + s + t + u > 0)
        .prop_map(|(r, s, t, u)| {
            let bits = std::iter::repeat_n(true, r)
                .chain(std::iter::repeat_n(false, s))
                .chain(std::iter::repeat_n(true, t))
                .chain(std::iter::repeat_n(false, u))
                .collect();
            Pattern::new(bits).unwrap()
        })
}

proptest! {
    #[test]
    fn canonical_form_induces_same_map((p, b) in perm_and_pattern(), kind in kind()) {
        let canon = canonical_pattern(&b, kind);
        prop_assert_eq!(apply(kind, &p, &b).unwrap(), apply(kind, &p, &canon).unwrap());
    }

    #[test]
    fn outputs_are_permutations((p, b) in perm_and_pattern(), kind in kind()) {
        let out = apply(kind, &p, &b).unwrap();
        prop_assert!(Permutation::new(out.into_vec()).is_ok());
    }

    #[test]
    fn reversible_patterns_undo(b in reversible_pattern(), seed in any::<u64>()) {
        prop_assert!(is_reversible_pattern(&b));
        let n = b.len();
        let mut v: Vec<u32> = (1..=n as u32).collect();
        // Cheap deterministic shuffle so `p` is not always the identity.
        v.rotate_left((seed % n as u64) as usize);
        let p = Permutation::new(v).unwrap();
        let inv = inverse_reversible_pattern(&b).unwrap();
        let there = apply(OpKind::Tdrl, &p, &b).unwrap();
        prop_assert_eq!(apply(OpKind::Tdrl, &there, &inv).unwrap(), p);
    }

    #[test]
    fn relabelling_commutes_with_operations((p, sigma, op) in windowed_case()) {
        let lhs = apply_windowed(&relabel(&sigma, &p).unwrap(), &op).unwrap();
        let rhs = relabel(&sigma, &apply_windowed(&p, &op).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);

        let full = Pattern::new(op.pattern.bits().iter().copied().cycle().take(p.len()).collect()).unwrap();
        let lhs = apply(op.kind, &relabel(&sigma, &p).unwrap(), &full).unwrap();
        let rhs = relabel(&sigma, &apply(op.kind, &p, &full).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn full_window_is_unbounded((p, b) in perm_and_pattern(), kind in kind()) {
        let op = WindowedOp::new(kind, 1, b.clone());
        prop_assert_eq!(apply_windowed(&p, &op).unwrap(), apply(kind, &p, &b).unwrap());
    }

    #[test]
    fn windowed_leaves_outside_fixed((p, _sigma, op) in windowed_case()) {
        let out = apply_windowed(&p, &op).unwrap();
        let lo = op.start - 1;
        let hi = lo + op.width();
        prop_assert_eq!(&out.as_slice()[..lo], &p.as_slice()[..lo]);
        prop_assert_eq!(&out.as_slice()[hi..], &p.as_slice()[hi..]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ball_sizes_do_not_depend_on_centre(p in (1usize..=9).prop_flat_map(perm_of)) {
        let n = p.len() as u64;
        let lim = Limits::default();
        prop_assert_eq!(ball_out(&p, OpKind::Tdrl, None, &lim).unwrap().len() as u64, (1 << n) - n);
        prop_assert_eq!(ball_out(&p, OpKind::Mtdrl, None, &lim).unwrap().len() as u64, 1 << (n - 1));
        prop_assert_eq!(ball_in(&p, OpKind::Tdrl, None, &lim).unwrap().len() as u64, (1 << n) - n);
        prop_assert_eq!(ball_in(&p, OpKind::Mtdrl, None, &lim).unwrap().len() as u64, 1 << (n - 1));
    }

    #[test]
    fn balls_relabel((p, sigma) in (1usize..=7).prop_flat_map(|n| (perm_of(n), perm_of(n))),
                     kind in kind(), kseed in any::<usize>()) {
        let lim = Limits::default();
        let k = Some(1 + kseed % p.len());
        let moved = relabel(&sigma, &p).unwrap();
        prop_assert_eq!(
            ball_out(&p, kind, k, &lim).unwrap().relabel(&sigma).unwrap(),
            ball_out(&moved, kind, k, &lim).unwrap()
        );
        prop_assert_eq!(
            ball_in(&p, kind, k, &lim).unwrap().relabel(&sigma).unwrap(),
            ball_in(&moved, kind, k, &lim).unwrap()
        );
    }

    #[test]
    fn centre_is_in_both_balls(p in perm(), kind in kind(), kseed in any::<usize>()) {
        let lim = Limits::default();
        let k = Some(1 + kseed % p.len());
        prop_assert!(ball_out(&p, kind, k, &lim).unwrap().contains(&p));
        prop_assert!(ball_in(&p, kind, k, &lim).unwrap().contains(&p));
    }

    #[test]
    fn full_width_ball_is_unbounded_ball(p in (1usize..=9).prop_flat_map(perm_of), kind in kind()) {
        let lim = Limits::default();
        let n = p.len();
        prop_assert_eq!(
            ball_out(&p, kind, Some(n), &lim).unwrap(),
            ball_out(&p, kind, None, &lim).unwrap()
        );
    }
}

#[test]
fn canonical_forms_classify_maps_exactly() {
    // An operation is a coordinate permutation, so its image of the identity
    // determines it.
    for n in 1..=7 {
        let id = Permutation::identity(n);
        for kind in OpKind::ALL {
            let patterns: Vec<Pattern> = (0..1u64 << n).map(|m| Pattern::from_mask(m, n)).collect();
            for a in &patterns {
                let ia = apply(kind, &id, a).unwrap();
                let ca = canonical_pattern(a, kind);
                for b in &patterns {
                    let same_map = ia == apply(kind, &id, b).unwrap();
                    assert_eq!(same_map, ca == canonical_pattern(b, kind), "{kind} {a} {b}");
                }
            }
        }
    }
}

#[test]
fn parallel_and_sequential_enumeration_agree() {
    let par = Limits::default();
    let seq = par.sequential();
    let p = Permutation::new(vec![7, 3, 12, 1, 9, 14, 2, 5, 11, 4, 13, 8, 6, 10]).unwrap();
    for kind in OpKind::ALL {
        for k in [None, Some(9)] {
            let a = ball_out(&p, kind, k, &par).unwrap();
            let b = ball_out(&p, kind, k, &seq).unwrap();
            assert_eq!(a.to_lines(), b.to_lines());
            let a = ball_in(&p, kind, k, &par).unwrap();
            let b = ball_in(&p, kind, k, &seq).unwrap();
            assert_eq!(a.to_lines(), b.to_lines());
        }
    }
}
