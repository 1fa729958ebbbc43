use dopt_core::designs::{skew_from_tournament, Tournament};
use dopt_core::snf::{factors_from_minor_gcds, jacobi_identity_holds};
use dopt_core::verify::{two_block_det_closed_form, two_block_matrix};
use dopt_core::{invariant_factors, smith_normal_form, BigInt, IntMatrix};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn matrix(rows: usize, cols: usize, lo: i64, hi: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(lo..=hi, rows * cols)
        .prop_map(move |v| IntMatrix::from_fn(rows, cols, |i, j| v[i * cols + j]))
}

fn any_matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| matrix(r, c, -9, 9))
}

fn square(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max).prop_flat_map(|n| matrix(n, n, -9, 9))
}

fn signed_permutation(n: usize) -> impl Strategy<Value = IntMatrix> {
    (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(any::<bool>(), n)).prop_map(
        move |(p, s)| {
            IntMatrix::from_fn(n, n, |i, j| {
                if p[i] == j {
                    if s[i] {
                        -1
                    } else {
                        1
                    }
                } else {
                    0
                }
            })
        },
    )
}

fn tournament(max: usize) -> impl Strategy<Value = Tournament> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2)
            .prop_map(move |bits| Tournament::from_upper_bits(n, |k| bits[k]))
    })
}

fn divides_chain(f: &[BigInt]) -> bool {
    f.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matmul_associative((a, b, c) in (1..=5usize, 1..=5usize, 1..=5usize, 1..=5usize)
        .prop_flat_map(|(m, n, p, q)| (matrix(m, n, -9, 9), matrix(n, p, -9, 9), matrix(p, q, -9, 9))))
    {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn det_multiplicative((a, b) in (1..=8usize).prop_flat_map(|n| (matrix(n, n, -9, 9), matrix(n, n, -9, 9)))) {
        prop_assert_eq!((&a * &b).determinant().unwrap(), a.determinant().unwrap() * b.determinant().unwrap());
    }

    #[test]
    fn adjugate_identity(a in square(6)) {
        prop_assume!(!a.determinant().unwrap().is_zero());
        let (adj, det) = a.adjugate_and_det().unwrap();
        prop_assert_eq!(&det, &a.determinant().unwrap());
        let n = a.rows();
        prop_assert_eq!(&a * &adj, IntMatrix::identity(n).scale(&det));
        prop_assert_eq!(&adj * &a, IntMatrix::identity(n).scale(&det));
    }

    #[test]
    fn rank_bounds(a in any_matrix(7), p in prop::sample::select(vec![2u64, 3, 5, 7, 101])) {
        let r = a.rank_mod_p(p).unwrap();
        prop_assert!(r <= a.rows().min(a.cols()));
        prop_assert!(r <= smith_normal_form(&a, false).rank);
        prop_assert_eq!(IntMatrix::identity(a.rows()).rank_mod_p(p).unwrap(), a.rows());
    }

    #[test]
    fn snf_transforms(a in any_matrix(6)) {
        let res = smith_normal_form(&a, true);
        let (l, r) = (res.left.clone().unwrap(), res.right.clone().unwrap());
        prop_assert_eq!(&(&l * &a) * &r, res.diagonal_matrix(a.rows(), a.cols()));
        prop_assert!(l.determinant().unwrap().abs().is_one());
        prop_assert!(r.determinant().unwrap().abs().is_one());
        prop_assert!(res.factors.iter().all(|f| !f.is_negative()));
        prop_assert!(divides_chain(&res.factors));
        prop_assert_eq!(res.rank, res.factors.iter().filter(|f| !f.is_zero()).count());
    }

    #[test]
    fn snf_matches_minor_gcds(a in any_matrix(5)) {
        prop_assert_eq!(invariant_factors(&a), factors_from_minor_gcds(&a).unwrap());
    }

    #[test]
    fn factors_divide_under_products((m, n) in (matrix(4, 4, -9, 9), matrix(4, 4, -9, 9))) {
        prop_assume!(!m.determinant().unwrap().is_zero() && !n.determinant().unwrap().is_zero());
        let fm = invariant_factors(&m);
        let fp = invariant_factors(&(&m * &n));
        for (x, y) in fm.iter().zip(&fp) {
            prop_assert!((y % x).is_zero(), "{} does not divide {}", x, y);
        }
    }

    #[test]
    fn snf_signed_permutation_invariant((a, p, q) in (1..=6usize)
        .prop_flat_map(|n| (matrix(n, n, -9, 9), signed_permutation(n), signed_permutation(n))))
    {
        prop_assert_eq!(invariant_factors(&(&(&p * &a) * &q)), invariant_factors(&a));
    }

    #[test]
    fn bordered_tournament_reduces(a in tournament(7)) {
        let s = skew_from_tournament(&a);
        let two_b = a.plus_identity().scale(&BigInt::from(2));
        let direct = IntMatrix::identity(1).direct_sum(&two_b);
        prop_assert_eq!(invariant_factors(&s), invariant_factors(&direct));
        let det_b = a.plus_identity().determinant().unwrap();
        prop_assert_eq!(s.determinant().unwrap(), BigInt::from(2).pow(a.order() as u32) * det_b);
        prop_assert!(s.is_pm1());
        prop_assert_eq!(&s + &s.transpose(), IntMatrix::identity(a.order() + 1).scale(&BigInt::from(2)));
    }

    #[test]
    fn jacobi_on_random_nonsingular((m, rows, cols) in (2..=5usize).prop_flat_map(|n| {
        let idx: Vec<usize> = (0..n).collect();
        (1..n).prop_flat_map(move |k| (matrix(n, n, -5, 5), subsequence(idx.clone(), k), subsequence(idx.clone(), k)))
    })) {
        prop_assume!(!m.determinant().unwrap().is_zero());
        prop_assert!(jacobi_identity_holds(&m, &rows, &cols).unwrap());
    }

    #[test]
    fn schur_two_block(alpha in -6i64..=6, beta in -6i64..=6, gamma in -6i64..=6, a in 1usize..=4, b in 1usize..=4) {
        let m = two_block_matrix(alpha, beta, gamma, a, b);
        let want = two_block_det_closed_form(&alpha.into(), &beta.into(), &gamma.into(), a, b);
        prop_assert_eq!(m.determinant().unwrap(), want);
    }
}
