#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use yfrieze_core::{FiniteType, LaurentPoly, MutationMatrix, RationalFn, SemiringId, SemiringValue};

pub fn laurent(nvars: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-2i32..3, nvars), -4i64..5), 0..5).prop_map(
        move |terms| LaurentPoly::from_terms(nvars, terms.into_iter().map(|(e, c)| (e, BigInt::from(c)))),
    )
}

pub fn nonzero_laurent(nvars: usize) -> impl Strategy<Value = LaurentPoly> {
    laurent(nvars).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn rational_fn(nvars: usize) -> impl Strategy<Value = RationalFn> {
    (laurent(nvars), nonzero_laurent(nvars)).prop_map(|(n, d)| RationalFn::new(n, d).unwrap())
}

/// Subtraction-free rational functions in `nvars` variables.
pub fn positive_fn(nvars: usize) -> impl Strategy<Value = RationalFn> {
    let poly = move || {
        prop::collection::vec((prop::collection::vec(0i32..3, nvars), 1i64..4), 1..4).prop_map(move |t| {
            LaurentPoly::from_terms(nvars, t.into_iter().map(|(e, c)| (e, BigInt::from(c))))
        })
    };
    (poly(), poly()).prop_map(|(n, d)| RationalFn::new_subtraction_free(n, d).unwrap())
}

pub fn positive_rational() -> impl Strategy<Value = BigRational> {
    (1i64..60, 1i64..60).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

pub fn semiring_value(id: SemiringId) -> BoxedStrategy<SemiringValue> {
    match id {
        SemiringId::PositiveIntegers => (1i64..1000).prop_map(move |n| id.from_int(n).unwrap()).boxed(),
        SemiringId::PositiveRationals => positive_rational()
            .prop_map(|q| SemiringValue::positive_rational(q).unwrap())
            .boxed(),
        SemiringId::TropicalNonneg => (0i64..1000).prop_map(move |n| id.from_int(n).unwrap()).boxed(),
        SemiringId::TropicalSemifield => (-1000i64..1000).prop_map(move |n| id.from_int(n).unwrap()).boxed(),
        SemiringId::Universal(r) => positive_fn(r)
            .prop_map(|f| SemiringValue::universal(f).unwrap())
            .boxed(),
    }
}

pub const SEMIRINGS: [SemiringId; 5] = [
    SemiringId::PositiveIntegers,
    SemiringId::PositiveRationals,
    SemiringId::TropicalNonneg,
    SemiringId::TropicalSemifield,
    SemiringId::Universal(2),
];

/// Skew-symmetrizable matrices `S D` with `S` skew-symmetric and `D`
/// positive diagonal.
pub fn mutation_matrix() -> impl Strategy<Value = MutationMatrix> {
    (2usize..5)
        .prop_flat_map(|r| {
            (
                prop::collection::vec(-2i64..3, r * (r - 1) / 2),
                prop::collection::vec(1i64..4, r),
            )
                .prop_map(move |(upper, d)| {
                    let mut s = vec![vec![0i64; r]; r];
                    let mut it = upper.into_iter();
                    for i in 0..r {
                        for j in i + 1..r {
                            let v = it.next().unwrap();
                            s[i][j] = v;
                            s[j][i] = -v;
                        }
                    }
                    let b = (0..r).map(|i| (0..r).map(|j| s[i][j] * d[j]).collect()).collect();
                    MutationMatrix::new(b).unwrap()
                })
        })
}

pub fn finite_types(max_rank: usize) -> Vec<FiniteType> {
    (1..=max_rank).flat_map(FiniteType::of_rank).collect()
}

pub fn finite_type(max_rank: usize) -> impl Strategy<Value = FiniteType> {
    prop::sample::select(finite_types(max_rank))
}
