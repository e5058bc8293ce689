#![allow(dead_code)]

use proptest::prelude::*;
use tropid::words::WordExpr;
use tropid::{TropMatrix, TropScalar};

/// Small integers, small fractions, and occasionally values near the i64 limits.
pub fn scalar() -> impl Strategy<Value = TropScalar> {
    prop_oneof![
        6 => (-20i64..=20).prop_map(TropScalar::from_int),
        3 => (-60i64..=60, 1i64..=6).prop_map(|(p, q)| TropScalar::from_ratio(p, q).unwrap()),
        1 => prop_oneof![Just(i64::MAX - 3), Just(i64::MIN + 3), Just(i64::MAX / 2)]
            .prop_map(TropScalar::from_int),
    ]
}

pub fn int_scalar(range: i64) -> impl Strategy<Value = TropScalar> {
    (-range..=range).prop_map(TropScalar::from_int)
}

pub fn matrix_with(
    rows: usize,
    cols: usize,
    entry: impl Strategy<Value = TropScalar>,
) -> impl Strategy<Value = TropMatrix> {
    proptest::collection::vec(entry, rows * cols)
        .prop_map(move |e| TropMatrix::new(rows, cols, e).unwrap())
}

pub fn square(n: usize) -> impl Strategy<Value = TropMatrix> {
    matrix_with(n, n, scalar())
}

pub fn small_square(max_n: usize) -> impl Strategy<Value = TropMatrix> {
    (1..=max_n).prop_flat_map(square)
}

/// Random word expressions with sharing-free structure, at most a few hundred letters.
pub fn word_expr() -> impl Strategy<Value = WordExpr> {
    let leaf = prop_oneof![Just(WordExpr::x()), Just(WordExpr::y())];
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 1..4).prop_map(WordExpr::concat),
            (inner, 1u64..5).prop_map(|(w, k)| w.pow(k).unwrap()),
        ]
    })
}

/// Left-to-right product of the letters of `w`.
pub fn naive_eval(w: &WordExpr, x: &TropMatrix, y: &TropMatrix) -> TropMatrix {
    let mut acc: Option<TropMatrix> = None;
    for c in w.to_letters().chars() {
        let m = if c == 'x' { x } else { y };
        acc = Some(match acc {
            None => m.clone(),
            Some(a) => naive_mul(&a, m),
        });
    }
    acc.expect("non-empty word")
}

/// Textbook triple loop over exact rationals.
pub fn naive_mul(a: &TropMatrix, b: &TropMatrix) -> TropMatrix {
    assert_eq!(a.cols(), b.rows());
    TropMatrix::from_fn(a.rows(), b.cols(), |i, j| {
        let mut best: Option<TropScalar> = None;
        for k in 0..a.cols() {
            let v = a.get(i, k) + b.get(k, j);
            best = Some(match best {
                Some(b) if b <= v => b,
                _ => v,
            });
        }
        best.unwrap()
    })
    .unwrap()
}

/// Permanent by expansion along the first row.
pub fn naive_permanent(a: &TropMatrix) -> TropScalar {
    fn go(a: &TropMatrix, row: usize, used: &mut Vec<bool>) -> TropScalar {
        let n = a.rows();
        if row == n {
            return TropScalar::ZERO;
        }
        let mut best: Option<TropScalar> = None;
        for j in 0..n {
            if !used[j] {
                used[j] = true;
                let v = a.get(row, j) + &go(a, row + 1, used);
                used[j] = false;
                if best.as_ref().is_none_or(|b| v < *b) {
                    best = Some(v);
                }
            }
        }
        best.unwrap()
    }
    go(a, 0, &mut vec![false; a.rows()])
}
