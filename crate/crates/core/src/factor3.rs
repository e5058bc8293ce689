//! Rank-2 factorization of sign-singular 3x3 matrices.
//!
//! The columns of a matrix of factor rank two lie on a tropical segment, and
//! points on a segment are ordered by betweenness, so the two extreme columns
//! generate the third. Rather than locating the extremes, every column pair is
//! tried in turn, with coefficients recovered by residuation. Rows are tried
//! through the transpose if no column pair works.

use serde::Serialize;

use crate::error::{Result, TropError};
use crate::permanent::sign_singular;
use crate::tropcore::{TropMatrix, TropScalar};
use crate::words::{lift_word, u_word, v_word, Evaluator};

/// `A = P Q` with `P` 3x2 and `Q` 2x3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization3 {
    pub p: TropMatrix,
    pub q: TropMatrix,
}

impl Factorization3 {
    pub fn product(&self) -> TropMatrix {
        self.p.mul(&self.q).expect("3x2 times 2x3")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorFailure {
    NotSingular,
    NoPairFound,
}

impl std::fmt::Display for FactorFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FactorFailure::NotSingular => "not_singular",
            FactorFailure::NoPairFound => "no_pair_found",
        })
    }
}

/// Residuation test for `c` in the min-plus span of `p` and `q`.
///
/// The least `(λ, μ)` with `min(λ + p_k, μ + q_k) >= c_k` for all `k` is
/// `λ* = max_k (c_k - p_k)`, `μ* = max_k (c_k - q_k)`; `c` is in the span
/// exactly when this principal solution reproduces it.
pub fn span_membership(
    c: &[TropScalar],
    p: &[TropScalar],
    q: &[TropScalar],
) -> Option<(TropScalar, TropScalar)> {
    assert!(
        c.len() == p.len() && c.len() == q.len() && !c.is_empty(),
        "columns must have equal nonzero length"
    );
    let coef = |g: &[TropScalar]| {
        c.iter()
            .zip(g)
            .map(|(ck, gk)| ck - gk)
            .max()
            .expect("non-empty")
    };
    let (lambda, mu) = (coef(p), coef(q));
    let reproduces = c
        .iter()
        .zip(p.iter().zip(q))
        .all(|(ck, (pk, qk))| TropScalar::min(&(&lambda + pk), &(&mu + qk)) == *ck);
    reproduces.then_some((lambda, mu))
}

/// Tries each column pair of `a` as the columns of `P`.
fn factor_by_columns(a: &TropMatrix) -> Option<Factorization3> {
    let cols: Vec<Vec<TropScalar>> = (0..3).map(|j| a.column(j)).collect();
    for (g1, g2) in [(0, 1), (0, 2), (1, 2)] {
        let mut q_top = Vec::with_capacity(3);
        let mut q_bottom = Vec::with_capacity(3);
        let all = cols.iter().all(|c| match span_membership(c, &cols[g1], &cols[g2]) {
            Some((l, m)) => {
                q_top.push(l);
                q_bottom.push(m);
                true
            }
            None => false,
        });
        if !all {
            continue;
        }
        let p = TropMatrix::from_fn(3, 2, |i, k| cols[if k == 0 { g1 } else { g2 }][i].clone())
            .expect("3x2");
        let q = TropMatrix::new(2, 3, q_top.into_iter().chain(q_bottom).collect()).expect("2x3");
        return Some(Factorization3 { p, q });
    }
    None
}

/// Shifts each column of `P` to minimum 0, moving the shift into the matching row of `Q`.
fn canonicalize(f: Factorization3) -> Factorization3 {
    let shifts: Vec<TropScalar> = (0..2)
        .map(|k| f.p.column(k).into_iter().min().expect("3 rows"))
        .collect();
    let p = TropMatrix::from_fn(3, 2, |i, k| f.p.get(i, k) - &shifts[k]).expect("3x2");
    let q = TropMatrix::from_fn(2, 3, |k, j| f.q.get(k, j) + &shifts[k]).expect("2x3");
    Factorization3 { p, q }
}

/// Exact `A = P Q` with inner dimension 2 for a sign-singular 3x3 matrix.
pub fn factor_rank2(a: &TropMatrix) -> Result<std::result::Result<Factorization3, FactorFailure>> {
    if a.shape() != (3, 3) {
        return Err(TropError::Parameter(format!(
            "factor_rank2 needs a 3x3 matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !sign_singular(a)? {
        return Ok(Err(FactorFailure::NotSingular));
    }
    let found = factor_by_columns(a).or_else(|| {
        factor_by_columns(&a.transpose()).map(|f| Factorization3 {
            p: f.q.transpose(),
            q: f.p.transpose(),
        })
    });
    Ok(match found {
        Some(f) => {
            let f = canonicalize(f);
            assert_eq!(&f.product(), a, "factorization must reproduce its input");
            Ok(f)
        }
        None => Err(FactorFailure::NoPairFound),
    })
}

/// Outcome of checking `U(AA, AB)A = V(AA, AB)A` on a factorizable pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftedCheck {
    pub holds: bool,
    pub lhs: TropMatrix,
    pub rhs: TropMatrix,
}

/// Evaluates `U(AA, AB)A` and `V(AA, AB)A` for the 2x2 identity words `U`, `V`.
/// Both `A` and `B` must factor through inner dimension 2.
pub fn lifted_identity_check(
    a: &TropMatrix,
    b: &TropMatrix,
) -> Result<std::result::Result<LiftedCheck, FactorFailure>> {
    for m in [a, b] {
        if let Err(why) = factor_rank2(m)? {
            return Ok(Err(why));
        }
    }
    let (lhs_word, rhs_word) = (lift_word(&u_word()), lift_word(&v_word()));
    let mut ev = Evaluator::new(a, b)?;
    let lhs = ev.eval(&lhs_word)?;
    let rhs = ev.eval(&rhs_word)?;
    Ok(Ok(LiftedCheck {
        holds: lhs == rhs,
        lhs,
        rhs,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(v: &[i64]) -> Vec<TropScalar> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn membership_examples() {
        let p = col(&[1, 4, -2]);
        let q = col(&[0, 0, 0]);
        let (l, _) = span_membership(&p, &p, &q).unwrap();
        assert_eq!(l, TropScalar::ZERO);

        let (l, m) = span_membership(&col(&[0, 0, 0]), &col(&[0, 0, 0]), &col(&[5, 5, 5])).unwrap();
        assert_eq!((l, m), (0.into(), (-5).into()));

        assert_eq!(span_membership(&col(&[0, 0, 1]), &col(&[0, 0, 0]), &col(&[0, 0, 0])), None);
    }

    #[test]
    fn zero_matrix_factors_to_zeros() {
        let f = factor_rank2(&TropMatrix::zeros(3, 3).unwrap()).unwrap().unwrap();
        assert_eq!(f.p, TropMatrix::zeros(3, 2).unwrap());
        assert_eq!(f.q, TropMatrix::zeros(2, 3).unwrap());
    }

    #[test]
    fn nonsingular_is_refused() {
        let a = TropMatrix::from_ints(&[[0, 5, 5], [5, 0, 5], [5, 5, 0]]);
        assert_eq!(factor_rank2(&a).unwrap(), Err(FactorFailure::NotSingular));
        assert!(factor_rank2(&TropMatrix::zeros(2, 2).unwrap()).is_err());
    }

    #[test]
    fn product_round_trip() {
        let p0 = TropMatrix::from_ints(&[[0, 3], [2, -1], [5, 4]]);
        let q0 = TropMatrix::from_ints(&[[1, 0, 7], [-2, 6, 2]]);
        let a = p0.mul(&q0).unwrap();
        let f = factor_rank2(&a).unwrap().unwrap();
        assert_eq!(f.product(), a);
        for k in 0..2 {
            assert_eq!(f.p.column(k).into_iter().min().unwrap(), TropScalar::ZERO);
        }
    }

    #[test]
    fn lifted_examples() {
        let z = TropMatrix::zeros(3, 3).unwrap();
        assert!(lifted_identity_check(&z, &z).unwrap().unwrap().holds);
        let a = TropMatrix::from_ints(&[[0, 3], [2, -1], [5, 4]])
            .mul(&TropMatrix::from_ints(&[[1, 0, 7], [-2, 6, 2]]))
            .unwrap();
        let b = TropMatrix::from_ints(&[[4, 0], [0, 9], [-3, 1]])
            .mul(&TropMatrix::from_ints(&[[0, 2, 5], [8, -4, 0]]))
            .unwrap();
        assert!(lifted_identity_check(&a, &a).unwrap().unwrap().holds);
        assert!(lifted_identity_check(&a, &b).unwrap().unwrap().holds);
        let nonsing = TropMatrix::from_ints(&[[0, 5, 5], [5, 0, 5], [5, 5, 0]]);
        assert_eq!(lifted_identity_check(&a, &nonsing).unwrap(), Err(FactorFailure::NotSingular));
    }
}
