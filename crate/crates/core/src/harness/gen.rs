//! Seeded instance generators.
//!
//! Every trial draws from its own ChaCha stream (`set_stream(draw)` on a
//! generator seeded with the master seed), so the instance for trial `t`
//! never depends on which other trials ran or in what order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dominance::{dominance_bound, is_dominant_pair, DominanceParams};
use crate::error::{Result, TropError};
use crate::permanent::permanent_with_witnesses;
use crate::tropcore::{Potentials, TropMatrix, TropScalar};

/// Seed used when neither `--seed` nor `TROPID_SEED` is given.
pub const DEFAULT_SEED: u64 = 0x7357_1d5e;

/// Parameters of a reproducible instance stream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenConfig {
    pub seed: u64,
    /// Matrix order.
    pub n: usize,
    /// Entries are drawn from `[-range, range]`.
    pub range: i64,
    /// Entries are multiples of `1/denom`.
    pub denom: i64,
    pub trials: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: DEFAULT_SEED,
            n: 3,
            range: 10,
            denom: 1,
            trials: 1000,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(TropError::Parameter("n must be positive".into()));
        }
        if self.range < 0 {
            return Err(TropError::Parameter("range must be non-negative".into()));
        }
        if self.denom < 1 {
            return Err(TropError::Parameter("denominator must be positive".into()));
        }
        if self.range.checked_mul(self.denom).is_none_or(|g| g > 1 << 40) {
            return Err(TropError::Parameter("range * denom must not exceed 2^40".into()));
        }
        if self.trials == 0 {
            return Err(TropError::Parameter("trials must be positive".into()));
        }
        Ok(())
    }
}

/// Random source for one draw index of a [`GenConfig`].
pub struct Sampler {
    rng: ChaCha8Rng,
    range: i64,
    denom: i64,
    n: usize,
}

impl Sampler {
    pub fn new(cfg: &GenConfig, draw: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(draw);
        Sampler {
            rng,
            range: cfg.range,
            denom: cfg.denom,
            n: cfg.n,
        }
    }

    fn on_grid(&self, k: i64) -> TropScalar {
        if self.denom == 1 {
            TropScalar::from_int(k)
        } else {
            TropScalar::from_ratio(k, self.denom).expect("positive denominator")
        }
    }

    /// Uniform on the `2RD + 1` multiples of `1/D` in `[-R, R]`.
    pub fn scalar(&mut self) -> TropScalar {
        let g = self.range * self.denom;
        let k = self.rng.random_range(-g..=g);
        self.on_grid(k)
    }

    /// Uniform on the multiples of `1/D` in `[0, R]`.
    pub fn nonneg_scalar(&mut self) -> TropScalar {
        let g = self.range * self.denom;
        let k = self.rng.random_range(0..=g);
        self.on_grid(k)
    }

    pub fn index(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> TropMatrix {
        TropMatrix::from_fn(rows, cols, |_, _| self.scalar()).expect("positive shape")
    }

    pub fn square(&mut self) -> TropMatrix {
        self.matrix(self.n, self.n)
    }

    /// A square matrix with a nearly constant diagonal: `d + [0, R/4]` on the
    /// diagonal and `d + [0, 2R]` off it. Plain random matrices have one
    /// dominant loop, which makes high powers sign-singular; these do not.
    pub fn flat_diagonal_square(&mut self) -> TropMatrix {
        let n = self.n;
        let d = self.scalar();
        let quarter = TropScalar::from_ratio(1, 4).expect("nonzero");
        TropMatrix::from_fn(n, n, |i, j| {
            let spread = if i == j {
                &self.nonneg_scalar() * &quarter
            } else {
                self.nonneg_scalar().times(2)
            };
            &d + &spread
        })
        .expect("positive order")
    }

    /// Potentials with entries in `[-scale R, scale R]`.
    pub fn potentials(&mut self, scale: i64) -> Potentials {
        Potentials(
            (0..self.n)
                .map(|_| {
                    let s = self.scalar();
                    s.times(scale as u64)
                })
                .collect(),
        )
    }

    /// A diagonally H-dominant pair: shared diagonal `d`, off-diagonal
    /// entries `max(d_i, d_j) + H|d_i - d_j|` plus independent non-negative slack.
    pub fn dominant_pair(&mut self, h: &DominanceParams) -> (TropMatrix, TropMatrix) {
        let n = self.n;
        let d: Vec<TropScalar> = (0..n).map(|_| self.scalar()).collect();
        let draw = |s: &mut Self| {
            TropMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    d[i].clone()
                } else {
                    &dominance_bound(&d[i], &d[j], h) + &s.nonneg_scalar()
                }
            })
            .expect("positive order")
        };
        let a = draw(self);
        let b = draw(self);
        assert!(
            is_dominant_pair(&a, &b, h).expect("square pair"),
            "generated pair must be H-dominant"
        );
        (a, b)
    }

    /// A pair with equal diagonals and the identity in both witness sets.
    ///
    /// Off-diagonal entries are free; each diagonal entry is the least
    /// off-diagonal entry of the pair minus independent non-negative slack,
    /// so every non-identity permutation costs at least as much as the identity.
    pub fn sigma_id_pair(&mut self) -> (TropMatrix, TropMatrix) {
        let n = self.n;
        let a0 = self.square();
        let b0 = self.square();
        let floor = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .flat_map(|(i, j)| [a0.get(i, j).clone(), b0.get(i, j).clone()])
            .min()
            .unwrap_or_else(|| a0.get(0, 0).clone());
        let d: Vec<TropScalar> = (0..n).map(|_| &floor - &self.nonneg_scalar()).collect();
        let with_diag = |m: &TropMatrix| {
            TropMatrix::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { m.get(i, j).clone() })
                .expect("positive order")
        };
        let (a, b) = (with_diag(&a0), with_diag(&b0));
        for m in [&a, &b] {
            let rep = permanent_with_witnesses(m).expect("enumerable order");
            assert!(rep.contains_identity(), "identity must be a witness");
        }
        (a, b)
    }
}

/// `n x n` matrix for draw index `draw`.
pub fn gen_matrix(cfg: &GenConfig, draw: u64) -> TropMatrix {
    Sampler::new(cfg, draw).square()
}

pub fn gen_dominant_pair(cfg: &GenConfig, draw: u64, h: &DominanceParams) -> (TropMatrix, TropMatrix) {
    Sampler::new(cfg, draw).dominant_pair(h)
}

pub fn gen_sigma_id_pair(cfg: &GenConfig, draw: u64) -> (TropMatrix, TropMatrix) {
    Sampler::new(cfg, draw).sigma_id_pair()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dominance::is_dominant;

    fn cfg(seed: u64, range: i64, denom: i64) -> GenConfig {
        GenConfig {
            seed,
            n: 3,
            range,
            denom,
            trials: 1,
        }
    }

    #[test]
    fn zero_range_gives_zero_matrix() {
        assert_eq!(gen_matrix(&cfg(1, 0, 1), 0), TropMatrix::zeros(3, 3).unwrap());
    }

    #[test]
    fn deterministic_per_draw() {
        let c = cfg(42, 100, 3);
        assert_eq!(gen_matrix(&c, 7), gen_matrix(&c, 7));
        assert_ne!(gen_matrix(&c, 7), gen_matrix(&c, 8));
        assert_ne!(gen_matrix(&c, 7), gen_matrix(&cfg(43, 100, 3), 7));
    }

    #[test]
    fn grid_respected() {
        let c = cfg(3, 5, 4);
        for draw in 0..50 {
            for e in gen_matrix(&c, draw).entries() {
                assert!(e.times(4).is_integer());
                assert!(e.abs() <= TropScalar::from_int(5));
            }
        }
        for draw in 0..50 {
            assert!(gen_matrix(&cfg(3, 5, 1), draw).entries().iter().all(TropScalar::is_integer));
        }
    }

    #[test]
    fn dominant_pairs() {
        let h = DominanceParams::new("5/2".parse().unwrap()).unwrap();
        for draw in 0..50 {
            let (a, b) = gen_dominant_pair(&cfg(9, 10, 2), draw, &h);
            assert_eq!(a.diagonal(), b.diagonal());
            assert!(is_dominant_pair(&a, &b, &h).unwrap());
        }
        // constant zero diagonal: every entry non-negative, dominant for any H
        let (a, _) = gen_dominant_pair(&cfg(9, 0, 1), 0, &h);
        assert!(a.entries().iter().all(|e| !e.is_negative()));
        assert!(is_dominant(&a, &DominanceParams::from_int(1_000_000).unwrap()).unwrap());
    }

    #[test]
    fn sigma_id_pairs() {
        for draw in 0..50 {
            let (a, b) = gen_sigma_id_pair(&cfg(11, 20, 1), draw);
            assert_eq!(a.diagonal(), b.diagonal());
            assert!(permanent_with_witnesses(&a).unwrap().contains_identity());
            assert!(permanent_with_witnesses(&b).unwrap().contains_identity());
        }
        // constant matrix: all permutations are witnesses
        let (a, _) = gen_sigma_id_pair(&cfg(11, 0, 1), 0);
        assert_eq!(permanent_with_witnesses(&a).unwrap().witnesses.len(), 6);
    }

    #[test]
    fn validation() {
        assert!(cfg(1, 10, 1).validate().is_ok());
        assert!(cfg(1, -1, 1).validate().is_err());
        assert!(cfg(1, 1, 0).validate().is_err());
        assert!(GenConfig { trials: 0, ..cfg(1, 1, 1) }.validate().is_err());
    }
}
