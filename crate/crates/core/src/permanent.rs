//! Tropical permanent, its witness set, and sign-singularity.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Result, TropError};
use crate::tropcore::{TropMatrix, TropScalar};

/// Largest order for which permutations are enumerated exhaustively.
pub const MAX_ENUM_ORDER: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A bijection on `{0..n-1}` (printed 1-based) with its parity cached.
///
/// Ordering is lexicographic on the image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
    parity: Parity,
}

fn inversion_parity(images: &[usize]) -> Parity {
    let mut inv = 0usize;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if images[i] > images[j] {
                inv += 1;
            }
        }
    }
    if inv.is_multiple_of(2) {
        Parity::Even
    } else {
        Parity::Odd
    }
}

impl Permutation {
    /// Builds a permutation from zero-based images; fails unless `images` is a bijection.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(TropError::Parameter(format!(
                    "{images:?} is not a permutation of 0..{n}"
                )));
            }
        }
        let parity = inversion_parity(&images);
        Ok(Permutation { images, parity })
    }

    /// Builds a permutation from one-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let zero: Option<Vec<usize>> = images.iter().map(|v| v.checked_sub(1)).collect();
        Self::new(zero.ok_or_else(|| TropError::Parameter("images are 1-based".into()))?)
    }

    /// Builds a permutation of `{1..n}` from one-based disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                let b = cyc[(k + 1) % cyc.len()];
                if a == 0 || b == 0 || a > n || b > n {
                    return Err(TropError::Parameter(format!("cycle entry out of 1..{n}")));
                }
                images[a - 1] = b - 1;
            }
        }
        Self::new(images)
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
            parity: Parity::Even,
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Zero-based image of zero-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `Σ_i A[i][σ(i)]`.
    pub fn weight(&self, a: &TropMatrix) -> TropScalar {
        self.images
            .iter()
            .enumerate()
            .map(|(i, &j)| a.get(i, j))
            .sum()
    }

    /// Disjoint cycles of length at least two, one-based, each starting at its least element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push(i + 1);
                i = self.images[i];
            }
            out.push(cyc);
        }
        out
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, e.g. `(1 2)(3 4)`; the identity prints as `id`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("id");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Permutation", 3)?;
        st.serialize_field("cycles", &self.to_string())?;
        st.serialize_field("images", &self.images.iter().map(|v| v + 1).collect::<Vec<_>>())?;
        st.serialize_field("parity", &self.parity)?;
        st.end()
    }
}

/// `(τσ)(i) = τ(σ(i))`: apply `sigma` first.
pub fn compose(tau: &Permutation, sigma: &Permutation) -> Result<Permutation> {
    if tau.len() != sigma.len() {
        return Err(TropError::Parameter(format!(
            "cannot compose permutations of sizes {} and {}",
            tau.len(),
            sigma.len()
        )));
    }
    Ok(Permutation {
        images: sigma.images.iter().map(|&s| tau.images[s]).collect(),
        parity: tau.parity.combine(sigma.parity),
    })
}

/// Rearranges `v` into the next permutation in lexicographic order.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All permutations of `{0..n-1}` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        out.push(Permutation {
            parity: inversion_parity(&cur),
            images: cur.clone(),
        });
        if !next_permutation(&mut cur) {
            return out;
        }
    }
}

/// Permanent value, complete witness set, and sign-singularity verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermanentReport {
    pub value: TropScalar,
    /// All minimizing permutations, lexicographic on images.
    pub witnesses: Vec<Permutation>,
    pub sign_singular: bool,
}

impl PermanentReport {
    pub fn contains(&self, p: &Permutation) -> bool {
        self.witnesses.binary_search(p).is_ok()
    }

    pub fn contains_identity(&self) -> bool {
        self.witnesses.iter().any(Permutation::is_identity)
    }
}

fn check_enumerable(a: &TropMatrix, op: &'static str) -> Result<usize> {
    let n = a.order(op)?;
    if n > MAX_ENUM_ORDER {
        return Err(TropError::TooLarge {
            n,
            max: MAX_ENUM_ORDER,
        });
    }
    Ok(n)
}

/// Exhaustive tropical permanent with every minimizing permutation.
pub fn permanent_with_witnesses(a: &TropMatrix) -> Result<PermanentReport> {
    let n = check_enumerable(a, "permanent")?;
    let mut best: Option<TropScalar> = None;
    let mut witnesses = Vec::new();
    for p in all_permutations(n) {
        let w = p.weight(a);
        match &best {
            Some(b) if w > *b => {}
            Some(b) if w == *b => witnesses.push(p),
            _ => {
                best = Some(w);
                witnesses.clear();
                witnesses.push(p);
            }
        }
    }
    let sign_singular = witnesses.iter().any(|p| p.parity() == Parity::Even)
        && witnesses.iter().any(|p| p.parity() == Parity::Odd);
    Ok(PermanentReport {
        value: best.expect("at least one permutation"),
        witnesses,
        sign_singular,
    })
}

pub fn permanent(a: &TropMatrix) -> Result<TropScalar> {
    Ok(permanent_with_witnesses(a)?.value)
}

/// True iff minimizing permutations of both parities exist.
pub fn sign_singular(a: &TropMatrix) -> Result<bool> {
    Ok(permanent_with_witnesses(a)?.sign_singular)
}
