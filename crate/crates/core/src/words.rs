//! Words over `{x, y}` as shared expression DAGs.
//!
//! A [`WordExpr`] is a letter, a concatenation, or a positive power. Nodes
//! are reference counted, so a sub-expression used in many places is stored
//! once. Evaluation at a pair of matrices memoizes on node identity, which
//! is sound because the min-plus product is associative.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Result, TropError};
use crate::tropcore::{TropMatrix, TropScalar};

/// Largest `n` accepted by [`gamma`].
pub const MAX_GAMMA_ORDER: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::Y => 'y',
        }
    }

    /// `A` for `x`, `B` for `y`, as used by `--emit`.
    pub fn as_matrix_char(self) -> char {
        match self {
            Letter::X => 'A',
            Letter::Y => 'B',
        }
    }
}

#[derive(Clone)]
pub struct WordExpr(Arc<Node>);

struct Node {
    kind: Kind,
    len: u64,
}

enum Kind {
    Letter(Letter),
    Concat(Vec<WordExpr>),
    Power(WordExpr, u64),
}

impl WordExpr {
    pub fn letter(l: Letter) -> Self {
        WordExpr(Arc::new(Node {
            kind: Kind::Letter(l),
            len: 1,
        }))
    }

    pub fn x() -> Self {
        Self::letter(Letter::X)
    }

    pub fn y() -> Self {
        Self::letter(Letter::Y)
    }

    pub fn concat(parts: Vec<WordExpr>) -> Self {
        let len = parts.iter().map(WordExpr::len).sum();
        WordExpr(Arc::new(Node {
            kind: Kind::Concat(parts),
            len,
        }))
    }

    /// `self^k`, `k >= 1`.
    pub fn pow(&self, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(TropError::ZeroPower);
        }
        let len = self
            .len()
            .checked_mul(k)
            .ok_or_else(|| TropError::Parameter("word length overflows u64".into()))?;
        Ok(WordExpr(Arc::new(Node {
            kind: Kind::Power(self.clone(), k),
            len,
        })))
    }

    /// Parses a plain word such as `xxyx`.
    pub fn from_letters(s: &str) -> Result<Self> {
        let parts = s
            .chars()
            .map(|c| match c {
                'x' => Ok(Self::x()),
                'y' => Ok(Self::y()),
                _ => Err(TropError::Parameter(format!("{c:?} is not a letter of {{x,y}}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::concat(parts))
    }

    /// Number of base letters in the expansion.
    pub fn len(&self) -> u64 {
        self.0.len
    }

    pub fn is_empty(&self) -> bool {
        self.0.len == 0
    }

    fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Letters of the expansion, in order, without materializing it.
    pub fn expand_stream(&self) -> Letters<'_> {
        Letters {
            stack: vec![Frame::Start(self)],
        }
    }

    /// Expands into a `String` of `x`/`y`. Intended for short words.
    pub fn to_letters(&self) -> String {
        self.expand_stream().map(Letter::as_char).collect()
    }

    /// Replaces every `x` by `x_img` and every `y` by `y_img`, keeping
    /// shared sub-expressions shared.
    pub fn substitute(&self, x_img: &WordExpr, y_img: &WordExpr) -> WordExpr {
        fn go(
            e: &WordExpr,
            x_img: &WordExpr,
            y_img: &WordExpr,
            memo: &mut HashMap<usize, WordExpr>,
        ) -> WordExpr {
            if let Some(done) = memo.get(&e.id()) {
                return done.clone();
            }
            let out = match &e.0.kind {
                Kind::Letter(Letter::X) => x_img.clone(),
                Kind::Letter(Letter::Y) => y_img.clone(),
                Kind::Concat(parts) => WordExpr::concat(
                    parts.iter().map(|p| go(p, x_img, y_img, memo)).collect(),
                ),
                Kind::Power(base, k) => go(base, x_img, y_img, memo)
                    .pow(*k)
                    .expect("exponent already validated"),
            };
            memo.insert(e.id(), out.clone());
            out
        }
        go(self, x_img, y_img, &mut HashMap::new())
    }

    /// Min-plus product of the letter sequence with `x := x_val`, `y := y_val`.
    pub fn eval(&self, x_val: &TropMatrix, y_val: &TropMatrix) -> Result<TropMatrix> {
        Evaluator::new(x_val, y_val)?.eval(self)
    }

    /// Number of distinct nodes in the DAG.
    pub fn node_count(&self) -> usize {
        fn go(e: &WordExpr, seen: &mut std::collections::HashSet<usize>) {
            if !seen.insert(e.id()) {
                return;
            }
            match &e.0.kind {
                Kind::Letter(_) => {}
                Kind::Concat(parts) => parts.iter().for_each(|p| go(p, seen)),
                Kind::Power(base, _) => go(base, seen),
            }
        }
        let mut seen = std::collections::HashSet::new();
        go(self, &mut seen);
        seen.len()
    }
}

impl fmt::Display for WordExpr {
    /// Structural notation, e.g. `x^2 y^4 (x y)^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            Kind::Letter(l) => write!(f, "{}", l.as_char()),
            Kind::Concat(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            Kind::Power(base, k) => match base.0.kind {
                Kind::Letter(_) => write!(f, "{base}^{k}"),
                _ => write!(f, "({base})^{k}"),
            },
        }
    }
}

impl fmt::Debug for WordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WordExpr(len={}, {})", self.len(), self)
    }
}

enum Frame<'a> {
    Start(&'a WordExpr),
    Concat(&'a [WordExpr], usize),
    Power(&'a WordExpr, u64),
}

/// Streaming expansion of a [`WordExpr`]; memory is bounded by DAG depth.
pub struct Letters<'a> {
    stack: Vec<Frame<'a>>,
}

impl Iterator for Letters<'_> {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        loop {
            let next = match self.stack.last_mut()? {
                Frame::Start(e) => {
                    let e = *e;
                    self.stack.pop();
                    e
                }
                Frame::Concat(parts, idx) => {
                    if *idx == parts.len() {
                        self.stack.pop();
                        continue;
                    }
                    *idx += 1;
                    &parts[*idx - 1]
                }
                Frame::Power(base, remaining) => {
                    if *remaining == 0 {
                        self.stack.pop();
                        continue;
                    }
                    *remaining -= 1;
                    *base
                }
            };
            match &next.0.kind {
                Kind::Letter(l) => return Some(*l),
                Kind::Concat(parts) => self.stack.push(Frame::Concat(parts, 0)),
                Kind::Power(base, k) => self.stack.push(Frame::Power(base, *k)),
            }
        }
    }
}

/// Evaluates word expressions at one fixed assignment `(x_val, y_val)`,
/// caching every node it has seen. Each evaluator owns its cache.
pub struct Evaluator<'m> {
    x_val: &'m TropMatrix,
    y_val: &'m TropMatrix,
    // holds a clone of each key node so addresses cannot be reused
    memo: HashMap<usize, (WordExpr, TropMatrix)>,
}

impl<'m> Evaluator<'m> {
    pub fn new(x_val: &'m TropMatrix, y_val: &'m TropMatrix) -> Result<Self> {
        let n = x_val.order("eval")?;
        if y_val.shape() != (n, n) {
            return Err(TropError::Shape {
                op: "eval",
                left_rows: n,
                left_cols: n,
                right_rows: y_val.rows(),
                right_cols: y_val.cols(),
            });
        }
        Ok(Evaluator {
            x_val,
            y_val,
            memo: HashMap::new(),
        })
    }

    pub fn eval(&mut self, e: &WordExpr) -> Result<TropMatrix> {
        if let Some((_, m)) = self.memo.get(&e.id()) {
            return Ok(m.clone());
        }
        let out = match &e.0.kind {
            Kind::Letter(Letter::X) => self.x_val.clone(),
            Kind::Letter(Letter::Y) => self.y_val.clone(),
            Kind::Concat(parts) => {
                let mut it = parts.iter();
                let first = it
                    .next()
                    .ok_or_else(|| TropError::Parameter("cannot evaluate the empty word".into()))?;
                let mut acc = self.eval(first)?;
                for p in it {
                    let rhs = self.eval(p)?;
                    acc = acc.mul(&rhs)?;
                }
                acc
            }
            Kind::Power(base, k) => self.eval(base)?.pow(*k)?,
        };
        self.memo.insert(e.id(), (e.clone(), out.clone()));
        Ok(out)
    }
}

/// Position (zero-based) of the first letter where two expansions differ,
/// or the shorter length when one is a proper prefix of the other.
pub fn first_difference(a: &WordExpr, b: &WordExpr) -> Option<u64> {
    let mut sa = a.expand_stream();
    let mut sb = b.expand_stream();
    let mut pos = 0u64;
    loop {
        match (sa.next(), sb.next()) {
            (None, None) => return None,
            (Some(p), Some(q)) if p == q => pos += 1,
            _ => return Some(pos),
        }
    }
}

/// Concatenation of all `2^n` words of length `n` over `{x, y}`, listed in
/// lexicographic order with `x < y`.
pub fn gamma(n: u32) -> Result<WordExpr> {
    if !(1..=MAX_GAMMA_ORDER).contains(&n) {
        return Err(TropError::Parameter(format!(
            "gamma order must be in 1..={MAX_GAMMA_ORDER}, got {n}"
        )));
    }
    let (x, y) = (WordExpr::x(), WordExpr::y());
    let words = (0u32..1 << n)
        .map(|code| {
            let letters = (0..n)
                .rev()
                .map(|bit| if code >> bit & 1 == 0 { x.clone() } else { y.clone() })
                .collect();
            WordExpr::concat(letters)
        })
        .collect();
    Ok(WordExpr::concat(words))
}

/// Builds a word from `(letter, exponent)` runs, sharing equal runs.
fn runs(blocks: &[(Letter, u64)]) -> WordExpr {
    let mut cache: HashMap<(Letter, u64), WordExpr> = HashMap::new();
    let parts = blocks
        .iter()
        .map(|&(l, k)| {
            cache
                .entry((l, k))
                .or_insert_with(|| WordExpr::letter(l).pow(k).expect("positive exponent"))
                .clone()
        })
        .collect();
    WordExpr::concat(parts)
}

/// `x^2 y^4 x^2 x^2 y^2 x^2 y^4 x^2`
pub fn u_word() -> WordExpr {
    use Letter::{X, Y};
    runs(&[(X, 2), (Y, 4), (X, 2), (X, 2), (Y, 2), (X, 2), (Y, 4), (X, 2)])
}

/// `x^2 y^4 x^2 y^2 x^2 x^2 y^4 x^2`
pub fn v_word() -> WordExpr {
    use Letter::{X, Y};
    runs(&[(X, 2), (Y, 4), (X, 2), (Y, 2), (X, 2), (X, 2), (Y, 4), (X, 2)])
}

/// `w(xx, xy) x`: the form in which an identity for factorizable matrices
/// is lifted one order up.
pub fn lift_word(w: &WordExpr) -> WordExpr {
    let (x, y) = (WordExpr::x(), WordExpr::y());
    let xx = WordExpr::concat(vec![x.clone(), x.clone()]);
    let xy = WordExpr::concat(vec![x.clone(), y]);
    WordExpr::concat(vec![w.substitute(&xx, &xy), x])
}

/// Two words of equal length claimed to agree under every substitution.
#[derive(Clone, Debug)]
pub struct IdentityInstance {
    pub lhs: WordExpr,
    pub rhs: WordExpr,
}

impl IdentityInstance {
    pub fn new(lhs: WordExpr, rhs: WordExpr) -> Result<Self> {
        if lhs.len() != rhs.len() {
            return Err(TropError::Parameter(format!(
                "identity sides have lengths {} and {}",
                lhs.len(),
                rhs.len()
            )));
        }
        Ok(IdentityInstance { lhs, rhs })
    }

    /// Zero-based position of the first differing letter; `None` if the words coincide.
    pub fn first_difference(&self) -> Option<u64> {
        first_difference(&self.lhs, &self.rhs)
    }

    /// Evaluates both sides at `(x_val, y_val)` with a shared cache.
    pub fn eval(&self, x_val: &TropMatrix, y_val: &TropMatrix) -> Result<(TropMatrix, TropMatrix)> {
        let mut ev = Evaluator::new(x_val, y_val)?;
        let l = ev.eval(&self.lhs)?;
        let r = ev.eval(&self.rhs)?;
        Ok((l, r))
    }

    pub fn holds_at(&self, x_val: &TropMatrix, y_val: &TropMatrix) -> Result<bool> {
        let (l, r) = self.eval(x_val, y_val)?;
        Ok(l == r)
    }
}

/// The pieces of the 3x3 identity, all as words in the base letters.
#[derive(Clone, Debug)]
pub struct Identity3Parts {
    /// `x^6 y^6`
    pub a_bar: WordExpr,
    /// `y^6 x^6`
    pub b_bar: WordExpr,
    /// `Γ3(a_bar^146, b_bar^146) Γ3(a_bar, b_bar)^3 a_bar Γ3(a_bar, b_bar)^3`
    pub script_a: WordExpr,
    /// same as `script_a` with the middle `a_bar` replaced by `b_bar`
    pub script_b: WordExpr,
    pub identity: IdentityInstance,
}

pub fn identity3_parts() -> Identity3Parts {
    let (x, y) = (WordExpr::x(), WordExpr::y());
    let x6 = x.pow(6).unwrap();
    let y6 = y.pow(6).unwrap();
    let a_bar = WordExpr::concat(vec![x6.clone(), y6.clone()]);
    let b_bar = WordExpr::concat(vec![y6, x6]);

    let g3 = gamma(3).unwrap();
    let head = g3.substitute(&a_bar.pow(146).unwrap(), &b_bar.pow(146).unwrap());
    let mid = g3.substitute(&a_bar, &b_bar).pow(3).unwrap();
    let script_a = WordExpr::concat(vec![head.clone(), mid.clone(), a_bar.clone(), mid.clone()]);
    let script_b = WordExpr::concat(vec![head, mid.clone(), b_bar.clone(), mid]);

    let aa = WordExpr::concat(vec![script_a.clone(), script_a.clone()]);
    let ab = WordExpr::concat(vec![script_a.clone(), script_b.clone()]);
    let lhs = WordExpr::concat(vec![u_word().substitute(&aa, &ab), script_a.clone()]);
    let rhs = WordExpr::concat(vec![v_word().substitute(&aa, &ab), script_a.clone()]);
    Identity3Parts {
        a_bar,
        b_bar,
        script_a,
        script_b,
        identity: IdentityInstance::new(lhs, rhs).expect("sides have equal length"),
    }
}

/// `U(𝒜𝒜, 𝒜ℬ)𝒜 = V(𝒜𝒜, 𝒜ℬ)𝒜`, the identity for tropical 3x3 matrices.
pub fn build_identity3() -> IdentityInstance {
    identity3_parts().identity
}

/// `Γn^n x Γn^n` versus `Γn^n y Γn^n`, which agree on diagonally
/// H-dominant pairs of order `n` once `H >= n^2 2^(n+1) + 1`.
pub fn dominant_pair_identity(n: u32) -> Result<IdentityInstance> {
    let g = gamma(n)?.pow(u64::from(n))?;
    IdentityInstance::new(
        WordExpr::concat(vec![g.clone(), WordExpr::x(), g.clone()]),
        WordExpr::concat(vec![g.clone(), WordExpr::y(), g]),
    )
}

/// `n^2 2^(n+1) + 1`, the dominance level at which [`dominant_pair_identity`] holds.
pub fn dominance_threshold(n: u32) -> u64 {
    u64::from(n * n) * (1u64 << (n + 1)) + 1
}

fn product(ms: &[TropMatrix]) -> Result<TropMatrix> {
    let (first, rest) = ms
        .split_first()
        .ok_or_else(|| TropError::Parameter("empty factor list".into()))?;
    rest.iter().try_fold(first.clone(), |acc, m| acc.mul(m))
}

/// `min_k [Π prefix][i][k] + pivot[k][k] + [Π suffix][k][j]`: the cheapest
/// path through the factor list that stays on one index across `pivot`.
pub fn pinched_min(
    prefix: &[TropMatrix],
    pivot: &TropMatrix,
    suffix: &[TropMatrix],
    i: usize,
    j: usize,
) -> Result<TropScalar> {
    let n = pivot.order("pinched_min")?;
    for m in prefix.iter().chain(suffix) {
        if m.shape() != (n, n) {
            return Err(TropError::Shape {
                op: "pinched_min",
                left_rows: n,
                left_cols: n,
                right_rows: m.rows(),
                right_cols: m.cols(),
            });
        }
    }
    if i >= n || j >= n {
        return Err(TropError::Parameter(format!("index ({i},{j}) out of range for order {n}")));
    }
    let left = product(prefix)?;
    let right = product(suffix)?;
    Ok((0..n)
        .map(|k| &(left.get(i, k) + pivot.get(k, k)) + right.get(k, j))
        .min()
        .expect("n >= 1"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_examples() {
        let g1 = gamma(1).unwrap();
        assert_eq!(g1.to_letters(), "xy");
        assert_eq!(g1.len(), 2);
        let g2 = gamma(2).unwrap();
        assert_eq!(g2.to_letters(), "xxxyyxyy");
        assert_eq!(gamma(3).unwrap().len(), 24);
        assert_eq!(
            gamma(3).unwrap().to_letters(),
            "xxxxxyxyxxyyyxxyxyyyxyyy"
        );
        assert!(gamma(0).is_err());
        assert!(gamma(9).is_err());
        assert_eq!(gamma(8).unwrap().len(), 8 * 256);
    }

    #[test]
    fn u_and_v() {
        let (u, v) = (u_word(), v_word());
        assert_eq!(u.len(), 20);
        assert_eq!(v.len(), 20);
        assert_eq!(u.to_letters(), "xxyyyyxxxxyyxxyyyyxx");
        assert_eq!(v.to_letters(), "xxyyyyxxyyxxxxyyyyxx");
        assert_eq!(u.to_letters().matches('x').count(), 10);
        // one-based position 9
        assert_eq!(first_difference(&u, &v), Some(8));
        let x = WordExpr::x();
        assert_eq!(u.substitute(&x, &x).to_letters(), "x".repeat(20));
        assert_eq!(first_difference(&u.substitute(&x, &x), &v.substitute(&x, &x)), None);
        assert_eq!(u.to_string(), "x^2 y^4 x^2 x^2 y^2 x^2 y^4 x^2");
    }

    #[test]
    fn stream_examples() {
        let p = WordExpr::x().pow(3).unwrap();
        assert_eq!(p.expand_stream().collect::<Vec<_>>(), vec![Letter::X; 3]);
        assert_eq!(WordExpr::x().pow(0).unwrap_err(), TropError::ZeroPower);
        let nested = WordExpr::concat(vec![
            WordExpr::from_letters("xy").unwrap().pow(2).unwrap(),
            WordExpr::concat(vec![]),
            WordExpr::y(),
        ])
        .pow(2)
        .unwrap();
        assert_eq!(nested.to_letters(), "xyxyyxyxyy");
        assert_eq!(nested.len(), 10);
    }

    #[test]
    fn identity3_lengths() {
        let parts = identity3_parts();
        assert_eq!(parts.a_bar.to_letters(), "xxxxxxyyyyyy");
        assert_eq!(parts.b_bar.to_letters(), "yyyyyyxxxxxx");
        assert_eq!(parts.script_a.len(), 24 * 146 * 12 + 864 + 12 + 864);
        assert_eq!(parts.script_a.len(), 43_788);
        assert_eq!(parts.script_b.len(), 43_788);
        assert_eq!(parts.identity.lhs.len(), 1_795_308);
        assert_eq!(parts.identity.rhs.len(), 1_795_308);
        // the DAG stays small
        assert!(parts.identity.lhs.node_count() < 200);
    }

    #[test]
    fn dominant_identity_lengths() {
        // 2ng + 1 with g = n 2^n
        assert_eq!(dominant_pair_identity(2).unwrap().lhs.len(), 33);
        assert_eq!(dominant_pair_identity(3).unwrap().lhs.len(), 145);
        assert_eq!(dominance_threshold(2), 33);
        assert_eq!(dominance_threshold(3), 145);
    }

    #[test]
    fn eval_basics() {
        let a = TropMatrix::from_ints(&[[0, 3], [1, 2]]);
        let b = TropMatrix::from_ints(&[[4, -1], [0, 5]]);
        assert_eq!(WordExpr::x().eval(&a, &b).unwrap(), a);
        assert_eq!(gamma(2).unwrap().eval(&a, &a).unwrap(), a.pow(8).unwrap());
        let xy = WordExpr::from_letters("xyx").unwrap();
        assert_eq!(xy.eval(&a, &b).unwrap(), a.mul(&b).unwrap().mul(&a).unwrap());
        assert!(WordExpr::concat(vec![]).eval(&a, &b).is_err());
        assert!(WordExpr::x().eval(&a, &TropMatrix::zeros(3, 3).unwrap()).is_err());
    }

    #[test]
    fn lift_word_shape() {
        let w = WordExpr::from_letters("xy").unwrap();
        assert_eq!(lift_word(&w).to_letters(), "xxxyx");
    }

    #[test]
    fn pinched_examples() {
        let s = TropMatrix::from_ints(&[[4]]);
        assert_eq!(
            pinched_min(std::slice::from_ref(&s), &s, std::slice::from_ref(&s), 0, 0).unwrap(),
            s.pow(3).unwrap().get(0, 0).clone()
        );
        let a = TropMatrix::from_ints(&[[0, 7], [8, 1]]);
        let v = pinched_min(std::slice::from_ref(&a), &a, std::slice::from_ref(&a), 0, 0).unwrap();
        assert_eq!(v, TropScalar::ZERO);
        assert_eq!(&v, a.pow(3).unwrap().get(0, 0));
        assert!(pinched_min(&[], &a, std::slice::from_ref(&a), 0, 0).is_err());
        assert!(pinched_min(std::slice::from_ref(&a), &a, std::slice::from_ref(&a), 2, 0).is_err());
    }
}
