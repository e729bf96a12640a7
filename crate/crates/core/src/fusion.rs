//! Exact combinatorics of the free monoid on two generators indexing the
//! irreducible classes of `A_u(Q)`: involution, fusion products, the
//! dimension function and its minimal-dimension recursion, plus a
//! brute-force verifier over all short words.
//!
//! Everything here is exact integer arithmetic; no tolerance is involved.

use std::collections::HashMap;
use std::fmt;

pub use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Letter of the two-generator alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Alpha,
    Beta,
}

impl Letter {
    /// The conjugate letter under the anti-multiplicative involution.
    pub fn bar(self) -> Letter {
        match self {
            Letter::Alpha => Letter::Beta,
            Letter::Beta => Letter::Alpha,
        }
    }
}

/// Word over the alphabet; the empty word is the neutral element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FreeWord(Vec<Letter>);

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        FreeWord(letters)
    }

    /// Parses `a`/`b` (also accepts the unicode letters).
    pub fn parse(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for ch in s.chars() {
            match ch {
                'a' | 'A' | 'α' => letters.push(Letter::Alpha),
                'b' | 'B' | 'β' => letters.push(Letter::Beta),
                _ => {
                    return Err(Error::InvalidMatrix(format!(
                        "word letters must be a/b, got {ch:?}"
                    )))
                }
            }
        }
        Ok(FreeWord(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FreeWord(v)
    }

    /// Exchanges the two letters without reversing (distinct from the
    /// involution).
    pub fn swap_letters(&self) -> FreeWord {
        FreeWord(self.0.iter().map(|l| l.bar()).collect())
    }

    /// Alternating word `αβαβ...` of the given length.
    pub fn alternating(len: usize) -> FreeWord {
        FreeWord(
            (0..len)
                .map(|i| if i % 2 == 0 { Letter::Alpha } else { Letter::Beta })
                .collect(),
        )
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                Letter::Alpha => "a",
                Letter::Beta => "b",
            })?;
        }
        Ok(())
    }
}

/// Anti-multiplicative involution: reverse and swap the letters.
pub fn involute(x: &FreeWord) -> FreeWord {
    FreeWord(x.0.iter().rev().map(|l| l.bar()).collect())
}

/// Fusion product: for every factorization `x = a·g` with `involute(g)` a
/// prefix of `y = involute(g)·b`, emit `a·b`. Each factorization
/// contributes once; the result is a multiset of words with counts.
pub fn fuse(x: &FreeWord, y: &FreeWord) -> Vec<(FreeWord, u32)> {
    let mut counts: HashMap<FreeWord, u32> = HashMap::new();
    let mut order: Vec<FreeWord> = Vec::new();
    for split in 0..=x.len() {
        let a = &x.0[..x.len() - split];
        let g = FreeWord(x.0[x.len() - split..].to_vec());
        let g_bar = involute(&g);
        if y.len() >= g_bar.len() && y.0[..g_bar.len()] == g_bar.0[..] {
            let b = &y.0[g_bar.len()..];
            let mut word = a.to_vec();
            word.extend_from_slice(b);
            let word = FreeWord(word);
            match counts.get_mut(&word) {
                Some(c) => *c += 1,
                None => {
                    counts.insert(word.clone(), 1);
                    order.push(word);
                }
            }
        }
    }
    order
        .into_iter()
        .map(|w| {
            let c = counts[&w];
            (w, c)
        })
        .collect()
}

/// Memoized dimension function for a fixed fundamental dimension `n >= 2`.
///
/// `d_e = 1`, `d_α = d_β = n`, and for `w = x·γ` the fusion formula gives
/// `d_w = n·d_x − d_{x'}` where `x'` drops the last letter of `x`, the
/// subtraction applying only when `x` ends in the conjugate of `γ`.
pub struct DimensionTable {
    n: u64,
    memo: HashMap<FreeWord, BigUint>,
}

impl DimensionTable {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadN);
        }
        let mut memo = HashMap::new();
        memo.insert(FreeWord::empty(), BigUint::from(1u32));
        Ok(DimensionTable { n, memo })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn dim(&mut self, w: &FreeWord) -> BigUint {
        if let Some(d) = self.memo.get(w) {
            return d.clone();
        }
        // compute by length induction over prefixes
        for len in 1..=w.len() {
            let prefix = FreeWord(w.0[..len].to_vec());
            if self.memo.contains_key(&prefix) {
                continue;
            }
            let last = w.0[len - 1];
            let head = FreeWord(w.0[..len - 1].to_vec());
            let d_head = self.memo[&head].clone();
            let mut d = d_head * self.n;
            if len >= 2 && w.0[len - 2] == last.bar() {
                let head2 = FreeWord(w.0[..len - 2].to_vec());
                d -= self.memo[&head2].clone();
            }
            self.memo.insert(prefix, d);
        }
        self.memo[w].clone()
    }
}

/// Convenience wrapper matching the operation name.
pub fn dim_word(x: &FreeWord, table: &mut DimensionTable) -> BigUint {
    table.dim(x)
}

/// Minimal-dimension sequence `f(0..=k_max)` with `f(0)=1`, `f(1)=n` and
/// `f(k+1) = n·f(k) − f(k−1)`.
pub fn min_dim_sequence(n: u64, k_max: usize) -> Result<Vec<BigUint>> {
    if n < 2 {
        return Err(Error::BadN);
    }
    let mut f = vec![BigUint::from(1u32)];
    if k_max >= 1 {
        f.push(BigUint::from(n));
    }
    for k in 2..=k_max {
        let next = &f[k - 1] * n - &f[k - 2];
        f.push(next);
    }
    Ok(f)
}

/// Brute-force verification report over all words up to a length bound.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionReport {
    pub formula_ok: bool,
    pub minimality_ok: bool,
    pub swap_ok: bool,
    pub counterexamples: Vec<String>,
}

fn all_words(maxlen: usize) -> Vec<FreeWord> {
    let mut words = vec![FreeWord::empty()];
    let mut frontier = vec![FreeWord::empty()];
    for _ in 0..maxlen {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for w in &frontier {
            for l in [Letter::Alpha, Letter::Beta] {
                let mut v = w.0.clone();
                v.push(l);
                next.push(FreeWord(v));
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    words
}

/// Exhaustively checks the dimension formula, the minimality of the
/// fundamental dimension, and letter-swap symmetry for all words up to
/// `maxlen`.
pub fn verify_fusion_dims(n: u64, maxlen: usize) -> Result<FusionReport> {
    if n < 2 {
        return Err(Error::BadN);
    }
    if maxlen < 1 {
        return Err(Error::InvalidMatrix("maxlen must be at least 1".into()));
    }
    let words = all_words(maxlen);
    let mut table = DimensionTable::new(n)?;
    let mut counterexamples = Vec::new();
    let mut formula_ok = true;
    let mut minimality_ok = true;
    let mut swap_ok = true;

    for x in &words {
        let dx = table.dim(x);
        if x.len() == 1 && dx != BigUint::from(n) {
            minimality_ok = false;
            counterexamples.push(format!("minimality: d_{} = {} != n", x, dx));
        }
        if x.len() >= 2 && dx <= BigUint::from(n) {
            minimality_ok = false;
            counterexamples.push(format!("minimality: d_{} = {} <= n", x, dx));
        }
        let ds = table.dim(&x.swap_letters());
        if ds != dx {
            swap_ok = false;
            counterexamples.push(format!("swap: d_{} = {} but swapped gives {}", x, dx, ds));
        }
    }
    for x in &words {
        let dx = table.dim(x);
        for y in &words {
            let dy = table.dim(y);
            let lhs = &dx * &dy;
            let mut rhs = BigUint::from(0u32);
            for (w, count) in fuse(x, y) {
                rhs += table.dim(&w) * count;
            }
            if lhs != rhs {
                formula_ok = false;
                counterexamples.push(format!(
                    "formula: d_{}*d_{} = {} but fusion sum = {}",
                    x, y, lhs, rhs
                ));
            }
        }
    }
    Ok(FusionReport { formula_ok, minimality_ok, swap_ok, counterexamples })
}
