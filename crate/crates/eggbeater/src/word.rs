//! Words in the free group on two generators `V` and `H`.
//!
//! Words are stored in reduced syllable form: a list of `(letter, exponent)`
//! pairs with nonzero exponents and no two adjacent equal letters. The text
//! form is whitespace-separated syllables like `H^2 V^3 H^-1 V`; exponent `1`
//! is omitted, and the identity prints as the empty string.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the two free generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    V,
    H,
}

impl Letter {
    pub fn other(self) -> Letter {
        match self {
            Letter::V => Letter::H,
            Letter::H => Letter::V,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::V => write!(f, "V"),
            Letter::H => write!(f, "H"),
        }
    }
}

/// A reduced word in the free group `F<V, H>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeWord {
    syllables: Vec<(Letter, i64)>,
}

impl FreeWord {
    /// The identity word.
    pub fn identity() -> Self {
        FreeWord { syllables: Vec::new() }
    }

    /// Builds a word from raw syllables, merging and dropping as needed so
    /// the result is reduced.
    pub fn from_syllables<I: IntoIterator<Item = (Letter, i64)>>(raw: I) -> Self {
        let mut out: Vec<(Letter, i64)> = Vec::new();
        for (l, e) in raw {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((last, exp)) if *last == l => {
                    *exp += e;
                    if *exp == 0 {
                        out.pop();
                    }
                }
                _ => out.push((l, e)),
            }
        }
        FreeWord { syllables: out }
    }

    /// Builds a word from single letters with signs (`+1` for the generator,
    /// `-1` for its inverse), reducing as it goes.
    pub fn from_letters<I: IntoIterator<Item = (Letter, i64)>>(letters: I) -> Self {
        Self::from_syllables(letters)
    }

    pub fn syllables(&self) -> &[(Letter, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Total letter count `sum |e_i|`.
    pub fn len(&self) -> u64 {
        self.syllables.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|&(l, e)| (l, -e))
                .collect(),
        }
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        FreeWord::from_syllables(
            self.syllables.iter().chain(other.syllables.iter()).cloned(),
        )
    }

    /// Conjugate `g w g^-1`.
    pub fn conjugate_by(&self, g: &FreeWord) -> FreeWord {
        g.concat(self).concat(&g.inverse())
    }

    /// Net exponents `(sum of V exponents, sum of H exponents)`.
    pub fn abelianization(&self) -> (i64, i64) {
        let mut v = 0;
        let mut h = 0;
        for &(l, e) in &self.syllables {
            match l {
                Letter::V => v += e,
                Letter::H => h += e,
            }
        }
        (v, h)
    }

    /// Removes matching first/last syllables until the word is cyclically
    /// reduced (first and last letters differ, or at most one syllable).
    pub fn cyclically_reduce(&self) -> FreeWord {
        let mut s = self.syllables.clone();
        loop {
            if s.len() < 2 {
                break;
            }
            let (fl, fe) = s[0];
            let (ll, le) = s[s.len() - 1];
            if fl != ll {
                break;
            }
            if fe + le == 0 {
                s.remove(s.len() - 1);
                s.remove(0);
            } else {
                // Merge the wrap-around syllable onto the front.
                let n = s.len() - 1;
                s[0].1 = fe + le;
                s.remove(n);
            }
        }
        FreeWord { syllables: s }
    }

    /// True when the cyclic reduction alternates between both generators with
    /// at least one full `(V, H)` pair, i.e. the word admits a balanced form.
    pub fn is_long(&self) -> bool {
        let c = self.cyclically_reduce();
        c.syllables.len() >= 2
    }

    /// True when the cyclic reduction is a nonzero power of one generator.
    pub fn is_power(&self) -> Option<(Letter, i64)> {
        let c = self.cyclically_reduce();
        match c.syllables.as_slice() {
            [(l, e)] => Some((*l, *e)),
            _ => None,
        }
    }

    /// Conjugacy test: words are conjugate iff their cyclic reductions are
    /// cyclic rotations of each other (as syllable lists).
    pub fn is_conjugate(&self, other: &FreeWord) -> bool {
        let a = self.cyclically_reduce();
        let b = other.cyclically_reduce();
        if a.syllables.len() != b.syllables.len() {
            return false;
        }
        if a.syllables.is_empty() {
            return true;
        }
        let n = a.syllables.len();
        (0..n).any(|s| (0..n).all(|i| a.syllables[(i + s) % n] == b.syllables[i]))
    }

    /// `eta(w) = |sum of V exponents| + |sum of H exponents|`, the l1-norm of
    /// the abelianization; zero exactly on the commutator subgroup.
    pub fn eta(&self) -> u64 {
        let (v, h) = self.abelianization();
        v.unsigned_abs() + h.unsigned_abs()
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(l, e) in &self.syllables {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{l}")?;
            } else {
                write!(f, "{l}^{e}")?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for FreeWord {
    type Err = Error;

    /// Parses the whitespace-separated syllable syntax, e.g. `H^2 V^-1 H`.
    fn from_str(s: &str) -> Result<FreeWord> {
        let mut raw = Vec::new();
        let mut pos = 0usize;
        for tok in s.split_whitespace() {
            // Track byte offset of the token for error reporting.
            pos = s[pos..].find(tok).map(|i| i + pos).unwrap_or(pos);
            let bad = |msg: &str| Error::Parse { pos, msg: msg.to_string() };
            let (head, exp) = match tok.find('^') {
                Some(i) => {
                    let e: i64 = tok[i + 1..]
                        .parse()
                        .map_err(|_| bad("expected integer exponent after '^'"))?;
                    (&tok[..i], e)
                }
                None => (tok, 1),
            };
            let letter = match head {
                "V" => Letter::V,
                "H" => Letter::H,
                _ => return Err(bad("expected generator 'V' or 'H'")),
            };
            if exp == 0 {
                return Err(bad("zero exponent not allowed"));
            }
            raw.push((letter, exp));
            pos += tok.len();
        }
        Ok(FreeWord::from_syllables(raw))
    }
}

/// A balanced form `H^{M_r} V^{N_r} ... H^{M_1} V^{N_1}` of a long word,
/// canonical within its conjugacy class. All `N_j`, `M_j` are nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BalancedWord {
    n: Vec<i64>,
    m: Vec<i64>,
}

impl BalancedWord {
    /// Number of `(V, H)` blocks.
    pub fn r(&self) -> usize {
        self.n.len()
    }

    /// `N_j` for `j = 1..=r`.
    pub fn n(&self, j: usize) -> i64 {
        self.n[j - 1]
    }

    /// `M_j` for `j = 1..=r`.
    pub fn m(&self, j: usize) -> i64 {
        self.m[j - 1]
    }

    pub fn n_slice(&self) -> &[i64] {
        &self.n
    }

    pub fn m_slice(&self) -> &[i64] {
        &self.m
    }

    /// Smallest absolute exponent `min_j min(|N_j|, |M_j|)`.
    pub fn tau(&self) -> u64 {
        self.n
            .iter()
            .chain(self.m.iter())
            .map(|e| e.unsigned_abs())
            .min()
            .expect("balanced word has r >= 1")
    }

    /// Letter count `sum |N_j| + |M_j|`.
    pub fn eta(&self) -> u64 {
        self.n
            .iter()
            .chain(self.m.iter())
            .map(|e| e.unsigned_abs())
            .sum()
    }

    /// Expands back to a reduced free word, leftmost syllable `H^{M_r}`.
    pub fn to_free_word(&self) -> FreeWord {
        let r = self.r();
        let mut raw = Vec::with_capacity(2 * r);
        for j in (1..=r).rev() {
            raw.push((Letter::H, self.m(j)));
            raw.push((Letter::V, self.n(j)));
        }
        FreeWord::from_syllables(raw)
    }
}

impl fmt::Display for BalancedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_free_word())
    }
}

/// Computes the canonical balanced form of a long word, or an error for the
/// identity / single-generator powers.
pub fn to_balanced(w: &FreeWord) -> Result<BalancedWord> {
    let c = w.cyclically_reduce();
    if c.is_identity() {
        return Err(Error::TrivialWord);
    }
    if c.syllables().len() < 2 {
        return Err(Error::NotLong);
    }
    // A cyclically reduced word with >= 2 syllables alternates V and H, so
    // the syllable count is even. Rotate so the first syllable is H.
    let mut syl = c.syllables().to_vec();
    debug_assert!(syl.len() % 2 == 0);
    if syl[0].0 == Letter::V {
        syl.rotate_left(1);
    }
    let r = syl.len() / 2;
    // Left-to-right pairs are (H^{M_{r-i}}, V^{N_{r-i}}) for i = 0..r.
    let mut n = vec![0i64; r];
    let mut m = vec![0i64; r];
    for i in 0..r {
        debug_assert_eq!(syl[2 * i].0, Letter::H);
        debug_assert_eq!(syl[2 * i + 1].0, Letter::V);
        m[r - 1 - i] = syl[2 * i].1;
        n[r - 1 - i] = syl[2 * i + 1].1;
    }
    // Canonical representative: lexicographically least rotation of the
    // (N_j, M_j) pair sequence. Every rotation is a conjugate form.
    let pairs: Vec<(i64, i64)> = n.iter().cloned().zip(m.iter().cloned()).collect();
    let best = (0..r)
        .map(|s| {
            (0..r)
                .map(|i| pairs[(i + s) % r])
                .collect::<Vec<_>>()
        })
        .min()
        .expect("r >= 1");
    Ok(BalancedWord {
        n: best.iter().map(|p| p.0).collect(),
        m: best.iter().map(|p| p.1).collect(),
    })
}

/// `(lower, upper)` bounds for the conjugation-invariant word norm: the
/// abelianization l1-norm `eta(w)` from below (each conjugate generator moves
/// the abelianization by one unit in one coordinate) and the letter count of
/// the cyclic reduction from above.
pub fn triple_norm_bounds(w: &FreeWord) -> (u64, u64) {
    (w.eta(), w.cyclically_reduce().len())
}
