use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SchottkyGroup;
use crate::complex_geom::MoebiusMap;
use crate::{Error, Result};

/// Freely reduced word in the generators: `+k` is `g_k`, `−k` is `g_k⁻¹`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct Word(Vec<i8>);

#[inline]
pub(crate) fn letter_to_symbol(l: i8) -> u8 {
    let k = l.unsigned_abs() - 1;
    2 * k + u8::from(l < 0)
}

#[inline]
pub(crate) fn symbol_to_letter(s: u8) -> i8 {
    let k = (s / 2 + 1) as i8;
    if s & 1 == 0 {
        k
    } else {
        -k
    }
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Rejects zero letters and unreduced input.
    pub fn new(letters: Vec<i8>) -> Result<Self> {
        if letters.iter().any(|&l| l == 0 || l == i8::MIN) {
            return Err(Error::InvalidArgument("word letters must be nonzero".into()));
        }
        if letters.windows(2).any(|p| p[0] == -p[1]) {
            return Err(Error::InvalidArgument("word is not freely reduced".into()));
        }
        Ok(Word(letters))
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce(letters: impl IntoIterator<Item = i8>) -> Self {
        let mut out: Vec<i8> = Vec::new();
        for l in letters {
            assert!(l != 0 && l != i8::MIN, "invalid letter {l}");
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub(crate) fn from_symbols(symbols: &[u8]) -> Self {
        Word(symbols.iter().map(|&s| symbol_to_letter(s)).collect())
    }

    pub fn letters(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    pub fn concat(&self, other: &Word) -> Self {
        Word::reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    pub(crate) fn symbols(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().map(|&l| letter_to_symbol(l))
    }

    /// Largest generator index used.
    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Canonical enumeration order: length, then the alphabet `+1, −1, +2, −2, …`.
    pub fn canonical_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.symbols().cmp(other.symbols()))
    }
}

impl TryFrom<Vec<i8>> for Word {
    type Error = Error;
    fn try_from(v: Vec<i8>) -> Result<Self> {
        Word::new(v)
    }
}

impl From<Word> for Vec<i8> {
    fn from(w: Word) -> Self {
        w.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if *l > 0 {
                write!(f, "g{l}")?;
            } else {
                write!(f, "g{}^-1", -l)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// `1 + Σ_{n=1..N} 2g(2g−1)^{n−1}`, saturating at `u128::MAX`.
pub fn word_count(rank: usize, max_len: usize) -> u128 {
    if rank == 0 {
        return 1;
    }
    let first = 2 * rank as u128;
    let branch = first - 1;
    let mut total: u128 = 1;
    let mut shell = first;
    for n in 1..=max_len {
        if n > 1 {
            shell = match shell.checked_mul(branch) {
                Some(s) => s,
                None => return u128::MAX,
            };
        }
        total = match total.checked_add(shell) {
            Some(t) => t,
            None => return u128::MAX,
        };
    }
    total
}

/// Number of reduced words of length exactly `n`.
pub fn shell_size(rank: usize, n: usize) -> u128 {
    if n == 0 {
        1
    } else {
        word_count(rank, n) - word_count(rank, n - 1)
    }
}

impl SchottkyGroup {
    pub fn check_capacity(&self, max_len: usize) -> Result<()> {
        let needed = word_count(self.rank(), max_len);
        if needed > self.word_budget() as u128 {
            return Err(Error::CapacityExceeded { needed, budget: self.word_budget() });
        }
        Ok(())
    }

    /// Shell-by-shell enumeration of reduced words up to `max_len`.
    pub fn shells(&self, max_len: usize) -> Result<Shells<'_>> {
        self.check_capacity(max_len)?;
        Ok(Shells { group: self, max_len, current: None })
    }
}

/// All reduced words of one length in canonical order, with their matrices.
#[derive(Clone, Debug)]
pub struct Shell {
    length: usize,
    symbols: Vec<u8>,
    maps: Vec<MoebiusMap>,
}

impl Shell {
    fn root() -> Self {
        Shell { length: 0, symbols: Vec::new(), maps: vec![MoebiusMap::identity()] }
    }

    pub fn word_length(&self) -> usize {
        self.length
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[MoebiusMap] {
        &self.maps
    }

    pub fn map(&self, i: usize) -> &MoebiusMap {
        &self.maps[i]
    }

    pub fn word(&self, i: usize) -> Word {
        Word::from_symbols(self.symbols_of(i))
    }

    pub(crate) fn symbols_of(&self, i: usize) -> &[u8] {
        &self.symbols[i * self.length..(i + 1) * self.length]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Word, &MoebiusMap)> + '_ {
        (0..self.len()).map(move |i| (self.word(i), &self.maps[i]))
    }

    fn next(&self, group: &SchottkyGroup) -> Shell {
        let n = self.length;
        let alphabet = 2 * group.rank();
        let fanout = if n == 0 { alphabet } else { alphabet - 1 };
        let total = self.len() * fanout;
        let mut maps = vec![MoebiusMap::identity(); total];
        let mut symbols = vec![0u8; total * (n + 1)];
        maps.par_chunks_mut(fanout)
            .zip(symbols.par_chunks_mut(fanout * (n + 1)))
            .enumerate()
            .with_min_len(256)
            .for_each(|(i, (mchunk, schunk))| {
                let parent = self.symbols_of(i);
                let forbidden = parent.last().map(|&l| l ^ 1);
                let pm = &self.maps[i];
                let mut j = 0;
                for s in 0..alphabet as u8 {
                    if Some(s) == forbidden {
                        continue;
                    }
                    mchunk[j] = pm.compose(group.symbol_map(s));
                    let dst = &mut schunk[j * (n + 1)..(j + 1) * (n + 1)];
                    dst[..n].copy_from_slice(parent);
                    dst[n] = s;
                    j += 1;
                }
            });
        Shell { length: n + 1, symbols, maps }
    }
}

/// Iterator over shells `0..=max_len`; keeps only the latest shell alive.
pub struct Shells<'g> {
    group: &'g SchottkyGroup,
    max_len: usize,
    current: Option<Arc<Shell>>,
}

impl Iterator for Shells<'_> {
    type Item = Arc<Shell>;

    fn next(&mut self) -> Option<Arc<Shell>> {
        let next = match &self.current {
            None => Shell::root(),
            Some(s) if s.length < self.max_len => s.next(self.group),
            Some(_) => return None,
        };
        let next = Arc::new(next);
        self.current = Some(next.clone());
        Some(next)
    }
}

/// All reduced words of length `≤ max_len` with their matrices, identity
/// first, then by length and alphabet order. Words are produced lazily with
/// a stack of prefix products, so memory stays `O(max_len)`.
pub fn enumerate_words(
    group: &SchottkyGroup,
    max_len: usize,
) -> Result<WordStream<'_>> {
    group.check_capacity(max_len)?;
    Ok(WordStream { group, max_len, len: 0, symbols: Vec::new(), prefix: Vec::new(), started: false })
}

/// Sequential stream behind [`enumerate_words`].
pub struct WordStream<'g> {
    group: &'g SchottkyGroup,
    max_len: usize,
    len: usize,
    symbols: Vec<u8>,
    // prefix[i] is the matrix of symbols[..=i].
    prefix: Vec<MoebiusMap>,
    started: bool,
}

impl WordStream<'_> {
    fn alphabet(&self) -> u8 {
        2 * self.group.rank() as u8
    }

    /// Smallest symbol allowed after `prev`.
    fn first_after(prev: Option<u8>) -> u8 {
        match prev {
            Some(1) => 1,
            _ => 0,
        }
    }

    /// Next symbol after `s` that does not cancel `prev`.
    fn next_after(&self, prev: Option<u8>, s: u8) -> Option<u8> {
        let forbidden = prev.map(|p| p ^ 1);
        (s + 1..self.alphabet()).find(|&t| Some(t) != forbidden)
    }

    fn rebuild_from(&mut self, i: usize) {
        self.prefix.truncate(i);
        for j in i..self.symbols.len() {
            let m = match j {
                0 => *self.group.symbol_map(self.symbols[0]),
                _ => self.prefix[j - 1].compose(self.group.symbol_map(self.symbols[j])),
            };
            self.prefix.push(m);
        }
    }

    fn first_of_length(&mut self, n: usize) {
        self.symbols.clear();
        for _ in 0..n {
            let prev = self.symbols.last().copied();
            self.symbols.push(Self::first_after(prev));
        }
        self.rebuild_from(0);
    }

    fn advance(&mut self) -> bool {
        let n = self.symbols.len();
        for i in (0..n).rev() {
            let prev = if i == 0 { None } else { Some(self.symbols[i - 1]) };
            if let Some(t) = self.next_after(prev, self.symbols[i]) {
                self.symbols[i] = t;
                for j in i + 1..n {
                    self.symbols[j] = Self::first_after(Some(self.symbols[j - 1]));
                }
                self.rebuild_from(i);
                return true;
            }
        }
        false
    }
}

impl Iterator for WordStream<'_> {
    type Item = (Word, MoebiusMap);

    fn next(&mut self) -> Option<(Word, MoebiusMap)> {
        if !self.started {
            self.started = true;
            return Some((Word::identity(), MoebiusMap::identity()));
        }
        if self.len == 0 || !self.advance() {
            if self.len == self.max_len {
                return None;
            }
            self.len += 1;
            self.first_of_length(self.len);
        }
        Some((Word::from_symbols(&self.symbols), self.prefix[self.len - 1]))
    }
}
