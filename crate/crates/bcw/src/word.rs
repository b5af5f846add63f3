//! The ternary alphabet `{-1, 0, +1}` and the word operations everything
//! else is built from: concatenation, fractional powers, left circular
//! permutation, truncation and checked internal addition.
//!
//! Words are immutable after construction and all operations are pure, so
//! values can be shared freely between threads.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};

/// One symbol of the alphabet `{-1, 0, +1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(i8)]
pub enum Symbol {
    Minus = -1,
    Zero = 0,
    Plus = 1,
}

impl Symbol {
    pub const fn value(self) -> i8 {
        self as i8
    }

    pub fn from_value(v: i8) -> Result<Self> {
        match v {
            -1 => Ok(Symbol::Minus),
            0 => Ok(Symbol::Zero),
            1 => Ok(Symbol::Plus),
            _ => Err(Error::InvalidSymbol(v)),
        }
    }

    pub const fn is_zero(self) -> bool {
        matches!(self, Symbol::Zero)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// A finite word over the ternary alphabet. The empty word is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    symbols: Vec<Symbol>,
}

impl Word {
    pub fn empty() -> Self {
        Word { symbols: Vec::new() }
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        Word { symbols }
    }

    /// Builds a word from raw `-1/0/1` values; anything else is rejected.
    pub fn from_values(values: &[i8]) -> Result<Self> {
        values
            .iter()
            .map(|&v| Symbol::from_value(v))
            .collect::<Result<Vec<_>>>()
            .map(Word::from_symbols)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Symbol> {
        self.symbols.iter()
    }

    /// `u . v`
    pub fn concat(&self, other: &Word) -> Word {
        let mut symbols = Vec::with_capacity(self.len() + other.len());
        symbols.extend_from_slice(&self.symbols);
        symbols.extend_from_slice(&other.symbols);
        Word { symbols }
    }

    /// The fractional power `v^{k/p}` where `p = len(v)`: `k` symbols of
    /// the periodic repetition of `v` (full copies followed by a prefix).
    ///
    /// `k = 0` yields the empty word even for an empty base; any other `k`
    /// needs a non-empty base.
    pub fn fractional_power(&self, k: usize) -> Result<Word> {
        if k == 0 {
            return Ok(Word::empty());
        }
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        let p = self.len();
        let mut symbols = Vec::with_capacity(k);
        for _ in 0..k / p {
            symbols.extend_from_slice(&self.symbols);
        }
        symbols.extend_from_slice(&self.symbols[..k % p]);
        Ok(Word { symbols })
    }

    /// `sigma^t(v)`: the left circular permutation applied `t` times. The
    /// amount is reduced mod the length first, so arbitrarily large `t`
    /// (e.g. `i*q`) works directly.
    pub fn rotate_left(&self, t: usize) -> Result<Word> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        let t = t % self.len();
        let mut symbols = Vec::with_capacity(self.len());
        symbols.extend_from_slice(&self.symbols[t..]);
        symbols.extend_from_slice(&self.symbols[..t]);
        Ok(Word { symbols })
    }

    /// Componentwise sum of two equal-length words. The sum must stay in
    /// the alphabet; a component of +-2 is reported as `AdditionOverflow`
    /// rather than clamped, since for valid engine inputs it cannot occur.
    pub fn internal_add(&self, other: &Word) -> Result<Word> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        let mut symbols = Vec::with_capacity(self.len());
        for (index, (a, b)) in self.iter().zip(other.iter()).enumerate() {
            let sum = a.value() + b.value();
            let s = Symbol::from_value(sum)
                .map_err(|_| Error::AdditionOverflow { index, sum })?;
            symbols.push(s);
        }
        Ok(Word { symbols })
    }

    /// The prefix of length `k`.
    pub fn truncate(&self, k: usize) -> Result<Word> {
        if k > self.len() {
            return Err(Error::TruncateOutOfRange {
                len: self.len(),
                want: k,
            });
        }
        Ok(Word {
            symbols: self.symbols[..k].to_vec(),
        })
    }

    pub fn symbol_sum(&self) -> i64 {
        self.iter().map(|s| s.value() as i64).sum()
    }

    pub fn is_palindrome(&self) -> bool {
        let n = self.len();
        (0..n / 2).all(|i| self.symbols[i] == self.symbols[n - 1 - i])
    }
}

impl Index<usize> for Word {
    type Output = Symbol;

    fn index(&self, i: usize) -> &Symbol {
        &self.symbols[i]
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}
