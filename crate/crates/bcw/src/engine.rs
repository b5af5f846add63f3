//! The two-phase coefficient-word algorithm.
//!
//! Phase one (`precompute`) builds, for a pair `(p, r)`, the `p-1` words
//! `omega_0 .. omega_{p-2}` of length `p` together with their length-`r`
//! prefixes. Phase two (`assemble`) concatenates fractional powers of the
//! omegas into the coefficient word of `Phi_pq` (or `F_{p,q}`), constant
//! term first. The precomputation depends only on `(p, q mod p)`, so one
//! table serves every `q` in the same residue class; `TableCache` exploits
//! that for batch runs and counts how often a table actually gets built.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_integer::gcd;

use crate::analysis;
use crate::error::{Error, Result};
use crate::primes::is_prime;
use crate::word::{Symbol, Word};

/// Hard cap on the output length `(p-1)(q-1)+1`, in symbols. Anything
/// larger is refused up front instead of attempting the allocation.
pub const MAX_OUTPUT_LEN: u64 = 1 << 31;

/// Which family the coefficient word belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    /// `Phi_pq` for distinct primes `p < q`.
    Cyclotomic,
    /// `F_{p,q}` for any coprime `2 <= p < q`.
    Semigroup,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Cyclotomic => write!(f, "cyclotomic"),
            Kind::Semigroup => write!(f, "semigroup"),
        }
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cyclotomic" => Ok(Kind::Cyclotomic),
            "semigroup" => Ok(Kind::Semigroup),
            other => Err(Error::Parse(format!("unknown kind {other:?}"))),
        }
    }
}

/// A validated input pair with the derived quotient and remainder.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairInput {
    pub p: u64,
    pub q: u64,
    /// `floor(q / p)`
    pub s: u64,
    /// `q mod p`; coprimality guarantees `r >= 1`
    pub r: u64,
    pub kind: Kind,
}

impl PairInput {
    pub fn new(p: u64, q: u64, kind: Kind) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidPair(format!("p = {p} must be at least 2")));
        }
        if q <= p {
            return Err(Error::InvalidPair(format!("need p < q, got ({p}, {q})")));
        }
        if gcd(p, q) != 1 {
            return Err(Error::InvalidPair(format!(
                "gcd({p}, {q}) = {} is not 1",
                gcd(p, q)
            )));
        }
        if kind == Kind::Cyclotomic {
            if !is_prime(p) {
                return Err(Error::InvalidPair(format!("{p} is not prime")));
            }
            if !is_prime(q) {
                return Err(Error::InvalidPair(format!("{q} is not prime")));
            }
        }
        Ok(PairInput {
            p,
            q,
            s: q / p,
            r: q % p,
            kind,
        })
    }

    /// Validates coprimality and picks the kind: cyclotomic when both
    /// entries are prime, semigroup otherwise.
    pub fn infer(p: u64, q: u64) -> Result<Self> {
        let kind = if is_prime(p) && is_prime(q) {
            Kind::Cyclotomic
        } else {
            Kind::Semigroup
        };
        PairInput::new(p, q, kind)
    }

    /// `(p-1)(q-1) + 1`, the length of the coefficient word.
    pub fn output_len(&self) -> u64 {
        (self.p - 1) * (self.q - 1) + 1
    }
}

/// The word `1 (-1) 0...0` of length `p` that seeds the precomputation
/// (and, through its fractional powers, the shift-and-add oracle).
pub fn base_word(p: u64) -> Word {
    assert!(p >= 2);
    let mut symbols = vec![Symbol::Zero; p as usize];
    symbols[0] = Symbol::Plus;
    symbols[1] = Symbol::Minus;
    Word::from_symbols(symbols)
}

/// Precomputation output for one `(p, r)`: the omegas and their prefixes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecompTable {
    p: u64,
    r: u64,
    omegas: Vec<Word>,
    prefixes: Vec<Word>,
}

impl PrecompTable {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn omegas(&self) -> &[Word] {
        &self.omegas
    }

    pub fn prefixes(&self) -> &[Word] {
        &self.prefixes
    }

    /// Rebuilds a table from its omega words (the prefixes are derived).
    /// Only the shape is validated; this is the deserialization path.
    pub fn from_omegas(p: u64, r: u64, omegas: Vec<Word>) -> Result<Self> {
        check_pr(p, r)?;
        if omegas.len() as u64 != p - 1 {
            return Err(Error::Parse(format!(
                "expected {} omega words for p = {p}, got {}",
                p - 1,
                omegas.len()
            )));
        }
        for (i, w) in omegas.iter().enumerate() {
            if w.len() as u64 != p {
                return Err(Error::Parse(format!(
                    "omega {i} has length {}, expected {p}",
                    w.len()
                )));
            }
        }
        let prefixes = omegas
            .iter()
            .map(|w| w.truncate(r as usize))
            .collect::<Result<Vec<_>>>()?;
        Ok(PrecompTable {
            p,
            r,
            omegas,
            prefixes,
        })
    }
}

fn check_pr(p: u64, r: u64) -> Result<()> {
    if p < 2 {
        return Err(Error::InvalidPair(format!("p = {p} must be at least 2")));
    }
    if r == 0 || r >= p {
        return Err(Error::InvalidPair(format!(
            "r = {r} out of range for p = {p}"
        )));
    }
    if gcd(p, r) != 1 {
        return Err(Error::InvalidPair(format!(
            "gcd({p}, {r}) = {} is not 1",
            gcd(p, r)
        )));
    }
    Ok(())
}

/// Precomputation phase: `omega_0 = 1 (-1) 0...0` and
/// `omega_i = omega_{i-1} + sigma^{i r}(omega_0)`. Every addition stays
/// internal to the alphabet; an `AdditionOverflow` here is a defect.
pub fn precompute(p: u64, r: u64) -> Result<PrecompTable> {
    check_pr(p, r)?;
    let d0 = base_word(p);
    let mut omegas = Vec::with_capacity((p - 1) as usize);
    omegas.push(d0.clone());
    let mut d = d0;
    for _ in 1..p - 1 {
        d = d.rotate_left(r as usize)?;
        let next = omegas.last().unwrap().internal_add(&d)?;
        omegas.push(next);
    }
    let prefixes = omegas
        .iter()
        .map(|w| w.truncate(r as usize))
        .collect::<Result<Vec<_>>>()?;
    Ok(PrecompTable {
        p,
        r,
        omegas,
        prefixes,
    })
}

/// The total precomputation output for one `p`: a table per residue
/// `r` coprime to `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalTable {
    p: u64,
    entries: BTreeMap<u64, PrecompTable>,
}

impl TotalTable {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn entries(&self) -> &BTreeMap<u64, PrecompTable> {
        &self.entries
    }

    pub fn get(&self, r: u64) -> Option<&PrecompTable> {
        self.entries.get(&r)
    }
}

pub fn precompute_total(p: u64) -> Result<TotalTable> {
    if p < 2 {
        return Err(Error::InvalidPair(format!("p = {p} must be at least 2")));
    }
    let mut entries = BTreeMap::new();
    for r in 1..p {
        if gcd(p, r) == 1 {
            entries.insert(r, precompute(p, r)?);
        }
    }
    Ok(TotalTable { p, entries })
}

/// A coefficient word together with the pair it came from. Constant term
/// first; length `(p-1)(q-1) + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffWord {
    pub pair: PairInput,
    pub word: Word,
}

impl CoeffWord {
    /// Checks the structural invariants: length, +1 endpoints, palindromy,
    /// symbol sum 1, and strictly alternating nonzero signs.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |msg: String| {
            Err(Error::Invariant(format!(
                "pair ({}, {}) {}: {msg}",
                self.pair.p, self.pair.q, self.pair.kind
            )))
        };
        if self.word.len() as u64 != self.pair.output_len() {
            return fail(format!(
                "length {} != {}",
                self.word.len(),
                self.pair.output_len()
            ));
        }
        if self.word[0] != Symbol::Plus {
            return fail("constant term is not +1".into());
        }
        if self.word[self.word.len() - 1] != Symbol::Plus {
            return fail("leading coefficient is not +1".into());
        }
        if !self.word.is_palindrome() {
            return fail("word is not palindromic".into());
        }
        if self.word.symbol_sum() != 1 {
            return fail(format!("symbol sum {} != 1", self.word.symbol_sum()));
        }
        if !analysis::alternating(&self.word) {
            return fail("nonzero signs do not alternate starting with +1".into());
        }
        Ok(())
    }
}

fn checked_output_len(pair: &PairInput) -> Result<usize> {
    let len = pair.output_len();
    if len > MAX_OUTPUT_LEN {
        return Err(Error::OutputTooLarge {
            len,
            max: MAX_OUTPUT_LEN,
        });
    }
    Ok(len as usize)
}

/// Computation phase: concatenates, for `i = 0..p-3`, `s` copies of
/// `omega_i` followed by its length-`r` prefix (that is `omega_i^{q/p}`),
/// then `omega_{p-2}^{(q-p+2)/p}`. The final length is built directly,
/// skipping the `p-2` suffix symbols the full-block form would discard.
pub fn assemble(pair: &PairInput, table: &PrecompTable) -> Result<CoeffWord> {
    if table.p != pair.p || table.r != pair.r {
        return Err(Error::TableMismatch {
            table_p: table.p,
            table_r: table.r,
            pair_p: pair.p,
            pair_r: pair.r,
        });
    }
    let out_len = checked_output_len(pair)?;
    let p = pair.p as usize;
    let q = pair.q as usize;
    let s = pair.s as usize;
    let mut symbols = Vec::with_capacity(out_len);
    for i in 0..p - 2 {
        let omega = table.omegas[i].as_slice();
        for _ in 0..s {
            symbols.extend_from_slice(omega);
        }
        symbols.extend_from_slice(table.prefixes[i].as_slice());
    }
    let last = table.omegas[p - 2].fractional_power(q - p + 2)?;
    symbols.extend_from_slice(last.as_slice());
    // length identity (p-2)q + (q-p+2) = (p-1)(q-1)+1
    assert_eq!(symbols.len(), out_len);
    Ok(CoeffWord {
        pair: pair.clone(),
        word: Word::from_symbols(symbols),
    })
}

/// Reference form of the computation phase: builds the full word
/// `omega_0^{q/p} ... omega_{p-2}^{q/p}` of length `(p-1)q` and deletes
/// the suffix of length `p-2`. Kept as an independent route for tests;
/// `assemble` is the production path.
pub fn assemble_reference(pair: &PairInput, table: &PrecompTable) -> Result<CoeffWord> {
    if table.p != pair.p || table.r != pair.r {
        return Err(Error::TableMismatch {
            table_p: table.p,
            table_r: table.r,
            pair_p: pair.p,
            pair_r: pair.r,
        });
    }
    let out_len = checked_output_len(pair)?;
    let mut b = Word::empty();
    for omega in &table.omegas {
        b = b.concat(&omega.fractional_power(pair.q as usize)?);
    }
    assert_eq!(b.len() as u64, (pair.p - 1) * pair.q);
    let word = b.truncate(out_len)?;
    Ok(CoeffWord {
        pair: pair.clone(),
        word,
    })
}

/// Convenience wrapper: validates the pair, precomputes and assembles.
pub fn compute(p: u64, q: u64, kind: Kind) -> Result<CoeffWord> {
    let pair = PairInput::new(p, q, kind)?;
    let table = precompute(pair.p, pair.r)?;
    assemble(&pair, &table)
}

/// Enumerates every valid pair `2 <= p < q`, `gcd(p,q) = 1`,
/// `p*q <= max_pq`, with the kind inferred per pair, ordered by `(p, q)`.
pub fn enumerate_pairs(max_pq: u64) -> Vec<PairInput> {
    let mut pairs = Vec::new();
    let mut p = 2u64;
    while p * (p + 1) <= max_pq {
        for q in p + 1..=max_pq / p {
            if gcd(p, q) == 1 {
                pairs.push(PairInput::infer(p, q).expect("coprime pair is valid"));
            }
        }
        p += 1;
    }
    pairs
}

/// Lazy per-residue store of precomputation tables for one fixed `p`,
/// shared across threads. Tracks how many tables were actually built so
/// batch modes can assert they precompute once per distinct residue.
pub struct TableCache {
    p: u64,
    entries: Mutex<HashMap<u64, Arc<PrecompTable>>>,
    precompute_calls: AtomicU64,
}

impl TableCache {
    pub fn new(p: u64) -> Self {
        TableCache {
            p,
            entries: Mutex::new(HashMap::new()),
            precompute_calls: AtomicU64::new(0),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn get(&self, r: u64) -> Result<Arc<PrecompTable>> {
        let mut entries = self.entries.lock().unwrap();
        if let Some(table) = entries.get(&r) {
            return Ok(table.clone());
        }
        // Built under the lock: tables are small and the call count must
        // stay exact even under concurrent lookups.
        let table = Arc::new(precompute(self.p, r)?);
        self.precompute_calls.fetch_add(1, Ordering::Relaxed);
        entries.insert(r, table.clone());
        Ok(table)
    }

    pub fn compute(&self, q: u64, kind: Kind) -> Result<CoeffWord> {
        let pair = PairInput::new(self.p, q, kind)?;
        let table = self.get(pair.r)?;
        assemble(&pair, &table)
    }

    pub fn precompute_calls(&self) -> u64 {
        self.precompute_calls.load(Ordering::Relaxed)
    }

    /// Snapshot of the cached tables, sorted by residue.
    pub fn tables(&self) -> Vec<(u64, Arc<PrecompTable>)> {
        let entries = self.entries.lock().unwrap();
        let mut out: Vec<_> = entries.iter().map(|(&r, t)| (r, t.clone())).collect();
        out.sort_by_key(|&(r, _)| r);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(values: &[i8]) -> Word {
        Word::from_values(values).unwrap()
    }

    #[test]
    fn precompute_small_cases() {
        let t = precompute(3, 2).unwrap();
        assert_eq!(t.omegas(), &[w(&[1, -1, 0]), w(&[1, 0, -1])]);
        assert_eq!(t.prefixes(), &[w(&[1, -1]), w(&[1, 0])]);

        let t = precompute(2, 1).unwrap();
        assert_eq!(t.omegas(), &[w(&[1, -1])]);

        let t = precompute(4, 3).unwrap();
        assert_eq!(
            t.omegas(),
            &[w(&[1, -1, 0, 0]), w(&[1, 0, -1, 0]), w(&[1, 0, 0, -1])]
        );
    }

    #[test]
    fn precompute_rejects_bad_inputs() {
        assert!(matches!(precompute(4, 2), Err(Error::InvalidPair(_))));
        assert!(matches!(precompute(3, 0), Err(Error::InvalidPair(_))));
        assert!(matches!(precompute(3, 3), Err(Error::InvalidPair(_))));
        assert!(matches!(precompute(1, 1), Err(Error::InvalidPair(_))));
    }

    #[test]
    fn precompute_total_shapes() {
        let t = precompute_total(3).unwrap();
        assert_eq!(t.entries().keys().copied().collect::<Vec<_>>(), vec![1, 2]);

        let t = precompute_total(2).unwrap();
        assert_eq!(t.entries().keys().copied().collect::<Vec<_>>(), vec![1]);

        let t = precompute_total(5).unwrap();
        assert_eq!(t.entries().len(), 4);
        for table in t.entries().values() {
            assert_eq!(table.omegas().len(), 4);
            assert!(table.omegas().iter().all(|w| w.len() == 5));
        }
    }

    #[test]
    fn assemble_known_words() {
        let pair = PairInput::new(3, 5, Kind::Cyclotomic).unwrap();
        let table = precompute(3, 2).unwrap();
        let cw = assemble(&pair, &table).unwrap();
        assert_eq!(cw.word, w(&[1, -1, 0, 1, -1, 1, 0, -1, 1]));

        let cw = compute(2, 3, Kind::Cyclotomic).unwrap();
        assert_eq!(cw.word, w(&[1, -1, 1]));

        let cw = compute(4, 7, Kind::Semigroup).unwrap();
        assert_eq!(
            cw.word,
            w(&[1, -1, 0, 0, 1, -1, 0, 1, 0, -1, 0, 1, 0, -1, 1, 0, 0, -1, 1])
        );
    }

    #[test]
    fn assemble_table_mismatch() {
        let pair = PairInput::new(3, 5, Kind::Cyclotomic).unwrap();
        let table = precompute(3, 1).unwrap();
        assert!(matches!(
            assemble(&pair, &table),
            Err(Error::TableMismatch { .. })
        ));
    }

    #[test]
    fn compute_rejects_invalid_pairs() {
        assert!(matches!(
            compute(3, 4, Kind::Cyclotomic),
            Err(Error::InvalidPair(_))
        ));
        assert!(matches!(
            compute(4, 6, Kind::Semigroup),
            Err(Error::InvalidPair(_))
        ));
        assert!(matches!(
            compute(5, 3, Kind::Cyclotomic),
            Err(Error::InvalidPair(_))
        ));
    }

    #[test]
    fn compute_oversize_is_refused() {
        assert!(matches!(
            compute(65537, 1_000_003, Kind::Semigroup),
            Err(Error::OutputTooLarge { .. })
        ));
    }

    #[test]
    fn invariants_hold_on_small_pairs() {
        for (p, q, kind) in [
            (2, 3, Kind::Cyclotomic),
            (3, 5, Kind::Cyclotomic),
            (4, 7, Kind::Semigroup),
            (5, 7, Kind::Cyclotomic),
            (9, 14, Kind::Semigroup),
        ] {
            compute(p, q, kind).unwrap().check_invariants().unwrap();
        }
    }

    #[test]
    fn table_depends_only_on_residue() {
        // q = 5 and q = 11 are both 2 mod 3
        let a = precompute(3, 5 % 3).unwrap();
        let b = precompute(3, 11 % 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn reference_form_agrees() {
        for (p, q, kind) in [
            (2, 5, Kind::Cyclotomic),
            (3, 5, Kind::Cyclotomic),
            (4, 7, Kind::Semigroup),
            (7, 11, Kind::Cyclotomic),
        ] {
            let pair = PairInput::new(p, q, kind).unwrap();
            let table = precompute(pair.p, pair.r).unwrap();
            assert_eq!(
                assemble(&pair, &table).unwrap(),
                assemble_reference(&pair, &table).unwrap()
            );
        }
    }

    #[test]
    fn cache_counts_precomputes() {
        let cache = TableCache::new(5);
        cache.compute(7, Kind::Cyclotomic).unwrap();
        cache.compute(17, Kind::Cyclotomic).unwrap(); // same residue 2
        assert_eq!(cache.precompute_calls(), 1);
        cache.compute(11, Kind::Cyclotomic).unwrap(); // residue 1
        assert_eq!(cache.precompute_calls(), 2);
    }

    #[test]
    fn pair_enumeration() {
        let pairs = enumerate_pairs(15);
        let flat: Vec<(u64, u64)> = pairs.iter().map(|pr| (pr.p, pr.q)).collect();
        assert_eq!(flat, vec![(2, 3), (2, 5), (2, 7), (3, 4), (3, 5)]);
        assert_eq!(pairs[3].kind, Kind::Semigroup);
        assert_eq!(pairs[4].kind, Kind::Cyclotomic);
    }
}
