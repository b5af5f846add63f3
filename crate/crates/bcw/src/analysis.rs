//! Structural analysis of coefficient words: nonzero support, maximum
//! gap between consecutive support exponents, and the palindromy /
//! sign-alternation flags.

use crate::engine::CoeffWord;
use crate::word::Word;

/// True when the nonzero symbols strictly alternate sign, starting (and,
/// by alternation plus symbol sum, ending) with +1. Vacuously true for a
/// word with no nonzero symbol.
pub fn alternating(word: &Word) -> bool {
    let mut expected = 1i8;
    for s in word.iter() {
        if s.is_zero() {
            continue;
        }
        if s.value() != expected {
            return false;
        }
        expected = -expected;
    }
    // an even number of nonzeros would end on -1
    expected == -1 || word.iter().all(|s| s.is_zero())
}

/// The nonzero entries as `(exponent, sign)`, exponents strictly
/// increasing.
pub fn support(w: &CoeffWord) -> Vec<(u64, i8)> {
    w.word
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_zero())
        .map(|(e, s)| (e as u64, s.value()))
        .collect()
}

/// Per-pair structural summary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub p: u64,
    pub q: u64,
    pub kind: crate::engine::Kind,
    /// Largest difference between consecutive support exponents; 0 when
    /// the support has at most one element.
    pub max_gap: u64,
    /// How many consecutive-exponent pairs attain `max_gap`.
    pub max_gap_count: u64,
    pub support_size: u64,
    pub palindromic: bool,
    pub alternating: bool,
}

impl GapReport {
    pub const CSV_HEADER: &'static str =
        "p,q,kind,max_gap,max_gap_count,support_size,palindromic,alternating";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.p,
            self.q,
            self.kind,
            self.max_gap,
            self.max_gap_count,
            self.support_size,
            self.palindromic,
            self.alternating
        )
    }

    /// Compares the measured values against the expected ones
    /// (`max_gap = p-1`, `max_gap_count = 2*floor(q/p)`, both flags set).
    /// Library callers get a description back rather than a crash; the
    /// test suite treats any `Err` as a hard failure.
    pub fn check_claims(&self) -> std::result::Result<(), String> {
        let expect_gap = self.p - 1;
        let expect_count = 2 * (self.q / self.p);
        if self.max_gap != expect_gap {
            return Err(format!(
                "pair ({}, {}) {}: max_gap = {} but p-1 = {expect_gap}",
                self.p, self.q, self.kind, self.max_gap
            ));
        }
        if self.max_gap_count != expect_count {
            return Err(format!(
                "pair ({}, {}) {}: max_gap_count = {} but 2*floor(q/p) = {expect_count}",
                self.p, self.q, self.kind, self.max_gap_count
            ));
        }
        if !self.palindromic {
            return Err(format!(
                "pair ({}, {}) {}: word is not palindromic",
                self.p, self.q, self.kind
            ));
        }
        if !self.alternating {
            return Err(format!(
                "pair ({}, {}) {}: nonzero signs do not alternate",
                self.p, self.q, self.kind
            ));
        }
        Ok(())
    }
}

pub fn gap_report(w: &CoeffWord) -> GapReport {
    let sup = support(w);
    let mut max_gap = 0u64;
    let mut max_gap_count = 0u64;
    for pair in sup.windows(2) {
        let gap = pair[1].0 - pair[0].0;
        if gap > max_gap {
            max_gap = gap;
            max_gap_count = 1;
        } else if gap == max_gap {
            max_gap_count += 1;
        }
    }
    GapReport {
        p: w.pair.p,
        q: w.pair.q,
        kind: w.pair.kind,
        max_gap,
        max_gap_count,
        support_size: sup.len() as u64,
        palindromic: w.word.is_palindrome(),
        alternating: alternating(&w.word),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{compute, CoeffWord, Kind, PairInput};
    use crate::word::Word;

    #[test]
    fn support_of_phi_15() {
        let cw = compute(3, 5, Kind::Cyclotomic).unwrap();
        assert_eq!(
            support(&cw),
            vec![(0, 1), (1, -1), (3, 1), (4, -1), (5, 1), (7, -1), (8, 1)]
        );
    }

    #[test]
    fn support_edge_cases() {
        let pair = PairInput::new(2, 3, Kind::Cyclotomic).unwrap();
        let zero = CoeffWord {
            pair: pair.clone(),
            word: Word::from_values(&[0, 0, 0]).unwrap(),
        };
        assert!(support(&zero).is_empty());
        assert_eq!(gap_report(&zero).max_gap, 0);

        let single = CoeffWord {
            pair,
            word: Word::from_values(&[1]).unwrap(),
        };
        assert_eq!(support(&single), vec![(0, 1)]);
        assert_eq!(gap_report(&single).max_gap, 0);
    }

    #[test]
    fn gap_report_known_pairs() {
        let r = gap_report(&compute(3, 5, Kind::Cyclotomic).unwrap());
        assert_eq!(r.max_gap, 2);
        assert_eq!(r.max_gap_count, 2);
        assert_eq!(r.support_size, 7);
        assert!(r.palindromic && r.alternating);
        r.check_claims().unwrap();

        let r = gap_report(&compute(2, 3, Kind::Cyclotomic).unwrap());
        assert_eq!(r.max_gap, 1);
        assert_eq!(r.max_gap_count, 2);

        let r = gap_report(&compute(4, 7, Kind::Semigroup).unwrap());
        assert_eq!(r.max_gap, 3);
        assert_eq!(r.max_gap_count, 2);
        r.check_claims().unwrap();
    }

    #[test]
    fn support_size_matches_sign_structure() {
        for pair in crate::engine::enumerate_pairs(400) {
            let cw = compute(pair.p, pair.q, pair.kind).unwrap();
            let sup = support(&cw);
            let minus = sup.iter().filter(|(_, s)| *s == -1).count();
            assert_eq!(sup.len(), 1 + 2 * minus, "pair ({}, {})", pair.p, pair.q);
            assert!(sup.len() % 2 == 1);
        }
    }

    #[test]
    fn alternating_flags() {
        assert!(alternating(&Word::from_values(&[1, -1, 0, 1, -1, 1]).unwrap()));
        assert!(!alternating(&Word::from_values(&[1, 1]).unwrap()));
        assert!(!alternating(&Word::from_values(&[-1, 1]).unwrap()));
        assert!(!alternating(&Word::from_values(&[1, -1]).unwrap())); // ends on -1
        assert!(alternating(&Word::from_values(&[0, 0]).unwrap()));
    }

    #[test]
    fn csv_row_shape() {
        let r = gap_report(&compute(3, 5, Kind::Cyclotomic).unwrap());
        assert_eq!(r.csv_row(), "3,5,cyclotomic,2,2,7,true,true");
    }
}
