//! Three independent brute-force computations of the same coefficient
//! word, used to cross-check the engine: exact polynomial division,
//! semigroup gap enumeration, and the shift-and-add construction.
//!
//! The polynomial arithmetic is generic over the coefficient scalar via
//! num-traits; `IntPoly64` and `IntPolyBig` at the crate root are the
//! concrete instantiations. Intermediate values here may leave the
//! ternary alphabet (that is the point of using integers), but every
//! final coefficient must land back in `{-1,0,+1}` or the oracle reports
//! an `AlphabetViolation`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{Signed, ToPrimitive};

use crate::engine::{base_word, CoeffWord, PairInput};
use crate::error::{Error, Result};
use crate::word::{Symbol, Word};

/// Bounds required of a polynomial coefficient scalar.
pub trait PolyScalar: Signed + Clone + PartialEq + ToPrimitive + fmt::Debug {}

impl<T: Signed + Clone + PartialEq + ToPrimitive + fmt::Debug> PolyScalar for T {}

/// Sparse exact-integer polynomial: exponent -> nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly<C> {
    coeffs: BTreeMap<u64, C>,
}

impl<C: PolyScalar> IntPoly<C> {
    pub fn zero() -> Self {
        IntPoly {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn monomial(exponent: u64, coeff: C) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exponent, coeff);
        }
        IntPoly { coeffs }
    }

    pub fn from_terms<I: IntoIterator<Item = (u64, C)>>(terms: I) -> Self {
        let mut poly = IntPoly::zero();
        for (e, c) in terms {
            poly.add_term(e, c);
        }
        poly
    }

    /// `x^n - 1`
    pub fn x_pow_minus_one(n: u64) -> Self {
        assert!(n >= 1);
        IntPoly::from_terms([(n, C::one()), (0, -C::one())])
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, exponent: u64) -> C {
        self.coeffs.get(&exponent).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &C)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    fn add_term(&mut self, exponent: u64, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.coeffs.remove(&exponent) {
            None => {
                self.coeffs.insert(exponent, coeff);
            }
            Some(old) => {
                let sum = old + coeff;
                if !sum.is_zero() {
                    self.coeffs.insert(exponent, sum);
                }
            }
        }
    }

    /// Exact quotient `self / den`; any nonzero remainder (including a
    /// leading coefficient that does not divide) is `InexactDivision`.
    /// Schoolbook long division, descending exponents, over a dense
    /// remainder buffer.
    pub fn div_exact(&self, den: &IntPoly<C>) -> Result<IntPoly<C>> {
        let deg_den = den.degree().ok_or(Error::DivisionByZero)?;
        let Some(deg_num) = self.degree() else {
            return Ok(IntPoly::zero());
        };
        if deg_num < deg_den {
            return Err(Error::InexactDivision);
        }
        let lead = den.coeff(deg_den);
        let den_terms: Vec<(usize, C)> = den
            .terms()
            .map(|(e, c)| (e as usize, c.clone()))
            .collect();
        let mut rem: Vec<C> = vec![C::zero(); deg_num as usize + 1];
        for (e, c) in self.terms() {
            rem[e as usize] = c.clone();
        }
        let mut quo: Vec<C> = vec![C::zero(); (deg_num - deg_den) as usize + 1];
        for e in (deg_den as usize..=deg_num as usize).rev() {
            let c = std::mem::replace(&mut rem[e], C::zero());
            if c.is_zero() {
                continue;
            }
            let qc = c.clone() / lead.clone();
            if qc.clone() * lead.clone() != c {
                return Err(Error::InexactDivision);
            }
            let shift = e - deg_den as usize;
            for (de, dc) in &den_terms {
                if *de == deg_den as usize {
                    continue; // the leading term was cancelled by construction
                }
                let slot = &mut rem[shift + de];
                *slot = std::mem::replace(slot, C::zero()) - qc.clone() * dc.clone();
            }
            quo[shift] = qc;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::InexactDivision);
        }
        Ok(IntPoly::from_terms(
            quo.into_iter()
                .enumerate()
                .map(|(e, c)| (e as u64, c)),
        ))
    }
}

impl<C: PolyScalar> Add for &IntPoly<C> {
    type Output = IntPoly<C>;

    fn add(self, rhs: &IntPoly<C>) -> IntPoly<C> {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl<C: PolyScalar> Sub for &IntPoly<C> {
    type Output = IntPoly<C>;

    fn sub(self, rhs: &IntPoly<C>) -> IntPoly<C> {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl<C: PolyScalar> Mul for &IntPoly<C> {
    type Output = IntPoly<C>;

    fn mul(self, rhs: &IntPoly<C>) -> IntPoly<C> {
        let mut out = IntPoly::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in rhs.terms() {
                out.add_term(ea + eb, ca.clone() * cb.clone());
            }
        }
        out
    }
}

fn validate_oracle_pair(p: u64, q: u64) -> Result<PairInput> {
    let pair = PairInput::infer(p, q)?;
    // oracles are desk-scale tools; refuse anything that will not fit
    if pair.output_len() > (1 << 27) {
        return Err(Error::OutputTooLarge {
            len: pair.output_len(),
            max: 1 << 27,
        });
    }
    Ok(pair)
}

fn word_from_symbol_values<I>(pair: PairInput, values: I) -> Result<CoeffWord>
where
    I: IntoIterator<Item = (u64, i64)>,
{
    let len = pair.output_len() as usize;
    let mut symbols = vec![Symbol::Zero; len];
    for (exponent, value) in values {
        if exponent as usize >= len {
            return Err(Error::Invariant(format!(
                "oracle produced exponent {exponent} beyond degree {}",
                len - 1
            )));
        }
        let s = i8::try_from(value)
            .ok()
            .and_then(|v| Symbol::from_value(v).ok())
            .ok_or(Error::AlphabetViolation { exponent, value })?;
        symbols[exponent as usize] = s;
    }
    Ok(CoeffWord {
        pair,
        word: Word::from_symbols(symbols),
    })
}

/// Division oracle: `(x^{pq} - 1)(x - 1) / ((x^p - 1)(x^q - 1))`, exact
/// over the integers.
pub fn oracle_division<C: PolyScalar>(p: u64, q: u64) -> Result<CoeffWord> {
    let pair = validate_oracle_pair(p, q)?;
    let num = &IntPoly::<C>::x_pow_minus_one(p * q) * &IntPoly::x_pow_minus_one(1);
    let den = &IntPoly::<C>::x_pow_minus_one(p) * &IntPoly::x_pow_minus_one(q);
    let quo = num.div_exact(&den)?;
    word_from_symbol_values(
        pair,
        quo.terms()
            .map(|(e, c)| (e, c.to_i64().unwrap_or(i64::MAX)))
            .collect::<Vec<_>>(),
    )
}

/// The gaps of `S(p,q) = {ap + bq}`: every positive integer below the
/// Frobenius bound that is not a member. Membership per residue class
/// mod `p` via the smallest member `b*q` in each class.
pub fn semigroup_gaps(p: u64, q: u64) -> Vec<u64> {
    let mut smallest = vec![u64::MAX; p as usize];
    for b in 0..p {
        let m = b * q;
        let class = (m % p) as usize;
        if m < smallest[class] {
            smallest[class] = m;
        }
    }
    let frobenius = p * q - p - q;
    (1..=frobenius)
        .filter(|&n| n < smallest[(n % p) as usize])
        .collect()
}

/// Semigroup oracle: `F_{p,q} = 1 + (x - 1) * sum over gaps of x^s`,
/// expanded into a dense word.
pub fn oracle_semigroup(p: u64, q: u64) -> Result<CoeffWord> {
    let pair = validate_oracle_pair(p, q)?;
    let gaps = semigroup_gaps(p, q);
    // two-generator genus
    assert_eq!(
        gaps.len() as u64 * 2,
        (p - 1) * (q - 1),
        "gap count for ({p}, {q}) is not (p-1)(q-1)/2"
    );
    let len = pair.output_len() as usize;
    let mut acc = vec![0i64; len];
    acc[0] += 1;
    for g in gaps {
        acc[g as usize + 1] += 1;
        acc[g as usize] -= 1;
    }
    word_from_symbol_values(
        pair,
        acc.into_iter()
            .enumerate()
            .filter(|(_, v)| *v != 0)
            .map(|(e, v)| (e as u64, v))
            .collect::<Vec<_>>(),
    )
}

/// Shift-and-add oracle: sums the `p-1` copies of
/// `c = (1 (-1) 0...0)^{(m+1)/p}` shifted by `iq`, with unbounded integer
/// accumulation and overflow past index `m` dropped.
pub fn oracle_shift_add(p: u64, q: u64) -> Result<CoeffWord> {
    let pair = validate_oracle_pair(p, q)?;
    let len = pair.output_len() as usize;
    let c = base_word(p).fractional_power(len)?;
    let cv: Vec<i32> = c.iter().map(|s| s.value() as i32).collect();
    let mut acc = vec![0i32; len];
    for i in 0..p - 1 {
        let offset = (i * q) as usize;
        if offset >= len {
            break;
        }
        for (slot, &v) in acc[offset..].iter_mut().zip(&cv) {
            *slot += v;
        }
    }
    word_from_symbol_values(
        pair,
        acc.into_iter()
            .enumerate()
            .filter(|(_, v)| *v != 0)
            .map(|(e, v)| (e as u64, v as i64))
            .collect::<Vec<_>>(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::IntPoly64;

    fn poly(terms: &[(u64, i64)]) -> IntPoly64 {
        IntPoly::from_terms(terms.iter().copied())
    }

    fn word(values: &[i8]) -> Word {
        Word::from_values(values).unwrap()
    }

    #[test]
    fn mul_basic() {
        let x_minus_1 = poly(&[(1, 1), (0, -1)]);
        let x_plus_1 = poly(&[(1, 1), (0, 1)]);
        assert_eq!(&x_minus_1 * &x_plus_1, poly(&[(2, 1), (0, -1)]));
        assert_eq!(&IntPoly64::zero() * &poly(&[(3, 1), (0, 1)]), IntPoly::zero());
        let geo = poly(&[(2, 1), (1, 1), (0, 1)]);
        assert_eq!(&geo * &x_minus_1, poly(&[(3, 1), (0, -1)]));
    }

    #[test]
    fn div_exact_basic() {
        let num = poly(&[(2, 1), (0, -1)]);
        let den = poly(&[(1, 1), (0, -1)]);
        assert_eq!(num.div_exact(&den).unwrap(), poly(&[(1, 1), (0, 1)]));

        // (x^6-1)(x-1)/((x^2-1)(x^3-1)) = Phi_6 = x^2 - x + 1
        let num = &IntPoly64::x_pow_minus_one(6) * &IntPoly::x_pow_minus_one(1);
        let den = &IntPoly64::x_pow_minus_one(2) * &IntPoly::x_pow_minus_one(3);
        assert_eq!(
            num.div_exact(&den).unwrap(),
            poly(&[(2, 1), (1, -1), (0, 1)])
        );

        let num = IntPoly64::x_pow_minus_one(4);
        let den = poly(&[(3, 1), (0, 1)]);
        assert_eq!(num.div_exact(&den), Err(Error::InexactDivision));

        assert_eq!(
            poly(&[(1, 1)]).div_exact(&IntPoly::zero()),
            Err(Error::DivisionByZero)
        );
        assert_eq!(
            IntPoly64::zero().div_exact(&den).unwrap(),
            IntPoly::zero()
        );
    }

    #[test]
    fn division_oracle_known_words() {
        let cw = oracle_division::<i64>(3, 5).unwrap();
        assert_eq!(cw.word, word(&[1, -1, 0, 1, -1, 1, 0, -1, 1]));
        let cw = oracle_division::<i64>(2, 3).unwrap();
        assert_eq!(cw.word, word(&[1, -1, 1]));
        assert!(matches!(
            oracle_division::<i64>(2, 4),
            Err(Error::InvalidPair(_))
        ));
    }

    #[test]
    fn semigroup_gap_sets() {
        assert_eq!(semigroup_gaps(4, 7), vec![1, 2, 3, 5, 6, 9, 10, 13, 17]);
        assert_eq!(semigroup_gaps(2, 3), vec![1]);
        assert_eq!(semigroup_gaps(3, 5), vec![1, 2, 4, 7]);
    }

    #[test]
    fn semigroup_oracle_known_words() {
        let cw = oracle_semigroup(4, 7).unwrap();
        assert_eq!(
            cw.word,
            word(&[1, -1, 0, 0, 1, -1, 0, 1, 0, -1, 0, 1, 0, -1, 1, 0, 0, -1, 1])
        );
        assert_eq!(oracle_semigroup(2, 3).unwrap().word, word(&[1, -1, 1]));
        assert_eq!(
            oracle_semigroup(3, 5).unwrap().word,
            word(&[1, -1, 0, 1, -1, 1, 0, -1, 1])
        );
        assert!(matches!(
            oracle_semigroup(4, 6),
            Err(Error::InvalidPair(_))
        ));
    }

    #[test]
    fn shift_add_oracle_known_words() {
        assert_eq!(
            oracle_shift_add(3, 5).unwrap().word,
            word(&[1, -1, 0, 1, -1, 1, 0, -1, 1])
        );
        assert_eq!(oracle_shift_add(2, 3).unwrap().word, word(&[1, -1, 1]));
        assert_eq!(
            oracle_shift_add(2, 5).unwrap().word,
            word(&[1, -1, 1, -1, 1])
        );
    }

    #[test]
    fn three_way_agreement_small_range() {
        for pair in crate::engine::enumerate_pairs(500) {
            let d = oracle_division::<i64>(pair.p, pair.q).unwrap();
            let s = oracle_semigroup(pair.p, pair.q).unwrap();
            let a = oracle_shift_add(pair.p, pair.q).unwrap();
            assert_eq!(d.word, s.word, "pair ({}, {})", pair.p, pair.q);
            assert_eq!(d.word, a.word, "pair ({}, {})", pair.p, pair.q);
        }
    }

    #[test]
    fn bigint_route_matches_i64() {
        use num_bigint::BigInt;
        for pair in crate::engine::enumerate_pairs(300) {
            let small = oracle_division::<i64>(pair.p, pair.q).unwrap();
            let big = oracle_division::<BigInt>(pair.p, pair.q).unwrap();
            assert_eq!(small.word, big.word, "pair ({}, {})", pair.p, pair.q);
        }
    }
}
