//! Plain-text serializations: the dense and sparse word encodings, the
//! compact (omega-word) form, and the table file persisting one
//! precomputation output.
//!
//! Everything is whitespace-separated decimal so outputs stay diff-able
//! and directly comparable across tools.

use crate::analysis::support;
use crate::engine::{CoeffWord, PairInput, PrecompTable};
use crate::error::{Error, Result};
use crate::word::Word;

/// Dense encoding: header line `p q len`, then all symbols on one line.
pub fn dense_string(w: &CoeffWord) -> String {
    format!("{} {} {}\n{}\n", w.pair.p, w.pair.q, w.word.len(), w.word)
}

/// Inverse of [`dense_string`]. The kind is re-inferred from the pair
/// (cyclotomic when both entries are prime), which is exact: both kinds
/// produce the same word on a prime pair.
pub fn parse_dense(text: &str) -> Result<CoeffWord> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
    let fields = parse_u64_fields(header)?;
    let [p, q, len] = fields[..] else {
        return Err(Error::Parse(format!(
            "dense header needs 3 fields, got {}",
            fields.len()
        )));
    };
    let body = lines.next().unwrap_or("");
    let word = parse_word(body)?;
    if word.len() as u64 != len {
        return Err(Error::Parse(format!(
            "header announces {len} symbols but body has {}",
            word.len()
        )));
    }
    let pair = PairInput::infer(p, q)?;
    Ok(CoeffWord { pair, word })
}

/// Sparse encoding: one `exponent sign` line per nonzero entry.
pub fn sparse_string(w: &CoeffWord) -> String {
    let mut out = String::new();
    for (e, s) in support(w) {
        out.push_str(&format!("{e} {s}\n"));
    }
    out
}

/// Compact encoding: the pair parameters, the omega words, and the
/// fractional-power formula the word expands from.
pub fn compact_string(pair: &PairInput, table: &PrecompTable) -> String {
    let mut out = format!("p={} q={} s={} r={}\n", pair.p, pair.q, pair.s, pair.r);
    for (i, omega) in table.omegas().iter().enumerate() {
        out.push_str(&format!("omega_{i} = {omega}\n"));
    }
    let p = pair.p;
    let q = pair.q;
    let mut formula = String::from("a = ");
    for i in 0..p - 2 {
        formula.push_str(&format!("omega_{i}^{{{q}/{p}}}·"));
    }
    formula.push_str(&format!("omega_{}^{{{}/{p}}}", p - 2, q - p + 2));
    out.push_str(&formula);
    out.push('\n');
    out
}

const TABLE_FORMAT_VERSION: u64 = 1;

/// Table file: header line `version p r`, then the `p-1` omega words,
/// one per line. The prefixes are derived on parse.
pub fn table_string(table: &PrecompTable) -> String {
    let mut out = format!("{TABLE_FORMAT_VERSION} {} {}\n", table.p(), table.r());
    for omega in table.omegas() {
        out.push_str(&format!("{omega}\n"));
    }
    out
}

pub fn parse_table(text: &str) -> Result<PrecompTable> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
    let fields = parse_u64_fields(header)?;
    let [version, p, r] = fields[..] else {
        return Err(Error::Parse(format!(
            "table header needs 3 fields, got {}",
            fields.len()
        )));
    };
    if version != TABLE_FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported table format version {version}"
        )));
    }
    let omegas = lines
        .filter(|l| !l.trim().is_empty())
        .map(parse_word)
        .collect::<Result<Vec<_>>>()?;
    PrecompTable::from_omegas(p, r, omegas)
}

fn parse_u64_fields(line: &str) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|f| {
            f.parse::<u64>()
                .map_err(|e| Error::Parse(format!("bad integer {f:?}: {e}")))
        })
        .collect()
}

fn parse_word(line: &str) -> Result<Word> {
    let values = line
        .split_whitespace()
        .map(|f| {
            f.parse::<i8>()
                .map_err(|e| Error::Parse(format!("bad symbol {f:?}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Word::from_values(&values)
}
