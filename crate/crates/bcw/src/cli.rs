//! Command-line front end: single-pair computation, batch table mode with
//! persisted precomputation output, oracle verification, gap-analysis
//! sweeps and a scaling benchmark.
//!
//! Exit codes: 0 success, 1 invalid input, 2 verification or assertion
//! failure.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::analysis::{gap_report, GapReport};
use crate::engine::{
    assemble, compute, enumerate_pairs, precompute, CoeffWord, Kind, PairInput, TableCache,
};
use crate::formats;
use crate::oracles::{oracle_division, oracle_semigroup, oracle_shift_add};
use crate::primes::{is_prime, primes_between};

#[derive(Parser)]
#[command(name = "bcw", version, about = "Coefficient words of binary cyclotomic and \
two-generator numerical-semigroup polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads for batch modes (default: all cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    #[default]
    Cyclotomic,
    Semigroup,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Cyclotomic => Kind::Cyclotomic,
            KindArg::Semigroup => Kind::Semigroup,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    #[default]
    Dense,
    Sparse,
    Compact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableMode {
    /// One residue class: precompute a single table and reuse it
    FixedR,
    /// An explicit list of q values
    List,
    /// Every prime q up to --q-max
    AllPrimes,
}

#[derive(Subcommand)]
pub enum Command {
    /// Compute the coefficient word of one pair (p, q)
    Compute {
        p: u64,
        q: u64,
        #[arg(long, value_enum, default_value_t)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
        /// Write to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute a table of words sharing a fixed p0, reusing precomputation
    Table {
        #[arg(long)]
        p0: u64,
        #[arg(long, value_enum)]
        mode: TableMode,
        /// Residue class for --mode fixed-r
        #[arg(long)]
        r: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        q_list: Vec<u64>,
        #[arg(long)]
        q_max: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        kind: KindArg,
        /// Output directory for word files and {p}_{r}.tbl table files
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the engine against all three oracles
    Verify {
        /// Sweep every valid pair with p*q up to this bound (default 5000)
        #[arg(long)]
        max_pq: Option<u64>,
        /// Check a single pair instead
        #[arg(long, num_args = 2, value_names = ["P", "Q"])]
        pair: Option<Vec<u64>>,
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
    /// Time precompute/assemble over a grid and report scaling
    Bench {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',')]
        q_list: Vec<u64>,
        #[arg(long, value_enum, default_value_t)]
        kind: KindArg,
        /// Also time the division oracle (skipped when p*q > --oracle-cutoff)
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 1_000_000)]
        oracle_cutoff: u64,
        /// Timing repetitions per point; the median is reported
        #[arg(long, default_value_t = 3)]
        repeats: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gap/sign analysis as CSV rows
    Gaps {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        q_max: Option<u64>,
        #[arg(long, num_args = 2, value_names = ["P", "Q"])]
        pair: Option<Vec<u64>>,
        #[arg(long, value_enum, default_value_t)]
        kind: KindArg,
        /// Fail (exit 2) on the first pair violating the expected
        /// max_gap = p-1 or max_gap_count = 2*floor(q/p)
        #[arg(long = "assert")]
        assert_claims: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// How a command failed, mapped onto the exit codes.
enum Failure {
    /// exit 1
    Invalid(String),
    /// exit 2
    Check(String),
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

pub fn run(cli: Cli) -> i32 {
    let result = match cli.jobs {
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command)),
            Err(e) => Err(Failure::Invalid(format!("cannot build thread pool: {e}"))),
        },
        None => dispatch(cli.command),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Check(msg)) => {
            eprintln!("FAIL: {msg}");
            2
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Compute {
            p,
            q,
            kind,
            format,
            out,
        } => cmd_compute(p, q, kind.into(), format, out),
        Command::Table {
            p0,
            mode,
            r,
            q_list,
            q_max,
            kind,
            out,
        } => cmd_table(p0, mode, r, q_list, q_max, kind.into(), out),
        Command::Verify { max_pq, pair, kind } => cmd_verify(max_pq, pair, kind),
        Command::Bench {
            p,
            q_list,
            kind,
            oracle,
            oracle_cutoff,
            repeats,
            out,
        } => cmd_bench(p, q_list, kind.into(), oracle, oracle_cutoff, repeats, out),
        Command::Gaps {
            p,
            q_max,
            pair,
            kind,
            assert_claims,
            out,
        } => cmd_gaps(p, q_max, pair, kind.into(), assert_claims, out),
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_compute(
    p: u64,
    q: u64,
    kind: Kind,
    format: FormatArg,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let pair = PairInput::new(p, q, kind)?;
    let table = precompute(pair.p, pair.r)?;
    let text = match format {
        FormatArg::Dense => formats::dense_string(&assemble(&pair, &table)?),
        FormatArg::Sparse => formats::sparse_string(&assemble(&pair, &table)?),
        FormatArg::Compact => formats::compact_string(&pair, &table),
    };
    write_output(&out, &text)
}

fn cmd_table(
    p0: u64,
    mode: TableMode,
    r: Option<u64>,
    q_list: Vec<u64>,
    q_max: Option<u64>,
    kind: Kind,
    out: PathBuf,
) -> Result<(), Failure> {
    if !is_prime(p0) {
        return Err(Failure::Invalid(format!("p0 = {p0} is not prime")));
    }
    let qs: Vec<u64> = match mode {
        TableMode::FixedR => {
            let r = r.ok_or_else(|| Failure::Invalid("--mode fixed-r needs --r".into()))?;
            if r == 0 || r >= p0 {
                return Err(Failure::Invalid(format!("r = {r} out of range for p0 = {p0}")));
            }
            if !q_list.is_empty() {
                q_list
            } else {
                let q_max = q_max
                    .ok_or_else(|| Failure::Invalid("fixed-r needs --q-list or --q-max".into()))?;
                primes_between(p0, q_max)
                    .into_iter()
                    .filter(|q| q % p0 == r)
                    .collect()
            }
        }
        TableMode::List => {
            if q_list.is_empty() {
                return Err(Failure::Invalid("--mode list needs --q-list".into()));
            }
            q_list
        }
        TableMode::AllPrimes => {
            let q_max =
                q_max.ok_or_else(|| Failure::Invalid("--mode all-primes needs --q-max".into()))?;
            primes_between(p0, q_max)
        }
    };
    fs::create_dir_all(&out)
        .map_err(|e| Failure::Invalid(format!("cannot create {}: {e}", out.display())))?;

    let cache = TableCache::new(p0);
    let mut ok = 0usize;
    let mut failed = 0usize;
    let mut precompute_ns = 0u128;
    let mut assemble_ns = 0u128;
    for &q in &qs {
        let result = (|| -> crate::Result<CoeffWord> {
            let pair = PairInput::new(p0, q, kind)?;
            if mode == TableMode::FixedR {
                let r = r.unwrap();
                if pair.r != r {
                    return Err(crate::Error::InvalidPair(format!(
                        "q = {q} is {} mod {p0}, expected {r}",
                        pair.r
                    )));
                }
            }
            let t0 = Instant::now();
            let table = cache.get(pair.r)?;
            let t1 = Instant::now();
            let word = assemble(&pair, &table)?;
            precompute_ns += (t1 - t0).as_nanos();
            assemble_ns += t1.elapsed().as_nanos();
            Ok(word)
        })();
        match result {
            Ok(word) => {
                let prefix = match kind {
                    Kind::Cyclotomic => "phi",
                    Kind::Semigroup => "f",
                };
                let path = out.join(format!("{prefix}_{p0}_{q}.txt"));
                fs::write(&path, formats::dense_string(&word)).map_err(|e| {
                    Failure::Invalid(format!("cannot write {}: {e}", path.display()))
                })?;
                ok += 1;
            }
            Err(e) => {
                eprintln!("pair ({p0}, {q}): {e}");
                failed += 1;
            }
        }
    }
    for (r, table) in cache.tables() {
        let path = out.join(format!("{p0}_{r}.tbl"));
        fs::write(&path, formats::table_string(&table))
            .map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    let total_ns = precompute_ns + assemble_ns;
    let pct = if total_ns > 0 {
        100.0 * precompute_ns as f64 / total_ns as f64
    } else {
        0.0
    };
    println!(
        "table: {ok} pair(s) computed, {failed} failed, {} precomputation(s); \
         precompute {precompute_ns} ns ({pct:.2}% of compute time), assemble {assemble_ns} ns",
        cache.precompute_calls()
    );
    Ok(())
}

/// Full check of one pair: engine output satisfies the word invariants and
/// matches all three oracles symbol for symbol.
pub fn verify_pair(pair: &PairInput) -> Result<(), String> {
    let label = format!("pair ({}, {}) {}", pair.p, pair.q, pair.kind);
    let cw = compute(pair.p, pair.q, pair.kind).map_err(|e| format!("{label}: {e}"))?;
    cw.check_invariants().map_err(|e| e.to_string())?;
    let oracles: [(&str, crate::Result<CoeffWord>); 3] = [
        ("division", oracle_division::<i64>(pair.p, pair.q)),
        ("semigroup", oracle_semigroup(pair.p, pair.q)),
        ("shift-add", oracle_shift_add(pair.p, pair.q)),
    ];
    for (name, result) in oracles {
        let oracle = result.map_err(|e| format!("{label}: {name} oracle: {e}"))?;
        if oracle.word != cw.word {
            let index = (0..cw.word.len())
                .find(|&i| cw.word[i] != oracle.word[i])
                .unwrap_or(cw.word.len());
            return Err(format!(
                "{label}: diverges from {name} oracle at index {index} \
                 (engine {}, oracle {})",
                cw.word[index.min(cw.word.len() - 1)],
                oracle.word[index.min(oracle.word.len() - 1)]
            ));
        }
    }
    Ok(())
}

fn cmd_verify(
    max_pq: Option<u64>,
    pair: Option<Vec<u64>>,
    kind: Option<KindArg>,
) -> Result<(), Failure> {
    let pairs: Vec<PairInput> = match pair {
        Some(pq) => {
            let (p, q) = (pq[0], pq[1]);
            let pair = match kind {
                Some(k) => PairInput::new(p, q, k.into())?,
                None => PairInput::infer(p, q)?,
            };
            vec![pair]
        }
        None => enumerate_pairs(max_pq.unwrap_or(5000)),
    };
    let failures: Vec<String> = pairs
        .par_iter()
        .filter_map(|pr| verify_pair(pr).err())
        .collect();
    if let Some(first) = failures.first() {
        return Err(Failure::Check(first.clone()));
    }
    println!("OK: {} pair(s) verified", pairs.len());
    Ok(())
}

struct BenchRecord {
    p: u64,
    q: u64,
    output_len: u64,
    precompute_ns: u64,
    assemble_ns: u64,
    oracle_ns: Option<u64>,
}

fn median(mut samples: Vec<u64>) -> u64 {
    samples.sort_unstable();
    samples[samples.len() / 2]
}

fn cmd_bench(
    p: u64,
    q_list: Vec<u64>,
    kind: Kind,
    oracle: bool,
    oracle_cutoff: u64,
    repeats: u32,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let repeats = repeats.max(3);
    let mut records = Vec::new();
    for &q in &q_list {
        let pair = PairInput::new(p, q, kind)?;
        let precompute_ns = median(
            (0..repeats)
                .map(|_| {
                    let t = Instant::now();
                    let _ = precompute(pair.p, pair.r);
                    t.elapsed().as_nanos() as u64
                })
                .collect(),
        );
        let table = precompute(pair.p, pair.r)?;
        let assemble_ns = median(
            (0..repeats)
                .map(|_| {
                    let t = Instant::now();
                    let _ = assemble(&pair, &table);
                    t.elapsed().as_nanos() as u64
                })
                .collect(),
        );
        let oracle_ns = if oracle && p * q <= oracle_cutoff {
            let t = Instant::now();
            oracle_division::<i64>(p, q)?;
            Some(t.elapsed().as_nanos() as u64)
        } else {
            None
        };
        records.push(BenchRecord {
            p,
            q,
            output_len: pair.output_len(),
            precompute_ns,
            assemble_ns,
            oracle_ns,
        });
    }

    let mut csv = String::from("p,q,output_len,precompute_ns,assemble_ns,oracle_ns\n");
    for r in &records {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.p,
            r.q,
            r.output_len,
            r.precompute_ns,
            r.assemble_ns,
            r.oracle_ns.map_or(String::new(), |n| n.to_string())
        ));
    }
    write_output(&out, &csv)?;

    if records.is_empty() {
        println!("summary: no data");
        return Ok(());
    }
    let per_symbol: Vec<f64> = records
        .iter()
        .map(|r| r.assemble_ns as f64 / r.output_len as f64)
        .collect();
    let min = per_symbol.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = per_symbol.iter().cloned().fold(0.0f64, f64::max);
    // least-squares fit of assemble time through the origin
    let num: f64 = records
        .iter()
        .map(|r| r.assemble_ns as f64 * r.output_len as f64)
        .sum();
    let den: f64 = records
        .iter()
        .map(|r| (r.output_len as f64).powi(2))
        .sum();
    println!(
        "summary: {} point(s); fit {:.3} ns/symbol; time-per-symbol min {min:.3} \
         max {max:.3} ratio {:.3}",
        records.len(),
        num / den,
        max / min.max(f64::MIN_POSITIVE)
    );
    Ok(())
}

fn cmd_gaps(
    p: Option<u64>,
    q_max: Option<u64>,
    pair: Option<Vec<u64>>,
    kind: Kind,
    assert_claims: bool,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let pairs: Vec<PairInput> = match pair {
        Some(pq) => vec![PairInput::new(pq[0], pq[1], kind)?],
        None => {
            let p = p.ok_or_else(|| Failure::Invalid("need --pair or --p with --q-max".into()))?;
            let q_max =
                q_max.ok_or_else(|| Failure::Invalid("need --q-max with --p".into()))?;
            let qs: Vec<u64> = match kind {
                Kind::Cyclotomic => primes_between(p, q_max),
                Kind::Semigroup => (p + 1..=q_max)
                    .filter(|&q| num_integer::gcd(p, q) == 1)
                    .collect(),
            };
            qs.into_iter()
                .map(|q| PairInput::new(p, q, kind))
                .collect::<crate::Result<Vec<_>>>()?
        }
    };
    let reports: Vec<GapReport> = pairs
        .par_iter()
        .map(|pr| compute(pr.p, pr.q, pr.kind).map(|cw| gap_report(&cw)))
        .collect::<crate::Result<Vec<_>>>()?;

    let mut csv = String::from(GapReport::CSV_HEADER);
    csv.push('\n');
    for r in &reports {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    write_output(&out, &csv)?;

    if assert_claims {
        for r in &reports {
            r.check_claims().map_err(Failure::Check)?;
        }
    }
    Ok(())
}
