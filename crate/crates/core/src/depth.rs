//! A fully specified toy prefix machine and exhaustive program
//! enumeration: canonical programs, description length, s-incompressibility
//! and logical-depth brackets for bit strings, plus the canonical bit
//! encoding of exact state vectors.
//!
//! # Program format
//!
//! A program is a bit string read left to right: a 2-bit opcode followed
//! by Elias-gamma-coded fields (a positive integer `N` is written as
//! `floor(log2 N)` zeros, then `N` in binary).
//!
//! * `00  LIT(len, w)` — output the `len` raw bits `w`; payload cost `len`.
//! * `01  REP(count, len, w)` — output `w` repeated `count` times;
//!   payload cost `count * len`.
//! * `10  CA(rule: 8 raw bits, gens, len, w)` — run the elementary
//!   cellular automaton `rule` (new cell = bit `4L + 2S + R` of the rule
//!   byte) on a cyclic tape of `len` cells seeded with `w` for `gens`
//!   synchronous generations; output the final tape; payload cost
//!   `gens * len`.
//! * `11` — diverges.
//!
//! Total steps are the payload cost plus one step per decoded program
//! bit. Any bits after a complete program, or a program that runs out of
//! bits mid-field, mean the input does not halt; together these make the
//! halting set prefix-free by construction.
//!
//! The machine is not universal, so every depth figure it produces is a
//! toy-machine quantity; brackets are exact only relative to the
//! enumeration budgets `(L_max, T_max)` recorded inside them.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub const CACHE_FORMAT_VERSION: u32 = 1;
pub const MAX_PROGRAM_LEN: u32 = 26;

/// A program: up to 32 bits, most significant bit first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitStr {
    pub len: u8,
    pub bits: u32,
}

impl BitStr {
    pub fn new(len: u8, bits: u32) -> Self {
        debug_assert!(len <= 32);
        let mask = if len == 32 { u32::MAX } else { (1u32 << len) - 1 };
        BitStr { len, bits: bits & mask }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        assert!(bits.len() <= 32);
        let mut v = 0u32;
        for &b in bits {
            v = (v << 1) | (b & 1) as u32;
        }
        BitStr { len: bits.len() as u8, bits: v }
    }

    pub fn bit(&self, i: usize) -> u8 {
        ((self.bits >> (self.len as usize - 1 - i)) & 1) as u8
    }

    pub fn to_bit_vec(&self) -> Vec<u8> {
        (0..self.len as usize).map(|i| self.bit(i)).collect()
    }

    /// Is `self` a proper prefix of `other`?
    pub fn is_proper_prefix_of(&self, other: &BitStr) -> bool {
        if self.len >= other.len {
            return false;
        }
        let shift = (other.len - self.len) as u32;
        (other.bits >> shift) == self.bits
    }
}

impl fmt::Display for BitStr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len as usize {
            write!(f, "{}", self.bit(i))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Halted,
    BudgetExceeded,
    DivergesByConstruction,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub status: RunStatus,
    /// Output bits (empty unless halted).
    pub output: Vec<u8>,
    pub steps: u64,
}

struct BitCursor<'a> {
    prog: &'a BitStr,
    pos: usize,
}

impl<'a> BitCursor<'a> {
    fn new(prog: &'a BitStr) -> Self {
        BitCursor { prog, pos: 0 }
    }

    fn take(&mut self) -> Option<u8> {
        if self.pos < self.prog.len as usize {
            let b = self.prog.bit(self.pos);
            self.pos += 1;
            Some(b)
        } else {
            None
        }
    }

    fn take_raw(&mut self, n: usize) -> Option<u64> {
        let mut v = 0u64;
        for _ in 0..n {
            v = (v << 1) | self.take()? as u64;
        }
        Some(v)
    }

    /// Elias-gamma decode of a positive integer.
    fn take_gamma(&mut self) -> Option<u64> {
        let mut zeros = 0usize;
        while self.take()? == 0 {
            zeros += 1;
            if zeros > 40 {
                return None;
            }
        }
        let rest = self.take_raw(zeros)?;
        Some((1u64 << zeros) | rest)
    }

    fn exhausted(&self) -> bool {
        self.pos == self.prog.len as usize
    }
}

/// Gamma code length of `n >= 1`: `2 floor(log2 n) + 1`.
pub fn gamma_len(n: u64) -> u32 {
    debug_assert!(n >= 1);
    2 * (63 - n.leading_zeros()) + 1
}

fn diverges(steps: u64) -> RunResult {
    RunResult { status: RunStatus::DivergesByConstruction, output: Vec::new(), steps }
}

/// One synchronous step of the elementary automaton on a cyclic tape.
fn eca_step(rule: u8, tape: &mut Vec<u8>, scratch: &mut Vec<u8>) {
    let n = tape.len();
    scratch.clear();
    scratch.extend((0..n).map(|i| {
        let l = tape[(i + n - 1) % n];
        let s = tape[i];
        let r = tape[(i + 1) % n];
        (rule >> (4 * l + 2 * s + r)) & 1
    }));
    std::mem::swap(tape, scratch);
}

/// Deterministic execution of a program under a step budget. Every input
/// produces a `RunResult`.
pub fn run(program: &BitStr, t_max: u64) -> RunResult {
    let mut cur = BitCursor::new(program);
    let opcode = match cur.take_raw(2) {
        Some(v) => v,
        None => return diverges(0),
    };
    match opcode {
        0b00 => {
            let len = match cur.take_gamma() {
                Some(v) => v,
                None => return diverges(0),
            };
            let w = match (0..len).map(|_| cur.take()).collect::<Option<Vec<u8>>>() {
                Some(v) => v,
                None => return diverges(0),
            };
            if !cur.exhausted() {
                return diverges(0);
            }
            let steps = program.len as u64 + len;
            if steps > t_max {
                return RunResult { status: RunStatus::BudgetExceeded, output: Vec::new(), steps };
            }
            RunResult { status: RunStatus::Halted, output: w, steps }
        }
        0b01 => {
            let count = match cur.take_gamma() {
                Some(v) => v,
                None => return diverges(0),
            };
            let len = match cur.take_gamma() {
                Some(v) => v,
                None => return diverges(0),
            };
            let w = match (0..len).map(|_| cur.take()).collect::<Option<Vec<u8>>>() {
                Some(v) => v,
                None => return diverges(0),
            };
            if !cur.exhausted() {
                return diverges(0);
            }
            let payload = (count as u128) * (len as u128);
            let steps_big = program.len as u128 + payload;
            if steps_big > t_max as u128 {
                return RunResult {
                    status: RunStatus::BudgetExceeded,
                    output: Vec::new(),
                    steps: steps_big.min(u64::MAX as u128) as u64,
                };
            }
            let mut out = Vec::with_capacity(payload as usize);
            for _ in 0..count {
                out.extend_from_slice(&w);
            }
            RunResult { status: RunStatus::Halted, output: out, steps: steps_big as u64 }
        }
        0b10 => {
            let rule = match cur.take_raw(8) {
                Some(v) => v as u8,
                None => return diverges(0),
            };
            let gens = match cur.take_gamma() {
                Some(v) => v,
                None => return diverges(0),
            };
            let len = match cur.take_gamma() {
                Some(v) => v,
                None => return diverges(0),
            };
            let w = match (0..len).map(|_| cur.take()).collect::<Option<Vec<u8>>>() {
                Some(v) => v,
                None => return diverges(0),
            };
            if !cur.exhausted() {
                return diverges(0);
            }
            let payload = (gens as u128) * (len as u128);
            let steps_big = program.len as u128 + payload;
            if steps_big > t_max as u128 {
                return RunResult {
                    status: RunStatus::BudgetExceeded,
                    output: Vec::new(),
                    steps: steps_big.min(u64::MAX as u128) as u64,
                };
            }
            let mut tape = w;
            let mut scratch = Vec::with_capacity(tape.len());
            for _ in 0..gens {
                eca_step(rule, &mut tape, &mut scratch);
            }
            RunResult { status: RunStatus::Halted, output: tape, steps: steps_big as u64 }
        }
        _ => diverges(0), // opcode 11 diverges by definition
    }
}

/// Length of the always-available literal program for an output of `n`
/// bits (`n >= 1`).
pub fn literal_program_len(n: usize) -> u32 {
    2 + gamma_len(n as u64) + n as u32
}

#[derive(Debug, Clone)]
struct HaltEntry {
    prog: BitStr,
    steps: u64,
    output: Vec<u8>,
}

/// Exhaustive halting table for budgets `(l_max, t_max)`, with derived
/// indexes for canonical programs and depth queries. Enumeration is in
/// length-then-lexicographic order, so the first producer of an output is
/// its canonical program within budget.
pub struct DepthLab {
    l_max: u32,
    t_max: u64,
    entries: Vec<HaltEntry>,
    first_producer: HashMap<Vec<u8>, usize>,
    /// Shortest program that exceeded the step budget, if any; below this
    /// length every description-length value is exact.
    min_budget_exceeded_len: Option<u32>,
}

/// Description length of a string within budget, with exactness flag.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KBound {
    pub value: u32,
    /// False when the value is only the conservative literal-program
    /// (or budget-limited) upper bound.
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Incompressibility {
    pub incompressible: bool,
    /// True when the verdict rests on a conservative description-length
    /// bound rather than an exhaustive value.
    pub budget_conservative: bool,
}

/// Lower/upper bracket on the logical depth of a string at significance
/// `s`, relative to the budgets that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct DepthBracket {
    pub significance: u32,
    pub lower: u64,
    /// `None` means "unknown beyond budget".
    pub upper: Option<u64>,
    /// No program within budget produced the string at all; `lower` then
    /// records only that nothing halted on it within `t_max` steps.
    pub no_producer: bool,
    /// The upper value rests on a conservative incompressibility verdict.
    pub conservative_upper: bool,
    pub l_max: u32,
    pub t_max: u64,
    pub label: &'static str,
}

pub const DEPTH_LABEL: &str = "toy-machine depth (budget-relative)";

impl DepthLab {
    /// Enumerate and run every program of length `1..=l_max`.
    pub fn build(l_max: u32, t_max: u64) -> Result<Self> {
        if l_max > MAX_PROGRAM_LEN {
            return Err(Error::Budget(format!(
                "l_max {l_max} exceeds the enumeration cap {MAX_PROGRAM_LEN}"
            )));
        }
        let mut entries = Vec::new();
        let mut min_bx: Option<u32> = None;
        for len in 1..=l_max {
            for raw in 0u64..(1u64 << len) {
                let prog = BitStr::new(len as u8, raw as u32);
                let res = run(&prog, t_max);
                match res.status {
                    RunStatus::Halted => {
                        entries.push(HaltEntry { prog, steps: res.steps, output: res.output })
                    }
                    RunStatus::BudgetExceeded => {
                        min_bx = Some(min_bx.map_or(len, |m| m.min(len)));
                    }
                    RunStatus::DivergesByConstruction => {}
                }
            }
        }
        let mut first_producer = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            first_producer.entry(e.output.clone()).or_insert(i);
        }
        Ok(DepthLab { l_max, t_max, entries, first_producer, min_budget_exceeded_len: min_bx })
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    pub fn t_max(&self) -> u64 {
        self.t_max
    }

    pub fn halting_count(&self) -> usize {
        self.entries.len()
    }

    /// First (length-then-lex) halting program with the given output,
    /// together with its length.
    pub fn canonical_program(&self, x: &[u8]) -> Option<(BitStr, u32)> {
        self.first_producer.get(x).map(|&i| {
            let p = self.entries[i].prog;
            (p, p.len as u32)
        })
    }

    /// Description length of `x` within budget. Conservative fallback is
    /// the literal-program length when enumeration found no producer.
    pub fn k_of(&self, x: &[u8]) -> KBound {
        match self.canonical_program(x) {
            Some((_, k)) => {
                let exact = self.min_budget_exceeded_len.is_none_or(|m| k <= m);
                KBound { value: k, exact }
            }
            None => {
                let lit = if x.is_empty() { u32::MAX } else { literal_program_len(x.len()) };
                KBound { value: lit, exact: false }
            }
        }
    }

    /// `K(y) > |y| - s`, with conservative bounds treated as
    /// incompressible and flagged.
    pub fn is_s_incompressible(&self, y: &[u8], s: u32) -> Incompressibility {
        let k = self.k_of(y);
        let threshold = y.len() as i64 - s as i64;
        Incompressibility {
            incompressible: k.value as i64 > threshold,
            budget_conservative: !k.exact,
        }
    }

    /// Depth bracket of `x` at significance `s`.
    ///
    /// `lower` is the minimum step count over every producer found within
    /// budget; `upper` restricts to s-incompressible producers. When no
    /// producer exists the bracket degenerates to `(t_max, unknown)`.
    pub fn logical_depth(&self, x: &[u8], s: u32) -> DepthBracket {
        let mut lower: Option<u64> = None;
        let mut upper: Option<u64> = None;
        let mut upper_conservative = false;
        for e in self.entries.iter().filter(|e| e.output == x) {
            lower = Some(lower.map_or(e.steps, |l| l.min(e.steps)));
            let inc = self.is_s_incompressible(&e.prog.to_bit_vec(), s);
            if inc.incompressible {
                match upper {
                    Some(u) if u <= e.steps => {}
                    _ => {
                        upper = Some(e.steps);
                        upper_conservative = inc.budget_conservative;
                    }
                }
            }
        }
        match lower {
            Some(l) => DepthBracket {
                significance: s,
                lower: l,
                upper,
                no_producer: false,
                conservative_upper: upper_conservative,
                l_max: self.l_max,
                t_max: self.t_max,
                label: DEPTH_LABEL,
            },
            None => DepthBracket {
                significance: s,
                lower: self.t_max,
                upper: None,
                no_producer: true,
                conservative_upper: false,
                l_max: self.l_max,
                t_max: self.t_max,
                label: DEPTH_LABEL,
            },
        }
    }

    /// All halting programs (for prefix-freeness checks and inspection).
    pub fn halting_programs(&self) -> impl Iterator<Item = (BitStr, u64, &[u8])> {
        self.entries.iter().map(|e| (e.prog, e.steps, e.output.as_slice()))
    }

    // -- cache ------------------------------------------------------------

    /// Line-oriented cache: header then one record per halting program,
    /// `hex(program bits)|length|status|steps|outlen:hex(output)`.
    pub fn save_cache<W: Write>(&self, w: &mut W) -> Result<()> {
        let bx = match self.min_budget_exceeded_len {
            Some(l) => l.to_string(),
            None => "none".to_string(),
        };
        writeln!(
            w,
            "# nct-depth-cache v{} l_max={} t_max={} bx={}",
            CACHE_FORMAT_VERSION, self.l_max, self.t_max, bx
        )?;
        for e in &self.entries {
            let out_hex = bits_to_hex(&e.output);
            writeln!(
                w,
                "{:08x}|{}|halted|{}|{}:{}",
                e.prog.bits,
                e.prog.len,
                e.steps,
                e.output.len(),
                out_hex
            )?;
        }
        Ok(())
    }

    /// Load a cache written by [`DepthLab::save_cache`]; budgets must match.
    pub fn load_cache<R: Read>(r: &mut R, l_max: u32, t_max: u64) -> Result<Self> {
        let reader = BufReader::new(r);
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty depth cache".into()))??;
        let prefix = format!(
            "# nct-depth-cache v{CACHE_FORMAT_VERSION} l_max={l_max} t_max={t_max} bx="
        );
        let bx_field = header.strip_prefix(&prefix).ok_or_else(|| {
            Error::Parse(format!("cache header mismatch: got '{header}', expected '{prefix}...'"))
        })?;
        let min_bx = match bx_field {
            "none" => None,
            v => Some(v.parse::<u32>().map_err(|_| Error::Parse("bad bx field".into()))?),
        };
        let mut entries = Vec::new();
        for line in lines {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split('|').collect();
            if parts.len() != 5 {
                return Err(Error::Parse(format!("bad cache record '{line}'")));
            }
            let bits = u32::from_str_radix(parts[0], 16)
                .map_err(|_| Error::Parse("bad program hex".into()))?;
            let len: u8 = parts[1].parse().map_err(|_| Error::Parse("bad length".into()))?;
            if parts[2] != "halted" {
                return Err(Error::Parse(format!("unexpected status '{}'", parts[2])));
            }
            let steps: u64 = parts[3].parse().map_err(|_| Error::Parse("bad steps".into()))?;
            let (outlen, hex) = parts[4]
                .split_once(':')
                .ok_or_else(|| Error::Parse("bad output field".into()))?;
            let outlen: usize = outlen.parse().map_err(|_| Error::Parse("bad output length".into()))?;
            let output = hex_to_bits(hex, outlen)?;
            entries.push(HaltEntry { prog: BitStr::new(len, bits), steps, output });
        }
        // rebuild canonical (length-then-lex) order
        entries.sort_by_key(|e| (e.prog.len, e.prog.bits));
        let mut first_producer = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            first_producer.entry(e.output.clone()).or_insert(i);
        }
        Ok(DepthLab { l_max, t_max, entries, first_producer, min_budget_exceeded_len: min_bx })
    }

    /// Union of two caches over the same budgets (results are
    /// deterministic, so merging de-duplicates by program).
    pub fn merge(&mut self, other: DepthLab) -> Result<()> {
        if self.l_max != other.l_max || self.t_max != other.t_max {
            return Err(Error::Parse("cannot merge depth caches with different budgets".into()));
        }
        let known: std::collections::HashSet<BitStr> =
            self.entries.iter().map(|e| e.prog).collect();
        for e in other.entries {
            if !known.contains(&e.prog) {
                self.entries.push(e);
            }
        }
        self.entries.sort_by_key(|e| (e.prog.len, e.prog.bits));
        self.first_producer.clear();
        for (i, e) in self.entries.iter().enumerate() {
            self.first_producer.entry(e.output.clone()).or_insert(i);
        }
        self.min_budget_exceeded_len = match (self.min_budget_exceeded_len, other.min_budget_exceeded_len) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Ok(())
    }
}

fn bits_to_hex(bits: &[u8]) -> String {
    let mut out = String::new();
    for chunk in bits.chunks(4) {
        let mut v = 0u8;
        for (i, &b) in chunk.iter().enumerate() {
            v |= (b & 1) << (3 - i);
        }
        out.push(char::from_digit(v as u32, 16).unwrap());
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn hex_to_bits(hex: &str, len: usize) -> Result<Vec<u8>> {
    let mut bits = Vec::with_capacity(hex.len() * 4);
    for ch in hex.chars() {
        let v = ch.to_digit(16).ok_or_else(|| Error::Parse("bad hex digit".into()))? as u8;
        for i in 0..4 {
            bits.push((v >> (3 - i)) & 1);
        }
    }
    if bits.len() < len {
        return Err(Error::Parse("output hex shorter than declared length".into()));
    }
    bits.truncate(len);
    Ok(bits)
}

// -- one-shot wrappers ----------------------------------------------------

pub enum CanonicalResult {
    Found { program: BitStr, k: u32 },
    NotFoundWithinBudget,
}

/// Exhaustive canonical-program search (builds a fresh table; use
/// [`DepthLab`] directly for repeated queries).
pub fn canonical_program(x: &[u8], l_max: u32, t_max: u64) -> Result<CanonicalResult> {
    let lab = DepthLab::build(l_max, t_max)?;
    Ok(match lab.canonical_program(x) {
        Some((program, k)) => CanonicalResult::Found { program, k },
        None => CanonicalResult::NotFoundWithinBudget,
    })
}

pub fn is_s_incompressible(y: &[u8], s: u32, l_max: u32, t_max: u64) -> Result<Incompressibility> {
    Ok(DepthLab::build(l_max, t_max)?.is_s_incompressible(y, s))
}

pub fn logical_depth(x: &[u8], s: u32, l_max: u32, t_max: u64) -> Result<DepthBracket> {
    Ok(DepthLab::build(l_max, t_max)?.logical_depth(x, s))
}

// -- state-vector encoding --------------------------------------------------

/// Exact complex amplitude: rational real and imaginary parts.
pub type GaussianRational = (BigRational, BigRational);

fn gamma_encode_big(n: &BigUint, out: &mut Vec<u8>) {
    let bits = n.bits();
    debug_assert!(bits >= 1);
    for _ in 0..bits - 1 {
        out.push(0);
    }
    for i in (0..bits).rev() {
        out.push(if n.bit(i) { 1 } else { 0 });
    }
}

struct BigBitCursor<'a> {
    bits: &'a [u8],
    pos: usize,
}

impl<'a> BigBitCursor<'a> {
    fn take(&mut self) -> Result<u8> {
        let b = self
            .bits
            .get(self.pos)
            .copied()
            .ok_or_else(|| Error::Parse("truncated state encoding".into()))?;
        self.pos += 1;
        Ok(b)
    }

    fn take_gamma_big(&mut self) -> Result<BigUint> {
        let mut zeros = 0usize;
        while self.take()? == 0 {
            zeros += 1;
            if zeros > 4096 {
                return Err(Error::Parse("gamma field too long".into()));
            }
        }
        let mut v = BigUint::one();
        for _ in 0..zeros {
            v = (v << 1) | BigUint::from(self.take()? as u32);
        }
        Ok(v)
    }
}

/// Canonical bit serialization of a unit vector with exact rational
/// amplitudes: the qubit count, then for each amplitude the real and
/// imaginary parts as sign bit, gamma(|numerator| + 1), gamma(denominator).
/// Amplitude count must be a power of two and the squared moduli must sum
/// to exactly 1.
pub fn encode_state(amplitudes: &[GaussianRational]) -> Result<Vec<u8>> {
    let len = amplitudes.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::Parse(format!("amplitude count {len} is not a power of two")));
    }
    let norm: BigRational = amplitudes
        .iter()
        .map(|(re, im)| re * re + im * im)
        .fold(BigRational::zero(), |a, b| a + b);
    if norm != BigRational::one() {
        return Err(Error::InvariantViolation(format!(
            "state not normalized: |psi|^2 = {norm}"
        )));
    }
    let n_qubits = len.trailing_zeros() as u64;
    let mut out = Vec::new();
    gamma_encode_big(&BigUint::from(n_qubits + 1), &mut out);
    for (re, im) in amplitudes {
        for part in [re, im] {
            out.push(if part.is_negative() { 1 } else { 0 });
            let num = part.numer().abs().to_biguint().unwrap();
            let den = part.denom().abs().to_biguint().unwrap();
            gamma_encode_big(&(num + BigUint::one()), &mut out);
            gamma_encode_big(&den, &mut out);
        }
    }
    Ok(out)
}

/// Inverse of [`encode_state`].
pub fn decode_state(bits: &[u8]) -> Result<Vec<GaussianRational>> {
    let mut cur = BigBitCursor { bits, pos: 0 };
    let n_plus_1 = cur.take_gamma_big()?;
    let n_qubits = num_traits::ToPrimitive::to_u64(&(n_plus_1 - BigUint::one()))
        .filter(|&v| v <= 20)
        .ok_or_else(|| Error::Parse("qubit count too large".into()))?;
    let len = 1usize << n_qubits;
    let mut amps = Vec::with_capacity(len);
    for _ in 0..len {
        let mut parts = Vec::with_capacity(2);
        for _ in 0..2 {
            let sign = cur.take()?;
            let num = BigInt::from(cur.take_gamma_big()?) - BigInt::one();
            let den = BigInt::from(cur.take_gamma_big()?);
            let signed = if sign == 1 { -num } else { num };
            parts.push(BigRational::new(signed, den));
        }
        let im = parts.pop().unwrap();
        let re = parts.pop().unwrap();
        amps.push((re, im));
    }
    if cur.pos != bits.len() {
        return Err(Error::Parse("trailing bits after state encoding".into()));
    }
    Ok(amps)
}
