//! Finite words over an n-letter alphabet, with a small binary container
//! format for streaming them between the orbit generator and the
//! compression estimators.
//!
//! Binary layout: a 16-byte header — magic `NCTW`, format version (u16 LE),
//! alphabet size (u16 LE), digit count (u64 LE) — followed by one byte per
//! digit. Alphabets larger than 256 letters do not fit the byte-per-digit
//! payload and are rejected.

use std::io::{Read, Write};

use crate::error::{Error, Result};

pub const WORD_MAGIC: &[u8; 4] = b"NCTW";
pub const WORD_FORMAT_VERSION: u16 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolicWord {
    alphabet: u32,
    digits: Vec<u16>,
}

impl SymbolicWord {
    pub fn new(alphabet: u32, digits: Vec<u16>) -> Result<Self> {
        if alphabet < 2 {
            return Err(Error::Parse(format!("alphabet size {alphabet} < 2")));
        }
        if let Some(&d) = digits.iter().find(|&&d| d as u32 >= alphabet) {
            return Err(Error::Parse(format!("digit {d} out of range for alphabet {alphabet}")));
        }
        Ok(SymbolicWord { alphabet, digits })
    }

    pub fn empty(alphabet: u32) -> Result<Self> {
        SymbolicWord::new(alphabet, Vec::new())
    }

    /// Binary word from 0/1 bits.
    pub fn from_bits(bits: &[u8]) -> Self {
        SymbolicWord { alphabet: 2, digits: bits.iter().map(|&b| (b & 1) as u16).collect() }
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn digits(&self) -> &[u16] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn push(&mut self, digit: u16) {
        debug_assert!((digit as u32) < self.alphabet);
        self.digits.push(digit);
    }

    pub fn concat(&self, other: &SymbolicWord) -> Result<SymbolicWord> {
        if self.alphabet != other.alphabet {
            return Err(Error::Parse("alphabet mismatch in concat".into()));
        }
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        Ok(SymbolicWord { alphabet: self.alphabet, digits })
    }

    /// One character per digit for alphabets up to 10, comma-separated
    /// otherwise.
    pub fn to_text(&self) -> String {
        if self.alphabet <= 10 {
            self.digits.iter().map(|d| char::from(b'0' + *d as u8)).collect()
        } else {
            let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
            parts.join(",")
        }
    }

    pub fn from_text(alphabet: u32, text: &str) -> Result<Self> {
        let t = text.trim();
        let digits: Vec<u16> = if alphabet <= 10 {
            t.bytes()
                .map(|b| {
                    if b.is_ascii_digit() {
                        Ok((b - b'0') as u16)
                    } else {
                        Err(Error::Parse(format!("bad digit character '{}'", b as char)))
                    }
                })
                .collect::<Result<_>>()?
        } else {
            t.split(',')
                .filter(|p| !p.is_empty())
                .map(|p| p.trim().parse::<u16>().map_err(|_| Error::Parse(format!("bad digit '{p}'"))))
                .collect::<Result<_>>()?
        };
        SymbolicWord::new(alphabet, digits)
    }

    pub fn write_binary<W: Write>(&self, w: &mut W) -> Result<()> {
        if self.alphabet > 256 {
            return Err(Error::Parse(format!(
                "alphabet {} exceeds byte-per-digit limit 256",
                self.alphabet
            )));
        }
        w.write_all(WORD_MAGIC)?;
        w.write_all(&WORD_FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&(self.alphabet as u16).to_le_bytes())?;
        w.write_all(&(self.digits.len() as u64).to_le_bytes())?;
        let bytes: Vec<u8> = self.digits.iter().map(|&d| d as u8).collect();
        w.write_all(&bytes)?;
        Ok(())
    }

    pub fn read_binary<R: Read>(r: &mut R) -> Result<Self> {
        let mut header = [0u8; 16];
        r.read_exact(&mut header)?;
        if &header[0..4] != WORD_MAGIC {
            return Err(Error::Parse("bad magic in word file".into()));
        }
        let version = u16::from_le_bytes([header[4], header[5]]);
        if version != WORD_FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported word format version {version}")));
        }
        let alphabet = u16::from_le_bytes([header[6], header[7]]) as u32;
        let len = u64::from_le_bytes(header[8..16].try_into().unwrap()) as usize;
        let mut bytes = vec![0u8; len];
        r.read_exact(&mut bytes)?;
        SymbolicWord::new(alphabet, bytes.into_iter().map(|b| b as u16).collect())
    }
}
