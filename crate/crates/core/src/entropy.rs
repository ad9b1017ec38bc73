//! Fair random bit streams with exact consumption accounting.

use rand_core::{OsRng, RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};

/// A lazy stream of fair random bits.
///
/// Every successful call to [`next_bit`](BitSource::next_bit) increments
/// [`bits_consumed`](BitSource::bits_consumed) by exactly one.
pub trait BitSource {
    fn next_bit(&mut self) -> Result<bool>;
    fn bits_consumed(&self) -> u64;
}

impl<S: BitSource + ?Sized> BitSource for &mut S {
    #[inline]
    fn next_bit(&mut self) -> Result<bool> {
        (**self).next_bit()
    }

    #[inline]
    fn bits_consumed(&self) -> u64 {
        (**self).bits_consumed()
    }
}

/// Serves the bits of successive 64-bit words, most significant bit first.
struct WordBuffer {
    word: u64,
    left: u32,
    consumed: u64,
}

impl WordBuffer {
    fn new() -> Self {
        Self { word: 0, left: 0, consumed: 0 }
    }

    #[inline]
    fn next(&mut self, refill: impl FnOnce() -> u64) -> bool {
        if self.left == 0 {
            self.word = refill();
            self.left = 64;
        }
        self.left -= 1;
        self.consumed += 1;
        (self.word >> self.left) & 1 == 1
    }
}

/// Deterministic pseudorandom bits from xoshiro256++ seeded with a 64-bit value.
pub struct PrngSource {
    rng: Xoshiro256PlusPlus,
    buf: WordBuffer,
}

impl PrngSource {
    pub fn new(seed: u64) -> Self {
        Self { rng: Xoshiro256PlusPlus::seed_from_u64(seed), buf: WordBuffer::new() }
    }
}

/// Shorthand for [`PrngSource::new`].
pub fn prng_source(seed: u64) -> PrngSource {
    PrngSource::new(seed)
}

impl BitSource for PrngSource {
    #[inline]
    fn next_bit(&mut self) -> Result<bool> {
        let rng = &mut self.rng;
        Ok(self.buf.next(|| rng.next_u64()))
    }

    #[inline]
    fn bits_consumed(&self) -> u64 {
        self.buf.consumed
    }
}

/// Bits from the operating system's entropy source. Not used in tests.
pub struct OsSource {
    buf: WordBuffer,
}

impl OsSource {
    pub fn new() -> Self {
        Self { buf: WordBuffer::new() }
    }
}

impl Default for OsSource {
    fn default() -> Self {
        Self::new()
    }
}

impl BitSource for OsSource {
    fn next_bit(&mut self) -> Result<bool> {
        Ok(self.buf.next(|| OsRng.next_u64()))
    }

    fn bits_consumed(&self) -> u64 {
        self.buf.consumed
    }
}

/// Replays a fixed bit sequence and fails once it runs out.
#[derive(Clone, Debug)]
pub struct ReplaySource {
    bits: Vec<bool>,
    pos: usize,
}

impl ReplaySource {
    /// A replay source over a non-empty stream.
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::Precondition("replay stream must be non-empty".into()));
        }
        Ok(Self { bits, pos: 0 })
    }

    /// A replay source that may be empty, used to probe generators prefix by prefix.
    pub fn from_prefix(bits: &[bool]) -> Self {
        Self { bits: bits.to_vec(), pos: 0 }
    }

    /// Parses ASCII `0`/`1` characters, ignoring whitespace.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(parse_bits(text)?)
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }
}

/// Shorthand for [`ReplaySource::new`].
pub fn replay_source(bits: Vec<bool>) -> Result<ReplaySource> {
    ReplaySource::new(bits)
}

/// Parses a string of `0`/`1` characters, ignoring whitespace.
pub fn parse_bits(text: &str) -> Result<Vec<bool>> {
    text.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("invalid bit character '{other}'"))),
        })
        .collect()
}

impl BitSource for ReplaySource {
    #[inline]
    fn next_bit(&mut self) -> Result<bool> {
        match self.bits.get(self.pos) {
            Some(&b) => {
                self.pos += 1;
                Ok(b)
            }
            None => Err(Error::Exhausted { consumed: self.pos as u64 }),
        }
    }

    #[inline]
    fn bits_consumed(&self) -> u64 {
        self.pos as u64
    }
}
