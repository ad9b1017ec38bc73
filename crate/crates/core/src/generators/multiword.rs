//! Fixed-capacity unsigned integers for exact probability ratios.

use std::cmp::Ordering;
use std::fmt;

/// Number of 64-bit limbs. Holds the 1075-bit scaled binary64 probabilities
/// with room for one doubling.
pub const LIMBS: usize = 17;

/// Capacity in bits.
pub const CAPACITY: u32 = (LIMBS as u32) * 64;

/// A little-endian fixed-width unsigned integer.
///
/// Arithmetic that would overflow the capacity or go below zero panics.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiWordUInt {
    limbs: [u64; LIMBS],
}

impl MultiWordUInt {
    pub const ZERO: MultiWordUInt = MultiWordUInt { limbs: [0; LIMBS] };

    pub fn from_u64(x: u64) -> Self {
        let mut limbs = [0; LIMBS];
        limbs[0] = x;
        Self { limbs }
    }

    /// `x << shift`.
    pub fn from_shifted(x: u64, shift: u32) -> Self {
        let mut r = Self::from_u64(x);
        r.shl_assign(shift);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&w| w == 0)
    }

    /// Number of significant bits; zero for zero.
    pub fn bit_len(&self) -> u32 {
        for (i, &w) in self.limbs.iter().enumerate().rev() {
            if w != 0 {
                return i as u32 * 64 + 64 - w.leading_zeros();
            }
        }
        0
    }

    pub fn bit(&self, i: u32) -> bool {
        let (w, b) = ((i / 64) as usize, i % 64);
        w < LIMBS && (self.limbs[w] >> b) & 1 == 1
    }

    pub fn limbs(&self) -> &[u64; LIMBS] {
        &self.limbs
    }

    pub fn to_u128(&self) -> Option<u128> {
        if self.limbs[2..].iter().any(|&w| w != 0) {
            return None;
        }
        Some(self.limbs[0] as u128 | (self.limbs[1] as u128) << 64)
    }

    pub fn shl_assign(&mut self, shift: u32) {
        if shift == 0 || self.is_zero() {
            return;
        }
        assert!(self.bit_len() + shift <= CAPACITY, "MultiWordUInt shift overflow");
        let (words, bits) = ((shift / 64) as usize, shift % 64);
        for i in (0..LIMBS).rev() {
            let src = i as isize - words as isize;
            let mut w = if src >= 0 { self.limbs[src as usize] << bits } else { 0 };
            if bits > 0 && src >= 1 {
                w |= self.limbs[src as usize - 1] >> (64 - bits);
            }
            self.limbs[i] = w;
        }
    }

    /// Doubles in place.
    #[inline]
    pub fn shl1(&mut self) {
        assert!(self.limbs[LIMBS - 1] >> 63 == 0, "MultiWordUInt doubling overflow");
        let mut carry = 0;
        for w in self.limbs.iter_mut() {
            let next = *w >> 63;
            *w = (*w << 1) | carry;
            carry = next;
        }
    }

    /// `self -= rhs`.
    #[inline]
    pub fn sub_assign(&mut self, rhs: &Self) {
        let mut borrow = false;
        for (a, &b) in self.limbs.iter_mut().zip(rhs.limbs.iter()) {
            let (d1, o1) = a.overflowing_sub(b);
            let (d2, o2) = d1.overflowing_sub(borrow as u64);
            *a = d2;
            borrow = o1 || o2;
        }
        assert!(!borrow, "MultiWordUInt subtraction underflow");
    }

    pub fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        if self < rhs {
            return None;
        }
        let mut r = *self;
        r.sub_assign(rhs);
        Some(r)
    }

    /// Decimal rendering, for diagnostics.
    pub fn to_decimal(&self) -> String {
        let mut digits = Vec::new();
        let mut cur = self.limbs;
        loop {
            let mut rem: u128 = 0;
            let mut all_zero = true;
            for w in cur.iter_mut().rev() {
                let acc = (rem << 64) | *w as u128;
                *w = (acc / 10) as u64;
                rem = acc % 10;
                all_zero &= *w == 0;
            }
            digits.push(b'0' + rem as u8);
            if all_zero {
                break;
            }
        }
        digits.reverse();
        String::from_utf8(digits).expect("ascii digits")
    }
}

impl Default for MultiWordUInt {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<u64> for MultiWordUInt {
    fn from(x: u64) -> Self {
        Self::from_u64(x)
    }
}

impl Ord for MultiWordUInt {
    fn cmp(&self, other: &Self) -> Ordering {
        for i in (0..LIMBS).rev() {
            match self.limbs[i].cmp(&other.limbs[i]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for MultiWordUInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiWordUInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiWordUInt({})", self.to_decimal())
    }
}

impl fmt::Display for MultiWordUInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifts_and_lengths() {
        let x = MultiWordUInt::from_shifted(0b101, 130);
        assert_eq!(x.bit_len(), 133);
        assert!(x.bit(130) && !x.bit(131) && x.bit(132));
        let mut y = MultiWordUInt::from_u64(u64::MAX);
        y.shl1();
        assert_eq!(y.to_u128(), Some((u64::MAX as u128) << 1));
    }

    #[test]
    fn subtraction_borrows_across_limbs() {
        let a = MultiWordUInt::from_shifted(1, 128);
        let b = MultiWordUInt::from_u64(1);
        let c = a.checked_sub(&b).unwrap();
        assert_eq!(c.bit_len(), 128);
        assert!(b.checked_sub(&a).is_none());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(MultiWordUInt::from_shifted(1, 70).to_decimal(), "1180591620717411303424");
        assert_eq!(MultiWordUInt::ZERO.to_string(), "0");
    }
}
