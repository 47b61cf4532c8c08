//! Bit strings packed into naturals: a code is the natural whose binary
//! expansion is `1` followed by the payload bits, most significant first.

use num_bigint::BigUint;
use num_traits::{One, Zero};

#[derive(Default, Clone, Debug)]
pub struct BitWriter {
    bits: Vec<u8>,
}

impl BitWriter {
    pub fn new() -> Self {
        BitWriter::default()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit as u8);
    }

    pub fn push_bits(&mut self, value: u64, width: u32) {
        for i in (0..width).rev() {
            self.push((value >> i) & 1 == 1);
        }
    }

    /// Elias gamma code of `n + 1`.
    pub fn gamma(&mut self, n: u64) {
        let v = n as u128 + 1;
        let len = 128 - v.leading_zeros();
        for _ in 1..len {
            self.push(false);
        }
        for i in (0..len).rev() {
            self.push((v >> i) & 1 == 1);
        }
    }

    /// Arbitrary natural: gamma-coded bit length, then the bits.
    pub fn natural(&mut self, n: &BigUint) {
        let len = n.bits();
        self.gamma(len);
        for i in (0..len).rev() {
            self.push(n.bit(i));
        }
    }

    pub fn bytes(&mut self, data: &[u8]) {
        self.gamma(data.len() as u64);
        for &b in data {
            self.push_bits(b as u64, 8);
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Packs `1 ‖ payload` into a natural.
    pub fn finish(self) -> BigUint {
        let mut digits = Vec::with_capacity(self.bits.len() + 1);
        digits.push(1u8);
        digits.extend(self.bits);
        BigUint::from_radix_be(&digits, 2).expect("binary digits")
    }
}

pub struct BitReader {
    bits: Vec<u8>,
    pos: usize,
}

/// Marker for any malformed bit string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Malformed;

impl BitReader {
    /// Strips the leading marker bit; `None` for zero.
    pub fn from_code(code: &BigUint) -> Option<BitReader> {
        if code.is_zero() {
            return None;
        }
        let mut bits = code.to_radix_be(2);
        bits.remove(0);
        Some(BitReader { bits, pos: 0 })
    }

    pub fn at_end(&self) -> bool {
        self.pos == self.bits.len()
    }

    pub fn bit(&mut self) -> Result<bool, Malformed> {
        let b = *self.bits.get(self.pos).ok_or(Malformed)?;
        self.pos += 1;
        Ok(b == 1)
    }

    pub fn bits(&mut self, width: u32) -> Result<u64, Malformed> {
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | self.bit()? as u64;
        }
        Ok(v)
    }

    pub fn gamma(&mut self) -> Result<u64, Malformed> {
        let mut zeros = 0u32;
        while !self.bit()? {
            zeros += 1;
            if zeros > 64 {
                return Err(Malformed);
            }
        }
        let mut v: u128 = 1;
        for _ in 0..zeros {
            v = (v << 1) | self.bit()? as u128;
        }
        u64::try_from(v - 1).map_err(|_| Malformed)
    }

    pub fn natural(&mut self) -> Result<BigUint, Malformed> {
        let len = self.gamma()?;
        if len as usize > self.bits.len() - self.pos {
            return Err(Malformed);
        }
        let mut n = BigUint::zero();
        for i in 0..len {
            let b = self.bit()?;
            // a nonzero natural's top bit is set: canonical length
            if i == 0 && !b {
                return Err(Malformed);
            }
            n <<= 1;
            if b {
                n += BigUint::one();
            }
        }
        Ok(n)
    }

    pub fn bytes(&mut self) -> Result<Vec<u8>, Malformed> {
        let len = self.gamma()?;
        if len as usize > (self.bits.len() - self.pos) / 8 {
            return Err(Malformed);
        }
        (0..len).map(|_| self.bits(8).map(|b| b as u8)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_round_trip() {
        let mut w = BitWriter::new();
        for n in [0u64, 1, 2, 7, 8, 1000, u64::MAX - 1] {
            w.gamma(n);
        }
        w.natural(&BigUint::from(12345u32));
        w.natural(&BigUint::zero());
        let code = w.finish();
        let mut r = BitReader::from_code(&code).unwrap();
        for n in [0u64, 1, 2, 7, 8, 1000, u64::MAX - 1] {
            assert_eq!(r.gamma(), Ok(n));
        }
        assert_eq!(r.natural(), Ok(BigUint::from(12345u32)));
        assert_eq!(r.natural(), Ok(BigUint::zero()));
        assert!(r.at_end());
    }
}
