//! Minimal multiply-xor hasher for packed `u64` keys in the enumeration
//! kernels. Not suitable for untrusted input.

use std::hash::{BuildHasherDefault, Hasher};

#[derive(Default)]
pub(crate) struct PackedHasher(u64);

impl Hasher for PackedHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(b as u64);
        }
    }

    fn write_u64(&mut self, value: u64) {
        let mut x = self.0 ^ value;
        x = x.wrapping_mul(0x9e37_79b9_7f4a_7c15);
        x ^= x >> 32;
        self.0 = x;
    }
}

pub(crate) type PackedBuildHasher = BuildHasherDefault<PackedHasher>;
