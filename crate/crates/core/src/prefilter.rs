//! Bloom-style membership prefilter for the two-path tables.
//!
//! Answers "definitely absent" or "possibly present" for a 64-bit key. Bits
//! are never cleared when a key is removed from the owning table, so the
//! false-positive rate creeps up over a long run; the owner rebuilds the
//! filter from its live keys once the insert count passes a load threshold.

const NUM_HASHES: usize = 3;

#[derive(Clone, Debug)]
pub struct Prefilter {
    words: Vec<u64>,
    mask: u64,
    inserted: usize,
}

#[inline]
fn mix64(mut x: u64) -> u64 {
    // splitmix64 finalizer
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

impl Prefilter {
    /// A filter with at least `bits` bits (rounded up to a power of two, min 64).
    pub fn with_bits(bits: usize) -> Self {
        let bits = bits.max(64).next_power_of_two();
        Prefilter {
            words: vec![0; bits / 64],
            mask: (bits - 1) as u64,
            inserted: 0,
        }
    }

    pub fn num_bits(&self) -> usize {
        self.words.len() * 64
    }

    /// Number of `insert` calls since construction or the last `clear`.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    #[inline]
    fn probes(&self, key: u64) -> [u64; NUM_HASHES] {
        let h = mix64(key);
        let h1 = h & 0xffff_ffff;
        let h2 = (h >> 32) | 1;
        std::array::from_fn(|k| h1.wrapping_add((k as u64).wrapping_mul(h2)) & self.mask)
    }

    #[inline]
    pub fn insert(&mut self, key: u64) {
        for bit in self.probes(key) {
            self.words[(bit >> 6) as usize] |= 1 << (bit & 63);
        }
        self.inserted += 1;
    }

    /// `false` means the key was never inserted.
    #[inline]
    pub fn may_contain(&self, key: u64) -> bool {
        self.probes(key)
            .iter()
            .all(|&bit| self.words[(bit >> 6) as usize] & (1 << (bit & 63)) != 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
        self.inserted = 0;
    }
}
