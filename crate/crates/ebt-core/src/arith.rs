//! Small arithmetic helpers: primality, modular inverses, deterministic
//! pseudo-random sampling for verification drivers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

/// Trial-division primality test; adequate for the parameter ranges used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Inverse of `a` modulo `m` (m >= 1), if `gcd(a, m) = 1`.
pub fn mod_inverse(a: &BigInt, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let m_big = BigInt::from(m);
    let a_red = a.mod_floor(&m_big);
    let ext = a_red.extended_gcd(&m_big);
    if ext.gcd != BigInt::one() {
        return None;
    }
    ext.x.mod_floor(&m_big).to_u64()
}

/// Deterministic xorshift generator used by sampling verifiers, so that runs
/// are reproducible without pulling a full RNG dependency into the library.
#[derive(Debug, Clone)]
pub struct XorShift64 {
    state: u64,
}

impl XorShift64 {
    pub fn new(seed: u64) -> Self {
        XorShift64 {
            state: seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).max(1),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.state = x;
        x
    }

    /// Uniform-ish value in `0..bound` (bound > 0).
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    /// Signed value in `-range..=range`.
    pub fn signed(&mut self, range: u64) -> i64 {
        self.below(2 * range + 1) as i64 - range as i64
    }
}
