//! Miller-Rabin primality and random prime generation.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Below this bound the fixed witnesses {2, .., 17} make Miller-Rabin exact.
pub const DETERMINISTIC_BOUND: u64 = 341_550_071_728_321;
const DETERMINISTIC_WITNESSES: [u32; 7] = [2, 3, 5, 7, 11, 13, 17];
/// Random-base rounds used above [`DETERMINISTIC_BOUND`].
pub const PROBABILISTIC_ROUNDS: usize = 40;

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// One Miller-Rabin round for odd `n > 3`, with `n - 1 = d * 2^s`.
fn passes_round(n: &BigUint, n_minus_1: &BigUint, d: &BigUint, s: u64, base: &BigUint) -> bool {
    let mut x = base.modpow(d, n);
    if x.is_one() || &x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if &x == n_minus_1 {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

/// Exact below [`DETERMINISTIC_BOUND`]; above it, 40 rounds with bases drawn
/// from a generator seeded by `n`, so repeated calls agree.
pub fn is_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for p in SMALL_PRIMES {
        if n == &BigUint::from(p) {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;

    if n.to_u64().is_some_and(|v| v < DETERMINISTIC_BOUND) {
        return DETERMINISTIC_WITNESSES
            .iter()
            .all(|&w| passes_round(n, &n_minus_1, &d, s, &BigUint::from(w)));
    }

    let mut seed = [0u8; 32];
    for (dst, src) in seed.iter_mut().zip(n.to_bytes_le()) {
        *dst = src;
    }
    let mut rng = ChaCha8Rng::from_seed(seed);
    let two = BigUint::from(2u32);
    std::iter::once(two.clone())
        .chain((1..PROBABILISTIC_ROUNDS).map(|_| rng.gen_biguint_range(&two, &n_minus_1)))
        .all(|base| passes_round(n, &n_minus_1, &d, s, &base))
}

/// Uniform random prime with exactly `bits` bits (top bit set), `bits >= 2`.
pub fn random_prime<R: Rng + ?Sized>(rng: &mut R, bits: u64) -> BigUint {
    assert!(bits >= 2, "primes need at least 2 bits");
    loop {
        let mut candidate = rng.gen_biguint(bits);
        candidate.set_bit(bits - 1, true);
        if bits > 2 {
            candidate.set_bit(0, true);
        }
        if is_prime(&candidate) {
            return candidate;
        }
    }
}

/// Two distinct primes of `ceil(bits/2)` and `floor(bits/2)` bits, so their
/// product has `bits` or `bits - 1` bits. Requires `bits >= 4`.
pub fn random_prime_pair<R: Rng + ?Sized>(rng: &mut R, bits: u32) -> (BigUint, BigUint) {
    let hi = u64::from(bits.div_ceil(2));
    let lo = u64::from(bits / 2);
    let p = random_prime(rng, hi);
    loop {
        let q = random_prime(rng, lo);
        if q != p {
            return (p, q);
        }
    }
}

/// `gcd` that tolerates zero arguments.
pub fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}
