//! Textbook RSA over residues of `Z_n`, and key recovery by factoring.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::factor::{pollard_rho_with, RhoConfig};
use super::primes::{gcd, is_prime, random_prime_pair};
use crate::error::{Error, Result};

pub const MIN_KEY_BITS: u32 = 8;
pub const MAX_KEY_BITS: u32 = 256;
pub const DEFAULT_EXPONENT: u32 = 65_537;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PublicKey {
    #[serde(serialize_with = "as_decimal")]
    pub n: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub e: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RsaKeyPair {
    #[serde(serialize_with = "as_decimal")]
    pub n: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub e: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub d: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub p: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub q: BigUint,
}

/// Big integers go out as decimal strings so JSON consumers keep every digit.
pub(crate) fn as_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

impl RsaKeyPair {
    pub fn public(&self) -> PublicKey {
        PublicKey {
            n: self.n.clone(),
            e: self.e.clone(),
        }
    }

    pub fn phi(&self) -> BigUint {
        (&self.p - 1u32) * (&self.q - 1u32)
    }
}

/// Public exponent for totient `phi`: 65537 when it is below `phi` and
/// coprime to it, otherwise the smallest odd `e >= 3` coprime to `phi`.
pub fn choose_exponent(phi: &BigUint) -> BigUint {
    let f4 = BigUint::from(DEFAULT_EXPONENT);
    if &f4 < phi && gcd(&f4, phi).is_one() {
        return f4;
    }
    let mut e = BigUint::from(3u32);
    while !gcd(&e, phi).is_one() {
        e += 2u32;
    }
    e
}

/// Key pair whose primes have `ceil(bits/2)` and `floor(bits/2)` bits,
/// deterministic in `seed`.
pub fn keygen(bits: u32, seed: u64) -> Result<RsaKeyPair> {
    if !(MIN_KEY_BITS..=MAX_KEY_BITS).contains(&bits) {
        return Err(Error::input(format!(
            "key size {bits} outside desk-scale range [{MIN_KEY_BITS}, {MAX_KEY_BITS}]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (p, q) = random_prime_pair(&mut rng, bits);
    let n = &p * &q;
    let phi = (&p - 1u32) * (&q - 1u32);
    let e = choose_exponent(&phi);
    let d = e.modinv(&phi).expect("e chosen coprime to phi");
    Ok(RsaKeyPair { n, e, d, p, q })
}

/// `m^e mod n`.
pub fn encrypt(key: &PublicKey, m: &BigUint) -> Result<BigUint> {
    if m >= &key.n {
        return Err(Error::input("message must be smaller than the modulus"));
    }
    Ok(m.modpow(&key.e, &key.n))
}

/// `c^d mod n`.
pub fn decrypt(d: &BigUint, n: &BigUint, c: &BigUint) -> Result<BigUint> {
    if c >= n {
        return Err(Error::input("ciphertext must be smaller than the modulus"));
    }
    Ok(c.modpow(d, n))
}

/// Private key material recovered from a public key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecoveredKey {
    #[serde(serialize_with = "as_decimal")]
    pub d: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub p: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub q: BigUint,
}

/// Iteration budget for [`break_key`]'s factoring step.
pub const DEFAULT_BREAK_BUDGET: u64 = 1 << 26;

/// Factors `n`, forms `phi = (p-1)(q-1)` and inverts `e` modulo it.
pub fn break_key(key: &PublicKey) -> Result<RecoveredKey> {
    break_key_with(key, 0, DEFAULT_BREAK_BUDGET)
}

pub fn break_key_with(key: &PublicKey, seed: u64, budget: u64) -> Result<RecoveredKey> {
    let n = &key.n;
    if n < &BigUint::from(6u32) || is_prime(n) {
        return Err(Error::Break(format!("{n} is not a semiprime modulus")));
    }
    let config = RhoConfig {
        max_iterations: Some(budget),
        fallback_candidates: Some(budget),
        ..RhoConfig::default()
    };
    let f = pollard_rho_with(n, seed, &config).map_err(|e| Error::Break(e.to_string()))?;
    let g = n / &f;
    let (p, q) = if f < g { (f, g) } else { (g, f) };
    if p == q || !is_prime(&p) || !is_prime(&q) {
        return Err(Error::Break(format!("{n} is not a product of two distinct primes")));
    }
    let phi = (&p - 1u32) * (&q - 1u32);
    let d = key
        .e
        .modinv(&phi)
        .filter(|d| !d.is_zero())
        .ok_or_else(|| Error::Break("e is not invertible modulo phi(n)".into()))?;
    Ok(RecoveredKey { d, p, q })
}
