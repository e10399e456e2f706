//! Desk-scale RSA: key generation, encryption, the factor-then-invert attack,
//! and the factoring oracles and timing harness behind it.

pub mod bench;
pub mod factor;
pub mod primes;
pub mod rsa;

pub use bench::{benchmark_factoring, BenchConfig, BenchmarkReport, BenchmarkSample, GrowthFit};
pub use factor::{factorize_rho, factorize_trial, fermat, find_factor, pollard_rho, trial_division, FactorAlgorithm};
pub use primes::is_prime;
pub use rsa::{break_key, decrypt, encrypt, keygen, PublicKey, RecoveredKey, RsaKeyPair};
