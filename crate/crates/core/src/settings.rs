use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::ratfun::modp::{primes_below_power_of_two, PrimeCtx};

pub type SeededRng = ChaCha8Rng;

/// Global knobs shared by every randomized step. Identical settings give
/// identical results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Settings {
    pub seed: u64,
    pub primes: Vec<u64>,
    /// Random points per prime when estimating a generic rank.
    pub samples: usize,
    /// Degree bound for dependence certificates; `None` picks it per input.
    pub max_degree: Option<usize>,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            seed: 0,
            primes: primes_below_power_of_two(31, 2).expect("31-bit primes"),
            samples: 16,
            max_degree: None,
        }
    }
}

impl Settings {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn with_prime_bits(mut self, bits: u32) -> Result<Self> {
        self.primes = primes_below_power_of_two(bits, 2)?;
        Ok(self)
    }

    pub fn prime_contexts(&self) -> Vec<PrimeCtx> {
        self.primes
            .iter()
            .enumerate()
            .map(|(k, &p)| PrimeCtx {
                p,
                seed: self.seed.wrapping_add((k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
            })
            .collect()
    }

    /// A generator for one named step; distinct salts give independent streams.
    pub fn rng(&self, salt: u64) -> SeededRng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0xD1B5_4A32_D192_ED03))
    }
}
