//! Deterministic generators shared by the property and acceptance suites.
//!
//! Each integration test target compiles this module independently and
//! uses a different subset of it.
#![allow(dead_code)]

use niep::NonnegativeMatrix;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn below(rng: &mut ChaCha8Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

fn shuffled(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, below(rng, i + 1));
    }
    p
}

fn entry_value(rng: &mut ChaCha8Rng, integral: bool) -> f64 {
    if integral {
        (1 + rng.next_u64() % 3) as f64
    } else {
        0.1 + 1.9 * uniform(rng)
    }
}

/// Random irreducible matrix: a Hamiltonian cycle through a shuffled
/// vertex order guarantees strong connectivity, then sparse extra entries
/// are sprinkled on top.
pub fn random_irreducible(rng: &mut ChaCha8Rng, n: usize, integral: bool) -> NonnegativeMatrix {
    let order = shuffled(rng, n);
    let mut data = vec![0.0_f64; n * n];
    for i in 0..n {
        data[order[i] * n + order[(i + 1) % n]] = entry_value(rng, integral);
    }
    for v in data.iter_mut() {
        if *v == 0.0 && uniform(rng) < 0.25 {
            *v = entry_value(rng, integral);
        }
    }
    let m = NonnegativeMatrix::from_flat(n, data).expect("generated entries are valid");
    debug_assert!(m.is_irreducible(0.0));
    m
}

/// Random primitive integer matrix: irreducible plus a self-loop, which
/// forces the cycle-length gcd to one.
pub fn random_primitive_integer(rng: &mut ChaCha8Rng, n: usize) -> NonnegativeMatrix {
    let base = random_irreducible(rng, n, true);
    let mut data = base.data().to_vec();
    let v = below(rng, n);
    if data[v * n + v] == 0.0 {
        data[v * n + v] = (1 + rng.next_u64() % 2) as f64;
    }
    let m = NonnegativeMatrix::from_flat(n, data).expect("generated entries are valid");
    debug_assert!(m.is_primitive(0.0));
    m
}

/// Random irreducible 0/1 matrix: Hamiltonian cycle plus sprinkled ones.
pub fn random_irreducible_01(rng: &mut ChaCha8Rng, n: usize) -> NonnegativeMatrix {
    let order = shuffled(rng, n);
    let mut data = vec![0.0_f64; n * n];
    for i in 0..n {
        data[order[i] * n + order[(i + 1) % n]] = 1.0;
    }
    for v in data.iter_mut() {
        if *v == 0.0 && uniform(rng) < 0.3 {
            *v = 1.0;
        }
    }
    let m = NonnegativeMatrix::from_flat(n, data).expect("0/1 entries are valid");
    debug_assert!(m.is_irreducible(0.0));
    m
}

/// Random 0/1 matrix with arbitrary pattern, used where non-irreducible
/// instances are as interesting as irreducible ones.
pub fn random_pattern(rng: &mut ChaCha8Rng, n: usize, density: f64) -> NonnegativeMatrix {
    let data: Vec<f64> = (0..n * n)
        .map(|_| if uniform(rng) < density { 1.0 } else { 0.0 })
        .collect();
    NonnegativeMatrix::from_flat(n, data).expect("0/1 entries are valid")
}
