//! Seeded random fixtures: parameter sets, sample elements and pipeline keys.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{window_basis, Basis};
use crate::{Coefficient, DerivationParams, Element};

/// Nonzero rational with `|numerator| <= height` and `denominator <= height`.
pub fn random_coefficient<R: Rng>(rng: &mut R, height: i64) -> Coefficient {
    let height = height.max(1);
    loop {
        let n = rng.gen_range(-height..=height);
        if n != 0 {
            let d = rng.gen_range(1..=height);
            return Coefficient::new(BigInt::from(n), BigInt::from(d));
        }
    }
}

/// Random parameters with `a`, `b` supported in `[lo, hi]` (each index present
/// with probability 1/2) and random outer coefficients.
pub fn random_params<R: Rng>(rng: &mut R, lo: i64, hi: i64, height: i64) -> DerivationParams {
    let mut p = DerivationParams::zero();
    for j in lo..=hi {
        if rng.gen_bool(0.5) {
            p.a.insert(j, random_coefficient(rng, height));
        }
        if rng.gen_bool(0.5) {
            p.b.insert(j, random_coefficient(rng, height));
        }
    }
    p.alpha = random_coefficient(rng, height);
    p.beta = random_coefficient(rng, height);
    p.gamma = random_coefficient(rng, height);
    p
}

fn random_terms<R: Rng>(rng: &mut R, ctor: fn(i64) -> Basis, window: i64, out: &mut Element) {
    let count = rng.gen_range(1..=3);
    for _ in 0..count {
        let n = rng.gen_range(-window..=window);
        out.add_term(ctor(n), random_coefficient(rng, 9));
    }
}

/// Sample elements cycling through pure-`I`, pure-`L` and mixed shapes.
///
/// Mixed samples always carry `L`, `I` and central support at once. Indices lie in
/// `[-window, window]`; terms that cancel are redrawn so no sample is zero.
pub fn mixed_samples<R: Rng>(rng: &mut R, count: usize, window: i64) -> Vec<Element> {
    const CENTRALS: [Basis; 3] = [Basis::CL, Basis::CLI, Basis::CI];
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut e = Element::zero();
        match out.len() % 3 {
            0 => random_terms(rng, Basis::I, window, &mut e),
            1 => random_terms(rng, Basis::L, window, &mut e),
            _ => {
                random_terms(rng, Basis::L, window, &mut e);
                random_terms(rng, Basis::I, window, &mut e);
                let c = *CENTRALS.choose(rng).expect("nonempty");
                e.add_term(c, random_coefficient(rng, 9));
            }
        }
        let shape_ok = match out.len() % 3 {
            2 => {
                e.support().any(|b| matches!(b, Basis::L(_)))
                    && e.support().any(|b| matches!(b, Basis::I(_)))
            }
            _ => !e.is_zero(),
        };
        if shape_ok {
            out.push(e);
        }
    }
    out
}

/// `(k, x)` pairs for homogeneity checks drawn from `xs`.
pub fn scaling_pairs<R: Rng>(
    rng: &mut R,
    xs: &[Element],
    count: usize,
) -> Vec<(Coefficient, Element)> {
    (0..count)
        .map(|_| {
            let x = xs.choose(rng).expect("nonempty sample set").clone();
            (random_coefficient(rng, 20), x)
        })
        .collect()
}

/// Keys required by the reduction pipeline: all of `W_window` plus the samples.
pub fn pipeline_keys(window: i64, samples: &[Element]) -> Vec<Element> {
    let mut keys: Vec<Element> = window_basis(window)
        .into_iter()
        .map(Element::basis)
        .collect();
    keys.extend(samples.iter().cloned());
    keys
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sample_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = mixed_samples(&mut rng, 30, 4);
        for (i, e) in s.iter().enumerate() {
            let has_l = e.support().any(|b| matches!(b, Basis::L(_)));
            let has_i = e.support().any(|b| matches!(b, Basis::I(_)));
            let has_c = e.support().any(Basis::is_central_symbol);
            match i % 3 {
                0 => assert!(has_i && !has_l && !has_c),
                1 => assert!(has_l && !has_i && !has_c),
                _ => assert!(has_l && has_i && has_c),
            }
            assert!(e.max_abs_index().unwrap() <= 4);
        }
    }

    #[test]
    fn seeded_reproducible() {
        let a = mixed_samples(&mut ChaCha8Rng::seed_from_u64(3), 10, 5);
        let b = mixed_samples(&mut ChaCha8Rng::seed_from_u64(3), 10, 5);
        assert_eq!(a, b);
        let p = random_params(&mut ChaCha8Rng::seed_from_u64(3), -5, 5, 100);
        assert!(p.max_abs_index().unwrap_or(0) <= 5);
    }
}
