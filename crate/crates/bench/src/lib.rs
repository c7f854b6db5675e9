//! Instance builders shared by the benchmark targets.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tempered_core::algebra::{random_test_algebra, Algebra, Element, TestProfile};
use tempered_core::field::FieldSpec;
use tempered_core::matrix::Matrix;

/// Dense random matrix with small integer entries over Q, or uniform
/// residues over F_p.
pub fn random_matrix(field: FieldSpec, n: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Matrix::zeros(field, n, n);
    for r in 0..n {
        for c in 0..n {
            m.set(r, c, field.random_scalar(&mut rng));
        }
    }
    m
}

/// A dimension-8 test algebra with a deterministic random element.
pub fn oracle_instance(seed: u64) -> (Algebra, Element) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // The [2, 2] block profile is the largest the generator produces.
    let a = loop {
        let candidate = random_test_algebra(FieldSpec::Rationals, TestProfile::SplitSemisimple, rng.gen());
        if candidate.dim() == 8 {
            break candidate;
        }
    };
    let delta = a.random_element(&mut rng);
    (a, delta)
}
