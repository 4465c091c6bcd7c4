use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)] // float math comes from libm unless std is linked
use num_traits::Float;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::compiler::{euler_zxz, AnsatzInstance, AnsatzKind, WordEmbeddingSet};
use crate::linalg::{project_su2, Matrix, C64};
use crate::parser::Pos;

/// Haar-random `dim × dim` unitary: Gram–Schmidt on a complex Ginibre
/// matrix. Plain Gram–Schmidt leaves the triangular factor with a positive
/// diagonal, which is what makes the result Haar distributed.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Matrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim)
            .map(|_| {
                C64::new(
                    rng.sample::<f64, _>(StandardNormal),
                    rng.sample::<f64, _>(StandardNormal),
                )
            })
            .collect();
        for c in &cols {
            let ip: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= ip * y;
            }
        }
        let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-12 {
            continue;
        }
        cols.push(v.into_iter().map(|x| x / n).collect());
    }
    let mut m = Matrix::zeros(dim, dim);
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            m[(i, j)] = *x;
        }
    }
    m
}

pub fn haar_su2<R: Rng + ?Sized>(rng: &mut R) -> Matrix {
    project_su2(&haar_unitary(2, rng))
}

/// Embeddings with Haar-random words at one qubit per wire. Nouns and
/// adjectives become one-layer Euler rotations (exact up to phase), verbs
/// dense two-qubit unitaries. Words are `n0…`, `a0…` and `v0…`.
pub fn sample_haar_embeddings(
    nouns: usize,
    adjectives: usize,
    verbs: usize,
    seed: u64,
) -> WordEmbeddingSet {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut v = WordEmbeddingSet::new(2, 52);
    let euler = |rng: &mut ChaCha20Rng| {
        let u = haar_unitary(2, rng);
        AnsatzInstance::new(AnsatzKind::Euler, 1, euler_zxz(&u).to_vec())
    };
    for i in 0..nouns {
        let a = euler(&mut rng);
        v.insert(&format!("n{i}"), 1, Pos::ProperNoun, a);
    }
    for i in 0..adjectives {
        let a = euler(&mut rng);
        v.insert(&format!("a{i}"), 1, Pos::Adjective, a);
    }
    for i in 0..verbs {
        let u = haar_unitary(4, &mut rng);
        v.insert(
            &format!("v{i}"),
            2,
            Pos::TransitiveVerb,
            AnsatzInstance::from_unitary(&u),
        );
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_and_reproducible() {
        let mut r = ChaCha20Rng::seed_from_u64(3);
        let u = haar_unitary(4, &mut r);
        assert!(u.unitarity_defect() < 1e-12);
        assert_eq!(
            sample_haar_embeddings(1, 2, 1, 9),
            sample_haar_embeddings(1, 2, 1, 9)
        );
        assert!((haar_su2(&mut r).det2() - C64::new(1.0, 0.0)).norm() < 1e-12);
    }
}
