use alloc::format;
use alloc::string::String;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{HardnessError, UNITARY_TOL};
use crate::linalg::{project_su2, Matrix, Su2};

/// A group with more distinct elements than this is not one of the finite
/// subgroups of SU(2) that matter here (the largest has 120).
pub const DENSE_THRESHOLD: usize = 120;
pub const DISTINCT_TOL: f64 = 1e-6;
/// Random element pairs tried when looking for non-commuting squares.
pub const SEMIDIRECT_SAMPLES: usize = 64;

const COMMUTE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum DenseVerdict {
    /// More than 120 distinct elements and some squares fail to commute.
    Dense {
        elements: usize,
        products: usize,
    },
    FiniteGroup(usize),
    AbelianAxis,
    /// Infinite but every sampled pair of squares commutes: a torus
    /// extended by a flip, not dense.
    SemidirectCase {
        samples: usize,
    },
    Inconclusive {
        budget: usize,
    },
}

impl DenseVerdict {
    pub fn describe(&self) -> String {
        match self {
            DenseVerdict::Dense { elements, products } => {
                format!("dense\telements={elements}\tproducts={products}")
            }
            DenseVerdict::FiniteGroup(m) => format!("finite\torder={m}"),
            DenseVerdict::AbelianAxis => "abelian".into(),
            DenseVerdict::SemidirectCase { samples } => format!("semidirect\tsamples={samples}"),
            DenseVerdict::Inconclusive { budget } => format!("inconclusive\tbudget={budget}"),
        }
    }
}

fn to_su2(u: &Matrix) -> Result<Su2, HardnessError> {
    if u.rows() != 2 || u.cols() != 2 {
        return Err(HardnessError::Shape { expected: 2 });
    }
    let d = u.unitarity_defect();
    if d > UNITARY_TOL {
        return Err(HardnessError::NotUnitary(d));
    }
    Ok(Su2::from_matrix(&project_su2(u)).normalized())
}

fn index_of(set: &[Su2], g: Su2) -> Option<usize> {
    set.iter().position(|h| h.distance(g) < DISTINCT_TOL)
}

/// Classify the closure of `{u1, u2}` in SU(2). Each input is first scaled
/// to determinant one; `budget` caps the number of products formed.
///
/// Elements are distinct when they differ as SU(2) matrices, so `-1` is
/// not identified with the identity and the closure of the Clifford
/// generators has 48 elements.
pub fn check_dense_pair(
    u1: &Matrix,
    u2: &Matrix,
    budget: usize,
) -> Result<DenseVerdict, HardnessError> {
    let a = to_su2(u1)?;
    let b = to_su2(u2)?;
    if a.commutes_with(b, COMMUTE_TOL) {
        return Ok(DenseVerdict::AbelianAxis);
    }
    let gens = [a, b];
    let mut elems = alloc::vec![Su2::IDENTITY];
    let mut frontier = 0;
    let mut products = 0;
    // breadth-first closure under right multiplication by the generators
    while frontier < elems.len() {
        let x = elems[frontier];
        frontier += 1;
        for g in gens {
            if products >= budget {
                return Ok(DenseVerdict::Inconclusive { budget });
            }
            products += 1;
            let y = x.mul(g);
            if index_of(&elems, y).is_none() {
                elems.push(y);
            }
            if elems.len() > DENSE_THRESHOLD {
                return Ok(semidirect_test(&elems, products));
            }
        }
    }
    Ok(DenseVerdict::FiniteGroup(elems.len()))
}

fn semidirect_test(elems: &[Su2], products: usize) -> DenseVerdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d15c);
    for _ in 0..SEMIDIRECT_SAMPLES {
        let x = elems[rng.random_range(0..elems.len())];
        let y = elems[rng.random_range(0..elems.len())];
        let (x2, y2) = (x.mul(x), y.mul(y));
        if !x2.commutes_with(y2, COMMUTE_TOL) {
            return DenseVerdict::Dense {
                elements: elems.len(),
                products,
            };
        }
    }
    DenseVerdict::SemidirectCase {
        samples: SEMIDIRECT_SAMPLES,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hadamard, pauli_x, phase_s, rx, rz};
    use core::f64::consts::PI;

    #[test]
    fn fixtures() {
        assert_eq!(
            check_dense_pair(&rz(PI / 3.0), &rz(PI / 5.0), 10_000).unwrap(),
            DenseVerdict::AbelianAxis
        );
        assert_eq!(
            check_dense_pair(&hadamard(), &phase_s(), 10_000).unwrap(),
            DenseVerdict::FiniteGroup(48)
        );
        let v = check_dense_pair(&rz(2f64.sqrt()), &rx(3f64.sqrt()), 10_000).unwrap();
        assert!(matches!(v, DenseVerdict::Dense { elements: 121, .. }));
    }

    #[test]
    fn dicyclic_and_semidirect() {
        // Rz(2π/3) and X generate the binary dihedral group of order 12
        assert_eq!(
            check_dense_pair(&rz(2.0 * PI / 3.0), &pauli_x(), 10_000).unwrap(),
            DenseVerdict::FiniteGroup(12)
        );
        // an irrational rotation with a flip: infinite, squares all on the axis
        let v = check_dense_pair(&rz(2f64.sqrt()), &pauli_x(), 10_000).unwrap();
        assert!(matches!(v, DenseVerdict::SemidirectCase { .. }));
        assert!(matches!(
            check_dense_pair(&rz(2f64.sqrt()), &rx(1.0), 3).unwrap(),
            DenseVerdict::Inconclusive { .. }
        ));
    }
}
