//! Short products of two dense generators that land near a target.
//!
//! A breadth-first enumeration of generator words (pruned on a fine grid
//! over the unit quaternions) is matched against itself: a target `T` is
//! hit by `A·B` whenever `T·B⁻¹` lands in the same coarse cell as `A`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // float math comes from libm unless std is linked
use num_traits::Float;

use super::HardnessError;
use crate::linalg::{project_su2, Matrix, Su2};

#[derive(Clone, Debug, PartialEq)]
pub struct Approximation {
    /// Generator indices (0 or 1) in matrix-product order: the product is
    /// `g[w[0]]·g[w[1]]·…`, so the last one acts first on a state.
    pub word: Vec<u8>,
    /// Operator distance to the target, up to the sign of SU(2).
    pub distance: f64,
}

type Cell = [i64; 4];

fn cell(q: Su2, h: f64) -> Cell {
    let c = q.components();
    [
        (c[0] / h).floor() as i64,
        (c[1] / h).floor() as i64,
        (c[2] / h).floor() as i64,
        (c[3] / h).floor() as i64,
    ]
}

/// Reusable word table for one generator pair and one precision.
#[derive(Clone, Debug)]
pub struct Approximator {
    gens: [Su2; 2],
    epsilon: f64,
    elems: Vec<Su2>,
    // BFS tree: parent index and last generator
    parent: Vec<(usize, u8)>,
    lookup: BTreeMap<Cell, usize>,
}

impl Approximator {
    /// Enumerate words until `max_words` distinct grid cells are reached or
    /// the words reach `max_depth`.
    pub fn new(u1: &Matrix, u2: &Matrix, epsilon: f64, max_depth: usize, max_words: usize) -> Self {
        let gens = [
            Su2::from_matrix(&project_su2(u1)).normalized(),
            Su2::from_matrix(&project_su2(u2)).normalized(),
        ];
        let prune_h = epsilon / 8.0;
        let lookup_h = epsilon / 2.0;
        let mut seen: BTreeMap<Cell, ()> = BTreeMap::new();
        let mut elems = vec![Su2::IDENTITY];
        let mut parent = vec![(usize::MAX, 0u8)];
        let mut lookup = BTreeMap::new();
        seen.insert(cell(Su2::IDENTITY, prune_h), ());
        lookup.insert(cell(Su2::IDENTITY, lookup_h), 0);
        let mut level = 0..1;
        for _ in 0..max_depth {
            let start = elems.len();
            for i in level.clone() {
                for (gi, g) in gens.iter().enumerate() {
                    if elems.len() >= max_words {
                        break;
                    }
                    let y = elems[i].mul(*g);
                    if seen.insert(cell(y, prune_h), ()).is_some() {
                        continue;
                    }
                    lookup.entry(cell(y, lookup_h)).or_insert(elems.len());
                    elems.push(y);
                    parent.push((i, gi as u8));
                }
            }
            level = start..elems.len();
            if level.is_empty() {
                break;
            }
        }
        Approximator {
            gens,
            epsilon,
            elems,
            parent,
            lookup,
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    fn word(&self, mut i: usize) -> Vec<u8> {
        let mut w = Vec::new();
        while i != 0 {
            let (p, g) = self.parent[i];
            w.push(g);
            i = p;
        }
        w.reverse();
        w
    }

    pub fn product(&self, word: &[u8]) -> Su2 {
        word.iter()
            .fold(Su2::IDENTITY, |acc, g| acc.mul(self.gens[*g as usize]))
    }

    /// Shortest-first search for a word within ε of `target` (a 2×2
    /// unitary, compared up to global phase).
    pub fn approximate(&self, target: &Matrix) -> Result<Approximation, HardnessError> {
        let t = Su2::from_matrix(&project_su2(target)).normalized();
        let h = self.epsilon / 2.0;
        let mut best = f64::INFINITY;
        for (bi, b) in self.elems.iter().enumerate() {
            let q = t.mul(b.inverse());
            for s in [q, q.neg()] {
                if let Some(ai) = self.lookup.get(&cell(s, h)) {
                    let d = self.elems[*ai].mul(*b).projective_distance(t);
                    best = best.min(d);
                    if d < self.epsilon {
                        let mut word = self.word(*ai);
                        word.extend(self.word(bi));
                        let distance = self.product(&word).projective_distance(t);
                        return Ok(Approximation { word, distance });
                    }
                }
            }
        }
        Err(HardnessError::DepthExhausted {
            epsilon: self.epsilon,
            best,
        })
    }
}

/// One-off search; builds a table of up to 2^17 words.
pub fn approximate_su2(
    target: &Matrix,
    u1: &Matrix,
    u2: &Matrix,
    epsilon: f64,
) -> Result<Approximation, HardnessError> {
    Approximator::new(u1, u2, epsilon, 40, 1 << 17).approximate(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hadamard, rx, rz};

    fn pair() -> (Matrix, Matrix) {
        (rz(2f64.sqrt()), rx(3f64.sqrt()))
    }

    #[test]
    fn trivial_targets() {
        let (a, b) = pair();
        let ap = Approximator::new(&a, &b, 0.05, 40, 1 << 14);
        let id = ap.approximate(&Matrix::identity(2)).unwrap();
        assert!(id.word.is_empty() && id.distance < 1e-12);
        let one = ap.approximate(&a).unwrap();
        assert_eq!(one.word, vec![0]);
        assert!(one.distance < 1e-12);
    }

    #[test]
    fn hadamard_within_tolerance() {
        let (a, b) = pair();
        let r = approximate_su2(&hadamard(), &a, &b, 0.05).unwrap();
        let target = Su2::from_matrix(&project_su2(&hadamard()));
        let ap = Approximator::new(&a, &b, 0.05, 1, 4);
        assert!(ap.product(&r.word).projective_distance(target) < 0.05);
        assert!((r.distance - ap.product(&r.word).projective_distance(target)).abs() < 1e-12);
    }
}
