use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)] // float math comes from libm unless std is linked
use num_traits::Float;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Zipf};

use super::{Builder, Generator, TextCircuit};

#[derive(Clone, Debug, PartialEq)]
pub enum ArityDist {
    /// P(A = a) ∝ (1 − p)^(a − 1) p, truncated at the largest legal arity.
    Geometric { p: f64 },
    /// Unnormalized weights for arities 1, 2, ….
    Weights(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplerParams {
    pub gamma: f64,
    /// Box count is `⌈c3 · k^γ⌉`.
    pub c3: f64,
    /// Vocabulary size is `⌈c1 · √(box count)⌉`.
    pub c1: f64,
    pub zipf_exponent: f64,
    pub arity: ArityDist,
    pub d_max: usize,
}

impl Default for SamplerParams {
    fn default() -> Self {
        SamplerParams {
            gamma: 4.5,
            c3: 1.0,
            c1: 40.0,
            zipf_exponent: 1.0,
            arity: ArityDist::Geometric { p: 0.5 },
            d_max: super::DEFAULT_D_MAX,
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SampleError {
    #[error("k must be positive")]
    ZeroNouns,
    #[error("gamma must exceed 4, got {0}")]
    Gamma(f64),
    #[error("arity distribution gives no weight to arity 2")]
    DegenerateArity,
    #[error("invalid sampler parameter: {0}")]
    Invalid(&'static str),
}

impl SamplerParams {
    pub fn box_count(&self, k: usize) -> usize {
        (self.c3 * (k as f64).powf(self.gamma)).ceil() as usize
    }

    pub fn vocabulary_size(&self, boxes: usize) -> usize {
        ((self.c1 * (boxes as f64).sqrt()).ceil() as usize).max(1)
    }

    /// Arity weights for 1..=min(d_max, k), normalized.
    fn arity_weights(&self, k: usize) -> Result<Vec<f64>, SampleError> {
        let top = self.d_max.min(k).max(1);
        let raw: Vec<f64> = match &self.arity {
            ArityDist::Geometric { p } => {
                if !(*p > 0.0 && *p <= 1.0) {
                    return Err(SampleError::Invalid("geometric p must lie in (0,1]"));
                }
                (0..top).map(|i| (1.0 - p).powi(i as i32) * p).collect()
            }
            ArityDist::Weights(w) => (0..top).map(|i| w.get(i).copied().unwrap_or(0.0)).collect(),
        };
        if raw.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(SampleError::Invalid(
                "arity weights must be finite and non-negative",
            ));
        }
        let total: f64 = raw.iter().sum();
        if total <= 0.0 {
            return Err(SampleError::Invalid("arity weights sum to zero"));
        }
        // arity 2 only exists once there are two wires
        if k >= 2 && raw.get(1).copied().unwrap_or(0.0) <= 0.0 {
            return Err(SampleError::DegenerateArity);
        }
        Ok(raw.iter().map(|w| w / total).collect())
    }
}

/// Random frame-free text circuit on `k` nouns. Nouns are `N1..Nk`, box
/// labels `w<rank>` drawn from a Zipf law over the vocabulary.
pub fn sample_dk(k: usize, params: &SamplerParams, seed: u64) -> Result<TextCircuit, SampleError> {
    if k == 0 {
        return Err(SampleError::ZeroNouns);
    }
    if !(params.gamma > 4.0) {
        return Err(SampleError::Gamma(params.gamma));
    }
    if !(params.c1 > 0.0 && params.c3 > 0.0 && params.zipf_exponent > 0.0) {
        return Err(SampleError::Invalid(
            "c1, c3 and the Zipf exponent must be positive",
        ));
    }
    let weights = params.arity_weights(k)?;
    let boxes = params.box_count(k);
    let vocab = params.vocabulary_size(boxes);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let zipf =
        Zipf::new(vocab as f64, params.zipf_exponent).map_err(|_| SampleError::Invalid("zipf"))?;

    let nouns: Vec<String> = (1..=k).map(|i| format!("N{}", i)).collect();
    let mut b = Builder::new();
    for n in &nouns {
        b.state(n, n).expect("fresh noun");
    }
    for _ in 0..boxes {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut arity = weights.len();
        for (i, w) in weights.iter().enumerate() {
            acc += w;
            if u < acc {
                arity = i + 1;
                break;
            }
        }
        let rank = zipf.sample(&mut rng) as usize;
        let picked = rand::seq::index::sample(&mut rng, k, arity);
        let on: Vec<&str> = picked.iter().map(|i| nouns[i].as_str()).collect();
        b.boxed(&format!("w{}", rank), &on)
            .expect("distinct live nouns");
    }
    Ok(b.finish())
}

/// Fraction of observed box labels that occur exactly once.
pub fn hapax_fraction(c: &TextCircuit) -> f64 {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for n in c.nodes() {
        if let Generator::Box { word, .. } = &n.generator {
            *counts.entry(word).or_insert(0) += 1;
        }
    }
    if counts.is_empty() {
        return 0.0;
    }
    counts.values().filter(|c| **c == 1).count() as f64 / counts.len() as f64
}

#[cfg(test)]
mod tests {
    use super::super::validate;
    use super::*;

    #[test]
    fn single_noun_chain() {
        let p = SamplerParams {
            arity: ArityDist::Weights(alloc::vec![1.0]),
            ..Default::default()
        };
        let c = sample_dk(1, &p, 5).unwrap();
        assert_eq!(c.count_kind("STATE"), 1);
        assert!(c.nodes().iter().all(|n| n.inputs.len() <= 1));
        assert_eq!(c.count_kind("BOX"), 1);
        assert!(validate(&c, 3).is_empty());
    }

    #[test]
    fn deterministic_per_seed() {
        let p = SamplerParams::default();
        assert_eq!(sample_dk(4, &p, 11).unwrap(), sample_dk(4, &p, 11).unwrap());
        assert_ne!(sample_dk(4, &p, 11).unwrap(), sample_dk(4, &p, 12).unwrap());
    }

    #[test]
    fn parameter_errors() {
        let low = SamplerParams {
            gamma: 4.0,
            ..Default::default()
        };
        assert_eq!(sample_dk(3, &low, 0), Err(SampleError::Gamma(4.0)));
        let unary = SamplerParams {
            arity: ArityDist::Weights(alloc::vec![1.0, 0.0]),
            ..Default::default()
        };
        assert_eq!(sample_dk(3, &unary, 0), Err(SampleError::DegenerateArity));
    }
}
