//! Many independent encodes or checks at once.
//!
//! Every encode owns its state, so batches split across threads with no
//! coordination. With the `parallel` feature (on by default) work is spread
//! over rayon's pool; without it, or with [`Execution::Sequential`], it runs
//! on the calling thread in input order. Both produce identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circle::{multiply, normalize_angle, project, Angle, LineCoord};
use crate::error::Result;
use crate::heuristics::BhfKind;
use crate::oracle::{geometric_multiply, geometric_project};
use crate::pipeline::{amac_encode, KeyPair};
use crate::tag::Tag;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// Order-preserving map over `items` under the chosen execution.
pub fn map_items<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
    }
}

pub fn encode_batch<M>(msgs: &[M], keys: &KeyPair, kind: BhfKind, exec: Execution) -> Vec<Result<Tag>>
where
    M: AsRef<[u8]> + Sync,
{
    map_items(msgs, exec, |m| amac_encode(m.as_ref(), keys, kind))
}

/// Replace the byte at `offset` with `byte`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Substitution {
    pub offset: usize,
    pub byte: u8,
}

impl Substitution {
    pub fn apply(&self, msg: &[u8]) -> Vec<u8> {
        let mut out = msg.to_vec();
        out[self.offset] = self.byte;
        out
    }
}

/// `count` random single-byte substitutions into printable ASCII, each
/// guaranteed to change the byte it replaces.
pub fn random_substitutions(msg: &[u8], count: usize, seed: u64) -> Vec<Substitution> {
    assert!(!msg.is_empty(), "cannot substitute into an empty message");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let offset = rng.gen_range(0..msg.len());
            let byte = loop {
                let b = rng.gen_range(0x20u8..0x7f);
                if b != msg[offset] {
                    break b;
                }
            };
            Substitution { offset, byte }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct AvalancheOutcome {
    pub edit: Substitution,
    pub tag: Result<Tag>,
}

impl AvalancheOutcome {
    /// Absolute change in tag value, if the edited message encoded.
    pub fn delta(&self, base: &Tag) -> Option<f64> {
        self.tag
            .as_ref()
            .ok()
            .map(|t| (t.value.value() - base.value.value()).abs())
    }

    pub fn differs_bitwise(&self, base: &Tag) -> bool {
        match &self.tag {
            Ok(t) => t.value.value().to_bits() != base.value.value().to_bits(),
            Err(_) => true,
        }
    }
}

pub fn avalanche(
    msg: &[u8],
    keys: &KeyPair,
    kind: BhfKind,
    edits: &[Substitution],
    exec: Execution,
) -> Vec<AvalancheOutcome> {
    map_items(edits, exec, |edit| AvalancheOutcome {
        edit: *edit,
        tag: amac_encode(&edit.apply(msg), keys, kind),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductCase {
    pub a: Angle,
    pub b: Angle,
    pub o: Angle,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectionCase {
    pub x: LineCoord,
    pub pole: Angle,
}

/// Poles are kept at least `margin` radians from the tangent point.
pub fn random_projection_cases(n: usize, x_range: f64, margin: f64, seed: u64) -> Vec<ProjectionCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| ProjectionCase {
            x: LineCoord::new(rng.gen_range(-x_range..=x_range)).expect("finite"),
            pole: normalize_angle(rng.gen_range(margin..std::f64::consts::TAU - margin)).expect("finite"),
        })
        .collect()
}

pub fn random_product_cases(n: usize, seed: u64) -> Vec<ProductCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut angle = || normalize_angle(rng.gen_range(0.0..std::f64::consts::TAU)).expect("finite");
    (0..n)
        .map(|_| ProductCase {
            a: angle(),
            b: angle(),
            o: angle(),
        })
        .collect()
}

/// Largest angular gap between [`multiply`] and the parallel-chord
/// construction over `cases`.
pub fn max_product_deviation(cases: &[ProductCase], exec: Execution) -> f64 {
    map_items(cases, exec, |c| {
        multiply(c.a, c.b, c.o).distance(geometric_multiply(c.a, c.b, c.o))
    })
    .into_iter()
    .fold(0.0, f64::max)
}

/// Largest angular gap between [`project`] and the line–circle construction.
pub fn max_projection_deviation(cases: &[ProjectionCase], exec: Execution) -> Result<f64> {
    let gaps = map_items(cases, exec, |c| -> Result<f64> {
        Ok(project(c.x, c.pole)?.distance(geometric_project(c.x, c.pole)?))
    });
    gaps.into_iter()
        .try_fold(0.0, |worst, gap| Ok(f64::max(worst, gap?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitutions_change_their_byte() {
        let msg = b"aaaaaaaaaa";
        for s in random_substitutions(msg, 200, 7) {
            assert!(s.offset < msg.len());
            assert_ne!(s.byte, b'a');
            assert!((0x20..0x7f).contains(&s.byte));
        }
    }

    #[test]
    fn sequential_and_default_agree() {
        let keys = KeyPair::new("key", "ace").unwrap();
        let msgs: Vec<Vec<u8>> = (0..40).map(|i| format!("message {i} of a batch").into_bytes()).collect();
        let seq = encode_batch(&msgs, &keys, BhfKind::H1, Execution::Sequential);
        let def = encode_batch(&msgs, &keys, BhfKind::H1, Execution::default());
        assert_eq!(seq, def);
    }

    #[test]
    fn oracle_sweeps_are_small() {
        let cases = random_product_cases(500, 1);
        assert!(max_product_deviation(&cases, Execution::default()) < 1e-9);
        let cases = random_projection_cases(500, 100.0, 0.1, 2);
        assert!(max_projection_deviation(&cases, Execution::default()).unwrap() < 1e-9);
    }
}
