//! The encode loop: fold the primary key into the tag, walk the message
//! through the identifier matcher, compress every block of unmatched bytes
//! with a block heuristic, and embed the identifier's projection at each
//! match. After every flush the group identity moves to `π − tag`, so each
//! block is folded relative to everything that came before it.

use crate::circle::{multiply, normalize_angle, project, project_back, Angle, LineCoord};
use crate::error::{Error, Result, Step};
use crate::heuristics::{BhfKind, Block, BlockHeuristic, OpCount};
use crate::matcher::RefMatcher;
use crate::tag::Tag;

/// The shared secret: a primary key plus the identifier string whose
/// characters delimit blocks.
#[derive(Clone, PartialEq, Eq)]
pub struct KeyPair {
    primary_key: Vec<u8>,
    identifier: Vec<u8>,
}

impl KeyPair {
    pub fn new(primary_key: impl Into<Vec<u8>>, identifier: impl Into<Vec<u8>>) -> Result<KeyPair> {
        let primary_key = primary_key.into();
        let identifier = identifier.into();
        if primary_key.is_empty() {
            return Err(Error::InvalidKey("primary key is empty"));
        }
        // Validates the identifier the same way the encoder will use it.
        RefMatcher::new(&identifier)?;
        Ok(KeyPair {
            primary_key,
            identifier,
        })
    }

    pub fn primary_key(&self) -> &[u8] {
        &self.primary_key
    }

    pub fn identifier(&self) -> &[u8] {
        &self.identifier
    }
}

impl std::fmt::Debug for KeyPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KeyPair").finish_non_exhaustive()
    }
}

/// Which reading of the published loop to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    /// Moves the reference point after the primary key is folded in, and
    /// flushes bytes that follow the last identifier match.
    #[default]
    Amended,
    /// The loop exactly as printed. The reference point stays at `π` until
    /// the first flush, which then overwrites the key-dependent tag, and
    /// trailing bytes never reach the tag.
    Literal,
}

/// Byte-sum encoding of a key string.
pub fn encode_key(s: &[u8]) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::InvalidKey("key is empty"));
    }
    Ok(s.iter().map(|&b| f64::from(b)).sum())
}

/// What a single encode did, for cost accounting.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EncodeStats {
    pub bytes: usize,
    pub matches: usize,
    pub flushes: usize,
    pub ops: OpCount,
}

struct State {
    tag: Angle,
    cref: Angle,
    block: Block,
}

fn move_reference(tag: Angle) -> Angle {
    normalize_angle(std::f64::consts::PI - tag.radians()).expect("finite angle")
}

fn flush(
    state: &mut State,
    ckey: Angle,
    heuristic: &dyn BlockHeuristic,
    stats: &mut EncodeStats,
) -> Result<()> {
    let folded = heuristic.fold_counted(&state.block, state.cref, &mut stats.ops)?;
    if !folded.is_finite() {
        return Err(Error::BlockOverflow {
            len: state.block.codes.len(),
        });
    }
    let chain = project(LineCoord::new(folded)?, state.cref)?;
    state.tag = multiply(ckey, chain, state.cref);
    state.cref = move_reference(state.tag);
    state.block.chain = chain.radians();
    state.block.codes.clear();
    stats.ops.projections += 1;
    stats.ops.products += 1;
    stats.flushes += 1;
    Ok(())
}

/// Runs the encode loop with any block heuristic and returns the final line
/// coordinate along with operation counts.
pub fn encode_with_stats(
    msg: &[u8],
    keys: &KeyPair,
    heuristic: &dyn BlockHeuristic,
    mode: Mode,
) -> Result<(LineCoord, EncodeStats)> {
    let mut stats = EncodeStats {
        bytes: msg.len(),
        ..EncodeStats::default()
    };
    let mut matcher = RefMatcher::new(&keys.identifier)?;

    let setup = || -> Result<(Angle, Angle)> {
        let key_k = project(LineCoord::new(encode_key(&keys.primary_key)?)?, Angle::HALF_TURN)?;
        let ckey = project(LineCoord::new(encode_key(&keys.identifier)?)?, Angle::HALF_TURN)?;
        Ok((ckey, multiply(Angle::ZERO, key_k, Angle::HALF_TURN)))
    };
    let (ckey, tag) = setup().map_err(|e| e.at(Step::KeySetup))?;
    stats.ops.projections += 2;
    stats.ops.products += 1;

    let cref = match mode {
        Mode::Amended => move_reference(tag),
        Mode::Literal => Angle::HALF_TURN,
    };
    let mut state = State {
        tag,
        cref,
        block: Block::new(0.0),
    };

    for (offset, &byte) in msg.iter().enumerate() {
        if matcher.feed(byte) {
            stats.matches += 1;
            flush(&mut state, ckey, heuristic, &mut stats)
                .map_err(|e| e.at(Step::BlockFlush { offset }))?;
        } else {
            state.block.push(byte);
        }
    }

    if mode == Mode::Amended && !state.block.codes.is_empty() {
        flush(&mut state, ckey, heuristic, &mut stats).map_err(|e| e.at(Step::TrailingFlush))?;
    }

    // Nothing in the product can fail; the reference point is checked when
    // the next projection uses it, so only the final one needs attention.
    crate::circle::check_pole(state.cref).map_err(|e| e.at(Step::Finalize))?;
    let tag = multiply(state.tag, ckey, state.cref);
    stats.ops.products += 1;

    let value = project_back(tag, Angle::HALF_TURN).map_err(|e| e.at(Step::BackProjection))?;
    stats.ops.projections += 1;
    Ok((value, stats))
}

pub fn amac_encode_with(msg: &[u8], keys: &KeyPair, kind: BhfKind, mode: Mode) -> Result<Tag> {
    let (value, _) = encode_with_stats(msg, keys, &kind, mode)?;
    Ok(Tag::new(value, kind))
}

/// Computes the tag of `msg` under `keys`.
pub fn amac_encode(msg: &[u8], keys: &KeyPair, kind: BhfKind) -> Result<Tag> {
    amac_encode_with(msg, keys, kind, Mode::Amended)
}

pub fn verify_with(msg: &[u8], keys: &KeyPair, expected: &Tag, mode: Mode) -> Result<bool> {
    let actual = amac_encode_with(msg, keys, expected.kind, mode)?;
    Ok(actual.serialize() == expected.serialize())
}

/// Recomputes the tag with the heuristic recorded in `expected` and compares
/// the canonical encodings.
///
/// An encode that hits a degenerate state returns the error rather than
/// `false`; callers treat it as a failed verification.
pub fn verify(msg: &[u8], keys: &KeyPair, expected: &Tag) -> Result<bool> {
    verify_with(msg, keys, expected, Mode::Amended)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn keys() -> KeyPair {
        KeyPair::new("AB", "C").unwrap()
    }

    #[test]
    fn key_encoding() {
        assert_eq!(encode_key(b"AB").unwrap(), 131.0);
        assert_eq!(encode_key(b"A").unwrap(), 65.0);
        assert!(matches!(encode_key(b""), Err(Error::InvalidKey(_))));
    }

    #[test]
    fn key_pair_validation() {
        assert!(matches!(KeyPair::new("", "ALC"), Err(Error::InvalidKey(_))));
        assert!(matches!(KeyPair::new("k", ""), Err(Error::InvalidIdentifier(_))));
        assert!(matches!(
            KeyPair::new("k", vec![0xff]),
            Err(Error::InvalidIdentifier(_))
        ));
    }

    #[test]
    fn empty_message_follows_zero_iteration_trace() {
        let k = keys();
        let pi = Angle::HALF_TURN;
        let key_k = project(LineCoord::new(131.0).unwrap(), pi).unwrap();
        let ckey = project(LineCoord::new(67.0).unwrap(), pi).unwrap();
        let tag = multiply(Angle::ZERO, key_k, pi);
        let cref = normalize_angle(PI - tag.radians()).unwrap();
        let expected = project_back(multiply(tag, ckey, cref), pi).unwrap();
        for kind in [BhfKind::H1, BhfKind::H2] {
            assert_eq!(amac_encode(b"", &k, kind).unwrap().value, expected);
        }
    }

    #[test]
    fn single_match_trace() {
        // "xC": block [x] flushed at the match, nothing trails.
        let k = keys();
        let pi = Angle::HALF_TURN;
        let key_k = project(LineCoord::new(131.0).unwrap(), pi).unwrap();
        let ckey = project(LineCoord::new(67.0).unwrap(), pi).unwrap();
        let tag0 = multiply(Angle::ZERO, key_k, pi);
        let cref0 = normalize_angle(PI - tag0.radians()).unwrap();
        let folded = 0.0 * 10.0 + 0.0;
        let folded = folded * 11.0 + f64::from(b'x');
        let chain = project(LineCoord::new(folded).unwrap(), cref0).unwrap();
        let tag1 = multiply(ckey, chain, cref0);
        let cref1 = normalize_angle(PI - tag1.radians()).unwrap();
        let expected = project_back(multiply(tag1, ckey, cref1), pi).unwrap();
        assert_eq!(amac_encode(b"xC", &k, BhfKind::H2).unwrap().value, expected);
    }

    #[test]
    fn literal_mode_drops_primary_key_once_a_match_occurs() {
        let a = KeyPair::new("first key", "C").unwrap();
        let b = KeyPair::new("other key", "C").unwrap();
        let lit = |k| amac_encode_with(b"xyCz", k, BhfKind::H1, Mode::Literal).unwrap();
        assert_eq!(lit(&a), lit(&b));
        // ...and ignores bytes after the last match.
        let t1 = amac_encode_with(b"xyCz", &a, BhfKind::H1, Mode::Literal).unwrap();
        let t2 = amac_encode_with(b"xyCq", &a, BhfKind::H1, Mode::Literal).unwrap();
        assert_eq!(t1, t2);
        let am = |k| amac_encode(b"xyCz", k, BhfKind::H1).unwrap();
        assert_ne!(am(&a), am(&b));
        assert_ne!(
            amac_encode(b"xyCz", &a, BhfKind::H1).unwrap(),
            amac_encode(b"xyCq", &a, BhfKind::H1).unwrap()
        );
    }

    #[test]
    fn trailing_bytes_change_the_tag() {
        let k = keys();
        let base = amac_encode(b"abCde", &k, BhfKind::H2).unwrap();
        let other = amac_encode(b"abCdf", &k, BhfKind::H2).unwrap();
        assert_ne!(base, other);
    }

    #[test]
    fn overflow_is_reported_with_step() {
        let k = KeyPair::new("key", "Z").unwrap();
        let msg = vec![b'a'; 400];
        let err = amac_encode(&msg, &k, BhfKind::H2).unwrap_err();
        assert_eq!(err.step(), Some(Step::TrailingFlush));
        assert!(matches!(err.root(), Error::BlockOverflow { len: 400 }));
        assert!(err.is_degenerate());
        // H1 has no such limit.
        assert!(amac_encode(&msg, &k, BhfKind::H1).is_ok());
    }

    #[test]
    fn verify_round_trip() {
        let k = keys();
        let msg = b"aC CCb1C2xC3yCz";
        for kind in [BhfKind::H1, BhfKind::H2] {
            let t = amac_encode(msg, &k, kind).unwrap();
            assert!(verify(msg, &k, &t).unwrap());
            for (i, _) in msg.iter().enumerate() {
                let mut edited = msg.to_vec();
                edited[i] = b'#';
                assert!(!verify(&edited, &k, &t).unwrap(), "{kind:?} edit at {i}");
            }
            let wrong = KeyPair::new("AB", "D").unwrap();
            assert!(!verify(msg, &wrong, &t).unwrap());
            let other_key = KeyPair::new("AC", "C").unwrap();
            assert!(!verify(msg, &other_key, &t).unwrap());
        }
    }

    #[test]
    fn h2_loses_late_bytes_of_long_blocks() {
        // The H2 accumulator for an 8-value block is ~1e10; one unit in the
        // last byte moves its projection by less than an ulp.
        let k = keys();
        let a = amac_encode(b"xCs in it", &k, BhfKind::H2).unwrap();
        let b = amac_encode(b"xCs in iT", &k, BhfKind::H2).unwrap();
        assert_eq!(a, b);
        let a = amac_encode(b"xCs in it", &k, BhfKind::H1).unwrap();
        let b = amac_encode(b"xCs in iT", &k, BhfKind::H1).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn op_count_is_linear() {
        let k = KeyPair::new("key", "the").unwrap();
        let msg = b"the quick brown fox jumps over the lazy dog then heads home";
        let (_, stats) = encode_with_stats(msg, &k, &BhfKind::H1, Mode::Amended).unwrap();
        assert!(stats.matches > 0);
        assert!(stats.ops.total() <= 2 * msg.len() + 4 * stats.matches + 8);
    }
}
