//! Permutation forgeries against the commutative heuristic.
//!
//! A byte lands in a block only when it differs from the identifier byte the
//! matcher is waiting for, and the wait does not change until a match. So
//! any reordering of a block's bytes passes through the matcher the same
//! way, and H1 folds those bytes with a commutative product. The tag is
//! unchanged.

use std::ops::Range;

use crate::error::Result;
use crate::matcher::RefMatcher;

/// Byte ranges of the maximal runs of unmatched bytes in `msg`, including a
/// trailing run after the last match.
pub fn block_spans(msg: &[u8], identifier: &[u8]) -> Result<Vec<Range<usize>>> {
    let mut matcher = RefMatcher::new(identifier)?;
    let mut spans = Vec::new();
    let mut start = 0;
    for (i, &b) in msg.iter().enumerate() {
        if matcher.feed(b) {
            if i > start {
                spans.push(start..i);
            }
            start = i + 1;
        }
    }
    if msg.len() > start {
        spans.push(start..msg.len());
    }
    Ok(spans)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forgery {
    pub original: Vec<u8>,
    pub forged: Vec<u8>,
    /// The block whose bytes were reordered.
    pub block: Range<usize>,
    /// The two offsets that were exchanged.
    pub swapped: (usize, usize),
}

/// Swap two distinct bytes inside the shortest block that has any.
///
/// Short blocks keep the H2 accumulator far from saturation, so the pair
/// also shows that H2 tells the two messages apart.
pub fn permute_within_block(msg: &[u8], identifier: &[u8]) -> Result<Option<Forgery>> {
    let candidate = block_spans(msg, identifier)?
        .into_iter()
        .filter_map(|span| {
            let first = msg[span.clone()][0];
            let other = msg[span.clone()].iter().position(|&b| b != first)?;
            Some((span.len(), span.start, span.start + other, span))
        })
        .min_by_key(|&(len, start, _, _)| (len, start));
    Ok(candidate.map(|(_, i, j, span)| {
        let mut forged = msg.to_vec();
        forged.swap(i, j);
        Forgery {
            original: msg.to_vec(),
            forged,
            block: span,
            swapped: (i, j),
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans_split_at_matches() {
        assert_eq!(block_spans(b"xAyyLCz", b"ALC").unwrap(), vec![0..1, 2..4, 6..7]);
        assert_eq!(block_spans(b"ALC", b"ALC").unwrap(), Vec::<Range<usize>>::new());
        assert_eq!(block_spans(b"", b"ALC").unwrap(), Vec::<Range<usize>>::new());
    }

    #[test]
    fn picks_shortest_block_with_distinct_bytes() {
        let f = permute_within_block(b"xxxxAabcdLqrC", b"ALC").unwrap().unwrap();
        assert_eq!(f.block, 10..12);
        assert_eq!(f.forged, b"xxxxAabcdLrqC");
    }

    #[test]
    fn permuted_bytes_keep_the_match_pattern() {
        let msg = b"the theory of everything in the seventh chapter".to_vec();
        let f = permute_within_block(&msg, b"theveninester").unwrap().unwrap();
        assert_ne!(f.original, f.forged);
        assert_eq!(
            block_spans(&f.original, b"theveninester").unwrap(),
            block_spans(&f.forged, b"theveninester").unwrap()
        );
    }

    #[test]
    fn no_candidate() {
        assert_eq!(permute_within_block(b"AL", b"ALC").unwrap(), None);
        assert_eq!(permute_within_block(b"zzAzzz", b"ALC").unwrap(), None);
    }
}
