use crate::error::{Error, Result};

/// Ordered-subsequence matcher over the identifier string.
///
/// Bytes are fed one at a time. A byte matches when it equals the identifier
/// byte under the cursor, and the cursor then moves on, wrapping back to the
/// start after the last identifier byte. Any other byte leaves the state
/// untouched, so a byte that failed to match can never be the byte the
/// cursor is waiting for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefMatcher {
    reference: Box<[u8]>,
    cursor: usize,
}

impl RefMatcher {
    /// Errors with [`Error::InvalidIdentifier`] unless `reference` is a
    /// non-empty ASCII byte string.
    pub fn new(reference: &[u8]) -> Result<RefMatcher> {
        if reference.is_empty() {
            return Err(Error::InvalidIdentifier("identifier is empty"));
        }
        if !reference.is_ascii() {
            return Err(Error::InvalidIdentifier("identifier is not ASCII"));
        }
        Ok(RefMatcher {
            reference: reference.into(),
            cursor: 0,
        })
    }

    #[inline]
    pub fn feed(&mut self, byte: u8) -> bool {
        if byte != self.reference[self.cursor] {
            return false;
        }
        self.cursor += 1;
        if self.cursor == self.reference.len() {
            self.cursor = 0;
        }
        true
    }

    pub fn reset(&mut self) {
        self.cursor = 0;
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    /// The identifier byte the next match has to equal.
    pub fn pending(&self) -> u8 {
        self.reference[self.cursor]
    }

    pub fn reference(&self) -> &[u8] {
        &self.reference
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(m: &mut RefMatcher, input: &[u8]) -> Vec<bool> {
        input.iter().map(|&b| m.feed(b)).collect()
    }

    #[test]
    fn construction() {
        assert_eq!(RefMatcher::new(b"ALC").unwrap().cursor(), 0);
        assert_eq!(RefMatcher::new(b"theveninester").unwrap().cursor(), 0);
        assert!(matches!(RefMatcher::new(b""), Err(Error::InvalidIdentifier(_))));
        assert!(matches!(
            RefMatcher::new("caf\u{e9}".as_bytes()),
            Err(Error::InvalidIdentifier(_))
        ));
    }

    #[test]
    fn ordered_matching_wraps() {
        let mut m = RefMatcher::new(b"ALC").unwrap();
        assert_eq!(trace(&mut m, b"APLCA"), [true, false, true, true, true]);
        assert_eq!(m.cursor(), 1);
    }

    #[test]
    fn out_of_order_byte_is_not_matched() {
        let mut m = RefMatcher::new(b"ALC").unwrap();
        assert!(!m.feed(b'L'));
        assert_eq!(m.cursor(), 0);
    }

    #[test]
    fn matching_is_case_sensitive() {
        let mut m = RefMatcher::new(b"ALC").unwrap();
        assert!(!m.feed(b'a'));
        assert!(m.feed(b'A'));
    }

    #[test]
    fn own_bytes_always_match() {
        let id = b"theveninester";
        let mut m = RefMatcher::new(id).unwrap();
        assert!(trace(&mut m, id).into_iter().all(|b| b));
        assert_eq!(m.cursor(), 0);
        assert!(trace(&mut m, id).into_iter().all(|b| b));
    }

    #[test]
    fn reset_restarts() {
        let mut m = RefMatcher::new(b"ALC").unwrap();
        trace(&mut m, b"AL");
        m.reset();
        assert_eq!(m.cursor(), 0);
        m.reset();
        assert_eq!(m.cursor(), 0);
        assert!(m.feed(b'A'));
    }
}
