//! Algebraic message authentication codes.
//!
//! A tag is computed by walking the message through a shared identifier
//! string. Runs of bytes between identifier matches are compressed by a
//! block heuristic, projected stereographically onto a circle and combined
//! with the parallel-chord group law. At each match the identifier's own
//! projection is folded in. The final circle point is projected back onto
//! the line and returned as the tag.
//!
//! ```
//! use amac::{amac_encode, verify, BhfKind, KeyPair};
//!
//! let keys = KeyPair::new("This is the first key.", "theveninester").unwrap();
//! let tag = amac_encode(b"the message", &keys, BhfKind::H2).unwrap();
//! assert!(verify(b"the message", &keys, &tag).unwrap());
//! assert!(!verify(b"the massage", &keys, &tag).unwrap());
//! ```
//!
//! This is a research construction with known weaknesses (H1 tags are
//! invariant under reordering bytes inside a block; see [`forge`]). It is not
//! a substitute for HMAC.

pub mod batch;
pub mod bench;
pub mod circle;
mod error;
pub mod forge;
pub mod heuristics;
pub mod matcher;
pub mod oracle;
pub mod pipeline;
pub mod tag;

pub use circle::{multiply, normalize_angle, project, project_back, Angle, LineCoord};
pub use error::{Error, Result, Step};
pub use heuristics::{bhf1, bhf2, BhfKind, Block, BlockHeuristic, Heuristic};
pub use matcher::RefMatcher;
pub use pipeline::{amac_encode, amac_encode_with, encode_key, verify, verify_with, KeyPair, Mode};
pub use tag::Tag;
