//! Block heuristic functions: folds that compress a run of unmatched bytes
//! (plus the chained value from the previous flush) into one real number.

use std::fmt;
use std::str::FromStr;

use crate::circle::{multiply, project, Angle, LineCoord};
use crate::error::{Error, Result};

/// Default starting multiplier for [`bhf2`].
pub const DEFAULT_H2_BASE: u32 = 10;

/// The chained value from the previous flush followed by the bytes that
/// accumulated since.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Block {
    pub chain: f64,
    pub codes: Vec<u8>,
}

impl Block {
    pub fn new(chain: f64) -> Block {
        Block {
            chain,
            codes: Vec::new(),
        }
    }

    pub fn with_codes(chain: f64, codes: &[u8]) -> Block {
        Block {
            chain,
            codes: codes.to_vec(),
        }
    }

    pub fn push(&mut self, byte: u8) {
        self.codes.push(byte);
    }
}

/// A fold from a [`Block`] to a real number, evaluated with the current
/// reference point as group identity and projection pole.
pub trait BlockHeuristic {
    fn fold(&self, block: &Block, cref: Angle) -> Result<f64> {
        self.fold_counted(block, cref, &mut OpCount::default())
    }

    /// As [`fold`](Self::fold), recording circle operations in `ops`.
    fn fold_counted(&self, block: &Block, cref: Angle, ops: &mut OpCount) -> Result<f64>;
}

/// Tally of closed-form circle operations performed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCount {
    pub projections: usize,
    pub products: usize,
}

impl OpCount {
    pub fn total(&self) -> usize {
        self.projections + self.products
    }
}

/// Product of the projections of every block value in the circle group.
///
/// The bytes are folded in ascending order. Any permutation of the block's
/// bytes therefore returns the same bits, not merely the same group element.
pub fn bhf1(block: &Block, cref: Angle) -> Result<f64> {
    bhf1_counted(block, cref, &mut OpCount::default())
}

fn bhf1_counted(block: &Block, cref: Angle, ops: &mut OpCount) -> Result<f64> {
    let mut sorted = block.codes.clone();
    sorted.sort_unstable();
    let mut acc = Angle::ZERO;
    let values = std::iter::once(block.chain).chain(sorted.into_iter().map(f64::from));
    for v in values {
        let point = project(LineCoord::new(v)?, cref)?;
        acc = multiply(acc, point, cref);
        ops.projections += 1;
        ops.products += 1;
    }
    Ok(acc.radians())
}

/// Horner-style accumulation with a multiplier that grows by one per value,
/// starting from `base`. May return ±∞ for long blocks.
pub fn bhf2(block: &Block, base: u32) -> f64 {
    let mut multiplier = f64::from(base);
    let mut acc = 0.0;
    for v in std::iter::once(block.chain).chain(block.codes.iter().map(|&c| f64::from(c))) {
        acc = acc * multiplier + v;
        multiplier += 1.0;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Heuristic {
    H1,
    H2,
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Heuristic::H1 => "h1",
            Heuristic::H2 => "h2",
        })
    }
}

impl FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Heuristic> {
        match s {
            "h1" | "H1" => Ok(Heuristic::H1),
            "h2" | "H2" => Ok(Heuristic::H2),
            _ => Err(Error::InvalidHeuristic("expected h1 or h2")),
        }
    }
}

/// A heuristic choice plus the [`bhf2`] starting multiplier, which travels
/// with the tag even when H1 is selected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BhfKind {
    heuristic: Heuristic,
    h2_base: u32,
}

impl BhfKind {
    pub const H1: BhfKind = BhfKind {
        heuristic: Heuristic::H1,
        h2_base: DEFAULT_H2_BASE,
    };
    pub const H2: BhfKind = BhfKind {
        heuristic: Heuristic::H2,
        h2_base: DEFAULT_H2_BASE,
    };

    pub fn new(heuristic: Heuristic, h2_base: u32) -> Result<BhfKind> {
        if h2_base < 2 {
            return Err(Error::InvalidHeuristic("h2 base must be at least 2"));
        }
        Ok(BhfKind { heuristic, h2_base })
    }

    pub fn heuristic(&self) -> Heuristic {
        self.heuristic
    }

    pub fn h2_base(&self) -> u32 {
        self.h2_base
    }
}

impl BlockHeuristic for BhfKind {
    fn fold_counted(&self, block: &Block, cref: Angle, ops: &mut OpCount) -> Result<f64> {
        match self.heuristic {
            Heuristic::H1 => bhf1_counted(block, cref, ops),
            Heuristic::H2 => Ok(bhf2(block, self.h2_base)),
        }
    }
}
