//! Authentication tags and their one-line text form:
//!
//! ```text
//! AMAC1;<h1|h2>;<h2_base>;<hex float>
//! ```
//!
//! The value is written as a C99-style hexadecimal float literal
//! (`-0x1.aef3p-4`), which reproduces the binary64 bits exactly.

use std::fmt;
use std::str::FromStr;

use crate::circle::LineCoord;
use crate::error::{Error, Result};
use crate::heuristics::{BhfKind, Heuristic};

const MAGIC: &str = "AMAC1";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tag {
    pub value: LineCoord,
    pub kind: BhfKind,
}

impl Tag {
    pub fn new(value: LineCoord, kind: BhfKind) -> Tag {
        Tag { value, kind }
    }

    /// The canonical text line; two tags are the same iff these are equal.
    pub fn serialize(&self) -> String {
        format!(
            "{MAGIC};{};{};{}",
            self.kind.heuristic(),
            self.kind.h2_base(),
            format_hex_f64(self.value.value())
        )
    }

    pub fn parse(text: &str) -> Result<Tag> {
        let text = text.trim();
        let mut fields = text.split(';');
        let (Some(magic), Some(heur), Some(base), Some(value), None) = (
            fields.next(),
            fields.next(),
            fields.next(),
            fields.next(),
            fields.next(),
        ) else {
            return Err(Error::Parse(format!("expected 4 ';'-separated fields in {text:?}")));
        };
        if magic != MAGIC {
            return Err(Error::Parse(format!("unknown tag version {magic:?}")));
        }
        let heuristic = match heur {
            "h1" => Heuristic::H1,
            "h2" => Heuristic::H2,
            _ => return Err(Error::Parse(format!("unknown heuristic {heur:?}"))),
        };
        let base: u32 = base
            .parse()
            .map_err(|_| Error::Parse(format!("bad h2 base {base:?}")))?;
        let kind = BhfKind::new(heuristic, base).map_err(|e| Error::Parse(e.to_string()))?;
        let value = parse_hex_f64(value)?;
        let value = LineCoord::new(value).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(Tag { value, kind })
    }

    /// The value as a plain decimal with at most 17 significant digits.
    pub fn display_value(&self) -> String {
        format_decimal_17(self.value.value())
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

impl FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Tag> {
        Tag::parse(s)
    }
}

const FRAC_BITS: u32 = 52;
const FRAC_MASK: u64 = (1 << FRAC_BITS) - 1;
const EXP_BIAS: i32 = 1023;

/// Shortest exact hexadecimal form of a finite `f64`.
pub fn format_hex_f64(v: f64) -> String {
    assert!(v.is_finite(), "hex encoding of non-finite value");
    let bits = v.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let biased = ((bits >> FRAC_BITS) & 0x7ff) as i32;
    let frac = bits & FRAC_MASK;
    if biased == 0 && frac == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if biased == 0 {
        (0, 1 - EXP_BIAS)
    } else {
        (1, biased - EXP_BIAS)
    };
    let digits = format!("{frac:013x}");
    let digits = digits.trim_end_matches('0');
    if digits.is_empty() {
        format!("{sign}0x{lead}p{exp:+}")
    } else {
        format!("{sign}0x{lead}.{digits}p{exp:+}")
    }
}

/// Inverse of [`format_hex_f64`]. Only the canonical layout it emits is
/// accepted (leading digit 0 or 1, at most 13 fraction digits), so every
/// accepted string maps to exactly one `f64` with no rounding.
pub fn parse_hex_f64(s: &str) -> Result<f64> {
    let bad = || Error::Parse(format!("bad hex float {s:?}"));
    let (neg, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    let rest = rest.strip_prefix("0x").ok_or_else(bad)?;
    let (mantissa, exp) = rest.split_once('p').ok_or_else(bad)?;
    let exp: i32 = exp.parse().map_err(|_| bad())?;
    let (lead, frac_digits) = match mantissa.split_once('.') {
        Some((l, f)) if !f.is_empty() => (l, f),
        Some(_) => return Err(bad()),
        None => (mantissa, ""),
    };
    if frac_digits.len() > 13 || !frac_digits.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(bad());
    }
    let frac = if frac_digits.is_empty() {
        0
    } else {
        u64::from_str_radix(frac_digits, 16).map_err(|_| bad())? << (4 * (13 - frac_digits.len()))
    };
    let magnitude = match lead {
        "1" => {
            if !(1 - EXP_BIAS..=EXP_BIAS).contains(&exp) {
                return Err(bad());
            }
            (((exp + EXP_BIAS) as u64) << FRAC_BITS) | frac
        }
        "0" if frac == 0 => 0,
        "0" if exp == 1 - EXP_BIAS => frac,
        _ => return Err(bad()),
    };
    let sign = if neg { 1u64 << 63 } else { 0 };
    Ok(f64::from_bits(sign | magnitude))
}

/// Positional decimal with 17 significant digits, trailing zeros trimmed;
/// falls back to scientific notation far from 1.
pub fn format_decimal_17(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-6..17).contains(&exp) {
        return sci;
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let mut out = String::from(sign);
    if exp < 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
        out.push_str(&digits);
    } else {
        let split = exp as usize + 1;
        out.push_str(&digits[..split]);
        out.push('.');
        out.push_str(&digits[split..]);
    }
    let trimmed = out.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}
