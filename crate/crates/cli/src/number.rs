//! Exact number literals.
//!
//! ```text
//! magnitude := digits ('/' digits)?
//! rational  := sign? magnitude
//! complex   := rational
//!            | sign? magnitude? 'i'
//!            | rational ('+' | '-') magnitude? 'i'
//! ```
//!
//! `sign` is `-` or the Unicode minus `−`. Examples: `3`, `-1/2`, `i`,
//! `-i`, `2/3i`, `1+2i`, `1/2-i`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use topos_core::quantum::{GaussianRational, Rational};

/// Error with a character offset into the literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberError {
    pub offset: usize,
    pub message: String,
}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T, NumberError> {
    Err(NumberError {
        offset,
        message: message.into(),
    })
}

fn normalize(s: &str) -> Vec<char> {
    s.chars().map(|c| if c == '−' { '-' } else { c }).collect()
}

fn digits(cs: &[char], at: usize) -> Result<(BigInt, usize), NumberError> {
    let end = cs[at..]
        .iter()
        .position(|c| !c.is_ascii_digit())
        .map_or(cs.len(), |p| at + p);
    if end == at {
        return err(at, "expected digits");
    }
    let s: String = cs[at..end].iter().collect();
    Ok((s.parse().expect("ascii digits"), end))
}

/// Unsigned `digits ('/' digits)?` starting at `at`.
fn unsigned_rational(cs: &[char], at: usize) -> Result<(Rational, usize), NumberError> {
    let (num, mut pos) = digits(cs, at)?;
    let mut den = BigInt::one();
    if cs.get(pos) == Some(&'/') {
        let (d, next) = digits(cs, pos + 1)?;
        if d.is_zero() {
            return err(pos + 1, "zero denominator");
        }
        den = d;
        pos = next;
    }
    Ok((Rational::new(num, den), pos))
}

pub fn parse_rational(s: &str) -> Result<Rational, NumberError> {
    let cs = normalize(s);
    let (neg, start) = match cs.first() {
        Some('-') => (true, 1),
        _ => (false, 0),
    };
    let (r, end) = unsigned_rational(&cs, start)?;
    if end != cs.len() {
        return err(end, format!("unexpected `{}`", cs[end]));
    }
    Ok(if neg { -r } else { r })
}

pub fn parse_complex(s: &str) -> Result<GaussianRational, NumberError> {
    let cs = normalize(s);
    if cs.is_empty() {
        return err(0, "empty number");
    }
    // optional leading sign, then an optional magnitude, then maybe 'i'
    let (s1, mut pos) = match cs[0] {
        '-' => (-1, 1),
        _ => (1, 0),
    };
    let first = if cs.get(pos).is_some_and(char::is_ascii_digit) {
        let (r, next) = unsigned_rational(&cs, pos)?;
        pos = next;
        Some(r)
    } else {
        None
    };
    let signed = |s: i32, r: Rational| if s < 0 { -r } else { r };
    match cs.get(pos) {
        None => match first {
            Some(r) => Ok(GaussianRational::real(signed(s1, r))),
            None => err(pos, "expected digits"),
        },
        Some('i') if pos + 1 == cs.len() => {
            let im = signed(s1, first.unwrap_or_else(Rational::one));
            Ok(GaussianRational::new(Rational::zero(), im))
        }
        Some('+') | Some('-') => {
            let Some(re) = first else {
                return err(pos, "expected digits");
            };
            let s2 = if cs[pos] == '-' { -1 } else { 1 };
            pos += 1;
            let im = if cs.get(pos).is_some_and(char::is_ascii_digit) {
                let (r, next) = unsigned_rational(&cs, pos)?;
                pos = next;
                r
            } else {
                Rational::one()
            };
            if cs.get(pos) != Some(&'i') {
                return err(pos, "expected `i` after imaginary part");
            }
            if pos + 1 != cs.len() {
                return err(pos + 1, format!("unexpected `{}`", cs[pos + 1]));
            }
            Ok(GaussianRational::new(signed(s1, re), signed(s2, im)))
        }
        Some(c) => err(pos, format!("unexpected `{c}`")),
    }
}
