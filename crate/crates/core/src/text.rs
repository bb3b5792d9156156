//! Text form shared by every linear combination in the crate:
//! `coef*label + coef*label - ...`.
//!
//! The coefficient is omitted when it is `±1`, written inline when it is a
//! single integer-coefficient monomial, and parenthesized otherwise, e.g.
//! `-2*mu1*e[0,0] + ((mu1^3-mu1)/12)*c`. Labels never contain a top-level
//! `*`, `+` or `-`, so a term splits at its last top-level `*`.

use std::fmt;

use crate::scalars::{Scalar, ScalarError};

pub(crate) fn write_combination<'a, L: fmt::Display + 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (L, &'a Scalar)>,
) -> fmt::Result {
    let mut first = true;
    for (label, c) in terms {
        let plain = c.denominator_forms().is_empty() && c.denominator_content().is_one() && c.rational_numerator().len() == 1;
        let text = if c.is_one() {
            label.to_string()
        } else if (-c).is_one() {
            format!("-{label}")
        } else if plain {
            format!("{c}*{label}")
        } else {
            format!("({c})*{label}")
        };
        if first {
            f.write_str(&text)?;
        } else if let Some(rest) = text.strip_prefix('-') {
            write!(f, " - {rest}")?;
        } else {
            write!(f, " + {text}")?;
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// Parses a combination; duplicate labels are returned as separate terms.
pub(crate) fn parse_combination<K, E: From<ScalarError>>(
    s: &str,
    parse_label: impl Fn(&str) -> Result<K, E>,
    parse_err: impl Fn(String) -> E,
) -> Result<Vec<(K, Scalar)>, E> {
    if s.trim() == "0" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (neg, term) in split_top_level_terms(s) {
        if term.is_empty() {
            return Err(parse_err(format!("empty term in `{s}`")));
        }
        let (coef, label) = split_last_factor(&term);
        let label = parse_label(label)?;
        let mut c = match coef {
            Some(c) => c.parse::<Scalar>()?,
            None => Scalar::one(),
        };
        if neg {
            c = -c;
        }
        out.push((label, c));
    }
    Ok(out)
}

/// Splits `s` at top-level binary `+`/`-`, keeping the sign with each piece.
fn split_top_level_terms(s: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    let mut prev_sig: Option<char> = None;
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        let binary = matches!(prev_sig, Some(p) if !"*/^(+-".contains(p));
        if depth == 0 && (ch == '+' || ch == '-') && (binary || prev_sig.is_none()) {
            if prev_sig.is_some() {
                out.push((neg, std::mem::take(&mut cur)));
            }
            neg = ch == '-';
            prev_sig = Some(ch);
            continue;
        }
        if !ch.is_whitespace() {
            prev_sig = Some(ch);
        }
        cur.push(ch);
    }
    out.push((neg, cur));
    out.into_iter().map(|(n, t)| (n, t.trim().to_string())).collect()
}

/// Splits a term at its last top-level `*`: `(coefficient, factor)`.
fn split_last_factor(term: &str) -> (Option<&str>, &str) {
    let mut depth = 0i32;
    let mut last = None;
    for (i, ch) in term.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            '*' if depth == 0 => last = Some(i),
            _ => {}
        }
    }
    match last {
        Some(i) => (Some(term[..i].trim()), term[i + 1..].trim()),
        None => (None, term.trim()),
    }
}

