//! Words over a finite generating set.
//!
//! A letter is a nonzero `i8`: `+k` is generator `k - 1`, `-k` is its inverse.
//! Words serialize as strings, one ASCII letter per position: the lowercase
//! symbol of the generator, or its uppercase form for the inverse. The empty
//! string is the identity.

use crate::error::Error;

/// Signed generator index; never zero.
pub type Letter = i8;

/// Generator index (0-based) of a letter.
pub fn gen_index(l: Letter) -> usize {
    (l.unsigned_abs() as usize) - 1
}

/// True when the letter is an inverse generator.
pub fn is_inverse(l: Letter) -> bool {
    l < 0
}

/// Rank of a letter in the ShortLex alphabet: each inverse sorts immediately
/// after its generator (`a < a^-1 < b < b^-1 < ...`).
pub fn rank(l: Letter) -> usize {
    2 * gen_index(l) + usize::from(is_inverse(l))
}

/// Freely reduce a word by cancelling adjacent inverse pairs.
pub fn free_reduce(word: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// True when the word has no adjacent inverse pair.
pub fn is_freely_reduced(word: &[Letter]) -> bool {
    word.windows(2).all(|w| w[0] != -w[1])
}

/// Formal inverse: reverse the word and invert each letter.
pub fn invert(word: &[Letter]) -> Vec<Letter> {
    word.iter().rev().map(|&l| -l).collect()
}

/// Freely reduced concatenation of two already-reduced words.
pub fn concat_reduce(a: &[Letter], b: &[Letter]) -> Vec<Letter> {
    let mut out = a.to_vec();
    for &l in b {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// True when the word is cyclically reduced (freely reduced, and its first and
/// last letters are not mutual inverses).
pub fn is_cyclically_reduced(word: &[Letter]) -> bool {
    is_freely_reduced(word)
        && (word.len() < 2 || word[0] != -word[word.len() - 1])
}

/// ShortLex comparison: length first, then letter ranks.
pub fn shortlex_cmp(a: &[Letter], b: &[Letter]) -> std::cmp::Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().map(|&l| rank(l)).cmp(b.iter().map(|&l| rank(l))))
}

/// Format a word against a symbol table (one lowercase ASCII char per
/// generator).
pub fn format_word(word: &[Letter], symbols: &[char]) -> String {
    word.iter()
        .map(|&l| {
            let c = symbols[gen_index(l)];
            if is_inverse(l) {
                c.to_ascii_uppercase()
            } else {
                c
            }
        })
        .collect()
}

/// Parse a serialized word against a symbol table. Rejects characters outside
/// the table; does not freely reduce.
pub fn parse_word(s: &str, symbols: &[char]) -> Result<Vec<Letter>, Error> {
    let mut out = Vec::with_capacity(s.len());
    for ch in s.chars() {
        let lower = ch.to_ascii_lowercase();
        let idx = symbols.iter().position(|&c| c == lower).ok_or_else(|| {
            Error::PresentationInvalid {
                reason: format!("unknown letter {ch:?} in word {s:?}"),
            }
        })?;
        let letter = (idx + 1) as Letter;
        out.push(if ch.is_ascii_uppercase() { -letter } else { letter });
    }
    Ok(out)
}
