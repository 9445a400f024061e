use super::{CodeWord, Token};
use crate::maze::{Route, Turn};
use crate::{Error, Result};

/// Tally code: branch `i` is `i` unit marks, length `i`.
pub fn unitary_encode(i: u32) -> Result<CodeWord> {
    if i == 0 {
        return Err(Error::InvalidCode("unitary code starts at 1".into()));
    }
    Ok(CodeWord::new(vec![Token::Unit; i as usize], f64::from(i)))
}

fn smallest_period(turns: &[Turn]) -> usize {
    let n = turns.len();
    (1..=n)
        .filter(|&p| n.is_multiple_of(p))
        .find(|&p| turns.chunks(p).all(|chunk| chunk == &turns[..p]))
        .unwrap_or(n)
}

/// Shortest repeat description of a route.
///
/// A route that is `k` copies of a pattern of `p < len` turns becomes
/// `[k, pattern...]` with length `1 + p`; anything else is sent raw with one
/// unit per turn. This is the computable stand-in for Kolmogorov complexity:
/// `LLLLLLLL` -> `8L`, `LRLRLRLR` -> `4LR`, `LRRLRL` stays raw.
pub fn compress_route(route: &Route) -> CodeWord {
    let turns = route.turns();
    let n = turns.len();
    let period = smallest_period(turns);
    if n > 0 && period < n {
        let mut description = Vec::with_capacity(period + 1);
        description.push(Token::Repeat((n / period) as u32));
        description.extend(turns[..period].iter().copied().map(Token::Turn));
        CodeWord::new(description, (1 + period) as f64)
    } else {
        let description = turns.iter().copied().map(Token::Turn).collect();
        CodeWord::new(description, n as f64)
    }
}

/// Inverse of [`compress_route`].
pub fn decompress_route(word: &CodeWord) -> Result<Route> {
    let tokens = word.description();
    let (repeat, pattern) = match tokens.first() {
        Some(Token::Repeat(k)) => (*k as usize, &tokens[1..]),
        _ => (1, tokens),
    };
    let pattern = pattern
        .iter()
        .map(|t| match t {
            Token::Turn(turn) => Ok(*turn),
            other => Err(Error::InvalidCode(format!(
                "unexpected token {other} in route code"
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Route::new(pattern.repeat(repeat)))
}

/// Complexity proxy: the compressed length of the route.
pub fn complexity_class(route: &Route) -> f64 {
    compress_route(route).length()
}
