//! Message coding schemes and the contact-time model.
//!
//! Every scheme produces a [`CodeWord`]: an inspectable token sequence plus a
//! length in abstract symbol units. Contact duration is affine in that length
//! (see [`TimeModel`]), so comparing schemes reduces to comparing lengths.

mod anchor;
mod compress;
mod prefix;
mod time;

use std::fmt;

use serde::Serialize;

use crate::maze::Turn;

pub use anchor::{anchor_encode, AnchorOffset, AnchorScheme};
pub use compress::{complexity_class, compress_route, decompress_route, unitary_encode};
pub use prefix::{
    code_stats, entropy_bits, kraft_sum, optimal_prefix_lengths, CodeStats, MessageDistribution,
    PrefixCode,
};
pub use time::{sample_transmission_time, transmission_time, TimeModel, MIN_CONTACT_SECONDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Token {
    /// One tally mark.
    Unit,
    /// Repeat count prefix of a compressed route.
    Repeat(u32),
    Turn(Turn),
    /// Short name of an anchor branch.
    Anchor(u32),
    Plus,
    Minus,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Unit => f.write_str("|"),
            Token::Repeat(n) => write!(f, "{n}"),
            Token::Turn(t) => write!(f, "{}", t.as_char()),
            Token::Anchor(a) => write!(f, "A{a}"),
            Token::Plus => f.write_str("+"),
            Token::Minus => f.write_str("-"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CodeWord {
    description: Vec<Token>,
    length: f64,
}

impl CodeWord {
    pub(crate) fn new(description: Vec<Token>, length: f64) -> Self {
        debug_assert!(length >= 0.0);
        CodeWord {
            description,
            length,
        }
    }

    pub fn description(&self) -> &[Token] {
        &self.description
    }

    /// Length in symbol units.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Number of transmitted symbols, used when corrupting a message symbol
    /// by symbol. Fractional lengths round up.
    pub fn symbol_count(&self) -> u64 {
        self.length.ceil() as u64
    }
}

impl fmt::Display for CodeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.description {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}
