use serde::Serialize;

use super::{CodeWord, Token};
use crate::{Error, Result};

/// Anchor-offset code: a few frequent branches get short names and every
/// other branch is sent as "nearest anchor, plus or minus a tally".
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnchorScheme {
    anchors: Vec<u32>,
    anchor_name_length: f64,
}

impl AnchorScheme {
    /// Anchors with the default name length of one symbol.
    pub fn new(anchors: Vec<u32>) -> Result<Self> {
        Self::with_name_length(anchors, 1.0)
    }

    pub fn with_name_length(anchors: Vec<u32>, anchor_name_length: f64) -> Result<Self> {
        if anchors.is_empty() {
            return Err(Error::InvalidAnchorScheme("no anchors".into()));
        }
        if anchors.contains(&0) {
            return Err(Error::InvalidAnchorScheme(
                "branches are numbered from 1".into(),
            ));
        }
        if !anchors.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidAnchorScheme(format!(
                "anchors must be strictly increasing, got {anchors:?}"
            )));
        }
        if !(anchor_name_length.is_finite() && anchor_name_length >= 0.0) {
            return Err(Error::InvalidAnchorScheme(format!(
                "anchor name length {anchor_name_length} must be a finite non-negative number"
            )));
        }
        Ok(AnchorScheme {
            anchors,
            anchor_name_length,
        })
    }

    pub fn anchors(&self) -> &[u32] {
        &self.anchors
    }

    pub fn anchor_name_length(&self) -> f64 {
        self.anchor_name_length
    }

    /// Rejects anchors beyond the last branch of the maze.
    pub fn check_range(&self, branch_count: u32) -> Result<()> {
        match self.anchors.last() {
            Some(&last) if last > branch_count => Err(Error::InvalidAnchorScheme(format!(
                "anchor {last} beyond branch {branch_count}"
            ))),
            _ => Ok(()),
        }
    }

    /// Nearest anchor to `i`; equidistant anchors resolve to the smaller one.
    pub fn nearest(&self, i: u32) -> AnchorOffset {
        let anchor = self
            .anchors
            .iter()
            .copied()
            .min_by_key(|&a| (a.abs_diff(i), a))
            .expect("anchor scheme is never empty");
        AnchorOffset {
            anchor,
            offset: i64::from(i) - i64::from(anchor),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AnchorOffset {
    pub anchor: u32,
    pub offset: i64,
}

impl AnchorOffset {
    pub fn distance(&self) -> u64 {
        self.offset.unsigned_abs()
    }
}

/// Encodes branch `i` as anchor name, sign and `|i - anchor|` tally marks.
///
/// The sign is free: length is `anchor_name_length + |i - anchor|`.
pub fn anchor_encode(i: u32, scheme: &AnchorScheme) -> Result<CodeWord> {
    if i == 0 {
        return Err(Error::InvalidCode("branches are numbered from 1".into()));
    }
    let near = scheme.nearest(i);
    let distance = near.distance();
    let mut description = Vec::with_capacity(distance as usize + 2);
    description.push(Token::Anchor(near.anchor));
    description.push(if near.offset < 0 {
        Token::Minus
    } else {
        Token::Plus
    });
    description.extend(std::iter::repeat_n(Token::Unit, distance as usize));
    Ok(CodeWord::new(
        description,
        scheme.anchor_name_length + distance as f64,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tens() -> AnchorScheme {
        AnchorScheme::new(vec![10, 20]).unwrap()
    }

    #[test]
    fn worked_examples() {
        let s = tens();
        let w = anchor_encode(26, &s).unwrap();
        assert_eq!(
            s.nearest(26),
            AnchorOffset {
                anchor: 20,
                offset: 6
            }
        );
        assert_eq!(w.length(), 7.0);
        assert_eq!(w.to_string(), "A20+||||||");

        let w = anchor_encode(20, &s).unwrap();
        assert_eq!(s.nearest(20).offset, 0);
        assert_eq!(w.length(), 1.0);

        let w = anchor_encode(15, &s).unwrap();
        assert_eq!(
            s.nearest(15),
            AnchorOffset {
                anchor: 10,
                offset: 5
            }
        );
        assert_eq!(w.length(), 6.0);
    }

    #[test]
    fn below_first_anchor_is_negative_offset() {
        let w = anchor_encode(8, &tens()).unwrap();
        assert_eq!(w.to_string(), "A10-||");
        assert_eq!(w.length(), 3.0);
    }

    #[test]
    fn name_length_is_configurable() {
        let s = AnchorScheme::with_name_length(vec![15], 2.5).unwrap();
        assert_eq!(anchor_encode(18, &s).unwrap().length(), 5.5);
    }

    #[test]
    fn invalid_schemes() {
        assert!(AnchorScheme::new(vec![]).is_err());
        assert!(AnchorScheme::new(vec![20, 10]).is_err());
        assert!(AnchorScheme::new(vec![10, 10]).is_err());
        assert!(AnchorScheme::new(vec![0, 10]).is_err());
        assert!(AnchorScheme::with_name_length(vec![10], -1.0).is_err());
        assert!(tens().check_range(19).is_err());
        assert!(tens().check_range(30).is_ok());
        assert!(anchor_encode(0, &tens()).is_err());
    }

    #[test]
    fn length_is_name_plus_min_distance() {
        for anchors in [
            vec![10, 20],
            vec![10, 19],
            vec![15],
            vec![7, 14],
            vec![1, 30],
        ] {
            let s = AnchorScheme::new(anchors.clone()).unwrap();
            for i in 1..=30u32 {
                let d = anchors.iter().map(|a| a.abs_diff(i)).min().unwrap();
                assert_eq!(anchor_encode(i, &s).unwrap().length(), 1.0 + f64::from(d));
            }
        }
    }
}
