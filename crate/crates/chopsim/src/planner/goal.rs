//! The goal mini-language: `class=COUNT:style` entries separated by `;`,
//! e.g. `apple=8:even` or `apple=3:even; cucumber=4:long`. Case-insensitive,
//! whitespace-tolerant; errors carry the byte offset of the offending token.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::primitives::CutStyle;
use crate::scene::FoodClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoalEntry {
    pub class: FoodClass,
    pub target_count: u32,
    pub style: CutStyle,
}

/// Ordered per-class chopping goals; at most one entry per class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoalSpec {
    pub entries: Vec<GoalEntry>,
}

impl GoalSpec {
    pub fn total_target(&self) -> u32 {
        self.entries.iter().map(|e| e.target_count).sum()
    }
}

impl std::fmt::Display for GoalSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}={}:{}", e.class, e.target_count, e.style)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("goal parse error at byte {offset}: {kind}")]
pub struct GoalParseError {
    pub offset: usize,
    pub kind: GoalParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GoalParseErrorKind {
    #[error("empty goal")]
    Empty,
    #[error("unknown class {0:?}")]
    UnknownClass(String),
    #[error("duplicate class {0}")]
    DuplicateClass(FoodClass),
    #[error("target count must be at least 1")]
    CountTooSmall,
    #[error("count does not fit in 32 bits")]
    CountOverflow,
    #[error("unknown style {0:?} (expected \"even\" or \"long\")")]
    UnknownStyle(String),
    #[error("expected {0:?}")]
    Expected(char),
    #[error("expected an identifier")]
    ExpectedIdent,
    #[error("expected digits")]
    ExpectedDigits,
    #[error("trailing input")]
    TrailingInput,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), GoalParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(GoalParseError {
                offset: self.pos,
                kind: GoalParseErrorKind::Expected(c as char),
            })
        }
    }

    fn ident(&mut self) -> Result<(usize, String), GoalParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(GoalParseError { offset: start, kind: GoalParseErrorKind::ExpectedIdent });
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii alphabetic bytes")
            .to_ascii_lowercase();
        Ok((start, s))
    }

    fn digits(&mut self) -> Result<(usize, u64), GoalParseError> {
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(c) = self.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((c - b'0') as u64))
                .ok_or(GoalParseError {
                    offset: start,
                    kind: GoalParseErrorKind::CountOverflow,
                })?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(GoalParseError { offset: start, kind: GoalParseErrorKind::ExpectedDigits });
        }
        Ok((start, value))
    }
}

/// Parse a goal string. Total on valid input; positioned error otherwise.
pub fn parse_goal(text: &str) -> Result<GoalSpec, GoalParseError> {
    let mut cur = Cursor { bytes: text.as_bytes(), pos: 0 };
    let mut entries: Vec<GoalEntry> = Vec::new();
    cur.skip_ws();
    if cur.peek().is_none() {
        return Err(GoalParseError { offset: 0, kind: GoalParseErrorKind::Empty });
    }
    loop {
        cur.skip_ws();
        let (class_off, class_name) = cur.ident()?;
        let class: FoodClass = class_name.parse().map_err(|_| GoalParseError {
            offset: class_off,
            kind: GoalParseErrorKind::UnknownClass(class_name.clone()),
        })?;
        if entries.iter().any(|e| e.class == class) {
            return Err(GoalParseError {
                offset: class_off,
                kind: GoalParseErrorKind::DuplicateClass(class),
            });
        }
        cur.skip_ws();
        cur.expect(b'=')?;
        cur.skip_ws();
        let (count_off, count) = cur.digits()?;
        if count < 1 {
            return Err(GoalParseError { offset: count_off, kind: GoalParseErrorKind::CountTooSmall });
        }
        let count = u32::try_from(count).map_err(|_| GoalParseError {
            offset: count_off,
            kind: GoalParseErrorKind::CountOverflow,
        })?;
        cur.skip_ws();
        cur.expect(b':')?;
        cur.skip_ws();
        let (style_off, style_name) = cur.ident()?;
        let style: CutStyle = style_name.parse().map_err(|_| GoalParseError {
            offset: style_off,
            kind: GoalParseErrorKind::UnknownStyle(style_name.clone()),
        })?;
        entries.push(GoalEntry { class, target_count: count, style });
        cur.skip_ws();
        match cur.peek() {
            None => break,
            Some(b';') => {
                cur.pos += 1;
                cur.skip_ws();
                if cur.peek().is_none() {
                    break; // trailing separator is fine
                }
            }
            Some(_) => {
                return Err(GoalParseError {
                    offset: cur.pos,
                    kind: GoalParseErrorKind::TrailingInput,
                })
            }
        }
    }
    Ok(GoalSpec { entries })
}
