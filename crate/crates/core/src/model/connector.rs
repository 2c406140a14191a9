use alloc::string::{String, ToString};
use core::fmt;

use serde::{Deserialize, Serialize};

/// Which side of the word a connector points to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// Written `-`: links to a word further left.
    Left,
    /// Written `+`: links to a word further right.
    Right,
}

impl Direction {
    pub fn symbol(self) -> char {
        match self {
            Direction::Left => '-',
            Direction::Right => '+',
        }
    }
}

/// One typed half-link, e.g. `@Ds**c-`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Connector {
    pub head: String,
    pub subscript: String,
    pub direction: Direction,
    pub multi: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed connector `{text}`: {reason}")]
pub struct MalformedConnector {
    pub text: String,
    pub reason: &'static str,
}

impl Connector {
    pub fn new(head: &str, subscript: &str, direction: Direction) -> Self {
        Connector {
            head: head.into(),
            subscript: subscript.into(),
            direction,
            multi: false,
        }
    }

    /// Parses `@? [A-Z][A-Z0-9]* [a-z*]* [+-]`.
    pub fn parse(text: &str) -> Result<Self, MalformedConnector> {
        let fail = |reason| MalformedConnector {
            text: text.to_string(),
            reason,
        };
        let (multi, body) = match text.strip_prefix('@') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let (body, direction) = match body.as_bytes().last() {
            Some(b'+') => (&body[..body.len() - 1], Direction::Right),
            Some(b'-') => (&body[..body.len() - 1], Direction::Left),
            _ => return Err(fail("missing direction `+` or `-`")),
        };
        let first = body.chars().next().ok_or_else(|| fail("empty link type"))?;
        if !first.is_ascii_uppercase() {
            return Err(fail("link type must start with an uppercase letter"));
        }
        let head_len = body
            .find(|c: char| !(c.is_ascii_uppercase() || c.is_ascii_digit()))
            .unwrap_or(body.len());
        let (head, subscript) = body.split_at(head_len);
        if let Some(bad) = subscript
            .chars()
            .find(|&c| !(c.is_ascii_lowercase() || c == '*'))
        {
            return Err(fail(if bad.is_whitespace() {
                "interior whitespace"
            } else {
                "illegal character in subscript"
            }));
        }
        Ok(Connector {
            head: head.into(),
            subscript: subscript.into(),
            direction,
            multi,
        })
    }

    /// Link type shared by two matching connectors: the head plus the
    /// position-wise merge of both subscripts, where `*` and missing
    /// positions defer to the other side.
    pub fn link_label(&self, other: &Connector) -> String {
        let a = self.subscript.as_bytes();
        let b = other.subscript.as_bytes();
        let mut label = String::with_capacity(self.head.len() + a.len().max(b.len()));
        label.push_str(&self.head);
        for i in 0..a.len().max(b.len()) {
            let x = a.get(i).copied().unwrap_or(b'*');
            let y = b.get(i).copied().unwrap_or(b'*');
            label.push(if x == b'*' { y } else { x } as char);
        }
        label
    }
}

impl fmt::Display for Connector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.multi {
            f.write_str("@")?;
        }
        write!(
            f,
            "{}{}{}",
            self.head,
            self.subscript,
            self.direction.symbol()
        )
    }
}

/// True iff a connector on an earlier word (`left_word`) can link to one on a
/// later word (`right_word`).
pub fn match_connectors(left_word: &Connector, right_word: &Connector) -> bool {
    left_word.direction == Direction::Right
        && right_word.direction == Direction::Left
        && left_word.head == right_word.head
        && subscripts_compatible(&left_word.subscript, &right_word.subscript)
}

/// Position-by-position comparison; `*` and exhausted subscripts match anything.
pub fn subscripts_compatible(a: &str, b: &str) -> bool {
    a.bytes()
        .zip(b.bytes())
        .all(|(x, y)| x == y || x == b'*' || y == b'*')
}
