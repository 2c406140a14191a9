use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::model::Connector;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    /// A word form, possibly subscripted (`is.v`) or quoted in the source.
    Word(String),
    /// `<name>`, stored without the angle brackets.
    MacroName(String),
    Connector(Connector),
    /// Word-list include such as `/en/words/words.n.1`.
    FilePath(String),
    /// `#define ...` and friends; the loader skips these.
    Directive(String),
    Colon,
    Semicolon,
    And,
    Or,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Word(w) => write!(f, "word `{w}`"),
            TokenKind::MacroName(m) => write!(f, "macro `<{m}>`"),
            TokenKind::Connector(c) => write!(f, "connector `{c}`"),
            TokenKind::FilePath(p) => write!(f, "path `{p}`"),
            TokenKind::Directive(d) => write!(f, "directive `{d}`"),
            TokenKind::Colon => f.write_str("`:`"),
            TokenKind::Semicolon => f.write_str("`;`"),
            TokenKind::And => f.write_str("`&`"),
            TokenKind::Or => f.write_str("`or`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::LBrace => f.write_str("`{`"),
            TokenKind::RBrace => f.write_str("`}`"),
            TokenKind::LBracket => f.write_str("`[`"),
            TokenKind::RBracket => f.write_str("`]`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: u32,
    pub column: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {reason}")]
pub struct LexError {
    pub line: u32,
    pub column: u32,
    pub reason: String,
}

fn is_punct(c: char) -> bool {
    matches!(c, ':' | ';' | '&' | '(' | ')' | '{' | '}' | '[' | ']' | '%')
}

fn looks_like_connector(s: &str) -> bool {
    let body = s.strip_prefix('@').unwrap_or(s);
    body.len() >= 2
        && body.as_bytes()[0].is_ascii_uppercase()
        && matches!(body.as_bytes()[body.len() - 1], b'+' | b'-')
}

/// Splits dictionary source text into tokens. `%` starts a comment that runs
/// to the end of the line.
pub fn tokenize_dict(text: &str) -> Result<Vec<Token>, LexError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    let mut line = 1u32;
    let mut line_start = 0usize;

    while let Some(&(pos, c)) = chars.peek() {
        let column = (text[line_start..pos].chars().count() + 1) as u32;
        let err = |reason: &str| LexError {
            line,
            column,
            reason: reason.to_string(),
        };
        if c == '\n' {
            chars.next();
            line += 1;
            line_start = pos + 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c == '%' {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        let single = match c {
            ':' => Some(TokenKind::Colon),
            ';' => Some(TokenKind::Semicolon),
            '&' => Some(TokenKind::And),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            '{' => Some(TokenKind::LBrace),
            '}' => Some(TokenKind::RBrace),
            '[' => Some(TokenKind::LBracket),
            ']' => Some(TokenKind::RBracket),
            _ => None,
        };
        if let Some(kind) = single {
            chars.next();
            out.push(Token { kind, line, column });
            continue;
        }
        if c.is_control() {
            return Err(err("illegal control character"));
        }
        if c == '"' {
            chars.next();
            let start = pos + 1;
            let mut end = None;
            for (p, ch) in chars.by_ref() {
                if ch == '"' {
                    end = Some(p);
                    break;
                }
                if ch == '\n' {
                    break;
                }
            }
            let end = end.ok_or_else(|| err("unterminated quoted word"))?;
            if end == start {
                return Err(err("empty quoted word"));
            }
            out.push(Token {
                kind: TokenKind::Word(text[start..end].to_string()),
                line,
                column,
            });
            continue;
        }
        if c == '<' {
            chars.next();
            let start = pos + 1;
            let mut end = None;
            while let Some(&(p, ch)) = chars.peek() {
                if ch == '>' {
                    chars.next();
                    end = Some(p);
                    break;
                }
                if ch.is_whitespace() || is_punct(ch) {
                    break;
                }
                chars.next();
            }
            let end = end.ok_or_else(|| err("unterminated macro name"))?;
            if end == start {
                return Err(err("empty macro name"));
            }
            out.push(Token {
                kind: TokenKind::MacroName(text[start..end].to_string()),
                line,
                column,
            });
            continue;
        }
        if c == '>' {
            return Err(err("stray `>`"));
        }

        let start = pos;
        let mut end = text.len();
        while let Some(&(p, ch)) = chars.peek() {
            if ch.is_whitespace() || is_punct(ch) {
                end = p;
                break;
            }
            if ch.is_control() {
                return Err(LexError {
                    line,
                    column: (text[line_start..p].chars().count() + 1) as u32,
                    reason: "illegal control character".to_string(),
                });
            }
            chars.next();
        }
        let word = &text[start..end];
        let kind = if word == "or" {
            TokenKind::Or
        } else if word.starts_with('#') {
            TokenKind::Directive(word.to_string())
        } else if word.starts_with('/') {
            TokenKind::FilePath(word.to_string())
        } else if looks_like_connector(word) {
            match Connector::parse(word) {
                Ok(conn) => TokenKind::Connector(conn),
                Err(e) => return Err(err(&e.to_string())),
            }
        } else {
            TokenKind::Word(word.to_string())
        };
        out.push(Token { kind, line, column });
    }
    Ok(out)
}
