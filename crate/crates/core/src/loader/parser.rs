use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::lexer::{Token, TokenKind};
use crate::model::Expression;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: u32,
    pub column: u32,
    pub expected: String,
    pub found: String,
}

/// Left-hand side item of an entry statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntryTarget {
    Word(String),
    File(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Macro {
        name: String,
        body: Expression,
        line: u32,
    },
    Entry {
        targets: Vec<EntryTarget>,
        body: Expression,
        line: u32,
    },
    Directive {
        text: String,
        line: u32,
    },
}

struct Cursor<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError {
                line: t.line,
                column: t.column,
                expected: expected.to_string(),
                found: t.kind.to_string(),
            },
            None => {
                let (line, column) = self
                    .tokens
                    .last()
                    .map(|t| (t.line, t.column))
                    .unwrap_or((1, 1));
                ParseError {
                    line,
                    column,
                    expected: expected.to_string(),
                    found: "end of input".to_string(),
                }
            }
        }
    }

    fn expect(&mut self, kind: &TokenKind, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if &t.kind == kind => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(what)),
        }
    }

    fn or_list(&mut self) -> Result<Expression, ParseError> {
        let mut items = alloc::vec![self.and_list()?];
        while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Or)) {
            self.pos += 1;
            items.push(self.and_list()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Expression::Or(items)
        })
    }

    fn and_list(&mut self) -> Result<Expression, ParseError> {
        let mut items = alloc::vec![self.unit()?];
        while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::And)) {
            self.pos += 1;
            items.push(self.unit()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Expression::And(items)
        })
    }

    /// Parses an expression that may be empty when `close` follows directly.
    fn group(&mut self, close: TokenKind, what: &str) -> Result<Expression, ParseError> {
        if self.peek().map(|t| &t.kind) == Some(&close) {
            self.pos += 1;
            return Ok(Expression::And(Vec::new()));
        }
        let e = self.or_list()?;
        self.expect(&close, what)?;
        Ok(e)
    }

    fn unit(&mut self) -> Result<Expression, ParseError> {
        let Some(tok) = self.peek() else {
            return Err(self.error("connector, macro or `(`"));
        };
        match &tok.kind {
            TokenKind::Connector(c) => {
                self.pos += 1;
                Ok(Expression::Leaf(c.clone()))
            }
            TokenKind::MacroName(m) => {
                self.pos += 1;
                Ok(Expression::Macro(m.clone()))
            }
            TokenKind::LParen => {
                self.pos += 1;
                self.group(TokenKind::RParen, "`)`")
            }
            TokenKind::LBrace => {
                self.pos += 1;
                Ok(Expression::optional(self.group(TokenKind::RBrace, "`}`")?))
            }
            TokenKind::LBracket => {
                self.pos += 1;
                let inner = self.group(TokenKind::RBracket, "`]`")?;
                // `[e]0.7`: explicit cost, rounded up to an integer level
                if let Some(Token {
                    kind: TokenKind::Word(w),
                    ..
                }) = self.peek()
                {
                    if let Ok(v) = w.parse::<f64>() {
                        self.pos += 1;
                        let level = libm::ceil(v.max(0.0)) as u32;
                        return Ok(Expression::cost(inner, level));
                    }
                }
                Ok(match inner {
                    Expression::Cost(e, level) => Expression::Cost(e, level + 1),
                    e => Expression::cost(e, 1),
                })
            }
            _ => Err(self.error("connector, macro or `(`")),
        }
    }
}

/// Parses one expression terminated by `;`.
pub fn parse_expression(tokens: &[Token]) -> Result<Expression, ParseError> {
    let mut cur = Cursor { tokens, pos: 0 };
    let e = cur.or_list()?;
    cur.expect(&TokenKind::Semicolon, "`;`")?;
    if cur.peek().is_some() {
        return Err(cur.error("end of expression"));
    }
    Ok(e)
}

/// Splits a token stream into `;`-terminated statements.
pub fn parse_statements(tokens: &[Token]) -> Result<Vec<Statement>, ParseError> {
    let mut cur = Cursor { tokens, pos: 0 };
    let mut out = Vec::new();
    while let Some(first) = cur.peek() {
        if let TokenKind::Directive(text) = &first.kind {
            // a directive runs to `;` or to the end of its line
            let line = first.line;
            let mut text = text.clone();
            cur.pos += 1;
            while let Some(t) = cur.peek() {
                if t.line != line {
                    break;
                }
                cur.pos += 1;
                if t.kind == TokenKind::Semicolon {
                    break;
                }
                text.push(' ');
                text.push_str(&format!("{}", t.kind));
            }
            out.push(Statement::Directive { text, line });
            continue;
        }

        let line = first.line;
        let mut targets = Vec::new();
        let mut macro_name = None;
        loop {
            let Some(t) = cur.peek() else {
                return Err(cur.error("`:`"));
            };
            match &t.kind {
                TokenKind::Colon => {
                    cur.pos += 1;
                    break;
                }
                TokenKind::Word(w) => targets.push(EntryTarget::Word(w.clone())),
                TokenKind::Or => targets.push(EntryTarget::Word("or".into())),
                TokenKind::FilePath(p) => targets.push(EntryTarget::File(p.clone())),
                TokenKind::MacroName(m) if targets.is_empty() && macro_name.is_none() => {
                    macro_name = Some(m.clone())
                }
                _ => return Err(cur.error("word, path or `:`")),
            }
            if macro_name.is_some() && !targets.is_empty() {
                return Err(cur.error("`:` after macro name"));
            }
            cur.bump();
        }
        if macro_name.is_none() && targets.is_empty() {
            return Err(ParseError {
                line,
                column: first.column,
                expected: "word, path or macro name".into(),
                found: "`:`".into(),
            });
        }
        let body = cur.or_list()?;
        cur.expect(&TokenKind::Semicolon, "`;`")?;
        out.push(match macro_name {
            Some(name) => Statement::Macro { name, body, line },
            None => Statement::Entry {
                targets,
                body,
                line,
            },
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loader::lexer::tokenize_dict;
    use crate::model::Connector;
    use alloc::vec;

    fn expr(text: &str) -> Result<Expression, ParseError> {
        parse_expression(&tokenize_dict(text).unwrap())
    }

    fn leaf(s: &str) -> Expression {
        Expression::Leaf(Connector::parse(s).unwrap())
    }

    #[test]
    fn precedence_and_optional() {
        assert_eq!(
            expr("{C-} & (X+ or Y+);").unwrap(),
            Expression::And(vec![
                Expression::optional(leaf("C-")),
                Expression::Or(vec![leaf("X+"), leaf("Y+")]),
            ])
        );
        assert_eq!(
            expr("A+ & B- or C+;").unwrap(),
            Expression::Or(vec![
                Expression::And(vec![leaf("A+"), leaf("B-")]),
                leaf("C+")
            ])
        );
        assert_eq!(expr("S+;").unwrap(), leaf("S+"));
    }

    #[test]
    fn cost_brackets_nest() {
        assert_eq!(
            expr("[[[()]]];").unwrap(),
            Expression::cost(Expression::And(vec![]), 3)
        );
        assert_eq!(expr("[X+];").unwrap(), Expression::cost(leaf("X+"), 1));
        assert_eq!(expr("[X+]0.4;").unwrap(), Expression::cost(leaf("X+"), 1));
        assert_eq!(expr("[X+]2;").unwrap(), Expression::cost(leaf("X+"), 2));
    }

    #[test]
    fn unbalanced_is_an_error() {
        let e = expr("(S+ or").unwrap_err();
        assert_eq!(e.found, "end of input");
        assert!(expr("S+ & ;").is_err());
        assert!(expr("S+ )").is_err());
        assert!(expr("S+").is_err());
    }

    #[test]
    fn statements() {
        let toks = tokenize_dict("<m>: A+;\n#define x 1;\nor and /w/f.1: <m> & B-;\n").unwrap();
        let st = parse_statements(&toks).unwrap();
        assert_eq!(st.len(), 3);
        assert!(matches!(&st[0], Statement::Macro { name, .. } if name == "m"));
        assert!(matches!(&st[1], Statement::Directive { line: 2, .. }));
        match &st[2] {
            Statement::Entry { targets, line, .. } => {
                assert_eq!(*line, 3);
                assert_eq!(
                    targets,
                    &vec![
                        EntryTarget::Word("or".into()),
                        EntryTarget::Word("and".into()),
                        EntryTarget::File("/w/f.1".into())
                    ]
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn statement_errors() {
        let toks = tokenize_dict("a b S+;").unwrap();
        assert!(parse_statements(&toks).is_err());
        let toks = tokenize_dict(": S+;").unwrap();
        assert!(parse_statements(&toks).is_err());
        let toks = tokenize_dict("<m> w: S+;").unwrap();
        assert!(parse_statements(&toks).is_err());
    }
}
