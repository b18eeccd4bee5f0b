use std::fmt;

use crate::error::{Error, Result};
use crate::universe::is_identifier;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    /// Identifiers, keywords and bare numbers share one token kind.
    Word(String),
    Str(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Semicolon,
    Slash,
    Equals,
    Star,
    Newline,
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Word(w) => write!(f, "`{w}`"),
            Token::Str(s) => write!(f, "string {s:?}"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::LBrace => f.write_str("`{`"),
            Token::RBrace => f.write_str("`}`"),
            Token::LBracket => f.write_str("`[`"),
            Token::RBracket => f.write_str("`]`"),
            Token::Comma => f.write_str("`,`"),
            Token::Colon => f.write_str("`:`"),
            Token::Semicolon => f.write_str("`;`"),
            Token::Slash => f.write_str("`/`"),
            Token::Equals => f.write_str("`=`"),
            Token::Star => f.write_str("`*`"),
            Token::Newline => f.write_str("end of line"),
            Token::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned {
    pub token: Token,
    pub line: usize,
    pub column: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-')
}

/// Splits `text` into tokens. Newlines are emitted only when `keep_newlines` is set.
pub fn tokenize(text: &str, keep_newlines: bool) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (start_line, start_column) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let token = match c {
            '\n' => {
                bump(&mut chars);
                if !keep_newlines {
                    continue;
                }
                Token::Newline
            }
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
                continue;
            }
            '"' => {
                bump(&mut chars);
                let mut s = String::new();
                loop {
                    match bump(&mut chars) {
                        Some('"') => break,
                        Some('\\') => match bump(&mut chars) {
                            Some(e @ ('"' | '\\')) => s.push(e),
                            _ => {
                                return Err(Error::Syntax {
                                    line,
                                    column,
                                    message: "unsupported escape in string".into(),
                                })
                            }
                        },
                        Some('\n') | None => {
                            return Err(Error::Syntax {
                                line: start_line,
                                column: start_column,
                                message: "unterminated string".into(),
                            })
                        }
                        Some(c) => s.push(c),
                    }
                }
                Token::Str(s)
            }
            c if is_word_char(c) => {
                let mut w = String::new();
                while chars.peek().is_some_and(|&c| is_word_char(c)) {
                    w.push(bump(&mut chars).expect("peeked"));
                }
                debug_assert!(is_identifier(&w));
                Token::Word(w)
            }
            _ => {
                bump(&mut chars);
                match c {
                    '(' => Token::LParen,
                    ')' => Token::RParen,
                    '{' => Token::LBrace,
                    '}' => Token::RBrace,
                    '[' => Token::LBracket,
                    ']' => Token::RBracket,
                    ',' => Token::Comma,
                    ':' => Token::Colon,
                    ';' => Token::Semicolon,
                    '/' => Token::Slash,
                    '=' => Token::Equals,
                    '*' => Token::Star,
                    other => {
                        return Err(Error::Syntax {
                            line: start_line,
                            column: start_column,
                            message: format!("unexpected character {other:?}"),
                        })
                    }
                }
            }
        };
        out.push(Spanned {
            token,
            line: start_line,
            column: start_column,
        });
    }
    out.push(Spanned {
        token: Token::Eof,
        line,
        column,
    });
    Ok(out)
}

/// Cursor over a token list with the expectation helpers the parsers share.
pub struct Cursor {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Cursor {
    pub fn new(tokens: Vec<Spanned>) -> Self {
        Cursor { tokens, pos: 0 }
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.pos].token
    }

    pub fn here(&self) -> &Spanned {
        &self.tokens[self.pos]
    }

    pub fn next(&mut self) -> Spanned {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let here = self.here();
        Err(Error::Syntax {
            line: here.line,
            column: here.column,
            message: message.into(),
        })
    }

    pub fn eat(&mut self, token: &Token) -> bool {
        if self.peek() == token {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, token: &Token) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.error(format!("expected {token}, found {}", self.peek()))
        }
    }

    pub fn is_keyword(&self, keyword: &str) -> bool {
        matches!(self.peek(), Token::Word(w) if w == keyword)
    }

    pub fn eat_keyword(&mut self, keyword: &str) -> bool {
        if self.is_keyword(keyword) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect_keyword(&mut self, keyword: &str) -> Result<()> {
        if self.eat_keyword(keyword) {
            Ok(())
        } else {
            self.error(format!("expected `{keyword}`, found {}", self.peek()))
        }
    }

    /// A word that is not one of `reserved`.
    pub fn name(&mut self, what: &str, reserved: &[&str]) -> Result<String> {
        match self.peek().clone() {
            Token::Word(w) if !reserved.contains(&w.as_str()) => {
                self.next();
                Ok(w)
            }
            other => self.error(format!("expected {what}, found {other}")),
        }
    }

    pub fn skip_newlines(&mut self) {
        while self.eat(&Token::Newline) {}
    }

    /// `p/q` or an integer.
    pub fn rational(&mut self) -> Result<crate::rational::Weight> {
        let start = self.here().clone();
        let Token::Word(numerator) = self.next().token else {
            return Err(Error::Syntax {
                line: start.line,
                column: start.column,
                message: "expected a rational weight".into(),
            });
        };
        let mut text = numerator;
        if self.eat(&Token::Slash) {
            match self.next().token {
                Token::Word(d) => {
                    text.push('/');
                    text.push_str(&d);
                }
                other => {
                    return Err(Error::Syntax {
                        line: start.line,
                        column: start.column,
                        message: format!("expected a denominator, found {other}"),
                    })
                }
            }
        }
        crate::rational::parse_weight(&text).map_err(|e| Error::Syntax {
            line: start.line,
            column: start.column,
            message: e.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<Token> {
        tokenize(text, false).unwrap().into_iter().map(|s| s.token).collect()
    }

    #[test]
    fn words_and_punctuation() {
        assert_eq!(
            kinds("when region=NA apply fixed {a1} # trailing"),
            vec![
                Token::Word("when".into()),
                Token::Word("region".into()),
                Token::Equals,
                Token::Word("NA".into()),
                Token::Word("apply".into()),
                Token::Word("fixed".into()),
                Token::LBrace,
                Token::Word("a1".into()),
                Token::RBrace,
                Token::Eof,
            ]
        );
        assert_eq!(kinds("1/4")[1], Token::Slash);
    }

    #[test]
    fn positions_and_strings() {
        let toks = tokenize("universe \"u0.universe\"\n  zero", false).unwrap();
        assert_eq!(toks[1].token, Token::Str("u0.universe".into()));
        assert_eq!((toks[2].line, toks[2].column), (2, 3));
        let err = tokenize("a\n  @", false).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, column: 3, .. }));
        assert!(tokenize("\"open", false).is_err());
    }
}
