use std::fmt;

use num_bigint::BigInt;

use super::{Ident, Operator, SourcePos};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keyword {
    Val,
    Yield,
    If,
    Then,
    Else,
    End,
    While,
    Do,
    For,
    In,
    Begin,
}

impl Keyword {
    fn from_word(word: &str) -> Option<Keyword> {
        Some(match word {
            "val" => Keyword::Val,
            "yield" => Keyword::Yield,
            "if" => Keyword::If,
            "then" => Keyword::Then,
            "else" => Keyword::Else,
            "end" => Keyword::End,
            "while" => Keyword::While,
            "do" => Keyword::Do,
            "for" => Keyword::For,
            "in" => Keyword::In,
            "begin" => Keyword::Begin,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Val => "val",
            Keyword::Yield => "yield",
            Keyword::If => "if",
            Keyword::Then => "then",
            Keyword::Else => "else",
            Keyword::End => "end",
            Keyword::While => "while",
            Keyword::Do => "do",
            Keyword::For => "for",
            Keyword::In => "in",
            Keyword::Begin => "begin",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Keyword(Keyword),
    Ident(Ident),
    Int(BigInt),
    Bool(bool),
    /// `=`
    Equals,
    /// `=>`
    Arrow,
    Op(Operator),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    /// `;` or a newline.
    Separator,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Keyword(kw) => write!(f, "`{}`", kw.as_str()),
            TokenKind::Ident(id) => write!(f, "identifier `{id}`"),
            TokenKind::Int(n) => write!(f, "integer `{n}`"),
            TokenKind::Bool(b) => write!(f, "`{b}`"),
            TokenKind::Equals => f.write_str("`=`"),
            TokenKind::Arrow => f.write_str("`=>`"),
            TokenKind::Op(op) => write!(f, "`{op}`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::LBracket => f.write_str("`[`"),
            TokenKind::RBracket => f.write_str("`]`"),
            TokenKind::Comma => f.write_str("`,`"),
            TokenKind::Separator => f.write_str("end of statement"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: SourcePos,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    column: u32,
}

impl Lexer<'_> {
    fn pos(&self) -> SourcePos {
        SourcePos::new(self.line, self.column)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn eat(&mut self, expected: char) -> bool {
        if self.peek() == Some(expected) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, first: char, pred: impl Fn(char) -> bool) -> String {
        let mut text = String::from(first);
        while let Some(c) = self.peek().filter(|&c| pred(c)) {
            text.push(c);
            self.bump();
        }
        text
    }
}

/// Splits source text into tokens. Whitespace other than newlines is
/// skipped; `#` starts a comment running to the end of the line.
pub fn tokenize(source: &str) -> Result<Vec<Token>> {
    let mut lx = Lexer {
        chars: source.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    loop {
        let pos = lx.pos();
        let Some(c) = lx.bump() else { break };
        let kind = match c {
            '\n' | ';' => TokenKind::Separator,
            c if c.is_whitespace() => continue,
            '#' => {
                while lx.peek().is_some_and(|c| c != '\n') {
                    lx.bump();
                }
                continue;
            }
            '0'..='9' => {
                let digits = lx.take_while(c, |c| c.is_ascii_digit());
                TokenKind::Int(digits.parse().expect("decimal digits"))
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let word = lx.take_while(c, |c| c.is_ascii_alphanumeric() || c == '_');
                match word.as_str() {
                    "true" => TokenKind::Bool(true),
                    "false" => TokenKind::Bool(false),
                    w => match Keyword::from_word(w) {
                        Some(kw) => TokenKind::Keyword(kw),
                        None => TokenKind::Ident(Ident::new(w)?),
                    },
                }
            }
            '=' if lx.eat('=') => TokenKind::Op(Operator::Eq),
            '=' if lx.eat('>') => TokenKind::Arrow,
            '=' => TokenKind::Equals,
            '!' if lx.eat('=') => TokenKind::Op(Operator::Neq),
            '<' if lx.eat('=') => TokenKind::Op(Operator::Le),
            '<' => TokenKind::Op(Operator::Lt),
            '>' if lx.eat('=') => TokenKind::Op(Operator::Ge),
            '>' => TokenKind::Op(Operator::Gt),
            '*' => TokenKind::Op(Operator::Mul),
            '+' => TokenKind::Op(Operator::Add),
            '-' => TokenKind::Op(Operator::Sub),
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            '[' => TokenKind::LBracket,
            ']' => TokenKind::RBracket,
            ',' => TokenKind::Comma,
            other => {
                return Err(Error::parse(
                    format!("unrecognized character `{other}`"),
                    pos,
                ))
            }
        };
        tokens.push(Token { kind, pos });
    }
    Ok(tokens)
}
