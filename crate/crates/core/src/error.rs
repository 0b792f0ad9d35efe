use std::fmt;

use thiserror::Error;

/// A 1-based line/column position in the source text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SourcePos {
    pub line: u32,
    pub column: u32,
}

impl SourcePos {
    pub const fn new(line: u32, column: u32) -> Self {
        SourcePos { line, column }
    }
}

impl fmt::Display for SourcePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, col {}", self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    Parse,
    Illformed,
    Type,
}

impl ErrorKind {
    pub fn label(self) -> &'static str {
        match self {
            ErrorKind::Parse => "parseerror",
            ErrorKind::Illformed => "illformed",
            ErrorKind::Type => "typeerror",
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One of the three error classes a program can end in.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct Error {
    pub kind: ErrorKind,
    pub message: String,
    pub pos: Option<SourcePos>,
}

impl Error {
    pub fn new(kind: ErrorKind, message: impl Into<String>, pos: Option<SourcePos>) -> Self {
        Error {
            kind,
            message: message.into(),
            pos,
        }
    }

    pub fn parse(message: impl Into<String>, pos: SourcePos) -> Self {
        Error::new(ErrorKind::Parse, message, Some(pos))
    }

    pub fn illformed(message: impl Into<String>, pos: Option<SourcePos>) -> Self {
        Error::new(ErrorKind::Illformed, message, pos)
    }

    pub fn type_error(message: impl Into<String>, pos: Option<SourcePos>) -> Self {
        Error::new(ErrorKind::Type, message, pos)
    }

    /// Attaches `pos` unless a position is already known.
    pub fn or_at(mut self, pos: SourcePos) -> Self {
        self.pos.get_or_insert(pos);
        self
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)?;
        if let Some(pos) = self.pos {
            write!(f, " at {pos}")?;
        }
        Ok(())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
