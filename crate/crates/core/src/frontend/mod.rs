//! Python 3 front-end: decoding, parsing, and effective line counting.
//!
//! Parsing is delegated to `rustpython-parser`. Each file either parses
//! completely or becomes a failed [`ParseOutcome`]; there is no error
//! recovery, and a failure never aborts the surrounding run.

mod encoding;
mod lines;
mod lower;
pub mod tree;

use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use rustpython_parser::{lexer, Mode};
use serde::{Deserialize, Serialize};

pub use encoding::{coding_declaration, decode_source, DecodeError};
pub use lines::{count_physical_lines, CodeLines, LineIndex};
pub use tree::{LineSpan, Node, NodeKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub path: PathBuf,
    pub text: String,
    pub physical_lines: usize,
}

impl SourceFile {
    pub fn new(path: impl Into<PathBuf>, text: impl Into<String>) -> Self {
        let text = text.into();
        let physical_lines = count_physical_lines(&text);
        Self {
            path: path.into(),
            text,
            physical_lines,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntaxTree {
    pub root: Node,
    pub lines: CodeLines,
}

impl SyntaxTree {
    /// Effective lines of code within a node's span.
    pub fn effective_loc(&self, node: &Node) -> u32 {
        self.lines.count(node.span)
    }

    pub fn file_loc(&self) -> u32 {
        self.lines.total()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Decode,
    Syntax,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseFailure {
    pub kind: FailureKind,
    pub line: Option<u32>,
    pub column: Option<u32>,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParseStatus {
    Parsed,
    Failed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseOutcome {
    pub path: PathBuf,
    pub physical_lines: usize,
    pub result: Result<SyntaxTree, ParseFailure>,
}

impl ParseOutcome {
    pub fn status(&self) -> ParseStatus {
        match self.result {
            Ok(_) => ParseStatus::Parsed,
            Err(_) => ParseStatus::Failed,
        }
    }

    pub fn tree(&self) -> Option<&SyntaxTree> {
        self.result.as_ref().ok()
    }

    pub fn error(&self) -> Option<&ParseFailure> {
        self.result.as_ref().err()
    }

    /// Failed outcome for a file that could not be read or decoded.
    pub fn undecodable(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            physical_lines: 0,
            result: Err(ParseFailure {
                kind: FailureKind::Decode,
                line: None,
                column: None,
                message: message.into(),
            }),
        }
    }
}

/// Parses one module. Never panics and never aborts: syntax errors and
/// parser faults both come back as failed outcomes.
pub fn parse_file(file: &SourceFile) -> ParseOutcome {
    let result = panic::catch_unwind(AssertUnwindSafe(|| parse_text(&file.text, file.physical_lines)))
        .unwrap_or_else(|payload| {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "parser panicked".to_string());
            log::error!("internal parser fault in {}: {message}", file.path.display());
            Err(ParseFailure {
                kind: FailureKind::Internal,
                line: None,
                column: None,
                message,
            })
        });
    ParseOutcome {
        path: file.path.clone(),
        physical_lines: file.physical_lines,
        result,
    }
}

/// Lexes the whole text, stopping after the first error: the lexer does not
/// advance past some errors and would otherwise repeat them forever.
fn tokenize(text: &str) -> Vec<lexer::LexResult> {
    let mut tokens = Vec::new();
    for token in lexer::lex(text, Mode::Module) {
        let failed = token.is_err();
        tokens.push(token);
        if failed {
            break;
        }
    }
    tokens
}

fn parse_text(text: &str, physical_lines: usize) -> Result<SyntaxTree, ParseFailure> {
    let index = LineIndex::new(text);
    let tokens = tokenize(text);
    let lines = CodeLines::from_tokens(&tokens, &index, physical_lines);
    let module = rustpython_parser::parse_tokens(tokens, Mode::Module, "<module>").map_err(|err| {
        let (line, column) = index.location(text, err.offset.to_usize());
        ParseFailure {
            kind: FailureKind::Syntax,
            line: Some(line),
            column: Some(column),
            message: err.error.to_string(),
        }
    })?;
    let suite = match module {
        rustpython_parser::ast::Mod::Module(module) => module.body,
        _ => unreachable!("module mode yields a module"),
    };
    let root = lower::Lowerer::new(&index).module(&suite, physical_lines);
    Ok(SyntaxTree { root, lines })
}

/// Reads and decodes a file from disk; undecodable or unreadable files become
/// failed outcomes through [`ParseOutcome::undecodable`].
pub fn read_source(path: &Path, display_path: impl Into<PathBuf>) -> Result<SourceFile, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("cannot read: {e}"))?;
    let text = decode_source(&bytes).map_err(|e| e.to_string())?;
    Ok(SourceFile::new(display_path, text))
}

/// Effective lines of code of a whole source text: lines with at least one
/// token that is neither a comment nor whitespace. Returns `None` when the
/// text does not lex.
pub fn effective_loc_of_text(text: &str) -> Option<u32> {
    let index = LineIndex::new(text);
    let tokens = tokenize(text);
    if tokens.iter().any(|t| t.is_err()) {
        return None;
    }
    Some(CodeLines::from_tokens(&tokens, &index, count_physical_lines(text)).total())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParseStats {
    pub parsed: usize,
    pub total: usize,
    pub ratio: f64,
}

/// Parsed/total counts. An empty input yields a ratio of 1.0 and a warning.
pub fn parse_stats<'a>(outcomes: impl IntoIterator<Item = &'a ParseOutcome>) -> ParseStats {
    let (parsed, total) = outcomes.into_iter().fold((0, 0), |(parsed, total), o| {
        (parsed + usize::from(o.status() == ParseStatus::Parsed), total + 1)
    });
    ParseStats::from_counts(parsed, total)
}

impl ParseStats {
    pub fn from_counts(parsed: usize, total: usize) -> Self {
        let ratio = if total == 0 {
            log::debug!("parse ratio requested for an empty file set; using 1.0");
            1.0
        } else {
            parsed as f64 / total as f64
        };
        Self {
            parsed,
            total,
            ratio,
        }
    }
}
