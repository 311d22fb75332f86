//! Byte-offset to line mapping and per-line code classification.

use rustpython_parser::lexer::LexResult;
use rustpython_parser::Tok;

use super::tree::LineSpan;

/// Number of newline-delimited lines; a trailing newline does not open an
/// extra empty line.
pub fn count_physical_lines(text: &str) -> usize {
    if text.is_empty() {
        return 0;
    }
    let newlines = text.bytes().filter(|&b| b == b'\n').count();
    if text.ends_with('\n') {
        newlines
    } else {
        newlines + 1
    }
}

#[derive(Debug, Clone)]
pub struct LineIndex {
    starts: Vec<usize>,
}

impl LineIndex {
    pub fn new(text: &str) -> Self {
        let mut starts = vec![0];
        starts.extend(
            text.bytes()
                .enumerate()
                .filter(|&(_, b)| b == b'\n')
                .map(|(i, _)| i + 1),
        );
        Self { starts }
    }

    /// 1-based line holding `offset`.
    pub fn line_of(&self, offset: usize) -> u32 {
        let idx = match self.starts.binary_search(&offset) {
            Ok(exact) => exact,
            Err(insert) => insert - 1,
        };
        idx as u32 + 1
    }

    /// 1-based (line, column) with the column counted in characters.
    pub fn location(&self, text: &str, offset: usize) -> (u32, u32) {
        let line = self.line_of(offset);
        let start = self.starts[line as usize - 1];
        let offset = offset.min(text.len());
        let column = text
            .get(start..offset)
            .map_or(offset - start, |prefix| prefix.chars().count());
        (line, column as u32 + 1)
    }

    /// Line span of a half-open byte range.
    pub fn span(&self, start: usize, end: usize) -> LineSpan {
        let first = self.line_of(start);
        let last = if end > start {
            self.line_of(end - 1)
        } else {
            first
        };
        LineSpan::new(first, last.max(first))
    }
}

/// Marks which physical lines carry at least one token that is neither a
/// comment nor layout (newline, indent, dedent).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CodeLines {
    code: Vec<bool>,
}

impl CodeLines {
    pub fn from_tokens(tokens: &[LexResult], index: &LineIndex, physical_lines: usize) -> Self {
        let mut code = vec![false; physical_lines];
        for (tok, range) in tokens.iter().flatten() {
            if is_layout(tok) {
                continue;
            }
            let span = index.span(range.start().to_usize(), range.end().to_usize());
            for line in span.start..=span.end {
                if let Some(slot) = code.get_mut(line as usize - 1) {
                    *slot = true;
                }
            }
        }
        Self { code }
    }

    /// Builds the classification from an explicit per-line flag list.
    pub fn from_flags(code: Vec<bool>) -> Self {
        Self { code }
    }

    pub fn physical_lines(&self) -> usize {
        self.code.len()
    }

    pub fn is_code(&self, line: u32) -> bool {
        line >= 1 && self.code.get(line as usize - 1).copied().unwrap_or(false)
    }

    /// Effective lines of code inside `span`.
    pub fn count(&self, span: LineSpan) -> u32 {
        (span.start..=span.end).filter(|&l| self.is_code(l)).count() as u32
    }

    /// Effective lines of code of the whole file.
    pub fn total(&self) -> u32 {
        self.code.iter().filter(|&&c| c).count() as u32
    }
}

fn is_layout(tok: &Tok) -> bool {
    matches!(
        tok,
        Tok::Newline | Tok::NonLogicalNewline | Tok::Indent | Tok::Dedent | Tok::EndOfFile | Tok::Comment(_)
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn physical_line_counting() {
        assert_eq!(count_physical_lines(""), 0);
        assert_eq!(count_physical_lines("\n"), 1);
        assert_eq!(count_physical_lines("a\nb"), 2);
        assert_eq!(count_physical_lines("a\nb\n"), 2);
        assert_eq!(count_physical_lines("a\n\n"), 2);
    }

    #[test]
    fn line_lookup() {
        let text = "ab\ncd\n\nef";
        let index = LineIndex::new(text);
        assert_eq!(index.line_of(0), 1);
        assert_eq!(index.line_of(2), 1);
        assert_eq!(index.line_of(3), 2);
        assert_eq!(index.line_of(6), 3);
        assert_eq!(index.line_of(7), 4);
        assert_eq!(index.location(text, 8), (4, 2));
        assert_eq!(index.span(3, 9), LineSpan::new(2, 4));
    }
}
