//! Source spans and diagnostics.

use std::fmt::Write as _;

use serde::Serialize;

/// Byte range `[start, end)` into the session text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

/// 1-based line and column of a byte offset (columns count characters).
pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(src.len());
    let before = &src[..offset];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |p| p + 1);
    (line, src[line_start..offset].chars().count() + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub span: Span,
    pub message: String,
    /// Tokens that would have been accepted, when the error is syntactic.
    pub expected: Vec<String>,
}

impl Diagnostic {
    pub fn new(span: Span, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            span,
            message: message.into(),
            expected: Vec::new(),
        }
    }

    pub fn expected(span: Span, found: &str, expected: Vec<String>) -> Diagnostic {
        let list = join_alternatives(&expected);
        Diagnostic {
            span,
            message: format!("expected {list}, found {found}"),
            expected,
        }
    }

    /// `line:col: error: message` followed by the source line and a caret.
    pub fn render(&self, src: &str, origin: &str) -> String {
        let (line, col) = line_col(src, self.span.start);
        let mut out = String::new();
        let _ = writeln!(out, "{origin}:{line}:{col}: error: {}", self.message);
        let text = src.lines().nth(line - 1).unwrap_or("");
        let width = src[self.span.start.min(src.len())..self.span.end.min(src.len())]
            .chars()
            .count()
            .max(1);
        let width = width.min(text.chars().count().saturating_sub(col - 1).max(1));
        let _ = writeln!(out, "  {text}");
        let _ = write!(out, "  {}{}", " ".repeat(col - 1), "^".repeat(width));
        out
    }
}

fn join_alternatives(items: &[String]) -> String {
    match items.len() {
        0 => "something else".into(),
        1 => items[0].clone(),
        n => format!("{} or {}", items[..n - 1].join(", "), items[n - 1]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions() {
        let src = "ab\ncd\n";
        assert_eq!(line_col(src, 0), (1, 1));
        assert_eq!(line_col(src, 4), (2, 2));
        assert_eq!(line_col(src, 6), (3, 1));
    }

    #[test]
    fn rendering_points_at_the_span() {
        let d = Diagnostic::expected(Span::new(13, 14), "`/`", vec!["`]`".into(), "`,`".into()]);
        let text = d.render("ring A = QQ[x/(;", "s");
        assert!(
            text.starts_with("s:1:14: error: expected `]` or `,`, found `/`"),
            "{text}"
        );
        assert!(text.ends_with(&format!("  {}^", " ".repeat(13))), "{text}");
    }
}
