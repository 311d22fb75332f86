//! Source decoding: UTF-8 first, then a coding declaration on line 1 or 2.

use encoding_rs::Encoding;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("source is not valid UTF-8 and declares no coding")]
    NotUtf8,
    #[error("unknown source encoding `{0}`")]
    UnknownEncoding(String),
    #[error("source is not valid `{0}`")]
    Malformed(String),
}

pub fn decode_source(bytes: &[u8]) -> Result<String, DecodeError> {
    let body = bytes.strip_prefix(b"\xef\xbb\xbf").unwrap_or(bytes);
    if let Ok(text) = std::str::from_utf8(body) {
        return Ok(text.to_string());
    }
    let label = coding_declaration(bytes).ok_or(DecodeError::NotUtf8)?;
    let encoding = lookup(&label).ok_or_else(|| DecodeError::UnknownEncoding(label.clone()))?;
    encoding
        .decode_without_bom_handling_and_without_replacement(body)
        .map(|text| text.into_owned())
        .ok_or(DecodeError::Malformed(label))
}

/// Extracts the encoding name of a `# -*- coding: name -*-` style comment on
/// one of the first two lines.
pub fn coding_declaration(bytes: &[u8]) -> Option<String> {
    for line in bytes.split(|&b| b == b'\n').take(2) {
        let trimmed: &[u8] = {
            let start = line
                .iter()
                .position(|b| !matches!(b, b' ' | b'\t' | b'\x0c'))
                .unwrap_or(line.len());
            &line[start..]
        };
        if !trimmed.starts_with(b"#") {
            continue;
        }
        let Some(pos) = find(trimmed, b"coding") else {
            continue;
        };
        let rest = &trimmed[pos + b"coding".len()..];
        let Some((&sep, rest)) = rest.split_first() else {
            continue;
        };
        if sep != b':' && sep != b'=' {
            continue;
        }
        let name: String = rest
            .iter()
            .skip_while(|b| matches!(b, b' ' | b'\t'))
            .take_while(|b| b.is_ascii_alphanumeric() || matches!(b, b'-' | b'_' | b'.'))
            .map(|&b| b as char)
            .collect();
        if !name.is_empty() {
            return Some(name);
        }
    }
    None
}

fn find(haystack: &[u8], needle: &[u8]) -> Option<usize> {
    haystack.windows(needle.len()).position(|w| w == needle)
}

fn lookup(label: &str) -> Option<&'static Encoding> {
    let normalized = label.to_ascii_lowercase().replace('_', "-");
    let canonical = match normalized.as_str() {
        "latin-1" | "latin1" | "iso-8859-1" | "iso8859-1" | "l1" => "iso-8859-1",
        "utf8" | "utf-8" => "utf-8",
        "ascii" | "us-ascii" => "us-ascii",
        other => other,
    };
    Encoding::for_label(canonical.as_bytes())
}
