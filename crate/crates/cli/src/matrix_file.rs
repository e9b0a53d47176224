//! Matrix files: `#` comments, the size `n` on the first content line, then
//! `n` rows of `n` integers. LF or CRLF line endings.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

pub fn parse(text: &str) -> Result<Vec<Vec<i64>>, ParseError> {
    let mut content = text.lines().enumerate().filter_map(|(k, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((k + 1, line))
    });
    let (size_line, size_text) = content.next().ok_or_else(|| err(1, "missing matrix size"))?;
    let n: usize = size_text
        .parse()
        .map_err(|_| err(size_line, format!("expected the matrix size, found `{size_text}`")))?;
    if n == 0 {
        return Err(err(size_line, "matrix size must be positive"));
    }
    let mut rows = Vec::with_capacity(n);
    for r in 0..n {
        let (line, row_text) = content.next().ok_or_else(|| err(size_line, format!("expected {n} rows, found {r}")))?;
        let row = row_text
            .split_whitespace()
            .map(|tok| tok.parse::<i64>().map_err(|_| err(line, format!("`{tok}` is not an integer"))))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != n {
            return Err(err(line, format!("row has {} entries, expected {n}", row.len())));
        }
        rows.push(row);
    }
    if let Some((line, _)) = content.next() {
        return Err(err(line, "unexpected content after the last row"));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_crlf() {
        let text = "# affine\r\n2\r\n 2 -2 # first\r\n\r\n-2 2\r\n";
        assert_eq!(parse(text).unwrap(), vec![vec![2, -2], vec![-2, 2]]);
    }

    #[test]
    fn reports_line_numbers() {
        assert_eq!(parse("2\n2 -1\n-1\n").unwrap_err().line, 3);
        assert_eq!(parse("# x\nfoo\n").unwrap_err().line, 2);
        assert_eq!(parse("1\n2\n3\n").unwrap_err().line, 3);
        assert!(parse("").is_err());
        assert_eq!(parse("2\n2 x\n").unwrap_err().message, "`x` is not an integer");
    }
}
