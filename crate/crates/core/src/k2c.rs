//! K2C text format for two-colourings of `K_n`.
//!
//! ```text
//! K2C v1
//! n=3
//! -RB
//! R-R
//! BR-
//! ```
//!
//! `R` red, `B` blue, `-` exactly on the diagonal. LF line endings and a
//! final newline are required. Rows and columns in messages are 0-based
//! matrix indices; line and column positions are 1-based.

use crate::coloring::Coloring;
use crate::error::{Error, Result};

pub const HEADER: &str = "K2C v1";

/// Upper limit on `n` accepted by the parser.
pub const MAX_N: usize = 1 << 14;

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_k2c(text: &str) -> Result<Coloring> {
    if text.is_empty() {
        return Err(err(1, 1, "empty input"));
    }
    if let Some(pos) = text.find('\r') {
        let line = text[..pos].matches('\n').count() + 1;
        let col = pos - text[..pos].rfind('\n').map_or(0, |p| p + 1) + 1;
        return Err(err(line, col, "carriage return; K2C uses LF line endings"));
    }
    let Some(body) = text.strip_suffix('\n') else {
        let line = text.matches('\n').count() + 1;
        let col = text.len() - text.rfind('\n').map_or(0, |p| p + 1) + 1;
        return Err(err(line, col, "missing final newline"));
    };
    let lines: Vec<&str> = body.split('\n').collect();

    if lines[0] != HEADER {
        return Err(err(1, 1, format!("expected header {HEADER:?}, found {:?}", lines[0])));
    }
    let Some(size_line) = lines.get(1) else {
        return Err(err(2, 1, "missing size line"));
    };
    let Some(digits) = size_line.strip_prefix("n=") else {
        return Err(err(2, 1, "expected `n=<decimal>`"));
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || (digits.len() > 1 && digits.starts_with('0')) {
        return Err(err(2, 3, format!("invalid size {digits:?}")));
    }
    let n: usize = digits
        .parse()
        .ok()
        .filter(|&n| n <= MAX_N)
        .ok_or_else(|| err(2, 3, format!("size {digits} exceeds {MAX_N}")))?;
    if n == 0 {
        return Err(err(2, 3, "size must be at least 1"));
    }

    let rows = &lines[2..];
    if rows.len() != n {
        let line = 3 + rows.len().min(n);
        return Err(err(
            line,
            1,
            format!("size mismatch: n={n} but {} matrix rows", rows.len()),
        ));
    }
    let mut cells = vec![0u8; n * n];
    for (i, row) in rows.iter().enumerate() {
        let line = i + 3;
        let bytes = row.as_bytes();
        for (j, &ch) in bytes.iter().enumerate().take(n) {
            let ok = match ch {
                b'-' => i == j,
                b'R' | b'B' => i != j,
                _ => {
                    let shown = row[j..].chars().next().unwrap_or('?');
                    return Err(err(line, j + 1, format!("unexpected character {shown:?}")));
                }
            };
            if !ok {
                return Err(err(
                    line,
                    j + 1,
                    format!("bad diagonal at row {i}, col {j}: '-' must appear exactly on the diagonal"),
                ));
            }
            cells[i * n + j] = ch;
        }
        if bytes.len() != n {
            return Err(err(
                line,
                bytes.len().min(n) + 1,
                format!("size mismatch: row {i} has {} characters, expected {n}", row.chars().count()),
            ));
        }
    }
    for i in 0..n {
        for j in 0..i {
            if cells[i * n + j] != cells[j * n + i] {
                return Err(err(
                    i + 3,
                    j + 1,
                    format!("symmetry error at row {i}, col {j}"),
                ));
            }
        }
    }
    Coloring::from_fn(n, |x, y| cells[x * n + y] == b'R')
}

pub fn emit_k2c(c: &Coloring) -> String {
    let n = c.n();
    let mut out = String::with_capacity(16 + n * (n + 1));
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!("n={n}\n"));
    for x in 0..n {
        for y in 0..n {
            out.push(if x == y {
                '-'
            } else if c.is_red(x, y) {
                'R'
            } else {
                'B'
            });
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn message(e: Error) -> (usize, usize, String) {
        match e {
            Error::Parse { line, column, message } => (line, column, message),
            other => panic!("not a parse error: {other:?}"),
        }
    }

    #[test]
    fn one_red_edge() {
        let c = parse_k2c("K2C v1\nn=2\n-R\nR-\n").unwrap();
        assert_eq!(c.red_edge_count(), 1);
        assert_eq!(emit_k2c(&Coloring::complete(2, true).unwrap()), "K2C v1\nn=2\n-R\nR-\n");
    }

    #[test]
    fn pentagon_has_seven_lines() {
        let text = emit_k2c(&crate::search::paley(5).unwrap());
        assert_eq!(text.lines().count(), 7);
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn symmetry_error_position() {
        let (line, col, msg) = message(parse_k2c("K2C v1\nn=3\n-BB\nB-R\nBB-\n").unwrap_err());
        assert_eq!(msg, "symmetry error at row 2, col 1");
        assert_eq!((line, col), (5, 2));
    }

    #[test]
    fn rejections() {
        let bad = [
            ("", 1, 1),
            ("K2C v1\nn=2\n-R\nR-", 4, 3),
            ("K2C v1\r\nn=1\n-\n", 1, 7),
            ("K2C v2\nn=1\n-\n", 1, 1),
            ("K2C v1\nm=1\n-\n", 2, 1),
            ("K2C v1\nn=01\n-\n", 2, 3),
            ("K2C v1\nn=0\n", 2, 3),
            ("K2C v1\nn=2\n-R\n", 4, 1),
            ("K2C v1\nn=2\n-R\nR-\n-\n", 5, 1),
            ("K2C v1\nn=2\n-RR\nR-\n", 3, 3),
            ("K2C v1\nn=2\nRR\nR-\n", 3, 1),
            ("K2C v1\nn=2\n--\nR-\n", 3, 2),
            ("K2C v1\nn=2\n-r\nR-\n", 3, 2),
            ("K2C v1\nn=2\n-R \nR-\n", 3, 3),
        ];
        for (text, line, col) in bad {
            let (l, c, msg) = message(parse_k2c(text).unwrap_err());
            assert_eq!((l, c), (line, col), "{text:?}: {msg}");
        }
    }

    proptest! {
        #[test]
        fn round_trip(n in 1usize..24, seed in any::<u64>()) {
            let c = Coloring::from_fn(n, |x, y| (seed.rotate_left((x * 7 + y) as u32) ^ (x * 31 + y) as u64) & 1 == 1).unwrap();
            let text = emit_k2c(&c);
            prop_assert_eq!(&parse_k2c(&text).unwrap(), &c);
            prop_assert_eq!(emit_k2c(&parse_k2c(&text).unwrap()), text);
        }
    }
}
