//! Two-state run-length-encoded pattern I/O, Golly-compatible.
//!
//! Seeds are colour-free genomes, so only the two-state alphabet is needed:
//! `b` dead, `o` alive, `$` end of row, `!` end of pattern, with optional run
//! counts. Colours are assigned at match time.

use crate::genome::Seed;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RleError {
    #[error("line {line}, column {col}: {message}")]
    Malformed { line: usize, col: usize, message: String },
    #[error("pattern body ended without '!'")]
    MissingTerminator,
}

fn err(line: usize, col: usize, message: impl Into<String>) -> RleError {
    RleError::Malformed { line, col, message: message.into() }
}

/// Parses an RLE pattern into a seed. `#` comment lines are skipped; the
/// header must declare `x` and `y`, and if a rule is present it must be
/// B3/S23.
pub fn parse_rle(text: &str) -> Result<Seed, RleError> {
    let mut lines = text.lines().enumerate();
    let (header_no, header) = loop {
        match lines.next() {
            Some((no, line)) => {
                let trimmed = line.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    continue;
                }
                break (no + 1, trimmed);
            }
            None => return Err(err(1, 1, "missing header line")),
        }
    };

    let (width, height) = parse_header(header_no, header)?;
    let mut seed = Seed::zeros(height, width)
        .map_err(|_| err(header_no, 1, format!("bad dimensions x = {width}, y = {height}")))?;

    let mut x = 0usize;
    let mut y = 0usize;
    let mut run: Option<usize> = None;
    for (no, line) in lines {
        let line_no = no + 1;
        let mut col_iter = line.char_indices().peekable();
        while let Some((ci, ch)) = col_iter.next() {
            let col = ci + 1;
            match ch {
                '0'..='9' => {
                    let mut value = ch.to_digit(10).unwrap() as usize;
                    while let Some(&(_, d)) = col_iter.peek() {
                        if let Some(dv) = d.to_digit(10) {
                            value = value
                                .checked_mul(10)
                                .and_then(|v| v.checked_add(dv as usize))
                                .ok_or_else(|| err(line_no, col, "run count overflow"))?;
                            col_iter.next();
                        } else {
                            break;
                        }
                    }
                    run = Some(value);
                }
                'b' | 'o' => {
                    let n = run.take().unwrap_or(1);
                    if x + n > width {
                        return Err(err(
                            line_no,
                            col,
                            format!("run of {n} exceeds declared width {width}"),
                        ));
                    }
                    if y >= height {
                        return Err(err(
                            line_no,
                            col,
                            format!("row {y} exceeds declared height {height}"),
                        ));
                    }
                    if ch == 'o' {
                        for c in x..x + n {
                            seed.set(y, c, true);
                        }
                    }
                    x += n;
                }
                '$' => {
                    let n = run.take().unwrap_or(1);
                    y += n;
                    x = 0;
                    if y > height {
                        return Err(err(
                            line_no,
                            col,
                            format!("row terminator reaches row {y}, past declared height {height}"),
                        ));
                    }
                }
                '!' => {
                    if let Some(n) = run {
                        return Err(err(line_no, col, format!("dangling run count {n} before '!'")));
                    }
                    return Ok(seed);
                }
                c if c.is_whitespace() => {}
                other => {
                    return Err(err(line_no, col, format!("unexpected character '{other}'")));
                }
            }
        }
    }
    Err(RleError::MissingTerminator)
}

fn parse_header(line_no: usize, header: &str) -> Result<(usize, usize), RleError> {
    let mut width = None;
    let mut height = None;
    for (i, part) in header.split(',').enumerate() {
        let Some((key, value)) = part.split_once('=') else {
            return Err(err(line_no, i + 1, format!("malformed header clause '{}'", part.trim())));
        };
        let key = key.trim();
        let value = value.trim();
        match key {
            "x" => {
                width = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| err(line_no, 1, format!("bad width '{value}'")))?,
                );
            }
            "y" => {
                height = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| err(line_no, 1, format!("bad height '{value}'")))?,
                );
            }
            "rule" => {
                if !value.eq_ignore_ascii_case("B3/S23") {
                    return Err(err(line_no, 1, format!("unsupported rule '{value}', expected B3/S23")));
                }
            }
            other => {
                return Err(err(line_no, 1, format!("unknown header key '{other}'")));
            }
        }
    }
    match (width, height) {
        (Some(w), Some(h)) if w > 0 && h > 0 => Ok((w, h)),
        (Some(_), Some(_)) => Err(err(line_no, 1, "dimensions must be positive")),
        _ => Err(err(line_no, 1, "header must declare x and y")),
    }
}

/// Writes a seed as minimal RLE: runs are merged, trailing dead cells in each
/// row are dropped, consecutive row ends collapse into a counted `$`, and
/// body lines wrap at 70 characters.
pub fn write_rle(seed: &Seed) -> String {
    let mut out = format!("x = {}, y = {}, rule = B3/S23\n", seed.cols(), seed.rows());
    let mut body = String::new();

    fn push_token(s: &mut String, t: &str) {
        let last_len = s.rsplit('\n').next().unwrap_or("").len();
        if last_len + t.len() > 70 {
            s.push('\n');
        }
        s.push_str(t);
    }
    fn push_run(s: &mut String, n: usize, ch: char) {
        match n {
            0 => {}
            1 => push_token(s, &ch.to_string()),
            _ => push_token(s, &format!("{n}{ch}")),
        }
    }

    let mut pending_terminators = 0usize;
    for r in 0..seed.rows() {
        let last_live = (0..seed.cols()).rev().find(|&c| seed.get(r, c));
        let Some(last_live) = last_live else {
            pending_terminators += 1;
            continue;
        };
        push_run(&mut body, pending_terminators, '$');
        pending_terminators = 1;
        let mut c = 0;
        while c <= last_live {
            let bit = seed.get(r, c);
            let mut n = 1;
            while c + n <= last_live && seed.get(r, c + n) == bit {
                n += 1;
            }
            push_run(&mut body, n, if bit { 'o' } else { 'b' });
            c += n;
        }
    }
    push_token(&mut body, "!");
    out.push_str(&body);
    out.push('\n');
    out
}

/// Canonical digest of a seed: SHA-256 of its RLE text, in hex.
pub fn seed_digest(seed: &Seed) -> String {
    let bytes = Sha256::digest(write_rle(seed).as_bytes());
    let mut s = String::with_capacity(64);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_blinker() {
        let seed = parse_rle("x = 3, y = 1, rule = B3/S23\n3o!").unwrap();
        assert_eq!((seed.rows(), seed.cols()), (1, 3));
        assert_eq!(seed.ones(), 3);
    }

    #[test]
    fn parses_block() {
        let seed = parse_rle("x = 2, y = 2, rule = B3/S23\n2o$2o!").unwrap();
        assert_eq!((seed.rows(), seed.cols()), (2, 2));
        assert_eq!(seed.ones(), 4);
    }

    #[test]
    fn parses_comments_and_short_rows() {
        let seed = parse_rle("#C glider\nx = 3, y = 3\nbo$2bo$3o!").unwrap();
        assert_eq!(seed, Seed::from_art(".o.\n..o\nooo").unwrap());
    }

    #[test]
    fn rejects_bad_rule() {
        let e = parse_rle("x = 2, y = 2, rule = B36/S23\n2o$2o!").unwrap_err();
        assert!(e.to_string().contains("unsupported rule"), "{e}");
    }

    #[test]
    fn rejects_unknown_characters_with_position() {
        let e = parse_rle("x = 3, y = 1\n2oz!").unwrap_err();
        match e {
            RleError::Malformed { line, col, .. } => {
                assert_eq!((line, col), (2, 3));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_run_past_width() {
        let e = parse_rle("x = 3, y = 1\n4o!").unwrap_err();
        assert!(e.to_string().contains("exceeds declared width"), "{e}");
    }

    #[test]
    fn rejects_missing_terminator() {
        assert_eq!(parse_rle("x = 2, y = 2\n2o$2o"), Err(RleError::MissingTerminator));
    }

    #[test]
    fn writes_minimal_runs() {
        let block = Seed::new(2, 2, vec![1; 4]).unwrap();
        assert_eq!(write_rle(&block), "x = 2, y = 2, rule = B3/S23\n2o$2o!\n");
        let blinker = Seed::new(1, 3, vec![1; 3]).unwrap();
        assert_eq!(write_rle(&blinker), "x = 3, y = 1, rule = B3/S23\n3o!\n");
    }

    #[test]
    fn all_dead_seed_round_trips() {
        let empty = Seed::zeros(3, 4).unwrap();
        let text = write_rle(&empty);
        assert_eq!(parse_rle(&text).unwrap(), empty);
    }

    #[test]
    fn digest_is_stable_and_distinguishes_seeds() {
        let a = Seed::from_art("oo\noo").unwrap();
        let b = Seed::from_art("oo\no.").unwrap();
        assert_eq!(seed_digest(&a), seed_digest(&a));
        assert_ne!(seed_digest(&a), seed_digest(&b));
        assert_eq!(seed_digest(&a).len(), 64);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]
        #[test]
        fn round_trip_identity(
            rows in 1usize..20,
            cols in 1usize..20,
            fill in prop::collection::vec(prop::bool::ANY, 400),
        ) {
            let bits: Vec<u8> = (0..rows * cols).map(|i| fill[i] as u8).collect();
            let seed = Seed::new(rows, cols, bits).unwrap();
            let text = write_rle(&seed);
            prop_assert_eq!(parse_rle(&text).unwrap(), seed);
        }
    }
}
