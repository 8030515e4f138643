//! Text formats for objects and results.
//!
//! Object files hold one record per line:
//!
//! ```text
//! S <id> <y> <x1> <x2>
//! Q <id> <x> <y>
//! ```
//!
//! Result files hold one line per query, sorted by query id:
//!
//! ```text
//! <query_id> <seg_id> <seg_y>
//! ```
//!
//! with `0 -inf` for the sentinel. Numbers are written in the shortest form
//! that parses back to the same double, so files round-trip exactly.

use std::error::Error;
use std::fmt;
use std::io::{self, BufRead, Write};

use crate::object::{PlaneObject, StabAnswer};

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl Error for ParseError {}

fn parse_field<T: std::str::FromStr>(
    field: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, ParseError> {
    let raw = field.ok_or_else(|| ParseError::new(line, format!("missing {what}")))?;
    raw.parse()
        .map_err(|_| ParseError::new(line, format!("bad {what}: {raw:?}")))
}

/// Parses an object file. I/O errors are reported at the line they occur.
pub fn parse_objects<R: BufRead>(reader: R) -> Result<Vec<PlaneObject>, ParseError> {
    let mut objects = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| ParseError::new(lineno, format!("read error: {e}")))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut fields = trimmed.split_ascii_whitespace();
        match fields.next() {
            Some("S") => {
                let id = parse_field(fields.next(), lineno, "segment id")?;
                let y = parse_field(fields.next(), lineno, "segment y")?;
                let x1: f64 = parse_field(fields.next(), lineno, "segment x1")?;
                let x2: f64 = parse_field(fields.next(), lineno, "segment x2")?;
                if x1 > x2 {
                    return Err(ParseError::new(lineno, format!("x1 > x2 ({x1} > {x2})")));
                }
                objects.push(PlaneObject::segment(id, y, x1, x2));
            }
            Some("Q") => {
                let id = parse_field(fields.next(), lineno, "query id")?;
                let x = parse_field(fields.next(), lineno, "query x")?;
                let y = parse_field(fields.next(), lineno, "query y")?;
                objects.push(PlaneObject::query(id, x, y));
            }
            Some(other) => {
                return Err(ParseError::new(
                    lineno,
                    format!("unknown record kind {other:?}"),
                ));
            }
            None => unreachable!("trimmed line is non-empty"),
        }
        if fields.next().is_some() {
            return Err(ParseError::new(lineno, "trailing fields"));
        }
    }
    Ok(objects)
}

pub fn write_objects<W: Write>(writer: &mut W, objects: &[PlaneObject]) -> io::Result<()> {
    for obj in objects {
        if obj.is_segment() {
            writeln!(writer, "S {} {} {} {}", obj.id, obj.y, obj.x1, obj.x2)?;
        } else {
            writeln!(writer, "Q {} {} {}", obj.id, obj.x1, obj.y)?;
        }
    }
    Ok(())
}

/// Writes results sorted by query id.
pub fn write_results<W: Write>(
    writer: &mut W,
    answers: &mut Vec<(u32, StabAnswer)>,
) -> io::Result<()> {
    answers.sort_unstable_by_key(|&(id, _)| id);
    for &(id, ans) in answers.iter() {
        writeln!(writer, "{} {} {}", id, ans.seg_id, ans.seg_y)?;
    }
    Ok(())
}

pub fn parse_results<R: BufRead>(reader: R) -> Result<Vec<(u32, StabAnswer)>, ParseError> {
    let mut answers = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| ParseError::new(lineno, format!("read error: {e}")))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut fields = trimmed.split_ascii_whitespace();
        let id = parse_field(fields.next(), lineno, "query id")?;
        let seg_id = parse_field(fields.next(), lineno, "segment id")?;
        let seg_y = parse_field(fields.next(), lineno, "segment y")?;
        if fields.next().is_some() {
            return Err(ParseError::new(lineno, "trailing fields"));
        }
        answers.push((id, StabAnswer::new(seg_y, seg_id)));
    }
    Ok(answers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::object::ObjectKind;

    #[test]
    fn object_round_trip() {
        let objects = vec![
            PlaneObject::segment(1, 10.5, 0.1, 100.0),
            PlaneObject::query(0, 33.25, 7.0),
            PlaneObject::segment(2, 0.1 + 0.2, 1e-300, 1e300),
        ];
        let mut buf = Vec::new();
        write_objects(&mut buf, &objects).unwrap();
        let parsed = parse_objects(buf.as_slice()).unwrap();
        assert_eq!(parsed.len(), objects.len());
        for (a, b) in objects.iter().zip(&parsed) {
            assert_eq!(a.kind, b.kind);
            assert_eq!(a.id, b.id);
            assert_eq!(a.y.to_bits(), b.y.to_bits());
            assert_eq!(a.x1.to_bits(), b.x1.to_bits());
            assert_eq!(a.x2.to_bits(), b.x2.to_bits());
        }
    }

    #[test]
    fn results_round_trip_including_sentinel() {
        let mut answers = vec![
            (3, StabAnswer::new(12.75, 4)),
            (1, StabAnswer::SENTINEL),
            (2, StabAnswer::new(-0.5, 9)),
        ];
        let mut buf = Vec::new();
        write_results(&mut buf, &mut answers).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().next().unwrap().ends_with("0 -inf"));
        let parsed = parse_results(buf.as_slice()).unwrap();
        assert_eq!(parsed.len(), 3);
        assert_eq!(parsed[0].0, 1);
        assert!(parsed[0].1.is_sentinel());
        assert_eq!(parsed[2], (3, StabAnswer::new(12.75, 4)));
    }

    #[test]
    fn parse_error_names_the_line() {
        let input = "S 1 2 0 5\nQ 7 oops 3\n";
        let err = parse_objects(input.as_bytes()).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn rejects_inverted_segment() {
        let err = parse_objects("S 1 2 5 0\n".as_bytes()).unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn queries_parse_x_then_y() {
        let objs = parse_objects("Q 5 1.5 9.0\n".as_bytes()).unwrap();
        assert_eq!(objs[0].kind, ObjectKind::Query);
        assert_eq!(objs[0].x1, 1.5);
        assert_eq!(objs[0].y, 9.0);
    }
}
