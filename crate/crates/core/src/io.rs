//! Text dump formats.
//!
//! Matrix dump: a header line `n rows cols`, then `rows` lines of
//! space-separated values with 17 significant digits.
//!
//! Factorization dump: a header line `n r`, then U (n rows of r values), a
//! blank line, then V (r rows of n values), same numeric format.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::factorize::Factorization;
use crate::matrix::Matrix;
use crate::slack::SlackMatrix;

/// 17 significant digits round-trip f64 exactly.
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_rows<W: Write>(w: &mut W, m: &Matrix) -> std::io::Result<()> {
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|&x| fmt17(x)).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn write_matrix<W: Write>(w: &mut W, s: &SlackMatrix) -> std::io::Result<()> {
    writeln!(w, "{} {} {}", s.n(), s.matrix().rows(), s.matrix().cols())?;
    write_rows(w, s.matrix())
}

pub fn write_factorization<W: Write>(w: &mut W, f: &Factorization) -> std::io::Result<()> {
    writeln!(w, "{} {}", f.n(), f.r())?;
    write_rows(w, f.u())?;
    writeln!(w)?;
    write_rows(w, f.v())
}

fn parse_header(line: &str, want: usize) -> Result<Vec<usize>> {
    let fields: Vec<usize> = line
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad header field {t:?}")))
        })
        .collect::<Result<_>>()?;
    if fields.len() != want {
        return Err(Error::Parse(format!(
            "header has {} fields, expected {want}",
            fields.len()
        )));
    }
    Ok(fields)
}

fn parse_row(line: &str, cols: usize, what: &str) -> Result<Vec<f64>> {
    let row: Vec<f64> = line
        .split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad value {t:?} in {what}")))
        })
        .collect::<Result<_>>()?;
    if row.len() != cols {
        return Err(Error::Parse(format!(
            "{what} row has {} values, expected {cols}",
            row.len()
        )));
    }
    Ok(row)
}

fn next_nonempty<R: BufRead>(lines: &mut std::io::Lines<R>, what: &str) -> Result<String> {
    for line in lines.by_ref() {
        let line = line.map_err(|e| Error::Parse(format!("read error: {e}")))?;
        if !line.trim().is_empty() {
            return Ok(line);
        }
    }
    Err(Error::Parse(format!("unexpected end of file in {what}")))
}

/// Reads a matrix dump. The stored scale is unknown to the reader and set
/// to 1; verification never consults it.
pub fn read_matrix<R: BufRead>(r: R) -> Result<SlackMatrix> {
    let mut lines = r.lines();
    let header = next_nonempty(&mut lines, "matrix header")?;
    let h = parse_header(&header, 3)?;
    let (n, rows, cols) = (h[0], h[1], h[2]);
    if rows != n || cols != n {
        return Err(Error::Parse(format!(
            "slack matrix dump must be square n x n, got n={n}, {rows}x{cols}"
        )));
    }
    let mut data = Vec::with_capacity(rows);
    for i in 0..rows {
        let line = next_nonempty(&mut lines, &format!("matrix row {i}"))?;
        data.push(parse_row(&line, cols, "matrix")?);
    }
    Ok(SlackMatrix::from_parts(n, 1.0, Matrix::from_rows(&data)))
}

pub fn read_factorization<R: BufRead>(r: R) -> Result<Factorization> {
    let mut lines = r.lines();
    let header = next_nonempty(&mut lines, "factorization header")?;
    let h = parse_header(&header, 2)?;
    let (n, rank) = (h[0], h[1]);
    let mut u = Vec::with_capacity(n);
    for i in 0..n {
        let line = next_nonempty(&mut lines, &format!("U row {i}"))?;
        u.push(parse_row(&line, rank, "U")?);
    }
    let mut v = Vec::with_capacity(rank);
    for i in 0..rank {
        let line = next_nonempty(&mut lines, &format!("V row {i}"))?;
        v.push(parse_row(&line, n, "V")?);
    }
    Factorization::new(n, 1.0, Matrix::from_rows(&u), Matrix::from_rows(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorize::{recursive_factorize, verify_factorization};
    use crate::slack::slack_matrix;

    #[test]
    fn matrix_round_trip_is_exact() {
        let s = slack_matrix(11, false).unwrap();
        let mut buf = Vec::new();
        write_matrix(&mut buf, &s).unwrap();
        let back = read_matrix(&buf[..]).unwrap();
        assert_eq!(back.n(), 11);
        assert_eq!(back.matrix(), s.matrix());
    }

    #[test]
    fn factorization_round_trip_is_exact() {
        let f = recursive_factorize(11).unwrap();
        let mut buf = Vec::new();
        write_factorization(&mut buf, &f).unwrap();
        let back = read_factorization(&buf[..]).unwrap();
        assert_eq!(back.u(), f.u());
        assert_eq!(back.v(), f.v());

        let s = slack_matrix(11, false).unwrap();
        assert!(verify_factorization(&s, &back, 1e-10).unwrap().pass);
    }

    #[test]
    fn header_format() {
        let s = slack_matrix(5, false).unwrap();
        let mut buf = Vec::new();
        write_matrix(&mut buf, &s).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("5 5 5\n"));
        // 17 significant digits
        assert!(text.contains("e0") || text.contains("e-"));
    }

    #[test]
    fn malformed_dumps_are_rejected() {
        assert!(read_matrix("3 3".as_bytes()).is_err());
        assert!(read_matrix("3 3 4\n1 2 3 4\n".as_bytes()).is_err());
        assert!(read_matrix("3 3 3\n1 2\n".as_bytes()).is_err());
        assert!(read_factorization("4 x\n".as_bytes()).is_err());
        assert!(read_factorization("4 2\n1 2\n".as_bytes()).is_err());
    }
}
