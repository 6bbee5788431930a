//! Stable on-disk formats: a binary complex-matrix container, CSV tables and JSON.
//!
//! Floats are written with Rust's shortest round-trip formatting, so output is
//! locale independent and byte-identical across reruns.

use std::io::{Read, Write};
use std::path::Path;

use faer::Mat;
use serde::Serialize;

use crate::classical::Interval;
use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};
use crate::phase_space::HusimiField;
use crate::spectral::{lifetime, CountReport, Spectrum};

/// Eight-byte header of the binary matrix format.
pub const MATRIX_MAGIC: &[u8; 8] = b"OQMAPv1\0";

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Magic, `u64` rows, `u64` cols, then column-major interleaved `(re, im)` doubles, all little-endian.
pub fn write_matrix_binary<W: Write>(mut w: W, m: &CMat) -> Result<()> {
    let mut buf = Vec::with_capacity(24 + 16 * m.nrows() * m.ncols());
    buf.extend_from_slice(MATRIX_MAGIC);
    buf.extend_from_slice(&(m.nrows() as u64).to_le_bytes());
    buf.extend_from_slice(&(m.ncols() as u64).to_le_bytes());
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_matrix_binary<R: Read>(mut r: R) -> Result<CMat> {
    let mut header = [0u8; 24];
    r.read_exact(&mut header)?;
    if &header[..8] != MATRIX_MAGIC {
        return Err(Error::Io("bad matrix magic".into()));
    }
    let word = |k: usize| u64::from_le_bytes(header[k..k + 8].try_into().expect("8 bytes")) as usize;
    let (rows, cols) = (word(8), word(16));
    let len = rows
        .checked_mul(cols)
        .and_then(|x| x.checked_mul(16))
        .ok_or_else(|| Error::Io(format!("matrix shape {rows}x{cols} overflows")))?;
    let mut body = vec![0u8; len];
    r.read_exact(&mut body)?;
    let f = |k: usize| f64::from_le_bytes(body[k..k + 8].try_into().expect("8 bytes"));
    Ok(Mat::from_fn(rows, cols, |i, j| {
        let k = 16 * (j * rows + i);
        C64::new(f(k), f(k + 8))
    }))
}

pub fn save_matrix(path: &Path, m: &CMat) -> Result<()> {
    write_matrix_binary(std::io::BufWriter::new(std::fs::File::create(path)?), m)
}

pub fn load_matrix(path: &Path) -> Result<CMat> {
    read_matrix_binary(std::io::BufReader::new(std::fs::File::open(path)?))
}

/// Header line followed by one record per row.
pub fn write_table<W: Write, R: AsRef<[String]>>(w: W, header: &[&str], rows: impl IntoIterator<Item = R>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header).map_err(csv_err)?;
    for row in rows {
        out.write_record(row.as_ref()).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Columns `row, col, re, im`.
pub fn write_matrix_csv<W: Write>(w: W, m: &CMat) -> Result<()> {
    let (r, c) = (m.nrows(), m.ncols());
    write_table(
        w,
        &["row", "col", "re", "im"],
        (0..r * c).map(|k| {
            let (i, j) = (k / c, k % c);
            let z = m[(i, j)];
            [i.to_string(), j.to_string(), z.re.to_string(), z.im.to_string()]
        }),
    )
}

/// Columns `index, re, im, modulus, lifetime`.
pub fn write_spectrum_csv<W: Write>(w: W, spectrum: &Spectrum) -> Result<()> {
    write_eigenvalues_csv(w, &spectrum.eigenvalues)
}

pub fn write_eigenvalues_csv<W: Write>(w: W, values: &[C64]) -> Result<()> {
    write_table(
        w,
        &["index", "re", "im", "modulus", "lifetime"],
        values.iter().enumerate().map(|(k, z)| {
            let r = z.norm();
            [k.to_string(), z.re.to_string(), z.im.to_string(), r.to_string(), lifetime(r).to_string()]
        }),
    )
}

/// Columns `r, count, rescaled`.
pub fn write_count_csv<W: Write>(w: W, report: &CountReport) -> Result<()> {
    write_table(
        w,
        &["r", "count", "rescaled"],
        report
            .r_grid
            .iter()
            .zip(&report.counts)
            .zip(&report.rescaled)
            .map(|((r, c), s)| [r.to_string(), c.to_string(), s.to_string()]),
    )
}

/// Columns `lo_num, lo_den, hi_num, hi_den`.
pub fn write_intervals_csv<W: Write>(w: W, intervals: &[Interval]) -> Result<()> {
    write_table(
        w,
        &["lo_num", "lo_den", "hi_num", "hi_den"],
        intervals.iter().map(|iv| {
            [iv.lo.numer().to_string(), iv.lo.denom().to_string(), iv.hi.numer().to_string(), iv.hi.denom().to_string()]
        }),
    )
}

/// Columns `x, xi, value`, with `x` varying fastest.
pub fn write_husimi_csv<W: Write>(w: W, field: &HusimiField) -> Result<()> {
    write_table(
        w,
        &["x", "xi", "value"],
        (0..field.gx * field.gxi).map(|k| {
            let (a, b) = (k % field.gx, k / field.gx);
            [field.x(a).to_string(), field.xi(b).to_string(), field.values[k].to_string()]
        }),
    )
}

/// ASCII PGM (`P2`) on a logarithmic grey scale spanning six decades below the maximum.
/// Rows run from `ξ ≈ 1` at the top to `ξ ≈ 0` at the bottom.
pub fn write_husimi_pgm<W: Write>(mut w: W, field: &HusimiField) -> Result<()> {
    const DECADES: f64 = 6.0;
    let max = field.values.iter().cloned().fold(0.0, f64::max);
    let level = |v: f64| -> u32 {
        if max <= 0.0 || v <= 0.0 {
            return 0;
        }
        let t = 1.0 + (v / max).log10() / DECADES;
        (t.clamp(0.0, 1.0) * 255.0).round() as u32
    };
    let mut s = format!("P2\n{} {}\n255\n", field.gx, field.gxi);
    for b in (0..field.gxi).rev() {
        let row: Vec<String> = (0..field.gx).map(|a| level(field.value(a, b)).to_string()).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    w.write_all(s.as_bytes())?;
    Ok(())
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut w: W, value: &T) -> Result<()> {
    let mut s = to_json_string(value)?;
    s.push('\n');
    w.write_all(s.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_round_trip_and_layout() {
        let m = Mat::from_fn(2, 3, |i, j| C64::new(i as f64 + 10.0 * j as f64, -(j as f64)));
        let mut buf = Vec::new();
        write_matrix_binary(&mut buf, &m).unwrap();
        assert_eq!(buf.len(), 24 + 16 * 6);
        assert_eq!(&buf[..8], b"OQMAPv1\0");
        assert_eq!(u64::from_le_bytes(buf[8..16].try_into().unwrap()), 2);
        // Second stored entry is (1, 0): column-major.
        assert_eq!(f64::from_le_bytes(buf[40..48].try_into().unwrap()), 1.0);
        let back = read_matrix_binary(&buf[..]).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn bad_magic_rejected() {
        let mut buf = Vec::new();
        write_matrix_binary(&mut buf, &Mat::<C64>::zeros(1, 1)).unwrap();
        buf[0] = b'X';
        assert!(read_matrix_binary(&buf[..]).is_err());
        assert!(read_matrix_binary(&buf[..10]).is_err());
    }

    #[test]
    fn csv_headers() {
        let mut out = Vec::new();
        write_eigenvalues_csv(&mut out, &[C64::new(0.5, 0.0), C64::new(0.0, 0.0)]).unwrap();
        let s = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "index,re,im,modulus,lifetime");
        assert_eq!(lines[2], "1,0,0,0,inf");
        let mut out = Vec::new();
        write_intervals_csv(&mut out, &[Interval::unit()]).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "lo_num,lo_den,hi_num,hi_den\n0,1,1,1\n");
    }

    #[test]
    fn pgm_shape() {
        let field = HusimiField { gx: 3, gxi: 2, values: vec![1.0, 0.0, 1e-3, 1e-9, 0.5, 1.0], total_mass: 0.0 };
        let mut out = Vec::new();
        write_husimi_pgm(&mut out, &field).unwrap();
        let s = String::from_utf8(out).unwrap();
        assert_eq!(s, "P2\n3 2\n255\n0 242 255\n255 0 128\n");
    }
}
