//! Field serialization.
//!
//! CSV: header row, comma separator, `.` decimal point, one line per grid
//! node in storage order. Scalar fields have columns `y1,y2,value`, vector
//! fields `y1,y2,v1,v2`. Numbers use the shortest representation that
//! round-trips exactly, so output is deterministic.
//!
//! Binary: a 32-byte little-endian header followed by `f64` samples in
//! row-major order (vector fields store all of component 1, then all of
//! component 2).
//!
//! | offset | size | content                                         |
//! |--------|------|-------------------------------------------------|
//! | 0      | 8    | magic, `b"CLFIELD1"` (scalar) or `b"CLFIELD2"`  |
//! | 8      | 4    | `n1` as `u32`                                   |
//! | 12     | 4    | `n2` as `u32`                                   |
//! | 16     | 8    | `L1` as `f64`                                   |
//! | 24     | 8    | `L2` as `f64`                                   |

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::spectral::{PeriodicGrid, ScalarField, VectorField};

pub const SCALAR_MAGIC: &[u8; 8] = b"CLFIELD1";
pub const VECTOR_MAGIC: &[u8; 8] = b"CLFIELD2";
pub const HEADER_LEN: usize = 32;

pub fn write_scalar_csv<W: Write>(field: &ScalarField, mut out: W) -> Result<()> {
    let g = field.grid();
    writeln!(out, "y1,y2,value")?;
    for i in 0..g.n1() {
        for j in 0..g.n2() {
            writeln!(out, "{},{},{}", g.y1(i), g.y2(j), field.at(i, j))?;
        }
    }
    Ok(())
}

pub fn write_vector_csv<W: Write>(field: &VectorField, mut out: W) -> Result<()> {
    let g = field.grid();
    writeln!(out, "y1,y2,v1,v2")?;
    for i in 0..g.n1() {
        for j in 0..g.n2() {
            let k = i * g.n2() + j;
            writeln!(
                out,
                "{},{},{},{}",
                g.y1(i),
                g.y2(j),
                field.c1()[k],
                field.c2()[k]
            )?;
        }
    }
    Ok(())
}

fn write_header<W: Write>(magic: &[u8; 8], g: &PeriodicGrid, out: &mut W) -> Result<()> {
    let dim = |n: usize| {
        u32::try_from(n).map_err(|_| Error::Format(format!("grid size {n} exceeds u32")))
    };
    out.write_all(magic)?;
    out.write_all(&dim(g.n1())?.to_le_bytes())?;
    out.write_all(&dim(g.n2())?.to_le_bytes())?;
    out.write_all(&g.l1().to_le_bytes())?;
    out.write_all(&g.l2().to_le_bytes())?;
    Ok(())
}

fn write_samples<W: Write>(values: &[f64], out: &mut W) -> Result<()> {
    for v in values {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn write_scalar_bin<W: Write>(field: &ScalarField, mut out: W) -> Result<()> {
    write_header(SCALAR_MAGIC, field.grid(), &mut out)?;
    write_samples(field.values(), &mut out)
}

pub fn write_vector_bin<W: Write>(field: &VectorField, mut out: W) -> Result<()> {
    write_header(VECTOR_MAGIC, field.grid(), &mut out)?;
    write_samples(field.c1(), &mut out)?;
    write_samples(field.c2(), &mut out)
}

fn read_header<R: Read>(expected: &[u8; 8], input: &mut R) -> Result<PeriodicGrid> {
    let mut header = [0u8; HEADER_LEN];
    input.read_exact(&mut header)?;
    if &header[..8] != expected {
        return Err(Error::Format("bad magic".into()));
    }
    let u = |a: usize| u32::from_le_bytes(header[a..a + 4].try_into().unwrap()) as usize;
    let f = |a: usize| f64::from_le_bytes(header[a..a + 8].try_into().unwrap());
    PeriodicGrid::new(u(8), u(12), f(16), f(24))
}

fn read_samples<R: Read>(n: usize, input: &mut R) -> Result<Vec<f64>> {
    let mut buf = vec![0u8; n * 8];
    input.read_exact(&mut buf)?;
    Ok(buf
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

pub fn read_scalar_bin<R: Read>(mut input: R) -> Result<ScalarField> {
    let grid = read_header(SCALAR_MAGIC, &mut input)?;
    ScalarField::new(grid, read_samples(grid.len(), &mut input)?)
}

pub fn read_vector_bin<R: Read>(mut input: R) -> Result<VectorField> {
    let grid = read_header(VECTOR_MAGIC, &mut input)?;
    let c1 = read_samples(grid.len(), &mut input)?;
    let c2 = read_samples(grid.len(), &mut input)?;
    VectorField::new(grid, c1, c2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn csv_layout() {
        let g = PeriodicGrid::new(4, 4, 1.0, 2.0).unwrap();
        let f = ScalarField::from_fn(g, |y1, y2| y1 + 10.0 * y2).unwrap();
        let mut buf = Vec::new();
        write_scalar_csv(&f, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 17);
        assert_eq!(lines[0], "y1,y2,value");
        assert_eq!(lines[1], "0,0,0");
        assert_eq!(lines[2], "0,0.5,5");
        assert_eq!(lines[5], "0.25,0,0.25");
    }

    #[test]
    fn header_is_32_bytes() {
        let g = PeriodicGrid::new(4, 6, 1.0, 2.0).unwrap();
        let mut buf = Vec::new();
        write_scalar_bin(&ScalarField::zeros(g), &mut buf).unwrap();
        assert_eq!(buf.len(), HEADER_LEN + 24 * 8);
        assert_eq!(&buf[..8], SCALAR_MAGIC);
        assert_eq!(u32::from_le_bytes(buf[12..16].try_into().unwrap()), 6);
        assert!(read_vector_bin(&buf[..]).is_err());
    }

    proptest! {
        #[test]
        fn binary_round_trip(a in proptest::collection::vec(-1e6..1e6f64, 48),
                             b in proptest::collection::vec(-1e6..1e6f64, 48)) {
            let g = PeriodicGrid::new(8, 6, 0.5, 0.25).unwrap();
            let s = ScalarField::new(g, a.clone()).unwrap();
            let mut buf = Vec::new();
            write_scalar_bin(&s, &mut buf).unwrap();
            prop_assert_eq!(read_scalar_bin(&buf[..]).unwrap(), s);

            let v = VectorField::new(g, a, b).unwrap();
            let mut buf = Vec::new();
            write_vector_bin(&v, &mut buf).unwrap();
            prop_assert_eq!(read_vector_bin(&buf[..]).unwrap(), v);
        }
    }
}
