//! Fixed binary state checkpoints.
//!
//! Layout (all integers and floats little-endian):
//!
//! | bytes | content                                        |
//! |-------|------------------------------------------------|
//! | 4     | magic `DSPL`                                   |
//! | 4     | format version (u32)                           |
//! | 4     | grid points per side n (u32)                   |
//! | 8     | box length L (f64)                             |
//! | 8     | state time (f64)                               |
//! | 1     | equation tag: 0 linear, 1 NLS, 2 Hartree       |
//! | 8     | equation exponent (p or gamma; 0 for linear)   |
//! | 16 n^2| samples as (re, im) f64 pairs, row-major       |
//!
//! Round trips are bit-exact: the payload is the raw IEEE-754 encoding of
//! the state, so a written-and-reread field compares equal bit for bit.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;
use crate::propagator::Equation;
use num_complex::Complex64;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

pub const MAGIC: [u8; 4] = *b"DSPL";
pub const FORMAT_VERSION: u32 = 1;

fn equation_tag(eq: &Equation) -> (u8, f64) {
    match *eq {
        Equation::Linear => (0, 0.0),
        Equation::Nls { p } => (1, p),
        Equation::Hartree { gamma } => (2, gamma),
    }
}

fn equation_from_tag(tag: u8, exponent: f64) -> Result<Equation> {
    let eq = match tag {
        0 => Equation::Linear,
        1 => Equation::Nls { p: exponent },
        2 => Equation::Hartree { gamma: exponent },
        other => {
            return Err(Error::Checkpoint(format!(
                "unknown equation tag {other}"
            )))
        }
    };
    eq.validate()?;
    Ok(eq)
}

/// Serializes `(field, time, equation)` into `writer`.
pub fn write_checkpoint_to(
    writer: &mut impl Write,
    field: &Field,
    time: f64,
    eq: &Equation,
) -> Result<()> {
    if !time.is_finite() {
        return Err(Error::Checkpoint(format!(
            "checkpoint time must be finite, got {time}"
        )));
    }
    let grid = field.grid();
    let (tag, exponent) = equation_tag(eq);
    writer.write_all(&MAGIC)?;
    writer.write_all(&FORMAT_VERSION.to_le_bytes())?;
    writer.write_all(&(grid.n() as u32).to_le_bytes())?;
    writer.write_all(&grid.box_length().to_le_bytes())?;
    writer.write_all(&time.to_le_bytes())?;
    writer.write_all(&[tag])?;
    writer.write_all(&exponent.to_le_bytes())?;
    for z in field.values() {
        writer.write_all(&z.re.to_le_bytes())?;
        writer.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

/// Deserializes a checkpoint from `reader`.
pub fn read_checkpoint_from(reader: &mut impl Read) -> Result<(Field, f64, Equation)> {
    let mut magic = [0u8; 4];
    reader.read_exact(&mut magic)?;
    if magic != MAGIC {
        return Err(Error::Checkpoint(format!(
            "bad magic {magic:?}, expected {MAGIC:?}"
        )));
    }
    let mut u32buf = [0u8; 4];
    reader.read_exact(&mut u32buf)?;
    let version = u32::from_le_bytes(u32buf);
    if version != FORMAT_VERSION {
        return Err(Error::Checkpoint(format!(
            "unsupported format version {version} (this build reads {FORMAT_VERSION})"
        )));
    }
    reader.read_exact(&mut u32buf)?;
    let n = u32::from_le_bytes(u32buf) as usize;
    let mut f64buf = [0u8; 8];
    reader.read_exact(&mut f64buf)?;
    let box_length = f64::from_le_bytes(f64buf);
    reader.read_exact(&mut f64buf)?;
    let time = f64::from_le_bytes(f64buf);
    if !time.is_finite() {
        return Err(Error::Checkpoint(format!("non-finite state time {time}")));
    }
    let mut tag = [0u8; 1];
    reader.read_exact(&mut tag)?;
    reader.read_exact(&mut f64buf)?;
    let eq = equation_from_tag(tag[0], f64::from_le_bytes(f64buf))?;

    let grid = Grid::new(n, box_length)?;
    let mut payload = vec![0u8; 16 * grid.num_points()];
    reader.read_exact(&mut payload)?;
    // A trailing byte means the file was not produced by this writer.
    let mut probe = [0u8; 1];
    if reader.read(&mut probe)? != 0 {
        return Err(Error::Checkpoint(
            "trailing bytes after checkpoint payload".into(),
        ));
    }
    let values: Vec<Complex64> = payload
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[0..8].try_into().expect("chunk size")),
                f64::from_le_bytes(c[8..16].try_into().expect("chunk size")),
            )
        })
        .collect();
    let field = Field::from_values(grid, values)
        .map_err(|e| Error::Checkpoint(format!("invalid payload: {e}")))?;
    Ok((field, time, eq))
}

/// Writes a checkpoint file (buffered).
pub fn write_checkpoint(path: &Path, field: &Field, time: f64, eq: &Equation) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut writer = BufWriter::new(file);
    write_checkpoint_to(&mut writer, field, time, eq)?;
    writer.flush()?;
    Ok(())
}

/// Reads a checkpoint file (buffered).
pub fn read_checkpoint(path: &Path) -> Result<(Field, f64, Equation)> {
    let file = std::fs::File::open(path)?;
    read_checkpoint_from(&mut BufReader::new(file))
}
