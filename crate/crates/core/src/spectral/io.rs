//! Text serialisation of fields: one line `l,re,im` per mode, ascending `l`,
//! 17 significant digits.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::{SpectralField, TorusGrid};
use crate::{Error, Result};

pub fn write_field_to<W: Write>(field: &SpectralField, mut out: W) -> Result<()> {
    for (l, c) in field.grid().modes().zip(field.coeffs()) {
        writeln!(out, "{l},{:.16e},{:.16e}", c.re, c.im)?;
    }
    Ok(())
}

pub fn write_field(field: &SpectralField, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut out = std::io::BufWriter::new(file);
    write_field_to(field, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Reads a field; the grid size is the number of lines.
pub fn read_field_from<R: Read>(input: R) -> Result<SpectralField> {
    let mut modes = Vec::new();
    let mut coeffs = Vec::new();
    for (n, line) in BufReader::new(input).lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        let bad = || Error::Parse(format!("line {}: expected `l,re,im`, got `{line}`", n + 1));
        if parts.len() != 3 {
            return Err(bad());
        }
        let l: i64 = parts[0].trim().parse().map_err(|_| bad())?;
        let re: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let im: f64 = parts[2].trim().parse().map_err(|_| bad())?;
        modes.push(l);
        coeffs.push(Complex64::new(re, im));
    }
    let grid = TorusGrid::new(coeffs.len())?;
    if !modes.iter().copied().eq(grid.modes()) {
        return Err(Error::Parse(
            "modes must be listed in ascending order from -N/2 to N/2-1".into(),
        ));
    }
    SpectralField::new(&grid, coeffs)
}

pub fn read_field(path: &Path) -> Result<SpectralField> {
    read_field_from(std::fs::File::open(path)?)
}
