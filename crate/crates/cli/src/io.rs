//! File and stream encoding. Text is one value per line (`scale,offset`
//! for affine maps); binary is little-endian 64-bit words (two per affine
//! map, one u64 per sort key).

use std::fmt::Display;
use std::io::Write;
use std::path::Path;

use tcu_scan::Affine;

use crate::CliError;

fn read_text<T>(
    path: &Path,
    what: &str,
    parse: impl Fn(&str) -> Option<T>,
) -> Result<Vec<T>, CliError> {
    let content = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    content
        .lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| {
            parse(line.trim()).ok_or_else(|| {
                CliError::Usage(format!(
                    "{}: line {}: could not parse {:?} as {what}",
                    path.display(),
                    i + 1,
                    line.trim()
                ))
            })
        })
        .collect()
}

fn read_words(path: &Path, words_per_item: usize) -> Result<Vec<u64>, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    if bytes.len() % (8 * words_per_item) != 0 {
        return Err(CliError::Usage(format!(
            "{}: binary input must be a multiple of {} bytes, got {}",
            path.display(),
            8 * words_per_item,
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().expect("chunks_exact yields 8 bytes")))
        .collect())
}

pub fn read_i64(path: &Path, binary: bool) -> Result<Vec<i64>, CliError> {
    if binary {
        Ok(read_words(path, 1)?.into_iter().map(|w| w as i64).collect())
    } else {
        read_text(path, "an integer", |line| line.parse().ok())
    }
}

pub fn read_f64(path: &Path, binary: bool) -> Result<Vec<f64>, CliError> {
    if binary {
        Ok(read_words(path, 1)?
            .into_iter()
            .map(f64::from_bits)
            .collect())
    } else {
        read_text(path, "a number", |line| line.parse().ok())
    }
}

pub fn read_affine(path: &Path, binary: bool) -> Result<Vec<Affine>, CliError> {
    if binary {
        let words = read_words(path, 2)?;
        Ok(words
            .chunks_exact(2)
            .map(|pair| Affine {
                scale: f64::from_bits(pair[0]),
                offset: f64::from_bits(pair[1]),
            })
            .collect())
    } else {
        read_text(path, "a 'scale,offset' pair", |line| {
            let (a, b) = line.split_once(',')?;
            Some(Affine {
                scale: a.trim().parse().ok()?,
                offset: b.trim().parse().ok()?,
            })
        })
    }
}

pub fn read_keys(path: &Path, binary: bool) -> Result<Vec<u32>, CliError> {
    if binary {
        read_words(path, 1)?
            .into_iter()
            .enumerate()
            .map(|(i, w)| {
                u32::try_from(w).map_err(|_| {
                    CliError::Usage(format!(
                        "{}: entry {}: key {w} does not fit in 32 bits",
                        path.display(),
                        i + 1
                    ))
                })
            })
            .collect()
    } else {
        read_text(path, "a 32-bit key", |line| line.parse().ok())
    }
}

fn write_text<T: Display>(out: &mut dyn Write, values: &[T]) -> std::io::Result<()> {
    for v in values {
        writeln!(out, "{v}")?;
    }
    Ok(())
}

fn write_words(out: &mut dyn Write, words: impl Iterator<Item = u64>) -> std::io::Result<()> {
    for w in words {
        out.write_all(&w.to_le_bytes())?;
    }
    Ok(())
}

pub fn write_i64(out: &mut dyn Write, values: &[i64], binary: bool) -> std::io::Result<()> {
    if binary {
        write_words(out, values.iter().map(|&v| v as u64))
    } else {
        write_text(out, values)
    }
}

pub fn write_f64(out: &mut dyn Write, values: &[f64], binary: bool) -> std::io::Result<()> {
    if binary {
        write_words(out, values.iter().map(|v| v.to_bits()))
    } else {
        write_text(out, values)
    }
}

pub fn write_affine(out: &mut dyn Write, values: &[Affine], binary: bool) -> std::io::Result<()> {
    if binary {
        write_words(
            out,
            values
                .iter()
                .flat_map(|v| [v.scale.to_bits(), v.offset.to_bits()]),
        )
    } else {
        for v in values {
            writeln!(out, "{},{}", v.scale, v.offset)?;
        }
        Ok(())
    }
}

pub fn write_keys(out: &mut dyn Write, values: &[u32], binary: bool) -> std::io::Result<()> {
    if binary {
        write_words(out, values.iter().map(|&v| v as u64))
    } else {
        write_text(out, values)
    }
}
