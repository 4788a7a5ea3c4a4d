//! CSV encoding for regions and strings.
//!
//! Regions: header `x0,x1,...`, one point per row, lexicographic row order.
//! Strings: header `t,x0,x1,...`, rows in vertex order.

use std::io::{Read, Write};
use std::path::Path;

use super::point::Point;
use super::region::Region;
use super::string::StringPath;
use crate::error::{Error, Result};

fn coord_header(dim: usize) -> Vec<String> {
    (0..dim).map(|i| format!("x{i}")).collect()
}

pub fn write_region<W: Write>(region: &Region, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(coord_header(region.dim()))?;
    for p in region.points() {
        w.write_record(p.coords().iter().map(f64::to_string))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_string<W: Write>(path: &StringPath, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend(coord_header(path.dim()));
    w.write_record(&header)?;
    for (t, v) in path.params().iter().zip(path.vertices()) {
        let row = std::iter::once(t.to_string()).chain(v.coords().iter().map(f64::to_string));
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// A parsed CSV shape: a region or a string, detected from the header.
#[derive(Clone, Debug)]
pub enum CsvShape {
    Region(Region),
    String(StringPath),
}

/// Reads either form. A leading `t` column marks a string.
pub fn read_shape<R: Read>(input: R, origin: &Path, resolution: f64) -> Result<CsvShape> {
    let mut rdr = csv::Reader::from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let is_string = header.first().map(String::as_str) == Some("t");
    let coords = if is_string { &header[1..] } else { &header[..] };
    if coords.is_empty() {
        return Err(parse_err(origin, 1, "no coordinate columns"));
    }
    for (i, name) in coords.iter().enumerate() {
        if *name != format!("x{i}") {
            return Err(parse_err(origin, 1, &format!("expected column x{i}, found `{name}`")));
        }
    }
    let mut params = Vec::new();
    let mut points = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let line = row as u64 + 2;
        let rec = rec?;
        if rec.len() != header.len() {
            return Err(parse_err(origin, line, "wrong number of fields"));
        }
        let mut values = Vec::with_capacity(rec.len());
        for field in rec.iter() {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| parse_err(origin, line, &format!("not a number: `{field}`")))?;
            values.push(v);
        }
        if is_string {
            params.push(values.remove(0));
        }
        points.push(Point::new(values).map_err(|e| parse_err(origin, line, &e.to_string()))?);
    }
    if is_string {
        Ok(CsvShape::String(StringPath::with_resolution(points, params, resolution)?))
    } else {
        Ok(CsvShape::Region(Region::with_dim(points, coords.len(), resolution)?))
    }
}

pub fn read_shape_file(path: &Path, resolution: f64) -> Result<CsvShape> {
    let file = std::fs::File::open(path)?;
    read_shape(file, path, resolution)
}

fn parse_err(path: &Path, line: u64, message: &str) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.to_string(),
    }
}
