//! CSV files: snapshots, eigenvalues, convergence tables, cross-sections.
//!
//! Numbers are written with 17 significant digits so that values round-trip.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::grid::Grid;
use crate::norms::ErrorReport;
use crate::problems::SectionPoint;
use crate::state::{AfState, NodeClass};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CsvFormatError {
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("row {row}, column `{column}`: cannot parse `{value}` as a number")]
    BadNumber { row: usize, column: String, value: String },
    #[error("row {row}: empty value in required column `{column}`")]
    EmptyValue { row: usize, column: String },
    #[error("no data rows")]
    Empty,
}

pub const SNAPSHOT_HEADER: [&str; 6] = ["x", "y", "p", "u", "v", "speed"];
pub const EIGEN_HEADER: [&str; 2] = ["re", "im"];
pub const CONVERGENCE_HEADER: [&str; 8] = ["nx", "ny", "err_p", "err_u", "err_v", "eoc_p", "eoc_u", "eoc_v"];
pub const SECTION_HEADER: [&str; 6] = ["s", "x", "y", "p", "u", "v"];

/// Formats with 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> Result<csv::Writer<File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    Ok(csv::Writer::from_writer(File::create(path)?))
}

fn write_rows<W: Write>(w: &mut csv::Writer<W>, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_snapshot_to<W: Write>(out: W, grid: &Grid, state: &AfState) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let rows = (0..grid.ny).flat_map(|j| {
        (0..grid.nx).map(move |i| {
            let q = state.get(NodeClass::Average, i, j);
            let (x, y) = (grid.x_center(i as isize), grid.y_center(j as isize));
            [x, y, q[0], q[1], q[2], q[1].hypot(q[2])].map(fmt_num).to_vec()
        })
    });
    write_rows(&mut w, &SNAPSHOT_HEADER, rows)
}

/// Cell-centre values `x,y,p,u,v,speed` of the averages.
pub fn write_snapshot(path: &Path, grid: &Grid, state: &AfState) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    write_snapshot_to(File::create(path)?, grid, state)
}

pub fn write_eigenvalues(path: &Path, eigs: &[(f64, f64)]) -> Result<()> {
    let mut w = create(path)?;
    write_rows(&mut w, &EIGEN_HEADER, eigs.iter().map(|&(re, im)| vec![fmt_num(re), fmt_num(im)]))
}

pub fn write_convergence(path: &Path, report: &ErrorReport) -> Result<()> {
    let mut w = create(path)?;
    let rows = report.resolutions.iter().zip(&report.errors).enumerate().map(|(k, (&(nx, ny), e))| {
        let mut r = vec![nx.to_string(), ny.to_string()];
        r.extend(e.iter().map(|v| fmt_num(*v)));
        let orders = if k == 0 { [None; 3] } else { report.eoc[k - 1] };
        r.extend(orders.iter().map(|o| o.map(fmt_num).unwrap_or_default()));
        r
    });
    write_rows(&mut w, &CONVERGENCE_HEADER, rows)
}

pub fn write_section(path: &Path, points: &[SectionPoint]) -> Result<()> {
    let mut w = create(path)?;
    let rows = points.iter().map(|p| [p.s, p.x, p.y, p.q[0], p.q[1], p.q[2]].map(fmt_num).to_vec());
    write_rows(&mut w, &SECTION_HEADER, rows)
}

/// Arbitrary numeric columns, for small tables such as radial profiles.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = create(path)?;
    write_rows(&mut w, header, rows.iter().map(|r| r.iter().map(|v| fmt_num(*v)).collect()))
}

/// Reads the numeric columns `required` (values must be present) and
/// `optional` (values may be empty). Extra columns are ignored.
pub fn read_columns<R: Read>(input: R, required: &[&str], optional: &[&str]) -> Result<Vec<Vec<Option<f64>>>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(false).from_reader(input);
    let header = rdr.headers()?.clone();
    let find = |name: &str| header.iter().position(|h| h == name);
    let mut idx = Vec::new();
    for &name in required {
        idx.push((name, find(name).ok_or_else(|| CsvFormatError::MissingColumn(name.to_string()))?, true));
    }
    for &name in optional {
        idx.push((name, find(name).ok_or_else(|| CsvFormatError::MissingColumn(name.to_string()))?, false));
    }
    let mut rows = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = n + 1;
        let mut vals = Vec::with_capacity(idx.len());
        for &(name, col, req) in &idx {
            let raw = rec.get(col).unwrap_or("");
            if raw.is_empty() {
                if req {
                    return Err(CsvFormatError::EmptyValue { row, column: name.to_string() }.into());
                }
                vals.push(None);
                continue;
            }
            let v = raw.parse::<f64>().map_err(|_| CsvFormatError::BadNumber {
                row,
                column: name.to_string(),
                value: raw.to_string(),
            })?;
            vals.push(Some(v));
        }
        rows.push(vals);
    }
    if rows.is_empty() {
        return Err(CsvFormatError::Empty.into());
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotRow {
    pub x: f64,
    pub y: f64,
    pub p: f64,
    pub u: f64,
    pub v: f64,
    pub speed: f64,
}

pub fn read_snapshot<R: Read>(input: R) -> Result<Vec<SnapshotRow>> {
    let rows = read_columns(input, &SNAPSHOT_HEADER, &[])?;
    Ok(rows
        .into_iter()
        .map(|r| {
            let v: Vec<f64> = r.into_iter().map(|x| x.expect("required")).collect();
            SnapshotRow { x: v[0], y: v[1], p: v[2], u: v[3], v: v[4], speed: v[5] }
        })
        .collect())
}

pub fn read_eigenvalues<R: Read>(input: R) -> Result<Vec<(f64, f64)>> {
    let rows = read_columns(input, &EIGEN_HEADER, &[])?;
    Ok(rows.into_iter().map(|r| (r[0].expect("required"), r[1].expect("required"))).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub nx: usize,
    pub ny: usize,
    pub errors: [f64; 3],
    pub eoc: [Option<f64>; 3],
}

pub fn read_convergence<R: Read>(input: R) -> Result<Vec<ConvergenceRow>> {
    let rows = read_columns(input, &CONVERGENCE_HEADER[..5], &CONVERGENCE_HEADER[5..])?;
    rows.into_iter()
        .enumerate()
        .map(|(n, r)| {
            let size = |k: usize, name: &str| {
                let v = r[k].expect("required");
                if v >= 1.0 && v.fract() == 0.0 && v < 1e9 {
                    Ok(v as usize)
                } else {
                    Err(CsvFormatError::BadNumber { row: n + 1, column: name.to_string(), value: v.to_string() })
                }
            };
            Ok(ConvergenceRow {
                nx: size(0, "nx")?,
                ny: size(1, "ny")?,
                errors: [r[2].expect("required"), r[3].expect("required"), r[4].expect("required")],
                eoc: [r[5], r[6], r[7]],
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BcMode;
    use crate::Error;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.6171e-5, 1e300, 5e-324] {
            assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn snapshot_round_trip() {
        let g = Grid::new(4, 4, [0.0, 1.0, 0.0, 1.0], BcMode::DoublyPeriodic).unwrap();
        let s = AfState::from_fns(&g, |i, j| [i as f64, 0.1 * j as f64, 3.0], |_, _| [0.0; 3]);
        let mut buf = Vec::new();
        write_snapshot_to(&mut buf, &g, &s).unwrap();
        assert!(buf.starts_with(b"x,y,p,u,v,speed\n"));
        let rows = read_snapshot(buf.as_slice()).unwrap();
        assert_eq!(rows.len(), 16);
        assert_eq!(rows[5].p, 1.0);
        assert_eq!(rows[5].speed, 0.1f64.hypot(3.0));
    }

    #[test]
    fn reader_names_missing_column() {
        let err = read_eigenvalues("re,imag\n1,2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::CsvFormat(CsvFormatError::MissingColumn(ref c)) if c == "im"));
        let err = read_eigenvalues("re,im\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::CsvFormat(CsvFormatError::Empty)));
        let err = read_eigenvalues("re,im\n1,x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::CsvFormat(CsvFormatError::BadNumber { row: 1, .. })));
    }

    #[test]
    fn convergence_allows_empty_orders() {
        let rows = read_convergence("nx,ny,err_p,err_u,err_v,eoc_p,eoc_u,eoc_v\n64,64,1,2,3,,,\n128,128,0.125,0.25,0.375,3,3,3\n".as_bytes()).unwrap();
        assert_eq!(rows[0].eoc, [None; 3]);
        assert_eq!(rows[1].eoc[0], Some(3.0));
        assert!(read_convergence("nx,ny,err_p,err_u,err_v,eoc_p,eoc_u,eoc_v\n6.5,64,1,2,3,,,\n".as_bytes()).is_err());
    }
}
