//! CSV ingestion: one observation per row, one coordinate per column.

use std::io::{Read, Write};
use std::path::Path;

use symtest::Dataset;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("file not found: {0}")]
    FileNotFound(String),
    #[error("parse error at line {line}, column {column}: {cell:?} is not a finite number")]
    ParseError {
        line: u64,
        column: usize,
        cell: String,
    },
    #[error("ragged rows: line {line} has {found} columns, expected {expected}")]
    RaggedRows {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("reading csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Data(#[from] symtest::Error),
}

pub fn ingest_csv(path: &Path) -> Result<Dataset, IngestError> {
    let file = std::fs::File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => IngestError::FileNotFound(path.display().to_string()),
        _ => IngestError::Csv(e.into()),
    })?;
    read_dataset(file)
}

/// Parses headerless or single-header CSV. The first record is taken as a
/// header when none of its cells is a number.
pub fn read_dataset<R: Read>(input: R) -> Result<Dataset, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut values = Vec::new();
    let mut width: Option<usize> = None;
    let mut rows = 0;
    for (index, record) in reader.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(index as u64 + 1, |p| p.line());
        if index == 0 && record.iter().all(|c| c.parse::<f64>().is_err()) {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(IngestError::RaggedRows {
                line,
                expected,
                found: record.len(),
            });
        }
        for (col, cell) in record.iter().enumerate() {
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(IngestError::ParseError {
                        line,
                        column: col + 1,
                        cell: cell.to_string(),
                    })
                }
            }
        }
        rows += 1;
    }
    Ok(Dataset::new(rows, width.unwrap_or(0), values)?)
}

/// Writes `data` as headerless CSV using shortest round-trip decimals.
pub fn write_dataset<W: Write>(data: &Dataset, mut out: W) -> std::io::Result<()> {
    for row in data.iter_rows() {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Dataset, IngestError> {
        read_dataset(s.as_bytes())
    }

    #[test]
    fn three_by_two() {
        let d = parse("1,2\n3,4\n5,6").unwrap();
        assert_eq!((d.rows(), d.dim()), (3, 2));
        assert_eq!(d.values(), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    }

    #[test]
    fn header_skipped() {
        let d = parse("x, y\n1, 2\n-3.5e1, 4\n").unwrap();
        assert_eq!(d.values(), &[1.0, 2.0, -35.0, 4.0]);
    }

    #[test]
    fn ragged() {
        assert!(matches!(
            parse("1,2\n3"),
            Err(IngestError::RaggedRows { line: 2, expected: 2, found: 1 })
        ));
    }

    #[test]
    fn bad_cell_position() {
        match parse("1,abc") {
            Err(IngestError::ParseError { line, column, .. }) => assert_eq!((line, column), (1, 2)),
            other => panic!("unexpected {other:?}"),
        }
        match parse("a,b\n1,2\n3,NaN") {
            Err(IngestError::ParseError { line, column, .. }) => assert_eq!((line, column), (3, 2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_input() {
        assert!(matches!(
            parse(""),
            Err(IngestError::Data(symtest::Error::EmptyDataset))
        ));
        assert!(matches!(
            parse("a,b\n"),
            Err(IngestError::Data(symtest::Error::EmptyDataset))
        ));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            ingest_csv(Path::new("/definitely/not/here.csv")),
            Err(IngestError::FileNotFound(_))
        ));
    }
}
