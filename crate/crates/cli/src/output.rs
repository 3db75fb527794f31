use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

/// Environment variable holding the number of significant digits written
/// for floating-point fields.
pub const FLOAT_DIGITS_VAR: &str = "SEA_WALK_FLOAT_DIGITS";
pub const DEFAULT_FLOAT_DIGITS: usize = 17;

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{FLOAT_DIGITS_VAR}: expected an integer in 1..=17, got {0:?}")]
    FloatDigits(String),
}

/// Scientific notation with a fixed number of significant digits, so that
/// identical values always print identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FloatFormat {
    digits: usize,
}

impl Default for FloatFormat {
    fn default() -> Self {
        Self {
            digits: DEFAULT_FLOAT_DIGITS,
        }
    }
}

impl FloatFormat {
    pub fn new(digits: usize) -> Option<Self> {
        (1..=17).contains(&digits).then_some(Self { digits })
    }

    pub fn from_env() -> Result<Self, OutputError> {
        match std::env::var(FLOAT_DIGITS_VAR) {
            Err(_) => Ok(Self::default()),
            Ok(s) => s
                .trim()
                .parse()
                .ok()
                .and_then(Self::new)
                .ok_or(OutputError::FloatDigits(s)),
        }
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn format(&self, x: f64) -> String {
        // Negative zero would otherwise print as "-0e0".
        let x = if x == 0.0 { 0.0 } else { x };
        format!("{:.*e}", self.digits - 1, x)
    }
}

/// CSV writer with LF line endings that remembers how many data rows it wrote.
pub struct CsvSink {
    path: PathBuf,
    writer: csv::Writer<BufWriter<File>>,
    rows: usize,
}

impl CsvSink {
    pub fn create(path: &Path, header: &[&str]) -> Result<Self, OutputError> {
        let file = File::create(path).map_err(|source| OutputError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(BufWriter::new(file));
        let mut sink = Self {
            path: path.to_path_buf(),
            writer,
            rows: 0,
        };
        sink.write_raw(header)?;
        Ok(sink)
    }

    fn write_raw<I, T>(&mut self, record: I) -> Result<(), OutputError>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u8]>,
    {
        self.writer.write_record(record).map_err(|source| OutputError::Csv {
            path: self.path.clone(),
            source,
        })
    }

    pub fn write<I, T>(&mut self, record: I) -> Result<(), OutputError>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u8]>,
    {
        self.write_raw(record)?;
        self.rows += 1;
        Ok(())
    }

    /// Flushes and returns the number of data rows written.
    pub fn finish(mut self) -> Result<usize, OutputError> {
        self.writer.flush().map_err(|source| OutputError::Io {
            path: self.path.clone(),
            source,
        })?;
        Ok(self.rows)
    }
}

/// Pretty-printed JSON followed by a single LF.
pub fn write_json<T: serde::Serialize>(value: &T, path: &Path) -> Result<(), OutputError> {
    let io_err = |source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|source| OutputError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    w.write_all(b"\n").map_err(io_err)?;
    w.flush().map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_fixed_width_scientific() {
        let f = FloatFormat::default();
        assert_eq!(f.format(0.5), "5.0000000000000000e-1");
        assert_eq!(f.format(-0.0), "0.0000000000000000e0");
        assert_eq!(FloatFormat::new(3).unwrap().format(1234.5), "1.23e3");
        assert!(FloatFormat::new(0).is_none());
        assert!(FloatFormat::new(18).is_none());
    }

    #[test]
    fn seventeen_digits_round_trip() {
        let f = FloatFormat::default();
        for x in [0.1, 1.0 / 3.0, 2.0f64.sqrt() * 1e-300, 6.02214076e23] {
            assert_eq!(f.format(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn empty_csv_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        let rows = CsvSink::create(&path, &["a", "b"]).unwrap().finish().unwrap();
        assert_eq!(rows, 0);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "a,b\n");
    }
}
