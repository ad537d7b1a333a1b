use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

/// Shortest string that parses back to the same `f64`.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))
}

pub struct Table {
    path: PathBuf,
    writer: csv::Writer<fs::File>,
}

impl Table {
    pub fn create(dir: &Path, name: &str, header: &[&str]) -> Result<Self> {
        let path = dir.join(name);
        let mut writer = csv::Writer::from_path(&path).map_err(CliError::csv(&path))?;
        writer.write_record(header).map_err(CliError::csv(&path))?;
        Ok(Self { path, writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(CliError::csv(&self.path))
    }

    pub fn finish(mut self) -> Result<PathBuf> {
        self.writer.flush().map_err(CliError::io(&self.path))?;
        Ok(self.path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.0, 1.0, -2.5, 1.0 / 3.0, 5.0137e-3, 1e-13, 6.02e23, f64::MIN_POSITIVE, -7.7834e-12] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v, "{}", num(v));
        }
        assert_eq!(num(0.25), "0.25");
        assert_eq!(num(1e-13), "1e-13");
    }
}
