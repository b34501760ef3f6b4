use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

/// Version tag of every `result.json`.
pub const SCHEMA_VERSION: u32 = 1;

/// Scientific notation with 17 significant digits, enough to round-trip an
/// `f64` exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [
            0.1,
            1.0 / 3.0,
            -2.5e-17,
            12345.678901234567,
            f64::MIN_POSITIVE,
        ] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_float(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn csv_and_json_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/out.csv");
        write_csv(&path, &["a", "b"], vec![vec!["1".into(), "2".into()]]).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "a,b\n1,2\n");
        let jpath = dir.path().join("r.json");
        write_json(&jpath, &serde_json::json!({"x": 1})).unwrap();
        let v: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(jpath).unwrap()).unwrap();
        assert_eq!(v["x"], 1);
    }
}
