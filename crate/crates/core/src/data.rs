//! Locating the shipped reference data.

use std::path::PathBuf;

/// `EKR_DATA_DIR` if set, else the `data/` directory of the source tree.
pub fn data_dir() -> PathBuf {
    match std::env::var_os("EKR_DATA_DIR") {
        Some(d) => PathBuf::from(d),
        None => PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data")),
    }
}

pub fn data_path(rel: &str) -> PathBuf {
    data_dir().join(rel)
}
