//! One-object-per-line JSON reading and writing.

use std::io::Write;
use std::path::Path;

use serde::{de::DeserializeOwned, Serialize};

use crate::CorpusError;

pub fn read<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, CorpusError> {
    let text = std::fs::read_to_string(path)?;
    parse(&text)
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<Vec<T>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let item =
            serde_json::from_str(line).map_err(|source| CorpusError::Parse { line: i + 1, source })?;
        out.push(item);
    }
    Ok(out)
}

pub fn write<T: Serialize>(path: &Path, items: &[T]) -> Result<(), CorpusError> {
    let mut buf = Vec::new();
    for item in items {
        serde_json::to_writer(&mut buf, item)?;
        buf.push(b'\n');
    }
    // Write-then-rename so a crash never leaves a truncated artifact.
    let tmp = path.with_extension("tmp");
    {
        let mut file = std::fs::File::create(&tmp)?;
        file.write_all(&buf)?;
        file.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn to_string<T: Serialize>(items: &[T]) -> Result<String, CorpusError> {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(item)?);
        out.push('\n');
    }
    Ok(out)
}
