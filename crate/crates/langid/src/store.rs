//! Profile store: one binary file per language, little-endian, with a
//! metadata header (lang, n, alpha, corpus digest).

use std::io::{Read, Write};
use std::path::Path;

use crate::{LangIdError, LangProfile, ProfileSet};

const MAGIC: &[u8; 4] = b"XLID";
const VERSION: u32 = 1;

fn write_str(buf: &mut Vec<u8>, s: &str) {
    buf.extend_from_slice(&(s.len() as u32).to_le_bytes());
    buf.extend_from_slice(s.as_bytes());
}

fn read_u32(reader: &mut impl Read) -> std::io::Result<u32> {
    let mut bytes = [0u8; 4];
    reader.read_exact(&mut bytes)?;
    Ok(u32::from_le_bytes(bytes))
}

fn read_f64(reader: &mut impl Read) -> std::io::Result<f64> {
    let mut bytes = [0u8; 8];
    reader.read_exact(&mut bytes)?;
    Ok(f64::from_le_bytes(bytes))
}

fn read_str(reader: &mut impl Read) -> Result<String, LangIdError> {
    let len = read_u32(reader)? as usize;
    let mut bytes = vec![0u8; len];
    reader.read_exact(&mut bytes)?;
    String::from_utf8(bytes).map_err(|e| LangIdError::MalformedProfile(e.to_string()))
}

pub fn save_profiles(set: &ProfileSet, dir: &Path) -> Result<(), LangIdError> {
    std::fs::create_dir_all(dir)?;
    for profile in &set.profiles {
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&VERSION.to_le_bytes());
        write_str(&mut buf, &profile.lang);
        buf.extend_from_slice(&(profile.n as u32).to_le_bytes());
        buf.extend_from_slice(&profile.alpha.to_le_bytes());
        write_str(&mut buf, &profile.corpus_digest);
        buf.extend_from_slice(&profile.fallback_log_prob.to_le_bytes());
        buf.extend_from_slice(&(profile.log_probs.len() as u32).to_le_bytes());
        for (gram, &log_prob) in &profile.log_probs {
            write_str(&mut buf, gram);
            buf.extend_from_slice(&log_prob.to_le_bytes());
        }
        let path = dir.join(format!("{}.profile", profile.lang));
        let tmp = path.with_extension("profile.tmp");
        {
            let mut file = std::fs::File::create(&tmp)?;
            file.write_all(&buf)?;
        }
        std::fs::rename(&tmp, &path)?;
    }
    Ok(())
}

pub fn load_profiles(dir: &Path, max_chars: usize) -> Result<ProfileSet, LangIdError> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "profile"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(LangIdError::NoProfiles);
    }
    let mut profiles = Vec::with_capacity(paths.len());
    for path in paths {
        let mut reader = std::fs::File::open(&path)?;
        let mut magic = [0u8; 4];
        reader.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(LangIdError::MalformedProfile(format!("{}: bad magic", path.display())));
        }
        let version = read_u32(&mut reader)?;
        if version != VERSION {
            return Err(LangIdError::MalformedProfile(format!("unsupported version {version}")));
        }
        let lang = read_str(&mut reader)?;
        let n = read_u32(&mut reader)? as usize;
        let alpha = read_f64(&mut reader)?;
        let corpus_digest = read_str(&mut reader)?;
        let fallback_log_prob = read_f64(&mut reader)?;
        let count = read_u32(&mut reader)? as usize;
        let mut log_probs = std::collections::BTreeMap::new();
        for _ in 0..count {
            let gram = read_str(&mut reader)?;
            let log_prob = read_f64(&mut reader)?;
            log_probs.insert(gram, log_prob);
        }
        profiles.push(LangProfile { lang, n, alpha, log_probs, fallback_log_prob, corpus_digest });
    }
    Ok(ProfileSet { profiles, max_chars })
}
