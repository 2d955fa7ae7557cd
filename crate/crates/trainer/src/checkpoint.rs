//! Binary checkpoint format for model + adapter, written atomically.
//!
//! Layout (little-endian):
//!   magic "XLCK" | version u32 | stage u8 | seed u64
//!   | vocab_len u32 | vocab chars as u32 code points
//!   | dim u32 | rank u32 | alpha f64 | dropout f64
//!   | embed (V*d f64) | output (d*V f64) | down (r*V f64) | up (d*r f64)

use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::lora::LoraAdapter;
use crate::matrix::Matrix;
use crate::model::TinyLm;
use crate::TrainError;

const MAGIC: &[u8; 4] = b"XLCK";
const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrainStage {
    Initial,
    Sft,
    Dpo,
}

impl TrainStage {
    fn to_byte(self) -> u8 {
        match self {
            TrainStage::Initial => 0,
            TrainStage::Sft => 1,
            TrainStage::Dpo => 2,
        }
    }

    fn from_byte(byte: u8) -> Result<Self, TrainError> {
        match byte {
            0 => Ok(TrainStage::Initial),
            1 => Ok(TrainStage::Sft),
            2 => Ok(TrainStage::Dpo),
            other => Err(TrainError::MalformedCheckpoint(format!("unknown stage {other}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub model: TinyLm,
    pub adapter: LoraAdapter,
    pub stage: TrainStage,
    pub seed: u64,
}

pub fn save_checkpoint(path: &Path, checkpoint: &Checkpoint) -> Result<(), TrainError> {
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.push(checkpoint.stage.to_byte());
    buf.extend_from_slice(&checkpoint.seed.to_le_bytes());
    let model = &checkpoint.model;
    buf.extend_from_slice(&(model.vocab.len() as u32).to_le_bytes());
    for &ch in &model.vocab {
        buf.extend_from_slice(&(ch as u32).to_le_bytes());
    }
    buf.extend_from_slice(&(model.dim as u32).to_le_bytes());
    let adapter = &checkpoint.adapter;
    buf.extend_from_slice(&(adapter.rank as u32).to_le_bytes());
    buf.extend_from_slice(&adapter.alpha.to_le_bytes());
    buf.extend_from_slice(&adapter.dropout.to_le_bytes());
    for value in model
        .embed
        .data
        .iter()
        .chain(&model.output.data)
        .chain(&adapter.down.data)
        .chain(&adapter.up.data)
    {
        buf.extend_from_slice(&value.to_le_bytes());
    }

    let tmp = path.with_extension("tmp");
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(&buf)?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], TrainError> {
        if self.pos + n > self.buf.len() {
            return Err(TrainError::MalformedCheckpoint("truncated".into()));
        }
        let slice = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn u8(&mut self) -> Result<u8, TrainError> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32, TrainError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, TrainError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64, TrainError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn matrix(&mut self, rows: usize, cols: usize) -> Result<Matrix, TrainError> {
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            data.push(self.f64()?);
        }
        Ok(Matrix { rows, cols, data })
    }
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint, TrainError> {
    let bytes = fs::read(path)?;
    let mut r = Reader { buf: &bytes, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(TrainError::MalformedCheckpoint("bad magic".into()));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(TrainError::MalformedCheckpoint(format!("unsupported version {version}")));
    }
    let stage = TrainStage::from_byte(r.u8()?)?;
    let seed = r.u64()?;
    let vocab_len = r.u32()? as usize;
    if vocab_len == 0 || vocab_len > 64 {
        return Err(TrainError::MalformedCheckpoint(format!("vocab length {vocab_len}")));
    }
    let mut vocab = Vec::with_capacity(vocab_len);
    for _ in 0..vocab_len {
        let cp = r.u32()?;
        vocab.push(
            char::from_u32(cp)
                .ok_or_else(|| TrainError::MalformedCheckpoint(format!("code point {cp}")))?,
        );
    }
    let dim = r.u32()? as usize;
    let rank = r.u32()? as usize;
    if dim == 0 || rank == 0 {
        return Err(TrainError::MalformedCheckpoint("zero dimension".into()));
    }
    let alpha = r.f64()?;
    let dropout = r.f64()?;
    let embed = r.matrix(vocab_len, dim)?;
    let output = r.matrix(dim, vocab_len)?;
    let down = r.matrix(rank, vocab_len)?;
    let up = r.matrix(dim, rank)?;
    if r.pos != bytes.len() {
        return Err(TrainError::MalformedCheckpoint("trailing bytes".into()));
    }
    Ok(Checkpoint {
        model: TinyLm { vocab, dim, embed, output },
        adapter: LoraAdapter { rank, alpha, dropout, down, up },
        stage,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Checkpoint {
        let model = TinyLm::random("abcde".chars().collect(), 4, 42);
        let mut adapter = LoraAdapter::new(model.dim, model.vocab_size(), 2, 16.0, 0.05, 43);
        for (i, value) in adapter.up.data.iter_mut().enumerate() {
            *value = i as f64 * 0.01;
        }
        Checkpoint { model, adapter, stage: TrainStage::Sft, seed: 42 }
    }

    #[test]
    fn round_trip_preserves_everything() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.ckpt");
        let ckpt = sample();
        save_checkpoint(&path, &ckpt).unwrap();
        let loaded = load_checkpoint(&path).unwrap();
        assert_eq!(loaded.model.vocab, ckpt.model.vocab);
        assert_eq!(loaded.model.embed.data, ckpt.model.embed.data);
        assert_eq!(loaded.model.output.data, ckpt.model.output.data);
        assert_eq!(loaded.adapter.down.data, ckpt.adapter.down.data);
        assert_eq!(loaded.adapter.up.data, ckpt.adapter.up.data);
        assert_eq!(loaded.adapter.alpha, ckpt.adapter.alpha);
        assert_eq!(loaded.adapter.dropout, ckpt.adapter.dropout);
        assert_eq!(loaded.stage, ckpt.stage);
        assert_eq!(loaded.seed, ckpt.seed);
        assert_eq!(loaded.model.weight_digest(), ckpt.model.weight_digest());
    }

    #[test]
    fn saves_are_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.ckpt");
        let b = dir.path().join("b.ckpt");
        let ckpt = sample();
        save_checkpoint(&a, &ckpt).unwrap();
        save_checkpoint(&b, &ckpt).unwrap();
        assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
    }

    #[test]
    fn rejects_bad_magic_and_truncation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.ckpt");
        save_checkpoint(&path, &sample()).unwrap();
        let mut bytes = fs::read(&path).unwrap();
        bytes[0] = b'Z';
        let bad = dir.path().join("bad.ckpt");
        fs::write(&bad, &bytes).unwrap();
        assert!(matches!(load_checkpoint(&bad), Err(TrainError::MalformedCheckpoint(_))));
        let truncated = dir.path().join("short.ckpt");
        fs::write(&truncated, &fs::read(&path).unwrap()[..40]).unwrap();
        assert!(matches!(load_checkpoint(&truncated), Err(TrainError::MalformedCheckpoint(_))));
    }
}
