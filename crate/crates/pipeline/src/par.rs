//! Bounded-parallel per-language execution shared by the builders.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Mutex;

use crate::PipelineError;

/// Runs `work` for every language on at most `workers` threads; the
/// first failure stops the run. Returns per-language results.
pub(crate) fn for_each_language<F>(
    langs: &[String],
    workers: usize,
    work: F,
) -> Result<BTreeMap<String, u64>, PipelineError>
where
    F: Fn(&str) -> Result<u64, PipelineError> + Sync,
{
    let queue: Mutex<VecDeque<&String>> = Mutex::new(langs.iter().collect());
    let counts: Mutex<BTreeMap<String, u64>> = Mutex::new(BTreeMap::new());
    let failure: Mutex<Option<PipelineError>> = Mutex::new(None);
    let workers = workers.max(1).min(langs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let lang = match queue.lock().unwrap().pop_front() {
                    Some(lang) => lang,
                    None => return,
                };
                if failure.lock().unwrap().is_some() {
                    return;
                }
                match work(lang) {
                    Ok(count) => {
                        counts.lock().unwrap().insert(lang.clone(), count);
                    }
                    Err(error) => {
                        let mut slot = failure.lock().unwrap();
                        if slot.is_none() {
                            *slot = Some(error);
                        }
                        return;
                    }
                }
            });
        }
    });
    if let Some(error) = failure.into_inner().unwrap() {
        return Err(error);
    }
    Ok(counts.into_inner().unwrap())
}
