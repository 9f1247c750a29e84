//! Multi-threaded exact dismantling.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use netstrength_core::dismantle::{finish, plan, search_chunk, Partial};
use netstrength_core::{DismantleQuery, DismantleResult};

/// Chunks handed out per worker; more chunks balance uneven work.
const CHUNKS_PER_THREAD: usize = 8;

/// Runs the exhaustive search on `threads` workers. The answer is identical
/// to the sequential search for every thread count.
pub fn best_removal_parallel(
    q: &DismantleQuery<'_>,
    threads: usize,
) -> netstrength_core::Result<DismantleResult> {
    let threads = threads.max(1);
    let chunks = plan(q, threads * CHUNKS_PER_THREAD)?;
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<netstrength_core::Result<Partial>>> = Mutex::new(Vec::new());
    thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| {
                let mut local = Partial::default();
                loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(&chunk) = chunks.get(i) else { break };
                    match search_chunk(q, chunk) {
                        Ok(p) => local = local.merge(p),
                        Err(e) => {
                            results.lock().unwrap().push(Err(e));
                            return;
                        }
                    }
                }
                results.lock().unwrap().push(Ok(local));
            });
        }
    });
    let mut total = Partial::default();
    for partial in results.into_inner().unwrap() {
        total = total.merge(partial?);
    }
    finish(q, total)
}

/// Worker count from the environment's available parallelism.
pub fn default_threads() -> usize {
    thread::available_parallelism().map_or(1, |n| n.get())
}
