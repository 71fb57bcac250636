//! Single-producer, single-consumer queue that drops its oldest item
//! instead of blocking the producer.

use std::collections::VecDeque;
use std::sync::{Arc, Condvar, Mutex};
use std::thread::JoinHandle;

use super::{Frame, FrameSource, IngestError, SourceStats};

pub const DEFAULT_QUEUE_DEPTH: usize = 4;

struct State<T> {
    items: VecDeque<T>,
    closed: bool,
    dropped: u64,
}

struct Shared<T> {
    state: Mutex<State<T>>,
    ready: Condvar,
    depth: usize,
}

pub struct QueueSender<T>(Arc<Shared<T>>);
pub struct QueueReceiver<T>(Arc<Shared<T>>);

pub fn bounded<T>(depth: usize) -> (QueueSender<T>, QueueReceiver<T>) {
    assert!(depth > 0, "queue depth must be positive");
    let shared = Arc::new(Shared {
        state: Mutex::new(State { items: VecDeque::with_capacity(depth), closed: false, dropped: 0 }),
        ready: Condvar::new(),
        depth,
    });
    (QueueSender(shared.clone()), QueueReceiver(shared))
}

impl<T> QueueSender<T> {
    /// Enqueues `item`, evicting the oldest one when full.
    pub fn push(&self, item: T) {
        let mut s = self.0.state.lock().expect("queue lock");
        if s.items.len() == self.0.depth {
            s.items.pop_front();
            s.dropped += 1;
        }
        s.items.push_back(item);
        self.0.ready.notify_one();
    }
}

impl<T> Drop for QueueSender<T> {
    fn drop(&mut self) {
        self.0.state.lock().expect("queue lock").closed = true;
        self.0.ready.notify_all();
    }
}

impl<T> QueueReceiver<T> {
    /// Blocks for the next item; `None` once the sender is gone and the
    /// queue is drained.
    pub fn recv(&self) -> Option<T> {
        let mut s = self.0.state.lock().expect("queue lock");
        loop {
            if let Some(item) = s.items.pop_front() {
                return Some(item);
            }
            if s.closed {
                return None;
            }
            s = self.0.ready.wait(s).expect("queue lock");
        }
    }

    /// Items evicted because the consumer lagged.
    pub fn dropped(&self) -> u64 {
        self.0.state.lock().expect("queue lock").dropped
    }
}

/// Runs `source` on its own thread, feeding a drop-oldest queue of `depth`.
/// A source error is queued last, after which the queue closes.
pub fn spawn_reader<S>(mut source: S, depth: usize) -> (QueueReceiver<Result<Frame, IngestError>>, JoinHandle<SourceStats>)
where
    S: FrameSource + Send + 'static,
{
    let (tx, rx) = bounded(depth);
    let handle = std::thread::spawn(move || {
        loop {
            match source.next_frame() {
                Ok(Some(f)) => tx.push(Ok(f)),
                Ok(None) => break,
                Err(e) => {
                    tx.push(Err(e));
                    break;
                }
            }
        }
        source.close();
        source.stats()
    });
    (rx, handle)
}
