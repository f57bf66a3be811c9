use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use crate::error::ErrorCode;

use super::vkv::{KeyValue, VkvStore};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);
static LIVE_HANDLES: Mutex<BTreeSet<u64>> = Mutex::new(BTreeSet::new());

fn fresh_id() -> u64 {
    NEXT_ID.fetch_add(1, Ordering::Relaxed)
}

fn live() -> std::sync::MutexGuard<'static, BTreeSet<u64>> {
    LIVE_HANDLES.lock().unwrap_or_else(|e| e.into_inner())
}

#[derive(Debug)]
struct HandleInner {
    id: u64,
    kv: Mutex<VkvStore>,
    default_executor: Executor,
}

/// Library handle. Every other object is tied to the handle that created it.
#[derive(Debug, Clone)]
pub struct Handle {
    inner: Arc<HandleInner>,
}

impl Handle {
    pub fn id(&self) -> u64 {
        self.inner.id
    }

    /// False once the handle has been destroyed through any of its clones.
    pub fn is_live(&self) -> bool {
        live().contains(&self.inner.id)
    }

    pub(crate) fn check(&self) -> Result<(), ErrorCode> {
        if self.is_live() {
            Ok(())
        } else {
            Err(ErrorCode::InvalidHandle)
        }
    }
}

impl PartialEq for Handle {
    fn eq(&self, other: &Self) -> bool {
        self.inner.id == other.inner.id
    }
}

impl Eq for Handle {}

impl KeyValue for Handle {
    fn kv(&self) -> &Mutex<VkvStore> {
        &self.inner.kv
    }
}

#[derive(Debug)]
struct ExecutorInner {
    id: u64,
    handle_id: u64,
    kv: Mutex<VkvStore>,
}

/// Execution resource. The reference engine is serial, so the executor only
/// gets recorded in the status of each execution.
#[derive(Debug, Clone)]
pub struct Executor {
    inner: Arc<ExecutorInner>,
}

impl Executor {
    pub fn id(&self) -> u64 {
        self.inner.id
    }

    pub fn handle_id(&self) -> u64 {
        self.inner.handle_id
    }
}

impl PartialEq for Executor {
    fn eq(&self, other: &Self) -> bool {
        self.inner.id == other.inner.id
    }
}

impl Eq for Executor {}

impl KeyValue for Executor {
    fn kv(&self) -> &Mutex<VkvStore> {
        &self.inner.kv
    }
}

pub fn tapp_create_handle(out: &mut Option<Handle>) -> ErrorCode {
    let id = fresh_id();
    let executor = Executor {
        inner: Arc::new(ExecutorInner {
            id: fresh_id(),
            handle_id: id,
            kv: Mutex::new(VkvStore::new()),
        }),
    };
    live().insert(id);
    *out = Some(Handle {
        inner: Arc::new(HandleInner {
            id,
            kv: Mutex::new(VkvStore::new()),
            default_executor: executor,
        }),
    });
    ErrorCode::Ok
}

/// Release the handle and reset the slot to `None`.
pub fn tapp_destroy_handle(slot: &mut Option<Handle>) -> ErrorCode {
    let Some(handle) = slot.as_ref() else {
        return ErrorCode::InvalidHandle;
    };
    if !live().remove(&handle.id()) {
        return ErrorCode::InvalidHandle;
    }
    *slot = None;
    ErrorCode::Ok
}

/// The handle's constant default executor; every call yields an equal value.
pub fn tapp_get_default_executor(handle: &Handle, out: &mut Option<Executor>) -> ErrorCode {
    if let Err(code) = handle.check() {
        return code;
    }
    *out = Some(handle.inner.default_executor.clone());
    ErrorCode::Ok
}

pub(crate) fn check_live(handle_id: u64) -> Result<(), ErrorCode> {
    if live().contains(&handle_id) {
        Ok(())
    } else {
        Err(ErrorCode::InvalidHandle)
    }
}
