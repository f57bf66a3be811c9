use std::collections::BTreeMap;
use std::sync::Mutex;

use crate::error::{ErrorCode, TappError};

/// Mapping from integral keys to arbitrary byte strings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VkvStore {
    entries: BTreeMap<u64, Vec<u8>>,
}

impl VkvStore {
    pub const fn new() -> Self {
        VkvStore {
            entries: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, key: u64, value: &[u8]) {
        self.entries.insert(key, value.to_vec());
    }

    pub fn get(&self, key: u64) -> Result<&[u8], TappError> {
        self.entries
            .get(&key)
            .map(Vec::as_slice)
            .ok_or(TappError::KeyNotFound(key))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Implemented by every object that carries a key-value store.
pub trait KeyValue {
    fn kv(&self) -> &Mutex<VkvStore>;
}

/// A bare key-value object; needs no library handle.
#[derive(Debug, Default)]
pub struct Attr {
    kv: Mutex<VkvStore>,
}

impl KeyValue for Attr {
    fn kv(&self) -> &Mutex<VkvStore> {
        &self.kv
    }
}

pub fn tapp_create_attr(out: &mut Option<Attr>) -> ErrorCode {
    *out = Some(Attr::default());
    ErrorCode::Ok
}

pub fn tapp_vkv_set<O: KeyValue + ?Sized>(object: &O, key: u64, value: &[u8]) -> ErrorCode {
    object.kv().lock().unwrap_or_else(|e| e.into_inner()).set(key, value);
    ErrorCode::Ok
}

/// Copy the value stored under `key` into `out`.
pub fn tapp_vkv_get<O: KeyValue + ?Sized>(object: &O, key: u64, out: &mut Vec<u8>) -> ErrorCode {
    let store = object.kv().lock().unwrap_or_else(|e| e.into_inner());
    match store.get(key) {
        Ok(bytes) => {
            out.clear();
            out.extend_from_slice(bytes);
            ErrorCode::Ok
        }
        Err(err) => err.code(),
    }
}
