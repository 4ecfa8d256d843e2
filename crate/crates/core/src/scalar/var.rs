//! Process-wide interned variable names.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

/// An interned variable. Ordering follows interning order, so it is only
/// stable within one process; printing never depends on it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

#[derive(Default)]
struct Interner {
    names: Vec<Arc<str>>,
    ids: HashMap<Arc<str>, u32>,
}

fn interner() -> &'static RwLock<Interner> {
    static I: OnceLock<RwLock<Interner>> = OnceLock::new();
    I.get_or_init(|| RwLock::new(Interner::default()))
}

impl Var {
    pub fn new(name: &str) -> Var {
        if let Some(&id) = interner().read().unwrap().ids.get(name) {
            return Var(id);
        }
        let mut w = interner().write().unwrap();
        if let Some(&id) = w.ids.get(name) {
            return Var(id);
        }
        let id = w.names.len() as u32;
        let s: Arc<str> = Arc::from(name);
        w.names.push(s.clone());
        w.ids.insert(s, id);
        Var(id)
    }

    pub fn name(self) -> Arc<str> {
        interner().read().unwrap().names[self.0 as usize].clone()
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
