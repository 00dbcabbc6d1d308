//! Name-keyed registry of strategy objects.
//!
//! Propagators and sharp-exponent theorems are interchangeable
//! implementations of a common trait; each module builds a [`Registry`] of
//! its built-in strategies so that callers (the CLI in particular) can select
//! one by name at runtime.

use std::sync::Arc;

use crate::error::{LabError, Result};

pub trait Named {
    fn name(&self) -> &str;
}

pub struct Registry<T: ?Sized + Named> {
    kind: &'static str,
    entries: Vec<Arc<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: Vec::new(),
        }
    }

    /// Adds a strategy. A later registration under an existing name replaces
    /// the earlier one.
    pub fn register(&mut self, entry: Arc<T>) -> &mut Self {
        if let Some(slot) = self.entries.iter_mut().find(|e| e.name() == entry.name()) {
            *slot = entry;
        } else {
            self.entries.push(entry);
        }
        self
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .cloned()
            .ok_or_else(|| LabError::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<T>> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter: Named {
        fn greet(&self) -> String;
    }

    struct Plain(&'static str, &'static str);

    impl Named for Plain {
        fn name(&self) -> &str {
            self.0
        }
    }

    impl Greeter for Plain {
        fn greet(&self) -> String {
            self.1.to_string()
        }
    }

    #[test]
    fn lookup_and_replace() {
        let mut reg: Registry<dyn Greeter> = Registry::new("greeter");
        reg.register(Arc::new(Plain("a", "hi")));
        reg.register(Arc::new(Plain("b", "yo")));
        reg.register(Arc::new(Plain("a", "hello")));
        assert_eq!(reg.len(), 2);
        assert_eq!(reg.get("a").unwrap().greet(), "hello");
        let err = reg.get("zzz").err().unwrap();
        assert!(matches!(err, LabError::UnknownStrategy { .. }));
        assert!(err.to_string().contains("a, b"));
    }
}
