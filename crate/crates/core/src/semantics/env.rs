use std::collections::BTreeMap;

use super::Value;
use crate::error::{Error, Result};
use crate::syntax::Ident;

/// Address of a store cell. Locations are handed out in increasing order and
/// never reused within one store.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Location(usize);

impl Location {
    pub fn index(self) -> usize {
        self.0
    }
}

/// The cells backing linear bindings. Cells are only ever added or
/// overwritten.
#[derive(Clone, Debug, Default)]
pub struct Store {
    cells: Vec<Value>,
}

impl Store {
    pub fn new() -> Self {
        Store::default()
    }

    pub fn alloc(&mut self, value: Value) -> Location {
        self.cells.push(value);
        Location(self.cells.len() - 1)
    }

    pub fn get(&self, loc: Location) -> &Value {
        &self.cells[loc.0]
    }

    pub fn set(&mut self, loc: Location, value: Value) {
        self.cells[loc.0] = value;
    }

    /// Number of allocated cells; also the index the next allocation gets.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Value] {
        &self.cells
    }
}

/// An identifier environment split into an immutable part (identifier to
/// value) and a linear part (identifier to store location). The two domains
/// are always disjoint.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Env {
    nonlinear: BTreeMap<Ident, Value>,
    linear: BTreeMap<Ident, Location>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn nonlinear(&self) -> &BTreeMap<Ident, Value> {
        &self.nonlinear
    }

    pub fn linear(&self) -> &BTreeMap<Ident, Location> {
        &self.linear
    }

    pub fn is_frozen(&self) -> bool {
        self.linear.is_empty()
    }

    pub fn is_split(&self) -> bool {
        self.linear
            .keys()
            .all(|id| !self.nonlinear.contains_key(id))
    }

    /// Adds an immutable binding, dropping any linear binding of `id`.
    pub fn with_nonlinear(&self, id: Ident, value: Value) -> Env {
        let mut env = self.clone();
        env.linear.remove(&id);
        env.nonlinear.insert(id, value);
        env
    }

    /// Reads every linear binding out of `store` into the immutable part.
    pub fn freeze(&self, store: &Store) -> Env {
        let mut nonlinear = self.nonlinear.clone();
        for (id, &loc) in &self.linear {
            nonlinear.insert(id.clone(), store.get(loc).clone());
        }
        Env {
            nonlinear,
            linear: BTreeMap::new(),
        }
    }

    /// Puts `id` in linear scope with a freshly allocated cell holding
    /// `value`. Environments holding older cells are not affected.
    pub fn bind(&self, store: &mut Store, id: Ident, value: Value) -> Env {
        let mut env = self.clone();
        env.nonlinear.remove(&id);
        env.linear.insert(id, store.alloc(value));
        debug_assert!(env.is_split());
        env
    }

    /// Overwrites the cell `id` is linearly bound to. Every environment
    /// sharing that cell sees the new value.
    pub fn rebind(&self, store: &mut Store, id: &Ident, value: Value) -> Result<()> {
        match self.linear.get(id) {
            Some(&loc) => {
                store.set(loc, value);
                Ok(())
            }
            None => Err(Error::illformed(
                format!("`{id}` is not in linear scope"),
                None,
            )),
        }
    }

    pub fn lookup(&self, store: &Store, id: &Ident) -> Result<Value> {
        if let Some(&loc) = self.linear.get(id) {
            return Ok(store.get(loc).clone());
        }
        self.nonlinear
            .get(id)
            .cloned()
            .ok_or_else(|| Error::illformed(format!("`{id}` is not bound"), None))
    }

    /// All visible bindings with their current values, ordered by name.
    pub fn bindings(&self, store: &Store) -> Vec<(Ident, Value)> {
        self.freeze(store).nonlinear.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ErrorKind;
    use crate::syntax::build::ident;

    #[test]
    fn freeze_empty() {
        let store = Store::new();
        assert_eq!(Env::new().freeze(&store), Env::new());
    }

    #[test]
    fn freeze_moves_linear_values() {
        let mut store = Store::new();
        let env =
            Env::new()
                .with_nonlinear(ident("y"), 3.into())
                .bind(&mut store, ident("x"), 7.into());
        let frozen = env.freeze(&store);
        assert!(frozen.is_frozen());
        let expected: Vec<(Ident, Value)> = vec![(ident("x"), 7.into()), (ident("y"), 3.into())];
        assert_eq!(
            frozen.nonlinear().clone().into_iter().collect::<Vec<_>>(),
            expected
        );
        assert_eq!(frozen.freeze(&store), frozen);
    }

    #[test]
    fn first_bind_allocates() {
        let mut store = Store::new();
        let env = Env::new().bind(&mut store, ident("x"), 2.into());
        let loc = env.linear()[&ident("x")];
        assert_eq!(loc.index(), 0);
        assert_eq!(store.get(loc), &Value::from(2));
    }

    #[test]
    fn rebinding_shadows_with_a_fresh_cell() {
        let mut store = Store::new();
        let first = Env::new().bind(&mut store, ident("x"), 1.into());
        let second = first.bind(&mut store, ident("x"), 2.into());
        assert_ne!(first.linear()[&ident("x")], second.linear()[&ident("x")]);
        assert_eq!(first.lookup(&store, &ident("x")).unwrap(), Value::from(1));
        assert_eq!(second.lookup(&store, &ident("x")).unwrap(), Value::from(2));
    }

    #[test]
    fn bind_removes_nonlinear_entry() {
        let mut store = Store::new();
        let env =
            Env::new()
                .with_nonlinear(ident("x"), 5.into())
                .bind(&mut store, ident("x"), 1.into());
        assert!(!env.nonlinear().contains_key(&ident("x")));
        assert!(env.linear().contains_key(&ident("x")));
        assert!(env.is_split());
    }

    #[test]
    fn rebind_updates_shared_cell() {
        let mut store = Store::new();
        let env = Env::new().bind(&mut store, ident("x"), 2.into());
        let inner = env.bind(&mut store, ident("y"), 4.into());
        inner.rebind(&mut store, &ident("x"), 9.into()).unwrap();
        assert_eq!(store.get(env.linear()[&ident("x")]), &Value::from(9));
        assert_eq!(env.lookup(&store, &ident("x")).unwrap(), Value::from(9));
    }

    #[test]
    fn rebind_requires_linear_binding() {
        let mut store = Store::new();
        let env = Env::new().with_nonlinear(ident("x"), 2.into());
        let err = env.rebind(&mut store, &ident("x"), 9.into()).unwrap_err();
        assert_eq!(err.kind, ErrorKind::Illformed);
        let err = Env::new()
            .rebind(&mut store, &ident("q"), 9.into())
            .unwrap_err();
        assert_eq!(err.kind, ErrorKind::Illformed);
    }

    #[test]
    fn lookup_cases() {
        let mut store = Store::new();
        let err = Env::new().lookup(&store, &ident("x")).unwrap_err();
        assert_eq!(err.kind, ErrorKind::Illformed);
        let frozen = Env::new().with_nonlinear(ident("x"), 7.into());
        assert_eq!(frozen.lookup(&store, &ident("x")).unwrap(), Value::from(7));
        let env = Env::new().bind(&mut store, ident("x"), 4.into());
        assert_eq!(env.lookup(&store, &ident("x")).unwrap(), Value::from(4));
    }
}
