//! Name scopes used during reference resolution.

use std::collections::BTreeMap;

use super::{ClassId, ImportTarget, SubroutineId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    /// Assigned variable.
    Variable,
    Class(ClassId),
    Subroutine(SubroutineId),
    /// Bound by an import statement.
    Import(ImportTarget),
    /// `import a.b` binds `a`; the payload is the dotted prefix it names.
    ModulePrefix(String),
    Parameter,
    Local,
}

/// A binding table with an optional parent. Lookups walk from the innermost
/// scope outwards and the innermost binding wins.
#[derive(Debug, Clone, Default)]
pub struct Scope<'p> {
    bindings: BTreeMap<String, Binding>,
    parent: Option<&'p Scope<'p>>,
}

impl<'p> Scope<'p> {
    pub fn root() -> Self {
        Self {
            bindings: BTreeMap::new(),
            parent: None,
        }
    }

    pub fn child(parent: &'p Scope<'p>) -> Self {
        Self {
            bindings: BTreeMap::new(),
            parent: Some(parent),
        }
    }

    pub fn bind(&mut self, name: impl Into<String>, binding: Binding) {
        self.bindings.insert(name.into(), binding);
    }

    /// Binds only if the name is not bound in this scope yet.
    pub fn bind_default(&mut self, name: impl Into<String>, binding: Binding) {
        self.bindings.entry(name.into()).or_insert(binding);
    }

    pub fn lookup(&self, name: &str) -> Option<&Binding> {
        let mut scope = Some(self);
        while let Some(current) = scope {
            if let Some(binding) = current.bindings.get(name) {
                return Some(binding);
            }
            scope = current.parent;
        }
        None
    }

    pub fn lookup_local(&self, name: &str) -> Option<&Binding> {
        self.bindings.get(name)
    }

    pub fn clear(&mut self) {
        self.bindings.clear();
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn innermost_binding_wins() {
        let mut module = Scope::root();
        module.bind("x", Binding::Variable);
        module.bind("C", Binding::Class(ClassId(0)));
        let mut function = Scope::child(&module);
        function.bind("x", Binding::Local);
        assert_eq!(function.lookup("x"), Some(&Binding::Local));
        assert_eq!(function.lookup("C"), Some(&Binding::Class(ClassId(0))));
        assert_eq!(function.lookup("missing"), None);
        assert_eq!(module.lookup("x"), Some(&Binding::Variable));
    }
}
