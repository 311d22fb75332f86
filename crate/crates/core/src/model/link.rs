//! Second construction pass: imports, base classes and references.

use std::collections::BTreeSet;

use super::{
    BaseLink, Binding, ClassId, Container, ImportLink, ImportTarget, ModuleId, Project, Resolution,
    Scope, SubroutineId, VariableRef,
};

/// Longest chain of re-exports followed when resolving an imported member.
const MAX_REEXPORT_DEPTH: u32 = 5;

/// Resolves every link of a skeleton project. Derived fields are cleared
/// first, so linking twice gives the same result as linking once.
pub fn link_references(project: &mut Project) {
    for class in &mut project.classes {
        class.resolved_bases.clear();
        class.referenced_classes.clear();
        class.uses_global = false;
    }
    for sub in &mut project.subroutines {
        sub.referenced_variables.clear();
    }
    for module in &mut project.modules {
        module.scope.clear();
        for import in &mut module.imports {
            import.target = ImportTarget::External;
        }
    }

    let targets: Vec<Vec<ImportTarget>> = {
        let resolver = Resolver { project };
        project
            .modules
            .iter()
            .map(|m| {
                m.imports
                    .iter()
                    .map(|link| resolver.link_target(link, 0))
                    .collect()
            })
            .collect()
    };
    for (module, targets) in project.modules.iter_mut().zip(targets) {
        for (import, target) in module.imports.iter_mut().zip(targets) {
            import.target = target;
        }
    }

    let scopes: Vec<Scope<'static>> = {
        let resolver = Resolver { project };
        project.modules.iter().map(|m| resolver.module_scope(m.id)).collect()
    };
    for (module, scope) in project.modules.iter_mut().zip(scopes) {
        module.scope = scope;
    }

    let bases: Vec<Vec<BaseLink>> = {
        let resolver = Resolver { project };
        project.class_ids().map(|c| resolver.bases(c)).collect()
    };
    for (class, bases) in project.classes.iter_mut().zip(bases) {
        class.resolved_bases = bases;
    }

    let usages: Vec<Usage> = {
        let resolver = Resolver { project };
        project.subroutine_ids().map(|s| resolver.subroutine_usage(s)).collect()
    };
    let class_usages: Vec<Usage> = {
        let resolver = Resolver { project };
        project.class_ids().map(|c| resolver.class_body_usage(c)).collect()
    };

    for class_id in project.class_ids().collect::<Vec<_>>() {
        let mut referenced = class_usages[class_id.index()].classes.clone();
        let mut uses_global = class_usages[class_id.index()].uses_global;
        for method in &project.class(class_id).methods {
            referenced.extend(&usages[method.index()].classes);
            uses_global |= usages[method.index()].uses_global;
        }
        referenced.remove(&class_id);
        for ancestor in project.ancestors(class_id) {
            referenced.remove(&ancestor);
        }
        let class = &mut project.classes[class_id.index()];
        class.referenced_classes = referenced;
        class.uses_global = uses_global;
    }
    for (sub, usage) in project.subroutines.iter_mut().zip(usages) {
        sub.referenced_variables = usage.variables;
    }
}

#[derive(Default)]
struct Usage {
    variables: BTreeSet<VariableRef>,
    classes: BTreeSet<ClassId>,
    uses_global: bool,
}

struct Resolver<'p> {
    project: &'p Project,
}

impl Resolver<'_> {
    /// Exact dotted match, else the shortest (then lexicographically first)
    /// module whose dotted name ends with `.dotted`.
    fn find_module(&self, dotted: &str) -> Option<ModuleId> {
        if dotted.is_empty() {
            return None;
        }
        if let Some(id) = self.project.module_by_dotted(dotted) {
            return Some(id);
        }
        let suffix = format!(".{dotted}");
        self.project
            .by_dotted
            .iter()
            .filter(|(name, _)| name.ends_with(&suffix))
            .min_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then(a.cmp(b)))
            .map(|(_, id)| *id)
    }

    fn link_target(&self, link: &ImportLink, depth: u32) -> ImportTarget {
        let Some(module) = self.find_module(&link.module) else {
            return ImportTarget::External;
        };
        match link.member.as_deref() {
            None | Some("*") => ImportTarget::Module(module),
            Some(member) => self.member(module, member, depth),
        }
    }

    /// What `name` denotes as an attribute of module `module`.
    fn member(&self, module: ModuleId, name: &str, depth: u32) -> ImportTarget {
        let entity = self.project.module(module);
        if let Some(&class) = entity.top_level_classes.get(name) {
            return ImportTarget::Class(class);
        }
        if let Some(&sub) = entity.top_level_subroutines.get(name) {
            return ImportTarget::Subroutine(sub);
        }
        if depth < MAX_REEXPORT_DEPTH {
            if let Some(link) = entity
                .imports
                .iter()
                .find(|l| l.bound_name.as_deref() == Some(name))
            {
                let target = self.link_target(link, depth + 1);
                if target != ImportTarget::External {
                    return target;
                }
            }
        }
        if entity.defined_variables.contains(name) {
            return ImportTarget::Variable(module, name.to_string());
        }
        if let Some(sub) = self
            .project
            .module_by_dotted(&format!("{}.{name}", entity.dotted_name))
        {
            return ImportTarget::Module(sub);
        }
        ImportTarget::External
    }

    fn module_scope(&self, id: ModuleId) -> Scope<'static> {
        let module = self.project.module(id);
        let mut scope = Scope::root();
        for name in &module.defined_variables {
            scope.bind(name.clone(), Binding::Variable);
        }
        for link in &module.imports {
            let Some(bound) = &link.bound_name else { continue };
            if link.member.is_none() && &link.module != bound {
                scope.bind(bound.clone(), Binding::ModulePrefix(bound.clone()));
            } else {
                scope.bind(bound.clone(), Binding::Import(link.target.clone()));
            }
        }
        for (name, &class) in &module.top_level_classes {
            scope.bind(name.clone(), Binding::Class(class));
        }
        for (name, &sub) in &module.top_level_subroutines {
            scope.bind(name.clone(), Binding::Subroutine(sub));
        }
        scope
    }

    fn nested(&self, mut class: ClassId, path: &[&str]) -> Option<ClassId> {
        for part in path {
            class = *self
                .project
                .class(class)
                .nested_classes
                .iter()
                .find(|&&n| self.project.class(n).name == *part)?;
        }
        Some(class)
    }

    fn module_path(&self, module: ModuleId, path: &[&str]) -> Option<ClassId> {
        let (first, rest) = path.split_first()?;
        self.target_path(&self.member(module, first, 0), rest)
    }

    fn target_path(&self, target: &ImportTarget, path: &[&str]) -> Option<ClassId> {
        match *target {
            ImportTarget::Class(class) => self.nested(class, path),
            ImportTarget::Module(module) => self.module_path(module, path),
            _ => None,
        }
    }

    /// The project class a dotted expression denotes in `scope`, if any.
    fn class_of(&self, scope: &Scope<'_>, dotted: &str) -> Option<ClassId> {
        let parts: Vec<&str> = dotted.split('.').collect();
        let (head, rest) = parts.split_first()?;
        match scope.lookup(head)? {
            Binding::Class(class) => self.nested(*class, rest),
            Binding::Import(target) => self.target_path(target, rest),
            Binding::ModulePrefix(_) => (1..=parts.len()).rev().find_map(|k| {
                let module = self.project.module_by_dotted(&parts[..k].join("."))?;
                self.module_path(module, &parts[k..])
            }),
            _ => None,
        }
    }

    fn bases(&self, id: ClassId) -> Vec<BaseLink> {
        let class = self.project.class(id);
        let scope = &self.project.module(class.module).scope;
        class
            .base_names
            .iter()
            .map(|name| {
                if name == "object" || name == "builtins.object" {
                    return BaseLink::External;
                }
                let parts: Vec<&str> = name.split('.').collect();
                let sibling = match class.parent {
                    Container::Class(parent) => self
                        .project
                        .class(parent)
                        .nested_classes
                        .iter()
                        .copied()
                        .filter(|&n| n != id && self.project.class(n).name == parts[0])
                        .find_map(|n| self.nested(n, &parts[1..])),
                    Container::Module(_) => None,
                };
                match sibling.or_else(|| self.class_of(scope, name)) {
                    Some(base) if base != id => BaseLink::Class(base),
                    _ => BaseLink::External,
                }
            })
            .collect()
    }

    fn subroutine_usage(&self, id: SubroutineId) -> Usage {
        let sub = self.project.subroutine(id);
        let facts = &sub.facts;
        let module_scope = &self.project.module(sub.module).scope;
        let mut scope = Scope::child(module_scope);
        for name in facts.bound_names().chain(&facts.nonlocals) {
            scope.bind(name.clone(), Binding::Local);
        }
        for param in &sub.parameters {
            scope.bind(param.name.clone(), Binding::Parameter);
        }
        for name in &facts.globals {
            scope.bind(name.clone(), Binding::Variable);
        }
        let enclosing = match sub.parent {
            Container::Class(class) => Some(class),
            Container::Module(_) => None,
        };

        let mut usage = Usage::default();
        for name in facts.loads.iter().chain(&facts.stores) {
            let resolution = if facts.globals.contains(name) {
                Resolution::ModuleGlobal { variable: true }
            } else {
                match scope.lookup(name) {
                    Some(Binding::Parameter) => Resolution::Parameter,
                    Some(Binding::Local) => Resolution::Local,
                    Some(Binding::Variable) => Resolution::ModuleGlobal { variable: true },
                    Some(Binding::Class(class)) => {
                        usage.classes.insert(*class);
                        Resolution::ModuleGlobal { variable: false }
                    }
                    Some(Binding::Subroutine(_)) => Resolution::ModuleGlobal { variable: false },
                    Some(Binding::Import(target)) => {
                        if let ImportTarget::Class(class) = target {
                            usage.classes.insert(*class);
                        }
                        Resolution::Imported
                    }
                    Some(Binding::ModulePrefix(_)) => Resolution::Imported,
                    None => Resolution::Unresolved,
                }
            };
            if resolution == (Resolution::ModuleGlobal { variable: true }) {
                usage.uses_global = true;
            }
            usage.variables.insert(VariableRef {
                name: name.clone(),
                resolution,
            });
        }
        if !facts.globals.is_empty() {
            usage.uses_global = true;
        }

        let type_of = |base: &str| -> Option<ClassId> {
            if sub.receiver.as_deref() == Some(base) {
                return enclosing;
            }
            if let Some(param) = sub.parameters.iter().find(|p| p.name == base) {
                return param
                    .annotation
                    .as_deref()
                    .and_then(|a| self.class_of(module_scope, a));
            }
            let head = base.split('.').next().unwrap_or(base);
            if facts.binds(head) || facts.nonlocals.contains(head) {
                if let Some(annotation) = facts.annotations.get(base) {
                    return self.class_of(module_scope, annotation);
                }
                let callees = facts.constructions.get(base)?;
                let mut classes = callees.iter().map(|c| self.class_of(module_scope, c));
                let first = classes.next()??;
                return classes.all(|c| c == Some(first)).then_some(first);
            }
            self.class_of(&scope, base)
        };

        for access in &facts.attrs {
            let head = access.base.split('.').next().unwrap_or(&access.base);
            let locally_bound = matches!(
                scope.lookup(head),
                Some(Binding::Local | Binding::Parameter)
            );
            if !locally_bound {
                if let Some(class) = self.class_of(&scope, &format!("{}.{}", access.base, access.attr)) {
                    usage.classes.insert(class);
                    continue;
                }
            }
            let Some(owner) = type_of(&access.base) else { continue };
            usage.classes.insert(owner);
            let field = if self.project.has_field(owner, &access.attr) {
                Some(access.attr.clone())
            } else if self.project.has_method(owner, &access.attr) {
                continue;
            } else {
                None
            };
            let reference = match field {
                Some(field) => VariableRef {
                    name: field,
                    resolution: if Some(owner) == enclosing {
                        Resolution::OwnField
                    } else {
                        Resolution::ForeignField { owner }
                    },
                },
                None => VariableRef {
                    name: format!("{}.{}", access.base, access.attr),
                    resolution: Resolution::Unresolved,
                },
            };
            usage.variables.insert(reference);
        }

        for param in &sub.parameters {
            if let Some(class) = param
                .annotation
                .as_deref()
                .and_then(|a| self.class_of(module_scope, a))
            {
                usage.classes.insert(class);
            }
        }
        for dotted in facts
            .annotation_refs
            .iter()
            .chain(facts.constructions.values().flatten())
        {
            if let Some(class) = self.class_of(&scope, dotted) {
                usage.classes.insert(class);
            }
        }
        usage
    }

    /// References made by a class body outside its methods.
    fn class_body_usage(&self, id: ClassId) -> Usage {
        let class = self.project.class(id);
        let facts = &class.body_facts;
        let scope = &self.project.module(class.module).scope;
        let mut usage = Usage::default();
        for name in facts.loads.iter().filter(|n| !facts.binds(n)) {
            match scope.lookup(name) {
                Some(Binding::Variable) => usage.uses_global = true,
                Some(Binding::Class(class)) | Some(Binding::Import(ImportTarget::Class(class))) => {
                    usage.classes.insert(*class);
                }
                _ => {}
            }
        }
        for dotted in facts
            .annotation_refs
            .iter()
            .chain(facts.constructions.values().flatten())
            .cloned()
            .chain(facts.attrs.iter().map(|a| format!("{}.{}", a.base, a.attr)))
        {
            if let Some(class) = self.class_of(scope, &dotted) {
                usage.classes.insert(class);
            }
        }
        usage
    }
}
