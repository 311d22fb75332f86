//! The linked object-oriented fact model: projects, modules, classes and
//! subroutines.
//!
//! Construction runs in two passes. [`build_skeleton`] records what can be
//! observed directly in each syntax tree (names, parameters, textual bases,
//! fields, raw references). [`link_references`] then resolves imports, base
//! classes and every recorded reference against per-module scopes.
//!
//! Entities live in per-project arenas and refer to each other through typed
//! ids, so the finished [`Project`] is plain data and can be shared freely.

mod facts;
mod link;
mod scope;
mod skeleton;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::frontend::tree::ParamKind;
use crate::frontend::LineSpan;

pub use facts::{AccessorShape, AttrAccess, BodyFacts};
pub use link::link_references;
pub use scope::{Binding, Scope};
pub use skeleton::build_skeleton;

macro_rules! entity_id {
    ($name:ident) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }
    };
}

entity_id!(ModuleId);
entity_id!(ClassId);
entity_id!(SubroutineId);

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("module path `{0}` appears twice in one project")]
    DuplicateModule(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", content = "id", rename_all = "snake_case")]
pub enum Container {
    Module(ModuleId),
    Class(ClassId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Visibility {
    Public,
    Private,
}

impl Visibility {
    /// Leading underscores mark a name private; everything else is public.
    pub fn of(name: &str) -> Self {
        if name.starts_with('_') {
            Visibility::Private
        } else {
            Visibility::Public
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "id", rename_all = "snake_case")]
pub enum ImportTarget {
    Module(ModuleId),
    Class(ClassId),
    Subroutine(SubroutineId),
    Variable(ModuleId, String),
    External,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImportLink {
    /// Statement text, e.g. `from pkg.m import A as B`.
    pub source: String,
    /// Module the import names, already made absolute for relative imports.
    pub module: String,
    /// Member imported from `module` (`from m import member`); `*` for star
    /// imports; `None` for plain `import m`.
    pub member: Option<String>,
    /// Name bound in the importing module; `None` for star imports.
    pub bound_name: Option<String>,
    pub target: ImportTarget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", content = "id", rename_all = "snake_case")]
pub enum BaseLink {
    Class(ClassId),
    External,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Resolution {
    Local,
    Parameter,
    OwnField,
    ForeignField { owner: ClassId },
    /// A module-level binding; `variable` is false for `def`/`class` names.
    ModuleGlobal { variable: bool },
    Imported,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VariableRef {
    pub name: String,
    pub resolution: Resolution,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamInfo {
    pub name: String,
    #[serde(skip)]
    pub kind: ParamKind,
    pub annotation: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModuleEntity {
    pub id: ModuleId,
    /// Path relative to the project root, `/`-separated.
    pub path: String,
    pub dotted_name: String,
    pub is_package: bool,
    pub is_test: bool,
    pub loc: u32,
    pub physical_lines: usize,
    /// Classes defined anywhere in this module.
    pub defined_classes: Vec<ClassId>,
    /// Module-level functions.
    pub defined_subroutines: Vec<SubroutineId>,
    pub defined_variables: BTreeSet<String>,
    pub imports: Vec<ImportLink>,
    #[serde(skip)]
    pub scope: Scope<'static>,
    #[serde(skip)]
    pub(crate) top_level_classes: BTreeMap<String, ClassId>,
    #[serde(skip)]
    pub(crate) top_level_subroutines: BTreeMap<String, SubroutineId>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassEntity {
    pub id: ClassId,
    pub name: String,
    pub qualified_name: String,
    pub module: ModuleId,
    pub parent: Container,
    pub span: LineSpan,
    pub loc: u32,
    pub base_names: Vec<String>,
    pub resolved_bases: Vec<BaseLink>,
    pub methods: Vec<SubroutineId>,
    pub nested_classes: Vec<ClassId>,
    pub fields: BTreeMap<String, Visibility>,
    pub referenced_classes: BTreeSet<ClassId>,
    pub uses_global: bool,
    /// Names referenced in the class body outside its methods.
    #[serde(skip)]
    pub body_facts: BodyFacts,
}

impl ClassEntity {
    pub fn public_fields(&self) -> usize {
        self.fields.values().filter(|v| **v == Visibility::Public).count()
    }

    pub fn private_fields(&self) -> usize {
        self.fields.values().filter(|v| **v == Visibility::Private).count()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SubroutineEntity {
    pub id: SubroutineId,
    pub name: String,
    pub qualified_name: String,
    pub module: ModuleId,
    pub parent: Container,
    pub span: LineSpan,
    pub loc: u32,
    pub parameters: Vec<ParamInfo>,
    /// Name of the implicit receiver (`self`/`cls`) of a method, if any.
    pub receiver: Option<String>,
    pub decorators: Vec<String>,
    pub is_concrete: bool,
    pub referenced_variables: BTreeSet<VariableRef>,
    #[serde(skip)]
    pub facts: BodyFacts,
    #[serde(skip)]
    pub accessor_shape: Option<AccessorShape>,
}

impl SubroutineEntity {
    pub fn is_method(&self) -> bool {
        matches!(self.parent, Container::Class(_))
    }

    /// Parameters as seen by callers: the receiver is excluded.
    pub fn caller_parameters(&self) -> impl Iterator<Item = &ParamInfo> {
        let skip = usize::from(self.receiver.is_some());
        self.parameters.iter().skip(skip)
    }

    pub fn has_decorator(&self, name: &str) -> bool {
        self.decorators
            .iter()
            .any(|d| d == name || d.rsplit('.').next() == Some(name))
    }
}

/// One project: the modules under one root, with their classes and
/// subroutines.
#[derive(Debug, Clone, Serialize)]
pub struct Project {
    pub name: String,
    pub root_path: PathBuf,
    pub modules: Vec<ModuleEntity>,
    pub classes: Vec<ClassEntity>,
    pub subroutines: Vec<SubroutineEntity>,
    #[serde(skip)]
    pub(crate) by_dotted: BTreeMap<String, ModuleId>,
}

/// Identifies a class or subroutine within a project.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", content = "id", rename_all = "snake_case")]
pub enum EntityRef {
    Class(ClassId),
    Subroutine(SubroutineId),
}

impl Project {
    pub fn empty(name: impl Into<String>, root_path: impl Into<PathBuf>) -> Self {
        Self {
            name: name.into(),
            root_path: root_path.into(),
            modules: Vec::new(),
            classes: Vec::new(),
            subroutines: Vec::new(),
            by_dotted: BTreeMap::new(),
        }
    }

    pub fn module(&self, id: ModuleId) -> &ModuleEntity {
        &self.modules[id.index()]
    }

    pub fn class(&self, id: ClassId) -> &ClassEntity {
        &self.classes[id.index()]
    }

    pub fn subroutine(&self, id: SubroutineId) -> &SubroutineEntity {
        &self.subroutines[id.index()]
    }

    pub fn module_by_dotted(&self, dotted: &str) -> Option<ModuleId> {
        self.by_dotted.get(dotted).copied()
    }

    pub fn class_ids(&self) -> impl Iterator<Item = ClassId> + '_ {
        (0..self.classes.len() as u32).map(ClassId)
    }

    pub fn subroutine_ids(&self) -> impl Iterator<Item = SubroutineId> + '_ {
        (0..self.subroutines.len() as u32).map(SubroutineId)
    }

    pub fn find_class(&self, qualified: &str) -> Option<&ClassEntity> {
        self.classes.iter().find(|c| c.qualified_name == qualified)
    }

    pub fn find_subroutine(&self, qualified: &str) -> Option<&SubroutineEntity> {
        self.subroutines.iter().find(|s| s.qualified_name == qualified)
    }

    /// `module/path.py::Outer.Inner` style identity of a class.
    pub fn class_path(&self, id: ClassId) -> String {
        let class = self.class(id);
        format!("{}::{}", self.module(class.module).path, class.qualified_name)
    }

    pub fn subroutine_path(&self, id: SubroutineId) -> String {
        let sub = self.subroutine(id);
        format!("{}::{}", self.module(sub.module).path, sub.qualified_name)
    }

    pub fn entity_path(&self, entity: EntityRef) -> String {
        match entity {
            EntityRef::Class(id) => self.class_path(id),
            EntityRef::Subroutine(id) => self.subroutine_path(id),
        }
    }

    pub fn entity_module(&self, entity: EntityRef) -> &ModuleEntity {
        match entity {
            EntityRef::Class(id) => self.module(self.class(id).module),
            EntityRef::Subroutine(id) => self.module(self.subroutine(id).module),
        }
    }

    /// Classes whose own methods are listed for `id`, and `id`'s in-project
    /// ancestors, nearest first.
    pub fn ancestors(&self, id: ClassId) -> Vec<ClassId> {
        let mut seen = BTreeSet::new();
        let mut order = Vec::new();
        let mut stack = vec![id];
        while let Some(current) = stack.pop() {
            for base in self.class(current).resolved_bases.iter().rev() {
                if let BaseLink::Class(b) = *base {
                    if b != id && seen.insert(b) {
                        order.push(b);
                        stack.push(b);
                    }
                }
            }
        }
        order
    }

    /// Looks up a field on a class or its in-project ancestors.
    pub fn has_field(&self, id: ClassId, field: &str) -> bool {
        self.class(id).fields.contains_key(field)
            || self
                .ancestors(id)
                .into_iter()
                .any(|a| self.class(a).fields.contains_key(field))
    }

    pub fn has_method(&self, id: ClassId, name: &str) -> bool {
        std::iter::once(id)
            .chain(self.ancestors(id))
            .any(|c| {
                self.class(c)
                    .methods
                    .iter()
                    .any(|&m| self.subroutine(m).name == name)
            })
    }

    pub fn total_loc(&self) -> u64 {
        self.modules.iter().map(|m| u64::from(m.loc)).sum()
    }
}

/// True iff the file name or any directory segment contains `test` or `Test`.
pub fn is_test_path(path: &Path) -> bool {
    path.components().any(|c| {
        let segment = c.as_os_str().to_string_lossy();
        segment.contains("test") || segment.contains("Test")
    })
}

/// Parses and models a set of in-memory sources; a convenience for tests and
/// small tools. Files that fail to parse are skipped.
pub fn project_from_sources(name: &str, sources: &[(&str, &str)]) -> Result<Project, ModelError> {
    let trees: Vec<(String, crate::frontend::SyntaxTree, usize)> = sources
        .iter()
        .filter_map(|(path, text)| {
            let file = crate::frontend::SourceFile::new(*path, *text);
            let outcome = crate::frontend::parse_file(&file);
            outcome
                .result
                .ok()
                .map(|tree| (path.to_string(), tree, file.physical_lines))
        })
        .collect();
    let inputs: Vec<skeleton::ModuleInput<'_>> = trees
        .iter()
        .map(|(path, tree, lines)| skeleton::ModuleInput {
            path: path.as_str(),
            tree,
            physical_lines: *lines,
        })
        .collect();
    let mut project = build_skeleton(name, PathBuf::from(name), &inputs)?;
    link_references(&mut project);
    Ok(project)
}

pub use skeleton::ModuleInput;
