//! Primitive facts observed directly in a body of code.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::frontend::tree::{FunctionHeader, NameCtx, Node, NodeKind};

/// An attribute access whose object is a plain (possibly dotted) name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AttrAccess {
    pub base: String,
    pub attr: String,
    pub store: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BodyFacts {
    /// Names bound through name targets (assignment, loops, `with`, ...).
    pub stores: BTreeSet<String>,
    /// Subset of `stores` bound by assignment statements.
    pub assigned: BTreeSet<String>,
    /// Names bound by `def` and `class` statements.
    pub defined: BTreeSet<String>,
    /// Names bound by import statements.
    pub imported: BTreeSet<String>,
    pub globals: BTreeSet<String>,
    pub nonlocals: BTreeSet<String>,
    pub loads: BTreeSet<String>,
    pub attrs: BTreeSet<AttrAccess>,
    /// `x = Callee(...)`: local name to the dotted callee texts assigned to it.
    pub constructions: BTreeMap<String, BTreeSet<String>>,
    /// `x: Annotation = ...`: local name to dotted annotation text.
    pub annotations: BTreeMap<String, String>,
    /// Dotted expressions used as annotations anywhere in the body.
    pub annotation_refs: BTreeSet<String>,
}

impl BodyFacts {
    /// Every name bound in this body.
    pub fn bound_names(&self) -> impl Iterator<Item = &String> {
        self.stores
            .iter()
            .chain(&self.defined)
            .chain(&self.imported)
    }

    pub fn binds(&self, name: &str) -> bool {
        self.stores.contains(name) || self.defined.contains(name) || self.imported.contains(name)
    }

    /// Facts of a function body. Nested functions are folded in; nested
    /// classes contribute only their header.
    pub fn of_function(body: &[Node]) -> Self {
        let mut facts = Self::default();
        let mut collector = Collector {
            facts: &mut facts,
            fold_functions: true,
        };
        for stmt in body {
            collector.visit(stmt, false);
        }
        facts
    }

    /// Facts of a module or class body. Definitions contribute their header
    /// only; their bodies belong to their own entities.
    pub fn of_block(body: &[Node]) -> Self {
        let mut facts = Self::default();
        let mut collector = Collector {
            facts: &mut facts,
            fold_functions: false,
        };
        for stmt in body {
            collector.visit(stmt, false);
        }
        facts
    }

    /// Loads and annotation references found in a definition header
    /// (decorators, defaults, annotations, bases).
    pub fn add_header_refs(&mut self, exprs: &[&Node]) {
        let mut collector = Collector {
            facts: self,
            fold_functions: false,
        };
        for expr in exprs {
            collector.visit(expr, false);
        }
    }
}

struct Collector<'f> {
    facts: &'f mut BodyFacts,
    fold_functions: bool,
}

impl Collector<'_> {
    fn visit(&mut self, node: &Node, in_assign_target: bool) {
        match &node.kind {
            NodeKind::FunctionDef(header) => {
                self.facts.defined.insert(header.name.clone());
                self.header(header);
                if self.fold_functions {
                    for param in &header.params {
                        self.facts.stores.insert(param.name.clone());
                    }
                    for stmt in &node.children {
                        self.visit(stmt, false);
                    }
                }
            }
            NodeKind::ClassDef(header) => {
                self.facts.defined.insert(header.name.clone());
                for expr in header
                    .bases
                    .iter()
                    .chain(&header.keywords)
                    .chain(&header.decorators)
                {
                    self.visit(expr, false);
                }
            }
            NodeKind::Assign {
                targets,
                annotation,
                augmented,
            } => {
                for target in targets {
                    self.visit(target, true);
                }
                if *augmented {
                    // `x += 1` also reads `x`.
                    for target in targets {
                        if let Some(name) = target.name_id() {
                            self.facts.loads.insert(name.to_string());
                        }
                    }
                }
                if let Some(annotation) = annotation {
                    self.annotation(annotation);
                    if let (Some(name), Some(ty)) = (
                        targets.first().and_then(Node::name_id),
                        annotation.dotted_name(),
                    ) {
                        self.facts.annotations.insert(name.to_string(), ty);
                    }
                }
                if let Some(callee) = node
                    .children
                    .first()
                    .filter(|v| matches!(v.kind, NodeKind::Call))
                    .and_then(|call| call.children.first())
                    .and_then(Node::dotted_name)
                {
                    for target in targets {
                        if let Some(name) = target.name_id() {
                            self.facts
                                .constructions
                                .entry(name.to_string())
                                .or_default()
                                .insert(callee.clone());
                        }
                    }
                }
                for child in &node.children {
                    self.visit(child, false);
                }
            }
            NodeKind::Global(names) => self.facts.globals.extend(names.iter().cloned()),
            NodeKind::Nonlocal(names) => self.facts.nonlocals.extend(names.iter().cloned()),
            NodeKind::Import(aliases) => {
                for alias in aliases {
                    self.facts.imported.insert(alias.bound_name().to_string());
                }
            }
            NodeKind::ImportFrom { names, .. } => {
                for alias in names.iter().filter(|a| a.name != "*") {
                    self.facts.imported.insert(alias.bound_name().to_string());
                }
            }
            NodeKind::Name { id, ctx } => match ctx {
                NameCtx::Load => {
                    self.facts.loads.insert(id.clone());
                }
                NameCtx::Store | NameCtx::Del => {
                    self.facts.stores.insert(id.clone());
                    if in_assign_target {
                        self.facts.assigned.insert(id.clone());
                    }
                }
            },
            NodeKind::Attribute { attr, ctx } => {
                if let Some(base) = node.children.first().and_then(Node::dotted_name) {
                    self.facts.attrs.insert(AttrAccess {
                        base,
                        attr: attr.clone(),
                        store: *ctx != NameCtx::Load,
                    });
                }
                for child in &node.children {
                    self.visit(child, false);
                }
            }
            _ => {
                // Tuple/list/starred targets keep the assignment context.
                let keep = in_assign_target
                    && matches!(node.kind, NodeKind::Other("tuple" | "list" | "starred"));
                for child in &node.children {
                    self.visit(child, keep);
                }
            }
        }
    }

    fn header(&mut self, header: &FunctionHeader) {
        for decorator in &header.decorators {
            self.visit(decorator, false);
        }
        for param in &header.params {
            if let Some(default) = &param.default {
                self.visit(default, false);
            }
            if let Some(annotation) = &param.annotation {
                self.annotation(annotation);
            }
        }
        if let Some(returns) = &header.returns {
            self.annotation(returns);
        }
    }

    fn annotation(&mut self, annotation: &Node) {
        annotation.walk(&mut |n| {
            if let Some(dotted) = n.dotted_name() {
                self.facts.annotation_refs.insert(dotted);
            }
        });
        self.visit(annotation, false);
    }
}

/// Body shapes that make a method a plain accessor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AccessorShape {
    /// `return self.field`
    ReturnsField { field: String },
    /// `self.field = param`
    AssignsField { field: String, param: String },
}

impl AccessorShape {
    pub fn field(&self) -> &str {
        match self {
            AccessorShape::ReturnsField { field } | AccessorShape::AssignsField { field, .. } => field,
        }
    }

    /// Recognises a body of exactly one statement (after an optional
    /// docstring) that reads or writes a single receiver field.
    pub fn detect(body: &[Node], receiver: &str, params: &[String]) -> Option<Self> {
        let stmts: Vec<&Node> = body
            .iter()
            .enumerate()
            .filter(|(i, s)| !(*i == 0 && s.is_docstring_stmt()))
            .map(|(_, s)| s)
            .collect();
        let [stmt] = stmts.as_slice() else {
            return None;
        };
        let receiver_field = |node: &Node| -> Option<String> {
            match &node.kind {
                NodeKind::Attribute { attr, .. }
                    if node.children.first().and_then(Node::name_id) == Some(receiver) =>
                {
                    Some(attr.clone())
                }
                _ => None,
            }
        };
        match &stmt.kind {
            NodeKind::Return => {
                let field = receiver_field(stmt.children.first()?)?;
                Some(AccessorShape::ReturnsField { field })
            }
            NodeKind::Assign {
                targets,
                augmented: false,
                ..
            } if targets.len() == 1 => {
                let field = receiver_field(&targets[0])?;
                let param = stmt.children.first()?.name_id()?;
                params
                    .iter()
                    .any(|p| p == param)
                    .then(|| AccessorShape::AssignsField {
                        field,
                        param: param.to_string(),
                    })
            }
            _ => None,
        }
    }
}
