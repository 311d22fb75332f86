//! First construction pass: entities and their directly observable
//! properties.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::PathBuf;

use crate::frontend::tree::{NodeKind, ParamKind};
use crate::frontend::{Node, SyntaxTree};

use super::{
    is_test_path, AccessorShape, BodyFacts, ClassEntity, ClassId, Container, ImportLink,
    ImportTarget, ModelError, ModuleEntity, ModuleId, ParamInfo, Project, Scope, SubroutineEntity,
    SubroutineId, Visibility,
};

pub struct ModuleInput<'t> {
    /// Path relative to the project root.
    pub path: &'t str,
    pub tree: &'t SyntaxTree,
    pub physical_lines: usize,
}

/// Builds all entities of one project from its parsed modules. Inputs are
/// processed in path order, so ids do not depend on discovery order.
pub fn build_skeleton(
    name: &str,
    root_path: PathBuf,
    inputs: &[ModuleInput<'_>],
) -> Result<Project, ModelError> {
    let mut order: Vec<&ModuleInput<'_>> = inputs.iter().collect();
    order.sort_by(|a, b| a.path.cmp(b.path));
    let mut seen = BTreeSet::new();
    for input in &order {
        if !seen.insert(normalize(input.path)) {
            return Err(ModelError::DuplicateModule(input.path.to_string()));
        }
    }

    let mut builder = Builder {
        project: Project::empty(name, root_path),
        qualified_counts: HashMap::new(),
    };
    for input in order {
        builder.add_module(input);
    }
    let mut project = builder.project;
    project.by_dotted = project
        .modules
        .iter()
        .filter(|m| !m.dotted_name.is_empty())
        .map(|m| (m.dotted_name.clone(), m.id))
        .collect();
    Ok(project)
}

fn normalize(path: &str) -> String {
    path.replace('\\', "/").trim_start_matches("./").to_string()
}

/// `pkg/sub/mod.py` → (`pkg.sub.mod`, false); `pkg/__init__.py` → (`pkg`, true).
pub(crate) fn dotted_module_name(path: &str) -> (String, bool) {
    let path = normalize(path);
    let stem = path.strip_suffix(".py").unwrap_or(&path);
    let mut parts: Vec<&str> = stem.split('/').filter(|p| !p.is_empty()).collect();
    let is_package = parts.last() == Some(&"__init__");
    if is_package {
        parts.pop();
    }
    (parts.join("."), is_package)
}

struct Builder {
    project: Project,
    qualified_counts: HashMap<(ModuleId, String), u32>,
}

#[derive(Clone)]
struct DefContext {
    module: ModuleId,
    container: Container,
    prefix: String,
    /// Inside a function body: definitions here are not module members.
    in_function: bool,
}

impl Builder {
    fn add_module(&mut self, input: &ModuleInput<'_>) {
        let id = ModuleId(self.project.modules.len() as u32);
        let path = normalize(input.path);
        let (dotted_name, is_package) = dotted_module_name(&path);
        let body = input.tree.root.body();
        let facts = BodyFacts::of_block(body);
        let mut imports = Vec::new();
        collect_imports(body, &dotted_name, is_package, &mut imports);
        self.project.modules.push(ModuleEntity {
            id,
            is_test: is_test_path(std::path::Path::new(&path)),
            path,
            dotted_name,
            is_package,
            loc: input.tree.file_loc(),
            physical_lines: input.physical_lines,
            defined_classes: Vec::new(),
            defined_subroutines: Vec::new(),
            defined_variables: facts.stores.clone(),
            imports,
            scope: Scope::root(),
            top_level_classes: BTreeMap::new(),
            top_level_subroutines: BTreeMap::new(),
        });
        let ctx = DefContext {
            module: id,
            container: Container::Module(id),
            prefix: String::new(),
            in_function: false,
        };
        self.collect(body, &ctx, input.tree);

        // `global x` followed by a store makes `x` a module variable.
        let declared: Vec<String> = self.project.modules[id.index()]
            .defined_subroutines
            .iter()
            .chain(
                self.project.modules[id.index()]
                    .defined_classes
                    .iter()
                    .flat_map(|c| self.project.classes[c.index()].methods.iter()),
            )
            .flat_map(|s| {
                let facts = &self.project.subroutines[s.index()].facts;
                facts.globals.intersection(&facts.stores).cloned().collect::<Vec<_>>()
            })
            .collect();
        self.project.modules[id.index()]
            .defined_variables
            .extend(declared);
    }

    fn collect(&mut self, stmts: &[Node], ctx: &DefContext, tree: &SyntaxTree) {
        for stmt in stmts {
            match &stmt.kind {
                NodeKind::ClassDef(_) => self.add_class(stmt, ctx, tree),
                NodeKind::FunctionDef(_) if ctx.in_function => {
                    // Nested functions are folded into their enclosing
                    // subroutine; only classes inside them become entities.
                    let header = stmt.as_function().expect("function");
                    let nested = DefContext {
                        prefix: format!("{}{}.<locals>.", ctx.prefix, header.name),
                        ..ctx.clone()
                    };
                    self.collect(&stmt.children, &nested, tree);
                }
                NodeKind::FunctionDef(_) => {
                    let id = self.add_subroutine(stmt, ctx, tree);
                    let name = &self.project.subroutines[id.index()].name;
                    let nested = DefContext {
                        prefix: format!("{}{}.<locals>.", ctx.prefix, name),
                        in_function: true,
                        ..ctx.clone()
                    };
                    self.collect(&stmt.children, &nested, tree);
                }
                NodeKind::Other(_) => self.collect(&stmt.children, ctx, tree),
                _ => {}
            }
        }
    }

    fn unique_qualified(&mut self, module: ModuleId, qualified: String) -> String {
        let count = self
            .qualified_counts
            .entry((module, qualified.clone()))
            .or_insert(0);
        *count += 1;
        if *count == 1 {
            qualified
        } else {
            format!("{qualified}#{count}")
        }
    }

    fn add_class(&mut self, node: &Node, ctx: &DefContext, tree: &SyntaxTree) {
        let header = node.as_class().expect("class node");
        let id = ClassId(self.project.classes.len() as u32);
        let qualified = self.unique_qualified(ctx.module, format!("{}{}", ctx.prefix, header.name));
        let mut body_facts = BodyFacts::of_block(&node.children);
        let header_exprs: Vec<&Node> = header.keywords.iter().chain(&header.decorators).collect();
        body_facts.add_header_refs(&header_exprs);
        let fields = body_facts
            .assigned
            .iter()
            .map(|name| (name.clone(), Visibility::of(name)))
            .collect();

        self.project.classes.push(ClassEntity {
            id,
            name: header.name.clone(),
            qualified_name: qualified.clone(),
            module: ctx.module,
            parent: ctx.container,
            span: node.span,
            loc: tree.lines.count(node.span),
            base_names: header.bases.iter().map(Node::expr_text).collect(),
            resolved_bases: Vec::new(),
            methods: Vec::new(),
            nested_classes: Vec::new(),
            fields,
            referenced_classes: BTreeSet::new(),
            uses_global: false,
            body_facts,
        });
        let module = &mut self.project.modules[ctx.module.index()];
        module.defined_classes.push(id);
        if !ctx.in_function && matches!(ctx.container, Container::Module(_)) {
            module
                .top_level_classes
                .entry(header.name.clone())
                .or_insert(id);
        }
        if let Container::Class(parent) = ctx.container {
            self.project.classes[parent.index()].nested_classes.push(id);
        }

        let inner = DefContext {
            module: ctx.module,
            container: Container::Class(id),
            prefix: format!("{qualified}."),
            in_function: false,
        };
        self.collect(&node.children, &inner, tree);

        // Fields assigned through the receiver in the class's own methods.
        let class = &self.project.classes[id.index()];
        let receiver_fields: Vec<String> = class
            .methods
            .iter()
            .flat_map(|m| {
                let sub = &self.project.subroutines[m.index()];
                sub.receiver.iter().flat_map(move |receiver| {
                    sub.facts
                        .attrs
                        .iter()
                        .filter(move |a| a.store && &a.base == receiver)
                        .map(|a| a.attr.clone())
                })
            })
            .collect();
        let class = &mut self.project.classes[id.index()];
        for field in receiver_fields {
            let visibility = Visibility::of(&field);
            class.fields.entry(field).or_insert(visibility);
        }
    }

    fn add_subroutine(&mut self, node: &Node, ctx: &DefContext, tree: &SyntaxTree) -> SubroutineId {
        let header = node.as_function().expect("function node");
        let id = SubroutineId(self.project.subroutines.len() as u32);
        let qualified = self.unique_qualified(ctx.module, format!("{}{}", ctx.prefix, header.name));
        let decorators: Vec<String> = header.decorators.iter().map(decorator_name).collect();
        let parameters: Vec<ParamInfo> = header
            .params
            .iter()
            .map(|p| ParamInfo {
                name: p.name.clone(),
                kind: p.kind,
                annotation: p.annotation.as_ref().and_then(Node::dotted_name),
            })
            .collect();
        let is_static = decorators
            .iter()
            .any(|d| d == "staticmethod" || d.ends_with(".staticmethod"));
        let receiver = match ctx.container {
            Container::Class(_) if !is_static => parameters
                .first()
                .filter(|p| matches!(p.kind, ParamKind::Positional | ParamKind::PositionalOnly))
                .map(|p| p.name.clone()),
            _ => None,
        };
        let abstract_decorated = decorators
            .iter()
            .any(|d| d.rsplit('.').next() == Some("abstractmethod"));
        let trivial_body = node.children.iter().all(|s| {
            s.is_docstring_stmt()
                || matches!(s.kind, NodeKind::Pass)
                || (matches!(s.kind, NodeKind::ExprStmt)
                    && s.children.len() == 1
                    && matches!(s.children[0].kind, NodeKind::Ellipsis))
        });
        let mut facts = BodyFacts::of_function(&node.children);
        let header_exprs: Vec<&Node> = header
            .decorators
            .iter()
            .chain(header.params.iter().filter_map(|p| p.default.as_ref()))
            .collect();
        facts.add_header_refs(&header_exprs);
        let accessor_shape = receiver.as_deref().and_then(|r| {
            let params: Vec<String> = parameters.iter().skip(1).map(|p| p.name.clone()).collect();
            AccessorShape::detect(&node.children, r, &params)
        });

        self.project.subroutines.push(SubroutineEntity {
            id,
            name: header.name.clone(),
            qualified_name: qualified,
            module: ctx.module,
            parent: ctx.container,
            span: node.span,
            loc: tree.lines.count(node.span),
            parameters,
            receiver,
            decorators,
            is_concrete: !(abstract_decorated || trivial_body),
            referenced_variables: BTreeSet::new(),
            facts,
            accessor_shape,
        });
        match ctx.container {
            Container::Class(class) => self.project.classes[class.index()].methods.push(id),
            Container::Module(module) => {
                let module = &mut self.project.modules[module.index()];
                module.defined_subroutines.push(id);
                module
                    .top_level_subroutines
                    .entry(header.name.clone())
                    .or_insert(id);
            }
        }
        id
    }
}

/// `@property` → `property`; `@app.route("/")` → `app.route`.
fn decorator_name(node: &Node) -> String {
    match node.kind {
        NodeKind::Call => node
            .children
            .first()
            .map(decorator_name)
            .unwrap_or_else(|| node.expr_text()),
        _ => node.dotted_name().unwrap_or_else(|| node.expr_text()),
    }
}

/// Module-level imports, including those nested in `if`/`try` blocks.
fn collect_imports(stmts: &[Node], module: &str, is_package: bool, out: &mut Vec<ImportLink>) {
    for stmt in stmts {
        match &stmt.kind {
            NodeKind::Import(aliases) => {
                for alias in aliases {
                    let source = match &alias.asname {
                        Some(asname) => format!("import {} as {asname}", alias.name),
                        None => format!("import {}", alias.name),
                    };
                    out.push(ImportLink {
                        source,
                        module: alias.name.clone(),
                        member: None,
                        bound_name: Some(alias.bound_name().to_string()),
                        target: ImportTarget::External,
                    });
                }
            }
            NodeKind::ImportFrom {
                module: from,
                level,
                names,
            } => {
                let written = format!("{}{}", ".".repeat(*level as usize), from.as_deref().unwrap_or(""));
                let absolute = absolute_module(module, is_package, *level, from.as_deref());
                for alias in names {
                    let source = match &alias.asname {
                        Some(asname) => format!("from {written} import {} as {asname}", alias.name),
                        None => format!("from {written} import {}", alias.name),
                    };
                    let star = alias.name == "*";
                    out.push(ImportLink {
                        source,
                        module: absolute.clone(),
                        member: Some(alias.name.clone()),
                        bound_name: (!star).then(|| alias.bound_name().to_string()),
                        target: ImportTarget::External,
                    });
                }
            }
            NodeKind::Other(_) => collect_imports(&stmt.children, module, is_package, out),
            _ => {}
        }
    }
}

/// Resolves a possibly relative `from` import to an absolute dotted module.
pub(crate) fn absolute_module(current: &str, is_package: bool, level: u32, from: Option<&str>) -> String {
    if level == 0 {
        return from.unwrap_or("").to_string();
    }
    let mut parts: Vec<&str> = current.split('.').filter(|p| !p.is_empty()).collect();
    if !is_package {
        parts.pop();
    }
    for _ in 1..level {
        parts.pop();
    }
    if let Some(from) = from {
        parts.extend(from.split('.'));
    }
    parts.join(".")
}
