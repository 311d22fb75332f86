//! A reduced, Python-shaped syntax tree.
//!
//! The tree keeps exactly what fact extraction needs: definitions with their
//! headers, binding sites, attribute accesses, name references, imports and
//! string literals. Everything else is lowered to [`NodeKind::Other`] so that
//! its children stay reachable.

use serde::Serialize;

/// Inclusive, 1-based range of physical lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LineSpan {
    pub start: u32,
    pub end: u32,
}

impl LineSpan {
    pub fn new(start: u32, end: u32) -> Self {
        debug_assert!(start <= end);
        Self { start, end }
    }

    pub fn line(line: u32) -> Self {
        Self::new(line, line)
    }

    pub fn line_count(&self) -> u32 {
        self.end - self.start + 1
    }

    pub fn contains(&self, line: u32) -> bool {
        self.start <= line && line <= self.end
    }

    pub fn cover(self, other: LineSpan) -> LineSpan {
        LineSpan::new(self.start.min(other.start), self.end.max(other.end))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NameCtx {
    Load,
    Store,
    Del,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamKind {
    PositionalOnly,
    Positional,
    VarArgs,
    KeywordOnly,
    VarKeywords,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub name: String,
    pub kind: ParamKind,
    pub annotation: Option<Node>,
    pub default: Option<Node>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportAlias {
    /// Dotted name as written (`os.path`, `Widget`, `*`).
    pub name: String,
    pub asname: Option<String>,
}

impl ImportAlias {
    /// The name this alias binds in the importing scope.
    pub fn bound_name(&self) -> &str {
        match &self.asname {
            Some(alias) => alias,
            None => self.name.split('.').next().unwrap_or(&self.name),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassHeader {
    pub name: String,
    pub bases: Vec<Node>,
    pub keywords: Vec<Node>,
    pub decorators: Vec<Node>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionHeader {
    pub name: String,
    pub params: Vec<Param>,
    pub decorators: Vec<Node>,
    pub returns: Option<Box<Node>>,
    pub is_async: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    Module,
    /// Children are the class body.
    ClassDef(ClassHeader),
    /// Children are the function body.
    FunctionDef(FunctionHeader),
    /// Plain, annotated and augmented assignment. Children hold the value,
    /// if any.
    Assign {
        targets: Vec<Node>,
        augmented: bool,
        annotation: Option<Box<Node>>,
    },
    Global(Vec<String>),
    Nonlocal(Vec<String>),
    Import(Vec<ImportAlias>),
    ImportFrom {
        module: Option<String>,
        level: u32,
        names: Vec<ImportAlias>,
    },
    Return,
    Pass,
    ExprStmt,
    Name {
        id: String,
        ctx: NameCtx,
    },
    /// `children[0]` is the object expression.
    Attribute {
        attr: String,
        ctx: NameCtx,
    },
    /// `children[0]` is the callee, the rest are arguments.
    Call,
    Str,
    Ellipsis,
    Other(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
    pub span: LineSpan,
    pub children: Vec<Node>,
}

impl Node {
    pub fn new(kind: NodeKind, span: LineSpan, children: Vec<Node>) -> Self {
        Self {
            kind,
            span,
            children,
        }
    }

    pub fn leaf(kind: NodeKind, span: LineSpan) -> Self {
        Self::new(kind, span, Vec::new())
    }

    pub fn as_class(&self) -> Option<&ClassHeader> {
        match &self.kind {
            NodeKind::ClassDef(header) => Some(header),
            _ => None,
        }
    }

    pub fn as_function(&self) -> Option<&FunctionHeader> {
        match &self.kind {
            NodeKind::FunctionDef(header) => Some(header),
            _ => None,
        }
    }

    pub fn name_id(&self) -> Option<&str> {
        match &self.kind {
            NodeKind::Name { id, .. } => Some(id),
            _ => None,
        }
    }

    pub fn is_str(&self) -> bool {
        matches!(self.kind, NodeKind::Str)
    }

    /// True for an expression statement holding only a string literal.
    pub fn is_docstring_stmt(&self) -> bool {
        matches!(self.kind, NodeKind::ExprStmt) && self.children.len() == 1 && self.children[0].is_str()
    }

    /// Body statements of a class or function; empty for other nodes.
    pub fn body(&self) -> &[Node] {
        match self.kind {
            NodeKind::Module | NodeKind::ClassDef(_) | NodeKind::FunctionDef(_) => &self.children,
            _ => &[],
        }
    }

    /// Pre-order traversal over this node and its children. Header parts of
    /// definitions (bases, decorators, parameters) are not visited.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Node)) {
        visit(self);
        for child in &self.children {
            child.walk(visit);
        }
    }

    /// Renders a dotted name (`a.b.c`) when the expression is a pure
    /// attribute chain over a name.
    pub fn dotted_name(&self) -> Option<String> {
        match &self.kind {
            NodeKind::Name { id, .. } => Some(id.clone()),
            NodeKind::Attribute { attr, .. } => {
                let base = self.children.first()?.dotted_name()?;
                Some(format!("{base}.{attr}"))
            }
            _ => None,
        }
    }

    /// Short textual rendering of a base-class or decorator expression.
    pub fn expr_text(&self) -> String {
        match &self.kind {
            NodeKind::Call => match self.children.first() {
                Some(callee) => format!("{}(...)", callee.expr_text()),
                None => "<call>".to_string(),
            },
            _ => self
                .dotted_name()
                .unwrap_or_else(|| format!("<{}>", self.kind_name())),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            NodeKind::Module => "module",
            NodeKind::ClassDef(_) => "class",
            NodeKind::FunctionDef(_) => "def",
            NodeKind::Assign { .. } => "assign",
            NodeKind::Global(_) => "global",
            NodeKind::Nonlocal(_) => "nonlocal",
            NodeKind::Import(_) => "import",
            NodeKind::ImportFrom { .. } => "import-from",
            NodeKind::Return => "return",
            NodeKind::Pass => "pass",
            NodeKind::ExprStmt => "expr",
            NodeKind::Name { .. } => "name",
            NodeKind::Attribute { .. } => "attribute",
            NodeKind::Call => "call",
            NodeKind::Str => "str",
            NodeKind::Ellipsis => "ellipsis",
            NodeKind::Other(kind) => kind,
        }
    }

    /// Number of nodes in this subtree, header parts included.
    pub fn size(&self) -> usize {
        let header = match &self.kind {
            NodeKind::ClassDef(h) => h
                .bases
                .iter()
                .chain(&h.keywords)
                .chain(&h.decorators)
                .map(Node::size)
                .sum(),
            NodeKind::FunctionDef(h) => {
                h.decorators.iter().map(Node::size).sum::<usize>()
                    + h.returns.as_ref().map_or(0, |r| r.size())
                    + h.params
                        .iter()
                        .map(|p| {
                            1 + p.annotation.as_ref().map_or(0, Node::size)
                                + p.default.as_ref().map_or(0, Node::size)
                        })
                        .sum::<usize>()
            }
            NodeKind::Assign {
                targets, annotation, ..
            } => targets.iter().map(Node::size).sum::<usize>() + annotation.as_ref().map_or(0, |a| a.size()),
            _ => 0,
        };
        1 + header + self.children.iter().map(Node::size).sum::<usize>()
    }
}
