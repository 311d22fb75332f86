//! Lowering of the parser's full AST into the reduced [`Node`] tree.

use rustpython_parser::ast::{self, Constant, Ranged};

use super::lines::LineIndex;
use super::tree::{
    ClassHeader, FunctionHeader, ImportAlias, LineSpan, NameCtx, Node, NodeKind, Param, ParamKind,
};

pub(crate) struct Lowerer<'a> {
    index: &'a LineIndex,
}

impl<'a> Lowerer<'a> {
    pub fn new(index: &'a LineIndex) -> Self {
        Self { index }
    }

    fn span_of<T: Ranged>(&self, node: &T) -> LineSpan {
        let range = node.range();
        self.index
            .span(range.start().to_usize(), range.end().to_usize())
    }

    pub fn module(&self, suite: &[ast::Stmt], physical_lines: usize) -> Node {
        let span = LineSpan::new(1, (physical_lines as u32).max(1));
        Node::new(NodeKind::Module, span, self.stmts(suite))
    }

    fn stmts(&self, stmts: &[ast::Stmt]) -> Vec<Node> {
        stmts.iter().map(|s| self.stmt(s)).collect()
    }

    fn exprs(&self, exprs: &[ast::Expr]) -> Vec<Node> {
        exprs.iter().map(|e| self.expr(e)).collect()
    }

    fn opt_expr(&self, expr: &Option<Box<ast::Expr>>) -> Option<Node> {
        expr.as_deref().map(|e| self.expr(e))
    }

    fn other(&self, kind: &'static str, span: LineSpan, children: Vec<Node>) -> Node {
        Node::new(NodeKind::Other(kind), span, children)
    }

    fn binding(&self, name: &str, span: LineSpan) -> Node {
        Node::leaf(
            NodeKind::Name {
                id: name.to_string(),
                ctx: NameCtx::Store,
            },
            span,
        )
    }

    fn stmt(&self, stmt: &ast::Stmt) -> Node {
        use ast::Stmt;
        let span = self.span_of(stmt);
        match stmt {
            Stmt::FunctionDef(def) => self.function(
                &def.name,
                &def.args,
                &def.body,
                &def.decorator_list,
                &def.returns,
                false,
                span,
            ),
            Stmt::AsyncFunctionDef(def) => self.function(
                &def.name,
                &def.args,
                &def.body,
                &def.decorator_list,
                &def.returns,
                true,
                span,
            ),
            Stmt::ClassDef(def) => {
                let header = ClassHeader {
                    name: def.name.to_string(),
                    bases: self.exprs(&def.bases),
                    keywords: def.keywords.iter().map(|k| self.expr(&k.value)).collect(),
                    decorators: self.exprs(&def.decorator_list),
                };
                Node::new(NodeKind::ClassDef(header), span, self.stmts(&def.body))
            }
            Stmt::Return(ret) => Node::new(
                NodeKind::Return,
                span,
                self.opt_expr(&ret.value).into_iter().collect(),
            ),
            Stmt::Delete(del) => self.other("del", span, self.exprs(&del.targets)),
            Stmt::Assign(assign) => Node::new(
                NodeKind::Assign {
                    targets: self.exprs(&assign.targets),
                    augmented: false,
                    annotation: None,
                },
                span,
                vec![self.expr(&assign.value)],
            ),
            Stmt::TypeAlias(alias) => self.other(
                "type-alias",
                span,
                vec![self.expr(&alias.name), self.expr(&alias.value)],
            ),
            Stmt::AugAssign(assign) => Node::new(
                NodeKind::Assign {
                    targets: vec![self.expr(&assign.target)],
                    augmented: true,
                    annotation: None,
                },
                span,
                vec![self.expr(&assign.value)],
            ),
            Stmt::AnnAssign(assign) => Node::new(
                NodeKind::Assign {
                    targets: vec![self.expr(&assign.target)],
                    augmented: false,
                    annotation: Some(Box::new(self.expr(&assign.annotation))),
                },
                span,
                self.opt_expr(&assign.value).into_iter().collect(),
            ),
            Stmt::For(stmt) => self.for_loop(&stmt.target, &stmt.iter, &stmt.body, &stmt.orelse, span),
            Stmt::AsyncFor(stmt) => {
                self.for_loop(&stmt.target, &stmt.iter, &stmt.body, &stmt.orelse, span)
            }
            Stmt::While(stmt) => {
                let mut children = vec![self.expr(&stmt.test)];
                children.extend(self.stmts(&stmt.body));
                children.extend(self.stmts(&stmt.orelse));
                self.other("while", span, children)
            }
            Stmt::If(stmt) => {
                let mut children = vec![self.expr(&stmt.test)];
                children.extend(self.stmts(&stmt.body));
                children.extend(self.stmts(&stmt.orelse));
                self.other("if", span, children)
            }
            Stmt::With(stmt) => self.with(&stmt.items, &stmt.body, span),
            Stmt::AsyncWith(stmt) => self.with(&stmt.items, &stmt.body, span),
            Stmt::Match(stmt) => {
                let mut children = vec![self.expr(&stmt.subject)];
                for case in &stmt.cases {
                    self.pattern(&case.pattern, span, &mut children);
                    children.extend(self.opt_expr(&case.guard));
                    children.extend(self.stmts(&case.body));
                }
                self.other("match", span, children)
            }
            Stmt::Raise(stmt) => {
                let children = self
                    .opt_expr(&stmt.exc)
                    .into_iter()
                    .chain(self.opt_expr(&stmt.cause))
                    .collect();
                self.other("raise", span, children)
            }
            Stmt::Try(stmt) => self.try_stmt(
                &stmt.body,
                &stmt.handlers,
                &stmt.orelse,
                &stmt.finalbody,
                span,
            ),
            Stmt::TryStar(stmt) => self.try_stmt(
                &stmt.body,
                &stmt.handlers,
                &stmt.orelse,
                &stmt.finalbody,
                span,
            ),
            Stmt::Assert(stmt) => {
                let mut children = vec![self.expr(&stmt.test)];
                children.extend(self.opt_expr(&stmt.msg));
                self.other("assert", span, children)
            }
            Stmt::Import(stmt) => Node::leaf(NodeKind::Import(aliases(&stmt.names)), span),
            Stmt::ImportFrom(stmt) => Node::leaf(
                NodeKind::ImportFrom {
                    module: stmt.module.as_ref().map(|m| m.to_string()),
                    level: stmt.level.map_or(0, |l| l.to_u32()),
                    names: aliases(&stmt.names),
                },
                span,
            ),
            Stmt::Global(stmt) => Node::leaf(
                NodeKind::Global(stmt.names.iter().map(|n| n.to_string()).collect()),
                span,
            ),
            Stmt::Nonlocal(stmt) => Node::leaf(
                NodeKind::Nonlocal(stmt.names.iter().map(|n| n.to_string()).collect()),
                span,
            ),
            Stmt::Expr(stmt) => Node::new(NodeKind::ExprStmt, span, vec![self.expr(&stmt.value)]),
            Stmt::Pass(_) => Node::leaf(NodeKind::Pass, span),
            Stmt::Break(_) => Node::leaf(NodeKind::Other("break"), span),
            Stmt::Continue(_) => Node::leaf(NodeKind::Other("continue"), span),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn function(
        &self,
        name: &ast::Identifier,
        args: &ast::Arguments,
        body: &[ast::Stmt],
        decorators: &[ast::Expr],
        returns: &Option<Box<ast::Expr>>,
        is_async: bool,
        span: LineSpan,
    ) -> Node {
        let header = FunctionHeader {
            name: name.to_string(),
            params: self.params(args),
            decorators: self.exprs(decorators),
            returns: self.opt_expr(returns).map(Box::new),
            is_async,
        };
        // The definition starts at its `def` line; decorators sit above it.
        let first_body = body.first().map(|s| self.span_of(s).start).unwrap_or(span.start);
        let def_line = header
            .decorators
            .iter()
            .map(|d| d.span.end + 1)
            .max()
            .unwrap_or(span.start)
            .clamp(span.start, first_body.max(span.start));
        Node::new(
            NodeKind::FunctionDef(header),
            LineSpan::new(def_line, span.end.max(def_line)),
            self.stmts(body),
        )
    }

    fn params(&self, args: &ast::Arguments) -> Vec<Param> {
        let with_default = |arg: &ast::ArgWithDefault, kind| Param {
            name: arg.def.arg.to_string(),
            kind,
            annotation: self.opt_expr(&arg.def.annotation),
            default: self.opt_expr(&arg.default),
        };
        let plain = |arg: &ast::Arg, kind| Param {
            name: arg.arg.to_string(),
            kind,
            annotation: self.opt_expr(&arg.annotation),
            default: None,
        };
        let mut params: Vec<Param> = args
            .posonlyargs
            .iter()
            .map(|a| with_default(a, ParamKind::PositionalOnly))
            .chain(args.args.iter().map(|a| with_default(a, ParamKind::Positional)))
            .collect();
        params.extend(args.vararg.as_deref().map(|a| plain(a, ParamKind::VarArgs)));
        params.extend(
            args.kwonlyargs
                .iter()
                .map(|a| with_default(a, ParamKind::KeywordOnly)),
        );
        params.extend(args.kwarg.as_deref().map(|a| plain(a, ParamKind::VarKeywords)));
        params
    }

    fn for_loop(
        &self,
        target: &ast::Expr,
        iter: &ast::Expr,
        body: &[ast::Stmt],
        orelse: &[ast::Stmt],
        span: LineSpan,
    ) -> Node {
        let mut children = vec![self.expr(target), self.expr(iter)];
        children.extend(self.stmts(body));
        children.extend(self.stmts(orelse));
        self.other("for", span, children)
    }

    fn with(&self, items: &[ast::WithItem], body: &[ast::Stmt], span: LineSpan) -> Node {
        let mut children = Vec::new();
        for item in items {
            children.push(self.expr(&item.context_expr));
            children.extend(self.opt_expr(&item.optional_vars));
        }
        children.extend(self.stmts(body));
        self.other("with", span, children)
    }

    fn try_stmt(
        &self,
        body: &[ast::Stmt],
        handlers: &[ast::ExceptHandler],
        orelse: &[ast::Stmt],
        finalbody: &[ast::Stmt],
        span: LineSpan,
    ) -> Node {
        let mut children = self.stmts(body);
        for ast::ExceptHandler::ExceptHandler(handler) in handlers {
            let handler_span = self.span_of(handler);
            let mut inner = Vec::new();
            inner.extend(self.opt_expr(&handler.type_));
            if let Some(name) = &handler.name {
                inner.push(self.binding(name.as_str(), LineSpan::line(handler_span.start)));
            }
            inner.extend(self.stmts(&handler.body));
            children.push(self.other("except", handler_span, inner));
        }
        children.extend(self.stmts(orelse));
        children.extend(self.stmts(finalbody));
        self.other("try", span, children)
    }

    fn pattern(&self, pattern: &ast::Pattern, span: LineSpan, out: &mut Vec<Node>) {
        use ast::Pattern;
        match pattern {
            Pattern::MatchValue(p) => out.push(self.expr(&p.value)),
            Pattern::MatchSingleton(_) => {}
            Pattern::MatchSequence(p) => {
                for inner in &p.patterns {
                    self.pattern(inner, span, out);
                }
            }
            Pattern::MatchMapping(p) => {
                out.extend(self.exprs(&p.keys));
                for inner in &p.patterns {
                    self.pattern(inner, span, out);
                }
                if let Some(rest) = &p.rest {
                    out.push(self.binding(rest.as_str(), self.span_of(p)));
                }
            }
            Pattern::MatchClass(p) => {
                out.push(self.expr(&p.cls));
                for inner in p.patterns.iter().chain(&p.kwd_patterns) {
                    self.pattern(inner, span, out);
                }
            }
            Pattern::MatchStar(p) => {
                if let Some(name) = &p.name {
                    out.push(self.binding(name.as_str(), self.span_of(p)));
                }
            }
            Pattern::MatchAs(p) => {
                if let Some(inner) = &p.pattern {
                    self.pattern(inner, span, out);
                }
                if let Some(name) = &p.name {
                    out.push(self.binding(name.as_str(), self.span_of(p)));
                }
            }
            Pattern::MatchOr(p) => {
                for inner in &p.patterns {
                    self.pattern(inner, span, out);
                }
            }
        }
    }

    fn comprehension(&self, generators: &[ast::Comprehension], out: &mut Vec<Node>) {
        for generator in generators {
            out.push(self.expr(&generator.target));
            out.push(self.expr(&generator.iter));
            out.extend(self.exprs(&generator.ifs));
        }
    }

    fn expr(&self, expr: &ast::Expr) -> Node {
        use ast::Expr;
        let span = self.span_of(expr);
        match expr {
            Expr::Name(name) => Node::leaf(
                NodeKind::Name {
                    id: name.id.to_string(),
                    ctx: ctx(&name.ctx),
                },
                span,
            ),
            Expr::Attribute(attr) => Node::new(
                NodeKind::Attribute {
                    attr: attr.attr.to_string(),
                    ctx: ctx(&attr.ctx),
                },
                span,
                vec![self.expr(&attr.value)],
            ),
            Expr::Call(call) => {
                let mut children = vec![self.expr(&call.func)];
                children.extend(self.exprs(&call.args));
                children.extend(call.keywords.iter().map(|k| self.expr(&k.value)));
                Node::new(NodeKind::Call, span, children)
            }
            Expr::Constant(constant) => match constant.value {
                Constant::Str(_) => Node::leaf(NodeKind::Str, span),
                Constant::Ellipsis => Node::leaf(NodeKind::Ellipsis, span),
                _ => Node::leaf(NodeKind::Other("constant"), span),
            },
            Expr::JoinedStr(joined) => self.other("fstring", span, self.exprs(&joined.values)),
            Expr::FormattedValue(value) => {
                let mut children = vec![self.expr(&value.value)];
                children.extend(self.opt_expr(&value.format_spec));
                self.other("formatted", span, children)
            }
            Expr::BoolOp(op) => self.other("boolop", span, self.exprs(&op.values)),
            Expr::NamedExpr(named) => self.other(
                "walrus",
                span,
                vec![self.expr(&named.target), self.expr(&named.value)],
            ),
            Expr::BinOp(op) => {
                self.other("binop", span, vec![self.expr(&op.left), self.expr(&op.right)])
            }
            Expr::UnaryOp(op) => self.other("unaryop", span, vec![self.expr(&op.operand)]),
            Expr::Lambda(lambda) => {
                // Lambda parameters are lowered as plain bindings.
                let mut children: Vec<Node> = self
                    .params(&lambda.args)
                    .into_iter()
                    .flat_map(|p| {
                        let binding = self.binding(&p.name, span);
                        p.default.into_iter().chain(std::iter::once(binding))
                    })
                    .collect();
                children.push(self.expr(&lambda.body));
                self.other("lambda", span, children)
            }
            Expr::IfExp(ifexp) => self.other(
                "ifexp",
                span,
                vec![
                    self.expr(&ifexp.test),
                    self.expr(&ifexp.body),
                    self.expr(&ifexp.orelse),
                ],
            ),
            Expr::Dict(dict) => {
                let mut children: Vec<Node> = dict.keys.iter().flatten().map(|k| self.expr(k)).collect();
                children.extend(self.exprs(&dict.values));
                self.other("dict", span, children)
            }
            Expr::Set(set) => self.other("set", span, self.exprs(&set.elts)),
            Expr::ListComp(comp) => {
                let mut children = Vec::new();
                self.comprehension(&comp.generators, &mut children);
                children.push(self.expr(&comp.elt));
                self.other("listcomp", span, children)
            }
            Expr::SetComp(comp) => {
                let mut children = Vec::new();
                self.comprehension(&comp.generators, &mut children);
                children.push(self.expr(&comp.elt));
                self.other("setcomp", span, children)
            }
            Expr::DictComp(comp) => {
                let mut children = Vec::new();
                self.comprehension(&comp.generators, &mut children);
                children.push(self.expr(&comp.key));
                children.push(self.expr(&comp.value));
                self.other("dictcomp", span, children)
            }
            Expr::GeneratorExp(comp) => {
                let mut children = Vec::new();
                self.comprehension(&comp.generators, &mut children);
                children.push(self.expr(&comp.elt));
                self.other("genexp", span, children)
            }
            Expr::Await(value) => self.other("await", span, vec![self.expr(&value.value)]),
            Expr::Yield(value) => self.other("yield", span, self.opt_expr(&value.value).into_iter().collect()),
            Expr::YieldFrom(value) => self.other("yield-from", span, vec![self.expr(&value.value)]),
            Expr::Compare(cmp) => {
                let mut children = vec![self.expr(&cmp.left)];
                children.extend(self.exprs(&cmp.comparators));
                self.other("compare", span, children)
            }
            Expr::Subscript(sub) => {
                self.other("subscript", span, vec![self.expr(&sub.value), self.expr(&sub.slice)])
            }
            Expr::Starred(starred) => self.other("starred", span, vec![self.expr(&starred.value)]),
            Expr::List(list) => self.other("list", span, self.exprs(&list.elts)),
            Expr::Tuple(tuple) => self.other("tuple", span, self.exprs(&tuple.elts)),
            Expr::Slice(slice) => {
                let children = [&slice.lower, &slice.upper, &slice.step]
                    .into_iter()
                    .filter_map(|part| self.opt_expr(part))
                    .collect();
                self.other("slice", span, children)
            }
        }
    }
}

fn ctx(ctx: &ast::ExprContext) -> NameCtx {
    match ctx {
        ast::ExprContext::Load => NameCtx::Load,
        ast::ExprContext::Store => NameCtx::Store,
        ast::ExprContext::Del => NameCtx::Del,
    }
}

fn aliases(names: &[ast::Alias]) -> Vec<ImportAlias> {
    names
        .iter()
        .map(|alias| ImportAlias {
            name: alias.name.to_string(),
            asname: alias.asname.as_ref().map(|a| a.to_string()),
        })
        .collect()
}
