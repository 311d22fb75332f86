//! Shared helpers for integration tests: a seeded generator of plausible
//! Python projects and fixture locations.

#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

const NOUNS: &[&str] = &[
    "Account", "Basket", "Cursor", "Engine", "Filter", "Graph", "Index", "Journal", "Kernel",
    "Ledger", "Matrix", "Node", "Packet", "Queue", "Record", "Sensor", "Table", "Vector",
    "Widget", "Buffer", "Channel", "Parser", "Schema", "Token", "Frame", "Layer", "Route",
];

const VERBS: &[&str] = &[
    "load", "save", "merge", "split", "scale", "render", "encode", "decode", "check", "sort",
    "flush", "apply", "reset", "update", "collect", "emit", "parse", "format", "refresh",
];

const FIELDS: &[&str] = &[
    "name", "size", "count", "items", "parent", "limit", "offset", "state", "label", "weight",
    "total", "cache", "owner", "path", "value",
];

fn line(out: &mut String, indent: usize, text: &str) {
    let _ = writeln!(out, "{}{}", "    ".repeat(indent), text);
}

/// Generates one syntactically valid module. `others` are `(module, class)`
/// pairs defined elsewhere that this module may import and annotate with.
pub struct ModuleGen<'a> {
    rng: ChaCha8Rng,
    out: String,
    others: &'a [(String, String)],
    classes: Vec<(String, Vec<String>)>,
    imported: Vec<String>,
}

impl<'a> ModuleGen<'a> {
    pub fn new(seed: u64, others: &'a [(String, String)]) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            out: String::new(),
            others,
            classes: Vec::new(),
            imported: Vec::new(),
        }
    }

    fn pick<'s>(&mut self, items: &'s [&'s str]) -> &'s str {
        items.choose(&mut self.rng).expect("non-empty")
    }

    /// A statement block of roughly `lines` lines touching `fields` on the
    /// receiver (if any) and the given local names.
    fn block(&mut self, indent: usize, lines: usize, receiver: Option<&[String]>, locals: &[String]) {
        let mut written = 0;
        let _ = writeln!(self.out, "{}acc = 0", "    ".repeat(indent));
        written += 1;
        while written < lines {
            let choice = self.rng.gen_range(0..9);
            let local = locals.choose(&mut self.rng).cloned().unwrap_or_else(|| "acc".into());
            let field = receiver
                .and_then(|f| f.choose(&mut self.rng).cloned())
                .map(|f| format!("self.{f}"));
            match choice {
                0 => {
                    let target = field.clone().unwrap_or_else(|| "acc".into());
                    line(&mut self.out, indent, &format!("if {local} is not None and acc < {}:", self.rng.gen_range(1..100)));
                    line(&mut self.out, indent + 1, &format!("acc += len(str({target}))"));
                    written += 2;
                }
                1 => {
                    line(&mut self.out, indent, &format!("for i, item in enumerate(range({})):", self.rng.gen_range(2..20)));
                    line(&mut self.out, indent + 1, "acc += i * item");
                    written += 2;
                }
                2 => {
                    line(&mut self.out, indent, "try:");
                    line(&mut self.out, indent + 1, &format!("acc = acc // max(1, int({local} or 1))"));
                    line(&mut self.out, indent, "except (TypeError, ValueError) as exc:");
                    line(&mut self.out, indent + 1, "acc = -1 if exc else acc");
                    written += 4;
                }
                3 => {
                    line(&mut self.out, indent, &format!("values = [x * 2 for x in range({}) if x % 3]", self.rng.gen_range(3..30)));
                    written += 1;
                }
                4 => {
                    if let Some(f) = &field {
                        line(&mut self.out, indent, &format!("{f} = acc"));
                    } else {
                        line(&mut self.out, indent, "acc = acc + 1");
                    }
                    written += 1;
                }
                5 => {
                    line(&mut self.out, indent, &format!("label = f\"{{acc}}-{{{local}!r}}\""));
                    written += 1;
                }
                6 => {
                    line(&mut self.out, indent, "while acc > 1000:");
                    line(&mut self.out, indent + 1, "acc //= 2");
                    written += 2;
                }
                7 => {
                    line(&mut self.out, indent, "with open(__file__) as handle_:");
                    line(&mut self.out, indent + 1, "acc += len(handle_.readline())");
                    written += 2;
                }
                _ if locals.iter().any(|l| l == "other") => {
                    let field = self.pick(FIELDS);
                    line(&mut self.out, indent, &format!("acc += len(str(other.{field}))"));
                    written += 1;
                }
                _ => {
                    line(&mut self.out, indent, &format!("key = lambda pair: pair[{}]", self.rng.gen_range(0..2)));
                    written += 1;
                }
            }
        }
        line(&mut self.out, indent, "return acc");
    }

    fn params(&mut self, max: usize) -> Vec<String> {
        let n = self.rng.gen_range(0..=max);
        (0..n).map(|i| format!("{}_{i}", self.pick(FIELDS))).collect()
    }

    fn class(&mut self, name: &str) {
        let local: Vec<String> = self.classes.iter().map(|(c, _)| c.clone()).collect();
        let base = if !local.is_empty() && self.rng.gen_bool(0.3) {
            local.choose(&mut self.rng).cloned()
        } else {
            None
        };
        match &base {
            Some(b) => line(&mut self.out, 0, &format!("class {name}({b}):")),
            None => line(&mut self.out, 0, &format!("class {name}:")),
        }
        line(&mut self.out, 1, &format!("\"\"\"{name} model.\"\"\""));
        if self.rng.gen_bool(0.3) {
            line(&mut self.out, 1, &format!("kind = \"{}\"", name.to_lowercase()));
        }
        self.out.push('\n');
        let count = self.rng.gen_range(1..6);
        let mut fields: Vec<String> = FIELDS
            .choose_multiple(&mut self.rng, count)
            .map(|f| f.to_string())
            .collect();
        if self.rng.gen_bool(0.3) {
            fields.push(format!("_{}", self.pick(FIELDS)));
        }
        let init_params = self.params(3);
        let sig: String = init_params.iter().map(|p| format!(", {p}")).collect();
        line(&mut self.out, 1, &format!("def __init__(self{sig}):"));
        for (i, f) in fields.iter().enumerate() {
            let value = init_params.get(i).cloned().unwrap_or_else(|| "None".into());
            line(&mut self.out, 2, &format!("self.{f} = {value}"));
        }
        let methods = self.rng.gen_range(1..7);
        for m in 0..methods {
            self.out.push('\n');
            if self.rng.gen_bool(0.15) {
                line(&mut self.out, 1, "@property");
                let f = fields.choose(&mut self.rng).cloned().expect("field");
                line(&mut self.out, 1, &format!("def {}_view_{m}(self):", f.trim_start_matches('_')));
                line(&mut self.out, 2, &format!("return self.{f}"));
                continue;
            }
            let mut params = self.params(3);
            if !self.imported.is_empty() && self.rng.gen_bool(0.3) {
                let cls = self.imported.choose(&mut self.rng).cloned().expect("imported");
                params.push(format!("other: {cls}"));
            }
            let sig: String = params.iter().map(|p| format!(", {}", p)).collect();
            let verb = self.pick(VERBS);
            line(&mut self.out, 1, &format!("def {verb}_{m}(self{sig}):"));
            let names: Vec<String> = params.iter().map(|p| p.split(':').next().unwrap().to_string()).collect();
            let lines = self.rng.gen_range(2..14);
            self.block(2, lines, Some(&fields), &names);
        }
        self.out.push('\n');
        self.out.push('\n');
        self.classes.push((name.to_string(), fields));
    }

    fn function(&mut self, index: usize) {
        let params = self.params(4);
        let verb = self.pick(VERBS);
        if self.rng.gen_bool(0.1) {
            line(&mut self.out, 0, "@staticmethod_like");
        }
        let async_ = if self.rng.gen_bool(0.1) { "async " } else { "" };
        line(&mut self.out, 0, &format!("{async_}def {verb}_{index}({}):", params.join(", ")));
        if self.rng.gen_bool(0.2) {
            line(&mut self.out, 1, "global COUNTER");
            line(&mut self.out, 1, "COUNTER += 1");
        }
        if self.rng.gen_bool(0.2) {
            line(&mut self.out, 1, "def inner(x):");
            line(&mut self.out, 2, "return x + 1");
        }
        let lines = self.rng.gen_range(2..20);
        self.block(1, lines, None, &params);
        self.out.push_str("\n\n");
    }

    /// Renders a module with roughly `classes` classes and `functions`
    /// functions.
    pub fn module(mut self, classes: &[String], functions: usize) -> String {
        line(&mut self.out, 0, "\"\"\"Generated module.\"\"\"");
        line(&mut self.out, 0, "import os");
        let imports: Vec<(String, String)> = self
            .others
            .choose_multiple(&mut self.rng, 3)
            .cloned()
            .collect();
        for (module, cls) in &imports {
            line(&mut self.out, 0, &format!("from {module} import {cls}"));
        }
        self.imported = imports.into_iter().map(|(_, cls)| cls).collect();
        self.out.push('\n');
        line(&mut self.out, 0, "COUNTER = 0");
        line(&mut self.out, 0, "def staticmethod_like(f):");
        line(&mut self.out, 1, "return f");
        self.out.push_str("\n\n");
        for name in classes {
            self.class(name);
        }
        for i in 0..functions {
            self.function(i);
        }
        if self.rng.gen_bool(0.3) {
            line(&mut self.out, 0, "if __name__ == \"__main__\":");
            line(&mut self.out, 1, "print(os.getcwd())");
        }
        self.out
    }
}

pub struct GeneratedProject {
    pub files: Vec<(String, String)>,
}

impl GeneratedProject {
    /// A package of `modules` modules under `pkg/`, plus a `tests/` module
    /// when `with_tests` is set.
    pub fn new(seed: u64, modules: usize, with_tests: bool) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut plan: Vec<(String, Vec<String>)> = Vec::new();
        for m in 0..modules {
            let count = rng.gen_range(1..5);
            let classes = (0..count)
                .map(|c| format!("{}{m}x{c}", NOUNS[rng.gen_range(0..NOUNS.len())]))
                .collect();
            plan.push((format!("pkg.mod{m}"), classes));
        }
        let catalogue: Vec<(String, String)> = plan
            .iter()
            .flat_map(|(module, classes)| classes.iter().map(move |c| (module.clone(), c.clone())))
            .collect();
        let mut files = vec![("pkg/__init__.py".to_string(), "\"\"\"Generated package.\"\"\"\n".to_string())];
        for (m, (module, classes)) in plan.iter().enumerate() {
            let others: Vec<(String, String)> = catalogue
                .iter()
                .filter(|(owner, _)| owner != module)
                .take(40)
                .cloned()
                .collect();
            let functions = rng.gen_range(1..5);
            let text = ModuleGen::new(seed ^ ((m as u64 + 1) << 20), &others).module(classes, functions);
            files.push((format!("pkg/mod{m}.py"), text));
        }
        if with_tests {
            let text = ModuleGen::new(seed ^ 0xfeed, &catalogue).module(&["TestSuiteCase".to_string()], 3);
            files.push(("tests/test_generated.py".to_string(), text));
        }
        Self { files }
    }

    pub fn loc_estimate(&self) -> usize {
        self.files
            .iter()
            .map(|(_, t)| t.lines().filter(|l| !l.trim().is_empty()).count())
            .sum()
    }

    pub fn write_to(&self, root: &Path) {
        for (path, text) in &self.files {
            let full = root.join(path);
            fs::create_dir_all(full.parent().expect("parent")).expect("create dir");
            fs::write(full, text).expect("write file");
        }
    }

    pub fn as_sources(&self) -> Vec<(&str, &str)> {
        self.files.iter().map(|(p, t)| (p.as_str(), t.as_str())).collect()
    }
}

/// Writes a generated project of at least `min_loc` non-blank lines.
pub fn generated_corpus(root: &Path, seed: u64, min_loc: usize) -> usize {
    let mut modules = 8;
    loop {
        let project = GeneratedProject::new(seed, modules, true);
        let loc = project.loc_estimate();
        if loc >= min_loc {
            project.write_to(root);
            return loc;
        }
        modules = modules * min_loc / loc.max(1) + 1;
    }
}

/// Brute-force filter oracles written straight from the definitions, with
/// every quantity doubled so halves stay integral.
pub mod oracle {
    /// Twice the median of a sorted slice.
    fn median2(sorted: &[u64]) -> i128 {
        let n = sorted.len();
        assert!(n > 0);
        if n % 2 == 1 {
            2 * i128::from(sorted[n / 2])
        } else {
            i128::from(sorted[n / 2 - 1]) + i128::from(sorted[n / 2])
        }
    }

    /// `(2·Q1, 2·median, 2·Q3)` by Tukey's hinges: the halves exclude the
    /// middle element when n is odd; a single value is its own hinge.
    pub fn quartiles2(values: &[u64]) -> (i128, i128, i128) {
        let mut sorted = values.to_vec();
        sorted.sort_unstable();
        let n = sorted.len();
        let m = median2(&sorted);
        if n == 1 {
            return (m, m, m);
        }
        let half = n / 2;
        (median2(&sorted[..half]), m, median2(&sorted[n - half..]))
    }

    /// v − median ≥ factor·IQR and v > median, with factor = num/den and
    /// doubled quartiles `q`.
    pub fn outlier_with(v: u64, q: (i128, i128, i128), num: i128, den: i128) -> bool {
        let (q1, m, q3) = q;
        let v2 = 2 * i128::from(v);
        v2 > m && den * (v2 - m) >= num * (q3 - q1)
    }

    pub fn mild(v: u64, values: &[u64]) -> bool {
        outlier_with(v, quartiles2(values), 3, 2)
    }

    pub fn extreme(v: u64, values: &[u64]) -> bool {
        outlier_with(v, quartiles2(values), 3, 1)
    }

    /// v is within the top `percent` when fewer than k = ⌈n·X/100⌉ values
    /// are strictly greater than it.
    pub fn top(v: u64, values: &[u64], percent: u64) -> bool {
        let n = values.len() as u64;
        let k = (n * percent).div_ceil(100).clamp(1, n);
        (values.iter().filter(|&&x| x > v).count() as u64) < k
    }
}
