//! Name-based predicates: controller and procedural words, accessors.

use serde::{Deserialize, Serialize};

use crate::model::SubroutineEntity;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NameLexicon {
    pub controller_words: Vec<String>,
    pub procedural_words: Vec<String>,
}

fn words(list: &[&str]) -> Vec<String> {
    list.iter().map(|w| w.to_string()).collect()
}

impl Default for NameLexicon {
    fn default() -> Self {
        Self {
            controller_words: words(&[
                "manage",
                "manager",
                "process",
                "processor",
                "control",
                "controller",
                "drive",
                "driver",
                "handle",
                "handler",
            ]),
            procedural_words: words(&[
                "make",
                "create",
                "exec",
                "execute",
                "compute",
                "calculate",
                "build",
                "init",
                "run",
                "do",
            ]),
        }
    }
}

impl NameLexicon {
    /// Lowercases every word and rejects empty lists or words.
    pub fn normalized(mut self) -> Result<Self, String> {
        for (label, list) in [
            ("controller_words", &mut self.controller_words),
            ("procedural_words", &mut self.procedural_words),
        ] {
            if list.is_empty() || list.iter().any(|w| w.trim().is_empty()) {
                return Err(format!("lexicon `{label}` must be a non-empty list of words"));
            }
            for word in list.iter_mut() {
                *word = word.trim().to_lowercase();
            }
        }
        Ok(self)
    }

    pub fn is_controller_name(&self, name: &str) -> bool {
        contains_any(name, &self.controller_words)
    }

    pub fn is_procedural_name(&self, name: &str) -> bool {
        contains_any(name, &self.procedural_words)
    }
}

fn contains_any(name: &str, words: &[String]) -> bool {
    let lower = name.to_lowercase();
    words.iter().any(|w| lower.contains(w.as_str()))
}

fn accessor_name(name: &str) -> bool {
    ["get", "set"].iter().any(|prefix| {
        name.strip_prefix(prefix).is_some_and(|rest| {
            rest.starts_with('_') && rest.len() > 1
                || rest.chars().next().is_some_and(char::is_uppercase)
        })
    })
}

/// A method whose main purpose is reading or writing one field: by name
/// (`get_x`, `setX`), by property decorators, or by a body that only
/// returns or assigns a single receiver field.
pub fn is_accessor(sub: &SubroutineEntity) -> bool {
    accessor_name(&sub.name)
        || ["property", "cached_property", "setter", "getter"]
            .iter()
            .any(|d| sub.has_decorator(d))
        || sub.accessor_shape.is_some()
}
