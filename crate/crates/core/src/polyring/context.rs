use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Role of a variable inside a [`VarContext`]. Blocks always appear in this
/// order: program variables, then template coefficients, then the guard flag,
/// then auxiliary variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarBlock {
    Program,
    Coefficient,
    Guard,
    Aux,
}

/// An ordered, duplicate-free list of variable names partitioned into blocks.
#[derive(Clone, PartialEq, Eq)]
pub struct VarContext {
    names: Vec<String>,
    blocks: Vec<VarBlock>,
    index: HashMap<String, usize>,
}

impl fmt::Debug for VarContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names.iter()).finish()
    }
}

impl VarContext {
    /// A context in which every variable is a program variable.
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>> {
        Self::from_blocks(names.iter().map(|n| (n.as_ref().to_string(), VarBlock::Program)))
    }

    pub fn from_blocks(vars: impl IntoIterator<Item = (String, VarBlock)>) -> Result<Arc<Self>> {
        let mut names = Vec::new();
        let mut blocks: Vec<VarBlock> = Vec::new();
        let mut index = HashMap::new();
        for (name, block) in vars {
            if let Some(&last) = blocks.last() {
                if block < last {
                    return Err(Error::InvalidTemplate(format!(
                        "variable `{name}` of block {block:?} follows block {last:?}"
                    )));
                }
            }
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(Error::DuplicateVariable(name));
            }
            names.push(name);
            blocks.push(block);
        }
        Ok(Arc::new(VarContext {
            names,
            blocks,
            index,
        }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn block(&self, i: usize) -> VarBlock {
        self.blocks[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Indices of the variables belonging to `block`.
    pub fn block_indices(&self, block: VarBlock) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.blocks[i] == block).collect()
    }

    /// Returns a copy of this context with `name` appended in `block`, or
    /// `self` unchanged when the name is already present.
    pub fn with_var(self: &Arc<Self>, name: &str, block: VarBlock) -> Result<Arc<Self>> {
        if self.index_of(name).is_some() {
            return Ok(self.clone());
        }
        Self::from_blocks(
            self.names
                .iter()
                .cloned()
                .zip(self.blocks.iter().copied())
                .chain(std::iter::once((name.to_string(), block))),
        )
    }

    /// A name not yet used in this context, derived from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut candidate = base.to_string();
        while self.index_of(&candidate).is_some() {
            candidate.insert(0, '_');
        }
        candidate
    }

    /// Maps each variable of `self` to its index in `target`.
    pub fn embedding_into(&self, target: &VarContext) -> Result<Vec<usize>> {
        self.names
            .iter()
            .map(|n| {
                target
                    .index_of(n)
                    .ok_or_else(|| Error::NotEmbeddable(n.clone()))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates() {
        assert_eq!(
            VarContext::new(&["x", "x"]).unwrap_err(),
            Error::DuplicateVariable("x".into())
        );
    }

    #[test]
    fn blocks_must_be_ordered() {
        let r = VarContext::from_blocks([
            ("z".to_string(), VarBlock::Guard),
            ("x".to_string(), VarBlock::Program),
        ]);
        assert!(r.is_err());
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let ctx = VarContext::new(&["t", "_t"]).unwrap();
        assert_eq!(ctx.fresh_name("t"), "__t");
        assert_eq!(ctx.fresh_name("u"), "u");
    }
}
