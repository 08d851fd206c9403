use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense identifier of a binary variable. Never reused within a registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// Data registers: array bits, search target, index, count, sorted output.
    Input,
    /// Named result flags (I_i, V_i, C_i, span_i, M_ij, not_found, ...).
    Derived,
    /// Gadget internals and order-reduction variables.
    Ancilla,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarInfo {
    pub id: VarId,
    pub label: String,
    pub role: Role,
    pub group: String,
}

/// Owns every binary variable of one program.
#[derive(Debug, Clone, Default)]
pub struct VariableRegistry {
    entries: Vec<VarInfo>,
    by_label: HashMap<String, VarId>,
    suffix: HashMap<String, usize>,
}

impl VariableRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Allocates a variable under an exact label.
    pub fn fresh_var(&mut self, label: &str, role: Role, group: &str) -> Result<VarId> {
        if self.by_label.contains_key(label) {
            return Err(Error::DuplicateLabel(label.to_string()));
        }
        Ok(self.push(label.to_string(), role, group))
    }

    /// Allocates a variable whose label is `base`, or `base#k` for the first
    /// free `k` if `base` is taken.
    pub fn fresh_unique(&mut self, base: &str, role: Role, group: &str) -> VarId {
        if !self.by_label.contains_key(base) {
            return self.push(base.to_string(), role, group);
        }
        let counter = self.suffix.entry(base.to_string()).or_insert(0);
        loop {
            *counter += 1;
            let label = format!("{base}#{counter}");
            if !self.by_label.contains_key(&label) {
                return self.push(label, role, group);
            }
        }
    }

    fn push(&mut self, label: String, role: Role, group: &str) -> VarId {
        let id = VarId(self.entries.len() as u32);
        self.by_label.insert(label.clone(), id);
        self.entries.push(VarInfo { id, label, role, group: group.to_string() });
        id
    }

    /// Renames a variable and changes its role.
    pub fn rename(&mut self, id: VarId, label: &str, role: Role) -> Result<()> {
        if !self.contains(id) {
            return Err(Error::UnknownVariable(id));
        }
        if let Some(&other) = self.by_label.get(label) {
            if other != id {
                return Err(Error::DuplicateLabel(label.to_string()));
            }
        }
        let entry = &mut self.entries[id.index()];
        self.by_label.remove(&entry.label);
        entry.label = label.to_string();
        entry.role = role;
        self.by_label.insert(label.to_string(), id);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: VarId) -> Option<&VarInfo> {
        self.entries.get(id.index())
    }

    pub fn label(&self, id: VarId) -> &str {
        self.entries.get(id.index()).map(|e| e.label.as_str()).unwrap_or("?")
    }

    pub fn lookup(&self, label: &str) -> Option<VarId> {
        self.by_label.get(label).copied()
    }

    pub fn contains(&self, id: VarId) -> bool {
        id.index() < self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &VarInfo> {
        self.entries.iter()
    }

    pub fn count_role(&self, role: Role) -> usize {
        self.entries.iter().filter(|e| e.role == role).count()
    }

    /// Rebuilds a registry from serialized entries, which must be dense and
    /// ordered by id.
    pub fn from_entries(entries: Vec<VarInfo>) -> Result<Self> {
        let mut reg = Self::new();
        for (k, e) in entries.into_iter().enumerate() {
            if e.id.index() != k {
                return Err(Error::invalid(format!("variable ids not dense at position {k}")));
            }
            reg.fresh_var(&e.label, e.role, &e.group)?;
        }
        Ok(reg)
    }
}
