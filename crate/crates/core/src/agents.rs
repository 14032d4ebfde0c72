use std::fmt;

use crate::error::{Error, Result};

/// Index of an agent (a color) inside an [`AgentSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Agent(pub usize);

impl Agent {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Ordered, nonempty list of distinct agent names. The order is canonical
/// and drives every iteration downstream.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AgentSet {
    names: Vec<String>,
}

impl AgentSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidAgents("agent set is empty".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::InvalidAgents(format!("duplicate agent {n}")));
            }
        }
        Ok(Self { names })
    }

    /// `a0, a1, ..., a{n-1}`.
    pub fn indexed(n: usize) -> Self {
        Self::new((0..n).map(|i| format!("a{i}"))).expect("n > 0")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = Agent> + '_ {
        (0..self.names.len()).map(Agent)
    }

    pub fn name(&self, a: Agent) -> &str {
        &self.names[a.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Result<Agent> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(Agent)
            .ok_or_else(|| Error::UnknownAgent(name.to_string()))
    }

    pub fn ensure_same(&self, other: &AgentSet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AgentMismatch(self.names.clone(), other.names.clone()))
        }
    }

    /// Resolves and sorts a named group; rejects empty groups.
    pub fn group<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<Agent>> {
        if names.is_empty() {
            return Err(Error::EmptyGroup);
        }
        let mut out = names
            .iter()
            .map(|n| self.lookup(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn all(&self) -> Vec<Agent> {
        self.iter().collect()
    }
}

impl fmt::Display for AgentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names.join(","))
    }
}
