use std::fmt;

use crate::agents::{Agent, AgentSet};
use crate::error::{Error, Result};

/// A signed atom reference, `p` or `¬p`, indexing into a [`Vocabulary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: usize,
    pub positive: bool,
}

impl Literal {
    pub fn new(atom: usize, positive: bool) -> Self {
        Self { atom, positive }
    }

    pub fn complement(self) -> Self {
        Self {
            atom: self.atom,
            positive: !self.positive,
        }
    }
}

/// Ordered atomic propositions, each optionally owned by one agent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Vocabulary {
    atoms: Vec<String>,
    owners: Vec<Option<Agent>>,
}

impl Vocabulary {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(atoms: Vec<(String, Option<Agent>)>) -> Result<Self> {
        let mut v = Self::empty();
        for (name, owner) in atoms {
            if v.atoms.contains(&name) {
                return Err(Error::InvalidModel(format!("duplicate atom {name}")));
            }
            v.atoms.push(name);
            v.owners.push(owner);
        }
        Ok(v)
    }

    /// Atoms `prefix0..prefix{n-1}`, atom `i` owned by agent `i`.
    pub fn agent_indexed(prefix: &str, agents: &AgentSet) -> Self {
        Self {
            atoms: agents.iter().map(|a| format!("{prefix}{}", a.0)).collect(),
            owners: agents.iter().map(Some).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn name(&self, atom: usize) -> &str {
        &self.atoms[atom]
    }

    pub fn names(&self) -> &[String] {
        &self.atoms
    }

    pub fn owner(&self, atom: usize) -> Option<Agent> {
        self.owners[atom]
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.lookup(name).ok_or_else(|| Error::UnknownAtom(name.to_string()))
    }

    pub fn atoms_owned_by(&self, a: Agent) -> impl Iterator<Item = usize> + '_ {
        (0..self.atoms.len()).filter(move |&i| self.owners[i] == Some(a))
    }

    /// Fails with `MissingOwner` on the first unowned atom.
    pub fn require_owners(&self) -> Result<()> {
        match self.owners.iter().position(Option::is_none) {
            Some(i) => Err(Error::MissingOwner(self.atoms[i].clone())),
            None => Ok(()),
        }
    }

    /// Union by name, keeping `self`'s order first. Returns the merged
    /// vocabulary and the index map of `other` into it.
    pub fn union(&self, other: &Vocabulary, agents: &AgentSet) -> Result<(Vocabulary, Vec<usize>)> {
        let mut merged = self.clone();
        let mut map = Vec::with_capacity(other.len());
        for i in 0..other.len() {
            match merged.lookup(&other.atoms[i]) {
                Some(j) => {
                    let (a, b) = (merged.owners[j], other.owners[i]);
                    match (a, b) {
                        (Some(x), Some(y)) if x != y => {
                            return Err(Error::OwnerConflict {
                                atom: other.atoms[i].clone(),
                                first: agents.name(x).to_string(),
                                second: agents.name(y).to_string(),
                            })
                        }
                        (None, Some(_)) => merged.owners[j] = b,
                        _ => {}
                    }
                    map.push(j);
                }
                None => {
                    merged.atoms.push(other.atoms[i].clone());
                    merged.owners.push(other.owners[i]);
                    map.push(merged.atoms.len() - 1);
                }
            }
        }
        Ok((merged, map))
    }

    /// Keeps only atoms satisfying `keep`; returns the new vocabulary and,
    /// for each kept atom, its old index.
    pub fn filter(&self, mut keep: impl FnMut(usize) -> bool) -> (Vocabulary, Vec<usize>) {
        let mut v = Vocabulary::empty();
        let mut old = Vec::new();
        for i in 0..self.atoms.len() {
            if keep(i) {
                v.atoms.push(self.atoms[i].clone());
                v.owners.push(self.owners[i]);
                old.push(i);
            }
        }
        (v, old)
    }

    pub fn fmt_literal(&self, lit: Literal) -> String {
        if lit.positive {
            self.atoms[lit.atom].clone()
        } else {
            format!("!{}", self.atoms[lit.atom])
        }
    }

    /// Parses `p` or `!p`.
    pub fn parse_literal(&self, text: &str) -> Result<Literal> {
        let text = text.trim();
        let (positive, name) = match text.strip_prefix('!') {
            Some(rest) => (false, rest.trim()),
            None => (true, text),
        };
        Ok(Literal::new(self.require(name)?, positive))
    }
}

/// A full AP-maximal, consistent valuation: one truth value per atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation(pub Vec<bool>);

impl Valuation {
    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.0.iter().enumerate().map(|(i, &b)| Literal::new(i, b))
    }

    pub fn holds(&self, lit: Literal) -> bool {
        self.0[lit.atom] == lit.positive
    }

    /// Completes a literal set; fails on missing or complementary entries.
    pub fn from_literals(vocab: &Vocabulary, lits: &[Literal]) -> std::result::Result<Self, String> {
        let mut val: Vec<Option<bool>> = vec![None; vocab.len()];
        for l in lits {
            match val[l.atom] {
                Some(b) if b != l.positive => {
                    return Err(format!("valuation contains both {0} and !{0}", vocab.name(l.atom)))
                }
                _ => val[l.atom] = Some(l.positive),
            }
        }
        val.into_iter()
            .enumerate()
            .map(|(i, b)| b.ok_or_else(|| format!("valuation is not AP-maximal: {} missing", vocab.name(i))))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Valuation)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits: String = self.0.iter().map(|&b| if b { '1' } else { '0' }).collect();
        write!(f, "{bits}")
    }
}
