//! Hypothesis bundles with a conclusion that is only evaluated when every
//! hypothesis holds.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScenarioVerdict {
    pub hypotheses: Vec<Hypothesis>,
    pub conclusion_checked: bool,
    pub conclusion_holds: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
}

impl ScenarioVerdict {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record a hypothesis; `witness` describes a failure.
    pub fn require(&mut self, name: &str, holds: bool, witness: Option<String>) -> bool {
        self.hypotheses.push(Hypothesis { name: name.to_string(), holds, witness: if holds { None } else { witness } });
        holds
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| h.holds)
    }

    pub fn first_failure(&self) -> Option<&Hypothesis> {
        self.hypotheses.iter().find(|h| !h.holds)
    }

    /// Evaluate the conclusion if, and only if, all hypotheses hold.
    pub fn conclude<E>(&mut self, check: impl FnOnce(&mut Vec<String>) -> Result<bool, E>) -> Result<(), E> {
        if !self.hypotheses_hold() {
            return Ok(());
        }
        let holds = check(&mut self.details)?;
        self.conclusion_checked = true;
        self.conclusion_holds = holds;
        Ok(())
    }

    pub fn passed(&self) -> bool {
        self.hypotheses_hold() && self.conclusion_checked && self.conclusion_holds
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.details.push(s.into());
    }
}
