//! Multiple state models `(S, T)`: the states an insured risk can occupy and
//! the direct transitions allowed between them.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer state label, numbered from 1.
pub type StateId = u8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Transient,
    /// Occupied for exactly one period before a forced exit.
    Reflex,
    Absorbing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDef {
    pub id: StateId,
    pub name: String,
    pub kind: StateKind,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
}

impl StateDef {
    pub fn new(id: StateId, name: &str, kind: StateKind, description: &str) -> Self {
        Self {
            id,
            name: name.to_owned(),
            kind,
            description: description.to_owned(),
        }
    }
}

/// A multiple state model. Self-loops are implicit "stay" events and never
/// appear in `transitions`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiStateModel {
    pub states: Vec<StateDef>,
    pub transitions: BTreeSet<(StateId, StateId)>,
    pub initial: StateId,
}

/// One broken model invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    pub subject: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.rule)
    }
}

pub const HEALTHY: StateId = 1;
pub const CANCER_LOCAL: StateId = 2;
pub const METASTATIC_FIRST: StateId = 3;
pub const METASTATIC_LAST: StateId = 6;
pub const DEATH_NON_METASTATIC: StateId = 7;
pub const DEATH_METASTATIC: StateId = 8;

/// Number of states in the lung-cancer CII model.
pub const CII_STATES: usize = 8;

/// Transitions of the lung-cancer CII model, in the column order used for
/// increment-decrement tables.
pub const CII_TRANSITIONS: [(StateId, StateId); 12] = [
    (1, 2),
    (1, 3),
    (1, 7),
    (2, 3),
    (2, 7),
    (3, 4),
    (3, 8),
    (4, 5),
    (4, 8),
    (5, 6),
    (5, 8),
    (6, 8),
];

impl MultiStateModel {
    /// Builds a model and rejects it unless [`validate`](Self::validate) is clean.
    pub fn new(
        states: Vec<StateDef>,
        transitions: impl IntoIterator<Item = (StateId, StateId)>,
        initial: StateId,
    ) -> Result<Self> {
        let model = Self {
            states,
            transitions: transitions.into_iter().collect(),
            initial,
        };
        let violations = model.validate();
        if violations.is_empty() {
            Ok(model)
        } else {
            let msg = violations
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ");
            Err(Error::Model(msg))
        }
    }

    /// The 8-state lung-cancer critical illness model.
    pub fn cii() -> Self {
        use StateKind::*;
        let states = vec![
            StateDef::new(1, "healthy", Transient, "alive, no malignant lung tumour"),
            StateDef::new(
                2,
                "cancer",
                Transient,
                "lung cancer without distant metastases",
            ),
            StateDef::new(3, "metastatic-1", Reflex, "distant metastases, e_s < 4"),
            StateDef::new(4, "metastatic-2", Reflex, "distant metastases, e_s < 3"),
            StateDef::new(5, "metastatic-3", Reflex, "distant metastases, e_s < 2"),
            StateDef::new(6, "metastatic-4", Reflex, "distant metastases, e_s < 1"),
            StateDef::new(
                7,
                "dead",
                Absorbing,
                "death, previously healthy or non-metastatic",
            ),
            StateDef::new(
                8,
                "dead-metastatic",
                Absorbing,
                "death, previously metastatic",
            ),
        ];
        Self {
            states,
            transitions: CII_TRANSITIONS.iter().copied().collect(),
            initial: HEALTHY,
        }
    }

    /// The classical 4-state dread disease model with states
    /// 1 = a (active), 2 = i (ill), 3 = d(D), 4 = d(O).
    ///
    /// With `lambda == 1` the cover ends on diagnosis, so `i` is absorbing.
    pub fn classical(lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Parameter(format!(
                "acceleration parameter {lambda} outside [0, 1]"
            )));
        }
        use StateKind::*;
        let standalone = lambda == 1.0;
        let states = vec![
            StateDef::new(1, "a", Transient, "active"),
            StateDef::new(
                2,
                "i",
                if standalone { Absorbing } else { Transient },
                "ill with dread disease",
            ),
            StateDef::new(3, "d(D)", Absorbing, "death due to dread disease"),
            StateDef::new(4, "d(O)", Absorbing, "death due to other causes"),
        ];
        let mut transitions = vec![(1, 2), (1, 4), (1, 3)];
        if !standalone {
            transitions.extend([(2, 4), (2, 3)]);
        }
        Ok(Self {
            states,
            transitions: transitions.into_iter().collect(),
            initial: 1,
        })
    }

    pub fn state(&self, id: StateId) -> Option<&StateDef> {
        self.states.iter().find(|s| s.id == id)
    }

    pub fn allows(&self, from: StateId, to: StateId) -> bool {
        self.transitions.contains(&(from, to))
    }

    pub fn successors(&self, id: StateId) -> impl Iterator<Item = StateId> + '_ {
        self.transitions
            .iter()
            .filter(move |(i, _)| *i == id)
            .map(|&(_, j)| j)
    }

    pub fn predecessors(&self, id: StateId) -> impl Iterator<Item = StateId> + '_ {
        self.transitions
            .iter()
            .filter(move |(_, j)| *j == id)
            .map(|&(i, _)| i)
    }

    /// Lists every broken invariant; empty when the model is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |rule: &'static str, subject: String| out.push(Violation { rule, subject });

        let mut kinds: BTreeMap<StateId, StateKind> = BTreeMap::new();
        for s in &self.states {
            if kinds.insert(s.id, s.kind).is_some() {
                push("duplicate state id", format!("state {}", s.id));
            }
        }

        for &(i, j) in &self.transitions {
            let subject = format!("transition ({i},{j})");
            if i == j {
                push("self-loop listed as a transition", subject.clone());
            }
            if !kinds.contains_key(&i) || !kinds.contains_key(&j) {
                push("transition refers to unknown state", subject);
            }
        }

        for (&id, &kind) in &kinds {
            let outgoing = self.successors(id).filter(|&j| j != id).count();
            let subject = format!("state {id}");
            match kind {
                StateKind::Absorbing if outgoing > 0 => {
                    push("absorbing state has outgoing transitions", subject)
                }
                StateKind::Transient | StateKind::Reflex if outgoing == 0 => {
                    push("non-absorbing state has no outgoing transition", subject)
                }
                _ => {}
            }
            if kind == StateKind::Reflex && self.allows(id, id) {
                push("reflex state has a self-loop", format!("state {id}"));
            }
        }

        if !kinds.values().any(|k| *k == StateKind::Absorbing) {
            push("model has no absorbing state", "model".to_owned());
        }

        if !kinds.contains_key(&self.initial) {
            push(
                "initial state is not defined",
                format!("state {}", self.initial),
            );
        } else {
            let mut seen = BTreeSet::from([self.initial]);
            let mut queue = VecDeque::from([self.initial]);
            while let Some(i) = queue.pop_front() {
                for j in self.successors(i) {
                    if seen.insert(j) {
                        queue.push_back(j);
                    }
                }
            }
            for &id in kinds.keys() {
                if !seen.contains(&id) {
                    push(
                        "state unreachable from the initial state",
                        format!("state {id}"),
                    );
                }
            }
        }

        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: Self = serde_json::from_str(text)?;
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cii_model_shape() {
        let m = MultiStateModel::cii();
        assert_eq!(m.states.len(), 8);
        assert_eq!(m.transitions.len(), 12);
        assert_eq!(m.state(7).unwrap().kind, StateKind::Absorbing);
        assert!(m.allows(6, 8));
        assert!(!m.allows(6, 7));
        assert!(m.validate().is_empty());
    }

    #[test]
    fn reflex_states_have_next_stage_and_death_exits() {
        let m = MultiStateModel::cii();
        for id in 3..=5 {
            let succ: Vec<_> = m.successors(id).collect();
            assert_eq!(succ, vec![id + 1, 8]);
            assert_eq!(m.state(id).unwrap().kind, StateKind::Reflex);
        }
        assert_eq!(m.successors(6).collect::<Vec<_>>(), vec![8]);
    }

    #[test]
    fn classical_model_depends_on_lambda_one_only() {
        let m0 = MultiStateModel::classical(0.0).unwrap();
        assert_eq!(m0.transitions.len(), 5);
        let m1 = MultiStateModel::classical(1.0).unwrap();
        assert_eq!(m1.transitions.len(), 3);
        assert_eq!(m1.state(2).unwrap().kind, StateKind::Absorbing);
        let half = MultiStateModel::classical(0.5).unwrap();
        assert_eq!(half, m0);
        for m in [&m0, &m1, &half] {
            assert!(m.validate().is_empty(), "{:?}", m.validate());
        }
        assert!(MultiStateModel::classical(1.5).is_err());
        assert!(MultiStateModel::classical(-0.1).is_err());
    }

    #[test]
    fn absorbing_with_exit_is_one_violation() {
        let mut m = MultiStateModel::cii();
        m.transitions.insert((7, 8));
        let v = m.validate();
        assert_eq!(v.len(), 1, "{v:?}");
        assert_eq!(v[0].subject, "state 7");
    }

    #[test]
    fn unreachable_state_is_one_violation() {
        let mut m = MultiStateModel::cii();
        m.states
            .push(StateDef::new(9, "orphan", StateKind::Absorbing, ""));
        let v = m.validate();
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].rule.contains("unreachable"));
    }

    #[test]
    fn builder_rejects_invalid_models() {
        let states = vec![
            StateDef::new(1, "a", StateKind::Transient, ""),
            StateDef::new(2, "b", StateKind::Transient, ""),
        ];
        assert!(MultiStateModel::new(states, [(1, 2)], 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = MultiStateModel::cii();
        let text = m.to_json().unwrap();
        assert!(text.contains("\"reflex\""));
        assert_eq!(MultiStateModel::from_json(&text).unwrap(), m);
    }
}
