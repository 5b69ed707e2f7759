//! JSON model files. Probabilities are exact `"p/q"` strings; configurations
//! are keyed by agent name and element label, so files are order-independent.

use std::collections::BTreeMap;
use std::sync::Arc;

use idm_core::field::{ConfigSet, ConfigSpace, Configuration, CoordinateMask, FiniteSpace, Partition};
use idm_core::model::{FieldRepr, FieldSpec, Prior, Provenance, WModel};
use idm_core::probability::{format_rational, parse_rational, Rational};
use idm_core::solvability::{Policy, PolicyProfile};
use idm_core::{AgentSet, IdmError};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    #[serde(default)]
    pub name: String,
    #[serde(default = "user")]
    pub provenance: Provenance,
}

fn user() -> Provenance {
    Provenance::User
}

impl Default for Meta {
    fn default() -> Self {
        Meta { name: String::new(), provenance: Provenance::User }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NatureSpec {
    pub labels: Vec<String>,
    /// Mass per label; omitted on every agent for a uniform prior.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prob: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaskSpec {
    #[serde(default)]
    pub nature: Vec<String>,
    #[serde(default)]
    pub decision: Vec<String>,
}

/// A full configuration: one label per agent on each side.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConfigJson {
    pub nature: BTreeMap<String, String>,
    pub decision: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObsEntry {
    #[serde(flatten)]
    pub config: ConfigJson,
    pub atom: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfoSpec {
    Mask(MaskSpec),
    /// Atom id of every configuration.
    ObsTable(Vec<ObsEntry>),
}

/// Decision taken on the atom containing `config`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyEntry {
    #[serde(flatten)]
    pub config: ConfigJson,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format_version: u32,
    #[serde(default)]
    pub meta: Meta,
    pub agents: Vec<String>,
    pub nature: BTreeMap<String, NatureSpec>,
    pub decisions: BTreeMap<String, Vec<String>>,
    pub info: BTreeMap<String, InfoSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policies: Option<BTreeMap<String, Vec<PolicyEntry>>>,
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, agent: &str, what: &str) -> CliResult<&'a T> {
    map.get(agent).ok_or_else(|| CliError::Format(format!("`{what}` has no entry for agent `{agent}`")))
}

fn check_keys<T>(map: &BTreeMap<String, T>, agents: &[String], what: &str) -> CliResult<()> {
    match map.keys().find(|k| !agents.contains(k)) {
        Some(k) => Err(IdmError::UnknownAgent(format!("{k} (in `{what}`)")).into()),
        None => Ok(()),
    }
}

pub fn config_index(sp: &ConfigSpace, c: &ConfigJson) -> CliResult<usize> {
    check_keys(&c.nature, sp.agents(), "nature")?;
    check_keys(&c.decision, sp.agents(), "decision")?;
    let n = sp.agent_count();
    let mut cfg = Configuration { nature: vec![0; n], decision: vec![0; n] };
    for (a, name) in sp.agents().iter().enumerate() {
        cfg.nature[a] = sp.nature_space(a).index_of(lookup(&c.nature, name, "nature")?)?;
        cfg.decision[a] = sp.decision_space(a).index_of(lookup(&c.decision, name, "decision")?)?;
    }
    Ok(sp.index_of(&cfg)?)
}

pub fn config_json(sp: &ConfigSpace, idx: usize) -> ConfigJson {
    let c = sp.configuration(idx);
    let side = |vals: &[usize], nature: bool| {
        sp.agents()
            .iter()
            .enumerate()
            .map(|(a, name)| {
                let space = if nature { sp.nature_space(a) } else { sp.decision_space(a) };
                (name.clone(), space.label(vals[a]).to_string())
            })
            .collect()
    };
    ConfigJson { nature: side(&c.nature, true), decision: side(&c.decision, false) }
}

/// Explicit configuration list as a context set.
pub fn context_from_configs(sp: &Arc<ConfigSpace>, configs: &[ConfigJson]) -> CliResult<ConfigSet> {
    let idx = configs.iter().map(|c| config_index(sp, c)).collect::<CliResult<Vec<_>>>()?;
    Ok(ConfigSet::from_indices(sp, idx)?)
}

fn names_to_set(sp: &ConfigSpace, names: &[String]) -> CliResult<AgentSet> {
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(sp.agent_set(&refs)?)
}

fn set_to_names(sp: &ConfigSpace, s: AgentSet) -> Vec<String> {
    s.iter().map(|a| sp.agent_name(a).to_string()).collect()
}

impl ModelFile {
    pub fn to_model(&self) -> CliResult<WModel> {
        if self.format_version != MODEL_FORMAT_VERSION {
            return Err(CliError::Format(format!("unsupported format_version {}", self.format_version)));
        }
        let agents = &self.agents;
        for (map_keys, what) in [
            (self.nature.keys().collect::<Vec<_>>(), "nature"),
            (self.decisions.keys().collect(), "decisions"),
            (self.info.keys().collect(), "info"),
        ] {
            if let Some(k) = map_keys.into_iter().find(|k| !agents.contains(k)) {
                return Err(IdmError::UnknownAgent(format!("{k} (in `{what}`)")).into());
            }
        }
        let mut nature = Vec::with_capacity(agents.len());
        let mut decisions = Vec::with_capacity(agents.len());
        for a in agents {
            nature.push(FiniteSpace::new(format!("Omega_{a}"), lookup(&self.nature, a, "nature")?.labels.clone())?);
            decisions.push(FiniteSpace::new(format!("U_{a}"), lookup(&self.decisions, a, "decisions")?.clone())?);
        }
        let sp = ConfigSpace::new(agents.clone(), nature, decisions)?;

        let mut fields = Vec::with_capacity(agents.len());
        for a in agents {
            fields.push(match lookup(&self.info, a, "info")? {
                InfoSpec::Mask(m) => {
                    FieldSpec::Mask(CoordinateMask::new(names_to_set(&sp, &m.nature)?, names_to_set(&sp, &m.decision)?))
                }
                InfoSpec::ObsTable(entries) => {
                    let mut atom = vec![None; sp.size()];
                    for e in entries {
                        let i = config_index(&sp, &e.config)?;
                        if atom[i].replace(e.atom).is_some() {
                            return Err(CliError::Format(format!("obs_table of `{a}` lists {} twice", sp.describe(i))));
                        }
                    }
                    if let Some(i) = atom.iter().position(Option::is_none) {
                        return Err(CliError::Format(format!("obs_table of `{a}` misses {}", sp.describe(i))));
                    }
                    FieldSpec::Observation(Partition::from_index_labels(&sp, |i| atom[i]))
                }
            });
        }
        let mut m = WModel::new(sp.clone(), fields)?.with_meta(self.meta.name.clone(), self.meta.provenance);

        let with_prob = agents.iter().filter(|a| self.nature[*a].prob.is_some()).count();
        if with_prob == agents.len() {
            let mut masses = Vec::with_capacity(agents.len());
            for (k, a) in agents.iter().enumerate() {
                let probs = self.nature[a].prob.as_ref().expect("counted");
                let space = sp.nature_space(k);
                if let Some(l) = probs.keys().find(|l| space.index_of(l).is_err()) {
                    return Err(IdmError::UnknownElement { space: space.id().to_string(), label: l.clone() }.into());
                }
                let row = space
                    .elements()
                    .iter()
                    .map(|l| probs.get(l).map_or(Ok(Rational::from_integer(0.into())), |p| parse_rational(p)))
                    .collect::<Result<Vec<_>, _>>()?;
                masses.push(row);
            }
            m = m.with_prior(Prior::new(&sp, masses)?)?;
        } else if with_prob != 0 {
            return Err(CliError::Format("`prob` must be given for every agent or for none".into()));
        }

        if let Some(pols) = &self.policies {
            check_keys(pols, agents, "policies")?;
            let mut policies = Vec::with_capacity(agents.len());
            for (k, a) in agents.iter().enumerate() {
                let part = m.info(k).partition();
                let mut table = vec![None; part.atom_count()];
                for e in lookup(pols, a, "policies")? {
                    let i = config_index(&sp, &e.config)?;
                    let atom = part.atom(i).expect("total field");
                    let v = sp.decision_space(k).index_of(&e.value)?;
                    if table[atom].replace(v).is_some_and(|old| old != v) {
                        return Err(CliError::Format(format!("policy of `{a}` is inconsistent on one atom")));
                    }
                }
                let table = table
                    .into_iter()
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| CliError::Format(format!("policy of `{a}` does not cover every atom")))?;
                policies.push(Policy::new(&m, k, table)?);
            }
            let profile = PolicyProfile::new(&m, policies)?;
            m = m.with_policy(profile)?;
        }
        Ok(m)
    }

    pub fn from_model(m: &WModel) -> ModelFile {
        let sp = m.space();
        let agents: Vec<String> = sp.agents().to_vec();
        let prior = m.prior();
        let nature = agents
            .iter()
            .enumerate()
            .map(|(a, name)| {
                let space = sp.nature_space(a);
                let prob = prior.map(|p| {
                    space.elements().iter().enumerate().map(|(v, l)| (l.clone(), format_rational(p.mass(a, v)))).collect()
                });
                (name.clone(), NatureSpec { labels: space.elements().to_vec(), prob })
            })
            .collect();
        let decisions =
            agents.iter().enumerate().map(|(a, name)| (name.clone(), sp.decision_space(a).elements().to_vec())).collect();
        let info = agents
            .iter()
            .enumerate()
            .map(|(a, name)| {
                let f = m.info(a);
                let spec = match f.repr() {
                    FieldRepr::Mask(mask) => InfoSpec::Mask(MaskSpec {
                        nature: set_to_names(sp, mask.nature),
                        decision: set_to_names(sp, mask.decision),
                    }),
                    FieldRepr::Observation => InfoSpec::ObsTable(
                        (0..sp.size())
                            .map(|i| ObsEntry { config: config_json(sp, i), atom: f.partition().atom(i).expect("total") })
                            .collect(),
                    ),
                };
                (name.clone(), spec)
            })
            .collect();
        let policies = m.policy().map(|profile| {
            agents
                .iter()
                .enumerate()
                .map(|(a, name)| {
                    let part = m.info(a).partition();
                    let entries = part
                        .representatives()
                        .into_iter()
                        .map(|i| PolicyEntry {
                            config: config_json(sp, i),
                            value: sp.decision_space(a).label(profile.decide(m, a, i)).to_string(),
                        })
                        .collect();
                    (name.clone(), entries)
                })
                .collect()
        });
        ModelFile {
            format_version: MODEL_FORMAT_VERSION,
            meta: Meta { name: m.name().to_string(), provenance: m.provenance() },
            agents,
            nature,
            decisions,
            info,
            policies,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use idm_core::model::{builtin, builtin_names};

    #[test]
    fn builtins_round_trip() {
        for name in builtin_names() {
            let m = builtin(name).unwrap();
            let file = ModelFile::from_model(&m);
            let text = serde_json::to_string(&file).unwrap();
            let back: ModelFile = serde_json::from_str(&text).unwrap();
            assert_eq!(back, file, "{name}");
            assert_eq!(back.to_model().unwrap(), m, "{name}");
        }
    }

    #[test]
    fn malformed_files_are_rejected() {
        let m = builtin("common-cause").unwrap();
        let mut file = ModelFile::from_model(&m);
        file.info.insert("Q".into(), InfoSpec::Mask(MaskSpec::default()));
        assert!(matches!(file.to_model(), Err(CliError::Idm(IdmError::UnknownAgent(_)))));

        let mut file = ModelFile::from_model(&m);
        file.nature.get_mut("Z").unwrap().prob = Some([("0".into(), "0.5".into()), ("1".into(), "1/2".into())].into());
        assert!(file.to_model().is_err());

        let mut file = ModelFile::from_model(&m);
        file.nature.get_mut("Z").unwrap().prob = None;
        assert!(matches!(file.to_model(), Err(CliError::Format(_))));
    }
}
