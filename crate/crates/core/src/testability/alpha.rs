use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::ModelError;

const BUILTIN_CONFIG: &str = include_str!("../../data/alpha_config.tsv");

static BUILTIN: OnceLock<AlphaConfig> = OnceLock::new();

macro_rules! aspect_enum {
    ($name:ident { $($variant:ident),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn name(self) -> &'static str {
                match self {
                    $($name::$variant => stringify!($variant)),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                let key: String = s.chars().filter(|c| c.is_alphanumeric()).collect();
                $name::ALL
                    .iter()
                    .copied()
                    .find(|v| v.name().eq_ignore_ascii_case(&key))
                    .ok_or_else(|| format!("unknown {} {s:?}", stringify!($name)))
            }
        }
    };
}

aspect_enum!(Criticality { NonCritical, BusinessCritical, MissionCritical, SafetyCritical });
aspect_enum!(RequirementType { NonFunctional, Functional, Business });
aspect_enum!(Template { MultipleSentences, SingleSentence });
aspect_enum!(Policy { Softened, Hardened });

/// A built-in domain code or a custom domain with its own normalized dissimilarity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DomainRef {
    Code(String),
    Custom { code: String, normalized_dissimilarity: f64 },
}

impl DomainRef {
    pub fn code(&self) -> &str {
        match self {
            DomainRef::Code(c) | DomainRef::Custom { code: c, .. } => c,
        }
    }
}

impl From<&str> for DomainRef {
    fn from(code: &str) -> Self {
        DomainRef::Code(code.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaProfile {
    pub domains: Vec<DomainRef>,
    pub criticality: Criticality,
    pub req_type: RequirementType,
    pub template: Template,
    pub policy: Policy,
}

impl AlphaProfile {
    pub fn new(
        domains: &[&str],
        criticality: Criticality,
        req_type: RequirementType,
        template: Template,
        policy: Policy,
    ) -> Self {
        AlphaProfile {
            domains: domains.iter().map(|&d| DomainRef::from(d)).collect(),
            criticality,
            req_type,
            template,
            policy,
        }
    }

    pub fn with_policy(&self, policy: Policy) -> Self {
        AlphaProfile { policy, ..self.clone() }
    }
}

/// Aspect values under both policies plus built-in domain dissimilarities.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaConfig {
    criticality: BTreeMap<Criticality, (f64, f64)>,
    req_type: BTreeMap<RequirementType, (f64, f64)>,
    template: BTreeMap<Template, (f64, f64)>,
    domains: BTreeMap<String, f64>,
}

fn pick((soft, hard): (f64, f64), policy: Policy) -> f64 {
    match policy {
        Policy::Softened => soft,
        Policy::Hardened => hard,
    }
}

impl AlphaConfig {
    pub fn builtin() -> &'static AlphaConfig {
        BUILTIN.get_or_init(|| AlphaConfig::parse(BUILTIN_CONFIG).expect("bundled alpha config parses"))
    }

    /// Parses the tab-separated `aspect option softened hardened` / `domain CODE value` table.
    pub fn parse(src: &str) -> Result<Self, ModelError> {
        let mut cfg = AlphaConfig {
            criticality: BTreeMap::new(),
            req_type: BTreeMap::new(),
            template: BTreeMap::new(),
            domains: BTreeMap::new(),
        };
        for (i, line) in src.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| ModelError::Config { line: line_no, reason };
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            let num = |s: &str| -> Result<f64, ModelError> {
                let x: f64 = s.parse().map_err(|_| err(format!("{s:?} is not a number")))?;
                if !(0.0..=1.0).contains(&x) {
                    return Err(err(format!("{x} outside [0, 1]")));
                }
                Ok(x)
            };
            match fields.as_slice() {
                ["domain", code, value] => {
                    cfg.domains.insert(code.to_uppercase(), num(value)?);
                }
                [aspect, option, soft, hard] => {
                    let pair = (num(soft)?, num(hard)?);
                    if pair.0 > pair.1 {
                        return Err(err("softened value exceeds hardened value".into()));
                    }
                    match *aspect {
                        "criticality" => {
                            cfg.criticality.insert(option.parse().map_err(err)?, pair);
                        }
                        "req_type" => {
                            cfg.req_type.insert(option.parse().map_err(err)?, pair);
                        }
                        "template" => {
                            cfg.template.insert(option.parse().map_err(err)?, pair);
                        }
                        other => return Err(err(format!("unknown aspect {other:?}"))),
                    }
                }
                _ => return Err(err("expected 3 or 4 tab-separated fields".into())),
            }
        }
        let complete = Criticality::ALL.iter().all(|c| cfg.criticality.contains_key(c))
            && RequirementType::ALL.iter().all(|c| cfg.req_type.contains_key(c))
            && Template::ALL.iter().all(|c| cfg.template.contains_key(c));
        if !complete {
            return Err(ModelError::Config { line: 0, reason: "every aspect option needs a value".into() });
        }
        Ok(cfg)
    }

    pub fn domain(&self, code: &str) -> Option<f64> {
        self.domains.get(&code.to_uppercase()).copied()
    }

    pub fn domain_codes(&self) -> impl Iterator<Item = &str> {
        self.domains.keys().map(String::as_str)
    }

    /// Mean normalized dissimilarity of the profile's domains.
    pub fn dissimilarity(&self, domains: &[DomainRef]) -> Result<f64, ModelError> {
        if domains.is_empty() {
            return Err(ModelError::InvalidArgs("profile needs at least one domain".into()));
        }
        let mut sum = 0.0;
        for d in domains {
            sum += match d {
                DomainRef::Code(c) => self.domain(c).ok_or_else(|| ModelError::UnknownDomainCode(c.clone()))?,
                DomainRef::Custom { normalized_dissimilarity: x, code } => {
                    if !(0.0..=1.0).contains(x) {
                        return Err(ModelError::InvalidArgs(format!("domain {code} dissimilarity {x} outside [0, 1]")));
                    }
                    *x
                }
            };
        }
        Ok(sum / domains.len() as f64)
    }

    /// Mean of the four aspect values under the profile's policy.
    pub fn alpha(&self, profile: &AlphaProfile) -> Result<f64, ModelError> {
        let p = profile.policy;
        let dissim = self.dissimilarity(&profile.domains)?;
        let crit = pick(self.criticality[&profile.criticality], p);
        let kind = pick(self.req_type[&profile.req_type], p);
        let tmpl = pick(self.template[&profile.template], p);
        Ok((dissim + crit + kind + tmpl) / 4.0)
    }
}

/// Alpha under the bundled configuration.
pub fn compute_alpha(profile: &AlphaProfile) -> Result<f64, ModelError> {
    AlphaConfig::builtin().alpha(profile)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(domains: &[&str], c: Criticality, r: RequirementType, t: Template, p: Policy) -> f64 {
        compute_alpha(&AlphaProfile::new(domains, c, r, t, p)).unwrap()
    }

    #[test]
    fn worked_profiles() {
        use Criticality::*;
        use RequirementType::*;
        use Template::*;
        let close = |a: f64, b: f64| (a - b).abs() < 5e-5;
        assert!(close(alpha(&["EE"], SafetyCritical, Functional, MultipleSentences, Policy::Softened), 0.4836));
        assert!(close(alpha(&["CS"], BusinessCritical, Functional, SingleSentence, Policy::Softened), 0.27));
        assert!(close(alpha(&["EE", "ME"], SafetyCritical, Functional, SingleSentence, Policy::Softened), 0.6093));
        assert!(close(alpha(&["EE"], SafetyCritical, Functional, MultipleSentences, Policy::Hardened), 0.7536));
    }

    #[test]
    fn unknown_domain_is_an_error() {
        let p = AlphaProfile::new(&["XX"], Criticality::NonCritical, RequirementType::Business, Template::SingleSentence, Policy::Softened);
        assert_eq!(compute_alpha(&p), Err(ModelError::UnknownDomainCode("XX".into())));
    }

    #[test]
    fn custom_domain() {
        let p = AlphaProfile {
            domains: vec![DomainRef::Custom { code: "AG".into(), normalized_dissimilarity: 0.4 }],
            criticality: Criticality::NonCritical,
            req_type: RequirementType::NonFunctional,
            template: Template::MultipleSentences,
            policy: Policy::Softened,
        };
        assert!((compute_alpha(&p).unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn profile_json_shape() {
        let p = AlphaProfile::new(&["EE"], Criticality::SafetyCritical, RequirementType::Functional, Template::MultipleSentences, Policy::Softened);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(
            json,
            r#"{"domains":["EE"],"criticality":"SafetyCritical","req_type":"Functional","template":"MultipleSentences","policy":"Softened"}"#
        );
        assert_eq!(serde_json::from_str::<AlphaProfile>(&json).unwrap(), p);
    }

    #[test]
    fn enum_parsing_is_lenient_about_separators() {
        assert_eq!("safety-critical".parse::<Criticality>().unwrap(), Criticality::SafetyCritical);
        assert_eq!("non_functional".parse::<RequirementType>().unwrap(), RequirementType::NonFunctional);
        assert!("urgent".parse::<Criticality>().is_err());
    }

    #[test]
    fn config_errors() {
        assert!(matches!(AlphaConfig::parse("criticality\tNonCritical\tx\t1\n"), Err(ModelError::Config { line: 1, .. })));
        assert!(matches!(AlphaConfig::parse("domain\tCS\t0\n"), Err(ModelError::Config { line: 0, .. })));
        assert!(matches!(AlphaConfig::parse("template\tSingleSentence\t0.9\t0.1\n"), Err(ModelError::Config { line: 1, .. })));
    }

    #[test]
    fn builtin_domains() {
        let cfg = AlphaConfig::builtin();
        assert_eq!(cfg.domain_codes().count(), 11);
        assert_eq!(cfg.domain("cs"), Some(0.0));
        assert_eq!(cfg.domain("LT"), Some(1.0));
    }
}
