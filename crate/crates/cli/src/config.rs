use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use cii_core::engine::RNG_ALGORITHM;
use cii_core::table_store::{bundled, MAX_AGE, MIN_AGE};
use cii_core::{
    BandedRateTable64, CoefficientSet64, Context64, Contract64, LifeTable64, RatePurpose, Sex,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Environment variable naming the default data directory.
pub const DATA_DIR_ENV: &str = "CII_DATA_DIR";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LifeTablePaths {
    pub male: Option<PathBuf>,
    pub female: Option<PathBuf>,
}

/// Explicit rate table files for one sex. Missing entries fall back to the
/// data directory, then to the bundled tables.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateTablePaths {
    pub zeta: Option<PathBuf>,
    pub varpi: Option<PathBuf>,
    pub beta: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatePaths {
    #[serde(default)]
    pub male: RateTablePaths,
    #[serde(default)]
    pub female: RateTablePaths,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    #[serde(default = "default_paths")]
    pub paths: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_rng")]
    pub rng: String,
}

fn default_paths() -> u64 {
    1_000_000
}

fn default_rng() -> String {
    RNG_ALGORITHM.to_string()
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            paths: default_paths(),
            seed: 0,
            rng: default_rng(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViaticalConfig {
    pub purchase_fraction: f64,
}

fn default_radix() -> f64 {
    100_000.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub data_dir: Option<PathBuf>,
    #[serde(default)]
    pub life_tables: LifeTablePaths,
    #[serde(default)]
    pub rate_tables: RatePaths,
    pub coefficients: Option<PathBuf>,
    pub sex: Option<Sex>,
    pub entry_age: Option<u32>,
    pub term: Option<u32>,
    pub contract: Option<PathBuf>,
    /// Defaults to `out` in the working directory.
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub simulation: SimulationConfig,
    #[serde(default = "default_radix")]
    pub radix: f64,
    #[serde(default)]
    pub rounded_table: bool,
    pub viatical: Option<ViaticalConfig>,
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("empty config is valid")
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub sex: Option<Sex>,
    pub entry_age: Option<u32>,
    pub term: Option<u32>,
    pub out: Option<PathBuf>,
    pub paths: Option<u64>,
    pub seed: Option<u64>,
}

impl RunConfig {
    /// Reads `path` (or starts empty), makes relative paths absolute with
    /// respect to the config file, then applies the environment default and
    /// command-line overrides.
    pub fn resolve(path: Option<&Path>, overrides: &Overrides) -> Result<Self> {
        let mut cfg = match path {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .with_context(|| format!("reading config {}", p.display()))?;
                let mut cfg: RunConfig = serde_json::from_str(&text)
                    .with_context(|| format!("parsing config {}", p.display()))?;
                let base = p.parent().unwrap_or(Path::new("."));
                cfg.rebase(base);
                cfg
            }
            None => RunConfig::default(),
        };
        if cfg.data_dir.is_none() {
            cfg.data_dir = std::env::var_os(DATA_DIR_ENV)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from);
        }
        if let Some(s) = overrides.sex {
            cfg.sex = Some(s);
        }
        if let Some(a) = overrides.entry_age {
            cfg.entry_age = Some(a);
        }
        if let Some(n) = overrides.term {
            cfg.term = Some(n);
        }
        if let Some(o) = &overrides.out {
            cfg.output_dir = Some(o.clone());
        }
        if let Some(p) = overrides.paths {
            cfg.simulation.paths = p;
        }
        if let Some(s) = overrides.seed {
            cfg.simulation.seed = s;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(inner) = p {
                if inner.is_relative() {
                    *inner = base.join(&*inner);
                }
            }
        };
        fix(&mut self.data_dir);
        fix(&mut self.life_tables.male);
        fix(&mut self.life_tables.female);
        for r in [&mut self.rate_tables.male, &mut self.rate_tables.female] {
            fix(&mut r.zeta);
            fix(&mut r.varpi);
            fix(&mut r.beta);
        }
        fix(&mut self.coefficients);
        fix(&mut self.contract);
        fix(&mut self.output_dir);
    }

    fn validate(&self) -> Result<()> {
        let mut files: Vec<&PathBuf> = Vec::new();
        files.extend(self.life_tables.male.iter());
        files.extend(self.life_tables.female.iter());
        for r in [&self.rate_tables.male, &self.rate_tables.female] {
            files.extend(r.zeta.iter().chain(&r.varpi).chain(&r.beta));
        }
        files.extend(self.coefficients.iter());
        files.extend(self.contract.iter());
        for f in files {
            if !f.is_file() {
                bail!("referenced file {} does not exist", f.display());
            }
        }
        if let Some(d) = &self.data_dir {
            if !d.is_dir() {
                bail!("data directory {} does not exist", d.display());
            }
        }
        if let Some(x) = self.entry_age {
            if !(MIN_AGE..=MAX_AGE).contains(&x) {
                bail!("entry age {x} outside {MIN_AGE}..={MAX_AGE}");
            }
            if let Some(n) = self.term {
                if x + n > MAX_AGE {
                    bail!("entry age {x} plus term {n} exceeds {MAX_AGE}");
                }
            }
        }
        if self.simulation.rng != RNG_ALGORITHM {
            bail!(
                "unsupported rng {:?}; this build provides {RNG_ALGORITHM:?}",
                self.simulation.rng
            );
        }
        if !(self.radix > 0.0 && self.radix.is_finite()) {
            bail!("radix must be positive");
        }
        Ok(())
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("out"))
    }

    /// SHA-256 of the resolved configuration, used to tag every output. The
    /// output location is left out so that reruns elsewhere match byte for
    /// byte.
    pub fn hash(&self) -> String {
        let mut inputs = self.clone();
        inputs.output_dir = None;
        let text = serde_json::to_string(&inputs).expect("config serializes");
        format!("{:x}", Sha256::digest(text.as_bytes()))
    }

    pub fn require_sex(&self) -> Result<Sex> {
        self.sex
            .ok_or_else(|| anyhow!("sex is required (--sex or \"sex\" in the config)"))
    }

    pub fn require_age_term(&self) -> Result<(u32, u32)> {
        let x = self
            .entry_age
            .ok_or_else(|| anyhow!("entry age is required (--age or \"entry_age\")"))?;
        let n = self
            .term
            .ok_or_else(|| anyhow!("term is required (--term or \"term\")"))?;
        Ok((x, n))
    }

    fn life_table_path(&self, sex: Sex) -> Result<PathBuf> {
        let explicit = match sex {
            Sex::Male => &self.life_tables.male,
            Sex::Female => &self.life_tables.female,
        };
        if let Some(p) = explicit {
            return Ok(p.clone());
        }
        if let Some(d) = &self.data_dir {
            let p = d.join(format!("life_{sex}.csv"));
            if p.is_file() {
                return Ok(p);
            }
        }
        bail!("no {sex} life table: set life_tables.{sex} or place life_{sex}.csv in the data directory")
    }

    fn rate_table(&self, sex: Sex, purpose: RatePurpose) -> Result<BandedRateTable64> {
        let paths = match sex {
            Sex::Male => &self.rate_tables.male,
            Sex::Female => &self.rate_tables.female,
        };
        let explicit = match purpose {
            RatePurpose::Incidence => &paths.zeta,
            RatePurpose::CancerMortality => &paths.varpi,
            _ => &paths.beta,
        };
        let from_dir = self
            .data_dir
            .as_ref()
            .map(|d| d.join(bundled::file_name(sex, purpose)))
            .filter(|p| p.is_file());
        match explicit.clone().or(from_dir) {
            Some(p) => {
                let file =
                    fs::File::open(&p).with_context(|| format!("opening {}", p.display()))?;
                BandedRateTable64::load(file, sex, purpose)
                    .with_context(|| format!("loading {}", p.display()))
            }
            None => Ok(bundled::table(sex, purpose)?),
        }
    }

    fn coefficient_set(&self) -> Result<CoefficientSet64> {
        let from_dir = self
            .data_dir
            .as_ref()
            .map(|d| d.join("coefficients.json"))
            .filter(|p| p.is_file());
        match self.coefficients.clone().or(from_dir) {
            Some(p) => {
                let text =
                    fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                CoefficientSet64::from_json(&text)
                    .with_context(|| format!("loading {}", p.display()))
            }
            None => Ok(bundled::coefficients()),
        }
    }

    /// Loads every input needed to estimate transition probabilities for `sex`.
    pub fn context(&self, sex: Sex) -> Result<Context64> {
        let path = self.life_table_path(sex)?;
        let file = fs::File::open(&path).with_context(|| format!("opening {}", path.display()))?;
        let life =
            LifeTable64::load(file, sex).with_context(|| format!("loading {}", path.display()))?;
        Ok(Context64::new(
            life,
            self.rate_table(sex, RatePurpose::Incidence)?,
            self.rate_table(sex, RatePurpose::CancerMortality)?,
            self.rate_table(sex, RatePurpose::MetastasisShare)?,
            self.coefficient_set()?,
        )?)
    }

    /// Contract from the referenced JSON file. Sex, entry age and term from
    /// the command line or config replace those in the file and may be
    /// omitted there.
    pub fn contract(&self) -> Result<Contract64> {
        let path = self
            .contract
            .as_ref()
            .ok_or_else(|| anyhow!("a contract file is required (\"contract\" in the config)"))?;
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut value: serde_json::Value =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| anyhow!("contract {} is not a JSON object", path.display()))?;
        if let Some(s) = self.sex {
            obj.insert("sex".into(), serde_json::to_value(s)?);
        }
        if let Some(x) = self.entry_age {
            obj.insert("entry_age".into(), x.into());
        }
        if let Some(n) = self.term {
            obj.insert("term".into(), n.into());
        }
        let spec = Contract64::from_json(&value.to_string())
            .with_context(|| format!("contract {}", path.display()))?;
        if spec.entry_age < MIN_AGE || spec.entry_age + spec.term > MAX_AGE {
            bail!(
                "contract ages {}..{} outside {MIN_AGE}..={MAX_AGE}",
                spec.entry_age,
                spec.entry_age + spec.term
            );
        }
        Ok(spec)
    }
}
