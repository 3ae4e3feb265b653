use std::path::{Path, PathBuf};

use super::{load_scenario, parse_scenario, ScenarioSpec};
use crate::error::ScenarioError;

/// Scenario files shipped inside the binary, as `(file name, contents)`.
pub const BUILTIN: [(&str, &str); 10] = [
    (
        "fig01_friction_ipi.toml",
        include_str!("../../scenarios/fig01_friction_ipi.toml"),
    ),
    (
        "fig03_harmonic.toml",
        include_str!("../../scenarios/fig03_harmonic.toml"),
    ),
    (
        "mass_spring_nominal.toml",
        include_str!("../../scenarios/mass_spring_nominal.toml"),
    ),
    (
        "mass_spring_ipi_noise.toml",
        include_str!("../../scenarios/mass_spring_ipi_noise.toml"),
    ),
    ("vehicle_ipi.toml", include_str!("../../scenarios/vehicle_ipi.toml")),
    ("vehicle_delay.toml", include_str!("../../scenarios/vehicle_delay.toml")),
    ("heatex_ipi.toml", include_str!("../../scenarios/heatex_ipi.toml")),
    ("heatex_pid.toml", include_str!("../../scenarios/heatex_pid.toml")),
    (
        "heatex_fouling_ipi.toml",
        include_str!("../../scenarios/heatex_fouling_ipi.toml"),
    ),
    (
        "heatex_fouling_pid.toml",
        include_str!("../../scenarios/heatex_fouling_pid.toml"),
    ),
];

#[derive(Debug, Clone, PartialEq)]
pub enum Origin {
    Builtin,
    File(PathBuf),
}

#[derive(Debug, Clone)]
pub struct RegistryEntry {
    pub spec: ScenarioSpec,
    pub origin: Origin,
}

/// Named scenarios: the built-in set plus any `*.toml` from a custom
/// directory. Names must be unique across both.
#[derive(Debug, Clone)]
pub struct Registry {
    entries: Vec<RegistryEntry>,
}

impl Registry {
    pub fn builtin() -> Result<Self, ScenarioError> {
        let mut reg = Self { entries: Vec::new() };
        for (file, text) in BUILTIN {
            let spec = parse_scenario(text, &format!("<builtin>/{file}"))?;
            reg.insert(spec, Origin::Builtin)?;
        }
        Ok(reg)
    }

    /// Built-in scenarios plus every `*.toml` directly inside `dir`, in
    /// file-name order.
    pub fn with_custom_dir(dir: impl AsRef<Path>) -> Result<Self, ScenarioError> {
        let dir = dir.as_ref();
        let mut reg = Self::builtin()?;
        let io_err = |source| ScenarioError::Io {
            path: dir.display().to_string(),
            source,
        };
        let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(io_err)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "toml"))
            .collect();
        files.sort();
        for path in files {
            let spec = load_scenario(&path)?;
            reg.insert(spec, Origin::File(path))?;
        }
        Ok(reg)
    }

    fn insert(&mut self, spec: ScenarioSpec, origin: Origin) -> Result<(), ScenarioError> {
        if self.get(&spec.name).is_some() {
            let path = match &origin {
                Origin::Builtin => "<builtin>".to_string(),
                Origin::File(p) => p.display().to_string(),
            };
            return Err(ScenarioError::Duplicate { name: spec.name, path });
        }
        self.entries.push(RegistryEntry { spec, origin });
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&RegistryEntry> {
        self.entries.iter().find(|e| e.spec.name == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.spec.name.as_str()).collect()
    }

    pub fn entries(&self) -> &[RegistryEntry] {
        &self.entries
    }

    pub fn specs(&self) -> Vec<ScenarioSpec> {
        self.entries.iter().map(|e| e.spec.clone()).collect()
    }

    /// A registered name, or else a path to a scenario file.
    pub fn resolve(&self, name_or_path: &str) -> Result<ScenarioSpec, ScenarioError> {
        if let Some(e) = self.get(name_or_path) {
            return Ok(e.spec.clone());
        }
        let path = Path::new(name_or_path);
        if path.is_file() {
            return load_scenario(path);
        }
        Err(ScenarioError::Unknown(name_or_path.to_string()))
    }

    /// One line per scenario: name, plant, controller, description.
    pub fn listing(&self) -> String {
        let width = self.entries.iter().map(|e| e.spec.name.len()).max().unwrap_or(4).max(4);
        let mut out = format!(
            "{:<width$}  {:<16}  {:<14}  description\n",
            "name", "plant", "controller"
        );
        for e in &self.entries {
            let s = &e.spec;
            out.push_str(&format!(
                "{:<width$}  {:<16}  {:<14}  {}\n",
                s.name,
                s.plant.name(),
                s.controller.name(),
                s.description
            ));
        }
        out
    }
}
