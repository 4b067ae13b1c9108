use std::collections::BTreeMap;
use std::sync::Arc;

use super::urabe::{urabe_build, UrabeRegistry, DEFAULT_GRID_STEP};
use super::{ExamplePotential, Potential};
use crate::error::{Error, Result};

type PotentialCtor = Arc<dyn Fn() -> Result<Arc<dyn Potential>> + Send + Sync>;

/// Potentials selectable by name: `example` plus `urabe:<shape>` for every
/// shape in the Urabe registry.
#[derive(Clone)]
pub struct PotentialRegistry {
    entries: BTreeMap<String, PotentialCtor>,
}

impl PotentialRegistry {
    pub fn empty() -> Self {
        PotentialRegistry {
            entries: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register("example", || Ok(Arc::new(ExamplePotential)));
        let shapes = UrabeRegistry::builtin();
        for name in shapes.names() {
            let shapes = shapes.clone();
            let name = name.to_string();
            reg.register(&format!("urabe:{name}"), move || {
                let func = shapes.get(&name)?;
                Ok(Arc::new(urabe_build(&func, DEFAULT_GRID_STEP)?))
            });
        }
        reg
    }

    pub fn register<F>(&mut self, name: &str, ctor: F)
    where
        F: Fn() -> Result<Arc<dyn Potential>> + Send + Sync + 'static,
    {
        self.entries.insert(name.to_string(), Arc::new(ctor));
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Potential>> {
        match self.entries.get(name) {
            Some(ctor) => ctor(),
            None => Err(Error::UnknownName {
                kind: "potential",
                name: name.to_string(),
                known: self.names().join(", "),
            }),
        }
    }
}

impl Default for PotentialRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names() {
        let reg = PotentialRegistry::builtin();
        assert_eq!(reg.names(), vec!["example", "urabe:linear", "urabe:sine"]);
        let p = reg.get("urabe:sine").unwrap();
        assert_eq!(p.name(), "urabe:sine");
        assert!(reg.get("quartic").is_err());
    }
}
