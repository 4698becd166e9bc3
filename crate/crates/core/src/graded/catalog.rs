use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::GradedError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_degree(degree: i64) -> Parity {
        if degree.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A named polynomial or exterior generator with its bigrading.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    /// ASCII identifier, used in serialized output and input files.
    pub name: String,
    /// Human-readable label (may contain Unicode, e.g. `λ₁`).
    pub label: String,
    pub degree: i64,
    pub weight: i64,
    pub parity: Parity,
}

impl Generator {
    pub fn new(name: &str, degree: i64, weight: i64) -> Generator {
        Generator {
            name: name.to_string(),
            label: name.to_string(),
            degree,
            weight,
            parity: Parity::of_degree(degree),
        }
    }

    pub fn with_label(mut self, label: &str) -> Generator {
        self.label = label.to_string();
        self
    }

    pub fn is_odd(&self) -> bool {
        self.parity == Parity::Odd
    }
}

/// An ordered list of generators. The order is the canonical order used for
/// monomial normal forms and Koszul signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    gens: Vec<Generator>,
    index: HashMap<String, usize>,
}

impl Catalog {
    pub fn new(gens: Vec<Generator>) -> Result<Catalog, GradedError> {
        let mut index = HashMap::new();
        for (i, g) in gens.iter().enumerate() {
            if g.parity != Parity::of_degree(g.degree) {
                return Err(GradedError::ParityMismatch(g.name.clone()));
            }
            if index.insert(g.name.clone(), i).is_some() {
                return Err(GradedError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(Catalog { gens, index })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn get(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize, GradedError> {
        self.index_of(name)
            .ok_or_else(|| GradedError::UnknownGenerator(name.to_string()))
    }

    /// The generator catalog for the Brown–Peterson cobar computations at `p`,
    /// with `v_1..v_depth` and `t_1..t_depth`.
    ///
    /// Degrees are internal degrees; weights are cobar (Adams) weights, so that
    /// `t·σ²t₁ = t₁` and `t·σ²v₂ = v₂` are homogeneous. The formal variables `x`,
    /// `y`, `z` carry the grading of `t`.
    pub fn brown_peterson(p: u64, depth: usize) -> Arc<Catalog> {
        let p = p as i64;
        let mut gens = vec![
            Generator::new("t", -2, 0),
            Generator::new("x", -2, 0),
            Generator::new("y", -2, 0),
            Generator::new("z", -2, 0),
        ];
        let mut pk = 1i64;
        for i in 1..=depth {
            pk *= p;
            gens.push(Generator::new(&format!("v{i}"), 2 * pk - 2, 0));
        }
        let mut pk = 1i64;
        for i in 1..=depth {
            pk *= p;
            gens.push(Generator::new(&format!("t{i}"), 2 * pk - 2, 1));
        }
        gens.push(Generator::new("sigma2t1", 2 * p, 1).with_label("σ²t1"));
        gens.push(Generator::new("sigma2v2", 2 * p * p, 0).with_label("σ²v2"));
        Arc::new(Catalog::new(gens).expect("canonical catalog is well formed"))
    }

    /// Generators of the mod (p, v₁) topological Hochschild homology of the Adams
    /// summand together with the Bockstein variable `t`, graded by
    /// (degree, t-adic filtration).
    pub fn thh(p: u64) -> Arc<Catalog> {
        let p = p as i64;
        let gens = vec![
            Generator::new("t", -2, 1),
            Generator::new("lambda1", 2 * p - 1, 0).with_label("λ₁"),
            Generator::new("lambda2", 2 * p * p - 1, 0).with_label("λ₂"),
            Generator::new("mu", 2 * p * p, 0).with_label("μ"),
        ];
        Arc::new(Catalog::new(gens).expect("canonical catalog is well formed"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_degrees() {
        let c = Catalog::brown_peterson(3, 2);
        let deg = |n: &str| c.get(c.index_of(n).unwrap()).degree;
        assert_eq!(deg("t"), -2);
        assert_eq!(deg("t1"), 4);
        assert_eq!(deg("v2"), 16);
        assert_eq!(deg("sigma2t1"), 6);
        assert_eq!(deg("sigma2v2"), 18);
        // t·σ²v₂ = v₂ and t·σ²t₁ = t₁ are homogeneous
        assert_eq!(deg("t") + deg("sigma2v2"), deg("v2"));
        assert_eq!(deg("t") + deg("sigma2t1"), deg("t1"));

        let h = Catalog::thh(5);
        let g = |n: &str| h.get(h.index_of(n).unwrap()).clone();
        assert_eq!(g("lambda1").degree, 9);
        assert!(g("lambda1").is_odd());
        assert_eq!(g("lambda2").degree, 49);
        assert_eq!(g("mu").degree, 50);
    }

    #[test]
    fn rejects_bad_catalogs() {
        let mut g = Generator::new("a", 3, 0);
        g.parity = Parity::Even;
        assert!(matches!(
            Catalog::new(vec![g]),
            Err(GradedError::ParityMismatch(_))
        ));
        let dup = vec![Generator::new("a", 2, 0), Generator::new("a", 4, 0)];
        assert!(matches!(
            Catalog::new(dup),
            Err(GradedError::DuplicateGenerator(_))
        ));
    }
}
