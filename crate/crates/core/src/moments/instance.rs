//! Instance specifications and their JSON form.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Concrete,
    Generic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum KernelSpec {
    /// `S_ij = sign(j − i)`.
    Sign,
    Matrix { matrix: Vec<Vec<Rational>> },
    /// Seeded skew matrix with entries in `{−3..3} ∖ {0}`.
    Random { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nodes: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub w1: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub w2: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelSpec>,
    pub bounds: [u32; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InstanceSpec {
    pub fn generic(bounds: [u32; 2]) -> Self {
        InstanceSpec { mode: Mode::Generic, nodes: vec![], w1: vec![], w2: vec![], kernel: None, bounds, seed: None }
    }

    pub fn concrete(nodes: Vec<Rational>, w1: Vec<Rational>, w2: Vec<Rational>, kernel: KernelSpec, bounds: [u32; 2]) -> Self {
        InstanceSpec { mode: Mode::Concrete, nodes, w1, w2, kernel: Some(kernel), bounds, seed: None }
    }

    /// Random concrete instance: `n` distinct nodes, nonzero weights, random skew kernel.
    pub fn random_concrete(n: usize, seed: u64, bounds: [u32; 2]) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pool: Vec<Rational> = (-12..=12).map(|k| Rational::new(k, 2)).collect();
        pool.shuffle(&mut rng);
        let nodes: Vec<Rational> = pool.into_iter().take(n).collect();
        let mut weight = || -> Vec<Rational> {
            (0..n)
                .map(|_| {
                    let mut k = 0;
                    while k == 0 {
                        k = rng.gen_range(-4i64..=4);
                    }
                    Rational::new(k, rng.gen_range(1i64..=3))
                })
                .collect()
        };
        let w1 = weight();
        let w2 = weight();
        let ks = rng.gen::<u64>();
        let mut spec = Self::concrete(nodes, w1, w2, KernelSpec::Random { seed: ks }, bounds);
        spec.seed = Some(seed);
        spec
    }

    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode == Mode::Generic {
            return Ok(());
        }
        let n = self.nodes.len();
        if n < 2 {
            return Err(Error::InvalidSpec("concrete instance needs at least two nodes".into()));
        }
        if self.w1.len() != n || self.w2.len() != n {
            return Err(Error::InvalidSpec("weight lengths must match node count".into()));
        }
        self.kernel_matrix().map(|_| ())
    }

    /// The kernel as an explicit skew matrix over the nodes.
    pub fn kernel_matrix(&self) -> Result<Vec<Vec<Rational>>> {
        let n = self.nodes.len();
        let kernel = self.kernel.as_ref().ok_or_else(|| Error::InvalidSpec("concrete instance needs a kernel".into()))?;
        match kernel {
            KernelSpec::Sign => Ok(sign_kernel(n)),
            KernelSpec::Random { seed } => Ok(random_kernel(n, *seed)),
            KernelSpec::Matrix { matrix } => {
                if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
                    return Err(Error::InvalidSpec("kernel matrix must be n×n".into()));
                }
                for i in 0..n {
                    for j in 0..n {
                        if matrix[i][j] != -&matrix[j][i] {
                            return Err(Error::InvalidSpec(format!("kernel not skew at ({i},{j})")));
                        }
                    }
                }
                Ok(matrix.clone())
            }
        }
    }
}

pub fn sign_kernel(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| (0..n).map(|j| Rational::from_int((j as i64 - i as i64).signum())).collect())
        .collect()
}

pub fn random_kernel(n: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let mut k = 0;
            while k == 0 {
                k = rng.gen_range(-3i64..=3);
            }
            s[i][j] = Rational::from_int(k);
            s[j][i] = Rational::from_int(-k);
        }
    }
    s
}

/// Template accepted by `gen-instance`; missing concrete data is drawn from the seed.
#[derive(Debug, Clone, Deserialize)]
pub struct InstanceTemplate {
    pub mode: Mode,
    #[serde(default)]
    pub nodes: Option<Vec<Rational>>,
    #[serde(default)]
    pub node_count: Option<usize>,
    #[serde(default)]
    pub w1: Option<Vec<Rational>>,
    #[serde(default)]
    pub w2: Option<Vec<Rational>>,
    /// `"sign"`, `"random"` or `"matrix"` (the latter with `matrix`).
    #[serde(default)]
    pub kernel: Option<String>,
    #[serde(default)]
    pub matrix: Option<Vec<Vec<Rational>>>,
    pub bounds: [u32; 2],
}

/// Deterministic instance for `(template, seed)`; kernels are written out explicitly.
pub fn gen_instance(template: &InstanceTemplate, seed: u64) -> Result<InstanceSpec> {
    if template.mode == Mode::Generic {
        return Ok(InstanceSpec::generic(template.bounds));
    }
    let n = match (&template.nodes, template.node_count) {
        (Some(nodes), _) => nodes.len(),
        (None, Some(c)) => c,
        (None, None) => return Err(Error::Config("template needs nodes or node_count".into())),
    };
    if n < 2 {
        return Err(Error::Config("need at least two nodes".into()));
    }
    let base = InstanceSpec::random_concrete(n, seed, template.bounds);
    let nodes = template.nodes.clone().unwrap_or(base.nodes);
    let w1 = template.w1.clone().unwrap_or(base.w1);
    let w2 = template.w2.clone().unwrap_or(base.w2);
    let matrix = match template.kernel.as_deref().unwrap_or("random") {
        "sign" => sign_kernel(n),
        "random" => random_kernel(n, seed),
        "matrix" => template.matrix.clone().ok_or_else(|| Error::Config("kernel=matrix needs a matrix".into()))?,
        other => return Err(Error::Config(format!("unknown kernel type {other:?}"))),
    };
    let mut spec = InstanceSpec::concrete(nodes, w1, w2, KernelSpec::Matrix { matrix }, template.bounds);
    spec.seed = Some(seed);
    spec.validate().map_err(|e| Error::Config(e.to_string()))?;
    Ok(spec)
}
