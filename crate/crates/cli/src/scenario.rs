//! TOML scenario files.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// `Fp:<p>` or `QQ`.
    pub field: String,
    pub curve: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tasks")]
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub ks: Vec<KsSpec>,
    #[serde(default)]
    pub phi: PhiSpec,
    /// Points supplied explicitly, mainly for curves over `QQ`.
    #[serde(default)]
    pub points: Vec<[Elem; 3]>,
    /// Rank queried by the stratify task.
    pub stratum_query: Option<usize>,
    #[serde(default)]
    pub survey: SurveyConfig,
    #[serde(default)]
    pub search: SearchConfig,
    pub output: Option<String>,
}

fn default_tasks() -> Vec<Task> {
    vec![Task::Info]
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Info,
    Stratify,
    Filtration,
    Sl2,
    Quadrics,
    Gpp,
    Survey,
    Search,
    Selftest,
}

impl Task {
    pub fn as_str(&self) -> &'static str {
        match self {
            Task::Info => "info",
            Task::Stratify => "stratify",
            Task::Filtration => "filtration",
            Task::Sl2 => "sl2",
            Task::Quadrics => "quadrics",
            Task::Gpp => "gpp",
            Task::Survey => "survey",
            Task::Search => "search",
            Task::Selftest => "selftest",
        }
    }

    /// Tasks run once per Kodaira-Spencer class.
    pub fn per_class(&self) -> bool {
        matches!(self, Task::Stratify | Task::Filtration | Task::Sl2 | Task::Quadrics | Task::Gpp)
    }
}

/// A field element written as an integer or a string such as `"-3/4"`.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(untagged)]
pub enum Elem {
    Int(i64),
    Text(String),
}

impl Elem {
    pub fn as_text(&self) -> String {
        match self {
            Elem::Int(n) => n.to_string(),
            Elem::Text(s) => s.clone(),
        }
    }
}

/// How a Kodaira-Spencer class is built.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KsSpec {
    /// The Schiffer class at a point (explicit index into `points`, or random).
    Schiffer { label: Option<String>, point: Option<usize> },
    /// `Σ c_i schiffer(p_i)` at `count` random points.
    Secant { label: Option<String>, count: usize, coeffs: Option<Vec<Elem>> },
    /// Laurent tails of the given orders at random points, random coefficients.
    Tails { label: Option<String>, orders: Vec<usize> },
    /// A random class with `U ⊆ W_ξ` for a random `U` of dimension `u_dim`.
    Annihilator { label: Option<String>, u_dim: usize },
    /// A random class with `U ⊆ W_ξ` for `U` spanned by canonical forms in
    /// `x, y, z` and the symbols `a, b, c, l, m`, which stand for seeded random lines.
    AnnihilatorOf { label: Option<String>, forms: Vec<String> },
    /// `annihilator_of` with the forms of a named template (see `templates`).
    Template { label: Option<String>, name: String },
    /// A uniformly random functional.
    Random { label: Option<String> },
    /// An explicit functional on the bicanonical basis.
    Functional { label: Option<String>, values: Vec<Elem> },
}

impl KsSpec {
    pub fn label(&self, index: usize) -> String {
        let (label, kind) = match self {
            KsSpec::Schiffer { label, .. } => (label, "schiffer"),
            KsSpec::Secant { label, .. } => (label, "secant"),
            KsSpec::Tails { label, .. } => (label, "tails"),
            KsSpec::Annihilator { label, .. } => (label, "annihilator"),
            KsSpec::AnnihilatorOf { label, .. } => (label, "annihilator_of"),
            KsSpec::Template { label, .. } => (label, "template"),
            KsSpec::Random { label } => (label, "random"),
            KsSpec::Functional { label, .. } => (label, "functional"),
        };
        if let (None, KsSpec::Template { name, .. }) = (label, self) {
            return format!("{name}#{index}");
        }
        label.clone().unwrap_or_else(|| format!("{kind}#{index}"))
    }
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhiSpec {
    /// A random vector of `W_ξ`.
    #[default]
    Random,
    /// The `index`-th vector of the RREF basis of `W_ξ`.
    BasisIndex { index: usize },
    /// Explicit coordinates in the canonical basis.
    Vector { values: Vec<Elem> },
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SurveyConfig {
    pub per_rank_samples: usize,
    /// Secant classes of `1..=max_secant` points.
    pub max_secant: usize,
    /// Single-point tails of order `2..=max_tail_order`.
    pub max_tail_order: usize,
    /// Annihilator classes with `dim U` in `2..=max_u_dim`.
    pub max_u_dim: usize,
    /// Annihilator templates sampled in addition.
    #[serde(default)]
    pub templates: Vec<String>,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        SurveyConfig { per_rank_samples: 4, max_secant: 3, max_tail_order: 3, max_u_dim: 2, templates: TEMPLATES.iter().map(|t| t.to_string()).collect() }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub budget: usize,
    /// `φ` samples per class.
    pub phi_samples: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: 16, phi_samples: 4 }
    }
}

/// Names accepted by [`template_forms`].
pub const TEMPLATES: [&str; 5] = ["scroll", "partial_scroll", "scroll_power", "two_scrolls", "line_ideal"];

/// Canonical forms of degree `e + 1` spanning `U` for a named template;
/// `a, b, c, l, m` denote random lines.
pub fn template_forms(name: &str, e: u32) -> Option<Vec<String>> {
    let mono = |parts: &[(&str, u32)]| {
        let s: Vec<String> = parts.iter().filter(|(_, n)| *n > 0).map(|(v, n)| format!("{v}^{n}")).collect();
        if s.is_empty() { "1".to_string() } else { s.join("*") }
    };
    let scroll = |line: &str| (0..=e).map(|i| mono(&[(line, 1), ("a", i), ("b", e - i)])).collect::<Vec<_>>();
    let forms = match name {
        "scroll" => scroll("l"),
        "partial_scroll" => (0..e).map(|i| mono(&[("l", 1), ("a", i), ("b", e - i)])).collect(),
        "scroll_power" => {
            let mut v = scroll("l");
            v.push(mono(&[("c", e + 1)]));
            v
        }
        "two_scrolls" => {
            let mut v = scroll("l");
            v.extend(scroll("m"));
            v
        }
        "line_ideal" => {
            let mut v = Vec::new();
            for i in 0..e {
                for j in 0..e - i {
                    v.push(mono(&[("l", 1), ("a", i + 1), ("b", j), ("c", e - 1 - i - j)]));
                    v.push(mono(&[("l", 1), ("b", i + 1), ("a", j), ("c", e - 1 - i - j)]));
                }
            }
            v
        }
        _ => return None,
    };
    Some(forms)
}

impl Scenario {
    pub fn parse(src: &str) -> Result<Self, String> {
        toml::from_str(src).map_err(|e| e.to_string())
    }
}
