//! File formats: Hamiltonian text, graph JSON, and task-spec JSON.
//!
//! Hamiltonian files are line-oriented: `<coeff> <token> <token>…` where a
//! token is `I` (identity, alone on its line) or a Pauli letter followed by
//! a qubit index (`X0`, `Y3`, `Z12`). `#` starts a comment; blank lines are
//! ignored. The register size is inferred as 1 + the largest index.
//!
//! Graphs serialize as `{"vertices": n, "edges": [[i, j, w], …]}`.
//!
//! Task specs are JSON objects selecting a family via `"kind"` plus the
//! family's parameters and seed; see [`TaskSpec`].

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::circuits::{
    balanced_radius, build_qaoa_maxcut, build_qaoa_sk, build_random_pqc, build_reupload,
    build_vqe_hea, Graph, Task,
};
use crate::error::{Error, Result};
use crate::sim::{Pauli, PauliSum, PauliTerm};

/// Parse Hamiltonian text; `origin` names the source in errors.
pub fn parse_hamiltonian(text: &str, origin: &str) -> Result<(PauliSum, usize)> {
    let mut terms = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let coeff_str = tokens.next().expect("non-empty line has a first token");
        let coeff: f64 = coeff_str.parse().map_err(|_| Error::ParseLine {
            path: origin.to_string(),
            line,
            msg: format!("expected a coefficient, got {coeff_str:?}"),
        })?;
        let ops_tokens: Vec<&str> = tokens.collect();
        if ops_tokens.is_empty() {
            return Err(Error::ParseLine {
                path: origin.to_string(),
                line,
                msg: "missing operator tokens after the coefficient".into(),
            });
        }
        if ops_tokens.iter().any(|&t| t == "I") {
            if ops_tokens.len() != 1 {
                return Err(Error::ParseLine {
                    path: origin.to_string(),
                    line,
                    msg: "identity token I must stand alone".into(),
                });
            }
            terms.push(PauliTerm::identity(coeff));
            continue;
        }
        let mut ops = Vec::with_capacity(ops_tokens.len());
        for token in ops_tokens {
            let mut chars = token.chars();
            let pauli = match chars.next() {
                Some('X') => Pauli::X,
                Some('Y') => Pauli::Y,
                Some('Z') => Pauli::Z,
                _ => {
                    return Err(Error::ParseLine {
                        path: origin.to_string(),
                        line,
                        msg: format!("unknown operator token {token:?}"),
                    })
                }
            };
            let idx: usize = chars.as_str().parse().map_err(|_| Error::ParseLine {
                path: origin.to_string(),
                line,
                msg: format!("bad qubit index in token {token:?}"),
            })?;
            ops.push((idx, pauli));
        }
        let term = PauliTerm::new(coeff, ops).map_err(|e| Error::ParseLine {
            path: origin.to_string(),
            line,
            msg: e.to_string(),
        })?;
        terms.push(term);
    }
    if terms.is_empty() {
        return Err(Error::ParseLine {
            path: origin.to_string(),
            line: 0,
            msg: "no terms found".into(),
        });
    }
    let sum = PauliSum::new(terms);
    let n_qubits = sum.min_qubits();
    Ok((sum, n_qubits))
}

/// Read and parse a Hamiltonian file.
pub fn load_hamiltonian(path: impl AsRef<Path>) -> Result<(PauliSum, usize)> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    parse_hamiltonian(&text, &path.display().to_string())
}

/// Write a graph as JSON.
pub fn save_graph(graph: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(graph)
        .map_err(|e| Error::json(path.display().to_string(), e))?;
    std::fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Read and validate a graph JSON file.
pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let graph: Graph =
        serde_json::from_str(&text).map_err(|e| Error::json(path.display().to_string(), e))?;
    graph.validate()?;
    Ok(graph)
}

/// Erdős–Rényi parameters for inline graph generation in task specs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErParams {
    pub vertices: usize,
    pub edge_prob: f64,
}

fn default_n_train() -> usize {
    200
}

fn default_n_test() -> usize {
    4000
}

/// Serializable task selector: family, parameters, seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TaskSpec {
    RandomPqc {
        n_qubits: usize,
        layers: usize,
        #[serde(default)]
        seed: u64,
    },
    VqeHea {
        /// Path to a Hamiltonian file, resolved against the spec location.
        hamiltonian: String,
        layers: usize,
    },
    QaoaMaxcut {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        graph: Option<Graph>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        graph_file: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        er: Option<ErParams>,
        p_layers: usize,
        #[serde(default)]
        seed: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    QaoaSk {
        n_spins: usize,
        p_layers: usize,
        #[serde(default)]
        seed: u64,
    },
    Reupload {
        layers: usize,
        #[serde(default = "default_n_train")]
        n_train: usize,
        #[serde(default = "default_n_test")]
        n_test: usize,
        /// Circle radius; omitted means the class-balanced default.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radius: Option<f64>,
        #[serde(default)]
        seed: u64,
    },
}

fn sanitize_label(raw: &str) -> String {
    let cleaned: String = raw
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' { c } else { '-' })
        .collect();
    if cleaned.is_empty() {
        "unnamed".into()
    } else {
        cleaned
    }
}

impl TaskSpec {
    /// Instantiate the task; relative paths resolve against `base_dir`.
    pub fn build(&self, base_dir: &Path) -> Result<Task> {
        match self {
            TaskSpec::RandomPqc {
                n_qubits,
                layers,
                seed,
            } => build_random_pqc(*n_qubits, *layers, *seed),
            TaskSpec::VqeHea {
                hamiltonian,
                layers,
            } => {
                let raw = Path::new(hamiltonian);
                let path: PathBuf = if raw.is_absolute() {
                    raw.to_path_buf()
                } else {
                    base_dir.join(raw)
                };
                let (sum, _) = load_hamiltonian(&path)?;
                let stem = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().to_string())
                    .unwrap_or_else(|| "hamiltonian".into());
                build_vqe_hea(&sum, *layers, &sanitize_label(&stem))
            }
            TaskSpec::QaoaMaxcut {
                graph,
                graph_file,
                er,
                p_layers,
                seed,
                label,
            } => {
                let sources =
                    usize::from(graph.is_some()) + usize::from(graph_file.is_some()) + usize::from(er.is_some());
                if sources != 1 {
                    return Err(Error::InvalidTask(
                        "qaoa_maxcut needs exactly one of graph, graph_file, er".into(),
                    ));
                }
                let (g, auto_label) = if let Some(g) = graph {
                    g.validate()?;
                    (g.clone(), format!("v{}e{}", g.n_vertices, g.edges.len()))
                } else if let Some(file) = graph_file {
                    let raw = Path::new(file);
                    let path: PathBuf = if raw.is_absolute() {
                        raw.to_path_buf()
                    } else {
                        base_dir.join(raw)
                    };
                    let g = load_graph(&path)?;
                    let stem = path
                        .file_stem()
                        .map(|s| s.to_string_lossy().to_string())
                        .unwrap_or_else(|| "graph".into());
                    (g, sanitize_label(&stem))
                } else {
                    let p = er.as_ref().expect("checked above");
                    let g = crate::circuits::gen_er_graph(p.vertices, p.edge_prob, *seed)?;
                    (g, format!("er{}_{:.2}_s{}", p.vertices, p.edge_prob, seed))
                };
                let label = label.clone().map(|l| sanitize_label(&l)).unwrap_or(auto_label);
                build_qaoa_maxcut(&g, *p_layers, &label)
            }
            TaskSpec::QaoaSk {
                n_spins,
                p_layers,
                seed,
            } => build_qaoa_sk(*n_spins, *p_layers, *seed),
            TaskSpec::Reupload {
                layers,
                n_train,
                n_test,
                radius,
                seed,
            } => build_reupload(
                *layers,
                *n_train,
                *n_test,
                radius.unwrap_or_else(balanced_radius),
                *seed,
            ),
        }
    }
}

/// Read a task spec file and build its task; relative paths inside the spec
/// resolve against the spec file's directory.
pub fn load_task_spec(path: impl AsRef<Path>) -> Result<Task> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let spec: TaskSpec =
        serde_json::from_str(&text).map_err(|e| Error::json(path.display().to_string(), e))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    spec.build(base)
}
