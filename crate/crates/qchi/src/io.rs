//! File formats and fixtures: versioned JSON schemas for channels,
//! ensembles, Hamiltonians, and Gaussian channel specifications, preset
//! builders for common objects, and deterministic report serialization.
//!
//! All schemas carry a `"schema": 1` field. Complex matrices are encoded as
//! arrays of rows whose entries are `[re, im]` pairs; real matrices as
//! arrays of rows of numbers. Reports are emitted with stable field order
//! (struct declaration order), so identical inputs produce byte-identical
//! output.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::channels::KrausChannel;
use crate::ensembles::Ensemble;
use crate::error::{Error, Result};
use crate::gaussian::{GaussianChannelSpec, RMatrix};
use crate::numerics::matrix::{CMatrix, CVector, C64};
use crate::numerics::states::{DensityMatrix, Hamiltonian, PureState};
use crate::sampling::{random_channel, random_ensemble, rng_for};

/// Version tag expected in every input file.
pub const SCHEMA_VERSION: u32 = 1;

fn check_schema(got: u32) -> Result<()> {
    if got != SCHEMA_VERSION {
        return Err(Error::BadSchema { got, supported: SCHEMA_VERSION });
    }
    Ok(())
}

/// Complex matrix as rows of `[re, im]` entries.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;
/// Complex vector as `[re, im]` entries.
pub type VectorJson = Vec<[f64; 2]>;

/// Decode a complex matrix, insisting on rectangular shape.
pub fn matrix_from_json(rows: &MatrixJson) -> Result<CMatrix> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err(Error::BadInput { detail: "matrix must be nonempty".into() });
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::BadInput { detail: "matrix rows have unequal lengths".into() });
    }
    Ok(CMatrix::from_fn(rows.len(), cols, |i, j| {
        C64::new(rows[i][j][0], rows[i][j][1])
    }))
}

/// Encode a complex matrix.
pub fn matrix_to_json(m: &CMatrix) -> MatrixJson {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn vector_from_json(entries: &VectorJson) -> Result<CVector> {
    if entries.is_empty() {
        return Err(Error::BadInput { detail: "vector must be nonempty".into() });
    }
    Ok(CVector::from_fn(entries.len(), |i, _| {
        C64::new(entries[i][0], entries[i][1])
    }))
}

fn real_matrix_from_json(rows: &[Vec<f64>]) -> Result<RMatrix> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err(Error::BadInput { detail: "matrix must be nonempty".into() });
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::BadInput { detail: "matrix rows have unequal lengths".into() });
    }
    Ok(RMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

fn real_matrix_to_json(m: &RMatrix) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// Schemas.
// ---------------------------------------------------------------------------

/// Channel file: a Kraus family with declared dimensions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelFile {
    pub schema: u32,
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<MatrixJson>,
}

impl ChannelFile {
    pub fn to_channel(&self) -> Result<KrausChannel> {
        check_schema(self.schema)?;
        let family = self
            .kraus
            .iter()
            .map(matrix_from_json)
            .collect::<Result<Vec<_>>>()?;
        for k in &family {
            if k.nrows() != self.dim_out || k.ncols() != self.dim_in {
                return Err(Error::BadInput {
                    detail: format!(
                        "Kraus operator is {}×{}, declared dims say {}×{}",
                        k.nrows(),
                        k.ncols(),
                        self.dim_out,
                        self.dim_in
                    ),
                });
            }
        }
        KrausChannel::new(family)
    }

    pub fn from_channel(phi: &KrausChannel) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            dim_in: phi.dim_in(),
            dim_out: phi.dim_out(),
            kraus: phi.kraus().iter().map(matrix_to_json).collect(),
        }
    }
}

/// One ensemble member: a weight with either a density matrix or a pure
/// state vector (exactly one of the two).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MemberFile {
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pure: Option<VectorJson>,
}

/// Ensemble file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleFile {
    pub schema: u32,
    pub members: Vec<MemberFile>,
}

impl EnsembleFile {
    pub fn to_ensemble(&self) -> Result<Ensemble> {
        check_schema(self.schema)?;
        let mut members = Vec::with_capacity(self.members.len());
        for m in &self.members {
            let state = match (&m.state, &m.pure) {
                (Some(mat), None) => DensityMatrix::new(matrix_from_json(mat)?)?,
                (None, Some(vec)) => PureState::normalized(vector_from_json(vec)?)?.projector(),
                _ => {
                    return Err(Error::BadInput {
                        detail: "each member needs exactly one of `state` or `pure`".into(),
                    })
                }
            };
            members.push((m.weight, state));
        }
        Ensemble::new(members)
    }

    pub fn from_ensemble(mu: &Ensemble) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            members: mu
                .iter()
                .map(|(weight, state)| MemberFile {
                    weight,
                    state: Some(matrix_to_json(state.matrix())),
                    pure: None,
                })
                .collect(),
        }
    }
}

/// Hamiltonian file: either a diagonal or a full Hermitian matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HamiltonianFile {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonal: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixJson>,
}

impl HamiltonianFile {
    pub fn to_hamiltonian(&self) -> Result<Hamiltonian> {
        check_schema(self.schema)?;
        match (&self.diagonal, &self.matrix) {
            (Some(d), None) => Hamiltonian::diagonal(d),
            (None, Some(m)) => Hamiltonian::new(matrix_from_json(m)?),
            _ => Err(Error::BadInput {
                detail: "provide exactly one of `diagonal` or `matrix`".into(),
            }),
        }
    }
}

/// Gaussian channel spec file; the symplectic forms are canonical and never
/// user-supplied.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussianFile {
    pub schema: u32,
    #[serde(rename = "s_A")]
    pub s_a: usize,
    #[serde(rename = "s_B")]
    pub s_b: usize,
    #[serde(rename = "K")]
    pub k: Vec<Vec<f64>>,
    pub alpha: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<Vec<f64>>,
}

impl GaussianFile {
    pub fn to_spec(&self) -> Result<GaussianChannelSpec> {
        check_schema(self.schema)?;
        GaussianChannelSpec::new(
            self.s_a,
            self.s_b,
            real_matrix_from_json(&self.k)?,
            real_matrix_from_json(&self.alpha)?,
            self.l.clone().unwrap_or_default(),
        )
    }

    pub fn from_spec(spec: &GaussianChannelSpec) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            s_a: spec.output_modes(),
            s_b: spec.input_modes(),
            k: real_matrix_to_json(spec.k()),
            alpha: real_matrix_to_json(spec.alpha()),
            l: if spec.displacement().is_empty() {
                None
            } else {
                Some(spec.displacement().to_vec())
            },
        }
    }
}

// ---------------------------------------------------------------------------
// Loading: files or presets.
// ---------------------------------------------------------------------------

/// Parse a JSON file into a schema type; parse errors carry the line and
/// column reported by the JSON parser.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn parse_fields<'a>(name: &str, arg: &'a str, min: usize, max: usize) -> Result<Vec<&'a str>> {
    let fields: Vec<&str> = arg.split(':').collect();
    if fields.len() < min || fields.len() > max {
        return Err(Error::BadInput {
            detail: format!("preset `{name}` takes {min}..={max} `:`-separated fields, got {arg}"),
        });
    }
    Ok(fields)
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| Error::BadInput {
        detail: format!("could not parse {what} from `{s}`"),
    })
}

/// Build a channel from a preset string. Supported presets:
/// `identity:D`, `dephasing:D`, `depolarizing:D:P`, `cq-orthogonal:K:B`
/// (K symbols mapped to mixed states on disjoint B-dimensional blocks), and
/// `random:DIN:DOUT:DENV:SEED`.
pub fn channel_preset(arg: &str) -> Result<KrausChannel> {
    let (name, rest) = arg.split_once(':').unwrap_or((arg, ""));
    match name {
        "identity" => KrausChannel::identity(parse_num(rest, "dimension")?),
        "dephasing" => KrausChannel::dephasing(parse_num(rest, "dimension")?),
        "depolarizing" => {
            let f = parse_fields(name, rest, 2, 2)?;
            KrausChannel::depolarizing(parse_num(f[0], "dimension")?, parse_num(f[1], "probability")?)
        }
        "cq-orthogonal" => {
            let f = parse_fields(name, rest, 2, 2)?;
            orthogonal_cq_channel(parse_num(f[0], "symbol count")?, parse_num(f[1], "block size")?)
        }
        "random" => {
            let f = parse_fields(name, rest, 4, 4)?;
            let mut rng = rng_for(parse_num(f[3], "seed")?);
            random_channel(
                &mut rng,
                parse_num(f[0], "input dimension")?,
                parse_num(f[1], "output dimension")?,
                parse_num(f[2], "environment dimension")?,
            )
        }
        _ => Err(Error::BadInput {
            detail: format!("unknown channel preset `{arg}`"),
        }),
    }
}

/// Classical-quantum channel with `symbols` inputs mapped to mixed states on
/// pairwise orthogonal `block` - dimensional subspaces (output dimension
/// symbols·block). Each block state is the normalized diagonal (1, 2, …,
/// block), making the outputs full rank on their blocks yet orthogonal to
/// each other.
pub fn orthogonal_cq_channel(symbols: usize, block: usize) -> Result<KrausChannel> {
    if symbols == 0 || block == 0 {
        return Err(Error::BadInput {
            detail: "cq-orthogonal needs positive symbol count and block size".into(),
        });
    }
    let dim = symbols * block;
    let norm: f64 = (1..=block).sum::<usize>() as f64;
    let mut outputs = Vec::with_capacity(symbols);
    for s in 0..symbols {
        let mut m = CMatrix::zeros(dim, dim);
        for b in 0..block {
            m[(s * block + b, s * block + b)] = C64::new((b + 1) as f64 / norm, 0.0);
        }
        outputs.push(DensityMatrix::new(m)?);
    }
    KrausChannel::cq_channel(&outputs)
}

/// Load a channel from a JSON file path, or build it from a preset string
/// when no such file exists.
pub fn load_channel(arg: &str) -> Result<KrausChannel> {
    let path = Path::new(arg);
    if path.is_file() {
        read_json::<ChannelFile>(path)?.to_channel()
    } else {
        channel_preset(arg)
    }
}

/// Build an ensemble from a preset string. Supported presets: `zero-plus`
/// (the equal-weight {|0⟩, |+⟩} qubit pair), `basis:D` (uniform over the D
/// computational basis states), and `random:DIM:MEMBERS:SEED`.
pub fn ensemble_preset(arg: &str) -> Result<Ensemble> {
    let (name, rest) = arg.split_once(':').unwrap_or((arg, ""));
    match name {
        "zero-plus" => Ensemble::new(vec![
            (0.5, PureState::basis_state(2, 0)?.projector()),
            (0.5, PureState::plus().projector()),
        ]),
        "basis" => {
            let d: usize = parse_num(rest, "dimension")?;
            let members = (0..d)
                .map(|k| Ok(PureState::basis_state(d, k)?.projector()))
                .collect::<Result<Vec<_>>>()?;
            Ensemble::uniform(members)
        }
        "random" => {
            let f = parse_fields(name, rest, 3, 3)?;
            let mut rng = rng_for(parse_num(f[2], "seed")?);
            random_ensemble(
                &mut rng,
                parse_num(f[0], "dimension")?,
                parse_num(f[1], "member count")?,
            )
        }
        _ => Err(Error::BadInput {
            detail: format!("unknown ensemble preset `{arg}`"),
        }),
    }
}

/// Load an ensemble from a JSON file path or a preset string.
pub fn load_ensemble(arg: &str) -> Result<Ensemble> {
    let path = Path::new(arg);
    if path.is_file() {
        read_json::<EnsembleFile>(path)?.to_ensemble()
    } else {
        ensemble_preset(arg)
    }
}

/// Build a Hamiltonian from a preset string: `diag:E0,E1,…` or `number:D`
/// (the ladder 0, 1, …, D−1).
pub fn hamiltonian_preset(arg: &str) -> Result<Hamiltonian> {
    let (name, rest) = arg.split_once(':').unwrap_or((arg, ""));
    match name {
        "diag" => {
            let levels = rest
                .split(',')
                .map(|s| parse_num(s.trim(), "energy level"))
                .collect::<Result<Vec<f64>>>()?;
            Hamiltonian::diagonal(&levels)
        }
        "number" => Hamiltonian::number_operator(parse_num(rest, "dimension")?),
        _ => Err(Error::BadInput {
            detail: format!("unknown hamiltonian preset `{arg}`"),
        }),
    }
}

/// Load a Hamiltonian from a JSON file path or a preset string.
pub fn load_hamiltonian(arg: &str) -> Result<Hamiltonian> {
    let path = Path::new(arg);
    if path.is_file() {
        read_json::<HamiltonianFile>(path)?.to_hamiltonian()
    } else {
        hamiltonian_preset(arg)
    }
}

/// Load a Gaussian channel spec (file only; there are no Gaussian presets).
pub fn load_gaussian(path: &Path) -> Result<GaussianChannelSpec> {
    read_json::<GaussianFile>(path)?.to_spec()
}

// ---------------------------------------------------------------------------
// Report output.
// ---------------------------------------------------------------------------

/// Serialize a report to pretty JSON with a trailing newline. Field order
/// follows struct declaration order, so output is deterministic.
pub fn to_report_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// Write `text` to the given path, or to stdout when no path is given.
pub fn write_output(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text)?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
