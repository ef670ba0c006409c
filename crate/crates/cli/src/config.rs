//! Registry resolution from `--dims` and `--config`.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use hoqt_core::{Error as CoreError, Label, ParseError, SystemRegistry};

/// Command-level failure carrying its contract exit code.
#[derive(Debug)]
pub enum CliError {
    /// exit 2: bad type expression (with caret diagnostic)
    Parse { src: String, err: ParseError },
    /// exit 2: bad flags, bad registry entries, unknown labels
    Usage(String),
    /// exit 3: unreadable or malformed map file
    Format(String),
    /// exit 4: incompatible types or mixed registries
    TypeMismatch(String),
    /// anything that should not happen under the documented contract
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Format(_) => 3,
            CliError::TypeMismatch(_) => 4,
            CliError::Internal(_) => 70,
        }
    }

    pub fn from_core(err: CoreError) -> Self {
        match err {
            CoreError::Parse(_) => CliError::Usage(err.to_string()),
            CoreError::UnknownLabel(_)
            | CoreError::ZeroDimension(_)
            | CoreError::ReservedTrivialLabel
            | CoreError::DuplicateLabel(_)
            | CoreError::InvalidLabel(_) => CliError::Usage(err.to_string()),
            CoreError::Format(_) | CoreError::Io(_) => CliError::Format(err.to_string()),
            CoreError::TypeMismatch { .. }
            | CoreError::RegistryMismatch
            | CoreError::NotAnArrow(_)
            | CoreError::StructureMismatch(..)
            | CoreError::MatrixShape { .. }
            | CoreError::VectorLength { .. }
            | CoreError::ChoiShape { .. } => CliError::TypeMismatch(err.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { src, err } => write!(f, "{}", err.caret_diagnostic(src)),
            CliError::Usage(msg) => write!(f, "error: {msg}"),
            CliError::Format(msg) => write!(f, "error: {msg}"),
            CliError::TypeMismatch(msg) => write!(f, "error: {msg}"),
            CliError::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

/// Build the registry from an optional config file plus inline overrides.
/// Returns `None` when neither source is given.
pub fn resolve_registry(
    dims: &Option<String>,
    config: &Option<std::path::PathBuf>,
) -> Result<Option<Arc<SystemRegistry>>, CliError> {
    if dims.is_none() && config.is_none() {
        return Ok(None);
    }
    let mut registry = SystemRegistry::new();
    if let Some(path) = config {
        load_config_file(path, &mut registry)?;
    }
    if let Some(spec) = dims {
        apply_inline_dims(spec, &mut registry)?;
    }
    if registry.is_empty() {
        return Err(CliError::Usage("registry is empty".to_string()));
    }
    Ok(Some(Arc::new(registry)))
}

/// Flat key-value file: `label = dimension` per line, `#` starts a comment.
fn load_config_file(path: &Path, registry: &mut SystemRegistry) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (label, dim) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "{}:{}: expected `label = dimension`",
                path.display(),
                lineno + 1
            ))
        })?;
        insert_entry(registry, label.trim(), dim.trim()).map_err(|e| {
            CliError::Usage(format!("{}:{}: {e}", path.display(), lineno + 1))
        })?;
    }
    Ok(())
}

fn apply_inline_dims(spec: &str, registry: &mut SystemRegistry) -> Result<(), CliError> {
    for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
        let (label, dim) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("bad --dims entry `{item}`: expected LABEL=DIM")))?;
        insert_entry(registry, label.trim(), dim.trim())
            .map_err(|e| CliError::Usage(format!("bad --dims entry `{item}`: {e}")))?;
    }
    Ok(())
}

fn insert_entry(registry: &mut SystemRegistry, label: &str, dim: &str) -> Result<(), String> {
    let label = Label::new(label).map_err(|e| e.to_string())?;
    let dim: u32 = dim.parse().map_err(|_| format!("`{dim}` is not a dimension"))?;
    registry.set(label, dim).map_err(|e| e.to_string())
}
