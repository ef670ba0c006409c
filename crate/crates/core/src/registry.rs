//! System registries: the assignment of Hilbert-space dimensions to labels.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::types::{Label, Type};

/// Maps each system label to the dimension of its Hilbert space.
///
/// Registries are immutable once a computation starts; typed maps snapshot
/// the registry they were built against and refuse to mix with maps from a
/// different one. The trivial type `I` is never registered — its dimension
/// is implicitly 1.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SystemRegistry {
    dims: BTreeMap<Label, u32>,
}

impl SystemRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<L, I>(pairs: I) -> Result<Self>
    where
        L: AsRef<str>,
        I: IntoIterator<Item = (L, u32)>,
    {
        let mut reg = Self::new();
        for (label, dim) in pairs {
            let label = Label::new(label.as_ref())?;
            if reg.dims.contains_key(&label) {
                return Err(Error::DuplicateLabel(label.to_string()));
            }
            reg.set(label, dim)?;
        }
        Ok(reg)
    }

    /// Insert or overwrite one system. Dimensions below 1 are rejected.
    pub fn set(&mut self, label: Label, dim: u32) -> Result<()> {
        if dim == 0 {
            return Err(Error::ZeroDimension(label.to_string()));
        }
        self.dims.insert(label, dim);
        Ok(())
    }

    pub fn dim_of(&self, label: &Label) -> Option<u32> {
        self.dims.get(label).copied()
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.dims.keys()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Label, u32)> {
        self.dims.iter().map(|(l, d)| (l, *d))
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Every label of `t` must be registered.
    pub fn check_type(&self, t: &Type) -> Result<()> {
        for label in t.labels() {
            if !self.dims.contains_key(label) {
                return Err(Error::UnknownLabel(label.to_string()));
            }
        }
        Ok(())
    }

    /// A copy of this registry with extra systems added (used to introduce
    /// probe systems for definitional cone checks).
    pub fn extended_with<I>(&self, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Label, u32)>,
    {
        let mut reg = self.clone();
        for (label, dim) in pairs {
            reg.set(label, dim)?;
        }
        Ok(reg)
    }

    /// Generate `count` labels not present in the registry, for probe
    /// systems. Single unused uppercase letters are preferred; `P<n>` names
    /// are used once the alphabet is exhausted. Deterministic.
    pub fn fresh_labels(&self, count: usize) -> Vec<Label> {
        let mut out = Vec::with_capacity(count);
        for c in ('A'..='Z').filter(|&c| c != 'I') {
            if out.len() == count {
                break;
            }
            let candidate = Label::new(c.to_string()).expect("uppercase letter");
            if self.dims.contains_key(&candidate) {
                continue;
            }
            out.push(candidate);
        }
        let mut n = 1;
        while out.len() < count {
            let candidate = Label::new(format!("P{n}")).expect("valid label");
            if !self.dims.contains_key(&candidate) && !out.contains(&candidate) {
                out.push(candidate);
            }
            n += 1;
        }
        out
    }

    /// FNV-1a digest of the sorted entries. Typed maps carry this to detect
    /// accidental mixing of values built against different registries.
    pub fn fingerprint(&self) -> u64 {
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |byte: u8| {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        };
        for (label, dim) in &self.dims {
            for b in label.as_str().bytes() {
                eat(b);
            }
            eat(b'=');
            for b in dim.to_le_bytes() {
                eat(b);
            }
            eat(b';');
        }
        hash
    }
}

impl fmt::Debug for SystemRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SystemRegistry{{")?;
        for (i, (label, dim)) in self.dims.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{label}={dim}")?;
        }
        write!(f, "}}")
    }
}
