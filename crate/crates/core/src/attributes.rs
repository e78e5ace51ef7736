//! Per-node attribute columns. `None` marks a missing value.

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct BinaryColumn {
    pub name: String,
    pub values: Vec<Option<bool>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CategoricalColumn {
    pub name: String,
    /// Dense codes `0..num_categories`.
    pub values: Vec<Option<u32>>,
    pub num_categories: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuousColumn {
    pub name: String,
    pub values: Vec<Option<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttributeKind {
    Binary,
    Categorical,
    Continuous,
}

impl std::fmt::Display for AttributeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AttributeKind::Binary => "binary",
            AttributeKind::Categorical => "categorical",
            AttributeKind::Continuous => "continuous",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AttributeSet {
    n: usize,
    pub binary: Vec<BinaryColumn>,
    pub categorical: Vec<CategoricalColumn>,
    pub continuous: Vec<ContinuousColumn>,
}

impl AttributeSet {
    pub fn new(n: usize) -> Self {
        AttributeSet {
            n,
            ..Default::default()
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    fn check_len(&self, name: &str, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::Model(format!(
                "attribute {name} has {len} values, graph has {} nodes",
                self.n
            )));
        }
        if self.has_column(name) {
            return Err(Error::Model(format!("duplicate attribute column {name}")));
        }
        Ok(())
    }

    fn has_column(&self, name: &str) -> bool {
        self.binary.iter().any(|c| c.name == name)
            || self.categorical.iter().any(|c| c.name == name)
            || self.continuous.iter().any(|c| c.name == name)
    }

    pub fn add_binary(&mut self, name: &str, values: Vec<Option<bool>>) -> Result<usize> {
        self.check_len(name, values.len())?;
        self.binary.push(BinaryColumn {
            name: name.to_string(),
            values,
        });
        Ok(self.binary.len() - 1)
    }

    /// Codes must already be dense; `num_categories` is one past the largest code.
    pub fn add_categorical(&mut self, name: &str, values: Vec<Option<u32>>) -> Result<usize> {
        self.check_len(name, values.len())?;
        let num_categories = values.iter().flatten().max().map_or(0, |&m| m + 1);
        self.categorical.push(CategoricalColumn {
            name: name.to_string(),
            values,
            num_categories,
        });
        Ok(self.categorical.len() - 1)
    }

    pub fn add_continuous(&mut self, name: &str, values: Vec<Option<f64>>) -> Result<usize> {
        self.check_len(name, values.len())?;
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Model(format!(
                "continuous attribute {name} has non-finite values"
            )));
        }
        self.continuous.push(ContinuousColumn {
            name: name.to_string(),
            values,
        });
        Ok(self.continuous.len() - 1)
    }

    /// Column index of `name` within the columns of `kind`.
    pub fn find(&self, kind: AttributeKind, name: &str) -> Option<usize> {
        match kind {
            AttributeKind::Binary => self.binary.iter().position(|c| c.name == name),
            AttributeKind::Categorical => self.categorical.iter().position(|c| c.name == name),
            AttributeKind::Continuous => self.continuous.iter().position(|c| c.name == name),
        }
    }

    /// Moves all columns of `other` into `self`.
    pub fn merge(&mut self, other: AttributeSet) -> Result<()> {
        for c in other.binary {
            self.add_binary(&c.name, c.values)?;
        }
        for c in other.categorical {
            self.add_categorical(&c.name, c.values)?;
        }
        for c in other.continuous {
            self.add_continuous(&c.name, c.values)?;
        }
        Ok(())
    }
}
