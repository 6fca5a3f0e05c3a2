use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether a field carries one value per node or one per element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Association {
    Node,
    Element,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarField {
    pub name: String,
    pub association: Association,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn new(name: impl Into<String>, association: Association, values: Vec<f64>) -> Self {
        ScalarField {
            name: name.into(),
            association,
            values,
        }
    }

    pub fn per_node(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self::new(name, Association::Node, values)
    }

    pub fn per_element(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self::new(name, Association::Element, values)
    }

    /// Smallest and largest finite value, if any.
    pub fn range(&self) -> Option<(f64, f64)> {
        self.values
            .iter()
            .copied()
            .filter(|v| v.is_finite())
            .fold(None, |acc, v| match acc {
                None => Some((v, v)),
                Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorField {
    pub name: String,
    pub association: Association,
    pub values: Vec<[f64; 3]>,
}

impl VectorField {
    pub fn new(name: impl Into<String>, association: Association, values: Vec<[f64; 3]>) -> Self {
        VectorField {
            name: name.into(),
            association,
            values,
        }
    }

    pub fn magnitudes(&self, name: impl Into<String>) -> ScalarField {
        ScalarField::new(
            name,
            self.association,
            self.values
                .iter()
                .map(|v| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt())
                .collect(),
        )
    }
}

/// A named attribute attached to mesh points or cells.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Scalar(ScalarField),
    Vector(VectorField),
}

impl Field {
    pub fn name(&self) -> &str {
        match self {
            Field::Scalar(f) => &f.name,
            Field::Vector(f) => &f.name,
        }
    }

    pub fn association(&self) -> Association {
        match self {
            Field::Scalar(f) => f.association,
            Field::Vector(f) => f.association,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Field::Scalar(f) => f.values.len(),
            Field::Vector(f) => f.values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks the field length against the node and element counts of a mesh.
    pub fn check_len(&self, nodes: usize, elements: usize) -> Result<()> {
        let expected = match self.association() {
            Association::Node => nodes,
            Association::Element => elements,
        };
        if self.len() != expected {
            return Err(Error::FieldLength {
                name: self.name().to_string(),
                expected,
                actual: self.len(),
            });
        }
        Ok(())
    }
}

impl From<ScalarField> for Field {
    fn from(f: ScalarField) -> Self {
        Field::Scalar(f)
    }
}

impl From<VectorField> for Field {
    fn from(f: VectorField) -> Self {
        Field::Vector(f)
    }
}
