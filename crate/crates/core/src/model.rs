//! Either of the two Hamiltonian families.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryModel;
use crate::interior::InteriorModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    Boundary,
    Interior,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Model {
    Boundary(BoundaryModel),
    Interior(InteriorModel),
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Boundary(_) => ModelKind::Boundary,
            Model::Interior(_) => ModelKind::Interior,
        }
    }

    pub fn z(&self) -> Complex64 {
        match self {
            Model::Boundary(m) => m.z(),
            Model::Interior(m) => m.z(),
        }
    }
}

impl From<BoundaryModel> for Model {
    fn from(m: BoundaryModel) -> Self {
        Model::Boundary(m)
    }
}

impl From<InteriorModel> for Model {
    fn from(m: InteriorModel) -> Self {
        Model::Interior(m)
    }
}
