pub mod analysis;
pub mod cohomology;
pub mod error;
pub mod gl2;
pub mod group;
pub mod groupfile;
pub mod linalg;
pub mod matrix;
pub mod ring;
pub mod verifier;

pub use cohomology::{Cocycle, Cohomology, CohomologyGroup, CohomologyReport, GModule};
pub use error::{Error, Result};
pub use gl2::Gl2;
pub use group::{MatrixGroup, DEFAULT_CAP};
pub use groupfile::{parse_group_file, GroupDescription};
pub use linalg::Submodule;
pub use matrix::RingMatrix;
pub use ring::Ring;
pub use verifier::{Budget, Session, SuiteReport, Verdict, VerdictReport, VerifyConfig, REGISTRY};
