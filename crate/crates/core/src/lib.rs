//! Finite principal bundles and their gauge groupoids.
//!
//! Everything here is extensional: groups, groupoids, bundles, neighbour
//! relations and differential forms are explicit finite tables, and every
//! identity between them can be checked by exhaustion.

pub mod connection;
pub mod doc;
pub mod error;
pub mod forms;
pub mod group;
pub mod groupoid;
pub mod names;
pub mod neighbourhood;
pub mod report;
pub mod torsor;
pub mod verify;

pub use connection::Connection;
pub use error::{Error, Result};
pub use forms::{GaugeForm, GroupForm};
pub use group::{Elem, FiniteGroup};
pub use groupoid::{Arrow, FiniteGroupoid, GaugeBundle, Object};
pub use neighbourhood::{BundleWithNeighbours, Neighbourhood, Simplex, Twist};
pub use report::{Report, Violation};
pub use torsor::{BundleIsomorphism, FractionArrow, PrincipalBundle, Point};
