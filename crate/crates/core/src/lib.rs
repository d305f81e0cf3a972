//! Classical hidden-variable models of EPR-type correlations.
//!
//! * [`band`]: the elastic-band model and its expectation laws.
//! * [`peres`]: Peres' bomb-fragment model.
//! * [`urn`]: generalized urn states over `a, a′, b, b′`.
//! * [`polytope`]: correlation polytopes and exact facet enumeration.
//! * [`protocol`]: non-adaptive and adaptive (context-communicating) trials,
//!   the valuation table and Monte Carlo estimators.
//! * [`plasticity`]: elliptically squeezed bands.

pub mod band;
pub mod error;
pub mod peres;
pub mod plasticity;
pub mod polytope;
pub mod protocol;
pub mod rng;
pub mod stats;
pub mod urn;

pub use band::{Angle, BandShare, BreakingPoint, Outcome};
pub use error::{Error, Result};
pub use protocol::{ProtocolKind, SettingsQuad};
pub use stats::{CorrelationEstimate, McConfig};
