//! Key-strength estimation for factoring-based public-key cryptography.
//!
//! - [`effort`]: heuristic NFS cost `L[n]` in the log domain
//! - [`moore`]: compute growth as a doubling law over calendar months
//! - [`estimator`]: break-time projection and minimum bit-length search
//! - [`records`]: historical factoring records and trend fitting
//! - [`rsa_lab`]: textbook RSA and small-modulus factoring
//! - [`cli`]: the `keystrength` command-line front end

pub mod cli;
pub mod effort;
pub mod error;
pub mod estimator;
pub mod magnitude;
pub mod moore;
pub mod records;
pub mod rsa_lab;
pub mod stats;
pub mod tables;

pub use effort::{effort_ratio, l_effort, security_bits, BitLength, EffortValue};
pub use error::{Error, Result};
pub use estimator::{break_time, min_bitlength, BaselineRecord, BreakEstimate, SecurityQuery};
pub use magnitude::LogMagnitude;
pub use moore::{calibrate_doubling, project_hours, CalendarDate, DoublingModel};
