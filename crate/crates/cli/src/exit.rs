//! Exit codes.
//!
//! | code | meaning                                   |
//! |------|-------------------------------------------|
//! | 0    | success                                   |
//! | 1    | other failure (e.g. cannot write output)  |
//! | 2    | usage: bad flags, parameters or config    |
//! | 3    | input file unreadable                     |
//! | 4    | numerical failure or ill-posed fit        |
//! | 5    | non-numeric row in the input              |
//! | 6    | value outside (0, 1) in the input         |
//! | 7    | input holds no observations               |

use std::fmt;
use std::path::PathBuf;

use unifrechet::Error;

pub const OTHER: i32 = 1;
pub const USAGE: i32 = 2;
pub const UNREADABLE: i32 = 3;
pub const NUMERICAL: i32 = 4;
pub const NON_NUMERIC: i32 = 5;
pub const OUT_OF_RANGE: i32 = 6;
pub const NO_DATA: i32 = 7;

/// An input file that could not be read.
#[derive(Debug)]
pub struct Unreadable {
    pub path: PathBuf,
    pub source: std::io::Error,
}

impl fmt::Display for Unreadable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot read {}", self.path.display())
    }
}

impl std::error::Error for Unreadable {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

/// A usage problem found after argument parsing.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn code_for(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.downcast_ref::<Unreadable>().is_some() {
            return UNREADABLE;
        }
        if cause.downcast_ref::<Usage>().is_some() {
            return USAGE;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Parse { .. } => NON_NUMERIC,
                Error::OutOfRange { .. } => OUT_OF_RANGE,
                Error::NoData => NO_DATA,
                Error::InvalidParameter { .. }
                | Error::Domain { .. }
                | Error::Config { .. }
                | Error::Mismatch(_) => USAGE,
                Error::InsufficientData { .. } | Error::IllPosed(_) | Error::Numerical(_) => {
                    NUMERICAL
                }
            };
        }
    }
    OTHER
}
