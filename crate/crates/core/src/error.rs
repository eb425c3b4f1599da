use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("response denominator vanishes at omega = {omega}")]
    Pole { omega: f64 },
    #[error("integral `{name}` did not converge (value {value:e}, error estimate {error:e})")]
    NotConverged {
        name: &'static str,
        value: f64,
        error: f64,
    },
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("no quantities selected")]
    NoQuantities,
    #[error("unknown quantity `{0}`")]
    UnknownQuantity(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}
