use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("unknown recipe '{0}'")]
    UnknownRecipe(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::UnknownRecipe(_) => 3,
            Self::Io(_) | Self::Runtime(_) => 4,
        }
    }
}

macro_rules! runtime_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                Self::Runtime(e.to_string())
            }
        }
    )*};
}

runtime_from!(
    series_engine::SeriesError,
    resummation::ResumError,
    continuation::ContinuationError,
    fem1d::FemError,
    quad_linalg::LinalgError,
    csv::Error,
    serde_json::Error
);
