//! Exit status bookkeeping: 0 pass, 1 verification failure or violated
//! hypothesis, 2 input or usage error.

use std::fmt;

use homqg::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass = 0,
    Fail = 1,
    Input = 2,
}

impl Status {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            status: Status::Input,
            message: message.into(),
        }
    }

    pub fn fail(message: impl Into<String>) -> Self {
        Failure {
            status: Status::Fail,
            message: message.into(),
        }
    }

    pub fn context(mut self, prefix: impl fmt::Display) -> Self {
        self.message = format!("{prefix}: {}", self.message);
        self
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Hypothesis { .. } | Error::Verification { .. } => Status::Fail,
            _ => Status::Input,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}
