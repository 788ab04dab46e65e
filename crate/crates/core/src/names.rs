//! Lexical tokens naming resources and workloads.
//!
//! Both name types share one rule: a token is non-empty and contains no
//! whitespace and no commas. The CSV, replay and matrix formats rely on this
//! to stay unquoted.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TokenError {
    #[error("empty token")]
    Empty,
    #[error("token {0:?} contains whitespace")]
    Whitespace(String),
    #[error("token {0:?} contains a comma")]
    Comma(String),
}

fn validate(raw: &str) -> Result<(), TokenError> {
    if raw.is_empty() {
        Err(TokenError::Empty)
    } else if raw.chars().any(char::is_whitespace) {
        Err(TokenError::Whitespace(raw.to_owned()))
    } else if raw.contains(',') {
        Err(TokenError::Comma(raw.to_owned()))
    } else {
        Ok(())
    }
}

macro_rules! token_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(raw: impl Into<String>) -> Result<Self, TokenError> {
                let raw = raw.into();
                validate(&raw)?;
                Ok(Self(raw))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl FromStr for $name {
            type Err = TokenError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                Self::new(s)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl AsRef<str> for $name {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }
    };
}

token_type!(
    /// Name of an IaaS resource (the `RESOURCENAME` basic type).
    ResourceName
);

token_type!(
    /// Name of a cloud workload (the `CLOUDWORKLOAD` basic type).
    CloudWorkload
);
