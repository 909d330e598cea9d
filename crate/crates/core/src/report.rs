use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        })
    }
}

/// Where a check failed and what was left over.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Witness {
    /// Offending frame tuple or object, e.g. `(e1, e2, e3)`.
    pub location: String,
    /// Residual in canonical printed form.
    pub residual: String,
}

/// Outcome of one named check. A failing check always carries a witness.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub witness: Option<Witness>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Pass,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, location: impl Into<String>, residual: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Fail,
            witness: Some(Witness {
                location: location.into(),
                residual: residual.into(),
            }),
        }
    }

    pub fn error(name: impl Into<String>, message: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Error,
            witness: Some(Witness {
                location: String::new(),
                residual: message.into(),
            }),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Runs `probe` over `items` and stops at the first residual.
    pub fn first_failure<I, T, F>(name: &str, items: I, mut probe: F) -> Check
    where
        I: IntoIterator<Item = T>,
        F: FnMut(T) -> Option<(String, String)>,
    {
        for item in items {
            if let Some((loc, residual)) = probe(item) {
                return Check::fail(name, loc, residual);
            }
        }
        Check::pass(name)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.status)?;
        if let Some(w) = &self.witness {
            if w.location.is_empty() {
                write!(f, " ({})", w.residual)?;
            } else {
                write!(f, " at {}: {}", w.location, w.residual)?;
            }
        }
        Ok(())
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(Check::passed)
}
