use core::fmt;

/// Constraint families of the network's feasible set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintKind {
    Sinr,
    BackscatterEnergy,
    PowerCap,
    BinaryIndicator,
    TimeSwitching,
    HarvestThreshold,
}

impl ConstraintKind {
    pub const ALL: [ConstraintKind; 6] = [
        ConstraintKind::Sinr,
        ConstraintKind::BackscatterEnergy,
        ConstraintKind::PowerCap,
        ConstraintKind::BinaryIndicator,
        ConstraintKind::TimeSwitching,
        ConstraintKind::HarvestThreshold,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstraintKind::Sinr => "sinr_threshold",
            ConstraintKind::BackscatterEnergy => "backscatter_energy",
            ConstraintKind::PowerCap => "power_cap",
            ConstraintKind::BinaryIndicator => "binary_indicator",
            ConstraintKind::TimeSwitching => "time_switching_range",
            ConstraintKind::HarvestThreshold => "harvest_threshold",
        }
    }
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GameError {
    /// A distance was zero, negative or not finite.
    InvalidGeometry { distance: f64 },
    /// An argument fell outside the domain of a formula.
    Domain { quantity: &'static str, value: f64 },
    /// A scenario constant violates its invariant.
    InvalidParams { field: &'static str, constraint: &'static str },
    /// The game has nothing to play on (zero reflection differential, no tag
    /// on the attacked sub-channel, mismatched dimensions).
    Degenerate(&'static str),
    /// The network's constraint set is empty for this scenario.
    Infeasible { constraint: ConstraintKind, tag: Option<usize>, slack: f64 },
    /// A finite-difference stencil would leave the function's domain.
    Boundary { coordinate: usize },
}

impl fmt::Display for GameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameError::InvalidGeometry { distance } => {
                write!(f, "invalid geometry: distance {distance} must be positive and finite")
            }
            GameError::Domain { quantity, value } => {
                write!(f, "{quantity} = {value} is outside its domain")
            }
            GameError::InvalidParams { field, constraint } => {
                write!(f, "invalid parameter `{field}`: requires {constraint}")
            }
            GameError::Degenerate(why) => write!(f, "degenerate game: {why}"),
            GameError::Infeasible { constraint, tag, slack } => match tag {
                Some(n) => write!(
                    f,
                    "infeasible scenario: constraint {constraint} cannot be met for tag {n} (normalized slack {slack:e})"
                ),
                None => write!(
                    f,
                    "infeasible scenario: constraint {constraint} cannot be met (normalized slack {slack:e})"
                ),
            },
            GameError::Boundary { coordinate } => {
                write!(f, "finite-difference step leaves the domain along coordinate {coordinate}")
            }
        }
    }
}

impl core::error::Error for GameError {}
