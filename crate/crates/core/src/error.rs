use thiserror::Error;

/// Errors raised by graph construction and the matching/flip operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("bipartite sides must have equal size, got |A| = {n_a} and |B| = {n_b}")]
    UnbalancedSides { n_a: usize, n_b: usize },
    #[error("edge endpoint out of range: ({a}, {b})")]
    InvalidEndpoint { a: usize, b: usize },
    #[error("duplicate edge ({a}, {b})")]
    DuplicateEdge { a: usize, b: usize },
    #[error("arc endpoint out of range: ({from}, {to})")]
    InvalidArc { from: usize, to: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("duplicate arc ({from}, {to})")]
    DuplicateArc { from: usize, to: usize },
    #[error("vertex list does not form a cycle: {reason}")]
    NotACycle { reason: &'static str },
    #[error("matching does not cover vertex {vertex} exactly once")]
    NotAMatching { vertex: usize },
    #[error("vertex {vertex} violates the out/in-degree-one condition")]
    DegreeViolation { vertex: usize },
    #[error("cycle is not directed in the orientation (offence at position {position})")]
    NotDirected { position: usize },
    #[error("operands live on different base graphs")]
    BaseMismatch,
    #[error("enumeration exceeded the cap of {cap}")]
    CapExceeded { cap: usize },

    // flip-trace recovery
    #[error("step {step} of the trace does not differ by a single directed cycle")]
    NotAFlip { step: usize },
    #[error("component {component} of the flipped-cycle union is not strongly connected in D0")]
    ClaimViolation { component: usize },
    #[error(
        "label {label} of the auxiliary multigraph has in-degree {in_deg} != out-degree {out_deg}"
    )]
    Unbalanced {
        label: usize,
        in_deg: usize,
        out_deg: usize,
    },
    #[error("cycle length {len} does not exceed ell^(t+1) = {bound}")]
    PreconditionViolated { len: usize, bound: u128 },

    // reduction
    #[error("digraph vertex {vertex} has in- or out-degree zero")]
    DegenerateVertex { vertex: usize },
    #[error("digraph must have at least {min} vertices, got {got}")]
    TooSmall { min: usize, got: usize },
    #[error("cycle is not a directed Hamiltonian cycle of the digraph")]
    NotHamiltonian,
    #[error("cycle stays inside the gadget of digraph vertex {owner}")]
    GadgetLocal { owner: usize },
    #[error("replaying the flip path does not end at the target matching")]
    ReplayFailure,
    #[error("no flipped cycle exceeds its pigeonhole threshold ell^(i+1)")]
    NoPigeonholeCycle,

    // LP moves
    #[error("matchings are not at skeleton distance exactly two")]
    NotDistanceTwo,
    #[error("no edge of m1 lies outside both m2 and the midpoint matching")]
    NoWitnessEdge,
    #[error("no positive step is possible along the circuit")]
    ZeroStep,
    #[error("point is not a 0/1 vertex of the polytope")]
    NotAVertex,
    #[error("point violates the polytope constraints at vertex {vertex}")]
    InfeasiblePoint { vertex: usize },
    #[error("unknown pivot rule {0:?}")]
    UnknownRule(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
