//! Deterministic discrete-event simulator and property verifier for
//! neighbor-discovery protocols under relay (wormhole) attacks.
//!
//! Time is integer picoseconds end to end; geometry is `f64` meters and
//! every meters-to-picoseconds conversion rounds half-to-even exactly
//! once. Given the same scenario and seed, runs are bit-identical.
//!
//! The building blocks, bottom up:
//!
//! * [`model`] — nodes, positions, link schedules, NLOS delays, obstacle
//!   geometry, and the single rounding rule for propagation delays.
//! * [`message`] — beacon / challenge / response bodies with ideal
//!   authentication (tags cannot be forged, nonces cannot be guessed).
//! * [`protocol`] — the four ND variants (BT, BTL, CRT, CRTL) as pure
//!   decision functions plus the session state machines driving them.
//! * [`adversary`] — an external relay-only attacker: overhear, hold at
//!   least `delta_r`, retransmit verbatim; optionally through a wormhole
//!   tunnel at its own propagation speed.
//! * [`engine`] — the event queue. Produces a [`engine::Trace`] of every
//!   transmission, delivery and decision with full causal parentage.
//! * [`checker`] — trace-level verifiers for distance correctness, link
//!   correctness and availability.
//! * [`search`] — grid and bisection search for attack witnesses and for
//!   the minimum safe relay delay.
//! * [`scenario`] — TOML scenarios, run orchestration and report output
//!   (human, JSONL, CSV).
//!
//! The `examples/` directory shows one end-to-end program per capability;
//! the `ndsim` binary wraps the same entry points for scripting.

pub mod adversary;
pub mod checker;
pub mod engine;
pub mod error;
pub mod message;
pub mod model;
pub mod protocol;
pub mod scenario;
pub mod search;

pub use engine::{SimState, Trace};
pub use error::{EngineError, ModelError, ScenarioError};
pub use model::{NodeId, Position, Time, WorldConfig, SPEED_OF_LIGHT};
pub use protocol::{ProtocolConfig, ProtocolKind, Verdict};
pub use scenario::{load_scenario, parse_scenario, run_scenario, Report, Scenario};
