//! Set-level calculus, submodularity inequalities, and generalized cut-set
//! bounds for broadcast networks.

pub mod error;
pub mod rational;
pub mod setcalc;
pub mod setfn;
pub mod lp;
pub mod bounds;
pub mod network;
pub mod polytope;
pub mod region;
pub mod campaign;

pub use error::{Error, Result};
pub use rational::Rational;
pub use bounds::{BoundInequality, BoundTerm, InstantiatedInequality, Provenance, RuleSet};
pub use campaign::{run_campaign, Campaign, CampaignConfig, CampaignSummary};
pub use network::{BroadcastNetwork, Capacity, Cut};
pub use polytope::{LinearExpr, LinearSystem, Point};
pub use setcalc::{ElementSet, GroundSet, IndexSet, SubsetFamily};
pub use setfn::{JointDistribution, ModularFunction, SetFunction, TableFunction};
