pub mod benchmarks;
pub mod cost;
pub mod flow;
pub mod global;
pub mod model;
pub mod propagation;
pub mod search;
pub mod table;

pub use cost::{Cost, UNBOUNDED_TOP};
pub use model::{Contradiction, CostFunction, FnId, ModelError, Value, VarId, Variable, Wcsp};
pub use propagation::Consistency;
pub use search::{solve, SearchConfig, SearchResult, SearchStatus};
pub use table::TableCostFunction;
