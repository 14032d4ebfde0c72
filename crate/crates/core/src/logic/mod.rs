//! Epistemic formulas, S5 semantics with group and common knowledge, action
//! models and the restricted modal product.

pub mod action;
pub mod eval;
pub mod formula;
pub mod group;

pub use action::{product_update, product_update_with, ActionModel, ProductUpdate};
pub use eval::{eval, ActionLibrary, CommonKnowledgeMode, Evaluator};
pub use formula::Formula;
pub use group::{common_knowledge_class, restrict_to_group};
