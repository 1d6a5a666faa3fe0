pub mod build_train;
pub mod eval_sparkles;
pub mod eval_task;
pub mod generate;
pub mod stats;
pub mod validate;
