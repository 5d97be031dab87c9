#![allow(dead_code)]

pub mod flow_oracle;
pub mod global_oracle;
pub mod instances;
pub mod projection;
