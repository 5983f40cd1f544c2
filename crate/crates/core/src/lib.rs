pub mod exactq;
pub mod ahmod;
pub mod qtensor;
pub mod halg;
pub mod variety;
pub mod fueter;
