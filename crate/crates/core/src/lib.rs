pub mod exactlin;
pub mod chain;
pub mod random;
pub mod wfs;
pub mod basis;
pub mod dga;
pub mod coalg;
pub mod barcobar;
pub mod bialg;
pub mod reedy;
