pub mod collapse;
pub mod consts;
pub mod error;
pub mod gaussian;
pub mod gaussian_work;
pub(crate) mod linalg;
pub mod oracle;
pub mod quantum;
pub mod work;
pub mod api_probe;
