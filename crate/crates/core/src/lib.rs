pub mod bench;
pub mod contour;
pub mod dft;
pub mod error;
pub mod quadrature;
pub mod special;
pub mod spectral;
pub mod verify;
