//! Algebraic machinery for knot Floer complexes over `F2[U,V]/(UV)`, bordered
//! structures over the torus algebra, and an auditable certificate for the
//! involutive obstruction on the cable knot `K0`.

pub mod bordered;
pub mod cli;
pub mod complex;
pub mod f2;
pub mod golden;
pub mod involutive;
pub mod io;
pub mod ring;
pub mod weird;
