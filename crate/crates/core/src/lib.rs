//! Exact cohomology of group-graphs and topological moduli of singular foliation germs.
//!
//! Layers, bottom to top: [`exactnum`] (scalars in Q(symbols), Smith/Hermite forms),
//! [`abgroup`] (presented abelian groups and their homs), [`gg`] (group-graphs and
//! their cohomology), [`folmod`] (marked divisors and the moduli pipelines) and
//! [`cli`] (the `folmod` command).

pub mod abgroup;
pub mod exactnum;
pub mod gg;
pub mod folmod;
pub mod cli;
