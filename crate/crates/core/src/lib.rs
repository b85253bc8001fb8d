//! Free-group words, finite presentations, Garside normal forms for
//! finite-type Artin groups, and machine checks of mapping class group
//! presentations.

pub mod coxeter;
pub mod garside;
pub mod linrep;
pub mod mcg;
pub mod presentation;
pub mod smith;
pub mod verify;
pub mod word;
