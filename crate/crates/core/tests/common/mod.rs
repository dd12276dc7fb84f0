#![allow(dead_code)]

pub mod dm;
pub mod gen;
pub mod prox;
