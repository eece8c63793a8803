pub mod ast;
pub mod binder;
pub mod diag;
pub mod driver;
pub mod exec;
pub mod lexer;
pub mod parser;
pub mod record;
