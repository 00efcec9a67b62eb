#![allow(dead_code)]

use std::process::{Command, Output};

pub fn zsq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zsq"))
        .args(args)
        .env_remove("ZSQ_CONFIG")
        .output()
        .expect("binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Rows of a CSV with a header; empty cells become `None`.
pub fn csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .expect("header")
        .split(',')
        .map(String::from)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

pub fn num(cell: &str) -> Option<f64> {
    if cell.is_empty() {
        None
    } else {
        Some(cell.parse().expect("numeric cell"))
    }
}

/// Value of `key = ...` in `point` text output (first field for complex values).
pub fn field(text: &str, key: &str) -> Option<f64> {
    text.lines()
        .find_map(|l| l.strip_prefix(key)?.strip_prefix(" = "))
        .map(|v| v.split_whitespace().next().unwrap().parse().unwrap())
}
