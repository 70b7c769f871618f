//! Support code shared by the integration suites: a runner for the `grw`
//! binary and the fixture texts the suites exercise.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn grw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grw"))
        .args(args)
        .output()
        .expect("the grw binary should run")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("the binary should exit normally")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be UTF-8")
}

pub fn stdout_lines(out: &Output) -> Vec<String> {
    stdout(out).lines().map(|l| l.to_string()).collect()
}

pub fn write_file(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).expect("fixture files should be writable");
    path
}

/// Three symbols, `a` and `b` adjusted, one two-letter guide.
pub const WINDOW_SYSTEM: &str = "alphabet: a b c\nclass: a b\nguide: b b\n";

/// Acceptor for the single string `aaacaa` over that alphabet.
pub const WINDOW_AUTOMATON: &str = "type: dfa\nalphabet: a b c\nstates: s0 s1 s2 s3 s4 s5 s6\nstart: s0\naccept: s6\ntrans: s0 a s1\ntrans: s1 a s2\ntrans: s2 a s3\ntrans: s3 c s4\ntrans: s4 a s5\ntrans: s5 a s6\n";

/// Every string reachable from `aaacaa` under the window system, sorted.
pub const WINDOW_CLOSURE: [&str; 8] =
    ["aaacaa", "aaacbb", "abbcaa", "abbcbb", "bbacaa", "bbacbb", "bbbcaa", "bbbcbb"];

/// Six symbols in three adjusted pairs with guides `fb`, `ace`, `d`.
pub const TRACE_SYSTEM: &str =
    "alphabet: a b c d e f\nclass: a b\nclass: c d\nclass: e f\nguide: f b\nguide: a c e\nguide: d\n";

/// A six-step run on the base `ebcfa` written in the steps file syntax.
pub const TRACE_STEPS: &str = "2 d\n0 f b\n1 a c e\n0 f b\n3 f b\n3 f b\n";

/// Insertion/deletion system over `{a, 0}` with two guides.
pub const ID_SYSTEM: &str = "alphabet: a 0\nzero: 0\nguide: a a 0 a\nguide: a 0 a a\n";

/// Acceptor for the single string `aaa`.
pub const ID_AUTOMATON: &str = "type: dfa\nalphabet: a 0\nstates: t0 t1 t2 t3\nstart: t0\naccept: t3\ntrans: t0 a t1\ntrans: t1 a t2\ntrans: t2 a t3\n";

/// An acceptor whose zero runs grow without bound (`a 0* b`).
pub const UNBOUNDED_AUTOMATON: &str = "type: dfa\nalphabet: a b 0\nstates: u0 u1 u2\nstart: u0\naccept: u2\ntrans: u0 a u1\ntrans: u1 0 u1\ntrans: u1 b u2\n";

/// Matching system definition for the unbounded-run acceptor.
pub const UNBOUNDED_SYSTEM: &str = "alphabet: a b 0\nzero: 0\nguide: a 0 b\n";

/// Raw adjustment pairs that do not close into an equivalence.
pub const RAW_PAIRS_SYSTEM: &str = "alphabet: a b c\npair: a b\npair: b a\nguide: b b\n";
