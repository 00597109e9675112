// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

//! Plot-ready renderings of a chi matrix.

use std::fmt::Write as _;

use msqpt::qcore::ComplexMatrix;

const PGM_LINE: usize = 70;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
}

impl Part {
    pub fn suffix(&self) -> &'static str {
        match self {
            Part::Re => "re",
            Part::Im => "im",
        }
    }

    fn pick(&self, m: &ComplexMatrix, r: usize, c: usize) -> f64 {
        match self {
            Part::Re => m[(r, c)].re,
            Part::Im => m[(r, c)].im,
        }
    }
}

/// `row,col,value` with a header, one row per entry.
pub fn csv(m: &ComplexMatrix, part: Part) -> String {
    let mut out = String::from("row,col,value\n");
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let _ = writeln!(out, "{r},{c},{}", part.pick(m, r, c));
        }
    }
    out
}

/// Plain grayscale PGM; `[-max|chi|, +max|chi|]` maps linearly onto `[0, 255]`.
pub fn pgm(m: &ComplexMatrix, part: Part) -> String {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let level = |v: f64| -> u8 {
        if scale == 0.0 {
            return 128;
        }
        ((v + scale) / (2.0 * scale) * 255.0).round().clamp(0.0, 255.0) as u8
    };
    let mut out = format!("P2\n{} {}\n255\n", m.ncols(), m.nrows());
    for r in 0..m.nrows() {
        let mut line = String::new();
        for c in 0..m.ncols() {
            let token = level(part.pick(m, r, c)).to_string();
            if !line.is_empty() && line.len() + 1 + token.len() > PGM_LINE {
                out.push_str(&line);
                out.push('\n');
                line.clear();
            }
            if !line.is_empty() {
                line.push(' ');
            }
            line.push_str(&token);
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}
