//! Text format for synthetic Galois setups `H x| C_p`.
//!
//! ```text
//! # comment
//! p 3                          prime index
//! m 2                          coefficient ring Z/p^m
//! kernel 2 2 2                 cyclic factor orders of H
//! action 0 0 1 / 1 0 0 / 0 1 0 rows of the matrix of sigma on exponent vectors
//! fiber 1,0,0 0,1,0 0,0,1 via 1,0,0
//! ```
//!
//! Each `fiber` line lists the conjugations `c_w` above one real place as
//! exponent vectors of `H`, optionally followed by `via` and the element
//! `c_v` of `H` whose transfer should equal their product. `action`
//! defaults to the identity matrix.

use super::group::FiniteGroup;
use super::setup::{Fiber, GaloisSetup};
use crate::error::{Error, Result};
use crate::group::AbelianGroup;

pub fn parse_setup(text: &str) -> Result<GaloisSetup> {
    let mut p = None;
    let mut m = 1u32;
    let mut kernel: Option<Vec<u64>> = None;
    let mut action: Option<Vec<Vec<i64>>> = None;
    let mut raw_fibers: Vec<(usize, Vec<Vec<u64>>, Option<Vec<u64>>)> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let ints = |s: &str| -> Result<Vec<i64>> {
            s.split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|_| err(format!("bad integer `{t}`"))))
                .collect()
        };
        let vector = |s: &str| -> Result<Vec<u64>> {
            s.split(',')
                .map(|t| t.trim().parse::<u64>().map_err(|_| err(format!("bad vector entry `{t}`"))))
                .collect()
        };
        match key {
            "p" => p = Some(single(&ints(rest)?, line_no)? as u64),
            "m" => m = single(&ints(rest)?, line_no)? as u32,
            "kernel" => {
                let orders = ints(rest)?;
                if orders.is_empty() || orders.iter().any(|&o| o < 1) {
                    return Err(err("kernel needs positive cyclic orders".into()));
                }
                kernel = Some(orders.into_iter().map(|o| o as u64).collect());
            }
            "action" => action = Some(rest.split('/').map(ints).collect::<Result<_>>()?),
            "fiber" => {
                let (cws, via) = match rest.split_once(" via ") {
                    Some((a, b)) => (a, Some(vector(b.trim())?)),
                    None => (rest, None),
                };
                let cw = cws.split_whitespace().map(vector).collect::<Result<Vec<_>>>()?;
                raw_fibers.push((line_no, cw, via));
            }
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }
    let missing = |what: &str| Error::Parse { line: 0, msg: format!("missing `{what}` line") };
    let p = p.ok_or_else(|| missing("p"))?;
    let kernel = kernel.ok_or_else(|| missing("kernel"))?;
    let rank = kernel.len();
    let action = action.unwrap_or_else(|| {
        (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect()
    });
    let group = FiniteGroup::semidirect(&kernel, &action, p)?;
    let h = AbelianGroup::new(kernel.clone());
    let n = h.order() as u32;
    let encode = |line: usize, v: &[u64]| -> Result<u32> {
        if v.len() != rank || v.iter().zip(&kernel).any(|(x, o)| x >= o) {
            return Err(Error::Parse { line, msg: "vector does not match the kernel".into() });
        }
        Ok(h.encode(v) as u32)
    };
    let mut fibers = Vec::new();
    for (line, cw, via) in raw_fibers {
        let cw = cw.iter().map(|v| encode(line, v)).collect::<Result<Vec<_>>>()?;
        let cv = via.map(|v| encode(line, &v)).transpose()?;
        fibers.push(Fiber { cw, cv });
    }
    let setup = GaloisSetup::new(group, &(0..n).collect::<Vec<_>>(), n, p, m)?;
    Ok(setup.with_fibers(fibers))
}

fn single(v: &[i64], line: usize) -> Result<i64> {
    match v {
        [x] if *x > 0 => Ok(*x),
        _ => Err(Error::Parse { line, msg: "expected one positive integer".into() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma::verify_c_identity;

    #[test]
    fn parses_single_fiber() {
        let text = "p 3\nm 2\nkernel 2 2 2\naction 0 0 1 / 1 0 0 / 0 1 0\nfiber 1,0,0 0,1,0 0,0,1 via 1,0,0\n";
        let st = parse_setup(text).unwrap();
        assert_eq!(st.group().order(), 24);
        assert_eq!(st.fibers().len(), 1);
        assert!(verify_c_identity(&st).unwrap().verdict);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_setup("p 3\nkernel 7\nbogus 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(parse_setup("kernel 7\n").is_err());
        let err = parse_setup("p 3\nkernel 2\nfiber 1,1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }
}
