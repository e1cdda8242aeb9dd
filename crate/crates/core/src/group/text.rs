//! Plain-text group definitions.
//!
//! Whitespace-separated tokens; `#` starts a comment running to end of line.
//!
//! ```text
//! name gamma-k:1
//! rank 2
//! q_order 2
//! mult_table 0 1 1 0
//! action 1 0 0 1   -1 0 0 1
//! cocycle 1 1 0 1
//! generators 1
//! ```
//!
//! `mult_table` has q_order² entries, row-major. `action` has q_order
//! matrices of rank² entries each, row-major, in point group order. Each
//! `cocycle q r v_1 .. v_rank` line sets one nonzero value c(q, r); unset
//! pairs are zero. `name` and `generators` are optional.

use super::finite::FiniteGroupTable;
use super::vagroup::{LatticeMap, VaGroup};
use crate::error::{Error, Result};

struct Tokens<'a> {
    items: Vec<&'a str>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(src: &'a str) -> Self {
        let items = src
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(|l| l.split_whitespace())
            .collect();
        Tokens { items, pos: 0 }
    }

    fn peek(&self) -> Option<&'a str> {
        self.items.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<&'a str> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn int(&mut self, what: &str) -> Result<i64> {
        let t = self
            .next()
            .ok_or_else(|| Error::input(format!("unexpected end of input reading {what}")))?;
        t.parse()
            .map_err(|_| Error::input(format!("expected integer for {what}, found {t:?}")))
    }

    fn count(&mut self, what: &str) -> Result<usize> {
        let x = self.int(what)?;
        usize::try_from(x).map_err(|_| Error::input(format!("{what} must be nonnegative")))
    }

    fn is_keyword(t: &str) -> bool {
        matches!(
            t,
            "name" | "rank" | "q_order" | "mult_table" | "action" | "cocycle" | "generators"
        )
    }
}

pub fn parse_group(src: &str) -> Result<VaGroup> {
    let mut tok = Tokens::new(src);
    let mut name = String::from("group");
    let mut rank: Option<usize> = None;
    let mut order: Option<usize> = None;
    let mut mult: Option<Vec<i64>> = None;
    let mut action: Option<Vec<i64>> = None;
    let mut cocycles: Vec<(usize, usize, Vec<i64>)> = Vec::new();
    let mut generators: Option<Vec<usize>> = None;

    let need = |x: Option<usize>, what: &str| {
        x.ok_or_else(|| Error::input(format!("{what} must be given before this keyword")))
    };

    while let Some(key) = tok.next() {
        match key {
            "name" => {
                name = tok
                    .next()
                    .ok_or_else(|| Error::input("name needs a value"))?
                    .to_string();
            }
            "rank" => rank = Some(tok.count("rank")?),
            "q_order" => order = Some(tok.count("q_order")?),
            "mult_table" => {
                let n = need(order, "q_order")?;
                mult = Some((0..n * n).map(|_| tok.int("mult_table")).collect::<Result<_>>()?);
            }
            "action" => {
                let n = need(order, "q_order")?;
                let k = need(rank, "rank")?;
                action = Some((0..n * k * k).map(|_| tok.int("action")).collect::<Result<_>>()?);
            }
            "cocycle" => {
                let k = need(rank, "rank")?;
                let q = tok.count("cocycle q")?;
                let r = tok.count("cocycle r")?;
                let v = (0..k).map(|_| tok.int("cocycle value")).collect::<Result<_>>()?;
                cocycles.push((q, r, v));
            }
            "generators" => {
                let mut g = Vec::new();
                while let Some(t) = tok.peek() {
                    if Tokens::is_keyword(t) {
                        break;
                    }
                    g.push(tok.count("generator")?);
                }
                generators = Some(g);
            }
            other => return Err(Error::input(format!("unknown keyword {other:?}"))),
        }
    }

    let k = rank.ok_or_else(|| Error::input("missing rank"))?;
    let n = order.ok_or_else(|| Error::input("missing q_order"))?;
    let mult = match mult {
        Some(m) => m,
        None if n == 1 => vec![0],
        None => return Err(Error::input("missing mult_table")),
    };
    let mult = mult
        .into_iter()
        .map(|x| usize::try_from(x).map_err(|_| Error::input("negative mult_table entry")))
        .collect::<Result<Vec<_>>>()?;
    let point = FiniteGroupTable::new(n, mult, generators)?;
    let action = match action {
        Some(a) => a
            .chunks(k * k)
            .map(|c| LatticeMap::new(k, c.to_vec()))
            .collect::<Result<Vec<_>>>()?,
        None if n == 1 => vec![LatticeMap::identity(k)],
        None => return Err(Error::input("missing action")),
    };
    let action = if k == 0 { vec![LatticeMap::identity(0); n] } else { action };
    let mut table = vec![vec![0; k]; n * n];
    for (q, r, v) in cocycles {
        if q >= n || r >= n {
            return Err(Error::input(format!("cocycle index ({q}, {r}) out of range")));
        }
        table[q * n + r] = v;
    }
    VaGroup::new(name, k, point, action, table)
}

pub fn format_group(g: &VaGroup) -> String {
    let n = g.q_order();
    let k = g.rank();
    let join = |xs: &mut dyn Iterator<Item = String>| xs.collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    out.push_str(&format!("name {}\n", g.name()));
    out.push_str(&format!("rank {k}\n"));
    out.push_str(&format!("q_order {n}\n"));
    out.push_str(&format!(
        "mult_table {}\n",
        join(&mut g.point_group().table().iter().map(|x| x.to_string()))
    ));
    out.push_str("action");
    for q in 0..n {
        out.push_str("\n ");
        for x in g.action(q).entries() {
            out.push_str(&format!(" {x}"));
        }
    }
    out.push('\n');
    for q in 0..n {
        for r in 0..n {
            let c = g.cocycle(q, r);
            if c.iter().any(|&x| x != 0) {
                out.push_str(&format!(
                    "cocycle {q} {r} {}\n",
                    join(&mut c.iter().map(|x| x.to_string()))
                ));
            }
        }
    }
    let gens = g.point_group().generators();
    if !gens.is_empty() {
        out.push_str(&format!(
            "generators {}\n",
            join(&mut gens.iter().map(|x| x.to_string()))
        ));
    }
    out
}
