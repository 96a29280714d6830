//! Compact descriptor strings for spaces and groups.
//!
//! Spaces: `zpath:N`, `cube:n`, `box:AxBx..`, `ball:<group>:<radius>`.
//! Groups: `z`, `zn:k`, `free:k`, `cyclic:n`, `lamplighter` (alias `z2wrz`),
//! `zwrz`, `bk:k`, `thompson`, `table:<path>`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use dimgrowth::groups::{
    word_ball, Cyclic, FreeGroup, IntegerLattice, Integers, TableGroup,
};
use dimgrowth::hypercube::hamming;
use dimgrowth::lattice::LatticeBox;
use dimgrowth::metric::int;
use dimgrowth::thompson::ThompsonF;
use dimgrowth::wreath::{ball_sizes, integer_wreath, lamplighter, IteratedWreath};
use dimgrowth::FiniteMetricSpace;

/// Largest hypercube materialized as an explicit metric space.
const MAX_CUBE_SPACE: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupDesc {
    Integers,
    Lattice(usize),
    Free(i32),
    Cyclic(u64),
    Lamplighter,
    IntegerWreath,
    Iterated(usize),
    Thompson,
    Table(String),
}

impl FromStr for GroupDesc {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let num = |what: &str| -> Result<u64> {
            let a = arg.with_context(|| format!("group `{head}` needs `{head}:{what}`"))?;
            a.parse().with_context(|| format!("bad {what} `{a}` in group `{s}`"))
        };
        Ok(match head {
            "z" => GroupDesc::Integers,
            "zn" => GroupDesc::Lattice(positive(num("rank")?, s)? as usize),
            "free" => GroupDesc::Free(positive(num("rank")?, s)? as i32),
            "f2" => GroupDesc::Free(2),
            "cyclic" => GroupDesc::Cyclic(positive(num("order")?, s)?),
            "lamplighter" | "z2wrz" => GroupDesc::Lamplighter,
            "zwrz" => GroupDesc::IntegerWreath,
            "bk" => GroupDesc::Iterated(positive(num("level")?, s)? as usize),
            "thompson" => GroupDesc::Thompson,
            "table" => GroupDesc::Table(
                arg.filter(|a| !a.is_empty())
                    .context("group `table` needs `table:<path>`")?
                    .to_string(),
            ),
            _ => bail!("unknown group `{s}`"),
        })
    }
}

impl fmt::Display for GroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDesc::Integers => write!(f, "z"),
            GroupDesc::Lattice(k) => write!(f, "zn:{k}"),
            GroupDesc::Free(k) => write!(f, "free:{k}"),
            GroupDesc::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupDesc::Lamplighter => write!(f, "lamplighter"),
            GroupDesc::IntegerWreath => write!(f, "zwrz"),
            GroupDesc::Iterated(k) => write!(f, "bk:{k}"),
            GroupDesc::Thompson => write!(f, "thompson"),
            GroupDesc::Table(p) => write!(f, "table:{p}"),
        }
    }
}

fn positive(v: u64, desc: &str) -> Result<u64> {
    if v == 0 {
        bail!("`{desc}` needs a positive parameter");
    }
    Ok(v)
}

fn table(path: &str) -> Result<TableGroup> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading group table {path}"))?;
    Ok(TableGroup::from_json(&text)?)
}

/// Runs `$body` with `$g` bound to the concrete group a descriptor names.
macro_rules! with_group {
    ($desc:expr, $g:ident => $body:expr) => {
        match $desc {
            GroupDesc::Integers => { let $g = Integers; $body }
            GroupDesc::Lattice(k) => { let $g = IntegerLattice { rank: *k }; $body }
            GroupDesc::Free(k) => { let $g = FreeGroup { rank: *k }; $body }
            GroupDesc::Cyclic(n) => { let $g = Cyclic { order: *n }; $body }
            GroupDesc::Lamplighter => { let $g = lamplighter(); $body }
            GroupDesc::IntegerWreath => { let $g = integer_wreath(); $body }
            GroupDesc::Iterated(k) => { let $g = IteratedWreath { level: *k }; $body }
            GroupDesc::Thompson => { let $g = ThompsonF; $body }
            GroupDesc::Table(p) => { let $g = table(p)?; $body }
        }
    };
}

impl GroupDesc {
    /// The word ball of the given radius as a metric space.
    pub fn word_ball(&self, radius: u32, cap: usize) -> Result<FiniteMetricSpace> {
        with_group!(self, g => Ok(word_ball(g, radius, cap)?))
    }

    /// `|B_r|` for `r = 0..=max_r`.
    pub fn ball_sizes(&self, max_r: u32, cap: usize) -> Result<BTreeMap<u64, u64>> {
        with_group!(self, g => Ok(ball_sizes(&g, max_r, cap)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceDesc {
    Path(usize),
    Cube(u32),
    Box(Vec<i64>),
    Ball(GroupDesc, u32),
}

impl FromStr for SpaceDesc {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = s.split_once(':').with_context(|| format!("space `{s}` needs a parameter"))?;
        Ok(match head {
            "zpath" => SpaceDesc::Path(positive(arg.parse().with_context(|| format!("bad length in `{s}`"))?, s)? as usize),
            "cube" => {
                let n: u32 = arg.parse().with_context(|| format!("bad dimension in `{s}`"))?;
                if n == 0 || n > MAX_CUBE_SPACE {
                    bail!("cube dimension must lie in 1..={MAX_CUBE_SPACE}");
                }
                SpaceDesc::Cube(n)
            }
            "box" => {
                let sides = arg
                    .split('x')
                    .map(|t| t.parse::<i64>().ok().filter(|&v| v >= 1))
                    .collect::<Option<Vec<_>>>()
                    .with_context(|| format!("box sides must be positive integers in `{s}`"))?;
                SpaceDesc::Box(sides)
            }
            "ball" => {
                let (group, radius) = arg
                    .rsplit_once(':')
                    .with_context(|| format!("`{s}` must read ball:<group>:<radius>"))?;
                let radius = radius.parse().with_context(|| format!("bad radius in `{s}`"))?;
                SpaceDesc::Ball(group.parse()?, radius)
            }
            _ => bail!("unknown space `{s}`"),
        })
    }
}

impl fmt::Display for SpaceDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceDesc::Path(n) => write!(f, "zpath:{n}"),
            SpaceDesc::Cube(n) => write!(f, "cube:{n}"),
            SpaceDesc::Box(sides) => {
                let parts: Vec<String> = sides.iter().map(i64::to_string).collect();
                write!(f, "box:{}", parts.join("x"))
            }
            SpaceDesc::Ball(g, r) => write!(f, "ball:{g}:{r}"),
        }
    }
}

impl SpaceDesc {
    /// Materializes the space; `cap` bounds the number of points.
    pub fn build(&self, cap: usize) -> Result<FiniteMetricSpace> {
        match self {
            SpaceDesc::Path(n) => {
                check_cap(*n as u128, cap)?;
                Ok(FiniteMetricSpace::path(*n))
            }
            SpaceDesc::Cube(n) => {
                check_cap(1u128 << n, cap)?;
                let width = *n as usize;
                Ok(FiniteMetricSpace::from_oracle(
                    (0..1u32 << n).map(|v| format!("{v:0width$b}")).collect(),
                    |i, j| Some(int(hamming(i as u32, j as u32) as i64)),
                ))
            }
            SpaceDesc::Box(sides) => {
                let b = LatticeBox::new(vec![0; sides.len()], sides.iter().map(|s| s - 1).collect())?;
                check_cap(b.len() as u128, cap)?;
                Ok(b.to_metric_space()?)
            }
            SpaceDesc::Ball(g, r) => g.word_ball(*r, cap),
        }
    }
}

fn check_cap(points: u128, cap: usize) -> Result<()> {
    if points > cap as u128 {
        return Err(dimgrowth::Error::ResourceLimit { what: "space points", needed: points, cap: cap as u128 }.into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors_round_trip_through_display() {
        for s in ["zpath:21", "cube:3", "box:3x4", "ball:f2:2", "ball:bk:2:3", "ball:zn:3:2"] {
            let d: SpaceDesc = s.parse().unwrap();
            let back = d.to_string().replace("free:2", "f2");
            assert_eq!(back, s);
        }
        for s in ["z", "zn:2", "free:3", "cyclic:5", "lamplighter", "zwrz", "bk:2", "thompson", "table:g.json"] {
            assert_eq!(s.parse::<GroupDesc>().unwrap().to_string(), s);
        }
        assert_eq!("z2wrz".parse::<GroupDesc>().unwrap(), GroupDesc::Lamplighter);
    }

    #[test]
    fn bad_descriptors_are_rejected() {
        for s in ["zpath", "zpath:0", "cube:0", "cube:40", "box:3x0", "ball:f2", "moon:3"] {
            assert!(s.parse::<SpaceDesc>().is_err(), "{s}");
        }
        for s in ["bk", "bk:0", "zn:x", "table:", "moon"] {
            assert!(s.parse::<GroupDesc>().is_err(), "{s}");
        }
    }

    #[test]
    fn spaces_have_the_expected_sizes() {
        assert_eq!("zpath:21".parse::<SpaceDesc>().unwrap().build(100).unwrap().len(), 21);
        assert_eq!("cube:3".parse::<SpaceDesc>().unwrap().build(100).unwrap().len(), 8);
        let b = "box:3x4".parse::<SpaceDesc>().unwrap().build(100).unwrap();
        assert_eq!(b.len(), 12);
        assert_eq!(b.diameter(), Some(int(5)));
        // The ball of radius 2 in F_2 has 1 + 4 + 12 elements.
        assert_eq!("ball:f2:2".parse::<SpaceDesc>().unwrap().build(100).unwrap().len(), 17);
        assert!("zpath:21".parse::<SpaceDesc>().unwrap().build(20).is_err());
    }

    #[test]
    fn ball_sizes_of_the_integers() {
        let sizes = GroupDesc::Integers.ball_sizes(3, 100).unwrap();
        assert_eq!(sizes.values().copied().collect::<Vec<_>>(), vec![1, 3, 5, 7]);
    }
}
