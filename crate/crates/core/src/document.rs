//! JSON documents for states, point sets and cube slabs.
//!
//! Values are stored as strings so they round-trip exactly. Tropical values
//! are written with their `t:` prefix; the prefix is optional on input
//! because the document already names its semifield.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cube::LevelState;
use crate::error::{Error, Result};
use crate::lattice::{Domain, Point, Section, SectionState};
use crate::semifield::{Semifield, SemifieldKind};

fn parse_value<S: Semifield>(kind: SemifieldKind, text: &str) -> Result<S> {
    if kind != S::KIND {
        return Err(Error::InstanceMismatch);
    }
    let text = text.trim();
    if kind == SemifieldKind::Tropical && !text.starts_with("t:") {
        return format!("t:{text}").parse();
    }
    text.parse()
}

/// A section of a rectangle with values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDocument {
    pub domain: Domain,
    pub semifield: SemifieldKind,
    /// `heights[y][x]`
    pub heights: Vec<Vec<i64>>,
    /// `values[y][x]`
    pub values: Vec<Vec<String>>,
}

impl StateDocument {
    pub fn from_state<S: Semifield>(state: &SectionState<S>) -> Self {
        let section = state.section();
        StateDocument {
            domain: section.domain(),
            semifield: S::KIND,
            heights: section.heights().to_vec(),
            values: state.values().iter().map(|row| row.iter().map(ToString::to_string).collect()).collect(),
        }
    }

    pub fn to_state<S: Semifield>(&self) -> Result<SectionState<S>> {
        let Domain::Rectangle { m, n } = self.domain else {
            return Err(Error::InvalidDomain("state documents need a rectangle".into()));
        };
        let section = Section::checked(m, n, self.heights.clone())?;
        let values = self
            .values
            .iter()
            .map(|row| row.iter().map(|v| parse_value(self.semifield, v)).collect())
            .collect::<Result<Vec<Vec<S>>>>()?;
        SectionState::new(section, values)
    }
}

/// Values at an explicit list of points, for the triangle and half-plane
/// maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointsDocument {
    pub domain: Domain,
    pub n: i64,
    pub semifield: SemifieldKind,
    pub points: Vec<Point>,
    pub values: Vec<String>,
}

impl PointsDocument {
    pub fn from_map<S: Semifield>(domain: Domain, n: i64, values: &BTreeMap<Point, S>) -> Self {
        PointsDocument {
            domain,
            n,
            semifield: S::KIND,
            points: values.keys().copied().collect(),
            values: values.values().map(ToString::to_string).collect(),
        }
    }

    pub fn to_map<S: Semifield>(&self) -> Result<BTreeMap<Point, S>> {
        if self.points.len() != self.values.len() {
            return Err(Error::ShapeMismatch(format!("{} points but {} values", self.points.len(), self.values.len())));
        }
        self.points.iter().zip(&self.values).map(|(p, v)| Ok((*p, parse_value(self.semifield, v)?))).collect()
    }
}

/// Three consecutive levels of the cube prism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeDocument {
    pub n: i64,
    pub semifield: SemifieldKind,
    pub level: i64,
    pub slab: [Vec<String>; 3],
}

impl CubeDocument {
    pub fn from_state<S: Semifield>(state: &LevelState<S>) -> Self {
        CubeDocument {
            n: state.n(),
            semifield: S::KIND,
            level: state.level(),
            slab: state.slab().clone().map(|lv| lv.iter().map(ToString::to_string).collect()),
        }
    }

    pub fn to_state<S: Semifield>(&self) -> Result<LevelState<S>> {
        let parse = |lv: &Vec<String>| lv.iter().map(|v| parse_value(self.semifield, v)).collect::<Result<Vec<S>>>();
        let [a, b, c] = &self.slab;
        LevelState::new(self.n, self.level, [parse(a)?, parse(b)?, parse(c)?])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semifield::{MaxPlus, PosRational};

    #[test]
    fn state_round_trip() {
        let json = r#"{"domain":{"shape":"rectangle","m":1,"n":1},"semifield":"rational",
            "heights":[[0,1],[1,0]],"values":[["1","2"],["3","6/4"]]}"#;
        let doc: StateDocument = serde_json::from_str(json).unwrap();
        let state: SectionState<PosRational> = doc.to_state().unwrap();
        assert_eq!(state.value(1, 1), &"3/2".parse().unwrap());
        let back = StateDocument::from_state(&state);
        assert_eq!(back.values[1][1], "3/2");
        assert_eq!(back.to_state::<PosRational>().unwrap(), state);
        assert_eq!(doc.to_state::<MaxPlus>(), Err(Error::InstanceMismatch));
    }

    #[test]
    fn tropical_prefix_is_optional() {
        let json = r#"{"domain":{"shape":"rectangle","m":1,"n":1},"semifield":"tropical",
            "heights":[[0,1],[1,0]],"values":[["1","t:-2"],["0.5","t:7/3"]]}"#;
        let doc: StateDocument = serde_json::from_str(json).unwrap();
        let state: SectionState<MaxPlus> = doc.to_state().unwrap();
        assert_eq!(StateDocument::from_state(&state).values, vec![vec!["t:1", "t:-2"], vec!["t:1/2", "t:7/3"]]);
    }

    #[test]
    fn bad_documents() {
        let bad_heights = r#"{"domain":{"shape":"rectangle","m":1,"n":1},"semifield":"rational",
            "heights":[[0,1],[1,2],[0,0]],"values":[["1","1"],["1","1"]]}"#;
        let doc: StateDocument = serde_json::from_str(bad_heights).unwrap();
        assert!(matches!(doc.to_state::<PosRational>(), Err(Error::ShapeMismatch(_))));
        let negative = r#"{"domain":{"shape":"rectangle","m":1,"n":1},"semifield":"rational",
            "heights":[[0,1],[1,0]],"values":[["1","-1"],["1","1"]]}"#;
        let doc: StateDocument = serde_json::from_str(negative).unwrap();
        assert!(doc.to_state::<PosRational>().is_err());
    }

    #[test]
    fn cube_round_trip() {
        let s = LevelState::from_fn(2, 1, |p| PosRational::from_integer((p.x + 5) as u64).unwrap()).unwrap();
        let doc = CubeDocument::from_state(&s);
        let text = serde_json::to_string(&doc).unwrap();
        let back: CubeDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_state::<PosRational>().unwrap(), s);
    }

    #[test]
    fn points_round_trip() {
        let map: BTreeMap<Point, PosRational> =
            [(Point::new(0, 0, -1), "2".parse().unwrap()), (Point::new(1, 0, 0), "1/3".parse().unwrap())].into();
        let doc = PointsDocument::from_map(Domain::Quadrant, 1, &map);
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.contains(r#""shape":"quadrant""#));
        let back: PointsDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_map::<PosRational>().unwrap(), map);
    }
}
