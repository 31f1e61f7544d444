//! Text and JSON forms of games.
//!
//! Text: numbers as `p/q` (or plain integers), nodes as `<L1,L2|R1>`.
//! Whitespace is ignored.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{Game, GameId, GameStore};
use crate::{Error, Result, Scalar};

pub(super) fn write_game<S: Scalar>(store: &GameStore<S>, g: GameId, out: &mut String) {
    match store.get(g) {
        Game::Number(s) => {
            let _ = write!(out, "{s}");
        }
        Game::Node { left, right } => {
            out.push('<');
            for (i, &x) in left.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_game(store, x, out);
            }
            out.push('|');
            for (i, &x) in right.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_game(store, x, out);
            }
            out.push('>');
        }
    }
}

pub(super) fn parse<S: Scalar>(store: &mut GameStore<S>, text: &str) -> Result<GameId> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let g = parse_game(store, &chars, &mut pos)?;
    if pos != chars.len() {
        return Err(Error::Parse(format!("trailing input at offset {pos} in {text:?}")));
    }
    Ok(g)
}

fn parse_game<S: Scalar>(store: &mut GameStore<S>, s: &[char], pos: &mut usize) -> Result<GameId> {
    match s.get(*pos) {
        Some('<') => {
            *pos += 1;
            let left = parse_list(store, s, pos, '|')?;
            let right = parse_list(store, s, pos, '>')?;
            store.node(left, right)
        }
        Some(_) => {
            let start = *pos;
            while *pos < s.len() && (s[*pos].is_ascii_digit() || matches!(s[*pos], '-' | '/' | '+')) {
                *pos += 1;
            }
            let token: String = s[start..*pos].iter().collect();
            let value = token
                .parse::<S>()
                .map_err(|_| Error::Parse(format!("bad number {token:?} at offset {start}")))?;
            Ok(store.number(value))
        }
        None => Err(Error::Parse("unexpected end of game".into())),
    }
}

fn parse_list<S: Scalar>(store: &mut GameStore<S>, s: &[char], pos: &mut usize, end: char) -> Result<Vec<GameId>> {
    let mut out = Vec::new();
    if s.get(*pos) == Some(&end) {
        *pos += 1;
        return Ok(out);
    }
    loop {
        out.push(parse_game(store, s, pos)?);
        match s.get(*pos) {
            Some(&c) if c == end => {
                *pos += 1;
                return Ok(out);
            }
            Some(',') => *pos += 1,
            other => {
                return Err(Error::Parse(format!(
                    "expected ',' or {end:?} at offset {}, found {other:?}",
                    *pos
                )))
            }
        }
    }
}

/// Owned game tree, for JSON exchange.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GameTree {
    /// Exact rational as text, e.g. `"-3"` or `"7/2"`.
    Number {
        number: String,
    },
    Node {
        left: Vec<GameTree>,
        right: Vec<GameTree>,
    },
}

impl<S: Scalar> GameStore<S> {
    pub fn to_tree(&self, g: GameId) -> GameTree {
        match self.get(g) {
            Game::Number(s) => GameTree::Number { number: s.to_string() },
            Game::Node { left, right } => GameTree::Node {
                left: left.iter().map(|&x| self.to_tree(x)).collect(),
                right: right.iter().map(|&x| self.to_tree(x)).collect(),
            },
        }
    }

    pub fn from_tree(&mut self, tree: &GameTree) -> Result<GameId> {
        match tree {
            GameTree::Number { number } => {
                let v = number
                    .parse::<S>()
                    .map_err(|_| Error::Parse(format!("bad number {number:?}")))?;
                Ok(self.number(v))
            }
            GameTree::Node { left, right } => {
                let l = left.iter().map(|t| self.from_tree(t)).collect::<Result<Vec<_>>>()?;
                let r = right.iter().map(|t| self.from_tree(t)).collect::<Result<Vec<_>>>()?;
                self.node(l, r)
            }
        }
    }

    pub fn to_json(&self, g: GameId) -> String {
        serde_json::to_string(&self.to_tree(g)).expect("game trees always serialize")
    }

    pub fn from_json(&mut self, text: &str) -> Result<GameId> {
        let tree: GameTree = serde_json::from_str(text)?;
        self.from_tree(&tree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn text_round_trip() {
        let mut st = GameStore::<Rational>::new();
        for text in ["0", "-7/2", "<5|<-1|-5>>", "<1,<2|1/2>|-3>"] {
            let g = st.parse(text).unwrap();
            let again = st.parse(&st.display(g)).unwrap();
            assert_eq!(g, again, "{text}");
        }
        let g = st.parse(" < 5 | < -1 | -5 > > ").unwrap();
        assert_eq!(st.display(g), "<5|<-1|-5>>");
    }

    #[test]
    fn parse_errors() {
        let mut st = GameStore::<Rational>::new();
        for bad in ["", "<1|", "<1|2", "<|2>", "<1|2>>", "x", "<1;2|3>", "1/0x"] {
            assert!(st.parse(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn json_round_trip() {
        let mut st = GameStore::<Rational>::new();
        let g = st.parse("<5,1/2|<-1|-5>>").unwrap();
        let json = st.to_json(g);
        assert_eq!(st.from_json(&json).unwrap(), g);
        assert!(st.from_json(r#"{"left":[],"right":[{"number":"1"}]}"#).is_err());
    }
}
