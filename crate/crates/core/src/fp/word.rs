use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A group word as signed 1-based generator indices (`-k` is the inverse of
/// generator `k`).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<i32>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<i32>) -> Self {
        Word(letters).reduced()
    }

    /// Single letter for 0-based generator `g`.
    pub fn gen(g: usize) -> Self {
        Word(vec![g as i32 + 1])
    }

    pub fn gen_inv(g: usize) -> Self {
        Word(vec![-(g as i32 + 1)])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Free reduction.
    pub fn reduced(self) -> Self {
        let mut out: Vec<i32> = Vec::with_capacity(self.0.len());
        for l in self.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v).reduced()
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * e.unsigned_abs() as usize);
        for _ in 0..e.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word(v).reduced()
    }

    /// Largest 0-based generator index used, plus one.
    pub fn generator_span(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Replaces every letter by a word.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut v = Vec::new();
        for &l in &self.0 {
            let w = &images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                v.extend_from_slice(&w.0);
            } else {
                v.extend_from_slice(&w.inverse().0);
            }
        }
        Word(v).reduced()
    }

    /// Product of generator images, left to right.
    pub fn evaluate(&self, images: &[Permutation], degree: usize) -> Result<Permutation> {
        let mut acc = Permutation::identity(degree);
        for &l in &self.0 {
            let g = images
                .get(l.unsigned_abs() as usize - 1)
                .ok_or_else(|| Error::invalid(format!("word uses generator {} of {}", l.abs(), images.len())))?;
            acc = if l > 0 { acc.compose(g) } else { acc.compose_inverse(g) };
        }
        Ok(acc)
    }

    /// Space-separated labels with `^-1` on inverse letters.
    pub fn render(&self, labels: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&l| {
                let name = &labels[l.unsigned_abs() as usize - 1];
                if l > 0 {
                    name.clone()
                } else {
                    format!("{name}^-1")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses words like `"a^3"`, `"(a b)^2"`, `"b^-1 a b a"` or `"1"`.
    pub fn parse(text: &str, labels: &[String]) -> Result<Word> {
        let tokens = tokenize(text)?;
        let mut pos = 0;
        let w = parse_seq(&tokens, &mut pos, labels, text)?;
        if pos != tokens.len() {
            return Err(Error::invalid(format!("unexpected {:?} in word {text:?}", tokens[pos])));
        }
        Ok(w.reduced())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Open,
    Close,
    Pow(i64),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() || c == '*' {
            i += 1;
        } else if c == '(' {
            out.push(Token::Open);
            i += 1;
        } else if c == ')' {
            out.push(Token::Close);
            i += 1;
        } else if c == '^' {
            i += 1;
            let start = i;
            if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let e: i64 = s
                .parse()
                .map_err(|_| Error::invalid(format!("bad exponent {s:?} in {text:?}")))?;
            out.push(Token::Pow(e));
        } else if c.is_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else {
            return Err(Error::invalid(format!("unexpected character {c:?} in word {text:?}")));
        }
    }
    Ok(out)
}

fn parse_seq(tokens: &[Token], pos: &mut usize, labels: &[String], text: &str) -> Result<Word> {
    let mut acc = Word::empty();
    while *pos < tokens.len() {
        let atom = match &tokens[*pos] {
            Token::Close => break,
            Token::Open => {
                *pos += 1;
                let inner = parse_seq(tokens, pos, labels, text)?;
                if tokens.get(*pos) != Some(&Token::Close) {
                    return Err(Error::invalid(format!("unbalanced parentheses in {text:?}")));
                }
                *pos += 1;
                inner
            }
            Token::Ident(name) => {
                *pos += 1;
                if name == "1" || name == "e" && !labels.iter().any(|l| l == "e") {
                    Word::empty()
                } else {
                    let g = labels
                        .iter()
                        .position(|l| l == name)
                        .ok_or_else(|| Error::invalid(format!("unknown generator {name:?} in {text:?}")))?;
                    Word::gen(g)
                }
            }
            Token::Pow(_) => return Err(Error::invalid(format!("dangling exponent in {text:?}"))),
        };
        let atom = if let Some(Token::Pow(e)) = tokens.get(*pos) {
            *pos += 1;
            atom.pow(*e)
        } else {
            atom
        };
        acc = acc.concat(&atom);
    }
    Ok(acc)
}
