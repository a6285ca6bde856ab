use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// A permutation of `{0, .., degree - 1}` stored as its image array.
///
/// Permutations act on the right: the image of point `i` under `p * q` is
/// `q(p(i))`. Conjugation `x^g` is `g^-1 x g` and the commutator `[a, b]` is
/// `a^-1 b^-1 a b`. Points are 0-based in memory and 1-based in every
/// textual form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u32]>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images, rejecting non-bijections.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::invalid(format!(
                    "image array {:?} is not a bijection on 1..{}",
                    images.iter().map(|v| v + 1).collect::<Vec<_>>(),
                    n
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation {
            images: images.into_boxed_slice(),
        })
    }

    /// Builds a permutation from 1-based images.
    pub fn from_one_based(images: &[u64]) -> Result<Self> {
        let mut zero = Vec::with_capacity(images.len());
        for &x in images {
            if x == 0 || x > images.len() as u64 {
                return Err(Error::invalid(format!(
                    "image array {:?} is not a bijection on 1..{}",
                    images,
                    images.len()
                )));
            }
            zero.push((x - 1) as u32);
        }
        Self::from_images(zero)
    }

    /// Parses cycle notation such as `"(1 2)(3 4 5)"` or `"()"`.
    ///
    /// The degree is the larger of `min_degree` and the largest point named.
    pub fn parse_cycles(text: &str, min_degree: usize) -> Result<Self> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(Error::invalid(format!("malformed cycle string {text:?}")));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| Error::invalid(format!("unclosed cycle in {text:?}")))?;
            let body = &rest[1..close];
            let mut cycle = Vec::new();
            for tok in body.split(|c: char| c == ',' || c.is_whitespace()) {
                if tok.is_empty() {
                    continue;
                }
                let p: usize = tok
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad point {tok:?} in {text:?}")))?;
                if p == 0 {
                    return Err(Error::invalid(format!("points are 1-based, got 0 in {text:?}")));
                }
                cycle.push(p - 1);
            }
            cycles.push(cycle);
            rest = rest[close + 1..].trim_start();
        }
        let degree = cycles
            .iter()
            .flatten()
            .map(|&p| p + 1)
            .max()
            .unwrap_or(0)
            .max(min_degree);
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in &cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if touched[p] {
                    return Err(Error::invalid(format!(
                        "point {} repeated in cycle string {text:?}",
                        p + 1
                    )));
                }
                touched[p] = true;
                images[p] = cycle[(k + 1) % cycle.len()] as u32;
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation {
            images: inv.into_boxed_slice(),
        }
    }

    /// `self * other`: first `self`, then `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    /// `self * other^-1` without materialising the inverse.
    pub fn compose_inverse(&self, other: &Permutation) -> Permutation {
        let mut out = vec![0u32; self.degree()];
        for (i, &x) in other.images.iter().enumerate() {
            out[x as usize] = i as u32;
        }
        Permutation {
            images: self.images.iter().map(|&x| out[x as usize]).collect(),
        }
    }

    pub fn pow(&self, mut e: i64) -> Permutation {
        let mut base = if e < 0 {
            e = -e;
            self.inverse()
        } else {
            self.clone()
        };
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// `g^-1 * self * g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().compose(self).compose(g)
    }

    /// `[self, other] = self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.inverse()
            .compose(&other.inverse())
            .compose(self)
            .compose(other)
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.images
            .iter()
            .zip(other.images.iter())
            .all(|(&a, &b)| other.images[a as usize] == self.images[b as usize])
    }

    /// Element order (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.degree()];
        let mut acc: u64 = 1;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.apply(p);
                len += 1;
            }
            acc = lcm(acc, len);
        }
        acc
    }

    /// Smallest point moved, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i)
    }

    /// Pads with fixed points up to `degree`.
    pub fn extend(&self, degree: usize) -> Result<Permutation> {
        if degree < self.degree() {
            return Err(Error::invalid(format!(
                "permutation {} does not fit in degree {}",
                self,
                degree
            )));
        }
        let mut images = self.images.to_vec();
        images.extend(self.degree() as u32..degree as u32);
        Ok(Permutation {
            images: images.into_boxed_slice(),
        })
    }

    /// Disjoint product acting on `self.degree() + other.degree()` points.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let shift = self.degree() as u32;
        let images = self
            .images
            .iter()
            .copied()
            .chain(other.images.iter().map(|&x| x + shift))
            .collect();
        Permutation { images }
    }

    /// Restriction to the points `offset..offset + len`, which must be invariant.
    pub fn slice(&self, offset: usize, len: usize) -> Permutation {
        let images = self.images[offset..offset + len]
            .iter()
            .map(|&x| x - offset as u32)
            .collect();
        Permutation { images }
    }

    pub fn to_one_based(&self) -> Vec<u64> {
        self.images.iter().map(|&x| x as u64 + 1).collect()
    }

    /// Cycle notation with 1-based points; the identity prints as `()`.
    pub fn cycle_string(&self) -> String {
        let mut out = String::new();
        let mut seen = vec![false; self.degree()];
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            out.push('(');
            let mut p = start;
            let mut first = true;
            while !seen[p] {
                seen[p] = true;
                if !first {
                    out.push(' ');
                }
                out.push_str(&(p + 1).to_string());
                first = false;
                p = self.apply(p);
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl Mul for &Permutation {
    type Output = Permutation;
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.cycle_string(), self.degree())
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
