//! Vertex colorings, class-size profiles, and the equitability predicates.

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error)]
pub enum ColoringError {
    #[error("empty input")]
    EmptyInput,
    #[error("malformed line: {0:?}")]
    BadLine(String),
    #[error("color {color} of vertex {vertex} outside 1..={k}")]
    ColorOutOfRange { vertex: usize, color: usize, k: usize },
    #[error("vertex {0} out of range for n = {1}")]
    VertexOutOfRange(usize, usize),
    #[error("vertex {0} assigned more than once")]
    DuplicateVertex(usize),
    #[error("vertex {0} has no color")]
    MissingVertex(usize),
    #[error("coloring covers {coloring_n} vertices but graph has {graph_n}")]
    SizeMismatch { graph_n: usize, coloring_n: usize },
    #[error("special color {special} outside 1..={k}")]
    SpecialOutOfRange { special: usize, k: usize },
}

/// A total assignment of colors `1..=k` to vertices `0..n`.
///
/// Classes may be empty; `k` is part of the coloring, not derived from the
/// colors actually used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<usize>,
    k: usize,
}

impl Coloring {
    pub fn new(colors: Vec<usize>, k: usize) -> Result<Self, ColoringError> {
        for (v, &c) in colors.iter().enumerate() {
            if c < 1 || c > k {
                return Err(ColoringError::ColorOutOfRange { vertex: v, color: c, k });
            }
        }
        Ok(Coloring { colors, k })
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn profile(&self) -> ClassProfile {
        let mut sizes = vec![0usize; self.k];
        for &c in &self.colors {
            sizes[c - 1] += 1;
        }
        ClassProfile { sizes }
    }

    /// Vertices of color `c`, in increasing order.
    pub fn class(&self, c: usize) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.colors[v] == c).collect()
    }

    pub fn colors_used(&self) -> usize {
        self.profile().sizes.iter().filter(|&&s| s > 0).count()
    }

    /// Reinterprets the same assignment with a larger color count.
    pub fn widen(&self, k: usize) -> Coloring {
        assert!(k >= self.k);
        Coloring { colors: self.colors.clone(), k }
    }

    pub fn is_equitable(&self) -> bool {
        self.profile().is_equitable()
    }

    pub fn is_strong_equitable(&self) -> bool {
        self.profile().is_strong_equitable()
    }

    pub fn is_semi_equitable(&self, special: usize) -> Result<bool, ColoringError> {
        self.profile().is_semi_equitable(special)
    }

    /// Text format: header `n k`, then one `vertex color` line per vertex.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.k);
        for (v, &c) in self.colors.iter().enumerate() {
            out.push_str(&format!("{} {}\n", v, c));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ColoringError> {
        let mut lines = text.lines().filter_map(|line| {
            let data = line.split('#').next().unwrap_or("").trim();
            if data.is_empty() {
                None
            } else {
                Some(data)
            }
        });
        let header = lines.next().ok_or(ColoringError::EmptyInput)?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ColoringError::BadLine(header.to_string()))?;
        let k: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ColoringError::BadLine(header.to_string()))?;
        let mut colors = vec![0usize; n];
        let mut seen = vec![false; n];
        for line in lines {
            let mut it = line.split_whitespace();
            let v: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| ColoringError::BadLine(line.to_string()))?;
            let c: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| ColoringError::BadLine(line.to_string()))?;
            if v >= n {
                return Err(ColoringError::VertexOutOfRange(v, n));
            }
            if seen[v] {
                return Err(ColoringError::DuplicateVertex(v));
            }
            seen[v] = true;
            colors[v] = c;
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(ColoringError::MissingVertex(v));
        }
        Coloring::new(colors, k)
    }
}

/// Class-size list `[|V_1|, ..., |V_k|]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassProfile {
    sizes: Vec<usize>,
}

impl ClassProfile {
    pub fn new(sizes: Vec<usize>) -> Self {
        ClassProfile { sizes }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// All pairs of classes (including empty ones) differ in size by at most 1.
    pub fn is_equitable(&self) -> bool {
        match (self.sizes.iter().max(), self.sizes.iter().min()) {
            (Some(max), Some(min)) => max - min <= 1,
            _ => true,
        }
    }

    pub fn is_strong_equitable(&self) -> bool {
        self.sizes.windows(2).all(|w| w[0] == w[1])
    }

    /// The special class has size outside {floor(n/k), ceil(n/k)} and the
    /// remaining classes pairwise differ by at most 1.
    pub fn is_semi_equitable(&self, special: usize) -> Result<bool, ColoringError> {
        let k = self.sizes.len();
        if special < 1 || special > k {
            return Err(ColoringError::SpecialOutOfRange { special, k });
        }
        let n = self.total();
        let lo = n / k;
        let hi = n.div_ceil(k);
        let s = self.sizes[special - 1];
        if s == lo || s == hi {
            return Ok(false);
        }
        let rest: Vec<usize> = self
            .sizes
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != special - 1)
            .map(|(_, &v)| v)
            .collect();
        let max = rest.iter().max().copied().unwrap_or(0);
        let min = rest.iter().min().copied().unwrap_or(0);
        Ok(max - min <= 1)
    }
}

/// True iff no edge of `g` is monochromatic under `c`.
pub fn verify_proper(g: &Graph, c: &Coloring) -> Result<bool, ColoringError> {
    if g.n() != c.n() {
        return Err(ColoringError::SizeMismatch {
            graph_n: g.n(),
            coloring_n: c.n(),
        });
    }
    Ok(g.edges().iter().all(|&(u, v)| c.color(u) != c.color(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn coloring(colors: &[usize], k: usize) -> Coloring {
        Coloring::new(colors.to_vec(), k).unwrap()
    }

    #[test]
    fn proper_on_k4() {
        let k4 = generate::k4();
        assert!(verify_proper(&k4, &coloring(&[1, 2, 3, 4], 4)).unwrap());
        assert!(!verify_proper(&k4, &coloring(&[1, 1, 2, 3], 4)).unwrap());
    }

    #[test]
    fn proper_on_k33_bipartition() {
        let g = generate::k33();
        let (a, b) = g.bipartition().unwrap();
        let mut colors = vec![0usize; 6];
        for &v in &a {
            colors[v] = 1;
        }
        for &v in &b {
            colors[v] = 2;
        }
        assert!(verify_proper(&g, &coloring(&colors, 2)).unwrap());
    }

    #[test]
    fn proper_size_mismatch() {
        let err = verify_proper(&generate::k4(), &coloring(&[1, 2, 3], 3)).unwrap_err();
        assert!(matches!(err, ColoringError::SizeMismatch { .. }));
    }

    #[test]
    fn equitable_profiles() {
        assert!(ClassProfile::new(vec![2, 2, 2]).is_equitable());
        assert!(ClassProfile::new(vec![3, 3]).is_equitable());
        assert!(!ClassProfile::new(vec![4, 1, 1]).is_equitable());
        // Empty classes count: a 3-coloring leaving class 3 empty on n=6.
        assert!(!ClassProfile::new(vec![3, 3, 0]).is_equitable());
    }

    #[test]
    fn strong_equitable_profiles() {
        assert!(ClassProfile::new(vec![2, 2, 2]).is_strong_equitable());
        assert!(!ClassProfile::new(vec![3, 2, 2]).is_strong_equitable());
    }

    #[test]
    fn semi_equitable_profiles() {
        // n=20, k=5: special class exactly n/k is not special.
        assert!(!ClassProfile::new(vec![4, 4, 4, 4, 4]).is_semi_equitable(5).unwrap());
        assert!(ClassProfile::new(vec![5, 5, 5, 5, 0]).is_semi_equitable(5).unwrap());
        // n=12 seed of type [3,3,3,3,0].
        assert!(ClassProfile::new(vec![3, 3, 3, 3, 0]).is_semi_equitable(5).unwrap());
        assert!(matches!(
            ClassProfile::new(vec![1, 1]).is_semi_equitable(3),
            Err(ColoringError::SpecialOutOfRange { .. })
        ));
    }

    #[test]
    fn coloring_file_round_trip() {
        let c = coloring(&[1, 2, 3, 4], 4);
        let text = c.to_text();
        assert_eq!(Coloring::parse(&text).unwrap(), c);
    }

    #[test]
    fn coloring_file_errors() {
        assert!(matches!(
            Coloring::parse("2 2\n0 1\n0 2\n"),
            Err(ColoringError::DuplicateVertex(0))
        ));
        assert!(matches!(
            Coloring::parse("2 2\n0 1\n"),
            Err(ColoringError::MissingVertex(1))
        ));
        assert!(matches!(
            Coloring::parse("1 2\n0 5\n"),
            Err(ColoringError::ColorOutOfRange { .. })
        ));
    }
}
