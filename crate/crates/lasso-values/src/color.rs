use automata_core::{int, EdgeId, Quatomaton, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    White,
    Green,
    Yellow,
    Red,
    Black,
}

/// Colour of an edge from a rank-`d` state into a rank-`d2` state.
pub fn color_of_edge(d: i64, d2: i64) -> Color {
    match d2 {
        -2 => Color::White,
        -1 => Color::Black,
        _ if d < d2 => Color::Yellow,
        _ if d2 % 2 == 0 => Color::Green,
        _ => Color::Red,
    }
}

/// Colour of edge `e` of a ranked automaton, using the sink rank for
/// sink-flagged edges.
pub fn edge_color(a: &Quatomaton, e: EdgeId) -> Option<Color> {
    Some(color_of_edge(a.rank(a.edge(e).from)?, a.edge_rank(e)?))
}

/// Multiplicities of white, green, yellow, red and black.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ColorCounts {
    pub white: u64,
    pub green: u64,
    pub yellow: u64,
    pub red: u64,
    pub black: u64,
}

impl ColorCounts {
    pub fn add(&mut self, c: Color) {
        match c {
            Color::White => self.white += 1,
            Color::Green => self.green += 1,
            Color::Yellow => self.yellow += 1,
            Color::Red => self.red += 1,
            Color::Black => self.black += 1,
        }
    }

    pub fn len(&self) -> u64 {
        self.white + self.green + self.yellow + self.red + self.black
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// White minus black.
    pub fn wb(&self) -> i64 {
        self.white as i64 - self.black as i64
    }

    /// Green minus red.
    pub fn gr(&self) -> i64 {
        self.green as i64 - self.red as i64
    }
}

/// Score of an infix; averaged scores divide both components by the length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScorePair {
    pub wb: Rational,
    pub gr: Rational,
}

impl ScorePair {
    pub fn zero() -> Self {
        ScorePair { wb: int(0), gr: int(0) }
    }

    pub fn of(counts: &ColorCounts) -> Self {
        ScorePair { wb: int(counts.wb()), gr: int(counts.gr()) }
    }

    pub fn averaged(counts: &ColorCounts) -> Self {
        if counts.is_empty() {
            return ScorePair::zero();
        }
        let l = int(counts.len() as i64);
        ScorePair { wb: int(counts.wb()) / &l, gr: int(counts.gr()) / &l }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfixScore {
    pub counts: ColorCounts,
    pub score: ScorePair,
    pub avgscore: ScorePair,
}

/// Counts, score and averaged score of a nonempty colour sequence.
pub fn score_infix(colors: &[Color]) -> Option<InfixScore> {
    if colors.is_empty() {
        return None;
    }
    let mut counts = ColorCounts::default();
    for &c in colors {
        counts.add(c);
    }
    Some(InfixScore { counts, score: ScorePair::of(&counts), avgscore: ScorePair::averaged(&counts) })
}

/// Edge weights C², C, 0, −C, −C² for white, green, yellow, red, black with
/// C one more than the edge count. Indexed by edge id.
pub fn robustness_edge_weights(a: &Quatomaton) -> Option<Vec<Rational>> {
    let c = a.edges().len() as i64 + 1;
    (0..a.edges().len())
        .map(|e| {
            Some(int(match edge_color(a, e)? {
                Color::White => c * c,
                Color::Green => c,
                Color::Yellow => 0,
                Color::Red => -c,
                Color::Black => -c * c,
            }))
        })
        .collect()
}
