//! The appendix tables for bases `b = 5·2ⁿ`, as literal data.
//!
//! Rows are keyed by `(p, q)` meaning the pair `2ⁿ·(p, q)`; columns are
//! indexed by `n mod 4`. Nothing here is computed: [`super::verify`]
//! compares every entry against measured dynamics.

use serde::Serialize;

use crate::error::{Error, Result};

/// `coef·n + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Linear {
    pub coef: u32,
    pub offset: u32,
}

impl Linear {
    pub const fn new(coef: u32, offset: u32) -> Self {
        Linear { coef, offset }
    }

    pub const fn constant(offset: u32) -> Self {
        Linear { coef: 0, offset }
    }

    pub fn eval(&self, n: u32) -> u32 {
        self.coef * n + self.offset
    }
}

impl std::fmt::Display for Linear {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.coef, self.offset) {
            (0, c) => write!(f, "{c}"),
            (1, 0) => write!(f, "n"),
            (1, c) => write!(f, "n+{c}"),
            (a, 0) => write!(f, "{a}n"),
            (a, c) => write!(f, "{a}n+{c}"),
        }
    }
}

const fn lin(coef: u32, offset: u32) -> Linear {
    Linear::new(coef, offset)
}

type Class = (u32, u32);

/// Pair reached from `2ⁿ·start` after exactly `n + 1` steps.
pub struct Table1Row {
    pub start: Class,
    pub after_n_plus_one: [Class; 4],
}

pub const TABLE1: [Table1Row; 10] = [
    Table1Row {
        start: (1, 0),
        after_n_plus_one: [(1, 0), (4, 3), (2, 1), (3, 2)],
    },
    Table1Row {
        start: (2, 0),
        after_n_plus_one: [(4, 3), (2, 1), (3, 2), (1, 0)],
    },
    Table1Row {
        start: (3, 0),
        after_n_plus_one: [(3, 2), (1, 0), (4, 3), (2, 1)],
    },
    Table1Row {
        start: (4, 0),
        after_n_plus_one: [(2, 1), (3, 2), (1, 0), (4, 3)],
    },
    Table1Row {
        start: (4, 1),
        after_n_plus_one: [(4, 2), (2, 0), (4, 2), (2, 0)],
    },
    Table1Row {
        start: (1, 1),
        after_n_plus_one: [(4, 2), (2, 0), (4, 2), (2, 0)],
    },
    Table1Row {
        start: (4, 4),
        after_n_plus_one: [(4, 2), (2, 0), (4, 2), (2, 0)],
    },
    Table1Row {
        start: (3, 2),
        after_n_plus_one: [(2, 0), (4, 2), (2, 0), (4, 2)],
    },
    Table1Row {
        start: (2, 2),
        after_n_plus_one: [(2, 0), (4, 2), (2, 0), (4, 2)],
    },
    Table1Row {
        start: (3, 3),
        after_n_plus_one: [(2, 0), (4, 2), (2, 0), (4, 2)],
    },
];

/// The five classes outside the table body, each settled in one step.
pub const TABLE1_ONE_STEP: [(Class, Class); 5] = [
    ((0, 0), (0, 0)),
    ((2, 1), (3, 1)),
    ((3, 1), (3, 1)),
    ((4, 2), (3, 1)),
    ((4, 3), (3, 1)),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Table1Entry {
    pub pair: Class,
    pub steps: u32,
}

pub fn appendix_table1_trajectory(p: u32, q: u32, n: u32) -> Result<Table1Entry> {
    if let Some(row) = TABLE1.iter().find(|r| r.start == (p, q)) {
        return Ok(Table1Entry {
            pair: row.after_n_plus_one[(n % 4) as usize],
            steps: n + 1,
        });
    }
    if let Some(&(_, to)) = TABLE1_ONE_STEP.iter().find(|(from, _)| *from == (p, q)) {
        return Ok(Table1Entry { pair: to, steps: 1 });
    }
    Err(Error::NotInTable {
        p,
        q,
        table: "the divisible-pair trajectory table",
    })
}

/// Starting pair of a witness row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Start {
    Pair(u32, u32),
    /// `(b / divisor, second)`
    BaseOver {
        divisor: u32,
        second: u32,
    },
}

impl Start {
    /// Concrete pair components for `b = 5·2ⁿ`, when the row applies.
    pub fn resolve(&self, b: u32) -> Option<(u32, u32)> {
        match *self {
            Start::Pair(u, v) => Some((u, v)),
            Start::BaseOver { divisor, second } => {
                let first = b / divisor;
                // the caption asks for a first coordinate strictly above 5
                (b.is_multiple_of(divisor) && first > second).then_some((first, second))
            }
        }
    }
}

impl std::fmt::Display for Start {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Start::Pair(u, v) => write!(f, "({u},{v})"),
            Start::BaseOver { divisor, second } => write!(f, "(b/{divisor},{second})"),
        }
    }
}

/// Starting pairs that attain the landing bound.
pub struct Table2Row {
    pub start: Start,
    pub steps: Linear,
    pub landing: [Class; 4],
}

pub const TABLE2: [Table2Row; 9] = [
    Table2Row {
        start: Start::Pair(4, 1),
        steps: lin(1, 0),
        landing: [(4, 1); 4],
    },
    Table2Row {
        start: Start::Pair(5, 1),
        steps: lin(1, 0),
        landing: [(4, 0); 4],
    },
    Table2Row {
        start: Start::Pair(5, 2),
        steps: lin(1, 0),
        landing: [(3, 0); 4],
    },
    Table2Row {
        start: Start::Pair(9, 1),
        steps: lin(2, 0),
        landing: [(2, 0), (4, 2), (2, 0), (4, 2)],
    },
    Table2Row {
        start: Start::Pair(7, 3),
        steps: lin(2, 0),
        landing: [(4, 2), (2, 0), (4, 2), (2, 0)],
    },
    Table2Row {
        start: Start::BaseOver {
            divisor: 2,
            second: 5,
        },
        steps: lin(2, 2),
        landing: [(3, 2), (1, 0), (4, 3), (2, 1)],
    },
    Table2Row {
        start: Start::BaseOver {
            divisor: 4,
            second: 5,
        },
        steps: lin(2, 2),
        landing: [(2, 1), (3, 2), (1, 0), (4, 3)],
    },
    Table2Row {
        start: Start::BaseOver {
            divisor: 8,
            second: 5,
        },
        steps: lin(2, 2),
        landing: [(4, 3), (2, 1), (3, 2), (1, 0)],
    },
    Table2Row {
        start: Start::BaseOver {
            divisor: 16,
            second: 5,
        },
        steps: lin(2, 2),
        landing: [(1, 0), (4, 3), (2, 1), (3, 2)],
    },
];

/// Integer steps to the fixed numeral from a numeral with pair `2ⁿ·(p, q)`;
/// `None` where the orbit cycles instead.
pub struct Table3Row {
    pub start: Class,
    pub steps: [Option<Linear>; 4],
}

const C2: Option<Linear> = Some(lin(0, 2));
const N3: Option<Linear> = Some(lin(1, 3));
const N2_4: Option<Linear> = Some(lin(2, 4));
const N3_5: Option<Linear> = Some(lin(3, 5));
const N4_6: Option<Linear> = Some(lin(4, 6));

pub const TABLE3: [Table3Row; 13] = [
    Table3Row {
        start: (2, 1),
        steps: [C2; 4],
    },
    Table3Row {
        start: (4, 2),
        steps: [C2; 4],
    },
    Table3Row {
        start: (4, 3),
        steps: [C2; 4],
    },
    Table3Row {
        start: (1, 0),
        steps: [None, N3, N3, N2_4],
    },
    Table3Row {
        start: (2, 0),
        steps: [N3, N3, None, N3_5],
    },
    Table3Row {
        start: (3, 0),
        steps: [N2_4, N2_4, N3, N3],
    },
    Table3Row {
        start: (4, 0),
        steps: [N3, N2_4, N2_4, N3],
    },
    Table3Row {
        start: (4, 1),
        steps: [N3, N2_4, N3, N4_6],
    },
    Table3Row {
        start: (1, 1),
        steps: [N3, N2_4, N3, N4_6],
    },
    Table3Row {
        start: (4, 4),
        steps: [N3, N2_4, N3, N4_6],
    },
    Table3Row {
        start: (3, 2),
        steps: [N2_4, N3, None, N3],
    },
    Table3Row {
        start: (2, 2),
        steps: [N2_4, N3, None, N3],
    },
    Table3Row {
        start: (3, 3),
        steps: [N2_4, N3, None, N3],
    },
];

pub fn appendix_table3_steps(p: u32, q: u32, n: u32) -> Result<Option<u32>> {
    TABLE3
        .iter()
        .find(|r| r.start == (p, q))
        .map(|r| r.steps[(n % 4) as usize].map(|e| e.eval(n)))
        .ok_or(Error::NotInTable {
            p,
            q,
            table: "the steps-from-divisible-pair table",
        })
}

/// Entry of the total-step table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "steps", rename_all = "kebab-case")]
pub enum Table4Entry {
    /// Tight bound on the steps to the fixed numeral.
    FixedPoint(Linear),
    /// The orbit cycles; steps until it first reaches a periodic numeral.
    Cycle(Linear),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "steps", rename_all = "kebab-case")]
pub enum Table4Value {
    FixedPoint(u32),
    Cycle(u32),
}

impl Table4Entry {
    pub fn eval(&self, n: u32) -> Table4Value {
        match self {
            Table4Entry::FixedPoint(e) => Table4Value::FixedPoint(e.eval(n)),
            Table4Entry::Cycle(e) => Table4Value::Cycle(e.eval(n)),
        }
    }
}

pub struct Table4Row {
    pub first: Class,
    pub bound: [Table4Entry; 4],
}

const fn fp(coef: u32, offset: u32) -> Table4Entry {
    Table4Entry::FixedPoint(lin(coef, offset))
}

const fn cy(coef: u32, offset: u32) -> Table4Entry {
    Table4Entry::Cycle(lin(coef, offset))
}

pub const TABLE4: [Table4Row; 15] = [
    Table4Row {
        first: (2, 1),
        bound: [fp(2, 4); 4],
    },
    Table4Row {
        first: (4, 2),
        bound: [fp(2, 2); 4],
    },
    Table4Row {
        first: (4, 3),
        bound: [fp(2, 4); 4],
    },
    Table4Row {
        first: (1, 0),
        bound: [cy(2, 3), fp(3, 5), fp(3, 5), fp(4, 6)],
    },
    Table4Row {
        first: (2, 0),
        bound: [fp(3, 3), fp(3, 3), cy(2, 1), fp(5, 5)],
    },
    Table4Row {
        first: (3, 0),
        bound: [fp(3, 4), fp(3, 4), fp(2, 3), fp(2, 3)],
    },
    Table4Row {
        first: (4, 0),
        bound: [fp(2, 3), fp(3, 4), fp(3, 4), fp(2, 3)],
    },
    Table4Row {
        first: (4, 1),
        bound: [fp(2, 3), fp(3, 4), fp(2, 3), fp(5, 6)],
    },
    Table4Row {
        first: (1, 1),
        bound: [fp(1, 3), fp(2, 4), fp(1, 3), fp(4, 6)],
    },
    Table4Row {
        first: (4, 4),
        bound: [fp(1, 3), fp(2, 4), fp(1, 3), fp(4, 6)],
    },
    Table4Row {
        first: (3, 2),
        bound: [fp(4, 6), fp(3, 5), cy(2, 3), fp(3, 5)],
    },
    Table4Row {
        first: (2, 2),
        bound: [fp(2, 4), fp(1, 3), cy(0, 2), fp(1, 3)],
    },
    Table4Row {
        first: (3, 3),
        bound: [fp(2, 4), fp(1, 3), cy(0, 2), fp(1, 3)],
    },
    Table4Row {
        first: (0, 0),
        bound: [cy(0, 1); 4],
    },
    Table4Row {
        first: (3, 1),
        bound: [fp(0, 1); 4],
    },
];

/// Smallest `n` for which the total-step table claims tightness.
pub const TABLE4_MIN_N: u32 = 5;

pub fn appendix_table4_bound(p: u32, q: u32, n: u32) -> Result<Table4Value> {
    if n < TABLE4_MIN_N {
        return Err(Error::UnsupportedBase {
            base: 5 << n,
            requirement: "b = 5·2ⁿ with n ≥ 5",
        });
    }
    TABLE4
        .iter()
        .find(|r| r.first == (p, q))
        .map(|r| r.bound[(n % 4) as usize].eval(n))
        .ok_or(Error::NotInTable {
            p,
            q,
            table: "the total-step table",
        })
}

/// Largest fixed-point entry of the column for `n`.
pub fn table4_column_max(n: u32) -> u32 {
    TABLE4
        .iter()
        .filter_map(|r| match r.bound[(n % 4) as usize] {
            Table4Entry::FixedPoint(e) => Some(e.eval(n)),
            Table4Entry::Cycle(_) => None,
        })
        .max()
        .expect("every column has fixed-point entries")
}
