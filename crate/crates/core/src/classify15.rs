// SPDX-License-Identifier: Apache-2.0

//! The 29 even-weight classes of cosets of `RM(1,5)` under extended affine
//! equivalence, and verifiers for the class-sum tables built on them.
//!
//! Classification goes through an orbit table: every even coset of
//! `RM(1,5)` is labelled by a breadth-first search from the 29
//! representatives under generators of `AGL(5,2)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::boolfn::{moebius_u64, parse_abbrev, run_script, AnfPolynomial, BooleanFunction, TransformScript};
use crate::rmcodes::{rm_code, CosetSpace, DistanceMethod};
use crate::syndrome::{ea_equivalent, Verdict};
use crate::{Error, Result};

/// Classes whose union is the metric complement of `RM(1,5)`.
pub const COMPLEMENT_CLASSES: [u8; 4] = [14, 22, 26, 28];
/// Number of even-weight classes.
pub const CLASS_COUNT: usize = 29;
/// Covering radius of `RM(1,5)`.
pub const RM15_RADIUS: u32 = 12;

const M: usize = 5;
const UNLABELLED: u8 = u8::MAX;

/// `no|f|g|C(g)|sum [~ equivalent forms]|C(h)`.
const TABLE1: &str = "\
0|0|-|-|-|-
1|2345|123+14+25|22|2345+123+14+25|12
2|2345+14|123+14+25|22|2345+123+25~2345+123+34|8
3|2345+24|2345+123+24+35|14|123+35~123+14|21
4|2345+24+35|2345+123+24+35|14|123|19
5|2345+14+25|123+14+25|22|2345+123|6
6|2345+123|123+14+25|22|2345+14+25|5
7|2345+123+12|12+34|28|2345+123+34|8
8|2345+123+34|12+34|28|2345+123+12|7
9|2345+123+14|14+25|28|2345+123+25~2345+123+34|8
10|2345+123+45|12+45|28|2345+123+12|7
11|2345+123+12+34|12+34|28|2345+123|6
12|2345+123+14+25|123+14+25|22|2345|1
13|2345+123+12+45|12+45|28|2345+123|6
14|2345+123+24+35|2345+123+24+35|14|0|0
15|2345+123+145|123+14+25|22|2345+145+14+25~2345+123+12+34|11
16|2345+123+145+45|123+145+45+24+35|26|2345+24+35|4
17|2345+123+145+24+45|2345+123+24+35|14|145+35+45~123+14|21
18|2345+123+145+24+35|2345+123+24+35|14|145~123|19
19|123|2345+123+24+35|14|2345+24+35|4
20|123+45|2345+123+24+35|14|2345+24+35+45~2345+24+35|4
21|123+14|123+14+25|22|25~12|27
22|123+14+25|123+14+25|22|0|0
23|123+145|123+14+25|22|145+14+25~145+25~123+14|21
24|123+145+23|23+45|28|123+145+45~123+145+23|24
25|123+145+24|123+15+24|22|145+15~123|19
26|123+145+45+24+35|123+145+45+24+35|26|0|0
27|12|12+34|28|34~12|27
28|12+34|12+34|28|0|0";

/// Canonical class representatives used by the appendix tables.
const CANONICAL: [&str; CLASS_COUNT] = [
    "0",
    "2345",
    "2345+12",
    "2345+23",
    "2345+23+45",
    "2345+12+34",
    "2345+123",
    "2345+123+12",
    "2345+123+24",
    "2345+123+14",
    "2345+123+45",
    "2345+123+12+34",
    "2345+123+14+35",
    "2345+123+12+45",
    "2345+123+24+35",
    "2345+123+145",
    "2345+123+145+45",
    "2345+123+145+24+45",
    "2345+123+145+24+35",
    "123",
    "123+45",
    "123+14",
    "123+14+25",
    "123+145",
    "123+145+23",
    "123+145+24",
    "123+145+23+24+35",
    "12",
    "12+34",
];

/// One class-sum table for a complement class.
struct SumTableSource {
    class: u8,
    /// `no|f|g|h|h equal to ('<-' = same)|C(h)`; `-` marks a skipped entry.
    rows: &'static str,
    /// `no|script` turning the canonical representative into column `f`.
    f_scripts: &'static str,
    /// `from|script|to` derivations of the `g` column.
    g_derivations: &'static str,
    /// `no|script` turning `h` into the equal form.
    h_scripts: &'static str,
}

const SUM_TABLES: [SumTableSource; 4] = [
    SumTableSource {
        class: 14,
        rows: "\
0|0|-|-|-|-
1|2345|2345+345+123+13+24+35|123+345+13+24+35|123+145+24|25
2|2345+12|2345+345+123+13+24+35|123+345+12+13+24+35|123+145+23|24
3|2345+24|2345+123+24+35|123+35|123+14|21
4|2345+24+35|2345+123+24+35|123|<-|19
5|2345+12+35|2345+123+24+35|123+12+24|123+14|21
6|2345+123|2345+234+123+24+35|234+24+35|123+14|21
7|2345+245+123|2345+123+24+35|245+24+35|123+14|21
8|2345+123+24|2345+123+24+35|35|12|27
9|2345+123+14+13|2345+345+123+13+24+35|345+14+24+35|123+14|21
10|2345+123+45+23|2345+123+24+35|23+24+35+45|12|27
11|2345+123+12+35|2345+123+24+35|12+24|12|27
12|2345+123+14+35|2345+123+24+35|14+24|12|27
13|2345+123+13+45|2345+345+123+13+24+35|345+24+35+45|123+14|21
14|2345+123+24+35|2345+123+24+35|0|<-|0
15|2345+123+145|2345+234+123+24+35|145+234+24+35|123+145+24|25
16|2345+123+145+45|2345+234+123+24+35|145+234+24+35+45|123+145+24|25
17|2345+123+145+24+45|2345+123+24+35|145+45+35|123+14|21
18|2345+123+145+24+35|2345+123+24+35|145|123|19
19|123|-|-|-|-
20|123+45|2345+123+24+35|2345+24+35+45|2345+23+45|4
21|123+14|-|-|-|-
22|123+24+35|2345+123+24+35|2345|<-|1
23|123+145|2345+123+24+35+23|2345+145+24+35+23|2345+123+45|10
24|123+145+23|2345+123+24+35|2345+145+24+35+23|2345+123+45|10
25|123+145+24|-|-|-|-
26|123+145+23+24+35|2345+123+24+35|2345+145+23|2345+123+45|10
27|12|-|-|-|-
28|24+35|2345+123+24+35|2345+123|<-|6",
        f_scripts: "\
7|3<-3+0
9|4<-4+3+0
10|1<-1+0
22|4<->5;1<->3",
        g_derivations: "\
2345+123+24+35|2<-2+0|2345+345+123+13+24+35
2345+123+24+35|5<-5+0|2345+234+123+24+35
2345+123+24+35|1<-1+0|2345+123+24+35+23",
        h_scripts: "\
1|2<-2+0;4<-4+0;1<->3
2|2<-2+0;4<-4+0;1<-1+4;3<-3+0;5<-5+2;1<->3;2<->4;3<->5
3|1<->3;4<->5
5|3<-3+0;1<->2
6|3<-3+0;1<->3;3<->4;4<->5
7|5<-5+0;1<->5;3<->4
8|1<->3;2<->5
9|4<-4+0;1<-1+2;1<->4;2<->5
10|4<-4+3;2<-2+5;1<->4
11|1<-1+4
12|1<-1+2;2<->4
13|3<-3+0;4<-4+0;1<->4;2<->5;4<->5
15|3<-3+0;1<->4;2<->3;4<->5
16|1<-1+0;3<-3+0;1<->4;2<->3;4<->5
17|1<-1+0;1<->5;3<->4;2<->5
18|2<->4;3<->5
20|4<-4+3+0;5<-5+2+0
23|2<->4;3<->5;5<-5+2+0;1<-1+0;4<-4+3+0
24|2<->4;3<->5;5<-5+2+0;1<-1+0;4<-4+3+0
26|2<->4;3<->5",
    },
    SumTableSource {
        class: 22,
        rows: "\
0|0|-|-|-|-
1|2345|123+14+25|2345+123+14+25|2345+123+14+35|12
2|2345+12|123+14+25|2345+123+12+14+25|2345+123+14+35|12
3|2345+23|123+14+25|2345+123+23+14+25|2345+123+14+35|12
4|2345+25+34|123+14+25|2345+123+14+34|2345+123+14|9
5|2345+14+25|123+14+25|2345+123|<-|6
6|2345+123|-|-|-|21
7|2345+123+12|123+14+25|2345+12+14+25|2345+12+34|5
8|2345+123+25|123+14+25|2345+14|2345+12|2
9|2345+123+14|-|-|-|21
10|2345+123+45|123+14+25|2345+14+25+45|2345+12+34|5
11|2345+123+12+34|123+15+34|2345+12+15|2345+12|2
12|2345+123+14+35|-|-|-|27
13|2345+123+12+45|123+15+34|2345+12+15+45+34|2345+12+34|5
14|2345+123+24+35|123+24+35|2345|<-|1
15|2345+123+145|123+14+25|2345+145+14+25|2345+12+34|11
16|2345+123+145+45|123+14+25|2345+145+14+25+45|2345+12+34|11
17|2345+123+145+24+45|123+24+35|2345+145+35+45|2345+123+24|8
18|2345+123+145+24+35|123+24+35|2345+145|2345+123|6
19|123+235|123+14+25|235+14+25|123+45|20
20|123+45|-|-|-|-
21|123+14|123+14+25|25|12|27
22|123+14+25|123+14+25|0|<-|0
23|123+145|123+14+25|145+14+25|123+14|21
24|123+145+23|123+14+25|145+14+25+23|123+45|20
25|123+145+24|123+15+24|145+15|123|19
26|123+145+23+24+35|123+15+24|145+15+23+35|123+45|20
27|14|123+14+25|123+25|123+14|21
28|14+25|123+14+25|123|<-|19",
        f_scripts: "",
        g_derivations: "",
        h_scripts: "\
1|2<->3
2|4<-4+2+0;2<->3
3|1<-1+0;2<->3
4|3<-3+2+0;1<-1+2+3
7|4<-4+2+0;2<->4;3<->5
8|2<->4
10|2<-2+4+0;2<->4;3<->5
11|2<-2+5+0
13|2<-2+5+0;5<-5+3+0;3<->5
15|2<->4;3<->5
16|1<-1+0;2<->4;3<->5
17|1<-1+0;2<->5;3<->4
18|2<->4;3<->5
19|3<-3+0;1<->5
21|1<->5
23|5<-5+0;1<->5;2<->4;3<->5
24|5<-5+0;3<-3+5;2<->4;3<->5
25|4<-4+0;2<->4;3<->5
26|4<-4+0;2<-2+5;2<->4;3<->5
27|1<->2;4<->5",
    },
    SumTableSource {
        class: 26,
        rows: "\
0|0|-|-|-|-
1|2345|123+145+245+24+35+12|2345+123+145+245+24+35+12|2345+123+145+24+35|18
2|2345+12|123+145+245+24+35|2345+123+145+245+24+35+12|2345+123+145+24+35|18
3|2345+23|123+145+23+24+35|2345+123+145+24+35|<-|18
4|2345+245+23+45|123+145+245+24+35|2345+123+145+23+24+35+45|2345+123+145+24+35|18
5|2345+12+35|123+145+245+24+35+12|2345+123+145+245+24|2345+123+145+24+45|17
6|2345+123|123+145+23+24+35|2345+145+23+24+35|2345+123+45|10
7|2345+123+12|123+145+245+24+35|2345+145+245+24+35+12|2345+123+35+14|12
8|2345+123+24|123+145+23+24+35|2345+145+23+35|2345+123+45|10
9|2345+123+14+23+24|123+145+234+24+35+14|2345+145+234+23+35|2345+123+12+45|13
10|2345+123+45|-|-|-|-
11|2345+123+12+34|123+145+245+25+34+12|2345+145+245+25|2345+123+24|8
12|2345+123+14+35|-|-|-|-
13|2345+123+12+45|-|-|-|-
14|2345+123+24+35|123+145+23+24+35|2345+145+23|2345+123+45|10
15|2345+123+145|123+145+23+24+35|2345+23+24+35|2345+23+45|4
16|2345+123+145+45|123+145+45+24+35|2345+24+35|2345+23+45|4
17|2345+123+145+24+45|123+145+23+24+35|2345+23+35+45|2345+23+45|4
18|2345+123+145+24+35|-|-|-|-
19|123|123+145+23+24+35|145+23+24+35|123+45|20
20|123+45|-|-|-|-
21|123+14|123+145+234+24+35+14|145+234+24+35|123+145+24|25
22|123+14+25|123+145+23+25+34|145+14+23+34|123+45|20
23|123+145|123+145+245+24+35|245+24+35|123+14|21
24|123+145+23|123+145+245+24+35|245+23+24+35|123+14|21
25|123+145+24|-|-|-|-
26|123+145+23+24+35|123+145+23+24+35|0|<-|0
27|35|123+145+45+24+35|123+145+45+24|123+145+23|24
28|24+35|123+145+23+24+35|123+145+23|<-|24",
        f_scripts: "\
4|3<-3+0
9|1<-1+2",
        g_derivations: "\
123+145+23+24+35|1<-1+2|123+145+245+24+35
123+145+245+24+35|3<-3+0|123+145+245+24+35+12
123+145+245+24+35+12|4<->5|123+145+245+25+34+12
123+145+245+24+35+12|2<->4;3<->5|123+145+234+24+35+14
123+145+23+24+35|2<->4;3<->5|123+145+45+24+35",
        h_scripts: "\
1|3<-3+0
2|3<-3+0
4|1<-1+0
5|1<-1+2;1<-1+0
6|2<-2+5+0;3<-3+4+0;1<-1+0;2<->4;3<->5
7|3<-3+4;1<-1+4;2<->4;3<->5
8|2<-2+5+0;2<->4;3<->5
9|5<-5+0;2<-2+5+0;2<->4;3<->5
11|3<-3+2;2<->4;3<->5;2<->3
14|2<->4;3<->5
15|5<-5+2+0;3<->4
16|3<->4
17|4<-4+3+0
19|1<-1+0;3<-3+4;2<-2+5;2<->4;3<->5
21|3<-3+0;1<->4;2<->3;4<->5
22|5<-5+0;2<-2+4;2<->4;3<->5
23|5<-5+0;1<->5;3<->4
24|5<-5+0;5<-5+2+0;1<->5;3<->4
27|5<-5+2;1<-1+0;3<-3+4",
    },
    SumTableSource {
        class: 28,
        rows: "\
0|0|-|-|-|-
1|2345|12+34|2345+12+34|<-|5
2|2345+12|12+34|2345+34|2345+23|3
3|2345+23|-|-|-|-
4|2345+23+45|23+45|2345|<-|1
5|2345+12+34|-|-|-|-
6|2345+123|12+34|2345+123+12+34|<-|11
7|2345+123+12|12+34|2345+123+34|2345+123+24|8
8|2345+123+24|-|-|-|-
9|2345+123+14|14+35|2345+123+35|2345+123+24|8
10|2345+123+45|12+45|2345+123+12|<-|7
11|2345+123+12+34|-|-|-|-
12|2345+123+14+35|14+35|2345+123|<-|6
13|2345+123+12+45|12+45|2345+123|<-|6
14|2345+123+24+35|24+35|2345+123|<-|6
15|2345+123+145|24+35|2345+123+145+24+35|<-|18
16|2345+123+145+45|23+45|2345+123+145+23|2345+123+145+45|16
17|2345+123+145+24+45|23+45|2345+123+145+24+23|2345+123+145+24+45|17
18|2345+123+145+24+35|-|-|-|-
19|123|12+45|123+12+45|123+45|20
20|123+45|-|-|-|-
21|123+14|14+25|123+25|123+14|21
22|123+14+25|14+25|123|<-|19
23|123+145|23+45|123+145+23+45|123+145|23
24|123+145+23|23+45|123+145+45|123+145+23|24
25|123+145+24|24+35|123+145+35|123+145+24|25
26|123+145+23+24+35|24+35|123+145+23|<-|24
27|12|12+34|34|12|27
28|12+34|12+34|0|<-|0",
        f_scripts: "",
        g_derivations: "",
        h_scripts: "\
2|2<->4
7|2<->3
9|2<->3;4<->5
16|1<-1+0
17|1<-1+0
19|3<-3+0
21|1<->2;4<->5
23|1<-1+0
24|1<-1+0
25|2<->3;4<->5
27|1<->3;2<->4",
    },
];

/// Entries of the class-sum tables known to be misprinted:
/// `(complement class, row, printed 'h is equal to', corrected form)`.
const ERRATA: [(u8, u8, &str, &str); 2] = [
    (22, 15, "2345+12+34", "2345+123+12+34"),
    (22, 16, "2345+12+34", "2345+123+12+34"),
];

/// SHA-256 of the parsed table records; guards against transcription drift.
pub const TABLE_CHECKSUM: &str = "c65bfe6310d4efb3c10574e8a28787772a9b7f92fa95e20ccfd51e7d3ebf2af1";

fn poly(text: &str) -> Result<AnfPolynomial> {
    parse_abbrev(text, M)
}

fn class_no(text: &str) -> Result<u8> {
    text.parse::<u8>()
        .ok()
        .filter(|&c| (c as usize) < CLASS_COUNT)
        .ok_or_else(|| Error::Parse(format!("bad class number {text:?}")))
}

fn opt(text: &str) -> Option<&str> {
    (text != "-").then_some(text)
}

/// A row of the table proving that adding a complement element leaves the complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table1Row {
    pub no: u8,
    pub representative: AnfPolynomial,
    pub added: Option<AnfPolynomial>,
    pub class_of_added: Option<u8>,
    /// The sum as printed followed by the forms stated equivalent to it.
    pub sum_forms: Vec<AnfPolynomial>,
    pub class_of_sum: Option<u8>,
}

impl Table1Row {
    pub fn complement_flag(&self) -> bool {
        COMPLEMENT_CLASSES.contains(&self.no)
    }
}

/// A row of a class-sum table for one complement class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumTableRow {
    pub no: u8,
    pub f: AnfPolynomial,
    pub f_script: Option<TransformScript>,
    pub g: Option<AnfPolynomial>,
    pub h: Option<AnfPolynomial>,
    /// `None` when the printed form is `h` itself.
    pub h_equal: Option<AnfPolynomial>,
    pub h_script: Option<TransformScript>,
    pub class_of_h: Option<u8>,
    pub skipped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub from: AnfPolynomial,
    pub script: TransformScript,
    pub to: AnfPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma12Table {
    pub complement_class: u8,
    pub rows: Vec<SumTableRow>,
    pub g_derivations: Vec<Derivation>,
}

/// All embedded table data, parsed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetClassTables {
    pub table1: Vec<Table1Row>,
    pub canonical: Vec<AnfPolynomial>,
    pub sum_tables: Vec<Lemma12Table>,
}

fn split_fields<const N: usize>(line: &str) -> Result<[&str; N]> {
    let parts: Vec<&str> = line.split('|').collect();
    parts
        .try_into()
        .map_err(|_| Error::Parse(format!("expected {N} fields in {line:?}")))
}

fn keyed_scripts(text: &str) -> Result<BTreeMap<u8, TransformScript>> {
    text.lines()
        .filter(|l| !l.is_empty())
        .map(|l| {
            let [no, script] = split_fields::<2>(l)?;
            Ok((class_no(no)?, TransformScript::parse(script)?))
        })
        .collect()
}

fn parse_table1() -> Result<Vec<Table1Row>> {
    TABLE1
        .lines()
        .map(|line| {
            let [no, f, g, cg, sum, ch] = split_fields::<6>(line)?;
            Ok(Table1Row {
                no: class_no(no)?,
                representative: poly(f)?,
                added: opt(g).map(poly).transpose()?,
                class_of_added: opt(cg).map(class_no).transpose()?,
                sum_forms: match opt(sum) {
                    Some(s) => s.split('~').map(poly).collect::<Result<_>>()?,
                    None => Vec::new(),
                },
                class_of_sum: opt(ch).map(class_no).transpose()?,
            })
        })
        .collect()
}

fn parse_sum_table(src: &SumTableSource) -> Result<Lemma12Table> {
    let f_scripts = keyed_scripts(src.f_scripts)?;
    let mut h_scripts = keyed_scripts(src.h_scripts)?;
    let rows = src
        .rows
        .lines()
        .map(|line| {
            let [no, f, g, h, eq, ch] = split_fields::<6>(line)?;
            let no = class_no(no)?;
            let skipped = g == "-";
            Ok(SumTableRow {
                no,
                f: poly(f)?,
                f_script: f_scripts.get(&no).cloned(),
                g: opt(g).map(poly).transpose()?,
                h: opt(h).map(poly).transpose()?,
                h_equal: match eq {
                    "<-" | "-" => None,
                    other => Some(poly(other)?),
                },
                h_script: h_scripts.remove(&no),
                class_of_h: if skipped { None } else { opt(ch).map(class_no).transpose()? },
                skipped,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(no) = h_scripts.keys().next() {
        return Err(Error::Parse(format!("script for missing row {no}")));
    }
    let g_derivations = src
        .g_derivations
        .lines()
        .filter(|l| !l.is_empty())
        .map(|l| {
            let [from, script, to] = split_fields::<3>(l)?;
            Ok(Derivation {
                from: poly(from)?,
                script: TransformScript::parse(script)?,
                to: poly(to)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Lemma12Table {
        complement_class: src.class,
        rows,
        g_derivations,
    })
}

impl CosetClassTables {
    pub fn load() -> Result<Self> {
        let tables = Self {
            table1: parse_table1()?,
            canonical: CANONICAL.iter().map(|t| poly(t)).collect::<Result<_>>()?,
            sum_tables: SUM_TABLES.iter().map(parse_sum_table).collect::<Result<_>>()?,
        };
        tables.check_shape()?;
        Ok(tables)
    }

    fn check_shape(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Inconsistent(msg.to_string()));
        if self.table1.len() != CLASS_COUNT
            || self.table1.iter().enumerate().any(|(i, r)| r.no as usize != i)
        {
            return bad("the class table must list classes 0..28 in order");
        }
        if self.table1.iter().filter(|r| r.complement_flag()).count() != COMPLEMENT_CLASSES.len() {
            return bad("exactly four classes carry the complement flag");
        }
        for t in &self.sum_tables {
            if t.rows.len() != CLASS_COUNT || t.rows.iter().enumerate().any(|(i, r)| r.no as usize != i) {
                return bad("class-sum tables must list classes 0..28 in order");
            }
        }
        Ok(())
    }

    /// Canonical text of every record, the input of the checksum.
    pub fn canonical_text(&self) -> String {
        let show = |p: &Option<AnfPolynomial>| p.as_ref().map_or("-".to_string(), ToString::to_string);
        let num = |c: Option<u8>| c.map_or("-".to_string(), |c| c.to_string());
        let mut s = String::new();
        for r in &self.table1 {
            let forms: Vec<String> = r.sum_forms.iter().map(ToString::to_string).collect();
            let _ = writeln!(
                s,
                "T1|{}|{}|{}|{}|{}|{}",
                r.no,
                r.representative,
                show(&r.added),
                num(r.class_of_added),
                forms.join("~"),
                num(r.class_of_sum)
            );
        }
        for (i, c) in self.canonical.iter().enumerate() {
            let _ = writeln!(s, "C|{i}|{c}");
        }
        for t in &self.sum_tables {
            for r in &t.rows {
                let script = |x: &Option<TransformScript>| x.as_ref().map_or("-".to_string(), ToString::to_string);
                let _ = writeln!(
                    s,
                    "L{}|{}|{}|{}|{}|{}|{}|{}|{}|{}",
                    t.complement_class,
                    r.no,
                    r.f,
                    script(&r.f_script),
                    show(&r.g),
                    show(&r.h),
                    show(&r.h_equal),
                    script(&r.h_script),
                    num(r.class_of_h),
                    r.skipped
                );
            }
            for d in &t.g_derivations {
                let _ = writeln!(s, "D{}|{}|{}|{}", t.complement_class, d.from, d.script, d.to);
            }
        }
        s
    }

    pub fn checksum(&self) -> String {
        let digest = Sha256::digest(self.canonical_text().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

// ---------------------------------------------------------------------------
// coset indices and the orbit table

/// Monomials of degree at least 2, by degree and then mask; position `i`
/// is bit `i` of a coset index. The degree-5 monomial is bit 25.
fn index_monomials() -> &'static [u32; 26] {
    static MONOS: OnceLock<[u32; 26]> = OnceLock::new();
    MONOS.get_or_init(|| {
        let mut v: Vec<u32> = (0u32..32).filter(|x| x.count_ones() >= 2).collect();
        v.sort_by_key(|&x| (x.count_ones(), x));
        v.try_into().expect("26 monomials")
    })
}

/// Coset of `RM(1,5)` as the 26 ANF coefficients of degree at least 2.
pub fn coset_index(table: u32) -> u32 {
    let anf = moebius_u64(M, table as u64);
    index_monomials()
        .iter()
        .enumerate()
        .fold(0u32, |acc, (i, &mono)| acc | ((anf >> mono) as u32 & 1) << i)
}

/// A function whose coset has the given index.
pub fn coset_function(index: u32) -> u32 {
    let anf = index_monomials()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &mono)| acc | ((index >> i) as u64 & 1) << mono);
    moebius_u64(M, anf) as u32
}

fn table_word(f: &BooleanFunction) -> Result<u32> {
    if f.vars() != M {
        return Err(Error::DimensionMismatch {
            expected: M,
            got: f.vars(),
        });
    }
    Ok(f.words()[0] as u32)
}

/// Linear action of one affine substitution on coset indices.
struct IndexAction {
    lo: Vec<u32>,
    hi: Vec<u32>,
}

impl IndexAction {
    fn new(script: &str) -> Self {
        let script = TransformScript::parse(script).expect("generator script");
        let images: Vec<u32> = index_monomials()
            .iter()
            .map(|&mono| {
                let f = BooleanFunction::monomial(M, mono);
                let g = run_script(&f, &script).expect("valid script");
                coset_index(g.words()[0] as u32)
            })
            .collect();
        let build = |offset: usize, bits: usize| {
            (0u32..1 << bits)
                .map(|x| {
                    (0..bits)
                        .filter(|b| x >> b & 1 == 1)
                        .fold(0, |acc, b| acc ^ images[offset + b])
                })
                .collect()
        };
        Self {
            lo: build(0, 13),
            hi: build(13, 13),
        }
    }

    #[inline]
    fn apply(&self, index: u32) -> u32 {
        self.lo[(index & 0x1fff) as usize] ^ self.hi[(index >> 13) as usize]
    }
}

/// Generators of `AGL(5,2)`: a transposition and a 5-cycle (generating the
/// permutations), a transvection and a translation.
const GENERATORS: [&str; 4] = ["1<->2", "1<->2;2<->3;3<->4;4<->5", "1<-1+2", "1<-1+0"];

/// Class label of every even coset of `RM(1,5)`.
pub struct OrbitTable {
    labels: Vec<u8>,
    sizes: [u64; CLASS_COUNT],
}

impl OrbitTable {
    fn build(tables: &CosetClassTables) -> Result<Self> {
        let actions: Vec<IndexAction> = GENERATORS.iter().map(|g| IndexAction::new(g)).collect();
        let mut labels = vec![UNLABELLED; 1 << 25];
        let mut sizes = [0u64; CLASS_COUNT];
        let mut stack = Vec::new();
        for row in &tables.table1 {
            let start = coset_index(row.representative.truth_table().words()[0] as u32);
            if start >> 25 != 0 {
                return Err(Error::OddWeightCoset);
            }
            if labels[start as usize] != UNLABELLED {
                return Err(Error::Inconsistent(format!(
                    "representatives of classes {} and {} are equivalent",
                    labels[start as usize], row.no
                )));
            }
            labels[start as usize] = row.no;
            stack.push(start);
            let mut size = 1u64;
            while let Some(x) = stack.pop() {
                for a in &actions {
                    let y = a.apply(x);
                    if labels[y as usize] == UNLABELLED {
                        labels[y as usize] = row.no;
                        size += 1;
                        stack.push(y);
                    }
                }
            }
            sizes[row.no as usize] = size;
        }
        let total: u64 = sizes.iter().sum();
        if total != 1 << 25 {
            return Err(Error::Inconsistent(format!("the classes cover {total} of 2^25 even cosets")));
        }
        Ok(Self { labels, sizes })
    }

    /// Number of cosets in each class.
    pub fn class_sizes(&self) -> &[u64; CLASS_COUNT] {
        &self.sizes
    }

    pub fn label(&self, index: u32) -> Result<u8> {
        if index >> 25 != 0 {
            return Err(Error::OddWeightCoset);
        }
        match self.labels[index as usize] {
            UNLABELLED => Err(Error::NoClassMatched(format!("coset index {index:#x}"))),
            c => Ok(c),
        }
    }
}

/// The parsed tables, loaded once.
pub fn tables() -> Result<&'static CosetClassTables> {
    static TABLES: OnceLock<Result<CosetClassTables>> = OnceLock::new();
    TABLES.get_or_init(CosetClassTables::load).as_ref().map_err(Clone::clone)
}

/// The orbit table, built once (about 32 MB).
pub fn orbit_table() -> Result<&'static OrbitTable> {
    static ORBITS: OnceLock<Result<OrbitTable>> = OnceLock::new();
    ORBITS
        .get_or_init(|| OrbitTable::build(tables()?))
        .as_ref()
        .map_err(Clone::clone)
}

/// Class number (0..=28) of the coset `f + RM(1,5)`.
pub fn class_of(f: &BooleanFunction) -> Result<u8> {
    let t = table_word(f)?;
    orbit_table()?.label(coset_index(t))
}

fn class_of_poly(p: &AnfPolynomial) -> Result<u8> {
    class_of(&p.truth_table())
}

/// Class number found without the orbit table: the Walsh multiset narrows
/// the candidates and an exhaustive affine search confirms one of them.
pub fn class_of_by_search(f: &BooleanFunction) -> Result<u8> {
    let t = table_word(f)?;
    if coset_index(t) >> 25 != 0 {
        return Err(Error::OddWeightCoset);
    }
    let profile = |g: &BooleanFunction| {
        let mut w: Vec<i32> = g.walsh_spectrum().iter().map(|x| x.abs()).collect();
        w.sort_unstable();
        w
    };
    let target = profile(f);
    for row in &tables()?.table1 {
        let rep = row.representative.truth_table();
        if profile(&rep) != target {
            continue;
        }
        if let Verdict::Equivalent { .. } = ea_equivalent(f, &rep)? {
            return Ok(row.no);
        }
    }
    Err(Error::NoClassMatched(f.to_hex()))
}

fn rm15_space() -> &'static CosetSpace {
    static SPACE: OnceLock<CosetSpace> = OnceLock::new();
    SPACE.get_or_init(|| {
        CosetSpace::with_method(&rm_code(1, M).expect("RM(1,5)"), DistanceMethod::Walsh).expect("Walsh path")
    })
}

/// `d(f, RM(1,5))`.
pub fn distance_rm15(f: &BooleanFunction) -> Result<u32> {
    Ok(rm15_space().distance(table_word(f)? as u64))
}

/// Whether `f` is a deep hole of `RM(1,5)`.
pub fn complement_membership_rm15(f: &BooleanFunction) -> Result<bool> {
    Ok(distance_rm15(f)? == RM15_RADIUS)
}

fn same_coset(a: &AnfPolynomial, b: &AnfPolynomial) -> bool {
    a.reduce_mod_rm(1) == b.reduce_mod_rm(1)
}

// ---------------------------------------------------------------------------
// reports

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            ok,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowReport {
    pub no: u8,
    pub status: RowStatus,
    pub f: String,
    pub g: Option<String>,
    pub h: Option<String>,
    pub class_of_h: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub checks: Vec<Check>,
}

impl RowReport {
    fn settle(mut self) -> Self {
        if self.status != RowStatus::Skipped {
            self.status = if self.checks.iter().all(|c| c.ok) {
                RowStatus::Pass
            } else {
                RowStatus::Fail
            };
        }
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub title: String,
    pub complement_class: Option<u8>,
    pub rows: Vec<RowReport>,
    /// Table-level checks (derivations of the `g` column).
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl TableReport {
    fn new(title: String, complement_class: Option<u8>, rows: Vec<RowReport>, checks: Vec<Check>) -> Self {
        let count = |s: RowStatus| rows.iter().filter(|r| r.status == s).count();
        let failed = count(RowStatus::Fail) + checks.iter().filter(|c| !c.ok).count();
        Self {
            title,
            complement_class,
            passed: count(RowStatus::Pass),
            failed,
            skipped: count(RowStatus::Skipped),
            rows,
            checks,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub tables: Vec<TableReport>,
    pub all_passed: bool,
}

impl VerificationReport {
    fn new(tables: Vec<TableReport>) -> Self {
        let all_passed = tables.iter().all(TableReport::all_passed);
        Self { tables, all_passed }
    }

    /// The tables laid out as markdown with a result column.
    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        for t in &self.tables {
            let _ = writeln!(s, "### {}\n", t.title);
            let _ = writeln!(s, "| No | f | g | h = f+g | C(h) | result |");
            let _ = writeln!(s, "|---|---|---|---|---|---|");
            for r in &t.rows {
                let dash = |x: &Option<String>| x.clone().unwrap_or_else(|| "-".into());
                let mut result = match r.status {
                    RowStatus::Pass => "pass".to_string(),
                    RowStatus::Fail => format!(
                        "FAIL: {}",
                        r.checks.iter().filter(|c| !c.ok).map(|c| c.name.as_str()).collect::<Vec<_>>().join(", ")
                    ),
                    RowStatus::Skipped => "skipped".to_string(),
                };
                if let Some(n) = &r.note {
                    let _ = write!(result, " ({n})");
                }
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} | {} | {} |",
                    r.no,
                    r.f,
                    dash(&r.g),
                    dash(&r.h),
                    r.class_of_h.map_or("-".into(), |c| c.to_string()),
                    result
                );
            }
            for c in &t.checks {
                let _ = writeln!(s, "\n- {}: {} ({})", c.name, if c.ok { "pass" } else { "FAIL" }, c.detail);
            }
            let _ = writeln!(s, "\n{} passed, {} failed, {} skipped\n", t.passed, t.failed, t.skipped);
        }
        s
    }
}

fn outside_complement(c: u8) -> bool {
    !COMPLEMENT_CLASSES.contains(&c)
}

fn deep_and_class(g: &AnfPolynomial, expected: u8, checks: &mut Vec<Check>) -> Result<()> {
    let gf = g.truth_table();
    let d = distance_rm15(&gf)?;
    checks.push(Check::new("g is a deep hole", d == RM15_RADIUS, format!("d(g, RM(1,5)) = {d}")));
    let c = class_of(&gf)?;
    checks.push(Check::new("class of g", c == expected, format!("class {c}, stated {expected}")));
    Ok(())
}

fn class_check(name: &str, p: &AnfPolynomial, expected: u8, checks: &mut Vec<Check>) -> Result<()> {
    let c = class_of_poly(p)?;
    checks.push(Check::new(name, c == expected, format!("{p} is in class {c}, stated {expected}")));
    Ok(())
}

/// Checks every nonzero row of the class table: `g` is a deep hole of the
/// stated class, and `f + g` lands in the stated class outside the complement.
pub fn verify_table1() -> Result<TableReport> {
    let tables = tables()?;
    let mut rows = Vec::new();
    for r in &tables.table1 {
        let mut report = RowReport {
            no: r.no,
            status: RowStatus::Pass,
            f: r.representative.to_string(),
            g: r.added.as_ref().map(ToString::to_string),
            h: r.sum_forms.first().map(ToString::to_string),
            class_of_h: r.class_of_sum,
            note: None,
            checks: Vec::new(),
        };
        let (Some(g), Some(cg), Some(ch)) = (&r.added, r.class_of_added, r.class_of_sum) else {
            report.status = RowStatus::Skipped;
            report.note = Some("the code itself".into());
            rows.push(report);
            continue;
        };
        let checks = &mut report.checks;
        class_check("class of f", &r.representative, r.no, checks)?;
        deep_and_class(g, cg, checks)?;
        let h = r.representative.add(g)?;
        let printed = &r.sum_forms[0];
        checks.push(Check::new("printed sum", same_coset(&h, printed), format!("f + g = {h}")));
        for (i, form) in r.sum_forms.iter().enumerate().skip(1) {
            class_check(&format!("equivalent form {i}"), form, ch, checks)?;
        }
        class_check("class of f + g", &h, ch, checks)?;
        checks.push(Check::new("sum leaves the complement", outside_complement(ch), format!("class {ch}")));
        rows.push(report.settle());
    }
    Ok(TableReport::new("Even-weight coset classes of RM(1,5)".into(), None, rows, Vec::new()))
}

fn verify_sum_table(tables: &CosetClassTables, t: &Lemma12Table) -> Result<TableReport> {
    let class = t.complement_class;
    let mut rows = Vec::new();
    for r in &t.rows {
        let mut report = RowReport {
            no: r.no,
            status: RowStatus::Pass,
            f: r.f.to_string(),
            g: r.g.as_ref().map(ToString::to_string),
            h: r.h.as_ref().map(ToString::to_string),
            class_of_h: r.class_of_h,
            note: None,
            checks: Vec::new(),
        };
        if r.no == 0 {
            report.status = RowStatus::Skipped;
            report.note = Some("the code itself".into());
            rows.push(report);
            continue;
        }
        if r.skipped {
            // some earlier f outside the complement already reaches this class
            let by: Vec<u8> = t
                .rows
                .iter()
                .filter(|o| !o.skipped && outside_complement(o.no) && o.class_of_h == Some(r.no))
                .map(|o| o.no)
                .collect();
            report.checks.push(Check::new(
                "skip justified",
                !by.is_empty(),
                format!("sums of rows {by:?} land in class {}", r.no),
            ));
            report.status = if by.is_empty() { RowStatus::Fail } else { RowStatus::Skipped };
            report.note = Some(match by.first() {
                Some(b) => format!("covered by row {b}"),
                None => "no covering row".into(),
            });
            rows.push(report);
            continue;
        }
        let (Some(g), Some(h), Some(ch)) = (&r.g, &r.h, r.class_of_h) else {
            return Err(Error::Inconsistent(format!("row {} of the class-{class} table is incomplete", r.no)));
        };
        let checks = &mut report.checks;
        class_check("class of f", &r.f, r.no, checks)?;
        if let Some(script) = &r.f_script {
            let replay = run_script(&tables.canonical[r.no as usize].truth_table(), script)?.anf();
            checks.push(Check::new(
                "f script",
                same_coset(&replay, &r.f),
                format!("canonical ∘ ({script}) = {replay}"),
            ));
        }
        deep_and_class(g, class, checks)?;
        let sum = r.f.add(g)?;
        checks.push(Check::new("printed sum", same_coset(&sum, h), format!("f + g = {sum}")));
        class_check("class of f + g", &sum, ch, checks)?;
        let erratum = ERRATA.iter().find(|e| e.0 == class && e.1 == r.no);
        if let Some(eq) = &r.h_equal {
            match erratum {
                Some(&(_, _, printed, corrected)) => {
                    let printed = poly(printed)?;
                    let corrected = poly(corrected)?;
                    let pc = class_of_poly(&printed)?;
                    checks.push(Check::new(
                        "erratum: printed form is misprinted",
                        printed == *eq && pc != ch,
                        format!("printed {printed} is in class {pc}"),
                    ));
                    class_check("erratum: corrected form", &corrected, ch, checks)?;
                    if let Some(script) = &r.h_script {
                        let replay = run_script(&h.truth_table(), script)?.anf();
                        checks.push(Check::new(
                            "h script gives the corrected form",
                            same_coset(&replay, &corrected),
                            format!("h ∘ ({script}) = {replay}"),
                        ));
                    }
                    report.note = Some(format!("printed {printed}, corrected to {corrected}"));
                }
                None => {
                    class_check("class of stated form", eq, ch, checks)?;
                    if let Some(script) = &r.h_script {
                        let replay = run_script(&h.truth_table(), script)?.anf();
                        checks.push(Check::new(
                            "h script",
                            same_coset(&replay, eq),
                            format!("h ∘ ({script}) = {replay}"),
                        ));
                    }
                }
            }
        } else if let Some(script) = &r.h_script {
            let replay = run_script(&h.truth_table(), script)?.anf();
            checks.push(Check::new("h script", same_coset(&replay, h), format!("h ∘ ({script}) = {replay}")));
        }
        checks.push(Check::new("sum leaves the complement", outside_complement(ch), format!("class {ch}")));
        rows.push(report.settle());
    }
    let mut checks = Vec::new();
    for d in &t.g_derivations {
        let replay = run_script(&d.from.truth_table(), &d.script)?.anf();
        checks.push(Check::new(
            &format!("g derivation {} ∘ ({})", d.from, d.script),
            same_coset(&replay, &d.to),
            format!("gives {replay}, stated {}", d.to),
        ));
    }
    Ok(TableReport::new(
        format!("Sums with complement class {class}"),
        Some(class),
        rows,
        checks,
    ))
}

/// Checks the four class-sum tables, including every transformation script.
pub fn verify_lemma12_tables() -> Result<VerificationReport> {
    let tables = tables()?;
    let reports = tables
        .sum_tables
        .par_iter()
        .map(|t| verify_sum_table(tables, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::new(reports))
}

/// Both verifications in one report.
pub fn verify_all() -> Result<VerificationReport> {
    let mut tables = vec![verify_table1()?];
    tables.extend(verify_lemma12_tables()?.tables);
    Ok(VerificationReport::new(tables))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_parse() {
        let t = tables().unwrap();
        assert_eq!(t.table1.len(), 29);
        assert_eq!(t.sum_tables.len(), 4);
        let flagged: Vec<u8> = t.table1.iter().filter(|r| r.complement_flag()).map(|r| r.no).collect();
        assert_eq!(flagged, COMPLEMENT_CLASSES);
        for r in &t.table1 {
            assert_eq!(r.representative.truth_table().weight() % 2, 0, "class {}", r.no);
        }
    }

    #[test]
    fn checksum_matches() {
        assert_eq!(tables().unwrap().checksum(), TABLE_CHECKSUM);
    }

    #[test]
    fn coset_index_round_trip() {
        for idx in [0u32, 1, 0x155_5555, 0x3ff_ffff, 0x200_0000] {
            assert_eq!(coset_index(coset_function(idx)), idx);
        }
        // affine functions lie in coset 0
        let affine = parse_abbrev("1+3+5+0", 5).unwrap().truth_table();
        assert_eq!(coset_index(affine.words()[0] as u32), 0);
    }

    #[test]
    fn orbit_table_partitions_even_cosets() {
        let orbits = orbit_table().unwrap();
        assert_eq!(orbits.class_sizes().iter().sum::<u64>(), 1 << 25);
        assert_eq!(orbits.class_sizes()[0], 1);
        for (i, c) in tables().unwrap().canonical.iter().enumerate() {
            assert_eq!(class_of_poly(c).unwrap(), i as u8, "canonical {c}");
        }
        let odd = parse_abbrev("12345", 5).unwrap().truth_table();
        assert!(matches!(class_of(&odd), Err(Error::OddWeightCoset)));
    }

    #[test]
    fn complement_classes_are_deep() {
        for r in &tables().unwrap().table1 {
            let deep = complement_membership_rm15(&r.representative.truth_table()).unwrap();
            assert_eq!(deep, r.complement_flag(), "class {}", r.no);
        }
    }

    #[test]
    fn table1_verifies() {
        let report = verify_table1().unwrap();
        let failed: Vec<_> = report.rows.iter().filter(|r| r.status == RowStatus::Fail).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert_eq!(report.passed, 28);
    }

    #[test]
    fn sum_tables_verify() {
        let report = verify_lemma12_tables().unwrap();
        for t in &report.tables {
            let failed: Vec<_> = t.rows.iter().filter(|r| r.status == RowStatus::Fail).collect();
            assert!(failed.is_empty(), "{}: {failed:#?}", t.title);
            assert!(t.checks.iter().all(|c| c.ok), "{:#?}", t.checks);
        }
        assert!(report.all_passed);
    }
}
