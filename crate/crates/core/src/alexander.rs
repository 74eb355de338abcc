//! From crossing data to the integer matrix pair (A, B) and the Alexander
//! polynomial det(B - tA).
//!
//! Each crossing `x_out = x_over^s x_inc x_over^(-s)` contributes one row to
//! A and B; the row entries are the abelianized free derivatives of the
//! relator, collected by powers of t.

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::poly::{det_poly, IntPoly, LaurentPolyZ};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

/// One crossing: generator indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub out: usize,
    pub over: usize,
    pub inc: usize,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotPresentation {
    pub generators: usize,
    pub crossings: Vec<Crossing>,
}

impl KnotPresentation {
    pub fn new(generators: usize, crossings: Vec<Crossing>) -> Result<Self> {
        let p = KnotPresentation { generators, crossings };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let m = self.generators;
        if m == 0 {
            return Err(Error::NotAKnot("a presentation needs at least one generator".into()));
        }
        if self.crossings.len() != m {
            return Err(Error::NotAKnot(format!(
                "expected {m} crossings for {m} generators, found {}",
                self.crossings.len()
            )));
        }
        let mut seen = vec![false; m + 1];
        for c in &self.crossings {
            for idx in [c.out, c.over, c.inc] {
                if idx == 0 || idx > m {
                    return Err(Error::NotAKnot(format!(
                        "generator index {idx} out of range 1..={m}"
                    )));
                }
            }
            if seen[c.out] {
                return Err(Error::NotAKnot(format!(
                    "generator {} appears as outgoing arc in two crossings",
                    c.out
                )));
            }
            seen[c.out] = true;
        }
        Ok(())
    }
}

/// Parses the line-oriented crossing format:
/// a `generators <m>` header, then m lines `xing <out> <over> <inc> <+|->`.
/// `#` starts a comment; blank lines are skipped.
pub fn parse_wirtinger(text: &str) -> Result<KnotPresentation> {
    let mut generators: Option<usize> = None;
    let mut crossings = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = lineno + 1;
        let mut parts = line.split_whitespace();
        let keyword = parts.next().unwrap();
        match keyword {
            "generators" => {
                if generators.is_some() {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "duplicate generators header".into(),
                    });
                }
                let m: usize = parts
                    .next()
                    .ok_or_else(|| Error::Parse {
                        line: lineno,
                        message: "generators header needs a count".into(),
                    })?
                    .parse()
                    .map_err(|_| Error::Parse {
                        line: lineno,
                        message: "generator count must be a positive integer".into(),
                    })?;
                if parts.next().is_some() {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "trailing tokens after generator count".into(),
                    });
                }
                generators = Some(m);
            }
            "xing" => {
                if generators.is_none() {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "crossing before generators header".into(),
                    });
                }
                let mut idx = |name: &str| -> Result<usize> {
                    parts
                        .next()
                        .ok_or_else(|| Error::Parse {
                            line: lineno,
                            message: format!("missing {name} index"),
                        })?
                        .parse()
                        .map_err(|_| Error::Parse {
                            line: lineno,
                            message: format!("{name} index must be a positive integer"),
                        })
                };
                let out = idx("outgoing")?;
                let over = idx("over")?;
                let inc = idx("incoming")?;
                let sign = match parts.next() {
                    Some("+") => Sign::Positive,
                    Some("-") => Sign::Negative,
                    other => {
                        return Err(Error::Parse {
                            line: lineno,
                            message: format!(
                                "crossing sign must be '+' or '-', found {:?}",
                                other.unwrap_or("")
                            ),
                        })
                    }
                };
                if parts.next().is_some() {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "trailing tokens after crossing".into(),
                    });
                }
                crossings.push(Crossing { out, over, inc, sign });
            }
            other => {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("unknown keyword '{other}'"),
                })
            }
        }
    }
    let generators = generators.ok_or_else(|| Error::Parse {
        line: text.lines().count().max(1),
        message: "missing generators header".into(),
    })?;
    if crossings.len() != generators {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: format!(
                "expected {generators} crossing line{}, found {}",
                if generators == 1 { "" } else { "s" },
                crossings.len()
            ),
        });
    }
    KnotPresentation::new(generators, crossings)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// One row per generator; both row sums vanish.
    Full,
    /// Full pair with the base generator's row and column deleted.
    Reduced,
    /// Window encoding of a scalar recurrence; entries are unconstrained.
    Windowed,
}

/// The matrix pair (A, B) whose combination B - tA presents the Alexander
/// module. A carries the t-coefficients, B the constant ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlexanderPair {
    pub a: IntMatrix,
    pub b: IntMatrix,
    pub kind: PairKind,
}

impl AlexanderPair {
    pub fn size(&self) -> usize {
        self.a.rows()
    }

    pub fn windowed(a: IntMatrix, b: IntMatrix) -> Result<Self> {
        if a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() {
            return Err(Error::DimensionMismatch(
                "window pair must be a pair of equal square matrices".into(),
            ));
        }
        Ok(AlexanderPair { a, b, kind: PairKind::Windowed })
    }

    fn check_small_entries(&self) -> Result<()> {
        for m in [&self.a, &self.b] {
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    if m.get(i, j).abs() > 1 {
                        return Err(Error::Internal(format!(
                            "crossing pair entry {} out of -1..=1",
                            m.get(i, j)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds the full m x m pair from a presentation. Row `out` of B - tA is
/// the abelianized free derivative of the relator of crossing `out`.
pub fn fox_pair(pres: &KnotPresentation) -> Result<AlexanderPair> {
    let m = pres.generators;
    let mut a = IntMatrix::zero(m, m);
    let mut b = IntMatrix::zero(m, m);
    for c in &pres.crossings {
        let row = c.out - 1;
        match c.sign {
            Sign::Positive => {
                // relator x_out x_over x_inc^-1 x_over^-1
                b.add_at(row, c.out - 1, 1);
                b.add_at(row, c.over - 1, -1);
                a.add_at(row, c.inc - 1, 1);
                a.add_at(row, c.over - 1, -1);
            }
            Sign::Negative => {
                // relator x_out x_over^-1 x_inc^-1 x_over, times the unit t
                b.add_at(row, c.over - 1, 1);
                b.add_at(row, c.inc - 1, -1);
                a.add_at(row, c.over - 1, 1);
                a.add_at(row, c.out - 1, -1);
            }
        }
    }
    let pair = AlexanderPair { a, b, kind: PairKind::Full };
    pair.check_small_entries()?;
    for m in [&pair.a, &pair.b] {
        for i in 0..m.rows() {
            let sum: i64 = m.row(i).iter().sum();
            if sum != 0 {
                return Err(Error::Internal(format!("full pair row {i} sums to {sum}, not 0")));
            }
        }
    }
    Ok(pair)
}

/// Deletes the base generator's row and column from a full pair.
pub fn reduce_pair(pair: &AlexanderPair, base: usize) -> Result<AlexanderPair> {
    if pair.kind != PairKind::Full {
        return Err(Error::InvalidInput("only a full pair can be reduced".into()));
    }
    if base == 0 || base > pair.size() {
        return Err(Error::InvalidInput(format!(
            "base generator {base} out of range 1..={}",
            pair.size()
        )));
    }
    Ok(AlexanderPair {
        a: pair.a.minor(base - 1, base - 1),
        b: pair.b.minor(base - 1, base - 1),
        kind: PairKind::Reduced,
    })
}

/// det(B - tA) of a reduced pair, normalized. The 0 x 0 pair gives 1.
pub fn alexander_polynomial(pair: &AlexanderPair) -> Result<LaurentPolyZ> {
    if pair.kind == PairKind::Full {
        return Err(Error::InvalidInput(
            "determinant of the full pair is always zero; reduce it first".into(),
        ));
    }
    let n = pair.size();
    let m: Vec<Vec<IntPoly>> = (0..n)
        .map(|i| (0..n).map(|j| IntPoly::linear(pair.b.get(i, j), pair.a.get(i, j))).collect())
        .collect();
    let det = det_poly(m)?;
    let raw = det
        .coeffs()
        .iter()
        .map(|&c| i64::try_from(c).map_err(|_| Error::Overflow("determinant coefficient".into())))
        .collect::<Result<Vec<i64>>>()?;
    LaurentPolyZ::new(&raw)
}

/// A knot ready for analysis: an optional crossing presentation and its
/// Alexander polynomial.
#[derive(Debug, Clone)]
pub struct Knot {
    pub name: String,
    pub presentation: Option<KnotPresentation>,
    pub delta: LaurentPolyZ,
}

impl Knot {
    /// Builds a knot from crossing data; the polynomial comes from the
    /// determinant of the reduced pair.
    pub fn from_presentation(name: &str, pres: KnotPresentation) -> Result<Self> {
        let full = fox_pair(&pres)?;
        let reduced = reduce_pair(&full, 1)?;
        let delta = alexander_polynomial(&reduced)?;
        Ok(Knot { name: name.to_string(), presentation: Some(pres), delta })
    }

    pub fn from_wirtinger_text(name: &str, text: &str) -> Result<Self> {
        Self::from_presentation(name, parse_wirtinger(text)?)
    }

    /// The reduced crossing pair, if a presentation is available.
    pub fn reduced_pair(&self) -> Result<Option<AlexanderPair>> {
        match &self.presentation {
            Some(pres) => Ok(Some(reduce_pair(&fox_pair(pres)?, 1)?)),
            None => Ok(None),
        }
    }

    /// The pair used for analysis at prime p: the reduced crossing pair when
    /// a presentation exists, otherwise the recurrence window pair.
    pub fn pair_for_prime(&self, p: u64) -> Result<AlexanderPair> {
        match self.reduced_pair()? {
            Some(pair) => Ok(pair),
            None => crate::shift::two_bridge_window_pair(&self.delta, p),
        }
    }

    /// Rank of the state module at p: the mod-p support width of delta.
    pub fn rank_at(&self, p: u64) -> usize {
        crate::poly::degree_mod_p(&self.delta, p)
    }
}

const TREFOIL_WIRT: &str = "\
generators 3
xing 3 1 2 +
xing 1 2 3 +
xing 2 3 1 +
";

const FIGURE8_WIRT: &str = "\
generators 4
xing 4 1 2 +
xing 2 3 1 -
xing 1 4 3 +
xing 3 2 4 -
";

/// Built-in knots by name. Two-bridge polynomials without stored crossing
/// data are analyzed through the recurrence window.
pub fn builtin_knot(name: &str) -> Result<Knot> {
    let canonical = name.trim().to_ascii_lowercase();
    let (canon_name, pres_text, delta): (&str, Option<&str>, &[i64]) = match canonical.as_str() {
        "trefoil" | "3_1" => ("trefoil", Some(TREFOIL_WIRT), &[1, -1, 1]),
        "figure8" | "figure-eight" | "figure_eight" | "4_1" => {
            ("figure8", Some(FIGURE8_WIRT), &[1, -3, 1])
        }
        "5_1" | "cinquefoil" => ("5_1", None, &[1, -1, 1, -1, 1]),
        "5_2" => ("5_2", None, &[2, -3, 2]),
        "6_1" => ("6_1", None, &[2, -5, 2]),
        "7_4" => ("7_4", None, &[4, -7, 4]),
        _ => return Err(Error::UnknownKnot(name.to_string())),
    };
    let presentation = pres_text.map(parse_wirtinger).transpose()?;
    Ok(Knot {
        name: canon_name.to_string(),
        presentation,
        delta: LaurentPolyZ::new(delta)?,
    })
}

pub fn builtin_names() -> &'static [&'static str] {
    &["trefoil", "figure8", "5_1", "5_2", "6_1", "7_4"]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrips() {
        let pres = parse_wirtinger(TREFOIL_WIRT).unwrap();
        assert_eq!(pres.generators, 3);
        assert_eq!(pres.crossings.len(), 3);
        assert_eq!(
            pres.crossings[0],
            Crossing { out: 3, over: 1, inc: 2, sign: Sign::Positive }
        );
    }

    #[test]
    fn parse_handles_comments_and_blanks() {
        let text = "# a knot\n\ngenerators 1 # one arc\nxing 1 1 1 + # degenerate\n";
        let pres = parse_wirtinger(text).unwrap();
        assert_eq!(pres.generators, 1);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_wirtinger("generators 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
        let err = parse_wirtinger("generators 2\nxing 1 2 2 +\nxing 1 2 1 -\n").unwrap_err();
        assert!(matches!(err, Error::NotAKnot(_)), "{err}");
        let err = parse_wirtinger("xing 1 1 1 +\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other}"),
        }
        let err = parse_wirtinger("generators 1\nxing 1 1 1 *\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn fox_rows_for_positive_crossing() {
        let pres = KnotPresentation::new(
            3,
            vec![
                Crossing { out: 3, over: 1, inc: 2, sign: Sign::Positive },
                Crossing { out: 1, over: 2, inc: 3, sign: Sign::Positive },
                Crossing { out: 2, over: 3, inc: 1, sign: Sign::Positive },
            ],
        )
        .unwrap();
        let pair = fox_pair(&pres).unwrap();
        // crossing (out=3, over=1, inc=2, +): B row (-1, 0, +1), A row (-1, +1, 0)
        assert_eq!(pair.b.row(2), &[-1, 0, 1]);
        assert_eq!(pair.a.row(2), &[-1, 1, 0]);
    }

    #[test]
    fn fox_rows_for_negative_crossing() {
        let pres = KnotPresentation::new(
            3,
            vec![
                Crossing { out: 2, over: 1, inc: 3, sign: Sign::Negative },
                Crossing { out: 1, over: 2, inc: 2, sign: Sign::Positive },
                Crossing { out: 3, over: 1, inc: 1, sign: Sign::Positive },
            ],
        )
        .unwrap();
        let pair = fox_pair(&pres).unwrap();
        // crossing (out=2, over=1, inc=3, -): B row (+1, 0, -1), A row (+1, -1, 0)
        assert_eq!(pair.b.row(1), &[1, 0, -1]);
        assert_eq!(pair.a.row(1), &[1, -1, 0]);
    }

    #[test]
    fn full_pair_rows_sum_to_zero() {
        for name in ["trefoil", "figure8"] {
            let knot = builtin_knot(name).unwrap();
            let pair = fox_pair(knot.presentation.as_ref().unwrap()).unwrap();
            for i in 0..pair.size() {
                assert_eq!(pair.a.row(i).iter().sum::<i64>(), 0);
                assert_eq!(pair.b.row(i).iter().sum::<i64>(), 0);
            }
        }
    }

    #[test]
    fn trefoil_polynomial_from_determinant() {
        let knot = builtin_knot("trefoil").unwrap();
        let pair = knot.reduced_pair().unwrap().unwrap();
        assert_eq!(pair.size(), 2);
        let delta = alexander_polynomial(&pair).unwrap();
        assert_eq!(delta.coeffs(), &[1, -1, 1]);
        assert_eq!(delta, knot.delta);
    }

    #[test]
    fn figure8_polynomial_from_determinant() {
        let knot = builtin_knot("figure8").unwrap();
        let pair = knot.reduced_pair().unwrap().unwrap();
        assert_eq!(pair.size(), 3);
        let delta = alexander_polynomial(&pair).unwrap();
        assert_eq!(delta.coeffs(), &[1, -3, 1]);
        assert_eq!(delta, knot.delta);
    }

    #[test]
    fn base_choice_does_not_change_polynomial() {
        for name in ["trefoil", "figure8"] {
            let knot = builtin_knot(name).unwrap();
            let full = fox_pair(knot.presentation.as_ref().unwrap()).unwrap();
            for base in 1..=full.size() {
                let delta = alexander_polynomial(&reduce_pair(&full, base).unwrap()).unwrap();
                assert_eq!(delta, knot.delta, "{name} with base {base}");
            }
        }
    }

    #[test]
    fn unknot_has_trivial_polynomial() {
        let knot = Knot::from_wirtinger_text("unknot", "generators 1\nxing 1 1 1 +\n").unwrap();
        assert_eq!(knot.delta.coeffs(), &[1]);
        let pair = knot.reduced_pair().unwrap().unwrap();
        assert_eq!(pair.size(), 0);
    }

    #[test]
    fn builtin_aliases_resolve() {
        assert_eq!(builtin_knot("3_1").unwrap().name, "trefoil");
        assert_eq!(builtin_knot("figure-eight").unwrap().name, "figure8");
        assert_eq!(builtin_knot("4_1").unwrap().name, "figure8");
        assert_eq!(builtin_knot("TREFOIL").unwrap().name, "trefoil");
        assert!(builtin_knot("8_19").is_err());
        for name in builtin_names() {
            assert!(builtin_knot(name).is_ok());
        }
    }

    #[test]
    fn builtin_polynomials_pass_knot_gates() {
        for name in builtin_names() {
            let knot = builtin_knot(name).unwrap();
            let v = knot.delta.eval_at_one();
            assert!(v == 1 || v == -1);
        }
    }

    #[test]
    fn full_pair_determinant_refused() {
        let knot = builtin_knot("trefoil").unwrap();
        let full = fox_pair(knot.presentation.as_ref().unwrap()).unwrap();
        assert!(alexander_polynomial(&full).is_err());
    }
}
