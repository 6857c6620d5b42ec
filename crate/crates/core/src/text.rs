//! Line-oriented text formats for instances and advice.
//!
//! ```text
//! USSR v1            UUSSR v1            ADVICE v1
//! k 4                k 3                 kind ltf
//! terms +4 -1 -2 +3  delta 1 -1 1        k 3
//!                                        B 1
//!                                        method round
//!                                        weights 19 27 33
//! ```
//!
//! Basis advice replaces `method`/`weights` with `Pmant`, `Pdrop`, `basis`,
//! `values` and an optional `inverse`; rows are separated by `;`. Text after
//! `#` is a comment, except `# provenance:` lines in ltf advice, which are
//! parsed back.

use std::fmt::Write;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::advice::Advice;
use crate::basis::{ApproxValue, BasisAdvice};
use crate::dyadic::{Dyadic, DyadicInterval};
use crate::error::{Error, Result};
use crate::instances::{DomainSpec, Term, UssrInstance, UussrInstance};
use crate::ltf::{LtfAdvice, LtfMethod, LtfProvenance};
use crate::numtheory::square_free_basis;

const PROVENANCE: &str = "# provenance:";

fn perr(line: usize, token: Option<usize>, msg: impl Into<String>) -> Error {
    Error::Parse { line, token, msg: msg.into() }
}

struct Line<'a> {
    number: usize,
    key: &'a str,
    rest: Vec<&'a str>,
}

impl Line<'_> {
    fn err(&self, token: usize, msg: impl Into<String>) -> Error {
        perr(self.number, Some(token), msg)
    }

    /// Token `i` of the payload, parsed; reported as token `i + 2`.
    fn parse_at<T: FromStr>(&self, i: usize, what: &str) -> Result<T> {
        let tok = self.rest.get(i).ok_or_else(|| perr(self.number, None, format!("missing {what}")))?;
        tok.parse().map_err(|_| self.err(i + 2, format!("invalid {what} {tok:?}")))
    }

    fn single<T: FromStr>(&self, what: &str) -> Result<T> {
        if self.rest.len() != 1 {
            return Err(perr(self.number, None, format!("expected exactly one {what}")));
        }
        self.parse_at(0, what)
    }
}

struct Reader<'a> {
    lines: Vec<Line<'a>>,
    provenance: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Reader<'a> {
        let mut lines = Vec::new();
        let mut provenance = Vec::new();
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            last_line = i + 1;
            let trimmed = raw.trim();
            if let Some(p) = trimmed.strip_prefix(PROVENANCE) {
                provenance.push((i + 1, p.split_whitespace().collect()));
                continue;
            }
            let content = raw.split('#').next().unwrap_or("");
            let mut toks = content.split_whitespace();
            if let Some(key) = toks.next() {
                lines.push(Line { number: i + 1, key, rest: toks.collect() });
            }
        }
        Reader { lines, provenance, pos: 0, last_line }
    }

    fn next(&mut self, key: &str) -> Result<&Line<'a>> {
        let line = self
            .lines
            .get(self.pos)
            .ok_or_else(|| perr(self.last_line + 1, None, format!("missing {key:?} line")))?;
        if line.key != key {
            return Err(perr(line.number, Some(1), format!("expected {key:?}, found {:?}", line.key)));
        }
        self.pos += 1;
        Ok(line)
    }

    fn peek_key(&self) -> Option<&str> {
        self.lines.get(self.pos).map(|l| l.key)
    }

    fn header(&mut self, tag: &str) -> Result<()> {
        let line = self.next(tag)?;
        match line.rest.as_slice() {
            ["v1"] => Ok(()),
            [v] => Err(line.err(2, format!("unsupported version {v:?}"))),
            _ => Err(perr(line.number, None, "expected a single version tag")),
        }
    }

    fn finish(&self) -> Result<()> {
        match self.lines.get(self.pos) {
            Some(l) => Err(perr(l.number, Some(1), format!("unexpected line {:?}", l.key))),
            None => Ok(()),
        }
    }
}

/// A parsed instance file of either kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceFile {
    Ussr(UssrInstance),
    Uussr(UussrInstance),
}

impl InstanceFile {
    /// The normal form, normalizing a raw instance if needed.
    pub fn to_uussr(&self) -> Result<UussrInstance> {
        match self {
            InstanceFile::Ussr(i) => crate::instances::normalize(i),
            InstanceFile::Uussr(i) => Ok(i.clone()),
        }
    }
}

pub fn read_instance(text: &str) -> Result<InstanceFile> {
    let reader = Reader::new(text);
    match reader.peek_key() {
        Some("USSR") => read_ussr(text).map(InstanceFile::Ussr),
        Some("UUSSR") => read_uussr(text).map(InstanceFile::Uussr),
        Some(other) => Err(perr(reader.lines[0].number, Some(1), format!("unknown file tag {other:?}"))),
        None => Err(perr(1, None, "empty input")),
    }
}

fn read_k(r: &mut Reader) -> Result<u64> {
    let line = r.next("k")?;
    let k: u64 = line.single("k")?;
    if k < 1 {
        return Err(line.err(2, "k must be >= 1"));
    }
    Ok(k)
}

pub fn read_ussr(text: &str) -> Result<UssrInstance> {
    let mut r = Reader::new(text);
    r.header("USSR")?;
    let k = read_k(&mut r)?;
    let line = r.next("terms")?;
    let mut terms = Vec::with_capacity(line.rest.len());
    for (i, tok) in line.rest.iter().enumerate() {
        let (negative, digits) = match tok.as_bytes().first() {
            Some(b'+') => (false, &tok[1..]),
            Some(b'-') => (true, &tok[1..]),
            _ => return Err(line.err(i + 2, format!("term {tok:?} lacks a sign"))),
        };
        let radicand: u64 = digits
            .parse()
            .map_err(|_| line.err(i + 2, format!("invalid term {tok:?}")))?;
        if radicand < 1 || radicand > k {
            return Err(line.err(i + 2, format!("radicand {radicand} outside [1, {k}]")));
        }
        terms.push(Term { negative, radicand });
    }
    r.finish()?;
    UssrInstance::new(k, terms)
}

pub fn read_uussr(text: &str) -> Result<UussrInstance> {
    let mut r = Reader::new(text);
    r.header("UUSSR")?;
    let k = read_k(&mut r)?;
    let basis = square_free_basis(k)?;
    let line = r.next("delta")?;
    if line.rest.len() != basis.len() {
        return Err(perr(
            line.number,
            None,
            format!("expected {} coefficients for k = {k}, found {}", basis.len(), line.rest.len()),
        ));
    }
    let delta = (0..line.rest.len())
        .map(|i| line.parse_at::<i64>(i, "coefficient"))
        .collect::<Result<Vec<_>>>()?;
    r.finish()?;
    UussrInstance::new(basis.into(), delta)
}

pub fn write_ussr(inst: &UssrInstance) -> String {
    let mut out = format!("USSR v1\nk {}\nterms", inst.k());
    for t in inst.terms() {
        write!(out, " {t}").unwrap();
    }
    out.push('\n');
    out
}

pub fn write_uussr(inst: &UussrInstance) -> String {
    let mut out = format!("UUSSR v1\nk {}\ndelta", inst.k());
    for d in inst.delta() {
        write!(out, " {d}").unwrap();
    }
    out.push('\n');
    out
}

pub fn write_advice(adv: &Advice) -> String {
    match adv {
        Advice::Ltf(a) => write_ltf(a),
        Advice::Basis(a) => write_basis(a),
    }
}

fn write_ltf(a: &LtfAdvice) -> String {
    let mut out = format!(
        "ADVICE v1\nkind ltf\nk {}\nB {}\nmethod {}\nweights",
        a.domain().k(),
        a.domain().bound(),
        a.method()
    );
    for w in a.weights() {
        write!(out, " {w}").unwrap();
    }
    out.push('\n');
    match a.provenance() {
        LtfProvenance::Unrecorded => {}
        LtfProvenance::Round { lambda, eps_min } => {
            writeln!(out, "{PROVENANCE} lambda {lambda}").unwrap();
            writeln!(out, "{PROVENANCE} eps_min {} {}", eps_min.lo(), eps_min.hi()).unwrap();
        }
        LtfProvenance::Lp { tight } => {
            write!(out, "{PROVENANCE} tight").unwrap();
            for t in tight {
                write!(out, " {t}").unwrap();
            }
            out.push('\n');
        }
    }
    out
}

fn write_rows<T: std::fmt::Display>(out: &mut String, key: &str, rows: &[Vec<T>]) {
    out.push_str(key);
    for (i, row) in rows.iter().enumerate() {
        if i > 0 {
            out.push_str(" ;");
        }
        for x in row {
            write!(out, " {x}").unwrap();
        }
    }
    out.push('\n');
}

fn write_basis(a: &BasisAdvice) -> String {
    let mut out = format!(
        "ADVICE v1\nkind basis\nk {}\nB {}\nPmant {}\nPdrop {}\n",
        a.domain().k(),
        a.domain().bound(),
        a.p_mant(),
        a.p_drop()
    );
    write_rows(&mut out, "basis", a.rows());
    let den = BigInt::one() << a.p_mant() as usize;
    let values: Vec<Vec<String>> = a
        .values()
        .iter()
        .map(|v| vec![format!("{}/{den}", v.mantissa), v.exponent.to_string()])
        .collect();
    write_rows(&mut out, "values", &values);
    if let Some(inv) = a.inverse() {
        let rows: Vec<Vec<String>> = inv
            .iter()
            .map(|r| r.iter().map(|x| format!("{}/{}", x.numer(), x.denom())).collect())
            .collect();
        write_rows(&mut out, "inverse", &rows);
    }
    out
}

pub fn read_advice(text: &str) -> Result<Advice> {
    let mut r = Reader::new(text);
    r.header("ADVICE")?;
    let kind_line = r.next("kind")?;
    let kind: String = kind_line.single("kind")?;
    let kind_number = kind_line.number;
    let k = read_k(&mut r)?;
    let b_line = r.next("B")?;
    let bound: i64 = b_line.single("B")?;
    let dom = DomainSpec::new(k, bound).map_err(|e| b_line.err(2, e.to_string()))?;
    let dim = square_free_basis(k)?.len();
    let adv = match kind.as_str() {
        "ltf" => Advice::Ltf(read_ltf_body(&mut r, dom, dim)?),
        "basis" => Advice::Basis(read_basis_body(&mut r, dom, dim)?),
        other => return Err(perr(kind_number, Some(2), format!("unknown advice kind {other:?}"))),
    };
    r.finish()?;
    Ok(adv)
}

fn read_ltf_body(r: &mut Reader, dom: DomainSpec, dim: usize) -> Result<LtfAdvice> {
    let line = r.next("method")?;
    let method_name: String = line.single("method")?;
    let method = LtfMethod::from_str(&method_name).map_err(|e| line.err(2, e.to_string()))?;
    let line = r.next("weights")?;
    if line.rest.len() != dim {
        return Err(perr(line.number, None, format!("expected {dim} weights, found {}", line.rest.len())));
    }
    let weights = (0..dim)
        .map(|i| line.parse_at::<BigInt>(i, "weight"))
        .collect::<Result<Vec<_>>>()?;
    let provenance = read_provenance(&r.provenance, method)?;
    LtfAdvice::new(dom, weights, method, provenance)
}

fn read_provenance(lines: &[(usize, Vec<&str>)], method: LtfMethod) -> Result<LtfProvenance> {
    let mut lambda = None;
    let mut eps = None;
    let mut tight = None;
    for (number, toks) in lines {
        let bad = |t: usize, what: &str| perr(*number, Some(t), format!("invalid provenance {what}"));
        match toks.as_slice() {
            ["lambda", v] => lambda = Some(v.parse::<BigInt>().map_err(|_| bad(4, "lambda"))?),
            ["eps_min", lo, hi] => {
                let lo: Dyadic = lo.parse().map_err(|_| bad(4, "eps_min"))?;
                let hi: Dyadic = hi.parse().map_err(|_| bad(5, "eps_min"))?;
                eps = Some(DyadicInterval::new(lo, hi).map_err(|_| bad(4, "eps_min"))?);
            }
            ["tight", rest @ ..] => {
                tight = Some(
                    rest.iter()
                        .enumerate()
                        .map(|(i, t)| t.parse::<u64>().map_err(|_| bad(i + 4, "tight index")))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            _ => return Err(perr(*number, None, "unrecognized provenance line")),
        }
    }
    Ok(match (method, lambda, eps, tight) {
        (LtfMethod::Round, Some(lambda), Some(eps_min), None) => LtfProvenance::Round { lambda, eps_min },
        (LtfMethod::Lp, None, None, Some(tight)) => LtfProvenance::Lp { tight },
        (_, None, None, None) => LtfProvenance::Unrecorded,
        _ => {
            let number = lines.first().map_or(0, |l| l.0);
            return Err(perr(number, None, format!("provenance does not match method {method}")));
        }
    })
}

/// Splits `a b ; c d ; …` into `dim` rows of `width` tokens each, returning
/// each token with its 1-based position on the line.
fn split_rows<'a>(line: &Line<'a>, dim: usize, width: usize) -> Result<Vec<Vec<(usize, &'a str)>>> {
    let mut rows = vec![Vec::new()];
    for (i, tok) in line.rest.iter().enumerate() {
        if *tok == ";" {
            rows.push(Vec::new());
        } else {
            rows.last_mut().unwrap().push((i + 2, *tok));
        }
    }
    if rows.len() != dim {
        return Err(perr(line.number, None, format!("expected {dim} rows, found {}", rows.len())));
    }
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != width) {
        return Err(perr(
            line.number,
            row.first().map(|t| t.0),
            format!("row {} has {} entries, expected {width}", i + 1, row.len()),
        ));
    }
    Ok(rows)
}

fn parse_fraction(line: &Line, pos: usize, tok: &str) -> Result<(BigInt, BigInt)> {
    let bad = || line.err(pos, format!("invalid fraction {tok:?}"));
    let (n, d) = tok.split_once('/').ok_or_else(bad)?;
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok((n, d))
}

fn read_basis_body(r: &mut Reader, dom: DomainSpec, dim: usize) -> Result<BasisAdvice> {
    let p_mant: u64 = r.next("Pmant")?.single("Pmant")?;
    let p_drop: u64 = r.next("Pdrop")?.single("Pdrop")?;

    let line = r.next("basis")?;
    let mut rows = Vec::with_capacity(dim);
    for row in split_rows(line, dim, dim)? {
        let mut out = Vec::with_capacity(dim);
        for (pos, tok) in row {
            let x: i64 = tok.parse().map_err(|_| line.err(pos, format!("invalid entry {tok:?}")))?;
            if x.abs() > dom.bound() {
                return Err(line.err(pos, format!("entry {x} outside [-{0}, {0}]", dom.bound())));
            }
            out.push(x);
        }
        rows.push(out);
    }

    let line = r.next("values")?;
    let den = BigInt::one() << p_mant as usize;
    let mut values = Vec::with_capacity(dim);
    for row in split_rows(line, dim, 2)? {
        let (pos, tok) = row[0];
        let (mantissa, d) = parse_fraction(line, pos, tok)?;
        if d != den {
            return Err(line.err(pos, format!("denominator must be 2^{p_mant}")));
        }
        let (epos, etok) = row[1];
        let exponent: i64 = etok.parse().map_err(|_| line.err(epos, format!("invalid exponent {etok:?}")))?;
        values.push(ApproxValue { mantissa, exponent });
    }

    let inverse = if r.peek_key() == Some("inverse") {
        let line = r.next("inverse")?;
        let mut inv = Vec::with_capacity(dim);
        for row in split_rows(line, dim, dim)? {
            inv.push(
                row.into_iter()
                    .map(|(pos, tok)| parse_fraction(line, pos, tok).map(|(n, d)| BigRational::new(n, d)))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Some(inv)
    } else {
        None
    };
    BasisAdvice::from_parts(dom, rows, values, inverse, p_mant, p_drop)
        .map_err(|e| perr(line_of(r, "values"), None, e.to_string()))
}

fn line_of(r: &Reader, key: &str) -> usize {
    r.lines.iter().find(|l| l.key == key).map_or(0, |l| l.number)
}
