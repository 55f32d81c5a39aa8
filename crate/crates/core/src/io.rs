//! Line-oriented exact text format for series and tables, plus
//! deterministic pseudo-random generators for property suites.
//!
//! Grammar ('#' starts a comment, LF line endings):
//!
//! ```text
//! gv-table v1
//! rank R
//! mass m1 ... mR          # rationals p/q
//! masscap M
//! tmin E
//! tmax E
//! GW (a1,...,aR) : e1 c1 ; e2 c2 ; ...
//! BPS (a1,...,aR) g=G : c
//! E (a1,...,aR) g=G : c
//! FANO c1=N g=G : c
//! ```
//!
//! The canonical printer sorts classes by the lattice total order and
//! exponents ascending, and emits reduced fractions with positive
//! denominators; parse then print is the identity on canonical files.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fano::FanoSeries;
use crate::gv::BPSTable;
use crate::lattice::{enumerate_classes, LatticeClass, LatticeConfig};
use crate::qseries::QSeries;
use crate::structure::ETable;
use crate::tpoly::TPoly;
use crate::Rat;

/// A parsed file: one homogeneous body kind over a self-describing
/// header. A file with an empty body parses as an empty GW series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GvFile {
    Gw(QSeries),
    Bps(BPSTable),
    E(ETable),
    Fano(FanoSeries),
}

// ---------------------------------------------------------------------
// parsing

struct Cursor<'a> {
    line: &'a str,
    line_no: usize,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: &'a str, line_no: usize) -> Self {
        Cursor { line, line_no, pos: 0 }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line_no,
            col: self.pos + 1,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.line[self.pos..].starts_with(' ') || self.line[self.pos..].starts_with('\t') {
            self.pos += 1;
        }
    }

    fn next_token(&mut self) -> Option<&'a str> {
        self.skip_ws();
        if self.pos >= self.line.len() {
            return None;
        }
        let start = self.pos;
        while self.pos < self.line.len()
            && !self.line[self.pos..].starts_with(' ')
            && !self.line[self.pos..].starts_with('\t')
        {
            self.pos += 1;
        }
        Some(&self.line[start..self.pos])
    }

    fn expect_token(&mut self, what: &str) -> Result<&'a str> {
        self.next_token()
            .ok_or_else(|| self.error(format!("expected {what}")))
    }

    fn expect_end(&mut self) -> Result<()> {
        if let Some(tok) = self.next_token() {
            return Err(self.error(format!("unexpected trailing token `{tok}`")));
        }
        Ok(())
    }
}

fn parse_rational(cur: &Cursor<'_>, tok: &str) -> Result<Rat> {
    let parse_int = |s: &str| -> Result<BigInt> {
        s.parse::<BigInt>()
            .map_err(|_| cur.error(format!("invalid integer `{s}`")))
    };
    match tok.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(cur.error("zero denominator"));
            }
            Ok(Rat::new(parse_int(n)?, den))
        }
        None => Ok(Rat::from_integer(parse_int(tok)?)),
    }
}

fn parse_i64(cur: &Cursor<'_>, tok: &str) -> Result<i64> {
    tok.parse::<i64>()
        .map_err(|_| cur.error(format!("invalid integer `{tok}`")))
}

fn parse_class(cur: &Cursor<'_>, tok: &str, rank: usize) -> Result<LatticeClass> {
    let inner = tok
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| cur.error(format!("expected class tuple `(a1,...)`, got `{tok}`")))?;
    let coords: Vec<u32> = inner
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| cur.error(format!("invalid coordinate `{p}`")))
        })
        .collect::<Result<_>>()?;
    if coords.len() != rank {
        return Err(Error::DimensionMismatch {
            line: cur.line_no,
            expected: rank,
            got: coords.len(),
        });
    }
    LatticeClass::new(coords).map_err(|_| cur.error("class coordinates must not all be zero"))
}

fn parse_keyed_u32(cur: &Cursor<'_>, tok: &str, key: &str) -> Result<u32> {
    tok.strip_prefix(key)
        .and_then(|s| s.strip_prefix('='))
        .and_then(|s| s.parse::<u32>().ok())
        .ok_or_else(|| cur.error(format!("expected `{key}=N`, got `{tok}`")))
}

struct Header {
    config: LatticeConfig,
    tmin: i64,
    tmax: i64,
}

fn header_line<'a>(
    lines: &[(usize, &'a str)],
    idx: &mut usize,
    key: &str,
) -> Result<Cursor<'a>> {
    let (line_no, line) = *lines.get(*idx).ok_or(Error::Parse {
        line: 0,
        col: 1,
        msg: format!("missing `{key}` header line"),
    })?;
    *idx += 1;
    let mut cur = Cursor::new(line, line_no);
    let tok = cur.expect_token(key)?;
    if tok != key {
        return Err(cur.error(format!("expected `{key}`, got `{tok}`")));
    }
    Ok(cur)
}

pub fn parse(text: &str) -> Result<GvFile> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, raw)| {
            let content = match raw.find('#') {
                Some(idx) => &raw[..idx],
                None => raw,
            };
            (i + 1, content)
        })
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let mut idx = 0usize;

    let mut cur = header_line(&lines, &mut idx, "gv-table")?;
    let version = cur.expect_token("format version")?;
    if version != "v1" {
        return Err(cur.error(format!("unsupported format version `{version}`")));
    }
    cur.expect_end()?;

    let mut cur = header_line(&lines, &mut idx, "rank")?;
    let tok = cur.expect_token("rank")?;
    let rank = parse_i64(&cur, tok)?;
    if rank < 1 {
        return Err(cur.error("rank must be at least 1"));
    }
    let rank = rank as usize;
    cur.expect_end()?;

    let mut cur = header_line(&lines, &mut idx, "mass")?;
    let mut masses = Vec::new();
    while let Some(tok) = cur.next_token() {
        masses.push(parse_rational(&cur, tok)?);
    }
    if masses.len() != rank {
        return Err(Error::DimensionMismatch {
            line: cur.line_no,
            expected: rank,
            got: masses.len(),
        });
    }

    let mut cur = header_line(&lines, &mut idx, "masscap")?;
    let tok = cur.expect_token("mass cap")?;
    let cap = parse_rational(&cur, tok)?;
    cur.expect_end()?;

    let mut cur = header_line(&lines, &mut idx, "tmin")?;
    let tok = cur.expect_token("tmin")?;
    let tmin = parse_i64(&cur, tok)?;
    if tmin % 2 != 0 {
        return Err(cur.error(format!("tmin must be even, got {tmin}")));
    }
    cur.expect_end()?;

    let mut cur = header_line(&lines, &mut idx, "tmax")?;
    let tok = cur.expect_token("tmax")?;
    let tmax = parse_i64(&cur, tok)?;
    if tmax % 2 != 0 {
        return Err(cur.error(format!("tmax must be even, got {tmax}")));
    }
    if tmax < tmin {
        return Err(cur.error(format!("tmax {tmax} below tmin {tmin}")));
    }
    cur.expect_end()?;

    let config = LatticeConfig::new(masses, cap, tmax)
        .map_err(|e| Error::Parse {
            line: cur.line_no,
            col: 1,
            msg: e.to_string(),
        })?;
    let header = Header { config, tmin, tmax };

    let mut kind: Option<&str> = None;
    let mut gw = QSeries::zero(header.config.clone());
    let mut bps = BPSTable::new(header.config.clone());
    let mut etable = ETable::new(header.config.clone());
    let mut fano_c1: Option<u32> = None;
    let mut fano_coeffs: BTreeMap<u32, Rat> = BTreeMap::new();

    for &(line_no, line) in &lines[idx..] {
        let mut cur = Cursor::new(line, line_no);
        let keyword = cur.expect_token("row keyword")?;
        match kind {
            None => kind = Some(match keyword {
                "GW" => "GW",
                "BPS" => "BPS",
                "E" => "E",
                "FANO" => "FANO",
                other => return Err(cur.error(format!("unknown row keyword `{other}`"))),
            }),
            Some(k) if k != keyword => {
                return Err(cur.error(format!(
                    "mixed row kinds: file started with `{k}`, found `{keyword}`"
                )))
            }
            Some(_) => {}
        }
        match keyword {
            "GW" => parse_gw_row(&mut cur, &header, &mut gw)?,
            "BPS" => {
                let (class, g, value) = parse_table_row(&mut cur, &header)?;
                bps.insert(class, g, value);
            }
            "E" => {
                let (class, g, value) = parse_table_row(&mut cur, &header)?;
                etable.insert(class, g, value);
            }
            "FANO" => parse_fano_row(&mut cur, &header, &mut fano_c1, &mut fano_coeffs)?,
            _ => unreachable!(),
        }
    }

    Ok(match kind {
        None | Some("GW") => GvFile::Gw(gw),
        Some("BPS") => GvFile::Bps(bps),
        Some("E") => GvFile::E(etable),
        Some("FANO") => {
            let window = ((header.tmax + 2) / 2).max(0) as u32;
            GvFile::Fano(FanoSeries::new(
                fano_c1.unwrap_or(1),
                fano_coeffs,
                window,
            )?)
        }
        Some(_) => unreachable!(),
    })
}

fn parse_gw_row(cur: &mut Cursor<'_>, header: &Header, gw: &mut QSeries) -> Result<()> {
    let tok = cur.expect_token("class tuple")?;
    let class = parse_class(cur, tok, header.config.rank())?;
    if !header.config.in_cap(&class) {
        return Err(cur.error(format!("class {class} exceeds the mass cap")));
    }
    let colon = cur.expect_token("`:`")?;
    if colon != ":" {
        return Err(cur.error(format!("expected `:`, got `{colon}`")));
    }
    let mut terms = Vec::new();
    loop {
        let tok = match cur.next_token() {
            Some(t) => t,
            None => break,
        };
        let exp = parse_i64(cur, tok)?;
        if exp % 2 != 0 {
            return Err(cur.error(format!("odd t-exponent {exp}")));
        }
        if exp < header.tmin || exp > header.tmax {
            return Err(cur.error(format!(
                "t-exponent {exp} outside window [{}, {}]",
                header.tmin, header.tmax
            )));
        }
        let tok = cur.expect_token("coefficient")?;
        let coeff = parse_rational(cur, tok)?;
        terms.push((exp, coeff));
        match cur.next_token() {
            None => break,
            Some(";") => continue,
            Some(other) => return Err(cur.error(format!("expected `;`, got `{other}`"))),
        }
    }
    gw.accumulate(
        class,
        TPoly::from_terms(terms, header.tmin.min(header.tmax), header.tmax),
    );
    Ok(())
}

fn parse_table_row(cur: &mut Cursor<'_>, header: &Header) -> Result<(LatticeClass, u32, Rat)> {
    let tok = cur.expect_token("class tuple")?;
    let class = parse_class(cur, tok, header.config.rank())?;
    if !header.config.in_cap(&class) {
        return Err(cur.error(format!("class {class} exceeds the mass cap")));
    }
    let tok = cur.expect_token("`g=G`")?;
    let genus = parse_keyed_u32(cur, tok, "g")?;
    let colon = cur.expect_token("`:`")?;
    if colon != ":" {
        return Err(cur.error(format!("expected `:`, got `{colon}`")));
    }
    let tok = cur.expect_token("value")?;
    let value = parse_rational(cur, tok)?;
    cur.expect_end()?;
    Ok((class, genus, value))
}

fn parse_fano_row(
    cur: &mut Cursor<'_>,
    header: &Header,
    c1: &mut Option<u32>,
    coeffs: &mut BTreeMap<u32, Rat>,
) -> Result<()> {
    let tok = cur.expect_token("`c1=N`")?;
    let this_c1 = parse_keyed_u32(cur, tok, "c1")?;
    match c1 {
        None => *c1 = Some(this_c1),
        Some(prev) if *prev != this_c1 => {
            return Err(cur.error(format!(
                "inconsistent c1: file started with {prev}, found {this_c1}"
            )))
        }
        Some(_) => {}
    }
    let tok = cur.expect_token("`g=G`")?;
    let genus = parse_keyed_u32(cur, tok, "g")?;
    let window = ((header.tmax + 2) / 2).max(0) as u32;
    if genus > window {
        return Err(cur.error(format!("genus {genus} exceeds the window {window}")));
    }
    let colon = cur.expect_token("`:`")?;
    if colon != ":" {
        return Err(cur.error(format!("expected `:`, got `{colon}`")));
    }
    let tok = cur.expect_token("value")?;
    let value = parse_rational(cur, tok)?;
    cur.expect_end()?;
    if !value.is_zero() {
        coeffs.insert(genus, value);
    }
    Ok(())
}

// ---------------------------------------------------------------------
// printing

fn print_rational(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn print_header(
    out: &mut String,
    config: &LatticeConfig,
    tmin: i64,
    tmax: i64,
) {
    out.push_str("gv-table v1\n");
    out.push_str(&format!("rank {}\n", config.rank()));
    let masses: Vec<String> = config.mass_vector().iter().map(print_rational).collect();
    out.push_str(&format!("mass {}\n", masses.join(" ")));
    out.push_str(&format!("masscap {}\n", print_rational(config.mass_cap())));
    out.push_str(&format!("tmin {tmin}\n"));
    out.push_str(&format!("tmax {tmax}\n"));
}

pub fn print_gw(series: &QSeries) -> String {
    let config = series.config();
    let tmax = config.t_order();
    let tmin = series
        .terms()
        .filter_map(|(_, t)| t.leading().map(|(e, _)| e))
        .min()
        .unwrap_or(-2)
        .min(-2);
    let mut out = String::new();
    print_header(&mut out, config, tmin, tmax);
    for class in series.classes_in_mass_order() {
        let t = series.get(&class).unwrap();
        if t.is_zero() {
            continue;
        }
        let terms: Vec<String> = t
            .terms()
            .map(|(e, c)| format!("{e} {}", print_rational(c)))
            .collect();
        out.push_str(&format!("GW {class} : {}\n", terms.join(" ; ")));
    }
    out
}

fn print_table_body(
    out: &mut String,
    keyword: &str,
    config: &LatticeConfig,
    entries: &BTreeMap<(LatticeClass, u32), Rat>,
) {
    let mut keys: Vec<&(LatticeClass, u32)> = entries.keys().collect();
    keys.sort_by(|(ca, ga), (cb, gb)| config.class_cmp(ca, cb).then(ga.cmp(gb)));
    for key in keys {
        let (class, g) = key;
        out.push_str(&format!(
            "{keyword} {class} g={g} : {}\n",
            print_rational(&entries[key])
        ));
    }
}

pub fn print_bps(table: &BPSTable) -> String {
    let mut out = String::new();
    print_header(&mut out, &table.config, -2, table.config.t_order());
    print_table_body(&mut out, "BPS", &table.config, &table.entries);
    out
}

pub fn print_e(table: &ETable) -> String {
    let mut out = String::new();
    print_header(&mut out, &table.config, -2, table.config.t_order());
    print_table_body(&mut out, "E", &table.config, &table.entries);
    out
}

pub fn print_fano(f: &FanoSeries) -> String {
    let config = LatticeConfig::rank1(1, (2 * f.window as i64 - 2).max(0))
        .expect("static rank-1 config");
    let tmax = 2 * f.window as i64 - 2;
    let mut out = String::new();
    print_header(&mut out, &config, -2, tmax.max(-2));
    for (g, c) in &f.gw_coeffs {
        out.push_str(&format!("FANO c1={} g={g} : {}\n", f.c1, print_rational(c)));
    }
    out
}

pub fn print(file: &GvFile) -> String {
    match file {
        GvFile::Gw(s) => print_gw(s),
        GvFile::Bps(t) => print_bps(t),
        GvFile::E(t) => print_e(t),
        GvFile::Fano(f) => print_fano(f),
    }
}

// ---------------------------------------------------------------------
// deterministic generators

/// Deterministic pseudo-random integer BPS table: each (class, genus)
/// slot is filled with probability `density` with a nonzero integer in
/// [-9, 9]. Same seed, same table.
pub fn gen_bps_table(
    seed: u64,
    config: &LatticeConfig,
    density: f64,
    genus_max: u32,
) -> Result<BPSTable> {
    let mut table = BPSTable::new(config.clone());
    for (class, genus, value) in gen_entries(seed, config, density, genus_max)? {
        table.insert(class, genus, value);
    }
    Ok(table)
}

/// Same construction for e-tables (different derived seed stream).
pub fn gen_e_table(
    seed: u64,
    config: &LatticeConfig,
    density: f64,
    genus_max: u32,
) -> Result<ETable> {
    let mut table = ETable::new(config.clone());
    for (class, genus, value) in gen_entries(seed ^ 0x9e37_79b9, config, density, genus_max)? {
        table.insert(class, genus, value);
    }
    Ok(table)
}

fn gen_entries(
    seed: u64,
    config: &LatticeConfig,
    density: f64,
    genus_max: u32,
) -> Result<Vec<(LatticeClass, u32, Rat)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for class in enumerate_classes(config)? {
        for genus in 0..=genus_max {
            let roll: f64 = rng.gen();
            if roll >= density {
                continue;
            }
            let mut v: i64 = rng.gen_range(-9..=9);
            if v == 0 {
                v = 1;
            }
            out.push((class.clone(), genus, crate::int(v)));
        }
    }
    Ok(out)
}
