//! Breadth-first generation of `R(U_n)` from the seeds `0` and `1`.
//!
//! Every point `p` lies on exactly one line of each direction `u`, identified
//! by the invariant `⟨u, p⟩`. A round therefore intersects lines rather than
//! point pairs: for directions `u < v` the intersection of the lines with keys
//! `a` and `b` is `a·v/⟨u,v⟩ + b·u/⟨v,u⟩`, and only line pairs where at least
//! one line appeared in the previous round can produce anything new.
//!
//! Rounds are evaluated in parallel and merged in a fixed order (angle pairs
//! by `(u.k, v.k)`, then lines by first appearance), so depth annotations,
//! witnesses and budget cut-offs are reproducible.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cyclotomic::CycNum;
use crate::geometry::{intersect_float, pairing, Angle, OrigamiField};
use crate::{LiteralError, OrigamiError};

pub const DEFAULT_BUDGET: usize = 200_000;

/// Rows of the line-pair grid evaluated per parallel batch.
const BATCH_ROWS: usize = 64;

/// The intersection that first produced a point: `I_{u,v}(points[p], points[q])`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Witness {
    pub u: Angle,
    pub v: Angle,
    pub p: usize,
    pub q: usize,
}

#[derive(Clone, Debug)]
struct LineEntry {
    /// representative point: the first point found on the line
    rep: usize,
    /// depth of the representative
    born: usize,
}

#[derive(Clone, Debug, Default)]
struct DirectionLines {
    by_key: HashMap<CycNum, usize>,
    lines: Vec<LineEntry>,
    /// `offsets[v]`: per partner direction `v`, each line key times the kernel
    /// constant, i.e. this line's contribution to `I_{this,v}` or `I_{v,this}`
    contributions: Vec<Vec<CycNum>>,
}

/// A deduplicated set of exact points with first-discovery depths.
#[derive(Clone, Debug)]
pub struct ClosureSet {
    field: Arc<OrigamiField>,
    points: Vec<CycNum>,
    depths: Vec<usize>,
    witnesses: Vec<Option<Witness>>,
    index: HashMap<CycNum, usize>,
    depth: usize,
    budget: usize,
    complete: bool,
    directions: Vec<DirectionLines>,
}

impl ClosureSet {
    /// The seed set `{0, 1}` at depth 0.
    pub fn seed(field: Arc<OrigamiField>, budget: usize) -> Result<Self, OrigamiError> {
        if field.n() < 3 {
            return Err(OrigamiError::OrderTooSmall(field.n()));
        }
        let n = field.n();
        let mut set = Self {
            points: Vec::new(),
            depths: Vec::new(),
            witnesses: Vec::new(),
            index: HashMap::new(),
            depth: 0,
            budget,
            complete: true,
            directions: (0..n)
                .map(|_| DirectionLines {
                    contributions: vec![Vec::new(); n],
                    ..Default::default()
                })
                .collect(),
            field,
        };
        let (zero, one) = (set.field.zero(), set.field.one());
        set.insert(zero, 0, None);
        set.insert(one, 0, None);
        Ok(set)
    }

    fn insert(&mut self, point: CycNum, depth: usize, witness: Option<Witness>) {
        let idx = self.points.len();
        let n = self.field.n();
        for (k, dir) in self.directions.iter_mut().enumerate() {
            let u = Angle::wrapping(n, k as i64);
            let key = pairing(&self.field.representative(u), &point);
            if dir.by_key.contains_key(&key) {
                continue;
            }
            for (k2, contrib) in dir.contributions.iter_mut().enumerate() {
                if k2 == k {
                    continue;
                }
                let partner = Angle::wrapping(n, k2 as i64);
                // the lower-index direction plays the role of u in the kernel
                let kernel = if k < k2 {
                    self.field.kernel(u, partner)
                } else {
                    self.field.kernel(partner, u)
                }
                .expect("distinct directions");
                let scale = if k < k2 {
                    &kernel.along_v
                } else {
                    &kernel.along_u
                };
                contrib.push(&key * scale);
            }
            dir.by_key.insert(key, dir.lines.len());
            dir.lines.push(LineEntry {
                rep: idx,
                born: depth,
            });
        }
        self.index.insert(point.clone(), idx);
        self.points.push(point);
        self.depths.push(depth);
        self.witnesses.push(witness);
    }

    pub fn field(&self) -> &Arc<OrigamiField> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.field.n()
    }

    /// Number of completed rounds.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// False once a round was cut short by the point budget.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn points(&self) -> &[CycNum] {
        &self.points
    }

    pub fn point_depth(&self, idx: usize) -> usize {
        self.depths[idx]
    }

    pub fn witness(&self, idx: usize) -> Option<Witness> {
        self.witnesses[idx]
    }

    /// Points discovered in the last round.
    pub fn frontier(&self) -> impl Iterator<Item = &CycNum> {
        self.points
            .iter()
            .zip(&self.depths)
            .filter(move |(_, &d)| d == self.depth)
            .map(|(p, _)| p)
    }

    /// Number of points first found at each depth `0..=depth`.
    pub fn depth_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.depth + 1];
        for &d in &self.depths {
            counts[d] += 1;
        }
        counts
    }

    pub fn contains_point(&self, target: &CycNum) -> Option<usize> {
        self.index.get(target).map(|&i| self.depths[i])
    }

    /// One breadth-first round, returning the enlarged set.
    pub fn expand(&self) -> ClosureSet {
        let mut next = self.clone();
        next.expand_in_place();
        next
    }

    /// One breadth-first round in place. Does nothing once the budget is exhausted.
    pub fn expand_in_place(&mut self) {
        if !self.complete {
            return;
        }
        let n = self.field.n();
        let prev = self.depth;
        let new_depth = prev + 1;

        // first line index born in the previous round, per direction
        let fresh_from: Vec<usize> = self
            .directions
            .iter()
            .map(|d| d.lines.partition_point(|l| l.born < prev))
            .collect();

        let mut rows = Vec::new();
        for uk in 0..n {
            for vk in uk + 1..n {
                for i in 0..self.directions[uk].lines.len() {
                    rows.push((uk, vk, i));
                }
            }
        }

        let mut found: HashSet<CycNum> = HashSet::new();
        let mut additions = Vec::new();
        let room = self.budget.saturating_sub(self.points.len());
        'batches: for batch in rows.chunks(BATCH_ROWS * rayon::current_num_threads().max(1)) {
            let results: Vec<Vec<(CycNum, Witness)>> = batch
                .par_iter()
                .map(|&(uk, vk, i)| self.row_candidates(uk, vk, i, fresh_from[uk], fresh_from[vk]))
                .collect();
            for (point, witness) in results.into_iter().flatten() {
                if found.contains(&point) {
                    continue;
                }
                if additions.len() == room {
                    self.complete = false;
                    break 'batches;
                }
                found.insert(point.clone());
                additions.push((point, witness));
            }
        }
        for (point, witness) in additions {
            self.insert(point, new_depth, Some(witness));
        }
        self.depth = new_depth;
    }

    fn row_candidates(
        &self,
        uk: usize,
        vk: usize,
        i: usize,
        fresh_u: usize,
        fresh_v: usize,
    ) -> Vec<(CycNum, Witness)> {
        let n = self.field.n();
        let du = &self.directions[uk];
        let dv = &self.directions[vk];
        let a = &du.contributions[vk][i];
        let start = if i >= fresh_u { 0 } else { fresh_v };
        let (u, v) = (Angle::wrapping(n, uk as i64), Angle::wrapping(n, vk as i64));
        let p = du.lines[i].rep;
        (start..dv.lines.len())
            .filter_map(|j| {
                let point = a + &dv.contributions[uk][j];
                if self.index.contains_key(&point) {
                    return None;
                }
                let q = dv.lines[j].rep;
                Some((point, Witness { u, v, p, q }))
            })
            .collect()
    }

    /// Re-evaluates every witness exactly; returns the index of the first
    /// point whose recorded parents do not reproduce it.
    pub fn check_witnesses(&self) -> Result<(), usize> {
        let bad = self
            .points
            .par_iter()
            .enumerate()
            .filter_map(|(idx, point)| {
                let w = self.witnesses[idx]?;
                let ok = self.depths[w.p] < self.depths[idx]
                    && self.depths[w.q] < self.depths[idx]
                    && self
                        .field
                        .intersect(w.u, w.v, &self.points[w.p], &self.points[w.q])
                        .is_ok_and(|z| &z == point);
                (!ok).then_some(idx)
            })
            .min();
        bad.map_or(Ok(()), Err)
    }

    /// Largest `|exact − float|` over all witnessed points, where the float
    /// value re-runs the witness intersection in double precision.
    pub fn max_float_discrepancy(&self) -> f64 {
        let floats: Vec<Complex64> = self.points.par_iter().map(CycNum::to_complex).collect();
        self.witnesses
            .par_iter()
            .enumerate()
            .filter_map(|(idx, w)| {
                let w = (*w)?;
                let z =
                    intersect_float(w.u.to_complex(), w.v.to_complex(), floats[w.p], floats[w.q])
                        .map(|z| (z - floats[idx]).norm())
                        .unwrap_or(f64::INFINITY);
                Some(z)
            })
            .reduce(|| 0.0, f64::max)
    }
}

/// Iterates `depth` rounds from the seeds, stopping early if the budget runs out.
pub fn generate(n: usize, depth: usize, budget: usize) -> Result<ClosureSet, OrigamiError> {
    let field = OrigamiField::checked(n)?;
    let mut set = ClosureSet::seed(field, budget)?;
    for _ in 0..depth {
        if !set.is_complete() {
            break;
        }
        set.expand_in_place();
    }
    Ok(set)
}

/// A nonzero ring element inside the unit circle, with its modulus: `1/(1+ζ_n)`
/// for prime `n >= 5`, and `1/n` for composite `n`.
pub fn density_probe(n: usize) -> Result<(CycNum, f64), OrigamiError> {
    if n < 4 {
        return Err(OrigamiError::BadOrder {
            n,
            reason: "the ring is discrete for n = 3; density needs n >= 4".into(),
        });
    }
    let field = OrigamiField::new(n);
    let value = if crate::primes::is_prime_usize(n) {
        crate::numtheory::quotient_1mz(&field, 1, 2)?
    } else {
        field.int(n as i64).inv()?
    };
    let modulus = value.to_complex().norm();
    Ok((value, modulus))
}

/// Formats a double with 12 significant digits, like C's `%.12g`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        trim_zeros(&fixed).to_owned()
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Point-set export: a header line, then `depth<TAB>literal<TAB>x<TAB>y` per point.
pub fn export_points(set: &ClosureSet) -> String {
    let mut out = format!(
        "# origami-closure n={} depth={} points={} complete={}\n",
        set.n(),
        set.depth(),
        set.len(),
        set.is_complete()
    );
    for (point, depth) in set.points.iter().zip(&set.depths) {
        let z = point.to_complex();
        let _ = writeln!(
            out,
            "{depth}\t{point}\t{}\t{}",
            format_float(z.re),
            format_float(z.im)
        );
    }
    out
}

/// One parsed line of a point-set export.
#[derive(Clone, Debug, PartialEq)]
pub struct ExportedPoint {
    pub depth: usize,
    pub point: CycNum,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ImportError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: {source}")]
    Literal { line: usize, source: LiteralError },
}

/// Reads a point-set export back; `#` lines are skipped.
pub fn import_points(text: &str, field: &OrigamiField) -> Result<Vec<ExportedPoint>, ImportError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let bad = |message: &str| ImportError::Format {
            line: line_no,
            message: message.into(),
        };
        if fields.len() != 4 {
            return Err(bad("expected 4 tab-separated fields"));
        }
        let depth = fields[0].parse().map_err(|_| bad("bad depth"))?;
        let point = field
            .parse(fields[1])
            .map_err(|source| ImportError::Literal {
                line: line_no,
                source,
            })?;
        let x = fields[2].parse().map_err(|_| bad("bad x"))?;
        let y = fields[3].parse().map_err(|_| bad("bad y"))?;
        out.push(ExportedPoint { depth, point, x, y });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_zero_is_the_seeds() {
        let set = generate(3, 0, DEFAULT_BUDGET).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set.contains_point(&set.field().zero()), Some(0));
        assert_eq!(set.contains_point(&set.field().one()), Some(0));
    }

    #[test]
    fn small_orders_rejected() {
        assert_eq!(
            generate(2, 1, 10).unwrap_err(),
            OrigamiError::OrderTooSmall(2)
        );
    }

    /// Brute force over all ordered point pairs and ordered distinct angle pairs.
    fn brute_force_round(field: &OrigamiField, pts: &[CycNum]) -> Vec<CycNum> {
        let mut out: Vec<CycNum> = pts.to_vec();
        for p in pts {
            for q in pts {
                for u in field.angles() {
                    for v in field.angles() {
                        if u != v {
                            let z = field.intersect(u, v, p, q).unwrap();
                            if !out.contains(&z) {
                                out.push(z);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn rounds_match_brute_force() {
        for n in [3, 4, 5] {
            let set2 = generate(n, 2, DEFAULT_BUDGET).unwrap();
            let field = set2.field().clone();
            let r1 = brute_force_round(&field, &[field.zero(), field.one()]);
            let r2 = brute_force_round(&field, &r1);
            let mut expected = r2.clone();
            expected.sort();
            let mut got = set2.points().to_vec();
            got.sort();
            assert_eq!(got, expected, "n = {n}");
            for p in &r1 {
                assert!(set2.contains_point(p).unwrap() <= 1);
            }
        }
    }

    #[test]
    fn hexagonal_first_round() {
        // 12 operator applications on {0, 1}: I_{u,v}(p,q) with p != q give
        // the two triangle apexes ζ_6 and 1 − ζ_6 = conj(ζ_6)
        let set = generate(3, 1, DEFAULT_BUDGET).unwrap();
        let f = set.field().clone();
        let z6 = CycNum::zeta_pow(f.field(), 1);
        assert_eq!(set.contains_point(&z6), Some(1));
        assert_eq!(set.contains_point(&z6.conj()), Some(1));
        assert_eq!(set.depth_counts(), vec![2, 2]);
    }

    #[test]
    fn witnesses_replay() {
        let set = generate(4, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(set.check_witnesses(), Ok(()));
        assert!(set.max_float_discrepancy() < 1e-9);
    }

    #[test]
    fn budget_marks_incomplete() {
        let set = generate(5, 3, 50).unwrap();
        assert!(!set.is_complete());
        assert_eq!(set.len(), 50);
        // deterministic cut-off
        let again = generate(5, 3, 50).unwrap();
        assert_eq!(set.points(), again.points());
    }

    #[test]
    fn density_probes() {
        let (_, m5) = density_probe(5).unwrap();
        assert!((m5 - 1.0 / (2.0 * (std::f64::consts::PI / 5.0).cos())).abs() < 1e-9);
        assert!((m5 - 0.6180340).abs() < 1e-6);
        let (x4, m4) = density_probe(4).unwrap();
        assert_eq!(x4.to_string(), "1/4*z^0");
        assert_eq!(m4, 0.25);
        let (_, m7) = density_probe(7).unwrap();
        assert!((m7 - 0.5549581).abs() < 1e-6);
        assert!(density_probe(3).is_err());
    }

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(-1.0), "-1");
        assert_eq!(format_float(3f64.sqrt() / 2.0), "0.866025403784");
        assert_eq!(format_float(1.5e-7), "1.5e-07");
        assert_eq!(format_float(1e15), "1e+15");
    }

    #[test]
    fn export_import_round_trip() {
        let set = generate(4, 2, DEFAULT_BUDGET).unwrap();
        let text = export_points(&set);
        let back = import_points(&text, set.field()).unwrap();
        assert_eq!(back.len(), set.len());
        for (rec, p) in back.iter().zip(set.points()) {
            assert_eq!(&rec.point, p);
            let z = p.to_complex();
            assert!((rec.x - z.re).abs() < 1e-9 && (rec.y - z.im).abs() < 1e-9);
        }
        assert!(import_points("0\tz^q\t0\t0", set.field()).is_err());
    }
}
