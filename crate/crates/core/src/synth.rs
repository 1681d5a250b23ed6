//! Fold programs: executable witnesses that a point lies in `R(U_n)`.
//!
//! A program is a single-assignment list of intersection instructions.
//! Registers 0 and 1 hold the seed points `0` and `1`; instruction `i`
//! writes register `i + 2` with `I_{u,v}(reg[p], reg[q])`. The value of a
//! program is its last register (so the empty program denotes `1`).
//!
//! The synthesizers follow the constructive proofs: programs are replayed
//! from other seed pairs. Replaying from seeds `(a, a + r)` with `r` real
//! turns a value `x` into `a + r·x`, since every intersection commutes with
//! translations and real scalings.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycNum;
use crate::geometry::{intersect_float, Angle, OrigamiField};
use crate::numtheory::{ElementaryFactor, MonomialExpr};
use crate::{OrigamiError, ProgramError};

/// `dest := I_{u,v}(reg[p], reg[q])`
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Instruction {
    pub dest: usize,
    pub u: Angle,
    pub v: Angle,
    pub p: usize,
    pub q: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldProgram {
    n: usize,
    instructions: Vec<Instruction>,
}

/// Register values after running a program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub registers: Vec<CycNum>,
}

impl Trace {
    /// The last assigned register, absent for the empty program.
    pub fn final_value(&self) -> Option<&CycNum> {
        (self.registers.len() > 2).then(|| self.registers.last().expect("nonempty"))
    }

    /// The program's value: the last register, which is the seed `1` for an empty program.
    pub fn value(&self) -> &CycNum {
        self.registers.last().expect("seed registers")
    }

    /// Re-checks that each register lies on both of its instruction's lines.
    pub fn check_postconditions(
        &self,
        prog: &FoldProgram,
        field: &OrigamiField,
    ) -> Result<(), usize> {
        for (i, ins) in prog.instructions.iter().enumerate() {
            let z = &self.registers[ins.dest];
            let on_u = field.line(self.registers[ins.p].clone(), ins.u).contains(z);
            let on_v = field.line(self.registers[ins.q].clone(), ins.v).contains(z);
            if !(on_u && on_v) {
                return Err(i);
            }
        }
        Ok(())
    }
}

impl FoldProgram {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            instructions: Vec::new(),
        }
    }

    /// Wraps instructions without checking them; [`run`] validates.
    pub fn from_instructions(n: usize, instructions: Vec<Instruction>) -> Self {
        Self { n, instructions }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Register holding the program's value.
    pub fn output(&self) -> usize {
        self.instructions.len() + 1
    }

    fn validate(&self) -> Result<(), ProgramError> {
        for (index, ins) in self.instructions.iter().enumerate() {
            let malformed = |reason: String| ProgramError::Malformed { index, reason };
            if ins.dest != index + 2 {
                return Err(malformed(format!(
                    "destination must be register {}, got {}",
                    index + 2,
                    ins.dest
                )));
            }
            if ins.u.n() != self.n
                || ins.v.n() != self.n
                || ins.u.k() >= self.n
                || ins.v.k() >= self.n
            {
                return Err(malformed("angle outside U_n".into()));
            }
            if ins.u == ins.v {
                return Err(malformed(format!(
                    "angles must be distinct (both {})",
                    ins.u.k()
                )));
            }
            if ins.p >= ins.dest || ins.q >= ins.dest {
                return Err(malformed(format!(
                    "source registers {} and {} must precede {}",
                    ins.p, ins.q, ins.dest
                )));
            }
        }
        Ok(())
    }

    /// Replays `prog` after `self` from the given seed registers, which must hold
    /// values exactly 1 apart. The extended program's value is `value(prog) + reg[seed0]`.
    pub fn replay_translated(
        &self,
        prog: &FoldProgram,
        seed0: usize,
        seed1: usize,
    ) -> Result<FoldProgram, ProgramError> {
        let field = OrigamiField::checked(self.n)?;
        let mut b = ProgramBuilder::from_program(field, self)?;
        let out = b.replay_translated(prog, seed0, seed1)?;
        Ok(b.finish(out))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ProgramRepr::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, ProgramError> {
        let repr: ProgramRepr =
            serde_json::from_str(text).map_err(|e| ProgramError::Parse(e.to_string()))?;
        if repr.n < 3 {
            return Err(ProgramError::Parse(format!("n = {} is too small", repr.n)));
        }
        let mut instructions = Vec::with_capacity(repr.instructions.len());
        for (i, r) in repr.instructions.into_iter().enumerate() {
            let angle = |k| {
                Angle::new(repr.n, k)
                    .map_err(|e| ProgramError::Parse(format!("instruction {i}: {e}")))
            };
            instructions.push(Instruction {
                dest: r.dest,
                u: angle(r.u)?,
                v: angle(r.v)?,
                p: r.p,
                q: r.q,
            });
        }
        Ok(Self {
            n: repr.n,
            instructions,
        })
    }
}

impl fmt::Display for FoldProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ins in &self.instructions {
            writeln!(
                f,
                "r{} = I[{},{}](r{}, r{})",
                ins.dest,
                ins.u.k(),
                ins.v.k(),
                ins.p,
                ins.q
            )?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct InstructionRepr {
    dest: usize,
    u: usize,
    v: usize,
    p: usize,
    q: usize,
}

#[derive(Serialize, Deserialize)]
struct ProgramRepr {
    n: usize,
    instructions: Vec<InstructionRepr>,
}

impl From<&FoldProgram> for ProgramRepr {
    fn from(p: &FoldProgram) -> Self {
        Self {
            n: p.n,
            instructions: p
                .instructions
                .iter()
                .map(|i| InstructionRepr {
                    dest: i.dest,
                    u: i.u.k(),
                    v: i.v.k(),
                    p: i.p,
                    q: i.q,
                })
                .collect(),
        }
    }
}

/// Executes a program exactly.
pub fn run(prog: &FoldProgram) -> Result<Trace, ProgramError> {
    let field = OrigamiField::checked(prog.n)?;
    run_in(&field, prog)
}

pub fn run_in(field: &OrigamiField, prog: &FoldProgram) -> Result<Trace, ProgramError> {
    if field.n() != prog.n {
        return Err(ProgramError::OrderMismatch {
            left: field.n(),
            right: prog.n,
        });
    }
    prog.validate()?;
    let mut registers = Vec::with_capacity(prog.len() + 2);
    registers.push(field.zero());
    registers.push(field.one());
    for ins in &prog.instructions {
        let z = field
            .intersect(ins.u, ins.v, &registers[ins.p], &registers[ins.q])
            .map_err(OrigamiError::from)?;
        registers.push(z);
    }
    Ok(Trace { registers })
}

/// Executes a program in double precision.
pub fn run_float(prog: &FoldProgram) -> Result<Vec<Complex64>, ProgramError> {
    prog.validate()?;
    let mut regs = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    for ins in &prog.instructions {
        let z = intersect_float(
            ins.u.to_complex(),
            ins.v.to_complex(),
            regs[ins.p],
            regs[ins.q],
        )
        .map_err(OrigamiError::from)?;
        regs.push(z);
    }
    Ok(regs)
}

/// Incremental program construction with exact values tracked per register.
pub struct ProgramBuilder {
    field: Arc<OrigamiField>,
    instructions: Vec<Instruction>,
    values: Vec<CycNum>,
}

impl ProgramBuilder {
    pub fn new(field: Arc<OrigamiField>) -> Self {
        let values = vec![field.zero(), field.one()];
        Self {
            field,
            instructions: Vec::new(),
            values,
        }
    }

    pub fn from_program(
        field: Arc<OrigamiField>,
        prog: &FoldProgram,
    ) -> Result<Self, ProgramError> {
        let trace = run_in(&field, prog)?;
        Ok(Self {
            field,
            instructions: prog.instructions.clone(),
            values: trace.registers,
        })
    }

    pub fn value(&self, reg: usize) -> Result<&CycNum, ProgramError> {
        self.values
            .get(reg)
            .ok_or(ProgramError::UnknownRegister(reg))
    }

    pub fn emit(&mut self, u: Angle, v: Angle, p: usize, q: usize) -> Result<usize, ProgramError> {
        let dest = self.values.len();
        let z = self
            .field
            .intersect(u, v, self.value(p)?, self.value(q)?)
            .map_err(|e| ProgramError::Malformed {
                index: self.instructions.len(),
                reason: e.to_string(),
            })?;
        self.instructions.push(Instruction { dest, u, v, p, q });
        self.values.push(z);
        Ok(dest)
    }

    /// Appends `prog` with its seed registers mapped to `seed0`, `seed1`;
    /// returns the register holding the replayed value.
    fn replay(
        &mut self,
        prog: &FoldProgram,
        seed0: usize,
        seed1: usize,
    ) -> Result<usize, ProgramError> {
        if prog.n != self.field.n() {
            return Err(ProgramError::OrderMismatch {
                left: self.field.n(),
                right: prog.n,
            });
        }
        prog.validate()?;
        self.value(seed0)?;
        self.value(seed1)?;
        let mut map = Vec::with_capacity(prog.len() + 2);
        map.push(seed0);
        map.push(seed1);
        for ins in &prog.instructions {
            let reg = self.emit(ins.u, ins.v, map[ins.p], map[ins.q])?;
            map.push(reg);
        }
        Ok(*map.last().expect("seeds"))
    }

    /// Replays `prog` from seeds exactly 1 apart, producing `value(prog) + reg[seed0]`.
    pub fn replay_translated(
        &mut self,
        prog: &FoldProgram,
        seed0: usize,
        seed1: usize,
    ) -> Result<usize, ProgramError> {
        let gap = self.value(seed1)? - self.value(seed0)?;
        if !gap.is_one() {
            return Err(ProgramError::SeedSpacing(gap.to_string()));
        }
        self.replay(prog, seed0, seed1)
    }

    /// Replays `prog` from seeds `(a, a + r)` with `r` rational, producing
    /// `a + r·value(prog)`. Every replayed register is checked against the
    /// original trace under the same affine map.
    pub fn replay_scaled(
        &mut self,
        prog: &FoldProgram,
        seed0: usize,
        seed1: usize,
    ) -> Result<usize, ProgramError> {
        let base = self.value(seed0)?.clone();
        let gap = self.value(seed1)? - &base;
        let Some(r) = gap.as_rational() else {
            return Err(ProgramError::SeedSpacing(gap.to_string()));
        };
        let original = run_in(&self.field, prog)?;
        let start = self.values.len();
        let out = self.replay(prog, seed0, seed1)?;
        for (i, orig) in original.registers[2..].iter().enumerate() {
            let expected = &base + &orig.scale(&r);
            if self.values[start + i] != expected {
                return Err(ProgramError::Malformed {
                    index: start - 2 + i,
                    reason: "scaled replay diverged from the original trace".into(),
                });
            }
        }
        Ok(out)
    }

    /// Finishes the program so that its last register is `output`, adding
    /// the identity fold `I_{0,1}(x, x) = x` when needed.
    pub fn finish(mut self, output: usize) -> FoldProgram {
        if output + 1 != self.values.len() {
            let (u, v) = (
                Angle::wrapping(self.field.n(), 0),
                Angle::wrapping(self.field.n(), 1),
            );
            self.emit(u, v, output, output)
                .expect("identity fold is valid");
        }
        FoldProgram {
            n: self.field.n(),
            instructions: self.instructions,
        }
    }
}

fn seed_angles(n: usize) -> Result<(Angle, Angle, Angle), OrigamiError> {
    if n < 3 {
        return Err(OrigamiError::OrderTooSmall(n));
    }
    Ok((
        Angle::wrapping(n, 0),
        Angle::wrapping(n, 1),
        Angle::wrapping(n, 2),
    ))
}

/// `p₁ = I_{u,v}(0,1)`, `p₂ = I_{u,1}(1,p₁)`, `p₃ = I_{1,v}(0,p₂) = 2`.
pub fn synth_two(n: usize) -> Result<FoldProgram, OrigamiError> {
    let (h, u, v) = seed_angles(n)?;
    let ins = vec![
        Instruction {
            dest: 2,
            u,
            v,
            p: 0,
            q: 1,
        },
        Instruction {
            dest: 3,
            u,
            v: h,
            p: 1,
            q: 2,
        },
        Instruction {
            dest: 4,
            u: h,
            v,
            p: 0,
            q: 3,
        },
    ];
    Ok(FoldProgram::from_instructions(n, ins))
}

/// `p₁ = I_{u,v}(0,1)`, `p₂′ = I_{v,1}(0,p₁)`, `−1 = I_{1,u}(0,p₂′)`.
pub fn synth_neg_one(n: usize) -> Result<FoldProgram, OrigamiError> {
    let (h, u, v) = seed_angles(n)?;
    let ins = vec![
        Instruction {
            dest: 2,
            u,
            v,
            p: 0,
            q: 1,
        },
        Instruction {
            dest: 3,
            u: v,
            v: h,
            p: 0,
            q: 2,
        },
        Instruction {
            dest: 4,
            u: h,
            v: u,
            p: 0,
            q: 3,
        },
    ];
    Ok(FoldProgram::from_instructions(n, ins))
}

/// `P`, then `2`, then `P` replayed from `(1, 2)` for `p + 1`, then `Q`
/// replayed from `(p, p + 1)` for `p + q`.
pub fn synth_add(prog_p: &FoldProgram, prog_q: &FoldProgram) -> Result<FoldProgram, ProgramError> {
    if prog_p.n != prog_q.n {
        return Err(ProgramError::OrderMismatch {
            left: prog_p.n,
            right: prog_q.n,
        });
    }
    let field = OrigamiField::checked(prog_p.n)?;
    let two = synth_two(prog_p.n)?;
    let mut b = ProgramBuilder::new(field);
    let p = b.replay(prog_p, 0, 1)?;
    let two_reg = b.replay(&two, 0, 1)?;
    let p_plus_one = b.replay_translated(prog_p, 1, two_reg)?;
    let sum = b.replay_translated(prog_q, p, p_plus_one)?;
    Ok(b.finish(sum))
}

/// `−1`, then `P` replayed from `(0, −1)`.
pub fn synth_neg(prog_p: &FoldProgram) -> Result<FoldProgram, ProgramError> {
    let field = OrigamiField::checked(prog_p.n)?;
    let mut b = ProgramBuilder::new(field);
    let minus_one = b.replay(&synth_neg_one(prog_p.n)?, 0, 1)?;
    let out = b.replay_scaled(prog_p, 0, minus_one)?;
    Ok(b.finish(out))
}

/// One fold per factor: with `W` the running sum of the `v` angles so far,
/// factor `(u, v)` is applied as `I_{W+u, W+v}(current, 0)`.
pub fn synth_monomial_product(
    n: usize,
    factors: &[ElementaryFactor],
) -> Result<FoldProgram, ProgramError> {
    let field = OrigamiField::checked(n)?;
    let mut b = ProgramBuilder::new(field);
    let mut current = 1;
    let mut phase = Angle::wrapping(n, 0);
    for (index, f) in factors.iter().enumerate() {
        if f.u.n() != n || f.v.n() != n {
            return Err(ProgramError::OrderMismatch {
                left: n,
                right: f.u.n(),
            });
        }
        if f.u == f.v {
            return Err(ProgramError::Malformed {
                index,
                reason: format!("factor angles must be distinct (both {})", f.u.k()),
            });
        }
        current = b.emit(f.u.rotate(phase), f.v.rotate(phase), current, 0)?;
        phase = phase.rotate(f.v);
    }
    Ok(b.finish(current))
}

/// The positive integer `k`: `2`, then `m + 1` from `two` replayed on `(m − 1, m)`.
pub fn synth_integer(n: usize, k: u64) -> Result<FoldProgram, ProgramError> {
    if k == 0 {
        return Err(ProgramError::Parse("synth_integer needs k >= 1".into()));
    }
    let field = OrigamiField::checked(n)?;
    let two = synth_two(n)?;
    let mut b = ProgramBuilder::new(field);
    let (mut prev, mut cur) = (0, 1);
    for _ in 1..k {
        let next = b.replay_translated(&two, prev, cur)?;
        (prev, cur) = (cur, next);
    }
    Ok(b.finish(cur))
}

/// A program evaluating to the value of `expr`.
pub fn synth_element(expr: &MonomialExpr) -> Result<FoldProgram, ProgramError> {
    let n = expr.n;
    let mut total: Option<FoldProgram> = None;
    for term in &expr.terms {
        if term.coeff == 0.into() {
            continue;
        }
        let reps: u64 = num_traits::ToPrimitive::to_u64(&num_traits::Signed::abs(&term.coeff))
            .ok_or_else(|| ProgramError::Parse("coefficient too large to unroll".into()))?;
        let mut scaled = if term.factors.is_empty() {
            synth_integer(n, reps)?
        } else {
            let unit = synth_monomial_product(n, &term.factors)?;
            let mut acc = unit.clone();
            for _ in 1..reps {
                acc = synth_add(&unit, &acc)?;
            }
            acc
        };
        if term.coeff < 0.into() {
            scaled = synth_neg(&scaled)?;
        }
        total = Some(match total {
            None => scaled,
            Some(acc) => synth_add(&scaled, &acc)?,
        });
    }
    match total {
        Some(p) => Ok(p),
        None => {
            // the empty sum: copy the seed 0
            let b = ProgramBuilder::new(OrigamiField::checked(n)?);
            Ok(b.finish(0))
        }
    }
}

/// Outcome of [`verify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub ok: bool,
    pub diagnostic: Option<String>,
}

/// Runs `prog` and compares its value with `expected` exactly. When an
/// expected trace is supplied, a mismatch names the first register that differs.
pub fn verify(
    prog: &FoldProgram,
    expected: &CycNum,
    expected_trace: Option<&[CycNum]>,
) -> Verification {
    let trace = match run(prog) {
        Ok(t) => t,
        Err(e) => {
            return Verification {
                ok: false,
                diagnostic: Some(format!("program failed to run: {e}")),
            }
        }
    };
    if trace.value() == expected {
        return Verification {
            ok: true,
            diagnostic: None,
        };
    }
    let mut msg = format!("value {} differs from expected {}", trace.value(), expected);
    if let Some(exp) = expected_trace {
        if let Some((reg, (got, want))) = trace
            .registers
            .iter()
            .zip(exp)
            .enumerate()
            .find(|(_, (g, w))| g != w)
        {
            msg.push_str(&format!(
                "; first divergence at register {reg}: got {got}, expected {want}"
            ));
        }
    }
    Verification {
        ok: false,
        diagnostic: Some(msg),
    }
}
