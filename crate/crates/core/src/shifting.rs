//! `(i,j)`-compressions and the weight functional.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::ExactInt;
use crate::family::{are_cross_intersecting, Family};
use crate::kset::KSet;

/// Replaces `j` by `i` in every member containing `j` but not `i`, unless the
/// image is already a member. Requires `lo ≤ i < j ≤ n`.
pub fn shift_ij(f: &Family, i: u32, j: u32) -> Result<Family> {
    Ok(shift_counted(f, i, j)?.0)
}

fn shift_counted(f: &Family, i: u32, j: u32) -> Result<(Family, usize)> {
    let g = f.ground();
    if i >= j {
        return Err(Error::Precondition(format!(
            "shift needs i < j, got ({i},{j})"
        )));
    }
    if !g.contains_element(i) || !g.contains_element(j) {
        return Err(Error::OutsideGround(format!(
            "shift ({i},{j}) outside [{},{}]",
            g.lo(),
            g.n()
        )));
    }
    let mut moved = 0;
    let members: Vec<KSet> = f
        .iter()
        .map(|s| {
            if s.contains(j) && !s.contains(i) {
                let t = s.without(j).with(i);
                if !f.contains(t) {
                    moved += 1;
                    return t;
                }
            }
            s
        })
        .collect();
    Ok((Family::new(g, members)?, moved))
}

/// True iff `f` is a downset of the shifting order.
///
/// It suffices to check the elementary predecessors `x → x−1`, which generate `≺`.
pub fn is_shifted(f: &Family) -> bool {
    let lo = f.ground().lo();
    f.iter().all(|s| {
        s.iter()
            .filter(|&x| x > lo && !s.contains(x - 1))
            .all(|x| f.contains(s.without(x).with(x - 1)))
    })
}

/// `w(F,G)`: total of all elements over all members of both families.
pub fn weight_pair(f: &Family, g: &Family) -> ExactInt {
    ExactInt::from(f.weight()) + ExactInt::from(g.weight())
}

/// One shift of the schedule that moved at least one set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftStep {
    pub i: u32,
    pub j: u32,
    pub moved: usize,
}

/// Record of a run of [`shift_pair_to_fixpoint`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftTrace {
    pub applied: Vec<ShiftStep>,
    #[serde(serialize_with = "crate::io::ser_int")]
    pub initial_w: ExactInt,
    #[serde(serialize_with = "crate::io::ser_int")]
    pub final_w: ExactInt,
    pub lost_nontriviality: bool,
}

/// Applies `(i,j)`-shifts to both families at once until nothing moves.
///
/// Schedule: `j = lo+1..=n`, `i = lo..j`, full sweeps repeated until a sweep is clean.
pub fn shift_pair_to_fixpoint(f: &Family, g: &Family) -> Result<(Family, Family, ShiftTrace)> {
    if !are_cross_intersecting(f, g)? {
        return Err(Error::NotCrossIntersecting);
    }
    let lo = f.ground().lo().max(g.ground().lo());
    let n = f.n();
    let initial_w = weight_pair(f, g);
    let mut cur_f = f.clone();
    let mut cur_g = g.clone();
    let mut applied = Vec::new();
    let mut lost = false;
    loop {
        let mut clean = true;
        for j in lo + 1..=n {
            for i in lo..j {
                let (nf, mf) = shift_counted(&cur_f, i, j)?;
                let (ng, mg) = shift_counted(&cur_g, i, j)?;
                if mf + mg == 0 {
                    continue;
                }
                clean = false;
                if (cur_f.is_non_trivial() && !nf.is_non_trivial())
                    || (cur_g.is_non_trivial() && !ng.is_non_trivial())
                {
                    lost = true;
                }
                applied.push(ShiftStep {
                    i,
                    j,
                    moved: mf + mg,
                });
                cur_f = nf;
                cur_g = ng;
            }
        }
        if clean {
            break;
        }
    }
    let final_w = weight_pair(&cur_f, &cur_g);
    Ok((
        cur_f,
        cur_g,
        ShiftTrace {
            applied,
            initial_w,
            final_w,
            lost_nontriviality: lost,
        },
    ))
}
