use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::error::Error;
use crate::groups::tables::GroupTable;
use crate::groups::{Presentation, Word};

/// Size and effort bounds for homomorphism counting.
#[derive(Clone, Debug)]
pub struct HomCountConfig {
    /// Largest admissible target group order.
    pub max_order: usize,
    /// Largest admissible generator count.
    pub max_generators: usize,
    /// Backtracking node budget (candidate assignments tried).
    pub node_budget: u64,
}

impl Default for HomCountConfig {
    fn default() -> Self {
        HomCountConfig {
            max_order: 16,
            max_generators: 32,
            node_budget: 50_000_000,
        }
    }
}

/// Exact number of homomorphisms from the presented group to the table
/// group, by backtracking over generator images with relator pruning.
///
/// Generators that the relators force to be central (a commutator with
/// every other generator is a relator) are assigned first, so the
/// commutator relators prune the search as early as possible; remaining
/// generators are ordered to complete relators greedily. Every relator is
/// checked as soon as all its generators have images. The image of a
/// central generator must centralize the image subgroup, not all of the
/// target, so candidate sets are never restricted beyond the relators.
pub fn count_homs(
    p: &Presentation,
    t: &GroupTable,
    cfg: &HomCountConfig,
) -> Result<u64, Error> {
    if t.order() > cfg.max_order {
        return Err(Error::TooLarge {
            detail: format!("target order {} exceeds bound {}", t.order(), cfg.max_order),
        });
    }
    let gens = p.generators.len();
    if gens > cfg.max_generators {
        return Err(Error::TooLarge {
            detail: format!("{} generators exceed bound {}", gens, cfg.max_generators),
        });
    }
    if gens == 0 {
        // The trivial group has exactly one homomorphism anywhere.
        return Ok(1);
    }

    let central = forced_central(p);
    let order = assignment_order(p, &central);

    // relators_ready[k]: relators fully supported once order[..=k] assigned.
    let mut seen = alloc::vec![false; gens];
    let mut relators_ready: Vec<Vec<usize>> = alloc::vec![Vec::new(); gens];
    let mut assigned_rank = alloc::vec![0usize; gens];
    for (k, &g) in order.iter().enumerate() {
        seen[g] = true;
        assigned_rank[g] = k;
        for (ri, word) in p.relators.iter().enumerate() {
            if word.iter().any(|(g2, _)| *g2 == g)
                && word.iter().all(|(g2, _)| seen[*g2])
            {
                relators_ready[k].push(ri);
            }
        }
    }
    // Relators over the empty word (or none of the generators) hold iff
    // they evaluate to the identity on nothing: always true.

    let mut images = alloc::vec![usize::MAX; gens];
    let mut budget = cfg.node_budget;
    let mut count = 0u64;
    backtrack(
        p,
        t,
        &order,
        &relators_ready,
        0,
        &mut images,
        &mut budget,
        &mut count,
    )?;
    Ok(count)
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    p: &Presentation,
    t: &GroupTable,
    order: &[usize],
    relators_ready: &[Vec<usize>],
    depth: usize,
    images: &mut [usize],
    budget: &mut u64,
    count: &mut u64,
) -> Result<(), Error> {
    if depth == order.len() {
        *count += 1;
        return Ok(());
    }
    let g = order[depth];
    for cand in 0..t.order() {
        if *budget == 0 {
            return Err(Error::BudgetExceeded);
        }
        *budget -= 1;
        images[g] = cand;
        let ok = relators_ready[depth]
            .iter()
            .all(|&ri| evaluate_word(&p.relators[ri], images, t) == t.identity());
        if ok {
            backtrack(p, t, order, relators_ready, depth + 1, images, budget, count)?;
        }
    }
    images[g] = usize::MAX;
    Ok(())
}

fn evaluate_word(word: &Word, images: &[usize], t: &GroupTable) -> usize {
    let mut acc = t.identity();
    let n = BigInt::from(t.order() as u64);
    for (g, e) in word {
        let base = if e.is_negative() {
            t.inverse(images[*g])
        } else {
            images[*g]
        };
        // a^|T| = 1, so exponents reduce mod the group order.
        let e_red = e.abs().mod_floor(&n);
        let e_small = e_red
            .to_u64_digits()
            .1
            .first()
            .copied()
            .unwrap_or(0);
        acc = t.mul(acc, t.pow(base, e_small));
    }
    acc
}

/// A generator is treated as central when for every other generator there
/// is a relator that is literally a commutator of the two.
fn forced_central(p: &Presentation) -> Vec<bool> {
    let gens = p.generators.len();
    let mut commutes = alloc::vec![alloc::vec![false; gens]; gens];
    for word in &p.relators {
        if let Some((a, b)) = commutator_shape(word) {
            commutes[a][b] = true;
            commutes[b][a] = true;
        }
    }
    (0..gens)
        .map(|g| (0..gens).all(|h| h == g || commutes[g][h]))
        .collect()
}

fn commutator_shape(word: &Word) -> Option<(usize, usize)> {
    if word.len() != 4 {
        return None;
    }
    let one = BigInt::from(1);
    let (a, e1) = &word[0];
    let (b, e2) = &word[1];
    let (a2, e3) = &word[2];
    let (b2, e4) = &word[3];
    if a == a2
        && b == b2
        && a != b
        && e1.abs() == one
        && e2.abs() == one
        && *e3 == -e1.clone()
        && *e4 == -e2.clone()
    {
        Some((*a, *b))
    } else {
        None
    }
}

/// Assignment order: forced-central generators first (their candidate sets
/// are the centre), then greedily the generator completing the most
/// remaining relators, ties to the lowest index.
fn assignment_order(p: &Presentation, central: &[bool]) -> Vec<usize> {
    let gens = p.generators.len();
    let mut order: Vec<usize> = (0..gens).filter(|&g| central[g]).collect();
    let mut placed = alloc::vec![false; gens];
    for &g in &order {
        placed[g] = true;
    }
    while order.len() < gens {
        let mut best: Option<(usize, usize)> = None; // (completed, gen)
        for g in 0..gens {
            if placed[g] {
                continue;
            }
            let completed = p
                .relators
                .iter()
                .filter(|word| {
                    word.iter().any(|(h, _)| *h == g)
                        && word.iter().all(|(h, _)| *h == g || placed[*h])
                })
                .count();
            match best {
                Some((c, _)) if c >= completed => {}
                _ => best = Some((completed, g)),
            }
        }
        let (_, g) = best.expect("an unplaced generator exists");
        placed[g] = true;
        order.push(g);
    }
    order
}
