//! Property suite behind the `verify` subcommand.
//!
//! Every property runs over the same word corpus: all words up to an
//! exhaustive level, then seeded samples (uniform words mixed with
//! synthesized words of uniformly drawn complexity) up to a sampled level.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::engines::{
    check_scheme_equivalence, complexity_fast, naive_complexity, run_scheme, synthesize_word,
    Terminal,
};
use crate::planner::{
    finals_set, is_final, min_ops, plan_ranks, shannon_exhaustive, value_step, BfsTable, Subcase,
};
use crate::thinning::{detect_final, parity_tree, parity_tree_reference, thin, union_thinned};
use crate::word::{OperatorRank, PeriodicWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

/// Deliberate defects used to check that the suite notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    NaiveOffByOne,
}

#[derive(Debug, Clone, Copy)]
struct Settings {
    exhaustive_level: u32,
    sampled_level: u32,
    samples: usize,
    planner_bits: u32,
    shannon_bits: u32,
}

impl Level {
    fn settings(self) -> Settings {
        match self {
            Level::Quick => Settings {
                exhaustive_level: 3,
                sampled_level: 8,
                samples: 100,
                planner_bits: 10,
                shannon_bits: 10,
            },
            Level::Full => Settings {
                exhaustive_level: 4,
                sampled_level: 12,
                samples: 400,
                planner_bits: 14,
                shannon_bits: 14,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub checks: u64,
    pub witness: Option<String>,
}

impl PropertyOutcome {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub level: Level,
    pub seed: u64,
    pub properties: Vec<PropertyOutcome>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn all_hold(&self) -> bool {
        self.properties.iter().all(PropertyOutcome::holds)
    }
}

struct Corpus {
    words: Vec<PeriodicWord>,
}

impl Corpus {
    fn build(settings: Settings, seed: u64) -> Self {
        let mut words: Vec<PeriodicWord> = (0..=settings.exhaustive_level)
            .flat_map(PeriodicWord::all_words)
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for n in settings.exhaustive_level + 1..=settings.sampled_level {
            for i in 0..settings.samples {
                let word = if i % 2 == 0 {
                    PeriodicWord::random(n, &mut rng).expect("small level")
                } else {
                    let a = rng.gen_range(0..=1u64 << n);
                    synthesize_word(n, a, rng.gen()).expect("valid complexity")
                };
                words.push(word);
            }
        }
        Corpus { words }
    }

    /// First failing word in corpus order, described by `check`.
    fn first_failure<F>(&self, check: F) -> Option<String>
    where
        F: Fn(&PeriodicWord) -> Option<String> + Sync,
    {
        self.words
            .par_iter()
            .find_map_first(|w| check(w).map(|why| format!("word {w}: {why}")))
    }
}

fn naive_with(fault: Option<Fault>, w: &PeriodicWord) -> u64 {
    let a = naive_complexity(w);
    match fault {
        Some(Fault::NaiveOffByOne) => a + 1,
        None => a,
    }
}

fn ranks_of(n: u32) -> impl Iterator<Item = OperatorRank> {
    (0..=n).map(|k| OperatorRank::from_exponent(k).expect("small exponent"))
}

pub fn run_suite(level: Level, seed: u64, fault: Option<Fault>) -> VerifyReport {
    let settings = level.settings();
    let corpus = Corpus::build(settings, seed);
    let count = corpus.words.len() as u64;
    let rank_checks: u64 = corpus.words.iter().map(|w| u64::from(w.level()) + 1).sum();
    let naive = |w: &PeriodicWord| naive_with(fault, w);
    let mut properties = Vec::new();

    properties.push(PropertyOutcome {
        name: "fast-equals-naive",
        checks: count,
        witness: corpus.first_failure(|w| {
            let (fast, _) = complexity_fast(w);
            let slow = naive(w);
            (fast != slow).then(|| format!("fast={fast} naive={slow}"))
        }),
    });

    properties.push(PropertyOutcome {
        name: "scheme-equivalence",
        checks: rank_checks,
        witness: corpus.first_failure(|w| {
            (0..=w.level())
                .find(|&k| !check_scheme_equivalence(w, k).unwrap_or(false))
                .map(|k| format!("2^{k} rank-1 steps differ from one rank-2^{k} step"))
        }),
    });

    properties.push(PropertyOutcome {
        name: "rank-subtraction",
        checks: rank_checks,
        witness: corpus.first_failure(|w| {
            let a = naive(w);
            ranks_of(w.level()).find_map(|rank| {
                let image = w.apply_operator(rank).expect("rank within level");
                let got = naive(&image);
                let want = a.saturating_sub(rank.value());
                (got != want).then(|| format!("rank {rank}: A={got}, expected {want}"))
            })
        }),
    });

    properties.push(PropertyOutcome {
        name: "final-detection",
        checks: count,
        witness: corpus.first_failure(|w| {
            let a = naive(w);
            let detected = detect_final(w).map(|d| d.complexity);
            let expected = is_final(a).then_some(a);
            (detected != expected).then(|| format!("detector says {detected:?}, oracle A={a}"))
        }),
    });

    properties.push(PropertyOutcome {
        name: "parity-tree-budget",
        checks: count,
        witness: corpus.first_failure(|w| {
            let reference = parity_tree_reference(w);
            let budget = (1u64 << w.level()) - 1;
            if reference.xor_count() != budget {
                Some(format!("{} XORs, budget {budget}", reference.xor_count()))
            } else if parity_tree(w) != reference {
                Some("packed tree differs from reference".into())
            } else {
                None
            }
        }),
    });

    properties.push(PropertyOutcome {
        name: "certificate-audit",
        checks: count,
        witness: corpus.first_failure(|w| {
            let (a, cert) = complexity_fast(w);
            let sum: u64 = cert.ranks.iter().map(|r| r.value()).sum();
            if cert.total != a || sum + cert.final_complexity != a {
                return Some(format!("certificate {cert:?} does not add up to {a}"));
            }
            if cert.ranks.len() > w.level() as usize {
                return Some(format!("{} operators exceed level", cert.ranks.len()));
            }
            let replay = run_scheme(w, &cert.ranks).expect("certificate ranks fit the word");
            let landed = match replay.terminal {
                Terminal::Final(d) => d.complexity,
                Terminal::Zero => 0,
                Terminal::Open => return Some("replay ends on a non-final word".into()),
            };
            (landed != cert.final_complexity).then(|| {
                format!(
                    "replay lands on A={landed}, certificate says {}",
                    cert.final_complexity
                )
            })
        }),
    });

    properties.push(PropertyOutcome {
        name: "thinning-union",
        checks: rank_checks,
        witness: corpus.first_failure(|w| {
            (0..=w.level()).find_map(|m| {
                let parts: Vec<_> = (0..1usize << m)
                    .map(|i| (i, thin(w, m, i).expect("in range")))
                    .collect();
                match union_thinned(&parts, m) {
                    Ok(back) if &back == w => None,
                    Ok(back) => Some(format!("level {m} reassembles to {back}")),
                    Err(e) => Some(format!("level {m}: {e}")),
                }
            })
        }),
    });

    properties.push(PropertyOutcome {
        name: "nonperiodic-range",
        checks: count,
        witness: corpus.first_failure(|w| {
            if w.is_zero() || w.minimal_period_level() != w.level() {
                return None;
            }
            let a = naive(w);
            let len = 1u64 << w.level();
            (a <= len / 2 || a > len).then(|| format!("A={a} outside ({}, {len}]", len / 2))
        }),
    });

    let mut planner_checks = 0;
    let mut planner_witness = None;
    for n in 1..=settings.planner_bits {
        let finals = finals_set(n);
        let table = BfsTable::build(n).expect("small width");
        for a in (1u64 << (n - 1)) + 1..=1u64 << n {
            planner_checks += 1;
            let plan = plan_ranks(a, n).expect("in range");
            let formula = min_ops(a, n).expect("in range");
            let oracle = table.distance(a).expect("reachable");
            let mut value = a;
            for rank in &plan.ranks {
                value = value_step(value, rank.exponent(), n)
                    .expect("rank within width")
                    .0;
            }
            let odd_ok = plan.subcase != Subcase::Odd
                || (!plan.ranks.contains(&OperatorRank::UNIT)
                    && plan.ranks.windows(2).all(|p| p[0] != p[1]));
            if formula != oracle
                || plan.count != formula
                || value != plan.final_value
                || !finals.contains(&value)
                || !odd_ok
            {
                planner_witness = Some(format!(
                    "n={n} A={a}: formula {formula}, bfs {oracle}, plan {:?} lands on {value}",
                    plan.ranks.iter().map(|r| r.value()).collect::<Vec<_>>()
                ));
                break;
            }
        }
        if planner_witness.is_some() {
            break;
        }
    }
    properties.push(PropertyOutcome {
        name: "planner-formula-vs-bfs",
        checks: planner_checks,
        witness: planner_witness,
    });

    let mut shannon_witness = None;
    for n in 5..=settings.shannon_bits {
        let report = shannon_exhaustive(n).expect("small width");
        if !report.within_bounds() || !report.consistent {
            shannon_witness = Some(format!(
                "n={n}: max_odd {} (bound {}), max_even {} (bound {}), mismatches {:?}",
                report.max_odd,
                report.bound_odd,
                report.max_even,
                report.bound_even,
                report.mismatches
            ));
            break;
        }
    }
    properties.push(PropertyOutcome {
        name: "shannon-bound",
        checks: u64::from(settings.shannon_bits.saturating_sub(4)),
        witness: shannon_witness,
    });

    let mut notes = Vec::new();
    if level == Level::Full {
        for n in 1..=settings.exhaustive_level {
            let finals = finals_set(n).len();
            let triangular = n * (n + 1) / 2;
            notes.push(format!(
                "finals at n={n}: {finals} values, n+(n-1)+...+1 = {triangular}; the extra value is A=1 (all-ones word)"
            ));
        }
    }

    VerifyReport {
        level,
        seed,
        properties,
        notes,
    }
}
