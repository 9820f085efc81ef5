//! Planted pipeline inputs and certificate fault injection.

use num_bigint::BigUint;
use stepup_core::extrema::planted::{self, Planted};
use stepup_core::extrema::{Branch, Origin, Witness};
use stepup_core::stepup::classify_pattern;
use stepup_core::{RuleMatch, StepColoring, ViolationCertificate};

pub fn planted_cases() -> Vec<(String, Planted, &'static str, Origin)> {
    let mut out = Vec::new();
    for n in [1usize, 2] {
        out.push((
            format!("monotone n={n}"),
            planted::monotone(n, 7 + n as u64).unwrap(),
            "monotone_n_set",
            Origin::DeltaRun,
        ));
        out.push((
            format!("equal n={n}"),
            planted::equal_maxima(n, 3).unwrap(),
            "not_a_blue_clique",
            Origin::EqualMaxima,
        ));
        for branch in [Branch::Left, Branch::Right] {
            out.push((
                format!("abc {branch:?} n={n}"),
                planted::abc(n, 11, branch).unwrap(),
                "abc_structure",
                Origin::Peak,
            ));
        }
    }
    out
}

fn hex(v: &BigUint) -> String {
    v.to_str_radix(16)
}

fn outsider(vs: &[BigUint], near: &str) -> String {
    let mut v = BigUint::parse_bytes(near.as_bytes(), 16).unwrap();
    loop {
        v += 1u8;
        if vs.binary_search(&v).is_err() {
            return hex(&v);
        }
    }
}

fn blue_tuple(vs: &[BigUint], sc: &StepColoring) -> Option<(Vec<String>, [u32; 4])> {
    vs.windows(5).find_map(|w| {
        let d = stepup_core::delta::raw_deltas(w).ok()?;
        let d: [u32; 4] = d.try_into().ok()?;
        (!sc.color_of(w).ok()?.is_red()).then(|| (w.iter().map(hex).collect(), d))
    })
}

fn swaps(t: &[String]) -> Vec<Vec<String>> {
    (0..t.len() - 1)
        .map(|i| {
            let mut u = t.to_vec();
            u.swap(i, i + 1);
            u
        })
        .collect()
}

/// Certificates that each break at least one checked claim.
pub fn mutations(
    cert: &ViolationCertificate,
    vs: &[BigUint],
    sc: &StepColoring,
) -> Vec<ViolationCertificate> {
    let mut out = Vec::new();
    let mut push = |f: &dyn Fn(&mut ViolationCertificate)| {
        let mut c = cert.clone();
        f(&mut c);
        out.push(c);
    };
    push(&|c| c.schema_version += 1);
    push(&|c| c.bit_width += 1);
    push(&|c| c.n = 0);
    match &cert.witness {
        Witness::NotABlueClique {
            vertices, deltas, ..
        } => {
            for t in swaps(vertices) {
                push(&|c| {
                    if let Witness::NotABlueClique { vertices, .. } = &mut c.witness {
                        *vertices = t.clone()
                    }
                });
            }
            for k in 0..4 {
                push(&|c| {
                    if let Witness::NotABlueClique { deltas, .. } = &mut c.witness {
                        deltas[k] += 1
                    }
                });
                let o = outsider(vs, &vertices[k]);
                push(&|c| {
                    if let Witness::NotABlueClique { vertices, .. } = &mut c.witness {
                        vertices[k] = o.clone()
                    }
                });
            }
            let other = if classify_pattern(*deltas).unwrap() == RuleMatch::NoRule {
                RuleMatch::Monotone
            } else {
                RuleMatch::NoRule
            };
            push(&|c| {
                if let Witness::NotABlueClique { rule, .. } = &mut c.witness {
                    *rule = other
                }
            });
            let (bt, bd) = blue_tuple(vs, sc).expect("some blue tuple");
            push(&|c| {
                c.witness = Witness::NotABlueClique {
                    vertices: bt.clone(),
                    deltas: bd,
                    rule: classify_pattern(bd).unwrap(),
                };
            });
        }
        Witness::MonotoneNSet {
            values,
            realizations,
            ..
        } => {
            for (i, r) in realizations.iter().enumerate() {
                for t in swaps(&r.vertices) {
                    push(&|c| {
                        if let Witness::MonotoneNSet { realizations, .. } = &mut c.witness {
                            realizations[i].vertices = t.clone()
                        }
                    });
                }
                for k in 0..4 {
                    push(&|c| {
                        if let Witness::MonotoneNSet { realizations, .. } = &mut c.witness {
                            realizations[i].deltas[k] += 1
                        }
                    });
                    let o = outsider(vs, &r.vertices[k]);
                    push(&|c| {
                        if let Witness::MonotoneNSet { realizations, .. } = &mut c.witness {
                            realizations[i].vertices[k] = o.clone()
                        }
                    });
                }
            }
            for k in 0..values.len() {
                push(&|c| {
                    if let Witness::MonotoneNSet { values, .. } = &mut c.witness {
                        values[k] += 1
                    }
                });
            }
            push(&|c| {
                if let Witness::MonotoneNSet { direction, .. } = &mut c.witness {
                    *direction = match direction {
                        stepup_core::delta::Direction::Increasing => {
                            stepup_core::delta::Direction::Decreasing
                        }
                        stepup_core::delta::Direction::Decreasing => {
                            stepup_core::delta::Direction::Increasing
                        }
                    }
                }
            });
            push(&|c| {
                if let Witness::MonotoneNSet { realizations, .. } = &mut c.witness {
                    realizations.pop();
                }
            });
            push(&|c| {
                if let Witness::MonotoneNSet { realizations, .. } = &mut c.witness {
                    let r = realizations[0].clone();
                    realizations.push(r);
                }
            });
            let len = values.len();
            push(&|c| c.n = len + 1);
        }
        Witness::AbcStructure {
            realizations, f, ..
        } => {
            for (i, r) in realizations.iter().enumerate() {
                for t in swaps(&r.vertices) {
                    push(&|c| {
                        if let Witness::AbcStructure { realizations, .. } = &mut c.witness {
                            realizations[i].vertices = t.clone()
                        }
                    });
                }
                for k in 0..5 {
                    let o = outsider(vs, &r.vertices[k]);
                    push(&|c| {
                        if let Witness::AbcStructure { realizations, .. } = &mut c.witness {
                            realizations[i].vertices[k] = o.clone()
                        }
                    });
                }
                push(&|c| {
                    if let Witness::AbcStructure { realizations, .. } = &mut c.witness {
                        realizations[i].a += 1
                    }
                });
                push(&|c| {
                    if let Witness::AbcStructure { realizations, .. } = &mut c.witness {
                        realizations[i].b += 1
                    }
                });
            }
            push(&|c| {
                if let Witness::AbcStructure { peak_delta, .. } = &mut c.witness {
                    *peak_delta += 1
                }
            });
            push(&|c| {
                if let Witness::AbcStructure { branch, .. } = &mut c.witness {
                    *branch = if *branch == Branch::Left {
                        Branch::Right
                    } else {
                        Branch::Left
                    }
                }
            });
            push(&|c| {
                if let Witness::AbcStructure { a, c: cc, .. } = &mut c.witness {
                    cc[0] = a[0]
                }
            });
            push(&|c| {
                if let Witness::AbcStructure { a, b, .. } = &mut c.witness {
                    std::mem::swap(&mut a[0], &mut b[0])
                }
            });
            push(&|c| {
                if let Witness::AbcStructure { realizations, .. } = &mut c.witness {
                    realizations.pop();
                }
            });
            if f.len() >= 2 {
                push(&|c| {
                    if let Witness::AbcStructure { f, .. } = &mut c.witness {
                        let t = f[0].1;
                        f[0].1 = f[1].1;
                        f[1].1 = t;
                    }
                });
            }
            let n = cert.n;
            push(&|c| c.n = n + 1);
        }
    }
    out
}
