use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gen::{
    all_graphs, random_family, random_family_in, random_matrix, random_partition, random_r2,
    random_rk, random_subspace, small_vector, uniform_vector, FamilyShape,
};
use super::{suite_seed, Tally};
use crate::engine::{insertion_oracle, rho, EngineState};
use crate::error::Result;
use crate::linalg::{
    kernel_in_subspace, rational, FieldSpec, Matrix, RowReducer, Scalar, Subspace, DEFAULT_PRIME,
};
use crate::partitions::{
    hat_family, is_refinement, restrict_partition, rho_bruteforce, rho_of_partition, Partition,
    SubspaceFamily,
};
use crate::rigidity::{
    laman_oracle, rigidity_family, rigidity_rank_2d, rigidity_report, Graph, RandomizedOptions,
    RigidityMatrix,
};
use crate::sfm::{
    maximality_closure, minimize_exhaustive, minimize_polynomial, minimizers_exhaustive,
    verify_submodular, SetFunction, SfmBackend,
};
use crate::symbolic::{
    evaluate_rk_matrix, intersect_with_codim_k, intersect_with_hyperplane, r2_rank,
    randomized_rank, rk_rank,
};

const FP_SMALL: FieldSpec = FieldSpec::Prime(10007);
const FP_LARGE: FieldSpec = FieldSpec::Prime(DEFAULT_PRIME);

fn c_values() -> [BigRational; 4] {
    [
        rational(1, 2),
        rational(1, 1),
        rational(3, 2),
        rational(2, 1),
    ]
}

fn rng_for(master: u64, name: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(suite_seed(master, name))
}

/// The 200 families of the brute-force sweep, 100 over the rationals
/// and 100 over `F_10007`.
fn sweep_families(master: u64) -> Vec<SubspaceFamily> {
    let mut rng = rng_for(master, "rho-bruteforce");
    (0..200)
        .map(|i| {
            let field = if i < 100 {
                FieldSpec::Rationals
            } else {
                FP_SMALL
            };
            random_family(&mut rng, field, FamilyShape::SMALL)
        })
        .collect()
}

pub(super) fn rho_bruteforce_equivalence(master: u64, t: &mut Tally) {
    for (i, family) in sweep_families(master).iter().enumerate() {
        for c in c_values() {
            let expected = match rho_bruteforce(family, &c) {
                Ok(r) => r,
                Err(e) => {
                    t.case(|| format!("family {i}, c = {c}: brute force"), || Err(e));
                    continue;
                }
            };
            for backend in [SfmBackend::Exhaustive, SfmBackend::MinNormPoint] {
                t.case(
                    || format!("family {i}, c = {c}, {backend:?}: differs from brute force"),
                    || Ok(rho(family, &c, backend)? == expected),
                );
            }
        }
    }
}

/// Lattice, closure and cross-backend checks on one insertion oracle.
fn check_oracle(oracle: &dyn SetFunction, rng: &mut ChaCha8Rng, label: &str, t: &mut Tally) {
    let n = oracle.ground_size();
    if n <= 6 {
        t.check(verify_submodular(oracle, 0, rng), || {
            format!("{label}: not submodular")
        });
        match minimizers_exhaustive(oracle) {
            Ok((min, sets)) => {
                let lattice = sets.iter().all(|x| {
                    sets.iter().all(|y| {
                        let union: Vec<usize> =
                            (0..n).filter(|e| x.contains(e) || y.contains(e)).collect();
                        let meet: Vec<usize> =
                            x.iter().copied().filter(|e| y.contains(e)).collect();
                        oracle.eval(&union) == min && oracle.eval(&meet) == min
                    })
                });
                t.check(lattice, || {
                    format!("{label}: minimizers not closed under union/intersection")
                });
                let maximal: Vec<usize> = (0..n)
                    .filter(|e| sets.iter().any(|s| s.contains(e)))
                    .collect();
                let stable = sets.iter().take(3).all(|start| {
                    (0..20).all(|_| {
                        let mut order: Vec<usize> = (0..n).collect();
                        order.shuffle(rng);
                        let closed = maximality_closure(oracle, start, &order);
                        oracle.eval(&closed) == min
                            && closed
                                == maximality_closure(oracle, start, &(0..n).collect::<Vec<_>>())
                    })
                }) && maximality_closure(
                    oracle,
                    &maximal,
                    &(0..n).rev().collect::<Vec<_>>(),
                ) == maximal;
                t.check(stable, || format!("{label}: closure depends on order"));
            }
            Err(e) => t.case(|| label.to_string(), || Err(e)),
        }
    }
    t.case(
        || format!("{label}: min-norm-point and exhaustive disagree"),
        || Ok(minimize_polynomial(oracle)? == minimize_exhaustive(oracle)?),
    );
}

pub(super) fn submodularity_and_lattice(master: u64, t: &mut Tally) {
    let mut rng = rng_for(master, "submodularity");
    let mut oracles = 0;
    for (i, family) in sweep_families(master).iter().enumerate() {
        for c in c_values() {
            let mut state = EngineState::new(family.field(), family.ambient_dim(), c.clone());
            for (j, g) in family.members().iter().enumerate() {
                let label = format!("family {i}, c = {c}, insertion {j}");
                let hat = state.hat().clone();
                let oracle = match insertion_oracle(&hat, g, &c) {
                    Ok(o) => o,
                    Err(e) => {
                        t.case(|| label.clone(), || Err(e));
                        break;
                    }
                };
                oracles += 1;
                check_oracle(&oracle, &mut rng, &label, t);
                if hat.len() < 8 {
                    t.case(
                        || format!("{label}: minimum differs from rho of hat plus g"),
                        || {
                            let mut with_g = hat.clone();
                            with_g.push(g.clone())?;
                            Ok(minimize_exhaustive(&oracle)?.value
                                == rho_bruteforce(&with_g, &c)?.value)
                        },
                    );
                }
                state = match state.insert_subspace(g, j, SfmBackend::Exhaustive) {
                    Ok(s) => s,
                    Err(e) => {
                        t.case(|| label.clone(), || Err(e));
                        break;
                    }
                };
                if state.hat().len() <= 8 {
                    t.case(
                        || format!("{label}: hat family is not self-minimal"),
                        || {
                            Ok(rho_bruteforce(state.hat(), &c)?
                                .partition
                                .is_all_singletons())
                        },
                    );
                }
            }
        }
    }
    t.note(format!("{oracles} insertion oracles"));
}

pub(super) fn rigidity_ground_truth(master: u64, t: &mut Tally) {
    let _ = master;
    let mut graphs = 0;
    for n in 2..=6 {
        for g in all_graphs(n) {
            graphs += 1;
            t.case(
                || format!("graph n = {n}, edges {:?}", g.edges()),
                || {
                    let rank = rigidity_rank_2d(&g)?;
                    let bound = g.num_edges().min(2 * n - 3);
                    Ok(rank <= bound && (rank == 2 * n - 3) == laman_oracle(&g)?)
                },
            );
        }
    }
    t.note(format!("{graphs} labeled graphs on 2..=6 vertices"));
}

pub(super) fn named_instances(master: u64, t: &mut Tally) {
    let mut rng = rng_for(master, "named-instances");
    let cases = [
        ("K3", Graph::complete(3), 3, true, 0),
        ("P3", Graph::path(3), 2, false, 1),
        ("C4", Graph::cycle(4), 4, false, 1),
        ("K4", Graph::complete(4), 5, true, 0),
    ];
    for (name, g, rank, rigid, dof) in cases {
        t.case(
            || format!("{name}: expected rank {rank}, rigid {rigid}, dof {dof}"),
            || {
                let report =
                    rigidity_report(&g, 2, &RandomizedOptions::default(), SfmBackend::Auto)?;
                let family = rigidity_family(&g, 2, FieldSpec::Rationals)?;
                let brute = rho_bruteforce(&family, &rational(1, 1))?.value;
                let m = RigidityMatrix::new(g.clone(), 2, FieldSpec::Rationals);
                let random = randomized_rank(&m, FP_LARGE, 5, &mut rng)?;
                Ok(report.rank == rank
                    && report.rigid == rigid
                    && report.dof == dof
                    && brute == rational(rank as i64, 1)
                    && random == rank)
            },
        );
    }
}

pub(super) fn pit_r2(master: u64, t: &mut Tally) {
    let mut rng = rng_for(master, "pit-r2");
    for i in 0..100 {
        let inst = random_r2(&mut rng, 12, 10);
        let mut eval_rng = ChaCha8Rng::seed_from_u64(rng.gen());
        t.case(
            || {
                format!(
                    "instance {i} ({} rows, d = {})",
                    inst.rows().len(),
                    inst.ambient_dim()
                )
            },
            || {
                Ok(r2_rank(&inst, SfmBackend::Auto)?.rank
                    == randomized_rank(&inst, FP_LARGE, 5, &mut eval_rng)?)
            },
        );
    }
}

/// `Σ_σ sgn(σ) Π_l <slot σ(l), a^l>`, where slots `0..k-1` hold the
/// vectors `xs` and the last slot is the free index: the contraction of
/// the antisymmetrized tensor, by summing over all `k!` permutations.
pub fn permutation_contraction(
    field: FieldSpec,
    tensor: &[Vec<Scalar>],
    xs: &[Vec<Scalar>],
) -> Vec<Scalar> {
    let k = tensor.len();
    let n = tensor[0].len();
    let pairing: Vec<Vec<Scalar>> = xs
        .iter()
        .map(|x| tensor.iter().map(|a| field.dot(x, a)).collect())
        .collect();
    let mut out = vec![field.zero(); n];
    let mut perm: Vec<usize> = (0..k).collect();
    heap_permutations(&mut perm, k, &mut |p: &[usize]| {
        let inversions = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        let mut scalar = if inversions % 2 == 0 {
            field.one()
        } else {
            field.from_i64(-1)
        };
        let mut free = None;
        for (l, &slot) in p.iter().enumerate() {
            if slot == k - 1 {
                free = Some(l);
            } else {
                scalar = field.mul(&scalar, &pairing[slot][l]);
            }
        }
        let free = free.expect("one slot is free");
        for (o, a) in out.iter_mut().zip(&tensor[free]) {
            *o = field.mul_add(o, &scalar, a);
        }
    });
    out
}

fn heap_permutations(p: &mut [usize], size: usize, visit: &mut dyn FnMut(&[usize])) {
    if size <= 1 {
        visit(p);
        return;
    }
    for i in 0..size {
        heap_permutations(p, size - 1, visit);
        if size.is_multiple_of(2) {
            p.swap(i, size - 1);
        } else {
            p.swap(0, size - 1);
        }
    }
}

pub(super) fn pit_rk(master: u64, t: &mut Tally) {
    let mut rng = rng_for(master, "pit-rk");
    for i in 0..50 {
        let inst = random_rk(&mut rng, 3, 8, 4, 6);
        let mut eval_rng = ChaCha8Rng::seed_from_u64(rng.gen());
        t.case(
            || {
                format!(
                    "instance {i} ({} tensors, n = {})",
                    inst.tensors().len(),
                    inst.ambient_dim()
                )
            },
            || {
                Ok(rk_rank(&inst, SfmBackend::Auto)?.rank
                    == randomized_rank(&inst, FP_LARGE, 5, &mut eval_rng)?)
            },
        );
    }
    for i in 0..20 {
        let inst = random_rk(&mut rng, 3, 8, 4, 6);
        let field = inst.field();
        let xs: Vec<Vec<Scalar>> = (0..2)
            .map(|_| uniform_vector(&mut rng, field, inst.ambient_dim()))
            .collect();
        t.case(
            || format!("contraction {i}: cofactor rows differ from the permutation sum"),
            || {
                let m = evaluate_rk_matrix(&inst, &xs)?;
                let brute_rows: Vec<Vec<Scalar>> = inst
                    .tensors()
                    .iter()
                    .map(|a| permutation_contraction(field, a, &xs))
                    .collect();
                let brute = Matrix::from_rows(field, inst.ambient_dim(), brute_rows)?;
                Ok(m == brute && m.rank() == brute.rank())
            },
        );
    }
}

fn span_dim_of_vectors(
    field: FieldSpec,
    dim: usize,
    vectors: impl IntoIterator<Item = Vec<Scalar>>,
) -> usize {
    let mut r = RowReducer::new(field, dim);
    for v in vectors {
        r.insert(&v);
    }
    r.rank()
}

pub(super) fn intersection_identities(master: u64, t: &mut Tally) {
    let mut rng = rng_for(master, "intersection-identities");
    for i in 0..100 {
        let family = random_family(&mut rng, FP_LARGE, FamilyShape::SMALL);
        let x = uniform_vector(&mut rng, FP_LARGE, family.ambient_dim());
        t.case(
            || format!("hyperplane case {i}"),
            || {
                let mut vectors = Vec::new();
                for f in family.members() {
                    vectors.extend(intersect_with_hyperplane(f, &x)?.basis_vectors);
                }
                let cut = span_dim_of_vectors(FP_LARGE, family.ambient_dim(), vectors);
                Ok(rho(&family, &rational(1, 1), SfmBackend::Auto)?.value
                    == rational(cut as i64, 1))
            },
        );
    }
    for i in 0..50 {
        let k = 2 + i % 2;
        let ambient = rng.gen_range(k + 1..=8);
        let members = rng.gen_range(1..=6);
        let family = random_family_in(&mut rng, FP_LARGE, ambient, members, k + 1, k + 2);
        let x = random_matrix(&mut rng, FP_LARGE, k, ambient);
        t.case(
            || format!("codimension {k} case {i}"),
            || {
                let mut vectors = Vec::new();
                for f in family.members() {
                    vectors.extend(intersect_with_codim_k(f, &x)?.basis_vectors);
                }
                let cut = span_dim_of_vectors(FP_LARGE, ambient, vectors);
                let c = rational(k as i64, 1);
                Ok(rho(&family, &c, SfmBackend::Auto)?.value == rational(cut as i64, 1))
            },
        );
    }
}

pub(super) fn w_basis(master: u64, t: &mut Tally) {
    let mut rng = rng_for(master, "w-basis");
    let mut vectors = 0;
    let mut fallbacks = 0;
    for i in 0..200 {
        let field = if i % 4 < 2 {
            FieldSpec::Rationals
        } else {
            FP_LARGE
        };
        let ambient = rng.gen_range(2..=7);
        let dim = rng.gen_range(1..=ambient);
        let f = random_subspace(&mut rng, field, ambient, dim);
        let result = if i % 2 == 0 {
            let x = if rng.gen_bool(0.3) {
                small_vector(&mut rng, field, ambient)
            } else {
                uniform_vector(&mut rng, field, ambient)
            };
            intersect_with_hyperplane(&f, &x)
        } else {
            let k = rng.gen_range(1..=3);
            let mut rows: Vec<Vec<Scalar>> = (0..k)
                .map(|_| uniform_vector(&mut rng, field, ambient))
                .collect();
            if k > 1 && rng.gen_bool(0.25) {
                rows[k - 1] = rows[0].clone();
            }
            Matrix::from_rows(field, ambient, rows).and_then(|x| intersect_with_codim_k(&f, &x))
        };
        t.case(
            || format!("pair {i} (dim {dim} in K^{ambient})"),
            || {
                let basis = result?;
                vectors += basis.basis_vectors.len();
                fallbacks += usize::from(basis.fallback);
                Ok(
                    basis.is_exact()
                        && basis.span()? == kernel_in_subspace(&f, &basis.constraints)?,
                )
            },
        );
    }
    t.note(format!("{vectors} vectors, {fallbacks} kernel fallbacks"));
}

/// Maps a partition of positions in `indices` back to the indices.
fn lift(pi: &Partition, indices: &[usize]) -> Result<Partition> {
    Partition::new(
        pi.blocks()
            .iter()
            .map(|b| b.iter().map(|&p| indices[p]).collect())
            .collect(),
    )
}

fn structure_case(
    f: &SubspaceFamily,
    g: &SubspaceFamily,
    c: &BigRational,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(&'static str, bool)>> {
    let mut out = Vec::new();
    let u = f.union(g)?;
    let best = rho_bruteforce(&u, c)?;

    let minimum = (0..50).all(|_| {
        let pi = random_partition(rng, u.len());
        let v = rho_of_partition(&u, &pi, c).expect("covering partition");
        v > best.value || (v == best.value && pi.num_blocks() >= best.partition.num_blocks())
    });
    out.push(("minimum", minimum));

    let mut subset: Vec<usize> = (0..u.len()).filter(|_| rng.gen_bool(0.6)).collect();
    if subset.is_empty() {
        subset.push(0);
    }
    let sub_best = rho_bruteforce(&u.subfamily(&subset), c)?;
    out.push((
        "monotonicity",
        is_refinement(
            &lift(&sub_best.partition, &subset)?,
            &restrict_partition(&best.partition, &subset),
        )?,
    ));

    let pi_f = rho_bruteforce(f, c)?.partition;
    let hat_f = hat_family(f, &pi_f, c)?;
    let replaced = rho_bruteforce(&hat_f.union(g)?, c)?;
    let induced = Partition::new(
        replaced
            .partition
            .blocks()
            .iter()
            .map(|b| {
                b.iter()
                    .flat_map(|&j| {
                        if j < hat_f.len() {
                            pi_f.blocks()[j].clone()
                        } else {
                            vec![f.len() + j - hat_f.len()]
                        }
                    })
                    .collect()
            })
            .collect(),
    )?;
    out.push((
        "hat replacement",
        replaced.value == best.value && induced == best.partition,
    ));

    let hat_pi = rho_bruteforce(&hat_f, c)?.partition;
    out.push((
        "hat fixpoint",
        hat_pi.is_all_singletons() && hat_family(&hat_f, &hat_pi, c)? == hat_f,
    ));

    let hat_u = hat_family(&u, &best.partition, c)?;
    let hat_of_replaced = hat_family(&hat_f.union(g)?, &replaced.partition, c)?;
    out.push(("hat associativity", hat_u.same_multiset(&hat_of_replaced)));

    // enlarging every member coarsens the minimal partition
    let grown: Vec<Subspace> = f
        .members()
        .iter()
        .map(|m| {
            let extra = random_subspace(rng, f.field(), f.ambient_dim(), 1);
            m.join([&extra])
        })
        .collect::<Result<_>>()?;
    let grown = SubspaceFamily::new(f.field(), f.ambient_dim(), grown)?;
    out.push((
        "superspace monotonicity",
        is_refinement(&pi_f, &rho_bruteforce(&grown, c)?.partition)?,
    ));
    Ok(out)
}

pub(super) fn structure(master: u64, t: &mut Tally) {
    let mut rng = rng_for(master, "structure");
    for i in 0..100 {
        let field = if i % 2 == 0 {
            FieldSpec::Rationals
        } else {
            FP_SMALL
        };
        let shape = FamilyShape {
            max_members: 5,
            max_ambient: 6,
            ..FamilyShape::SMALL
        };
        let f = random_family(&mut rng, field, shape);
        let extra = rng.gen_range(0..=7 - f.len());
        let g = random_family_in(&mut rng, field, f.ambient_dim(), extra, 1, 3);
        let c = c_values().choose(&mut rng).expect("nonempty").clone();
        match structure_case(&f, &g, &c, &mut rng) {
            Ok(checks) => {
                for (name, ok) in checks {
                    t.check(ok, || format!("instance {i}, c = {c}: {name}"));
                }
            }
            Err(e) => t.case(|| format!("instance {i}, c = {c}"), || Err(e)),
        }
    }
}

pub(super) fn genericity(master: u64, t: &mut Tally) {
    const SAMPLES: usize = 2000;
    let mut rng = rng_for(master, "genericity");
    let family = random_family_in(&mut rng, FP_SMALL, 6, 5, 2, 3);
    let d = family.ambient_dim();
    let expected = match rho(&family, &rational(1, 1), SfmBackend::Auto) {
        Ok(r) => r.value,
        Err(e) => return t.case(|| "rho of the fixed family".into(), || Err(e)),
    };
    let mut mismatches = 0usize;
    for _ in 0..SAMPLES {
        let x = uniform_vector(&mut rng, FP_SMALL, d);
        let mut vectors = Vec::new();
        for f in family.members() {
            vectors.extend(
                intersect_with_hyperplane(f, &x)
                    .expect("matching lengths")
                    .basis_vectors,
            );
        }
        let cut = span_dim_of_vectors(FP_SMALL, d, vectors);
        if rational(cut as i64, 1) != expected {
            mismatches += 1;
        }
    }
    let q = family.len() as f64 / 10007.0;
    let bound = q + 3.0 * (q * (1.0 - q) / SAMPLES as f64).sqrt();
    let fraction = mismatches as f64 / SAMPLES as f64;
    t.check(fraction <= bound, || {
        format!("{mismatches}/{SAMPLES} mismatches exceed the bound {bound:.6}")
    });
    t.note(format!(
        "{mismatches}/{SAMPLES} mismatches, bound {bound:.6}"
    ));
}
