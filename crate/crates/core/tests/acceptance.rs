//! Acceptance suite: one PASS/FAIL line per criterion, each with its exact
//! tolerance and wall-clock bound. Runs without the test harness so the
//! lines always reach stdout.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use idgroupoid::globular::{free_strict_cells, hom_set, FiniteGlobularSet};
use idgroupoid::kernel::{
    def_eq, normalize, parse_telescope, parse_term, parse_type, type_eq, ContextMorphism,
    Signature, Term, Type,
};
use idgroupoid::operad::{
    check_closure, check_contractible, check_member, check_normal, closure, generators,
    synthesized_truncation, Generator, OperadTruncation,
};
use idgroupoid::par::Parallelism;
use idgroupoid::pasting::{CellAssignment, PastingDiagram, Side};
use idgroupoid::synth::{
    check_duals, contract, contract_with, duals, named_coherence, system_of_compositions,
    NamedCoherence, Operation, Order,
};
use idgroupoid::tower::IdentityTower;

const CORPUS: &str = include_str!("data/kernel_corpus.txt");

type Outcome = Result<String, String>;
/// Number, name, runtime bound in seconds, check.
type Criterion = (&'static str, &'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn diagrams(max_dim: usize, max_leaves: usize) -> Vec<PastingDiagram> {
    (0..=max_dim)
        .flat_map(|n| PastingDiagram::enumerate(n, max_leaves))
        .collect()
}

fn pd(s: &str) -> PastingDiagram {
    s.parse().expect("literal diagram")
}

fn monad_laws() -> Outcome {
    let mut cases = 0;
    for pi in diagrams(3, 5) {
        let right = pi
            .substitute(&CellAssignment::iota(&pi))
            .map_err(|e| e.to_string())?;
        ensure(right == pi, || format!("right unit at {pi}"))?;
        let left = PastingDiagram::iota(pi.dimension())
            .substitute(&CellAssignment::top_of_iota(&pi))
            .map_err(|e| e.to_string())?;
        ensure(left == pi, || format!("left unit at {pi}"))?;
        cases += 2;
        for phi in CellAssignment::enumerate_up_to(&pi, 2, 4) {
            let graft = pi.substitute_tracked(&phi).map_err(|e| e.to_string())?;
            for psi in CellAssignment::enumerate_up_to(&graft.diagram, 2, 2) {
                let lhs = graft.diagram.substitute(&psi).map_err(|e| e.to_string())?;
                let mut pointwise = BTreeMap::new();
                for c in pi.cells() {
                    let label = &phi.0[&c];
                    let emb = &graft.embeddings[&c];
                    let restricted = CellAssignment(
                        label
                            .cells()
                            .into_iter()
                            .map(|d| (d.clone(), psi.0[&emb[&d]].clone()))
                            .collect(),
                    );
                    pointwise.insert(c, label.substitute(&restricted).map_err(|e| e.to_string())?);
                }
                let rhs = pi
                    .substitute(&CellAssignment(pointwise))
                    .map_err(|e| e.to_string())?;
                ensure(lhs == rhs, || format!("associativity at {pi}"))?;
                cases += 1;
            }
        }
    }
    ensure(cases >= 300, || format!("only {cases} cases"))?;
    Ok(format!("{cases} cases"))
}

fn familial() -> Outcome {
    let terminal = FiniteGlobularSet::terminal(4);
    let all = diagrams(3, 5);
    for pi in &all {
        let n = hom_set(pi, &terminal).len();
        ensure(n == 1, || format!("|hom({pi}, 1)| = {n}"))?;
    }
    let one = FiniteGlobularSet::parse("0 x - -\n").map_err(|e| e.to_string())?;
    let ones = free_strict_cells(&one, 1, 5);
    ensure(ones.len() == 1, || {
        format!("{} 1-cells on one object", ones.len())
    })?;
    let x =
        FiniteGlobularSet::parse("0 a - -\n0 b - -\n1 f a b\n1 g a b\n1 h b b\n2 u f g\n2 v g g\n")
            .map_err(|e| e.to_string())?;
    let mut checked = 0;
    for n in 2..=3 {
        for cell in free_strict_cells(&x, n, 4) {
            let s = cell.face(Side::Source).ok_or("no source")?;
            let t = cell.face(Side::Target).ok_or("no target")?;
            ensure(
                s.face(Side::Source) == t.face(Side::Source)
                    && s.face(Side::Target) == t.face(Side::Target),
                || format!("non-globular cell over {}", cell.diagram),
            )?;
            checked += 1;
        }
    }
    Ok(format!("{} diagrams, {checked} free cells", all.len()))
}

fn kernel_soundness() -> Outcome {
    let mut sig = Signature::with_base("A");
    sig.declare_const("a0", Type::base("A"))
        .map_err(|e| e.to_string())?;
    let (mut terms, mut redexes, mut with_delta) = (0, 0, 0);
    for line in CORPUS
        .lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
    {
        let (ctx, rest) = line.split_once(" |- ").ok_or("bad corpus line")?;
        let (term, ty) = rest.rsplit_once(" :: ").ok_or("bad corpus line")?;
        let tel = parse_telescope(&sig, ctx).map_err(|e| e.to_string())?;
        let t = parse_term(&sig, tel.names(), term).map_err(|e| e.to_string())?;
        let ty = parse_type(&sig, tel.names(), ty).map_err(|e| e.to_string())?;
        sig.check(tel.types(), &t, &ty)
            .map_err(|e| format!("{term}: {e}"))?;
        let nf = normalize(&t);
        let nf_ty = sig.infer(tel.types(), &nf).map_err(|e| e.to_string())?;
        ensure(type_eq(&nf_ty, &ty), || {
            format!("subject reduction fails on {term}")
        })?;
        let mut stack = vec![t.clone()];
        while let Some(s) = stack.pop() {
            match &s {
                Term::Refl(a) => stack.push((**a).clone()),
                Term::J(j) => {
                    with_delta += usize::from(!j.delta.is_empty() && s == t);
                    if matches!(j.p, Term::Refl(_)) {
                        let mut vals = vec![j.a.clone()];
                        vals.extend(j.args.iter().cloned());
                        ensure(def_eq(&s, &j.base.open(&vals)), || {
                            format!("Id-comp fails in {term}")
                        })?;
                        redexes += 1;
                    }
                    stack.extend([j.a.clone(), j.b.clone(), j.p.clone()]);
                    stack.extend(j.args.iter().cloned());
                }
                _ => {}
            }
        }
        terms += 1;
    }
    ensure(terms >= 30, || format!("corpus has {terms} terms"))?;
    ensure(redexes > 0 && with_delta > 0, || {
        "corpus lacks redexes or Δ".into()
    })?;
    Ok(format!(
        "{terms} terms, {redexes} redexes, {with_delta} with Δ"
    ))
}

fn worked_example() -> Outcome {
    let t = IdentityTower::over("A", 4);
    let soc = system_of_compositions(&t, 1).map_err(|e| e.to_string())?;
    let m1 = soc.binary(1).clone();
    let pi = pd("[[*],[*,*]]");
    let ctx = t.indexed(&pi).map_err(|e| e.to_string())?;
    let mut variants = 0;
    for order in [Order::Canonical, Order::Witness] {
        let f2 = contract_with(&t, &pi, &m1, &m1, &order).map_err(|e| e.to_string())?;
        f2.top.check(t.signature()).map_err(|e| e.to_string())?;
        let composite = |q: &str, p: &str| {
            format!("J[u v w | d : Id(A, x0, u)](Id(A, x0, v); d; x1; x2; {q}; {p})")
        };
        let goal = parse_type(
            t.signature(),
            ctx.telescope.names(),
            &format!(
                "Id(Id(A, x0, x2), {}, {})",
                composite("p1_0", "p0_0"),
                composite("p1_2", "p0_1")
            ),
        )
        .map_err(|e| e.to_string())?;
        ensure(type_eq(&f2.cell_type(), &goal), || {
            "filler is not at the displayed goal".into()
        })?;
        t.signature()
            .check(ctx.telescope.types(), f2.cell(), &goal)
            .map_err(|e| e.to_string())?;
        let r = t.pointing(&pi).map_err(|e| e.to_string())?.morphism;
        let at_refl = f2.top.compose(&r).map_err(|e| e.to_string())?;
        let last = normalize(at_refl.components.last().unwrap());
        ensure(last == Term::refl_n(Term::Var(0), 2), || {
            format!("restriction is {}", t.point().print_term(&last))
        })?;
        check_member(&t, &f2).map_err(|e| e.to_string())?;
        variants += 1;
    }
    // Also from boundary operations built with units.
    let lhs = idgroupoid::synth::compose_on_top(
        &t,
        &m1,
        &[Operation::identity(&t, 1), soc.unit(1).clone()],
    )
    .map_err(|e| e.to_string())?;
    let pi2 = pd("[[*]]");
    let op = contract(&t, &pi2, &Arc::new(lhs), &Operation::identity(&t, 1))
        .map_err(|e| e.to_string())?;
    check_member(&t, &op).map_err(|e| e.to_string())?;
    Ok(format!(
        "{variants} elimination orders, f2 restricts to refl(refl(x0))"
    ))
}

fn system_of_compositions_check() -> Outcome {
    let t = IdentityTower::over("A", 4);
    let soc = system_of_compositions(&t, 2).map_err(|e| e.to_string())?;
    for n in 1..=2 {
        for op in [soc.unit(n), soc.binary(n)] {
            op.top.check(t.signature()).map_err(|e| e.to_string())?;
            check_member(&t, op).map_err(|e| e.to_string())?;
        }
    }
    let x = Term::Var(0);
    let at = ContextMorphism::new(
        t.point().clone(),
        soc.binary(1).top.source.clone(),
        vec![
            x.clone(),
            x.clone(),
            x.clone(),
            Term::refl(x.clone()),
            Term::refl(x.clone()),
        ],
    );
    at.check(t.signature()).map_err(|e| e.to_string())?;
    let m_at = normalize(&at.substitute_term(soc.binary(1).cell()));
    ensure(m_at == Term::refl(x.clone()), || {
        format!("m1 at refl is {m_at:?}")
    })?;
    let i1 = soc.unit(1).cell();
    ensure(def_eq(i1, &Term::refl(x)), || {
        format!("i1 is {}", soc.unit(1).print_cell())
    })?;
    Ok("m1, i1, m2, i2 members; m1(refl, refl) = refl(x0); i1 = refl(x0)".into())
}

fn associator() -> Outcome {
    let t = IdentityTower::over("A", 4);
    let cell = named_coherence(&t, NamedCoherence::Assoc).map_err(|e| e.to_string())?;
    let ctx = cell.context();
    ensure(
        ctx.names() == ["x0", "x1", "x2", "x3", "p0_0", "p1_0", "p2_0"],
        || format!("context {ctx}"),
    )?;
    let comp = |from: &str, mid: &str, to: &str, q: &str, p: &str| {
        format!("J[u v w | d : Id(A, {from}, u)](Id(A, {from}, v); d; {mid}; {to}; {q}; {p})")
    };
    // r∘(q∘p) and (r∘q)∘p with p = p0_0, q = p1_0, r = p2_0.
    let qp = comp("x0", "x1", "x2", "p1_0", "p0_0");
    let r_qp = comp("x0", "x2", "x3", "p2_0", &qp);
    let rq = comp("x1", "x2", "x3", "p2_0", "p1_0");
    let rq_p = comp("x0", "x1", "x3", &rq, "p0_0");
    let goal = parse_type(
        t.signature(),
        ctx.names(),
        &format!("Id(Id(A, x0, x3), {r_qp}, {rq_p})"),
    )
    .map_err(|e| e.to_string())?;
    t.signature()
        .check(ctx.types(), cell.term(), &goal)
        .map_err(|e| e.to_string())?;
    let printed = ctx.print_term(cell.term());
    let reparsed = parse_term(t.signature(), ctx.names(), &printed).map_err(|e| e.to_string())?;
    ensure(&reparsed == cell.term(), || {
        "printed term does not re-parse".into()
    })?;
    let x = Term::Var(0);
    let mut comps = vec![x.clone(); 4];
    comps.extend(std::iter::repeat_n(Term::refl(x.clone()), 3));
    let at = ContextMorphism::new(t.point().clone(), ctx.clone(), comps);
    let nf = normalize(&at.substitute_term(cell.term()));
    ensure(nf == Term::refl_n(x, 2), || {
        format!("at refl: {}", t.point().print_term(&nf))
    })?;
    Ok(format!(
        "term of size {}, refl(refl(x0)) at triple refl",
        cell.term().size()
    ))
}

fn duals_check() -> Outcome {
    let t = IdentityTower::over("A", 4);
    let soc = system_of_compositions(&t, 1).map_err(|e| e.to_string())?;
    let d = duals(&t, &soc, 1).map_err(|e| e.to_string())?;
    for m in [d.star(1), d.eta(1), d.eps(1)] {
        m.check(t.signature()).map_err(|e| e.to_string())?;
    }
    let diagrams = check_duals(&t, &soc, &d, 1).map_err(|e| e.to_string())?;
    for (name, ok) in &diagrams {
        ensure(*ok, || format!("diagram {name} fails"))?;
    }
    Ok(format!("{} diagrams commute", diagrams.len()))
}

fn normality() -> Outcome {
    let mut sig = Signature::with_base("A");
    sig.declare_const("a0", Type::base("A"))
        .map_err(|e| e.to_string())?;
    let t = IdentityTower::build(Arc::new(sig), "A", 4).map_err(|e| e.to_string())?;
    let soc = system_of_compositions(&t, 2).map_err(|e| e.to_string())?;
    let mut trunc = synthesized_truncation(&t, &soc, 5);
    ensure(check_normal(&t, &trunc).passed(), || {
        "synthesized truncation is not normal".into()
    })?;
    trunc.insert_raw(Arc::new(Operation {
        shape: PastingDiagram::star(),
        top: ContextMorphism::new(
            t.point().clone(),
            t.point().clone(),
            vec![Term::constant("a0")],
        ),
        source: None,
        target: None,
    }));
    ensure(!check_normal(&t, &trunc).passed(), || {
        "constant endomap accepted".into()
    })?;
    trunc.clear_fiber(&PastingDiagram::star());
    ensure(!check_normal(&t, &trunc).passed(), || {
        "empty fiber accepted".into()
    })?;
    Ok("synthesized passes; constant and empty-fiber controls fail".into())
}

fn sweep_pool(
    t: &IdentityTower,
    max_dim: usize,
    max_leaves: usize,
) -> Result<OperadTruncation, String> {
    let soc = system_of_compositions(t, max_dim).map_err(|e| e.to_string())?;
    let gens = generators(t, &soc, max_dim - 1, true).map_err(|e| e.to_string())?;
    closure(t, &gens, 1, max_dim, max_leaves, Parallelism::available()).map_err(|e| e.to_string())
}

fn contractibility() -> Outcome {
    let t = IdentityTower::over("A", 4);
    let pool = sweep_pool(&t, 3, 4)?;
    let out = check_contractible(&t, &pool, 3, 4, Parallelism::available());
    if let Some(bad) = out.report.lines.iter().find(|l| !l.pass) {
        return Err(format!("{} failures, first: {bad}", out.report.failures()));
    }
    ensure(out.witnesses > 0, || "no pairs".into())?;
    Ok(format!(
        "{} diagrams, pool {}, {} pairs, {} witnesses",
        out.diagrams, out.pool, out.pairs, out.witnesses
    ))
}

fn suboperad_closure() -> Outcome {
    let t = IdentityTower::over("A", 4);
    let soc = system_of_compositions(&t, 1).map_err(|e| e.to_string())?;
    let gens = vec![
        Generator {
            name: "i1".into(),
            op: soc.unit(1).clone(),
        },
        Generator {
            name: "m1".into(),
            op: soc.binary(1).clone(),
        },
    ];
    let trunc = closure(&t, &gens, 2, 1, usize::MAX, Parallelism::available())
        .map_err(|e| e.to_string())?;
    let report = check_closure(&t, &trunc, Parallelism::available());
    if let Some(bad) = report.lines.iter().find(|l| !l.pass) {
        return Err(format!("{} failures, first: {bad}", report.failures()));
    }
    Ok(format!(
        "{} operations, {} checks",
        trunc.len(),
        report.lines.len()
    ))
}

fn main() -> ExitCode {
    idgroupoid::par::init_from_env();
    let criteria: [Criterion; 10] = [
        ("pasting monad laws", "exact", 30, monad_laws),
        ("familial formula sanity", "exact", 10, familial),
        ("kernel soundness", "exact", 10, kernel_soundness),
        ("worked example contraction", "exact", 5, worked_example),
        (
            "system of compositions",
            "exact",
            5,
            system_of_compositions_check,
        ),
        ("associator", "exact", 5, associator),
        ("duals", "exact", 5, duals_check),
        ("normality", "exact", 5, normality),
        ("contractibility sweep", "exact", 600, contractibility),
        ("suboperad closure", "exact", 120, suboperad_closure),
    ];
    let mut failed = 0;
    for (i, (name, tol, bound, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*bound);
        let (verdict, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over time bound")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        failed += usize::from(verdict == "FAIL");
        println!(
            "{verdict} {:>2} {name} [tolerance {tol}, {:.3}s < {bound}s] {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
