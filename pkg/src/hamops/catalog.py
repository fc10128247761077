"""Built-in, machine-verified library of operators, pairs, Lie structures,
Casimir fixtures and the quasilinear-system data used across the suite.

Every entry records the verdicts its checks are expected to reproduce;
``verify`` re-runs the checks and compares.  Deliberately broken pairs are
part of the catalog: their expected verdict is failure with a recorded
witness family.

Corrections to a handful of closed forms that fail exact verification are
listed in DISCREPANCIES.md at the repository root; the catalog always stores
the verified version and, where useful, keeps the quoted variant as an
explicit negative fixture.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import expr as E
from .expr import (
    AlgebraicSymbol,
    Assumption,
    Context,
    OpaqueFunction,
    Var,
    parse,
)
from .operators import (
    NonHomogeneousOperator,
    UltralocalOperator,
    adjugate,
    determinant,
    operator,
    operator_to_document,
    pair_to_document,
    zeros_matrix,
)
from .hamiltonian import is_hamiltonian
from .compatibility import (
    Pair2Params,
    build_pair_2comp,
    check_compatible,
    darboux_2comp,
    darboux_3comp,
    mokhov_operator,
    pencil_hamiltonian_check,
    ultralocal_3comp,
)
from .casimir import CasimirCandidate, is_casimir
from .geometry import (
    LieStructure,
    affinor_from_lie,
    check_nijnonhom_conditions,
    torsion_vanishes,
)
from .reports import CheckReport, Condition


@dataclass
class CatalogEntry:
    entry_id: str
    kind: str  # operator | pair | lie-structure | casimir-fixture
    title: str
    payload: dict
    expected: dict
    notes: str = ""

    def run_checks(self) -> dict:
        if self.kind == "operator":
            return _run_operator_checks(self.payload)
        if self.kind == "pair":
            return _run_pair_checks(self.payload)
        if self.kind == "lie-structure":
            return _run_lie_checks(self.payload)
        if self.kind == "casimir-fixture":
            return _run_casimir_checks(self.payload)
        raise ValueError(f"unknown catalog kind {self.kind!r}")


class UnknownEntryError(KeyError):
    pass


_BUILDERS: dict = {}


def _register(entry_id):
    def wrap(fn):
        _BUILDERS[entry_id] = fn
        return fn

    return wrap


def list_entries():
    out = []
    for entry_id in sorted(_BUILDERS):
        e = load(entry_id)
        out.append((e.entry_id, e.kind, e.title))
    return out


def load(entry_id: str) -> CatalogEntry:
    try:
        builder = _BUILDERS[entry_id]
    except KeyError:
        raise UnknownEntryError(f"unknown catalog id {entry_id!r}") from None
    return builder()


def verify(entry_id: str) -> CheckReport:
    """Re-run an entry's checks and compare with its recorded verdicts."""
    entry = load(entry_id)
    observed = entry.run_checks()
    conditions = []
    for name, expected in sorted(entry.expected.items()):
        obs = observed.get(name)
        ok = obs == expected
        conditions.append(
            Condition(
                f"expected:{name}={'pass' if expected else 'fail'}",
                (),
                "0" if ok else "1",
                ok,
            )
        )
    return CheckReport(conditions)


def export(entry_id: str) -> dict:
    entry = load(entry_id)
    if entry.kind == "operator":
        return operator_to_document(entry.payload["operator"])
    if entry.kind == "pair":
        return pair_to_document(entry.payload["A"], entry.payload["B"])
    if entry.kind == "lie-structure":
        s: LieStructure = entry.payload["lie"]
        doc = {
            "n": s.n,
            "c": [
                [i + 1, j + 1, k + 1, str(s.c[i][j][k])]
                for i in range(s.n)
                for j in range(i + 1, s.n)
                for k in range(s.n)
                if s.c[i][j][k] != 0
            ],
            "f": [
                [i + 1, j + 1, str(s.f[i][j])]
                for i in range(s.n)
                for j in range(i + 1, s.n)
                if s.f[i][j] != 0
            ],
        }
        return doc
    if entry.kind == "casimir-fixture":
        return {
            "operator": entry.payload["operator_ref"],
            "density": entry.payload["density"],
            "expect": entry.payload["expect"],
        }
    raise ValueError(entry.kind)


# ---------------------------------------------------------------------------
# check runners


def _instantiated(op: NonHomogeneousOperator, inst: dict) -> NonHomogeneousOperator:
    ctx = op.ctx
    bare = Context(ctx.variables, ctx.parameters, ctx.algebraics, ctx.functions)
    parsed = {name: parse(text, bare) for name, text in inst.items()}
    n = op.n
    sub = lambda x: E.instantiate(x, parsed, bare)
    g = tuple(tuple(sub(op.g[i][j]) for j in range(n)) for i in range(n))
    b = tuple(
        tuple(tuple(sub(op.b[i][j][k]) for k in range(n)) for j in range(n))
        for i in range(n)
    )
    om = tuple(tuple(sub(op.omega[i][j]) for j in range(n)) for i in range(n))
    return operator(bare, g, b, om)


def _run_operator_checks(payload) -> dict:
    op = payload["operator"]
    out = {"hamiltonian": is_hamiltonian(op).verdict}
    inst = payload.get("numeric_profile")
    if inst:
        numeric = _instantiated(op, inst)
        with E.numeric_zero_mode(seed=7, trials=6):
            out["numeric-profile"] = is_hamiltonian(numeric).verdict
    return out


def _run_pair_checks(payload) -> dict:
    A, B = payload["A"], payload["B"]
    tensor = check_compatible(A, B)
    oracle = pencil_hamiltonian_check(A, B)
    return {
        "hamiltonian-A": is_hamiltonian(A).verdict,
        "hamiltonian-B": is_hamiltonian(B).verdict,
        "tensor-compatible": tensor.verdict,
        "pencil-oracle": oracle.verdict,
        "oracle-agreement": tensor.verdict == oracle.verdict,
    }


def _run_lie_checks(payload) -> dict:
    s = payload["lie"]
    out = {"torsion-conditions": check_nijnonhom_conditions(s).verdict}
    if "eta" in payload:
        ctx = payload["ctx"]
        L = affinor_from_lie(s, payload["eta"], ctx)
        out["torsion-vanishes"] = torsion_vanishes(L, ctx)
    return out


def _run_casimir_checks(payload) -> dict:
    op = payload["operator"]
    F = CasimirCandidate(op.ctx, parse(payload["density"], op.ctx))
    return {
        column: is_casimir(op, F, column) for column in payload["expect"]
    }


# ---------------------------------------------------------------------------
# shared contexts and small helpers


def _ctx(variables, parameters=(), algebraics=(), functions=(), assumptions=()):
    return Context(tuple(variables), tuple(parameters), tuple(algebraics), tuple(functions), tuple(assumptions))


def _mat(ctx, rows):
    return tuple(tuple(parse(x, ctx) if isinstance(x, str) else E.rat(x) for x in row) for row in rows)


def _sqrt2():
    return AlgebraicSymbol("sqrt2", 2, E.rat(2))


def _sqrt_w():
    base = Context(("u", "v", "w"), algebraics=(AlgebraicSymbol("s", 2, Var("w")),))
    return AlgebraicSymbol("s", 2, Var("w"), gradient=(("w", parse("1/(2*s)", base)),))


def _sqrt_1ww():
    plain = Context(("u", "v", "w"))
    base = Context(
        ("u", "v", "w"),
        algebraics=(AlgebraicSymbol("t", 2, parse("1 + w^2", plain)),),
    )
    return AlgebraicSymbol("t", 2, parse("1 + w^2", plain), gradient=(("w", parse("w/t", base)),))


def _b_entries(ctx, entries):
    n = len(ctx.variables)
    b = [[[E.ZERO] * n for _ in range(n)] for _ in range(n)]
    for (i, j, k), text in entries.items():
        b[i][j][k] = parse(text, ctx)
    return tuple(tuple(tuple(layer) for layer in row) for row in b)


def _skew(ctx, w12="0", w13=None, w23=None):
    if w13 is None:
        w12e = parse(w12, ctx)
        return ((E.ZERO, w12e), (E.neg(w12e), E.ZERO))
    a, b, c = parse(w12, ctx), parse(w13, ctx), parse(w23, ctx)
    return (
        (E.ZERO, a, b),
        (E.neg(a), E.ZERO, c),
        (E.neg(b), E.neg(c), E.ZERO),
    )


def _jacob1_context(extra_params=(), extra_functions=()):
    fns = (
        OpaqueFunction("f", ("v", "w")),
        OpaqueFunction("g0", ("v", "w")),
        OpaqueFunction("h", ("v", "w")),
    ) + tuple(extra_functions)
    base = _ctx(("u", "v", "w"), extra_params, (), fns)
    rhs = parse("(h(v,w)*D(f,v) - g0(v,w)*D(h,w) + h(v,w)*D(g0,w))/f(v,w)", base)
    side = parse("f(v,w)", base)
    return _ctx(
        ("u", "v", "w"),
        extra_params,
        (),
        fns,
        (Assumption("h", (1, 0), rhs, side),),
    )


# ---------------------------------------------------------------------------
# two-component degenerate operators


@_register("C_2_1")
def _c21():
    ctx = _ctx(("u", "v"), functions=(OpaqueFunction("f", ("v",)),))
    op = operator(ctx, g=_mat(ctx, [["1", "0"], ["0", "0"]]), omega=_skew(ctx, "f(v)"))
    return CatalogEntry(
        "C_2_1",
        "operator",
        "two-component degenerate operator, constant leading block, f(v) ultralocal entry",
        {"operator": op, "numeric_profile": {"f": "1 + v^2"}},
        {"hamiltonian": True, "numeric-profile": True},
    )


@_register("C_2_2")
def _c22():
    ctx = _ctx(("u", "v"), functions=(OpaqueFunction("f", ("v",)),))
    b = _b_entries(ctx, {(0, 1, 1): "-1/u", (1, 0, 1): "1/u"})
    op = operator(ctx, g=_mat(ctx, [["1", "0"], ["0", "0"]]), b=b, omega=_skew(ctx, "f(v)/u"))
    return CatalogEntry(
        "C_2_2",
        "operator",
        "two-component degenerate operator with 1/u connection terms",
        {"operator": op, "numeric_profile": {"f": "v^3 - 2"}},
        {"hamiltonian": True, "numeric-profile": True},
    )


# ---------------------------------------------------------------------------
# three-component degenerate operators


@_register("C_3_1")
def _c31():
    ctx = _ctx(("u", "v", "w"), functions=(OpaqueFunction("f", ("u", "v", "w")),))
    b = _b_entries(ctx, {(0, 1, 2): "1", (1, 0, 2): "-1"})
    op = operator(ctx, b=b, omega=_skew(ctx, "f(u,v,w)", "0", "0"))
    return CatalogEntry(
        "C_3_1",
        "operator",
        "three-component operator with zero leading coefficient",
        {"operator": op, "numeric_profile": {"f": "u*v + w^2"}},
        {"hamiltonian": True, "numeric-profile": True},
    )


@_register("C_3_2")
def _c32():
    ctx = _jacob1_context()
    op = operator(
        ctx,
        g=_mat(ctx, [["1", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]]),
        omega=_skew(ctx, "f(v,w)", "g0(v,w)", "h(v,w)"),
    )
    return CatalogEntry(
        "C_3_2",
        "operator",
        "rank-one leading block with a full (v,w)-dependent ultralocal block under the closure relation",
        {"operator": op, "numeric_profile": {"f": "2*v", "g0": "-2*w", "h": "5"}},
        {"hamiltonian": True, "numeric-profile": True},
    )


@_register("C_3_3")
def _c33():
    ctx = _ctx(("u", "v", "w"), functions=(OpaqueFunction("f", ("v", "w")),))
    b = _b_entries(ctx, {(0, 1, 2): "1", (1, 0, 2): "-1"})
    op = operator(
        ctx,
        g=_mat(ctx, [["1", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]]),
        b=b,
        omega=_skew(ctx, "f(v,w)", "0", "0"),
    )
    return CatalogEntry(
        "C_3_3",
        "operator",
        "rank-one leading block with a single derivative coupling",
        {"operator": op, "numeric_profile": {"f": "v^2 + w"}},
        {"hamiltonian": True, "numeric-profile": True},
    )


@_register("C_3_4")
def _c34():
    ctx = _ctx(("u", "v", "w"), functions=(OpaqueFunction("f", ("v", "w")),))
    b = _b_entries(ctx, {(0, 2, 2): "-1/u", (2, 0, 2): "1/u"})
    op = operator(
        ctx,
        g=_mat(ctx, [["1", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]]),
        b=b,
        omega=_skew(ctx, "0", "f(v,w)/u", "0"),
    )
    return CatalogEntry(
        "C_3_4",
        "operator",
        "rank-one leading block with 1/u connection and ultralocal entries",
        {"operator": op, "numeric_profile": {"f": "v*w"}},
        {"hamiltonian": True, "numeric-profile": True},
    )


@_register("C_3_5")
def _c35():
    ctx = _jacob1_context()
    b = _b_entries(ctx, {(0, 1, 1): "-1/u", (0, 2, 2): "-1/u", (1, 0, 1): "1/u", (2, 0, 2): "1/u"})
    op = operator(
        ctx,
        g=_mat(ctx, [["1", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]]),
        b=b,
        omega=_skew(ctx, "f(v,w)/u", "g0(v,w)/u", "h(v,w)/u"),
    )
    return CatalogEntry(
        "C_3_5",
        "operator",
        "1/u-scaled variant of the closure-constrained three-component operator",
        {"operator": op, "numeric_profile": {"f": "2*v", "g0": "-2*w", "h": "5"}},
        {"hamiltonian": True, "numeric-profile": True},
    )


@_register("C_3_6")
def _c36():
    ctx = _ctx(
        ("u", "v", "w"),
        parameters=("c",),
        functions=(OpaqueFunction("f", ("w",)), OpaqueFunction("g0", ("w",))),
    )
    op = operator(
        ctx,
        g=_mat(ctx, [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "0"]]),
        omega=_skew(ctx, "f(w)", "g0(w)", "c*g0(w)"),
    )
    return CatalogEntry(
        "C_3_6",
        "operator",
        "rank-two constant leading block with proportional ultralocal entries",
        {"operator": op, "numeric_profile": {"f": "3*w^2", "g0": "1 + w"}},
        {"hamiltonian": True, "numeric-profile": True},
    )


@_register("C_3_7")
def _c37():
    ctx = _ctx(("u", "v", "w"), parameters=("c",), functions=(OpaqueFunction("f", ("w",)),))
    b = _b_entries(ctx, {(1, 2, 2): "-1/v", (2, 1, 2): "1/v"})
    op = operator(
        ctx,
        g=_mat(ctx, [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "0"]]),
        b=b,
        omega=_skew(ctx, "0", "c*f(w)", "(1 - c*u)*f(w)/v"),
    )
    return CatalogEntry(
        "C_3_7",
        "operator",
        "rank-two leading block with 1/v connection terms",
        {"operator": op, "numeric_profile": {"f": "w^3"}},
        {"hamiltonian": True, "numeric-profile": True},
    )


@_register("C_3_8")
def _c38():
    ctx = _ctx(
        ("u", "v", "w"),
        parameters=("c",),
        algebraics=(_sqrt_1ww(),),
        functions=(OpaqueFunction("f", ("w",)),),
    )
    b = _b_entries(
        ctx,
        {
            (0, 2, 2): "-w/(u*w - v)",
            (1, 2, 2): "1/(u*w - v)",
            (2, 0, 2): "w/(u*w - v)",
            (2, 1, 2): "-1/(u*w - v)",
        },
    )
    op = operator(
        ctx,
        g=_mat(ctx, [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "0"]]),
        b=b,
        omega=_skew(
            ctx,
            "f(w)",
            "(1 + w^2)*f(w)*(w - c*v*t)/(u*w - v)",
            "-(1 + w^2)*f(w)*(1 - c*u*t)/(u*w - v)",
        ),
    )
    return CatalogEntry(
        "C_3_8",
        "operator",
        "rank-two leading block with sqrt(1+w^2) in the ultralocal entries",
        {"operator": op, "numeric_profile": {"f": "w - 2"}},
        {"hamiltonian": True, "numeric-profile": True},
    )


@_register("C_3_9")
def _c39():
    ctx = _ctx(
        ("u", "v", "w"),
        parameters=("c",),
        functions=(OpaqueFunction("f", ("w",)), OpaqueFunction("g0", ("w",))),
    )
    op = operator(
        ctx,
        g=_mat(ctx, [["0", "1", "0"], ["1", "0", "0"], ["0", "0", "0"]]),
        omega=_skew(ctx, "f(w)", "c*g0(w)", "g0(w)"),
    )
    return CatalogEntry(
        "C_3_9",
        "operator",
        "off-diagonal constant leading block with proportional ultralocal entries",
        {"operator": op, "numeric_profile": {"f": "w^2", "g0": "w"}},
        {"hamiltonian": True, "numeric-profile": True},
    )


@_register("C_3_10")
def _c310():
    fns = (
        OpaqueFunction("f", ("w",)),
        OpaqueFunction("g0", ("w",)),
        OpaqueFunction("h", ("w",)),
    )
    base = _ctx(("u", "v", "w"), (), (), fns)
    rhs = parse("(h(w)*D(g0,w) - f(w)*g0(w))/g0(w)", base)
    ctx = _ctx(
        ("u", "v", "w"),
        (),
        (),
        fns,
        (Assumption("h", (1,), rhs, parse("g0(w)", base)),),
    )
    b = _b_entries(ctx, {(0, 2, 2): "-1/v", (2, 0, 2): "1/v"})
    op = operator(
        ctx,
        g=_mat(ctx, [["0", "1", "0"], ["1", "0", "0"], ["0", "0", "0"]]),
        b=b,
        omega=_skew(ctx, "f(w)", "(h(w) - u*g0(w))/v", "g0(w)"),
    )
    return CatalogEntry(
        "C_3_10",
        "operator",
        "off-diagonal leading block; the ultralocal functions satisfy a first-order closure relation",
        {"operator": op, "numeric_profile": {"f": "2*w", "g0": "1", "h": "-w^2"}},
        {"hamiltonian": True, "numeric-profile": True},
    )


@_register("C_3_11")
def _c311():
    ctx = _ctx(
        ("u", "v", "w"),
        parameters=("c",),
        algebraics=(_sqrt_w(),),
        functions=(OpaqueFunction("f", ("w",)),),
    )
    b = _b_entries(
        ctx,
        {
            (0, 2, 2): "1/(u*w - v)",
            (1, 2, 2): "-w/(u*w - v)",
            (2, 0, 2): "-1/(u*w - v)",
            (2, 1, 2): "w/(u*w - v)",
        },
    )
    op = operator(
        ctx,
        g=_mat(ctx, [["0", "1", "0"], ["1", "0", "0"], ["0", "0", "0"]]),
        b=b,
        omega=_skew(
            ctx,
            "f(w)*c/s",
            "f(w)*(u*w - 2*c*s)/(u*w - v)",
            "-f(w)*w*(v - 2*c*s)/(u*w - v)",
        ),
    )
    return CatalogEntry(
        "C_3_11",
        "operator",
        "off-diagonal leading block with sqrt(w) in the ultralocal entries",
        {"operator": op, "numeric_profile": {"f": "1 + w"}},
        {"hamiltonian": True, "numeric-profile": True},
    )


# ---------------------------------------------------------------------------
# named example operators


@_register("sinh_gordon")
def _sinh_gordon():
    ctx = _ctx(("u", "v"))
    op = operator(
        ctx,
        g=_mat(ctx, [["0", "0"], ["0", "1"]]),
        omega=_skew(ctx, "u/2"),
    )
    return CatalogEntry(
        "sinh_gordon",
        "operator",
        "two-component quasilinear light-cone system operator",
        {"operator": op},
        {"hamiltonian": True},
    )


def _gkdv_operator(npow: int):
    ctx = _ctx(("u", "v", "w"))
    coeff = 3 * (npow + 1)
    w23 = f"-{coeff}*u^{npow - 1}" if npow > 1 else f"-{coeff}"
    op = operator(
        ctx,
        g=_mat(ctx, [["0", "0", "0"], ["0", "0", "0"], ["0", "0", "1"]]),
        omega=_skew(ctx, "1", "0", w23),
    )
    return op


def _gkdv_entry(npow: int):
    op = _gkdv_operator(npow)
    return CatalogEntry(
        f"gkdv({npow})",
        "operator",
        f"inverted generalized KdV operator, power {npow}",
        {"operator": op},
        {"hamiltonian": True},
        notes="the verified full-operator Casimir density is c1*(w - 3*(n+1)*u^n/n) + c2",
    )


for _npow in (1, 2, 3):
    _BUILDERS[f"gkdv({_npow})"] = (lambda k: (lambda: _gkdv_entry(k)))(_npow)


def kdv_context() -> Context:
    return _ctx(("u", "v", "w"), algebraics=(_sqrt2(),))


def kdv_A(ctx: Context | None = None) -> NonHomogeneousOperator:
    ctx = ctx or kdv_context()
    return operator(
        ctx,
        g=_mat(ctx, [["1", "0", "0"], ["0", "-1", "0"], ["0", "0", "-1"]]),
        omega=_skew(ctx, "-2*w", "2*v", "2*u"),
    )


def kdv_B(ctx: Context | None = None) -> NonHomogeneousOperator:
    ctx = ctx or kdv_context()
    return operator(
        ctx,
        g=_mat(ctx, [["1/2", "0", "1/2"], ["0", "0", "0"], ["1/2", "0", "1/2"]]),
        omega=_skew(ctx, "u - w + 1/sqrt2", "0", "w - u + 1/sqrt2"),
    )


@_register("kdv_A")
def _kdv_a():
    return CatalogEntry(
        "kdv_A",
        "operator",
        "first structure of the inverted KdV system (non-degenerate)",
        {"operator": kdv_A()},
        {"hamiltonian": True},
    )


@_register("kdv_B")
def _kdv_b():
    return CatalogEntry(
        "kdv_B",
        "operator",
        "second structure of the inverted KdV system (leading coefficient of rank 2)",
        {"operator": kdv_B()},
        {"hamiltonian": True},
    )


NIL6_PARAMS = ("al", "be", "ga", "de", "ep", "la0", "mu0")


def nil6_metric(ctx: Context):
    P = lambda s: parse(s, ctx)
    Z = E.ZERO
    g = [[Z] * 6 for _ in range(6)]
    al = P("al")
    g[0][3] = g[3][0] = al
    g[1][5] = g[5][1] = al
    g[2][4] = g[4][2] = E.neg(al)
    g[3][3] = P("be")
    g[3][4] = g[4][3] = P("ga")
    g[3][5] = g[5][3] = P("de")
    g[4][4] = P("la0")
    g[4][5] = g[5][4] = P("ep")
    g[5][5] = P("mu0")
    return tuple(tuple(r) for r in g)


@_register("nilpotent6_op")
def _nil6_op():
    ctx = _ctx(tuple(f"u{i+1}" for i in range(6)), parameters=NIL6_PARAMS)
    P = lambda s: parse(s, ctx)
    Z = E.ZERO
    om = [[Z] * 6 for _ in range(6)]
    om[3][4], om[4][3] = P("u2"), P("-u2")
    om[3][5], om[5][3] = P("u3"), P("-u3")
    om[4][5], om[5][4] = P("u1"), P("-u1")
    op = operator(ctx, g=nil6_metric(ctx), omega=tuple(tuple(r) for r in om))
    return CatalogEntry(
        "nilpotent6_op",
        "operator",
        "six-component constant-form operator built on a 2-step nilpotent bracket",
        {"operator": op},
        {"hamiltonian": True},
    )


# ---------------------------------------------------------------------------
# pairs


@_register("kdv_pair")
def _kdv_pair():
    ctx = kdv_context()
    return CatalogEntry(
        "kdv_pair",
        "pair",
        "bi-Hamiltonian pair of the inverted KdV system",
        {"A": kdv_A(ctx), "B": kdv_B(ctx)},
        {
            "hamiltonian-A": True,
            "hamiltonian-B": True,
            "tensor-compatible": True,
            "pencil-oracle": True,
            "oracle-agreement": True,
        },
    )


@_register("kdv_self")
def _kdv_self():
    ctx = kdv_context()
    return CatalogEntry(
        "kdv_self",
        "pair",
        "first KdV structure paired with itself (non-degenerate on both sides)",
        {"A": kdv_A(ctx), "B": kdv_A(ctx)},
        {
            "hamiltonian-A": True,
            "hamiltonian-B": True,
            "tensor-compatible": True,
            "pencil-oracle": True,
            "oracle-agreement": True,
        },
    )


def _family_entry(entry_id, family, params, title):
    A, B = build_pair_2comp(family, params)
    return CatalogEntry(
        entry_id,
        "pair",
        title,
        {"A": A, "B": B},
        {
            "hamiltonian-A": True,
            "hamiltonian-B": True,
            "tensor-compatible": True,
            "pencil-oracle": True,
            "oracle-agreement": True,
        },
    )


@_register("pair_b1")
def _pair_b1():
    return _family_entry(
        "pair_b1",
        "B1",
        Pair2Params(a=1, b=-1, c=Fraction(2), k1=Fraction(3), k2=Fraction(-1), k3=Fraction(5)),
        "two-component linear family instance",
    )


@_register("pair_laplace")
def _pair_laplace():
    return _family_entry(
        "pair_laplace",
        "B2-laplace",
        Pair2Params(a=1, b=1, c=Fraction(1), xi1=(0, 0, 1), xi2=(0, 1)),
        "two-component harmonic-potential family instance",
    )


@_register("pair_wave")
def _pair_wave():
    return _family_entry(
        "pair_wave",
        "B2-wave",
        Pair2Params(a=1, b=-1, c=Fraction(1), xi1=(0, 0, 0, 1), xi2=(2, 3)),
        "two-component wave-potential family instance",
    )


@_register("pair_case2ii")
def _pair_case2ii():
    return _family_entry(
        "pair_case2ii",
        "B2-case2ii",
        Pair2Params(a=1, b=-1, c=Fraction(1), xi1=(0, 0, 1), xi2=(1, 2), xi3=(0, 3, 1)),
        "two-component null-profile family, first branch",
    )


@_register("pair_case2iii")
def _pair_case2iii():
    return _family_entry(
        "pair_case2iii",
        "B2-case2iii",
        Pair2Params(a=1, b=-1, c=Fraction(1), xi1=(0, 0, 1), xi2=(1, 2), xi3=(0, 3, 1)),
        "two-component null-profile family, second branch",
    )


@_register("strong_2comp")
def _strong_2comp():
    ctx = _ctx(("u", "v"), parameters=("k1", "k2", "k3", "k4", "cc"))
    P = lambda s: parse(s, ctx)
    A = darboux_2comp(ctx, 1, -1, P("cc"))
    B = operator(
        ctx,
        g=_mat(ctx, [["k1", "k2"], ["k2", "k3"]]),
        omega=_skew(ctx, "k4"),
    )
    return CatalogEntry(
        "strong_2comp",
        "pair",
        "two-component pair of constant operators (strong two-parameter family)",
        {"A": A, "B": B},
        {
            "hamiltonian-A": True,
            "hamiltonian-B": True,
            "tensor-compatible": True,
            "pencil-oracle": True,
            "oracle-agreement": True,
        },
    )


@_register("strong_3comp")
def _strong_3comp():
    ctx = _ctx(
        ("u", "v", "w"),
        parameters=("c1", "c2", "c3", "k1", "k2", "k3", "k4", "k5", "k6", "k7", "k8", "k9"),
    )
    P = lambda s: parse(s, ctx)
    A = operator(
        ctx,
        g=_mat(ctx, [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "-1"]]),
        omega=_skew(ctx, "c1", "c2", "c3"),
    )
    B = operator(
        ctx,
        g=_mat(ctx, [["k1", "k2", "k3"], ["k2", "k4", "k5"], ["k3", "k5", "k6"]]),
        omega=_skew(ctx, "k7", "k8", "k9"),
    )
    return CatalogEntry(
        "strong_3comp",
        "pair",
        "three-component pair of constant operators (strong two-parameter family)",
        {"A": A, "B": B},
        {
            "hamiltonian-A": True,
            "hamiltonian-B": True,
            "tensor-compatible": True,
            "pencil-oracle": True,
            "oracle-agreement": True,
        },
    )


@_register("lemma3_pair")
def _lemma3_pair():
    params = ("m1", "m2", "m4", "c2", "c3", "c4", "k1", "k2", "k3")
    ctx = _ctx(("u", "v", "w"), parameters=params, algebraics=(_sqrt2(),))
    P = lambda s: parse(s, ctx)
    m3 = P("1/2*(k3 - 1/4*c4 - c2*m1 + c3*m2) - sqrt2/4")
    m5 = P("1/2*(k2 + c2*m4 + c4*m2)")
    m6 = P("-1/2*(c2/4 + k1 + c4*(1/2 - m1) - c3*m4) + sqrt2/4")
    h1 = P("1/4*u + (m1 - 1/2)*w + m2*v") + m3
    h2 = P("m2*u - m4*w") + m5
    h3 = P("-1/4*w + m1*u + m4*v") + m6
    a, b, c = 1, -1, -1
    first = mokhov_operator(ctx, (E.rat(a), E.rat(b), E.rat(c)), [h1, h2, h3])
    om = ultralocal_3comp(
        ctx, [h1, h2, h3], a, b, c, P("-2"), P("c2"), P("c3"), P("c4"), 0, P("k1"), P("k2"), P("k3")
    )
    A = darboux_3comp(ctx, a, b, c, P("-2"), P("c2"), P("c3"), P("c4"))
    B = NonHomogeneousOperator(first, om)
    return CatalogEntry(
        "lemma3_pair",
        "pair",
        "three-component pair closed by the derived ultralocal entries, free constants kept symbolic",
        {"A": A, "B": B},
        {
            "hamiltonian-A": True,
            "hamiltonian-B": True,
            "tensor-compatible": True,
            "pencil-oracle": True,
            "oracle-agreement": True,
        },
        notes="with the stated constant relations this pair specializes to the KdV pair exactly",
    )


@_register("flat_pair_P")
def _flat_pair_p():
    ctx = _ctx(("u", "v"))
    P = lambda s: parse(s, ctx)
    A = operator(
        ctx,
        g=_mat(ctx, [["1", "0"], ["0", "1"]]),
        omega=_skew(ctx, "1"),
    )
    b = _b_entries(ctx, {(0, 0, 0): "1/2", (1, 1, 1): "1/2"})
    B = operator(ctx, g=_mat(ctx, [["u", "0"], ["0", "v"]]), b=b)
    return CatalogEntry(
        "flat_pair_P",
        "pair",
        "non-degenerate flat pair whose interaction obstruction does not vanish",
        {"A": A, "B": B},
        {
            "hamiltonian-A": True,
            "hamiltonian-B": True,
            "tensor-compatible": False,
            "pencil-oracle": False,
            "oracle-agreement": True,
        },
    )


@_register("broken_L")
def _broken_l():
    ctx = kdv_context()
    A = kdv_A(ctx)
    B = operator(ctx, omega=_skew(ctx, "u", "0", "0"))
    return CatalogEntry(
        "broken_L",
        "pair",
        "perturbed pair failing with an ultralocal Schouten-bracket witness",
        {"A": A, "B": B},
        {
            "hamiltonian-A": True,
            "hamiltonian-B": True,
            "tensor-compatible": False,
            "pencil-oracle": False,
            "oracle-agreement": True,
        },
        notes="expected witness family: schouten-L",
    )


@_register("broken_P_trace")
def _broken_p_trace():
    ctx = _ctx(("u", "v"), algebraics=(AlgebraicSymbol("i", 2, E.rat(-1)),))
    u, v = ctx.var("u"), ctx.var("v")
    ii = E.AlgConst("i")
    zp, zm = E.add(u, E.mul(ii, v)), E.add(u, E.neg(E.mul(ii, v)))
    f1 = E.pow_(zp, 2)
    f2 = zm
    h1 = E.add(f1, f2)
    h2 = E.add(E.neg(E.mul(ii, f1)), E.mul(ii, f2))
    A = darboux_2comp(ctx, 1, 1, E.ONE)
    first = mokhov_operator(ctx, (E.ONE, E.ONE), [h1, h2])
    B = NonHomogeneousOperator(first, UltralocalOperator(ctx, zeros_matrix(2)))
    return CatalogEntry(
        "broken_P_trace",
        "pair",
        "harmonic-potential pair with the trace term dropped from the ultralocal entry",
        {"A": A, "B": B},
        {
            "hamiltonian-A": True,
            "hamiltonian-B": True,
            "tensor-compatible": False,
            "pencil-oracle": False,
            "oracle-agreement": True,
        },
        notes="expected witness family: pencil-P",
    )


@_register("broken_P_linear")
def _broken_p_linear():
    ctx = _ctx(("u", "v"))
    A = darboux_2comp(ctx, 1, 1, E.ONE)
    B = operator(
        ctx,
        g=_mat(ctx, [["0", "0"], ["0", "1"]]),
        omega=_skew(ctx, "u"),
    )
    return CatalogEntry(
        "broken_P_linear",
        "pair",
        "pair violating the closing form of the ultralocal entry",
        {"A": A, "B": B},
        {
            "hamiltonian-A": True,
            "hamiltonian-B": True,
            "tensor-compatible": False,
            "pencil-oracle": False,
            "oracle-agreement": True,
        },
        notes="expected witness family: pencil-P",
    )


@_register("broken_S_quadratic")
def _broken_s_quadratic():
    ctx = _ctx(("u", "v"))
    A = darboux_2comp(ctx, 1, 1, E.ONE)
    B = operator(
        ctx,
        g=_mat(ctx, [["0", "0"], ["0", "1"]]),
        omega=_skew(ctx, "u^2"),
    )
    return CatalogEntry(
        "broken_S_quadratic",
        "pair",
        "pair with a quadratic ultralocal perturbation (second-derivative witness)",
        {"A": A, "B": B},
        {
            "hamiltonian-A": True,
            "hamiltonian-B": True,
            "tensor-compatible": False,
            "pencil-oracle": False,
            "oracle-agreement": True,
        },
        notes="expected witness families: pencil-P and pencil-S",
    )


# ---------------------------------------------------------------------------
# Lie structures


@_register("nilpotent6")
def _nilpotent6():
    s = LieStructure.from_sparse(6, [(4, 5, 2, 1), (4, 6, 3, 1), (5, 6, 1, 1)])
    ctx = _ctx(tuple(f"u{i+1}" for i in range(6)), parameters=NIL6_PARAMS)
    return CatalogEntry(
        "nilpotent6",
        "lie-structure",
        "six-dimensional 2-step nilpotent structure with its compatible metric",
        {"lie": s, "eta": nil6_metric(ctx), "ctx": ctx},
        {"torsion-conditions": True, "torsion-vanishes": True},
    )


@_register("sl2_like")
def _sl2_like():
    s = LieStructure.from_sparse(3, [(1, 2, 3, -2), (1, 3, 2, 2), (2, 3, 1, 2)])
    ctx = _ctx(("u1", "u2", "u3"))
    eta = _mat(ctx, [["1", "0", "0"], ["0", "-1", "0"], ["0", "0", "-1"]])
    return CatalogEntry(
        "sl2_like",
        "lie-structure",
        "semisimple-type structure: torsion conditions fail and the torsion is nonzero",
        {"lie": s, "eta": eta, "ctx": ctx},
        {"torsion-conditions": False, "torsion-vanishes": False},
    )


@_register("heisenberg3")
def _heisenberg3():
    s = LieStructure.from_sparse(3, [(1, 2, 3, 1)])
    return CatalogEntry(
        "heisenberg3",
        "lie-structure",
        "three-dimensional 2-step nilpotent structure (no compatible non-degenerate metric exists)",
        {"lie": s},
        {"torsion-conditions": True},
        notes="with an incompatible metric such as the identity the torsion does not vanish",
    )


# ---------------------------------------------------------------------------
# Casimir fixtures


def _cas_entry(entry_id, title, op, density, expect, operator_ref=None, notes=""):
    if operator_ref is None:
        # fixtures named cas.<operator id>.<case> reference the base entry
        parts = entry_id.split(".")
        base = parts[1] if len(parts) > 1 else ""
        operator_ref = f"catalog:{base}" if base in _BUILDERS else "inline"
    return CatalogEntry(
        entry_id,
        "casimir-fixture",
        title,
        {"operator": op, "density": density, "expect": expect, "operator_ref": operator_ref},
        dict(expect),
        notes=notes,
    )


def _with_functions(op: NonHomogeneousOperator, *fns: OpaqueFunction, params=()):
    """Clone an operator over a context extended with density helper symbols."""
    ctx = op.ctx
    new = Context(
        ctx.variables,
        ctx.parameters + tuple(params),
        ctx.algebraics,
        ctx.functions + tuple(fns),
        ctx.assumptions,
    )
    return operator(new, op.g, op.b, op.omega)


def _inst_operator(entry_id: str, inst: dict, *fns, params=()):
    op = load(entry_id).payload["operator"]
    if inst:
        op = _instantiated(op, inst)
    return _with_functions(op, *fns, params=params)


PHI_W = OpaqueFunction("phi", ("w",))
PHI_V = OpaqueFunction("phi", ("v",))
PHI_U = OpaqueFunction("phi", ("u",))
PHI_Z = OpaqueFunction("phi", ("z",))
CHI_W = OpaqueFunction("chi", ("w",))


@_register("cas.C_2_1.row")
def _cas_c21():
    op = _inst_operator("C_2_1", {}, OpaqueFunction("hf", ("v",)), params=("c1", "c2"))
    return _cas_entry(
        "cas.C_2_1.row",
        "two-component table row: first-order density with an arbitrary profile",
        op,
        "c1*u + c2*hf(v)",
        {"C1": True, "C0": False},
    )


@_register("cas.C_2_1.constant")
def _cas_c21_const():
    op = _inst_operator("C_2_1", {}, params=("c1",))
    return _cas_entry(
        "cas.C_2_1.constant",
        "two-component table row: constants are the only full Casimirs",
        op,
        "c1",
        {"C0": True, "C1": True, "C10": True},
    )


@_register("cas.C_2_2.constant")
def _cas_c22_const():
    op = _inst_operator("C_2_2", {}, params=("c1",))
    return _cas_entry(
        "cas.C_2_2.constant",
        "two-component table row with 1/u terms: constants only",
        op,
        "c1",
        {"C0": True, "C1": True, "C10": True},
    )


@_register("cas.C_3_1.row")
def _cas_c31():
    op = _inst_operator("C_3_1", {}, PHI_W)
    return _cas_entry(
        "cas.C_3_1.row",
        "zero-leading-coefficient row: any profile of the third field",
        op,
        "phi(w)",
        {"C0": True, "C1": True, "C10": True},
    )


@_register("cas.C_3_3.row")
def _cas_c33():
    op = _inst_operator("C_3_3", {}, PHI_W)
    return _cas_entry(
        "cas.C_3_3.row",
        "single-coupling row: any profile of the third field",
        op,
        "phi(w)",
        {"C0": True, "C1": True, "C10": True},
    )


@_register("cas.C_3_4.row")
def _cas_c34():
    op = _inst_operator("C_3_4", {}, PHI_V)
    return _cas_entry(
        "cas.C_3_4.row",
        "1/u-coupling row: any profile of the second field",
        op,
        "phi(v)",
        {"C0": True, "C1": True, "C10": True},
    )


@_register("cas.C_3_6.gzero.C0")
def _cas_c36_gzero():
    op = _inst_operator("C_3_6", {"g0": "0"}, PHI_W)
    return _cas_entry(
        "cas.C_3_6.gzero.C0",
        "proportional-entries row, vanishing second profile",
        op,
        "phi(w)",
        {"C0": True, "C10": True},
    )


@_register("cas.C_3_6.gzero.C1")
def _cas_c36_gzero_c1():
    op = _inst_operator("C_3_6", {"g0": "0"}, CHI_W, params=("c1", "c2"))
    return _cas_entry(
        "cas.C_3_6.gzero.C1",
        "proportional-entries row, first-order column",
        op,
        "c1*u + c2*v + chi(w)",
        {"C1": True},
    )


@_register("cas.C_3_6.general.C0")
def _cas_c36_general():
    op = _inst_operator("C_3_6", {"f": "2*w", "g0": "1"}, PHI_Z)
    return _cas_entry(
        "cas.C_3_6.general.C0",
        "proportional-entries row, generic case (verified orientation)",
        op,
        "phi(c*u - v + w^2)",
        {"C0": True, "C10": False},
        notes="the quoted form phi(c*v - w^2 - u) only passes when c^2 = 1; see DISCREPANCIES.md",
    )


@_register("cas.C_3_6.general.C0.quoted")
def _cas_c36_general_quoted():
    op = _inst_operator("C_3_6", {"f": "2*w", "g0": "1"}, PHI_Z)
    return _cas_entry(
        "cas.C_3_6.general.C0.quoted",
        "proportional-entries row, generic case, quoted orientation (negative fixture)",
        op,
        "phi(c*v - w^2 - u)",
        {"C0": False},
    )


@_register("cas.C_3_6.general.C10")
def _cas_c36_general_full():
    op = _inst_operator("C_3_6", {"f": "2*w", "g0": "1"})
    return _cas_entry(
        "cas.C_3_6.general.C10",
        "proportional-entries row, generic case, full-operator column",
        op,
        "c*u - v + w^2",
        {"C10": True},
    )


@_register("cas.C_3_7.czero")
def _cas_c37_czero():
    op = _inst_operator("C_3_7", {}, PHI_U)
    op = _substituted(op, {"c": E.ZERO})
    return _cas_entry(
        "cas.C_3_7.czero",
        "1/v-coupling row at vanishing coupling constant",
        op,
        "phi(u)",
        {"C0": True},
    )


@_register("cas.C_3_7.czero.full")
def _cas_c37_czero_full():
    op = _inst_operator("C_3_7", {})
    op = _substituted(op, {"c": E.ZERO})
    return _cas_entry(
        "cas.C_3_7.czero.full",
        "1/v-coupling row at vanishing coupling constant, full column",
        op,
        "u",
        {"C1": True, "C10": True},
    )


@_register("cas.C_3_7.general")
def _cas_c37_general():
    op = _inst_operator("C_3_7", {}, PHI_Z)
    return _cas_entry(
        "cas.C_3_7.general",
        "1/v-coupling row, generic coupling constant",
        op,
        "phi((c*(u^2 + v^2) - 2*u)/c)",
        {"C0": True},
    )


@_register("cas.C_3_7.general.full")
def _cas_c37_general_full():
    op = _inst_operator("C_3_7", {}, params=("c2",))
    return _cas_entry(
        "cas.C_3_7.general.full",
        "1/v-coupling row, generic coupling constant, full column",
        op,
        "c2",
        {"C10": True},
    )


@_register("cas.C_3_8.czero")
def _cas_c38_czero():
    op = _inst_operator("C_3_8", {}, PHI_Z, params=("c1", "c2"))
    op = _substituted(op, {"c": E.ZERO})
    return _cas_entry(
        "cas.C_3_8.czero",
        "sqrt(1+w^2) row at vanishing coupling constant",
        op,
        "phi((v*w + u)/t)",
        {"C0": True},
    )


@_register("cas.C_3_8.czero.C1")
def _cas_c38_czero_c1():
    op = _inst_operator("C_3_8", {}, params=("c1", "c2"))
    op = _substituted(op, {"c": E.ZERO})
    return _cas_entry(
        "cas.C_3_8.czero.C1",
        "sqrt(1+w^2) row, first-order column",
        op,
        "(c1*(v*w + u) + c2*t)/t",
        {"C1": True, "C10": True},
    )


@_register("cas.C_3_8.general")
def _cas_c38_general():
    op = _inst_operator("C_3_8", {}, PHI_Z, params=("c1", "c2"))
    return _cas_entry(
        "cas.C_3_8.general",
        "sqrt(1+w^2) row, generic coupling constant",
        op,
        "phi(2*(v*w + u)/t - c*(u^2 + v^2))",
        {"C0": True},
    )


@_register("cas.C_3_8.general.C1")
def _cas_c38_general_c1():
    op = _inst_operator("C_3_8", {}, params=("c1", "c2", "c3"))
    return _cas_entry(
        "cas.C_3_8.general.C1",
        "sqrt(1+w^2) row, generic coupling, first-order and full columns",
        op,
        "(c1*(v*w + u) + c2*t)/t",
        {"C1": True},
    )


@_register("cas.C_3_8.general.full")
def _cas_c38_general_full():
    op = _inst_operator("C_3_8", {}, params=("c3",))
    return _cas_entry(
        "cas.C_3_8.general.full",
        "sqrt(1+w^2) row, generic coupling, full column is constant",
        op,
        "c3",
        {"C10": True},
    )


@_register("cas.C_3_9.gzero.C0")
def _cas_c39_gzero():
    op = _inst_operator("C_3_9", {"g0": "0"}, PHI_W)
    return _cas_entry(
        "cas.C_3_9.gzero.C0",
        "off-diagonal-leading row, vanishing second profile",
        op,
        "phi(w)",
        {"C0": True, "C10": True},
    )


@_register("cas.C_3_9.gzero.C1")
def _cas_c39_gzero_c1():
    op = _inst_operator("C_3_9", {"g0": "0"}, CHI_W, params=("c1", "c2"))
    return _cas_entry(
        "cas.C_3_9.gzero.C1",
        "off-diagonal-leading row, first-order column",
        op,
        "c1*u + c2*v + chi(w)",
        {"C1": True},
    )


@_register("cas.C_3_9.general.C0")
def _cas_c39_general():
    op = _inst_operator("C_3_9", {"f": "2*w", "g0": "1"}, PHI_Z)
    return _cas_entry(
        "cas.C_3_9.general.C0",
        "off-diagonal-leading row, generic case",
        op,
        "phi(c*v - w^2 - u)",
        {"C0": True},
    )


@_register("cas.C_3_9.general.C10")
def _cas_c39_general_full():
    op = _inst_operator("C_3_9", {"f": "2*w", "g0": "1"})
    return _cas_entry(
        "cas.C_3_9.general.C10",
        "off-diagonal-leading row, generic case, full column",
        op,
        "c*v - w^2 - u",
        {"C10": True},
    )


@_register("cas.C_3_10.fg_zero")
def _cas_c310_fgzero():
    op = _inst_operator("C_3_10", {"f": "0", "g0": "0"}, PHI_V)
    return _cas_entry(
        "cas.C_3_10.fg_zero",
        "closure row with both transverse profiles vanishing",
        op,
        "phi(v)",
        {"C0": True},
    )


@_register("cas.C_3_10.fg_zero.full")
def _cas_c310_fgzero_full():
    op = _inst_operator("C_3_10", {"f": "0", "g0": "0"})
    return _cas_entry(
        "cas.C_3_10.fg_zero.full",
        "closure row with both transverse profiles vanishing, full column",
        op,
        "v",
        {"C10": True},
    )


@_register("cas.C_3_10.fh_zero")
def _cas_c310_fhzero():
    op = _inst_operator("C_3_10", {"f": "0", "h": "0"}, PHI_Z)
    return _cas_entry(
        "cas.C_3_10.fh_zero",
        "closure row with the first and third profiles vanishing",
        op,
        "phi(u*v)",
        {"C0": True},
    )


@_register("cas.C_3_10.gh_zero")
def _cas_c310_ghzero():
    op = _inst_operator("C_3_10", {"g0": "0", "h": "0"}, PHI_W)
    return _cas_entry(
        "cas.C_3_10.gh_zero",
        "closure row with the second and third profiles vanishing",
        op,
        "phi(w)",
        {"C0": True},
    )


@_register("cas.C_3_10.g_zero")
def _cas_c310_gzero():
    # exponential-type first integral: Ef' = -(f/h) Ef, supplied as a rule
    fns = (
        OpaqueFunction("f", ("w",)),
        OpaqueFunction("h", ("w",)),
        OpaqueFunction("Ef", ("w",)),
        PHI_Z,
    )
    base = _ctx(("u", "v", "w"), (), (), fns)
    rule = Assumption(
        "Ef", (1,), parse("-(f(w)/h(w))*Ef(w)", base), parse("h(w)", base)
    )
    ctx = _ctx(("u", "v", "w"), (), (), fns, (rule,))
    b = _b_entries(ctx, {(0, 2, 2): "-1/v", (2, 0, 2): "1/v"})
    op = operator(
        ctx,
        g=_mat(ctx, [["0", "1", "0"], ["1", "0", "0"], ["0", "0", "0"]]),
        b=b,
        omega=_skew(ctx, "f(w)", "h(w)/v", "0"),
    )
    return _cas_entry(
        "cas.C_3_10.g_zero",
        "closure row with the second profile vanishing; integrating-factor density",
        op,
        "phi(v*Ef(w))",
        {"C0": True},
    )


@_register("cas.C_3_10.general")
def _cas_c310_general():
    op = _inst_operator("C_3_10", {"f": "2*w", "g0": "1", "h": "-w^2"}, PHI_Z)
    return _cas_entry(
        "cas.C_3_10.general",
        "closure row, generic case",
        op,
        "phi(v*(u + w^2))",
        {"C0": True},
    )


@_register("cas.C_3_10.C1")
def _cas_c310_c1():
    op = _inst_operator("C_3_10", {"f": "2*w", "g0": "1", "h": "-w^2"}, CHI_W)
    return _cas_entry(
        "cas.C_3_10.C1",
        "closure row, first-order column",
        op,
        "v*chi(w)",
        {"C1": True},
    )


@_register("cas.C_3_11.row")
def _cas_c311_row():
    op = _inst_operator("C_3_11", {}, PHI_Z, params=("c1",))
    return _cas_entry(
        "cas.C_3_11.row",
        "sqrt(w) row: zero-order and first-order columns",
        op,
        "phi(2*c*u*s + 2*v*c/s - u*v)",
        {"C0": True},
    )


@_register("cas.C_3_11.C1")
def _cas_c311_c1():
    op = _inst_operator("C_3_11", {}, params=("c1",))
    return _cas_entry(
        "cas.C_3_11.C1",
        "sqrt(w) row, first-order column",
        op,
        "c1*v/s + s*c1*u",
        {"C1": True},
    )


@_register("cas.kdv_B.full")
def _cas_kdvb():
    op = _with_functions(kdv_B())
    return _cas_entry(
        "cas.kdv_B.full",
        "quadratic full-operator Casimir of the degenerate KdV structure",
        op,
        "(u - w)^2 - sqrt2*(u + w)",
        {"C10": True},
    )


@_register("cas.kdv_B.C1")
def _cas_kdvb_c1():
    op = _with_functions(
        kdv_B(), OpaqueFunction("phi", ("v",)), OpaqueFunction("psi", ("v", "z")), params=("c1",)
    )
    return _cas_entry(
        "cas.kdv_B.C1",
        "first-order Casimirs of the degenerate KdV structure",
        op,
        "c1*(u + v) + phi(v) + psi(v, u - w)",
        {"C1": True},
    )


@_register("cas.kdv_B.C0")
def _cas_kdvb_c0():
    op = _with_functions(kdv_B(), OpaqueFunction("theta", ("z",)))
    return _cas_entry(
        "cas.kdv_B.C0",
        "zero-order Casimirs of the degenerate KdV structure",
        op,
        "theta((u - w)^2 - sqrt2*(u + w))",
        {"C0": True},
    )


@_register("cas.kdv_A.C1")
def _cas_kdva_c1():
    op = _with_functions(kdv_A(), params=("c1", "c2", "c3", "c4"))
    return _cas_entry(
        "cas.kdv_A.C1",
        "affine first-order Casimirs of the non-degenerate KdV structure",
        op,
        "c1*u + c2*v + c3*w + c4",
        {"C1": True},
    )


@_register("cas.kdv_A.C0")
def _cas_kdva_c0():
    op = _with_functions(kdv_A(), OpaqueFunction("theta", ("z",)))
    return _cas_entry(
        "cas.kdv_A.C0",
        "zero-order Casimirs of the non-degenerate KdV structure (verified invariant)",
        op,
        "theta(v^2 + w^2 - u^2)",
        {"C0": True},
        notes="the quoted invariant u*w + v^2 fails the zero-order residuals; see DISCREPANCIES.md",
    )


@_register("cas.kdv_A.C0.quoted")
def _cas_kdva_c0_quoted():
    op = _with_functions(kdv_A(), OpaqueFunction("theta", ("z",)))
    return _cas_entry(
        "cas.kdv_A.C0.quoted",
        "zero-order invariant of the non-degenerate KdV structure, quoted variant (negative fixture)",
        op,
        "theta(u*w + v^2)",
        {"C0": False},
    )


def _gkdv_cas(npow: int, corrected: bool):
    op = _with_functions(_gkdv_operator(npow), params=("c1", "c2"))
    coeff_corr = Fraction(3 * (npow + 1), npow)
    coeff_quoted = Fraction(3, npow)
    coeff = coeff_corr if corrected else coeff_quoted
    density = f"c1*(w - {coeff.numerator}/{coeff.denominator}*u^{npow}) + c2" if npow > 1 else f"c1*(w - {coeff}*u) + c2"
    return op, density


@_register("cas.gkdv3.full")
def _cas_gkdv3():
    op, density = _gkdv_cas(3, corrected=True)
    return _cas_entry(
        "cas.gkdv3.full",
        "generalized-KdV full-operator Casimir (oracle-resolved coefficient)",
        op,
        density,
        {"C10": True},
        notes="the quoted density without the (n+1) factor fails; see DISCREPANCIES.md",
    )


@_register("cas.gkdv3.quoted")
def _cas_gkdv3_quoted():
    op, density = _gkdv_cas(3, corrected=False)
    return _cas_entry(
        "cas.gkdv3.quoted",
        "generalized-KdV quoted density (negative fixture)",
        op,
        density,
        {"C10": False},
    )


def _substituted(op: NonHomogeneousOperator, mapping) -> NonHomogeneousOperator:
    ctx = op.ctx
    n = op.n
    sub = lambda x: E.substitute(x, mapping)
    return operator(
        ctx,
        tuple(tuple(sub(op.g[i][j]) for j in range(n)) for i in range(n)),
        tuple(tuple(tuple(sub(op.b[i][j][k]) for k in range(n)) for j in range(n)) for i in range(n)),
        tuple(tuple(sub(op.omega[i][j]) for j in range(n)) for i in range(n)),
    )


# ---------------------------------------------------------------------------
# the inverted-KdV quasilinear systems and the quadratic unimodular change


def kdv_systems():
    """Both presentations of the inverted KdV system plus the quadratic
    unimodular substitution connecting them.

    Returns (ctx, V_first, W_first, substitution, V_second, W_second) where
    the substitution expresses the first presentation's fields in terms of
    the second's.  The x-derivative sign of the transformed system follows
    the machine-verified orientation (see DISCREPANCIES.md).
    """
    ctx = _ctx(("u", "v", "w"), algebraics=(_sqrt2(),))
    P = lambda s: parse(s, ctx)
    V1 = _mat(ctx, [["0", "0", "0"], ["0", "0", "0"], ["1", "0", "0"]])
    W1 = (P("v"), P("w"), P("6*u*v"))
    substitution = (
        P("(u - w)/sqrt2"),
        P("v"),
        P("(u + w)/sqrt2 + (u - w)^2"),
    )
    half = "1/2"
    V2 = _mat(
        ctx,
        [
            [half, "0", f"-{half}"],
            ["0", "0", "0"],
            [half, "0", f"-{half}"],
        ],
    )
    W2 = (
        P("v*(u - w) + v/sqrt2"),
        P("(u - w)^2 + (u + w)/sqrt2"),
        P("v*(u - w) - v/sqrt2"),
    )
    return ctx, V1, W1, substitution, V2, W2


def transform_system(ctx, V, W, substitution):
    """Push a quasilinear system through a change of dependent variables.

    ``substitution`` lists the old fields as expressions in the new ones;
    returns (V', W') for the induced system on the new fields.
    """
    n = len(substitution)
    names = ctx.variables
    J = tuple(
        tuple(E.differentiate(substitution[i], names[j], ctx) for j in range(n))
        for i in range(n)
    )
    det = determinant(J, ctx)
    if E.is_identically_zero(det, ctx):
        raise ValueError("substitution is not invertible")
    adj = adjugate(J, ctx)
    Jinv = tuple(
        tuple(E.div(adj[i][j], det) for j in range(n)) for i in range(n)
    )
    sub = lambda x: E.substitute(x, dict(zip(names, substitution)))
    Vsub = tuple(tuple(sub(V[i][j]) for j in range(n)) for i in range(n))
    Wsub = tuple(sub(W[i]) for i in range(n))
    VJ = tuple(
        tuple(
            E.add(*[E.mul(Vsub[i][s], J[s][j]) for s in range(n)])
            for j in range(n)
        )
        for i in range(n)
    )
    Vp = tuple(
        tuple(
            E.add(*[E.mul(Jinv[i][s], VJ[s][j]) for s in range(n)])
            for j in range(n)
        )
        for i in range(n)
    )
    Wp = tuple(
        E.add(*[E.mul(Jinv[i][s], Wsub[s]) for s in range(n)]) for i in range(n)
    )
    return Vp, Wp


__all__ = [
    "CatalogEntry",
    "UnknownEntryError",
    "export",
    "kdv_A",
    "kdv_B",
    "kdv_context",
    "kdv_systems",
    "list_entries",
    "load",
    "nil6_metric",
    "transform_system",
    "verify",
]
