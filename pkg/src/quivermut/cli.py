"""
Command-line front end.

Exit codes: 0 success, 1 input error, 2 unsupported mutation configuration,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import fixtures
from .catalog import (
    E82_EDGES, E82_LETTERS, CatalogError, TypeAAttachment, classify, e82_closure, gen_a3n3, gen_dnll,
    gen_e82,
)
from .covering import CoveringError, load_preset, mutate_qp_via_cover
from .cycle_mutation import (
    CycleSpec, CycleSpecError, build_exchange_matrix, derive_cb_indices, mutate_cycle, mutation_class,
    palu_mutate, verify_appendix_identities,
)
from .quiver import (
    MutationError, Quiver, QuiverError, QuiverWithPotential, canonical_labeling, fz_mutate_quiver,
    qp_from_dict, qp_to_json, skew_matrix, sum_of_minimal_cycles_potential,
)
from .triangulation import (
    Triangulation, TriangulationError, all_triangulations, flip, g_invariant_triangulations,
    quotient_quiver, triangulation_to_quiver,
)
from .quiver import canonical_form

EXIT_OK, EXIT_INPUT, EXIT_UNSUPPORTED, EXIT_VERIFY = 0, 1, 2, 3

QUIVER_SCHEMA = {
    "type": "object",
    "required": ["vertices", "arrows"],
    "properties": {
        "vertices": {"type": "array", "items": {"type": "string"}},
        "arrows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "source", "target"],
                "properties": {k: {"type": "string"} for k in ("id", "source", "target")},
            },
        },
        "potential": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["coeff", "cycle"],
                "properties": {
                    "coeff": {"type": "integer"},
                    "cycle": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                },
            },
        },
    },
}

CYCLE_SPEC_SCHEMA = {
    "type": "object",
    "required": ["cycle"],
    "properties": {
        "cycle": {"type": "array", "items": {"type": "string"}, "minItems": 3},
        "c_index": {"type": "object", "additionalProperties": {"type": "integer"}},
        "b_index": {"type": "object", "additionalProperties": {"type": "integer"}},
    },
}

PRESET_SCHEMA = {
    "type": "object",
    "required": ["ell"],
    "properties": {
        "ell": {"type": "integer", "minimum": 2},
        "shifts": {"type": "object", "additionalProperties": {"type": "integer"}},
    },
}


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors; 2 is reserved for unsupported mutations
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


class VerificationFailure(Exception):
    pass


def _load_json(path: str, schema: dict):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read {path}: {e}") from e
    try:
        jsonschema.validate(data, schema)
    except jsonschema.ValidationError as e:
        raise InputError(f"{path}: {e.message}") from e
    return data


def load_qp(path: str) -> QuiverWithPotential:
    if path in fixtures.FIXTURES:
        return fixtures.FIXTURES[path][0]()
    if path in fixtures.BASES:
        return fixtures.BASES[path][0]()
    return qp_from_dict(_load_json(path, QUIVER_SCHEMA))


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _max_depth(arg: int | None) -> int:
    if arg is not None:
        return arg
    try:
        return int(os.environ.get("QM_MAX_DEPTH", "8"))
    except ValueError as e:
        raise InputError("QM_MAX_DEPTH must be an integer") from e


def _require_vertex(q: Quiver, v: str):
    if v not in q.vertices:
        raise InputError(f"unknown vertex {v!r}")


# -- rendering --------------------------------------------------------------


def render_dot(q: Quiver, canonical: bool = False) -> str:
    """DOT digraph with arrow ids as edge labels (canonical mode: numbered nodes, no labels)."""
    if canonical:
        _, order = canonical_labeling(q)
        name = {v: str(i) for i, v in enumerate(order)}
        edges = sorted((int(name[a.source]), int(name[a.target])) for a in q.arrows)
        lines = ["digraph Q {"] + [f'  "{i}";' for i in range(len(order))]
        lines += [f'  "{s}" -> "{t}";' for s, t in edges]
    else:
        lines = ["digraph Q {"] + [f"  {json.dumps(v)};" for v in q.vertices]
        for a in sorted(q.arrows, key=lambda a: a.id):
            lines.append(f"  {json.dumps(a.source)} -> {json.dumps(a.target)} [label={json.dumps(a.id)}];")
    return "\n".join(lines + ["}"]) + "\n"


def canonical_json(q: Quiver) -> str:
    _, order = canonical_labeling(q)
    name = {v: str(i) for i, v in enumerate(order)}
    edges = sorted((int(name[a.source]), int(name[a.target])) for a in q.arrows)
    cq = Quiver.from_edges([str(i) for i in range(len(order))], [(f"a{k}", str(s), str(t)) for k, (s, t) in enumerate(edges)])
    return qp_to_json(cq)


def _write_quiver(q, fmt: str, out: str | None, canonical: bool = False):
    quiver = q.quiver if isinstance(q, QuiverWithPotential) else q
    if fmt == "dot":
        _emit(render_dot(quiver, canonical), out)
    elif canonical:
        _emit(canonical_json(quiver), out)
    else:
        _emit(qp_to_json(q), out)


# -- subcommands ------------------------------------------------------------


def cmd_mutate(a):
    qp = load_qp(a.input)
    _require_vertex(qp.quiver, a.vertex)
    try:
        out = fz_mutate_quiver(qp.quiver, a.vertex)
    except MutationError as e:
        raise MutationError(f"{e}; try `mutate-covered`") from e
    _write_quiver(QuiverWithPotential(out, sum_of_minimal_cycles_potential(out)), a.format, a.output)


def cmd_mutate_cycle(a):
    qp = load_qp(a.input)
    if a.spec:
        spec = CycleSpec.from_dict(_load_json(a.spec, CYCLE_SPEC_SCHEMA))
    elif a.cycle:
        spec = derive_cb_indices(qp, [v.strip() for v in a.cycle.split(",")])
    elif a.input in fixtures.FIXTURES:
        spec = fixtures.FIXTURES[a.input][1]()
    else:
        raise InputError("give --spec FILE or --cycle v0,v1,...")
    if a.print_spec:
        _emit(spec.to_json(), None)
        return
    out = mutate_cycle(qp.quiver, spec)
    _write_quiver(QuiverWithPotential(out, sum_of_minimal_cycles_potential(out)), a.format, a.output)


def cmd_mutate_covered(a):
    qp = load_qp(a.input)
    _require_vertex(qp.quiver, a.vertex)
    preset_name = a.cover_preset or (fixtures.BASES[a.input][1] if a.input in fixtures.BASES else None)
    if preset_name is None:
        raise InputError("give --cover-preset (a9-3, d6-3 or a JSON file)")
    preset = load_preset(preset_name)
    jsonschema.validate(preset, PRESET_SCHEMA)
    out = mutate_qp_via_cover(qp, a.vertex, preset["ell"], preset.get("shifts", {}),
                              delegate_plain=not a.always_cover)
    _write_quiver(out, a.format, a.output)


def cmd_explore(a):
    qp = load_qp(a.input)
    q = qp.quiver
    if q.loops() or any(q.has_two_cycle_at(v) for v in q.vertices):
        raise MutationError("explore needs a quiver without loops and 2-cycles; try `mutate-covered`")
    report = mutation_class(q, _max_depth(a.max_depth))
    if a.dot:
        lines = ["graph exchange {"] + [f'  "{i}";' for i in range(len(report["classes"]))]
        lines += [f'  "{i}" -- "{j}";' for i, j in report["edges"]]
        _emit("\n".join(lines + ["}"]) + "\n", a.output)
        return
    out = {"n_classes": len(report["classes"]), "depth_counts": report["depth_counts"],
           "complete": report["complete"], "classes": report["classes"]}
    _emit(json.dumps(out, indent=2) + "\n", a.output)


def cmd_catalog(a):
    if a.action == "list":
        lines = ["A3n3  loop at the connecting vertex of a type-A attachment (params: attachment file, vertex)",
                 "Dnll  central q-cycle with star triangles (params: --q, --ell, --stars)",
                 "E82   letters " + " ".join(E82_LETTERS)]
        _emit("\n".join(lines) + "\n", a.output)
        return
    if a.action == "classify":
        if not a.args:
            raise InputError("catalog classify needs a quiver file")
        res = classify(load_qp(a.args[0]))
        _emit(json.dumps(res.to_dict() if res else None, indent=2) + "\n", a.output)
        return
    if not a.args:
        raise InputError("catalog gen needs a family: a3n3, dnll or e82")
    fam = a.args[0].lower()
    try:
        if fam == "e82":
            letter = a.letter or (a.args[1] if len(a.args) > 1 else None)
            if letter is None:
                raise InputError("catalog gen e82 needs a letter a..g")
            entry = gen_e82(letter)
        elif fam == "dnll":
            if a.q is None or a.ell is None:
                raise InputError("catalog gen dnll needs --q and --ell")
            stars = [int(x) for x in a.stars.split(",") if x] if a.stars else []
            entry = gen_dnll(a.q, a.ell, stars)
        elif fam == "a3n3":
            if a.attachment:
                att_qp = load_qp(a.attachment)
                if a.vertex is None:
                    raise InputError("--attachment needs --vertex (the connecting vertex)")
                att = TypeAAttachment(att_qp.quiver, a.vertex)
            else:
                att = TypeAAttachment.point("1")
            entry = gen_a3n3(att)
        else:
            raise InputError(f"unknown family {fam!r}")
    except CatalogError as e:
        raise InputError(str(e)) from e
    _write_quiver(entry.qp, a.format, a.output)


def cmd_tri(a):
    try:
        if a.action == "quiver":
            if a.ngon is None:
                raise InputError("tri quiver needs --ngon")
            t = Triangulation.parse(a.ngon, a.diagonals or "")
            q = triangulation_to_quiver(t)
            _write_quiver(QuiverWithPotential(q, sum_of_minimal_cycles_potential(q)), a.format, a.output)
        else:
            if a.n is None:
                raise InputError("tri invariant needs --n")
            out = []
            for t in g_invariant_triangulations(a.n):
                qp = quotient_quiver(t)
                out.append({"diagonals": [f"{i}-{j}" for i, j in sorted(t.diagonals)], "quotient": qp.to_dict()})
            _emit(json.dumps({"ngon": 3 * a.n + 3, "count": len(out), "triangulations": out}, indent=2) + "\n",
                  a.output)
    except TriangulationError as e:
        raise InputError(str(e)) from e


def _verify_appendix(names):
    lines, ok = [], True
    for name in names:
        qp = fixtures.FIXTURES[name][0]()
        rep = verify_appendix_identities(qp.quiver, fixtures.FIXTURES[name][1]())
        for k, v in rep.items():
            lines.append(f"{'PASS' if v else 'FAIL'} appendix {name} {k}")
            ok &= v
    return ok, lines


def _verify_palu(names):
    lines, ok = [], True
    for name in names:
        qp = fixtures.FIXTURES[name][0]()
        spec = fixtures.FIXTURES[name][1]()
        S = build_exchange_matrix(qp.quiver, spec)
        lhs = skew_matrix(mutate_cycle(qp.quiver, spec), S.order)
        rhs = palu_mutate(skew_matrix(qp.quiver, S.order), S)
        good = bool(np.array_equal(lhs, rhs))
        ok &= good
        lines.append(f"{'PASS' if good else 'FAIL'} palu {name}")
    return ok, lines


def _verify_e82():
    c = e82_closure()
    got = {frozenset(e) for e in c.graph.edges()}
    lines = [f"{'PASS' if c.closed else 'FAIL'} e82-closure every mutation lands in the catalog"]
    lines.append(f"{'PASS' if got == E82_EDGES else 'FAIL'} e82-closure graph has {len(got)} edges "
                 f"(expected {len(E82_EDGES)})")
    for e in sorted("".join(sorted(x)) for x in got ^ E82_EDGES):
        lines.append(f"  mismatch {e}")
    return c.closed and got == E82_EDGES, lines


def _verify_flips(max_ngon):
    total = bad = 0
    for n in range(4, max_ngon + 1):
        for t in all_triangulations(n):
            q = triangulation_to_quiver(t)
            for d in sorted(t.diagonals):
                total += 1
                lhs = canonical_form(triangulation_to_quiver(flip(t, d)))
                rhs = canonical_form(fz_mutate_quiver(q, f"{d[0]}-{d[1]}"))
                bad += lhs != rhs
    return bad == 0, [f"{'PASS' if bad == 0 else 'FAIL'} flips {total} checks up to the {max_ngon}-gon, {bad} failures"]


def cmd_verify(a):
    names = list(fixtures.FIXTURES) if a.fixture in (None, "all") else [a.fixture]
    for n in names:
        if n not in fixtures.FIXTURES:
            raise InputError(f"unknown fixture {n!r}; choose from {', '.join(fixtures.FIXTURES)}")
    if a.suite == "appendix":
        ok, lines = _verify_appendix(names)
    elif a.suite == "palu":
        ok, lines = _verify_palu(names)
    elif a.suite == "e82-closure":
        ok, lines = _verify_e82()
    elif a.suite == "flips":
        ok, lines = _verify_flips(a.max_ngon)
    else:
        ok, lines = True, []
        for part in (_verify_appendix(names), _verify_palu(names), _verify_e82(), _verify_flips(a.max_ngon)):
            ok &= part[0]
            lines += part[1]
    _emit("\n".join(lines) + "\n", a.output)
    if not ok:
        raise VerificationFailure("verification failed")


def cmd_render(a):
    qp = load_qp(a.input)
    _write_quiver(qp, a.format, a.output, canonical=a.canonical)


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="quivermut", description="Quiver mutation for 2-CY tilted algebras.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt=True):
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")
        if fmt:
            sp.add_argument("--format", choices=("json", "dot"), default="json")

    sp = sub.add_parser("mutate", help="FZ mutation at a vertex")
    sp.add_argument("input", help="quiver JSON file (or a fixture name)")
    sp.add_argument("vertex")
    common(sp)
    sp.set_defaults(func=cmd_mutate)

    sp = sub.add_parser("mutate-cycle", help="mutation at an oriented cycle")
    sp.add_argument("input")
    sp.add_argument("--spec", help="CycleSpec JSON file")
    sp.add_argument("--cycle", help="comma-separated cycle vertices; indices derived from the potential")
    sp.add_argument("--print-spec", action="store_true", help="print the CycleSpec instead of mutating")
    common(sp)
    sp.set_defaults(func=cmd_mutate_cycle)

    sp = sub.add_parser("mutate-covered", help="mutation at a loop or 2-cycle through a cyclic cover")
    sp.add_argument("input")
    sp.add_argument("vertex")
    sp.add_argument("--cover-preset", help="a9-3, d6-3 or a JSON file {ell, shifts}")
    sp.add_argument("--always-cover", action="store_true",
                    help="go through the cover even at plain vertices")
    common(sp)
    sp.set_defaults(func=cmd_mutate_covered)

    sp = sub.add_parser("explore", help="breadth-first exploration of the mutation class")
    sp.add_argument("input")
    sp.add_argument("--max-depth", type=int, help="defaults to $QM_MAX_DEPTH or 8")
    sp.add_argument("--dot", action="store_true", help="emit the exchange graph as DOT")
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_explore)

    sp = sub.add_parser("catalog", help="finite-type catalog")
    sp.add_argument("action", choices=("list", "gen", "classify"))
    sp.add_argument("args", nargs="*", help="family [letter] for gen, a file for classify")
    sp.add_argument("--letter")
    sp.add_argument("--q", type=int)
    sp.add_argument("--ell", type=int)
    sp.add_argument("--stars", help="comma-separated star indices")
    sp.add_argument("--attachment", help="type-A attachment quiver file")
    sp.add_argument("--vertex", help="connecting vertex of the attachment")
    common(sp)
    sp.set_defaults(func=cmd_catalog)

    sp = sub.add_parser("tri", help="polygon triangulations")
    sp.add_argument("action", choices=("quiver", "invariant"))
    sp.add_argument("--ngon", type=int)
    sp.add_argument("--diagonals", help='e.g. "0-2,2-4,0-4"')
    sp.add_argument("--n", type=int)
    common(sp)
    sp.set_defaults(func=cmd_tri)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("suite", choices=("appendix", "palu", "e82-closure", "flips", "all"))
    sp.add_argument("--fixture", help="a9, ppa6, d6-cover or all")
    sp.add_argument("--max-ngon", type=int, default=8)
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("render", help="render a quiver as DOT or normalized JSON")
    sp.add_argument("input")
    sp.add_argument("--canonical", action="store_true", help="number nodes by canonical labeling")
    common(sp)
    sp.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except VerificationFailure as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VERIFY
    except (MutationError, CycleSpecError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (InputError, QuiverError, CoveringError, jsonschema.ValidationError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
