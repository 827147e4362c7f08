"""Command-line interface binding the toolkit to files and pipelines.

Inputs are recognized by extension: ``.hasse`` (covering relations),
``.seqs`` (learning sequences), ``.states`` (explicit family).  All
subcommands take ``--json`` for machine-readable output with a schema
version field.  Exit codes: 0 ok, 1 validation error, 2 parse error,
3 capacity exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .core import (
    CapacityError,
    LspaceError,
    ParseError,
    SetFamily,
    State,
    ValidationError,
    format_state_line,
    parse_states,
    serialize_states,
)
from .quasi_ordinal import HasseDiagram, parse_hasse, restrict, serialize_hasse
from .sequence_space import (
    SequenceSpace,
    fringes as seq_fringes,
    parse_seqs,
    project,
    serialize_seqs,
)
from .base_dimension import (
    SpaceLike,
    dimensions,
    enumerate_basic_words,
    family_of,
    minimize,
    _base_of,
)
from .adaptation import add_state, remove_state, space_fringe
from .assessment import (
    AssessmentConfig,
    ResponseLog,
    ResponseModel,
    assess,
    run_projection_assessment,
    simulated_student,
)
from .fibers_algebra import (
    GeneratorFamily,
    classify_elements,
    fiber,
    has_separated_equalizers,
    join,
    parse_semilattice,
    recognize_upper_subfamily,
    to_antimatroid,
    to_quasi_ordinal,
)

SCHEMA = 1


def load_space(path: str) -> SpaceLike:
    text = Path(path).read_text(encoding="utf-8")
    suffix = Path(path).suffix
    if suffix == ".hasse":
        return parse_hasse(text)
    if suffix == ".seqs":
        return parse_seqs(text)
    if suffix == ".states":
        return parse_states(text)
    raise ValidationError(f"unrecognized space file extension {suffix!r}")


def _sequence_space_of(space: SpaceLike) -> SequenceSpace:
    if isinstance(space, SequenceSpace):
        return space
    sp, _ = minimize(space)
    return sp


def _parse_state(space: SpaceLike, text: str) -> State:
    domain = family_of(space).domain if isinstance(space, SetFamily) else space.domain
    labels = [] if text in ("{}", "") else text.split(",")
    return domain.state(labels)


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.json:
        payload["schema"] = SCHEMA
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def cmd_states(args) -> int:
    space = load_space(args.input)
    fam = family_of(space)
    lines = [str(len(fam))]
    if args.print_states:
        lines += [format_state_line(s) for s in fam.states()]
    _emit(
        args,
        {"count": len(fam), "states": [format_state_line(s) for s in fam.states()]
         if args.print_states else None},
        lines,
    )
    return 0


def cmd_base(args) -> int:
    space = load_space(args.input)
    base = _base_of(space)
    fam = SetFamily(base.domain, base.sets)
    out = serialize_states(fam)
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    _emit(
        args,
        {"count": len(base), "sets": [format_state_line(s) for s in base.states()]},
        [str(len(base))] + [format_state_line(s) for s in base.states()],
    )
    return 0


def cmd_minimize(args) -> int:
    space = load_space(args.input)
    sp, dim_c = minimize(space)
    out = serialize_seqs(sp)
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    _emit(
        args,
        {"dim_c": dim_c, "sequences": [",".join(w) for w in sp.all_sequence_labels()]},
        [out.rstrip("\n")],
    )
    return 0


def cmd_dims(args) -> int:
    space = load_space(args.input)
    rep = dimensions(space)
    _emit(
        args,
        {
            "n": rep.n,
            "dim_b": rep.dim_b,
            "dim_c": rep.dim_c,
            "order_dim_is_2": rep.order_dim_is_2,
        },
        [
            f"n {rep.n}",
            f"dim_B {rep.dim_b}",
            f"dim_C {rep.dim_c}",
            f"order_dim_is_2 {str(rep.order_dim_is_2).lower()}",
        ],
    )
    return 0


def cmd_project(args) -> int:
    space = load_space(args.input)
    keep = args.keep.split(",")
    if isinstance(space, HasseDiagram):
        result = restrict(space, keep)
        out = serialize_hasse(result)
    else:
        sp = _sequence_space_of(space)
        result = project(sp, keep)
        out = serialize_seqs(result)
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    _emit(args, {"output": out}, [out.rstrip("\n")])
    return 0


def cmd_fringe(args) -> int:
    space = load_space(args.input)
    sp = _sequence_space_of(space)
    s = _parse_state(sp, args.state)
    inner, outer = seq_fringes(sp, s)
    _emit(
        args,
        {"inner": sorted(inner), "outer": sorted(outer)},
        ["inner " + (",".join(sorted(inner)) or "{}"),
         "outer " + (",".join(sorted(outer)) or "{}")],
    )
    return 0


def cmd_fringe_space(args) -> int:
    space = load_space(args.input)
    fr = space_fringe(space)
    removable = [format_state_line(s) for s in fr.removable.states()]
    addable = [format_state_line(s) for s in fr.addable.states()]
    _emit(
        args,
        {"removable": removable, "addable": addable},
        [f"removable {len(removable)}"]
        + removable
        + [f"addable {len(addable)}"]
        + addable,
    )
    return 0


def cmd_add_state(args) -> int:
    space = load_space(args.input)
    sp = add_state(space, _parse_state(space, args.state))
    out = serialize_seqs(sp)
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    _emit(args, {"sequences": [",".join(w) for w in sp.all_sequence_labels()]},
          [out.rstrip("\n")])
    return 0


def cmd_remove_state(args) -> int:
    space = load_space(args.input)
    sp = remove_state(space, _parse_state(space, args.state))
    out = serialize_seqs(sp)
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    _emit(args, {"sequences": [",".join(w) for w in sp.all_sequence_labels()]},
          [out.rstrip("\n")])
    return 0


def cmd_basic_words(args) -> int:
    space = load_space(args.input)
    words, truncated = enumerate_basic_words(space, limit=args.limit)
    lines = [",".join(w) for w in words]
    if truncated:
        lines.append("# truncated")
    _emit(args, {"words": [",".join(w) for w in words], "truncated": truncated}, lines)
    return 0


def cmd_assess(args) -> int:
    space = load_space(args.input)
    sp = _sequence_space_of(space)
    cfg = AssessmentConfig(
        model=ResponseModel(beta=args.beta, eta=args.eta),
        theta_lo=args.theta_lo,
        theta_hi=args.theta_hi,
        collection_size=args.collection_size,
        seed=args.seed,
    )
    if args.answers:
        entries = []
        for lineno, raw in enumerate(
            Path(args.answers).read_text(encoding="utf-8").splitlines(), start=1
        ):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2 or parts[1] not in ("0", "1"):
                raise ParseError("expected '<concept> <0|1>'", lineno)
            entries.append((parts[0], parts[1] == "1"))
        marg = assess(sp, ResponseLog(tuple(entries)), cfg)
        lines = [f"marginal {c} {p!r}" for c, p in marg.p.items()]
        _emit(args, {"marginals": marg.p}, lines)
        return 0
    if args.simulate is None:
        raise ValidationError("assess needs --answers FILE or --simulate SEED")
    true = _parse_state(sp, args.true_state) if args.true_state else sp.domain.full_state()
    student = simulated_student(true, cfg.model, args.simulate)
    result = run_projection_assessment(sp, student, cfg)
    if args.json:
        events = []
        for ev in result.transcript.events:
            if ev[0] == "final":
                events.append({"type": "final", "state": format_state_line(ev[1])})
            elif ev[0] == "marginal":
                events.append({"type": "marginal", "concept": ev[1], "p": ev[2]})
            else:
                events.append({"type": ev[0], "concept": ev[1],
                               **({"correct": ev[2]} if ev[0] == "answer" else {})})
        _emit(args, {
            "seed": args.simulate,
            "final": format_state_line(result.state),
            "questions_asked": result.questions_asked,
            "forced_termination": result.forced_termination,
            "transcript": events,
        }, [])
        return 0
    print(f"# seed {args.simulate}")
    sys.stdout.write(result.transcript.render())
    return 0


def cmd_fiber(args) -> int:
    space = load_space(args.input)
    fam = family_of(space)
    know = _parse_state(space, args.know)
    unknow = _parse_state(space, args.unknow)
    fib = fiber(fam, know, unknow)
    lines = [format_state_line(s) for s in fib.states()]
    _emit(args, {"states": lines}, [str(len(fib))] + lines)
    return 0


def cmd_recognize_upper(args) -> int:
    gen_family = parse_states(Path(args.input).read_text(encoding="utf-8"))
    gen = GeneratorFamily(gen_family.domain, tuple(gen_family.sorted_masks()))
    sp = recognize_upper_subfamily(gen)
    if sp is None:
        _emit(args, {"recognized": False}, ["not an upper subfamily"])
        return 0
    out = serialize_seqs(sp)
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    _emit(
        args,
        {"recognized": True,
         "sequences": [",".join(w) for w in sp.all_sequence_labels()]},
        [out.rstrip("\n")],
    )
    return 0


def cmd_join(args) -> int:
    a = _sequence_space_of(load_space(args.input_a))
    b = _sequence_space_of(load_space(args.input_b))
    sp = join(a, b)
    out = serialize_seqs(sp)
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    _emit(args, {"sequences": [",".join(w) for w in sp.all_sequence_labels()]},
          [out.rstrip("\n")])
    return 0


def cmd_semilattice(args) -> int:
    table = parse_semilattice(Path(args.input).read_text(encoding="utf-8"))
    if args.to_antimatroid:
        rep = to_antimatroid(table)
        lines = [f"antimatroid {str(rep.ok).lower()}"]
        lines += [format_state_line(s) for s in rep.family.states()]
        if not rep.ok:
            lines.append(f"witness {rep.witness[0]} {rep.witness[1]}")
        _emit(
            args,
            {
                "antimatroid": rep.ok,
                "sets": [format_state_line(s) for s in rep.family.states()],
                "witness": list(rep.witness) if rep.witness else None,
            },
            lines,
        )
        return 0
    if args.to_qos:
        rep = to_quasi_ordinal(table)
        if rep.ok:
            out = serialize_hasse(rep.diagram)
            _emit(args, {"quasi_ordinal": True, "hasse": out}, [out.rstrip("\n")])
        else:
            _emit(
                args,
                {"quasi_ordinal": False, "witness": rep.witness},
                [f"not quasi-ordinal; witness {rep.witness}"],
            )
        return 0
    ok, witness = has_separated_equalizers(table)
    classes = classify_elements(table)
    _emit(
        args,
        {
            "separated_equalizers": ok,
            "witness": list(witness) if witness else None,
            "irreducibles": list(classes.irreducibles),
            "primes": list(classes.primes),
            "singulars": list(classes.singulars),
        },
        [
            f"separated_equalizers {str(ok).lower()}"
            + (f" (witness {witness[0]} {witness[1]})" if witness else ""),
            "irreducibles " + " ".join(map(str, classes.irreducibles)),
            "primes " + " ".join(map(str, classes.primes)),
            "singulars " + " ".join(map(str, classes.singulars)),
        ],
    )
    return 0


def cmd_serve(args) -> int:
    from .service import run_server

    run_server(port=args.port, persist=args.persist, static_dir=args.static)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lspace", description="learning-space toolkit"
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    p = add("states", cmd_states, help="enumerate the states of a space")
    p.add_argument("input")
    p.add_argument("--print", dest="print_states", action="store_true")

    p = add("base", cmd_base, help="base sets of a space")
    p.add_argument("input")
    p.add_argument("-o", "--output")

    p = add("minimize", cmd_minimize, help="minimum defining sequence set")
    p.add_argument("input")
    p.add_argument("-o", "--output")

    p = add("dims", cmd_dims, help="dimension report")
    p.add_argument("input")

    p = add("project", cmd_project, help="project onto a concept subset")
    p.add_argument("input")
    p.add_argument("--keep", required=True, help="comma-separated concepts")
    p.add_argument("-o", "--output")

    p = add("fringe", cmd_fringe, help="inner/outer fringe of a state")
    p.add_argument("input")
    p.add_argument("--state", required=True, help="comma-separated concepts or {}")

    p = add("fringe-space", cmd_fringe_space, help="removable/addable states")
    p.add_argument("input")

    p = add("add-state", cmd_add_state, help="add a state and re-minimize")
    p.add_argument("input")
    p.add_argument("--state", required=True)
    p.add_argument("-o", "--output")

    p = add("remove-state", cmd_remove_state, help="remove a state and re-minimize")
    p.add_argument("input")
    p.add_argument("--state", required=True)
    p.add_argument("-o", "--output")

    p = add("basic-words", cmd_basic_words, help="all learning sequences (desk scale)")
    p.add_argument("input")
    p.add_argument("--limit", type=int, default=None)

    p = add("assess", cmd_assess, help="marginals for a log, or a simulated run")
    p.add_argument("input")
    p.add_argument("--answers", help="file of '<concept> <0|1>' lines")
    p.add_argument("--simulate", type=int, default=None, metavar="SEED")
    p.add_argument("--true-state", default=None)
    p.add_argument("--beta", type=float, default=0.1)
    p.add_argument("--eta", type=float, default=0.01)
    p.add_argument("--theta-lo", type=float, default=0.2)
    p.add_argument("--theta-hi", type=float, default=0.8)
    p.add_argument("--collection-size", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)

    p = add("fiber", cmd_fiber, help="states containing K and avoiding U")
    p.add_argument("input")
    p.add_argument("--know", default="{}")
    p.add_argument("--unknow", default="{}")

    p = add("recognize-upper", cmd_recognize_upper,
            help="is the union closure of these sets an upper subfamily?")
    p.add_argument("input")
    p.add_argument("-o", "--output")

    p = add("join", cmd_join, help="join of two spaces on one domain")
    p.add_argument("input_a")
    p.add_argument("input_b")
    p.add_argument("-o", "--output")

    p = add("semilattice", cmd_semilattice, help="semilattice algebra checks")
    p.add_argument("input")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--check", action="store_true", default=True)
    group.add_argument("--to-antimatroid", action="store_true")
    group.add_argument("--to-qos", action="store_true")

    p = add("serve", cmd_serve, help="run the HTTP session service")
    p.add_argument("--port", type=int, default=8431)
    p.add_argument("--persist", default=None)
    p.add_argument("--static", default=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3
    except (ValidationError, LspaceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
