"""Command-line interface.

Subcommands build codes, decode syndromes, run Monte Carlo sweeps, fit
thresholds from CSV results, and run the built-in verification battery.
Exit codes: 0 on success, 1 on usage errors, 2 when verification fails.
"""

from __future__ import annotations

import argparse
import json
import sys

from .decoder import NoiseModel, OpCounter, decode, likelihoods_network
from .harness import (
    fit_threshold,
    read_points,
    run_mc,
    write_points,
)
from .holographic import build_layout, predicted_op_count, schedule_for
from .oracle import ExhaustiveDecoder, exhaustive_contract
from .stabilizer import (
    StabilizerCode,
    Syndrome,
    code_from_json_dict,
    code_to_json_dict,
    six_qubit_code,
    seven_qubit_state,
)
from .tensor import CodeTensor, LegBinding, contract


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 1 on usage errors
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _builtin_code(name: str) -> StabilizerCode:
    if name == "six_qubit":
        return six_qubit_code()
    if name == "seven_qubit_state":
        return seven_qubit_state()
    raise ValueError(f"unknown builtin code {name!r}")


def _layout_sidecar(layout) -> dict:
    return {
        "radius": layout.radius,
        "n": layout.n,
        "boundary": [[name, leg] for name, leg in layout.boundary],
        "nodes": {
            name: {
                "kind": node.kind,
                "layer": node.layer,
                "in_links": [list(link) for link in node.in_links],
                "children": [list(link) for link in node.children],
                "leaf_legs": list(node.leaf_legs),
            }
            for name, node in layout.nodes.items()
        },
    }


def _cmd_build_code(args) -> int:
    if args.holographic:
        layout = build_layout(args.radius)
        payload = code_to_json_dict(layout.code)
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(payload, fh, indent=1)
                fh.write("\n")
            sidecar = args.out.rsplit(".", 1)[0] + ".layout.json"
            with open(sidecar, "w") as fh:
                json.dump(_layout_sidecar(layout), fh, indent=1)
                fh.write("\n")
            print(f"wrote {args.out} and {sidecar}")
        else:
            json.dump(payload, sys.stdout, indent=1)
            print()
        return 0
    code = _builtin_code(args.builtin)
    payload = code_to_json_dict(code)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")
        print(f"wrote {args.out}")
    else:
        json.dump(payload, sys.stdout, indent=1)
        print()
    return 0


def _parse_syndrome(text: str, length: int) -> Syndrome:
    if set(text) <= {"+", "-"} and text:
        if len(text) != length:
            raise ValueError(
                f"syndrome has {len(text)} signs but the code expects {length}"
            )
        return Syndrome.from_text(text)
    bits = int(text, 0)
    if bits < 0 or bits >> length:
        raise ValueError(f"syndrome value {text} out of range for {length} bits")
    return Syndrome(length, bits)


def _cmd_decode(args) -> int:
    if args.holographic:
        layout = build_layout(args.radius)
    else:
        with open(args.code) as fh:
            code = code_from_json_dict(json.load(fh))
        if code.n == 6 and code.k == 1:
            layout = build_layout(1)
            if layout.code.stabilizers != code.stabilizers:
                raise ValueError("only the built-in six-qubit code decodes directly")
        else:
            raise ValueError(
                "decoding arbitrary code files is not supported; "
                "use --holographic with a radius"
            )
    code = layout.code
    syndrome = _parse_syndrome(args.syndrome, code.n - code.k)
    noise = NoiseModel.depolarizing(code.n, args.p)
    schedule = schedule_for(layout)
    result = decode(layout, schedule, noise, syndrome)
    table = result.table
    print(f"syndrome: {syndrome.to_text()}")
    print(f"log_scale: {table.log_scale!r}")
    for label, share in table.normalized().items():
        name = label.to_text() if not label.is_identity() else "I"
        print(f"class {name}: {share!r}")
    print(f"argmax: {result.label.to_text()}")
    print(f"correction: {result.correction.to_text()}")
    return 0


def _read_config(path: str) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {raw.rstrip()}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def _cmd_mc_run(args) -> int:
    settings: dict[str, str] = {}
    if args.config:
        settings = _read_config(args.config)
    radius = args.radius if args.radius is not None else int(settings.get("radius", 0))
    if radius < 1:
        raise ValueError("a radius of at least 1 is required (flag or config)")
    p_text = args.p if args.p is not None else settings.get("p")
    if not p_text:
        raise ValueError("a comma-separated p list is required (flag or config)")
    ps = [float(tok) for tok in p_text.split(",") if tok]
    trials = args.trials if args.trials is not None else int(settings.get("trials", 0))
    if trials < 1:
        raise ValueError("a positive trial count is required (flag or config)")
    seed = args.seed if args.seed is not None else int(settings.get("seed", 0))
    workers = args.workers if args.workers is not None else int(
        settings.get("workers", 1)
    )
    out = args.out or settings.get("out")

    layout = build_layout(radius)
    schedule = schedule_for(layout)
    points = run_mc(layout, schedule, ps, trials, seed=seed, workers=workers)
    if out:
        write_points(out, points)
        print(f"wrote {out}")
    for pt in points:
        print(
            f"radius {pt.radius} n {pt.n} p {pt.p!r}: "
            f"{pt.failures}/{pt.trials} failed "
            f"(rate {pt.failure_rate!r} +- {pt.std_err!r})"
        )
    return 0


def _cmd_fit_threshold(args) -> int:
    points = []
    for path in args.csv:
        points.extend(read_points(path))
    fit = fit_threshold(points)
    payload = {
        "p_th": fit.p_th,
        "nu": fit.nu,
        "coeffs": list(fit.coeffs),
        "rss": fit.rss,
    }
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")
        print(f"wrote {args.out}")
    else:
        json.dump(payload, sys.stdout, indent=1)
        print()
    return 0


def _cmd_verify(args) -> int:
    failures = []

    def check(name: str, ok: bool, detail: str = "") -> None:
        status = "ok" if ok else "FAIL"
        line = f"{status:4s} {name}"
        if detail and not ok:
            line += f" ({detail})"
        print(line)
        if not ok:
            failures.append(name)

    code = six_qubit_code()
    tensor = CodeTensor.from_code(code)
    report = tensor.self_check()
    check("six-qubit class listings", report.passed,
          "; ".join(report.violations[:3]))

    layout = build_layout(1)
    schedule = schedule_for(layout)
    noise = NoiseModel.depolarizing(6, 0.1)
    oracle = ExhaustiveDecoder(code)
    worst = 0.0
    for bits in range(32):
        syndrome = Syndrome(5, bits)
        net = likelihoods_network(layout, schedule, noise, syndrome)
        ref = oracle.likelihoods(noise, syndrome)
        for label in net.labels:
            got = net.absolute(label)
            want = ref.absolute(label)
            worst = max(worst, abs(got - want) / max(abs(want), 1e-300))
    check("network likelihoods match enumeration", worst <= 1e-10,
          f"worst relative error {worst:.3e}")

    t0 = CodeTensor.from_code(seven_qubit_state())
    binding = LegBinding((5,), (0,))
    built = contract(tensor, t0, binding)
    ref = exhaustive_contract(code, seven_qubit_state(), binding)
    same = built.class_tables == ref.classes
    check("contraction matches brute-force sum", same)

    r2 = build_layout(2)
    observed: dict[str, tuple[int, int]] = {}
    sched2 = schedule_for(r2)
    noise2 = NoiseModel.depolarizing(r2.n, 0.1)
    likelihoods_network(r2, sched2, noise2, bond_observer=observed)
    bonds_ok = all(dims == (1, 1) for dims in observed.values())
    counter = OpCounter()
    likelihoods_network(r2, sched2, noise2, counter=counter)
    bound = predicted_op_count(r2)
    check("radius-2 bond dims and work bound",
          bonds_ok and counter.total <= bound,
          f"bonds {observed}, {counter.total} > {bound}")

    if failures:
        print(f"{len(failures)} verification check(s) failed")
        return 2
    print("all verification checks passed")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _Parser(prog="tenqec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build-code", help="emit a code as JSON")
    p_build.add_argument("--builtin", choices=["six_qubit", "seven_qubit_state"],
                         help="one of the built-in small codes")
    p_build.add_argument("--holographic", action="store_true",
                         help="build the nested-ring code instead")
    p_build.add_argument("--radius", type=int, default=2)
    p_build.add_argument("--out", help="output JSON path (default stdout)")
    p_build.set_defaults(func=_cmd_build_code)

    p_dec = sub.add_parser("decode", help="decode one syndrome")
    p_dec.add_argument("--code", help="code JSON (six-qubit only)")
    p_dec.add_argument("--holographic", action="store_true")
    p_dec.add_argument("--radius", type=int, default=2)
    p_dec.add_argument("--syndrome", required=True,
                       help="sign string like '+-+..' or an integer")
    p_dec.add_argument("--p", type=float, required=True,
                       help="depolarizing strength")
    p_dec.set_defaults(func=_cmd_decode)

    p_mc = sub.add_parser("mc-run", help="Monte Carlo failure-rate sweep")
    p_mc.add_argument("--radius", type=int)
    p_mc.add_argument("--p", help="comma-separated depolarizing strengths")
    p_mc.add_argument("--trials", type=int)
    p_mc.add_argument("--seed", type=int)
    p_mc.add_argument("--workers", type=int)
    p_mc.add_argument("--out", help="CSV output path")
    p_mc.add_argument("--config", help="key=value file; flags win")
    p_mc.set_defaults(func=_cmd_mc_run)

    p_fit = sub.add_parser("fit-threshold", help="fit a threshold from CSVs")
    p_fit.add_argument("csv", nargs="+", help="CSV files from mc-run")
    p_fit.add_argument("--out", help="JSON output path (default stdout)")
    p_fit.set_defaults(func=_cmd_fit_threshold)

    p_ver = sub.add_parser("verify", help="run built-in cross-checks")
    p_ver.set_defaults(func=_cmd_verify)

    args = parser.parse_args(argv)
    if args.command == "build-code" and not args.holographic and not args.builtin:
        parser.error("build-code needs --builtin or --holographic")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
