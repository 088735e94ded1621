"""Command-line front end.

Exit codes: 0 success / verification passed, 1 verification failed, 2 usage or
input-format error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from .core import PureState, RegisterShape, fidelity_pure, random_state
from .gates import BellLabel
from .maskers import MaskScheme, NotInRangeError, SchemeId, mask, unmask_four_heavy, unmask
from .teleport import teleport
from .verify import DEFAULT_TOL, marginal_distances, masking_report, no_masking_demo

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
NORM_TOL = 1e-6
SCHEMES = [s.value for s in SchemeId]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---- (de)serialization -------------------------------------------------


def parse_amplitudes(text: str) -> np.ndarray:
    """``"re,im;re,im;..."``; a bare ``re`` means zero imaginary part."""
    out = []
    for chunk in text.strip().split(";"):
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) not in (1, 2) or not all(parts):
            raise UsageError(f"malformed amplitude {chunk!r}; expected 're,im'")
        try:
            re_, im = float(parts[0]), float(parts[1]) if len(parts) == 2 else 0.0
        except ValueError:
            raise UsageError(f"malformed amplitude {chunk!r}") from None
        if not (math.isfinite(re_) and math.isfinite(im)):
            raise UsageError(f"non-finite amplitude {chunk!r}")
        out.append(complex(re_, im))
    return np.array(out, dtype=complex)


def encode_amplitudes(amp: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in amp]


def decode_amplitudes(pairs) -> np.ndarray:
    try:
        arr = np.array([complex(float(re_), float(im)) for re_, im in pairs], dtype=complex)
    except (TypeError, ValueError):
        raise UsageError("amplitudes must be a list of [re, im] pairs") from None
    if not np.all(np.isfinite(arr)):
        raise UsageError("amplitudes must be finite")
    return arr


def state_to_json(state: PureState) -> dict:
    return {"shape": list(state.dims), "amplitudes": encode_amplitudes(state.amp)}


def _checked_state(dims: Sequence[int], amp: np.ndarray, normalize: bool) -> PureState:
    shape = RegisterShape(tuple(dims))
    if amp.size != shape.size:
        raise UsageError(f"expected {shape.size} amplitudes, got {amp.size}")
    nrm = float(np.linalg.norm(amp))
    if nrm == 0:
        raise UsageError("zero state vector")
    if abs(nrm - 1.0) > NORM_TOL and not normalize:
        raise UsageError(f"state norm {nrm:.9g} deviates from 1 (pass --normalize to rescale)")
    return PureState(shape, amp / nrm)


def _input_state(args) -> PureState:
    if args.state is not None:
        return _checked_state((args.d,), parse_amplitudes(args.state), args.normalize)
    return random_state((args.d,), np.random.default_rng(args.seed))


def _scheme(args) -> MaskScheme:
    try:
        return MaskScheme(SchemeId(args.scheme), args.d)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_label(text: str, d: int) -> BellLabel:
    try:
        k, l = (int(x) for x in text.split(","))
        return BellLabel(k, l, d)
    except ValueError:
        raise UsageError(f"--force-outcome expects 'K,L' with 0 <= K,L < {d}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False)


def _fmt_state(state: PureState, cutoff: float = 1e-12) -> str:
    lines = []
    for flat in np.flatnonzero(np.abs(state.amp) > cutoff):
        idx = np.unravel_index(flat, state.dims)
        ket = "".join(str(int(i)) if n <= 10 else f"({int(i)})" for i, n in zip(idx, state.dims))
        z = state.amp[flat]
        lines.append(f"  |{ket}>  {z.real:+.10f} {z.imag:+.10f}j")
    return "\n".join(lines)


# ---- subcommands -------------------------------------------------------


def cmd_mask(args, out) -> int:
    scheme = _scheme(args)
    x = _input_state(args)
    masked = mask(scheme, x)
    dists = marginal_distances(scheme, masked)
    payload = state_to_json(masked)
    payload["provenance"] = {
        "scheme": scheme.id.value,
        "d": scheme.d,
        "input": encode_amplitudes(x.amp),
    }
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(_dump(payload) + "\n")
    if args.json:
        payload["marginals"] = [{"site": s, "trace_distance": v} for s, v in dists.items()]
        print(_dump(payload), file=out)
    else:
        print(f"scheme {scheme.id.value}, d={scheme.d}, register {list(masked.dims)}", file=out)
        print("masked state:", file=out)
        print(_fmt_state(masked), file=out)
        for pos, (site, v) in enumerate(dists.items()):
            print(f"site {site}: trace distance to I/{masked.dims[pos]} = {v:.3e}", file=out)
    return EXIT_OK


def cmd_unmask(args, out) -> int:
    scheme = _scheme(args)
    try:
        with open(args.infile) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {args.infile}: {exc}") from None
    if not isinstance(data, dict) or "shape" not in data or "amplitudes" not in data:
        raise UsageError("masked-state file needs 'shape' and 'amplitudes'")
    if tuple(data["shape"]) != scheme.output_shape.dims:
        raise UsageError(f"file register {data['shape']} does not match scheme {scheme.id.value}")
    masked = _checked_state(data["shape"], decode_amplitudes(data["amplitudes"]), args.normalize)
    record = None
    try:
        if scheme.id is SchemeId.FOUR_HEAVY:
            force = None if args.force_outcome is None else _parse_label(args.force_outcome, scheme.d).index
            recovered, record = unmask_four_heavy(masked, np.random.default_rng(args.seed), force=force)
        else:
            recovered = unmask(scheme, masked)
    except NotInRangeError as exc:
        print(f"unmask failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    original = (data.get("provenance") or {}).get("input")
    fid = None
    if original is not None:
        orig = _checked_state((scheme.d,), decode_amplitudes(original), True)
        fid = fidelity_pure(recovered, orig)
    result = {"recovered": encode_amplitudes(recovered.amp), "fidelity": fid}
    if record is not None:
        lab = BellLabel.from_index(scheme.d, record.outcome)
        result["apparatus_outcome"] = {"nu": record.outcome, "k": lab.k, "l": lab.l,
                                       "probability": record.probability}
    if args.json:
        print(_dump(result), file=out)
    else:
        print("recovered state:", file=out)
        print(_fmt_state(recovered), file=out)
        if record is not None:
            print(f"apparatus outcome {record.outcome} (p={record.probability:.12g})", file=out)
        print(f"fidelity with original: {'n/a' if fid is None else f'{fid:.15f}'}", file=out)
    return EXIT_OK


def cmd_teleport(args, out) -> int:
    x = _input_state(args)
    force = None if args.force_outcome is None else _parse_label(args.force_outcome, args.d)
    received, label, prob = teleport(
        args.d, x, rng=np.random.default_rng(args.seed), force=force
    )
    fid = fidelity_pure(received, x)
    if args.json:
        print(_dump({
            "d": args.d,
            "outcome": {"k": label.k, "l": label.l},
            "probability": prob,
            "received": encode_amplitudes(received.amp),
            "fidelity": fid,
        }), file=out)
    else:
        print(f"Bell outcome (k, l) = ({label.k}, {label.l}), probability {prob:.12g}", file=out)
        print("received state:", file=out)
        print(_fmt_state(received), file=out)
        print(f"fidelity with input: {fid:.15f}", file=out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    if args.target == "demo-no-masking":
        report = no_masking_demo()
    else:
        if args.scheme is None or args.d is None:
            raise UsageError("verify needs --scheme and -d (or the demo-no-masking target)")
        if args.trials < 1 or not args.tol > 0:
            raise UsageError("--trials must be >= 1 and --tol positive")
        report = masking_report(_scheme(args), args.trials, args.seed, args.tol)
    if args.json:
        print(_dump(report.to_dict()), file=out)
    else:
        print(f"scheme {report.scheme}, d={report.d}, trials={report.trials}, seed={report.seed}",
              file=out)
        for site, dist in report.per_site_max_trace_distance.items():
            print(f"site {site}: max trace distance to maximally mixed = {dist:.3e}", file=out)
        print(f"min recovery fidelity: {report.recovery_min_fidelity:.15f}", file=out)
        if report.notes:
            print(f"notes: {report.notes}", file=out)
        print("PASS" if report.passed else "FAIL", file=out)
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qmask", description="Qudit masking, unmasking and teleportation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_input(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--state", help="amplitudes 're,im;re,im;...'")
        g.add_argument("--random", action="store_true", help="Haar-random input from --seed")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--normalize", action="store_true",
                        help="rescale inputs whose norm is off by more than 1e-6")

    m = sub.add_parser("mask", help="mask a state and print its marginals")
    m.add_argument("--scheme", required=True, choices=SCHEMES)
    m.add_argument("-d", type=int, required=True)
    add_input(m)
    m.add_argument("--out", help="write the masked-state JSON file here")
    m.add_argument("--json", action="store_true")
    m.set_defaults(func=cmd_mask)

    u = sub.add_parser("unmask", help="recover the input from a masked-state file")
    u.add_argument("--scheme", required=True, choices=SCHEMES)
    u.add_argument("-d", type=int, required=True)
    u.add_argument("--in", dest="infile", required=True)
    u.add_argument("--seed", type=int, default=0, help="apparatus measurement seed (four-heavy)")
    u.add_argument("--force-outcome", help="K,L apparatus outcome (four-heavy)")
    u.add_argument("--normalize", action="store_true")
    u.add_argument("--json", action="store_true")
    u.set_defaults(func=cmd_unmask)

    t = sub.add_parser("teleport", help="teleport a qudit state")
    t.add_argument("-d", type=int, required=True)
    add_input(t)
    t.add_argument("--force-outcome", help="K,L Bell outcome to condition on")
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_teleport)

    v = sub.add_parser("verify", help="run the masking checks")
    v.add_argument("target", nargs="?", choices=["demo-no-masking"])
    v.add_argument("--scheme", choices=SCHEMES)
    v.add_argument("-d", type=int)
    v.add_argument("--trials", type=int, default=50)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=DEFAULT_TOL)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)
    return p


def run_command(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except (UsageError, ValueError) as exc:
        print(f"qmask: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
