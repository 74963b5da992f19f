"""Command-line interface: generation, verification, correlation, rendering,
and watermark embed/extract. All outputs are deterministic for identical
inputs. Exit codes: 0 success, 1 validation error, 2 verification failure."""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

from . import arrays, correlation, images, legendre, watermark
from .family import build_family, build_member
from .fields import Poly

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; this tool reserves 2 for verification
    # failures, so remap parse errors to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_field_args(sub, with_a=False):
    sub.add_argument("--p", type=int, required=True, help="odd prime modulus")
    sub.add_argument("--n", type=int, default=1, help="array dimension (default 1)")
    if with_a:
        sub.add_argument(
            "--a", type=int, default=0, choices=(-1, 0, 1), help="origin value (default 0)"
        )
    sub.add_argument(
        "--poly",
        type=str,
        default=None,
        help="primitive polynomial, comma-separated coefficients constant term "
        "first (e.g. 2,4,1 = x^2+4x+2); defaults to the smallest one",
    )


def _params_from(args, a=0) -> legendre.LegendreParams:
    poly = Poly.parse(args.poly, args.p) if args.poly else None
    return legendre.LegendreParams(p=args.p, n=args.n, a=a, poly=poly).resolve()


def _write_text(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _load_array(path: str):
    return arrays.deserialize(Path(path).read_text(encoding="utf-8"))


def _print_json(obj, out: str | None = None):
    _write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", out)


def _cmd_gen_legendre(args) -> int:
    params = _params_from(args, a=args.a)
    arr = legendre.legendre_array(params)
    _write_text(arrays.serialize(arr), args.out)
    return EXIT_OK


def _cmd_gen_family(args) -> int:
    params = _params_from(args)
    base = legendre.legendre_array(params)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    indices = range(params.p) if args.m is None else [args.m]
    for m in indices:
        member = build_member(base, m, params)
        (out_dir / f"S_{m}.nda").write_text(arrays.serialize(member.arr), encoding="utf-8")
    return EXIT_OK


def _cmd_corr(args) -> int:
    a = _load_array(args.a)
    b = _load_array(args.b)
    fn = correlation.full_correlation_fast if args.fast else correlation.full_correlation
    _write_text(arrays.serialize(fn(a, b)), args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    params = _params_from(args)
    base = legendre.legendre_array(params)
    family = build_family(base, params)
    method = "fast" if args.fast else "naive"
    auto = [correlation.verify_autocorrelation(mem, method=method) for mem in family]
    cross = [
        correlation.verify_cross_correlation(family[i], family[j], method=method)
        for i, j in itertools.combinations(range(params.p), 2)
    ]
    metrics = correlation.welch_metrics(params.p, params.n)
    passed = all(r.passed for r in auto) and all(r.passed for r in cross)
    report = {
        "p": params.p,
        "n": params.n,
        "poly": params.poly.format() if params.poly else None,
        "theorem1": [r.to_json_dict() for r in auto],
        "theorem2": [r.to_json_dict() for r in cross],
        "m_zero_passed": auto[0].passed,
        "welch": metrics.to_json_dict(),
        "passed": passed,
    }
    _print_json(report, args.out)
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


def _cmd_welch(args) -> int:
    m = correlation.welch_metrics(args.p, args.n)
    q = args.p**args.n
    print(f"nonzero entries per member: {m.nonzero_count}")
    print(
        f"bound-to-peak ratio: {q + 1}/{m.nonzero_count}"
        f" = {m.bound_to_peak_ratio} ({float(m.bound_to_peak_ratio):.6g})"
    )
    print(f"benchmark ratio: {q}/{q * q} = {m.welch_ratio} ({float(m.welch_ratio):.6g})")
    print(
        f"relative difference: {m.relative_difference}"
        f" ({float(m.relative_difference):.6g})"
    )
    return EXIT_OK


def _cmd_flatten(args) -> int:
    arr = _load_array(args.input)
    _write_text(arrays.serialize(watermark.flatten(arr)), args.out)
    return EXIT_OK


def _cmd_render(args) -> int:
    arr = _load_array(args.input)
    if arr.rank > 2:
        arr = watermark.flatten(arr)
    img = arrays.render(arr, scale=args.scale)
    Path(args.out).write_bytes(images.write_pgm(img))
    return EXIT_OK


def _parse_shifts(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ValueError(f"bad shift list {text!r}") from None


def _cmd_embed(args) -> int:
    params = _params_from(args)
    base = legendre.legendre_array(params)
    member = build_member(base, args.m, params)
    payload = watermark.Payload(m=args.m, shifts=_parse_shifts(args.shifts))
    img = images.read_pgm(Path(args.image).read_bytes())
    marked = watermark.embed(img, member, payload, watermark.EmbedConfig(args.strength))
    Path(args.out).write_bytes(images.write_pgm(marked))
    return EXIT_OK


def _cmd_extract(args) -> int:
    params = _params_from(args)
    base = legendre.legendre_array(params)
    family = build_family(base, params)
    img = images.read_pgm(Path(args.image).read_bytes())
    result = watermark.extract(img, family, snr_threshold=args.snr_threshold)
    _print_json(result.to_json_dict())
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="legarray", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("gen-legendre", help="generate a Legendre sequence/array as NDA1")
    _add_field_args(s, with_a=True)
    s.add_argument("--out", default=None, help="output path (default stdout)")
    s.set_defaults(fn=_cmd_gen_legendre)

    s = sub.add_parser("gen-family", help="generate family members as NDA1 files")
    _add_field_args(s)
    s.add_argument("--m", type=int, default=None, help="single member index (default: all)")
    s.add_argument("--out", required=True, help="output directory")
    s.set_defaults(fn=_cmd_gen_family)

    s = sub.add_parser("corr", help="full periodic correlation table of two arrays")
    s.add_argument("a", help="first NDA1 file")
    s.add_argument("b", help="second NDA1 file")
    s.add_argument("--fast", action="store_true", help="use the FFT path")
    s.add_argument("--out", required=True, help="output NDA1 path ('-' for stdout)")
    s.set_defaults(fn=_cmd_corr)

    s = sub.add_parser("verify", help="check correlation bounds for a whole family")
    _add_field_args(s)
    s.add_argument("--fast", action="store_true", help="use the FFT path")
    s.add_argument("--out", default=None, help="also write the JSON report here")
    s.set_defaults(fn=_cmd_verify)

    s = sub.add_parser("welch", help="exact bound-to-peak ratio versus the benchmark")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(fn=_cmd_welch)

    s = sub.add_parser("flatten", help="fold an even-rank NDA1 array to rank 2")
    s.add_argument("input", help="input NDA1 file")
    s.add_argument("--out", required=True, help="output NDA1 path ('-' for stdout)")
    s.set_defaults(fn=_cmd_flatten)

    s = sub.add_parser("render", help="render a (flattened) array to PGM")
    s.add_argument("input", help="input NDA1 file")
    s.add_argument("--out", required=True, help="output PGM path")
    s.add_argument("--scale", type=int, default=1, help="integer upscaling factor")
    s.set_defaults(fn=_cmd_render)

    s = sub.add_parser("embed", help="embed a watermark payload into a PGM image")
    s.add_argument("--image", required=True, help="carrier PGM (P5 or P2)")
    _add_field_args(s)
    s.add_argument("--m", type=int, required=True, help="family member index")
    s.add_argument("--shifts", required=True, help="comma-separated cyclic shifts")
    s.add_argument("--strength", type=int, default=3, help="additive amplitude (default 3)")
    s.add_argument("--out", required=True, help="marked PGM path")
    s.set_defaults(fn=_cmd_embed)

    s = sub.add_parser("extract", help="recover a watermark payload from a PGM image")
    s.add_argument("--image", required=True, help="marked PGM (P5 or P2)")
    _add_field_args(s)
    s.add_argument(
        "--snr-threshold",
        type=float,
        default=watermark.DEFAULT_SNR_THRESHOLD,
        help="confidence threshold on peak/off-peak RMS (default 4.0)",
    )
    s.set_defaults(fn=_cmd_extract)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return args.fn(args)
    except (ValueError, OSError, correlation.PrecisionError) as e:
        print(f"legarray: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
