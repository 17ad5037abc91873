"""Command-line client for the soundset service.

The CLI is a thin HTTP client: it reads local files, ships them to the
service as base64 payloads, and writes the returned artifacts back to disk.
By default it drives an in-process instance of the app, so no server needs
to be running; pass --server to talk to a remote one.

Exit codes: 0 success, 1 data error (decode failure, degenerate signal,
unreadable file), 2 usage error. Failures print one machine-parsable line on
stderr: `error: <Kind>: <message>`.
"""
from __future__ import annotations

import argparse
import base64
import json
import sys
import warnings
from pathlib import Path

import httpx

from . import __version__
from .service import create_app

_USAGE_EXIT = 2
_DATA_EXIT = 1


class CliError(Exception):
    def __init__(self, kind: str, message: str, exit_code: int = _DATA_EXIT):
        super().__init__(f"{kind}: {message}")
        self.kind = kind
        self.message = message
        self.exit_code = exit_code


def _make_client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server)
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message=".*httpx2.*")
        from fastapi.testclient import TestClient

        return TestClient(create_app())


def _post(client: httpx.Client, endpoint: str, payload: dict) -> dict:
    try:
        resp = client.post(endpoint, json=payload)
    except httpx.HTTPError as exc:
        raise CliError("ConnectionFailure", str(exc))
    if resp.status_code == 200:
        return resp.json()
    if resp.status_code == 400:
        body = resp.json()
        raise CliError(body.get("error", "DataError"), body.get("message", ""))
    if resp.status_code == 422:
        detail = resp.json().get("detail", [])
        first = detail[0] if detail else {}
        loc = ".".join(str(x) for x in first.get("loc", []) if x != "body")
        raise CliError("UsageError", f"{loc}: {first.get('msg', 'invalid request')}", _USAGE_EXIT)
    raise CliError("ServiceError", f"HTTP {resp.status_code}")


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError("IoFailure", f"cannot read '{path}': {exc.strerror or exc}")


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError("IoFailure", f"cannot read '{path}': {exc.strerror or exc}")


def _write_bytes(path: str, data: bytes) -> None:
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise CliError("IoFailure", f"cannot write '{path}': {exc.strerror or exc}")


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliError("IoFailure", f"cannot write '{path}': {exc.strerror or exc}")


def _b64_file(path: str) -> str:
    return base64.b64encode(_read_bytes(path)).decode("ascii")


def _emit_report(report: dict, json_path: str | None = None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if json_path:
        _write_text(json_path, text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="soundset",
        description="Audio set algebra with self-affine complexity analysis",
    )
    parser.add_argument("--version", action="version", version=f"soundset {__version__}")
    parser.add_argument("--server", help="remote service URL (default: run in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="estimate Hurst exponents of a WAV (or ASCII) series")
    p.add_argument("wav", help="input file")
    p.add_argument("--ascii", action="store_true", help="input holds ASCII amplitudes, one per line")
    p.add_argument("--min-lag", type=int, default=1, help="smallest variogram lag in samples")
    p.add_argument("--max-lag-frac", type=float, default=0.25, help="largest lag as a fraction of the series")
    p.add_argument("--json", dest="json_path", help="write the report here instead of stdout")

    p = sub.add_parser("combine", help="apply a set operation to two gestures")
    p.add_argument("--op", required=True, choices=["union", "intersect", "fuzzy-union", "fuzzy-intersect"])
    p.add_argument("a", help="first WAV file")
    p.add_argument("b", help="second WAV file")
    p.add_argument("--offset", type=int, default=0, help="intersect: b's start relative to a, in samples")
    p.add_argument("-o", "--out", help="write the combined WAV here")
    p.add_argument("--analyze", action="store_true", help="run the estimator suite on the result")

    p = sub.add_parser("recurrence", help="recurrence plot of a delay-embedded WAV")
    p.add_argument("wav", help="input WAV file")
    p.add_argument("--dim", type=int, default=2, help="embedding dimension")
    p.add_argument("--delay", type=int, default=1, help="embedding delay in (decimated) samples")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--rate", type=float, help="target recurrence rate (default 0.1)")
    mode.add_argument("--epsilon", type=float, help="fixed distance threshold")
    p.add_argument("--max-points", type=int, default=8192, help="refuse more embedded points than this")
    p.add_argument("--decimate", type=int, default=1, help="keep every k-th sample before embedding")
    p.add_argument("-o", "--out", required=True, help="write the PGM plot here")

    p = sub.add_parser("synth", help="generate deterministic fixture signals")
    kinds = p.add_subparsers(dest="kind", required=True)
    k = kinds.add_parser("fbm", help="fractional Brownian motion, peak-normalized to 0.9")
    k.add_argument("--hurst", type=float, required=True)
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--rate", type=int, default=44100)
    k.add_argument("--ascii", action="store_true", help="write ASCII amplitudes instead of WAV")
    k.add_argument("-o", "--out", required=True)
    k = kinds.add_parser("burst", help="white-noise burst under an exponential decay envelope")
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--decay", type=float, required=True)
    k.add_argument("--rate", type=int, default=44100)
    k.add_argument("--ascii", action="store_true")
    k.add_argument("-o", "--out", required=True)
    k = kinds.add_parser("sine", help="pure tone")
    k.add_argument("--freq", type=float, required=True)
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--rate", type=int, default=44100)
    k.add_argument("--amplitude", type=float, default=0.9)
    k.add_argument("--ascii", action="store_true")
    k.add_argument("-o", "--out", required=True)

    p = sub.add_parser("grid", help="evolve a CA trigger grid and render it")
    p.add_argument("--rule", type=int, required=True, help="elementary CA rule number, 0-255")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--step", type=int, required=True, help="samples per column")
    p.add_argument("--seed-column", required=True, help="initial column as a 0/1 string, one bit per row")
    p.add_argument("--gestures", required=True, help="timeline JSON naming gesture WAV files")
    p.add_argument("-o", "--out", required=True, help="write the rendered WAV here")
    p.add_argument("--cells", help="write the evolved cell matrix as 0/1 text here")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _cmd_analyze(client: httpx.Client, args: argparse.Namespace) -> None:
    payload: dict = {
        "path": args.wav,
        "fit": {"min_lag": args.min_lag, "max_lag_fraction": args.max_lag_frac},
    }
    if args.ascii:
        payload["ascii_text"] = _read_text(args.wav)
    else:
        payload["wav_b64"] = _b64_file(args.wav)
    report = _post(client, "/analyze", payload)
    _emit_report(report, args.json_path)


def _cmd_combine(client: httpx.Client, args: argparse.Namespace) -> None:
    payload = {
        "op": args.op,
        "a_wav_b64": _b64_file(args.a),
        "b_wav_b64": _b64_file(args.b),
        "a_path": args.a,
        "b_path": args.b,
        "offset": args.offset,
        "analyze": args.analyze,
    }
    resp = _post(client, "/combine", payload)
    if args.out:
        _write_bytes(args.out, base64.b64decode(resp["wav_b64"]))
    _emit_report(resp["report"])


def _cmd_recurrence(client: httpx.Client, args: argparse.Namespace) -> None:
    payload = {
        "wav_b64": _b64_file(args.wav),
        "path": args.wav,
        "dim": args.dim,
        "delay": args.delay,
        "max_points": args.max_points,
        "decimate": args.decimate,
    }
    if args.rate is not None:
        payload["rate"] = args.rate
    if args.epsilon is not None:
        payload["epsilon"] = args.epsilon
    resp = _post(client, "/recurrence", payload)
    _write_bytes(args.out, base64.b64decode(resp["pgm_b64"]))
    _emit_report(resp["report"])


def _cmd_synth(client: httpx.Client, args: argparse.Namespace) -> None:
    payload: dict = {"kind": args.kind, "n": args.n, "rate_hz": args.rate, "as_ascii": args.ascii}
    if args.kind == "fbm":
        payload.update(hurst=args.hurst, seed=args.seed)
    elif args.kind == "burst":
        payload.update(decay=args.decay, seed=args.seed)
    else:
        payload.update(freq_hz=args.freq, amplitude=args.amplitude)
    resp = _post(client, "/synth", payload)
    if args.ascii:
        _write_text(args.out, resp["ascii_text"])
    else:
        _write_bytes(args.out, base64.b64decode(resp["wav_b64"]))
    _emit_report(resp["report"])


def _cmd_grid(client: httpx.Client, args: argparse.Namespace) -> None:
    doc_path = Path(args.gestures)
    try:
        doc = json.loads(_read_text(args.gestures))
    except json.JSONDecodeError as exc:
        raise CliError("MalformedContainer", f"'{args.gestures}' is not valid JSON: {exc}")
    if not isinstance(doc, dict) or not isinstance(doc.get("gestures"), list):
        raise CliError(
            "MalformedContainer", f"'{args.gestures}' must hold an object with a gestures list"
        )
    gestures = []
    for i, entry in enumerate(doc["gestures"]):
        if not isinstance(entry, dict) or "id" not in entry or "file" not in entry:
            raise CliError(
                "MalformedContainer", f"'{args.gestures}' gesture #{i} needs id and file fields"
            )
        wav_path = Path(entry["file"])
        if not wav_path.is_absolute():
            wav_path = doc_path.parent / wav_path
        gestures.append({
            "id": entry["id"],
            "wav_b64": _b64_file(str(wav_path)),
            "path": str(wav_path),
        })
    payload = {
        "rule": args.rule,
        "rows": args.rows,
        "cols": args.cols,
        "step": args.step,
        "seed_column": args.seed_column,
        "gestures": gestures,
    }
    resp = _post(client, "/grid", payload)
    _write_bytes(args.out, base64.b64decode(resp["wav_b64"]))
    if args.cells:
        _write_text(args.cells, resp["cells_text"])
    _emit_report(resp["report"])


_COMMANDS = {
    "analyze": _cmd_analyze,
    "combine": _cmd_combine,
    "recurrence": _cmd_recurrence,
    "synth": _cmd_synth,
    "grid": _cmd_grid,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0
    try:
        with _make_client(args.server) as client:
            _COMMANDS[args.command](client, args)
    except CliError as exc:
        print(f"error: {exc.kind}: {exc.message}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
