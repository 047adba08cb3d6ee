"""Command-line front end.

Every structured report goes to stdout as JSON with an embedded run manifest
(tool version, resolved configuration, config hash, timestamp); diagnostics
go to stderr.  Exit codes: 0 ok, 2 usage, 3 domain/capacity error, 4
internal integrity failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from datetime import datetime, timezone

from . import __version__
from .channels import ChannelModel, parse_channel
from .codec import (
    achievable_rate,
    compile_codebook,
    decode,
    encode,
    letters_to_string,
    string_to_letters,
)
from .errors import IntegrityError, StegoError
from .fivequbit import run_demo
from .keystream import KeyStream, key_cost
from .secrecy import tv_to_channel, upper_bound
from .simulate import SimConfig, SimResult, run

_DEFAULT_SEED = "00" * 32


class _UsageError(Exception):
    """Bad invocation (unparseable channel spec, missing flag): exit 2."""


def _parse_coverage(text: str) -> float:
    if text == "full":
        return math.inf
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"coverage must be a number or 'full', got {text!r}")
    return value


def _parse_n_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stegoqec",
        description="Steganographic codecs over emulated quantum error channels",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(sp: argparse.ArgumentParser, n_list: bool = False,
               required_channel: bool = False) -> None:
        # a second positional after an optional one confuses argparse, so
        # encode/decode pin the channel as required
        kwargs = {} if required_channel else {"nargs": "?", "default": None}
        sp.add_argument("channel", help="bitflip:p=0.1 | depol:p=0.1 | ru:p=0.7,0.2,0.1",
                        **kwargs)
        if n_list:
            sp.add_argument("--n", type=_parse_n_list, default=None, help="block lengths, comma separated")
        else:
            sp.add_argument("--n", type=int, default=None, help="block length")
        sp.add_argument("--d", type=_parse_coverage, default=None,
                        help="typical-window coverage constant, or 'full'")
        sp.add_argument("--config", default=None, help="JSON file supplying any flag")

    sp = sub.add_parser("rate", help="compiled rate vs the entropy asymptote")
    common(sp)
    sp = sub.add_parser("keycost", help="per-block key consumption, formula vs measured")
    common(sp)
    sp = sub.add_parser("secrecy", help="exact TV distance to the emulated channel")
    common(sp)
    sp = sub.add_parser("bound", help="converse bound H + g + f vs the compiled rate")
    common(sp)
    sp.add_argument("--delta", type=float, default=None, help="secrecy parameter")
    sp.add_argument("--eps", type=float, default=None, help="recoverability parameter")
    sp = sub.add_parser("simulate", help="Monte Carlo protocol run with Eve statistics")
    common(sp)
    sp.add_argument("--blocks", type=int, default=None)
    sp.add_argument("--seed", default=None, help="64 hex chars of shared secret")
    sp.add_argument("--otp", action="store_true", help="one-time-pad the message first")
    sp.add_argument("--no-eve", action="store_true", help="skip the distinguisher")
    sp.add_argument("--trace", default=None, help="per-block CSV trace path")
    sp = sub.add_parser("demo-qecc", help="exact five-qubit demonstration record")
    sp.add_argument("--p", type=float, default=None, help="depolarizing rate to emulate")
    sp.add_argument("--seed", default=None, help="64 hex chars")
    sp.add_argument("--config", default=None)
    sp = sub.add_parser("encode", help="message index -> error string letters")
    common(sp, required_channel=True)
    sp.add_argument("message", type=int)
    sp.add_argument("--seed", default=None)
    sp = sub.add_parser("decode", help="error string letters -> message index")
    common(sp, required_channel=True)
    sp.add_argument("string")
    sp.add_argument("--seed", default=None)
    sp = sub.add_parser("sweep", help="rate/secrecy/key rows over block lengths")
    common(sp, n_list=True)
    sp.add_argument("--delta", type=float, default=None)
    sp.add_argument("--eps", type=float, default=None)
    sp.add_argument("--csv", action="store_true", help="emit CSV rows instead of JSON")
    return parser


def _load_config(path: str | None) -> tuple[dict, str | None]:
    if path is None:
        return {}, None
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        cfg = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise StegoError(f"config file {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise StegoError(f"config file {path} must hold a JSON object")
    return cfg, hashlib.sha256(raw).hexdigest()


def _resolve(args: argparse.Namespace, cfg: dict, key: str, default):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in cfg:
        value = cfg[key]
        if key == "d" and isinstance(value, str):
            return _parse_coverage(value)
        return value
    return default


def _manifest(resolved: dict, config_hash: str | None) -> dict:
    canon = json.dumps(resolved, sort_keys=True, default=str)
    return {
        "tool": "stegoqec",
        "version": __version__,
        "config": resolved,
        "config_sha256": config_hash or hashlib.sha256(canon.encode()).hexdigest(),
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def _finite(obj):
    """Strict JSON: non-finite floats become strings."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def _emit(report: dict, resolved: dict, config_hash: str | None) -> None:
    doc = _finite({"report": report, "manifest": _manifest(resolved, config_hash)})
    json.dump(doc, sys.stdout, indent=2, sort_keys=True, default=str)
    sys.stdout.write("\n")


def _require(resolved: dict, *keys: str) -> None:
    missing = [k for k in keys if resolved.get(k) is None]
    if missing:
        raise _UsageError(f"missing required flag(s): {', '.join('--' + k for k in missing)}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg, cfg_hash = _load_config(getattr(args, "config", None))
        return _dispatch(args, cfg, cfg_hash)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except IntegrityError as exc:
        print(f"integrity failure: {exc}", file=sys.stderr)
        return 4
    except StegoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def _channel(args: argparse.Namespace, cfg: dict) -> ChannelModel:
    spec = getattr(args, "channel", None) or cfg.get("channel")
    if spec is None:
        raise _UsageError("missing channel specification")
    try:
        return parse_channel(spec)
    except StegoError as exc:
        raise _UsageError(str(exc)) from None


def _dispatch(args: argparse.Namespace, cfg: dict, cfg_hash: str | None) -> int:
    cmd = args.cmd
    if cmd == "demo-qecc":
        p = _resolve(args, cfg, "p", 0.1)
        seed = _resolve(args, cfg, "seed", _DEFAULT_SEED)
        resolved = {"cmd": cmd, "p": p, "seed": seed}
        record = run_demo(p, int(seed, 16))
        _emit(record, resolved, cfg_hash)
        return 0

    channel = _channel(args, cfg)
    n = _resolve(args, cfg, "n", None)
    d = _resolve(args, cfg, "d", 2.0)

    if cmd == "rate":
        _require({"n": n}, "n")
        report, _book = achievable_rate(channel, n, d)
        resolved = {"cmd": cmd, "channel": channel.spec_string(), "n": n, "d": d}
        _emit(
            {
                "M_bits": report.m_bits,
                "asymptote_bits": report.asymptote_bits,
                "ratio": report.ratio,
            },
            resolved,
            cfg_hash,
        )
        return 0

    if cmd == "keycost":
        _require({"n": n}, "n")
        resolved = {"cmd": cmd, "channel": channel.spec_string(), "n": n, "d": d}
        _emit(key_cost(channel, n, d).as_dict(), resolved, cfg_hash)
        return 0

    if cmd == "secrecy":
        _require({"n": n}, "n")
        book = compile_codebook(channel, n, d)
        resolved = {"cmd": cmd, "channel": channel.spec_string(), "n": n, "d": d}
        _emit(tv_to_channel(book).as_dict(), resolved, cfg_hash)
        return 0

    if cmd == "bound":
        _require({"n": n}, "n")
        delta = _resolve(args, cfg, "delta", 0.01)
        eps = _resolve(args, cfg, "eps", 0.01)
        book = compile_codebook(channel, n, d)
        resolved = {
            "cmd": cmd, "channel": channel.spec_string(), "n": n, "d": d,
            "delta": delta, "eps": eps,
        }
        _emit(upper_bound(channel, n, delta, eps, book.m_bits).as_dict(), resolved, cfg_hash)
        return 0

    if cmd == "simulate":
        _require({"n": n}, "n")
        blocks = _resolve(args, cfg, "blocks", 1000)
        seed = _resolve(args, cfg, "seed", _DEFAULT_SEED)
        otp = bool(getattr(args, "otp", False) or cfg.get("otp", False))
        eve = not bool(getattr(args, "no_eve", False) or cfg.get("no_eve", False))
        trace = _resolve(args, cfg, "trace", None)
        config = SimConfig(channel, n, d, blocks, seed, otp=otp, eve_test=eve)
        result: SimResult = run(config, trace_path=trace)
        resolved = {
            "cmd": cmd, "channel": channel.spec_string(), "n": n, "d": d,
            "blocks": blocks, "seed": seed, "otp": otp, "eve_test": eve,
        }
        _emit(result.as_dict(), resolved, cfg_hash)
        return 0

    if cmd == "encode":
        _require({"n": n}, "n")
        seed = _resolve(args, cfg, "seed", _DEFAULT_SEED)
        book = compile_codebook(channel, n, d)
        key = KeyStream(seed)
        key.begin_block()
        print(string_to_letters(encode(book, args.message, key)))
        return 0

    if cmd == "decode":
        _require({"n": n}, "n")
        seed = _resolve(args, cfg, "seed", _DEFAULT_SEED)
        book = compile_codebook(channel, n, d)
        key = KeyStream(seed)
        key.begin_block()
        print(decode(book, letters_to_string(args.string), key))
        return 0

    if cmd == "sweep":
        _require({"n": n}, "n")
        n_values = n if isinstance(n, list) else [n]
        delta = _resolve(args, cfg, "delta", 0.01)
        eps = _resolve(args, cfg, "eps", 0.01)
        rows = []
        for nv in n_values:
            book = compile_codebook(channel, nv, d)
            sec = tv_to_channel(book)
            bnd = upper_bound(channel, nv, delta, eps, book.m_bits)
            try:
                k_bits = key_cost(channel, nv, d, book=book).k_measured
            except StegoError:
                k_bits = None
            rows.append(
                {
                    "N": nv, "p": channel.error_prob, "D": d,
                    "delta": book.window.delta, "M_bits": book.m_bits,
                    "M_upper": bnd.m_upper, "tv": sec.tv_distance, "K": k_bits,
                }
            )
        resolved = {
            "cmd": cmd, "channel": channel.spec_string(), "n": n_values, "d": d,
            "delta": delta, "eps": eps,
        }
        if getattr(args, "csv", False):
            sys.stdout.write("N,p,D,delta,M_bits,M_upper,tv,K\n")
            for r in rows:
                k = "" if r["K"] is None else r["K"]
                sys.stdout.write(
                    f"{r['N']},{r['p']:.9g},{r['D']:.9g},{r['delta']:.9g},"
                    f"{r['M_bits']:.9g},{r['M_upper']:.9g},{r['tv']:.9g},{k}\n"
                )
        else:
            _emit({"rows": rows}, resolved, cfg_hash)
        return 0

    raise StegoError(f"unknown subcommand {cmd!r}")


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
