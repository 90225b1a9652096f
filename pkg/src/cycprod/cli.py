"""Command line client.

Runs the service functions in-process, or forwards to a running API when
``--server URL`` is given.  Exit codes: 0 all good, 1 a check failed,
2 bad input or usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, service
from .corpus import MAX_ORDER_ENV
from .errors import GroupError
from .verify import CHECKS

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class _Remote:
    def __init__(self, url: str):
        import httpx

        self.client = httpx.Client(base_url=url.rstrip("/"), timeout=None)

    def call(self, endpoint: str, payload: dict) -> dict:
        resp = self.client.post(f"/{endpoint}", json=payload)
        if resp.status_code == 422:
            body = resp.json()
            raise GroupError(body.get("message") or json.dumps(body.get("detail")))
        resp.raise_for_status()
        return resp.json()


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise GroupError(f"cannot read {path}: {exc.strerror}") from None


def _pair(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
        raise argparse.ArgumentTypeError("expected two element indices, e.g. 1,3")
    return int(parts[0]), int(parts[1])


def _checks(text: str) -> list[str]:
    names = [c.strip() for c in text.split(",") if c.strip()]
    bad = [c for c in names if c not in CHECKS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown checks {bad}; choose from {', '.join(CHECKS)}")
    return names


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-order", type=int, default=None,
                        help=f"order bound (default from ${MAX_ORDER_ENV}, else built in)")
    common.add_argument("--json", metavar="PATH", help="also write the JSON result to PATH")
    common.add_argument("--server", metavar="URL", help="send the request to a running API")

    p = argparse.ArgumentParser(prog="cycprod",
                                description="Finite groups factored by two cyclic subgroups.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("gen", parents=[common], help="print the corpus manifest")
    for name, text in (("factor", "list cyclic factorizations"),
                       ("rank", "Prüfer rank"),
                       ("supersoluble", "supersolubility test")):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("file")
    sp = sub.add_parser("decompose", parents=[common], help="decomposition report as JSON")
    sp.add_argument("file")
    sp.add_argument("--factor", type=_pair, metavar="A,B",
                    help="generators of the two factors (default: first factorization)")
    sp = sub.add_parser("multi", parents=[common], help="pairwise permutable product check")
    sp.add_argument("file")
    sp.add_argument("generators", type=int, nargs="+")
    sp = sub.add_parser("verify", parents=[common], help="run the corpus checks")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--check", type=_checks, metavar="NAMES",
                    help=f"comma separated subset of: {', '.join(CHECKS)}")
    sp = sub.add_parser("serve", help="run the HTTP API")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    return p


def _dispatch(args, remote: _Remote | None) -> tuple[dict, int, str]:
    """Returns (json result, exit code, human-readable text)."""
    bound = {} if args.max_order is None else {"max_order": args.max_order}
    cmd = args.command

    def run(endpoint: str, local, payload: dict) -> dict:
        if remote is not None:
            return remote.call(endpoint, {k: v for k, v in payload.items() if v is not None})
        return local(**payload)

    if cmd == "gen":
        out = run("gen", service.corpus_manifest, {"max_order": args.max_order})
        lines = [f"{e['name']}\t{e['order']}\t{','.join(e['aliases'])}" for e in out["entries"]]
        lines.append(f"# {out['count']} groups, corpus hash {out['corpusHash']}")
        return out, EXIT_OK, "\n".join(lines)
    if cmd == "verify":
        out = run("verify", service.verify,
                  {"max_order": args.max_order, "jobs": args.jobs, "checks": args.check})
        return out, service.exit_code(out), _verify_text(out)

    text = _read(args.file)
    if cmd == "factor":
        out = run("factor", service.factor, {"text": text, **bound})
        lines = [f"|A|={f['orders'][0]} |B|={f['orders'][1]} generators {f['generators']}"
                 for f in out["factorizations"]]
        lines.append(f"# {out['count']} cyclic factorizations of a group of order {out['order']}")
        return out, EXIT_OK, "\n".join(lines)
    if cmd == "decompose":
        factors = list(args.factor) if args.factor else None
        out = run("decompose", service.decomposition, {"text": text, "factors": factors, **bound})
        return out, EXIT_OK if out["ok"] else EXIT_FAIL, json.dumps(out, indent=2)
    if cmd == "rank":
        out = run("rank", service.rank, {"text": text, **bound})
        return out, EXIT_OK, str(out["rank"])
    if cmd == "supersoluble":
        out = run("supersoluble", service.supersoluble, {"text": text, **bound})
        return out, EXIT_OK, "true" if out["supersoluble"] else "false"
    if cmd == "multi":
        out = run("multi", service.multi, {"text": text, "generators": args.generators, **bound})
        return out, EXIT_OK if out["ok"] else EXIT_FAIL, json.dumps(out, indent=2)
    raise AssertionError(cmd)


def _verify_text(report: dict) -> str:
    lines = []
    for e in report["entries"]:
        for name, v in e["results"].items():
            if v["status"] == "fail":
                lines.append(f"FAIL {e['name']} {name}: {'; '.join(v['failures'][:3])}")
    s = report["summary"]
    for name, counts in s["byCheck"].items():
        lines.append(f"{name:14s} pass {counts['pass']:5d}  fail {counts['fail']:3d}  "
                     f"skipped {counts['skipped']:5d}")
    lines.append(f"{s['entries']} groups, {s['factorizationPairs']} factorizations, "
                 f"{s['threeFactorProducts']} three-factor products; "
                 f"{s['pass']} passed, {s['fail']} failed, {s['skipped']} skipped")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.command == "serve":
        import uvicorn

        uvicorn.run("cycprod.api:app", host=args.host, port=args.port)
        return EXIT_OK
    try:
        remote = _Remote(args.server) if args.server else None
        out, code, text = _dispatch(args, remote)
    except GroupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(text)
    if args.json:
        Path(args.json).write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
