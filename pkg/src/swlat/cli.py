"""swlat command line client.

Every verb is a request to the HTTP service.  With ``--url`` (or SWLAT_URL)
requests go to a running server; otherwise the app is served in-process.

Exit codes: 0 success, 1 selftest failure, 2 malformed input or schema
violation, 3 unsupported surface model, 4 ambiguous recovery, 5 any other
domain error (point on a wall, non-isometry, ...).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

EXIT = {"schema": 2, "unsupported": 3, "ambiguous": 4, "domain": 5}


class InputError(Exception):
    pass


def load_json(arg: str):
    """A file path, '-' for stdin, or an inline JSON literal."""
    try:
        if arg == "-":
            return json.load(sys.stdin)
        if arg.lstrip()[:1] in ("{", "["):
            return json.loads(arg)
        return json.loads(Path(arg).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {arg!r}: {exc}") from exc


def _client(url: str | None):
    if url:
        import httpx

        return httpx.Client(base_url=url.rstrip("/"), timeout=None)
    import warnings

    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message=".*httpx.*")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _common(suppress: bool) -> argparse.ArgumentParser:
    # shared flags, accepted before or after the verb
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--url", help="base URL of a running swlat server (env SWLAT_URL)", **kw)
    c.add_argument("--output", "-o", help="write the JSON report here instead of stdout", **kw)
    c.add_argument("--pretty", action="store_true", help="human readable table on stdout", **kw)
    return c


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="swlat", description=__doc__.splitlines()[0], parents=[_common(False)])
    p.set_defaults(url=os.environ.get("SWLAT_URL"))
    common = [_common(True)]
    sub = p.add_subparsers(dest="verb", required=True)

    e = sub.add_parser("enumerate", parents=common, help="basic classes of a surface")
    e.add_argument("--input", "-i", required=True, help="surface JSON")

    r = sub.add_parser("recover", parents=common, help="recover K0, exceptional classes and invariants")
    r.add_argument("--input", "-i", required=True, help="basic class set JSON")
    r.add_argument("--n-max", type=int, default=12)

    c = sub.add_parser("chambers", parents=common, help="wall and chamber computations")
    csub = c.add_subparsers(dest="action", required=True)
    w = csub.add_parser("walls", parents=common)
    w.add_argument("--surface", "--input", "-i", dest="surface", required=True)
    w.add_argument("--from", dest="x0", required=True)
    w.add_argument("--to", dest="x1", required=True)
    s = csub.add_parser("sw", parents=common)
    s.add_argument("--surface", "--input", "-i", dest="surface", required=True)
    s.add_argument("--at", required=True)
    s.add_argument("--via", action="append", default=[])
    v = csub.add_parser("verify-c0", parents=common)
    v.add_argument("--surface", "--input", "-i", dest="surface", required=True)
    q = csub.add_parser("search", parents=common)
    q.add_argument("--surface", "--input", "-i", dest="surface", required=True)
    q.add_argument("--radius", type=int, default=1)
    q.add_argument("--denominator", type=int, default=1)
    q.add_argument("--offset")

    d = sub.add_parser("check-diffeo", parents=common, help="test a candidate isometry against two basic sets")
    d.add_argument("--input", "-i", required=True, help="first basic class set")
    d.add_argument("--second", help="second basic class set (default: the first)")
    d.add_argument("--isometry", help="integer matrix acting on column vectors")

    k = sub.add_parser("check-summand", parents=common, help="is a (-1)-difference class an exceptional class")
    k.add_argument("--input", "-i", required=True, help="basic class set")
    k.add_argument("--n", required=True, help="class vector")

    t = sub.add_parser("selftest", parents=common, help="run the acceptance checks")
    t.add_argument("--only", help="comma separated criterion numbers")

    sv = sub.add_parser("serve", parents=common, help="run the HTTP service")
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--port", type=int, default=8000)
    return p


def _request(args) -> tuple[str, str, object]:
    if args.verb == "enumerate":
        return "POST", "/enumerate", load_json(args.input)
    if args.verb == "recover":
        return "POST", "/recover", {"basic_set": load_json(args.input), "n_max": args.n_max}
    if args.verb == "chambers":
        surface = load_json(args.surface)
        if args.action == "walls":
            return "POST", "/chambers/walls", {"surface": surface, "from_point": load_json(args.x0),
                                               "to_point": load_json(args.x1)}
        if args.action == "sw":
            return "POST", "/chambers/sw", {"surface": surface, "at": load_json(args.at),
                                            "via": [load_json(x) for x in args.via]}
        if args.action == "verify-c0":
            return "POST", "/chambers/verify-c0", {"surface": surface}
        body = {"surface": surface, "radius": args.radius, "denominator": args.denominator}
        if args.offset:
            body["offset"] = load_json(args.offset)
        return "POST", "/chambers/search", body
    if args.verb == "check-diffeo":
        body = {"first": load_json(args.input)}
        if args.second:
            body["second"] = load_json(args.second)
        if args.isometry:
            body["isometry"] = load_json(args.isometry)
        return "POST", "/check-diffeo", body
    if args.verb == "check-summand":
        return "POST", "/check-summand", {"basic_set": load_json(args.input), "n": load_json(args.n)}
    path = "/selftest" + (f"?only={args.only}" if args.only else "")
    return "GET", path, None


def _pretty(verb: str, data) -> str:
    if verb == "enumerate":
        rows = [f"{'L':<40} {'Xi':<40} sw mult"]
        rows += [f"{str(c['L']):<40} {str(c['Xi']):<40} {c['sw']:>2} {c['mult']:>4}" for c in data["classes"]]
        rows.append(f"{len(data['classes'])} classes, canonical {data['canonical']}")
        return "\n".join(rows)
    if verb == "selftest":
        from .acceptance import format_line
        from .schemas import SelftestLine

        lines = [format_line(SelftestLine(**x)) for x in data["results"]]
        return "\n".join(lines + ["ALL PASS" if data["passed"] else "FAILURES"])
    out = []
    for key, val in data.items():
        if isinstance(val, list) and val and isinstance(val[0], dict):
            out.append(f"{key}:")
            out += ["  " + "  ".join(f"{k}={v}" for k, v in item.items()) for item in val]
        else:
            out.append(f"{key}: {val}")
    return "\n".join(out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.verb == "serve":
        import uvicorn

        uvicorn.run("swlat.service:app", host=args.host, port=args.port)
        return 0
    try:
        method, path, body = _request(args)
    except InputError as exc:
        print(f"swlat: {exc}", file=sys.stderr)
        return EXIT["schema"]
    with _client(args.url) as client:
        resp = client.request(method, path, json=body)
    data = resp.json()
    if resp.status_code >= 400:
        kind = data.get("error", "domain") if isinstance(data, dict) else "domain"
        print(f"swlat: {kind} error: {json.dumps(data.get('detail', data))}", file=sys.stderr)
        return EXIT.get(kind, 5)
    text = json.dumps(data, indent=2, sort_keys=False)
    if args.output:
        Path(args.output).write_text(text + "\n")
    if args.pretty:
        print(_pretty(args.verb, data))
    elif not args.output:
        print(text)
    if args.verb == "selftest" and not data["passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
