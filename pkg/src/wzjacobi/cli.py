"""Command-line front end.

Exit status: 0 when every check passes, 1 on a verification failure, 2 on a
usage or certificate-load error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Iterable

from . import fps, numthy, verify
from .certlang import CertificateLoadError, bundled_certificate_path, load_certificate_file
from .report import VerificationReport, render_plain

TARGETS = ("a'", "b'", "eq2", "eq3", "theta4", "lambert")
TARGET_ALIASES = {"a-prime": "a'", "b-prime": "b'", "aprime": "a'", "bprime": "b'"}


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _target(text: str) -> str:
    t = TARGET_ALIASES.get(text, text)
    if t not in TARGETS:
        raise argparse.ArgumentTypeError(f"unknown target {text!r}; choose from {', '.join(TARGETS)}")
    return t


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="wzjacobi",
        description="Exact verification of the WZ proof of Jacobi's four-square theorem.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("plain", "json"), default="plain")
        # test hook: add 1 to one coefficient of every computed series
        sp.add_argument("--inject-fault", type=_nonneg, default=None, help=argparse.SUPPRESS)

    sp = sub.add_parser("verify-lemma", help="check both lemma sums and their step identities")
    sp.add_argument("--n-max", type=_nonneg, default=25)
    sp.add_argument("--order", type=_positive, default=101)
    common(sp)

    sp = sub.add_parser("check-cert", help="verify WZ certificates symbolically and numerically")
    sp.add_argument("path", nargs="?", help="certificate file (default: bundled jacobi.cert)")
    sp.add_argument("--cert", dest="cert", help="certificate file")
    sp.add_argument("--n-max", type=_nonneg, default=6, help="largest n for numeric spot checks")
    sp.add_argument("--order", type=_positive, default=60)
    common(sp)

    sp = sub.add_parser("jacobi", help="check r4(n) = 8*sigma_not4(n) and the divisor chain")
    sp.add_argument("--n-max", type=_positive, default=2000)
    sp.add_argument("--order", type=_positive, default=None)
    common(sp)

    sp = sub.add_parser("expand", help="print series coefficients (and check identities)")
    sp.add_argument("--target", type=_target, required=True, help=f"one of {', '.join(TARGETS)}")
    sp.add_argument("--order", type=_positive, default=None)
    sp.add_argument("--n", type=_nonneg, default=None)
    common(sp)
    return p


def _tamper(power):
    if power is None:
        return None

    def hook(s):
        return s.with_coefficient(power, s[power] + 1) if power < s.order else s

    return hook


def summary_line(doc: dict) -> str | None:
    s = doc.get("summary")
    if not s or not s["total"]:
        return None
    return f"RESULT: {s['status'].upper()} {s['passed']}/{s['total']}"


def render_document(doc: dict) -> list[str]:
    """Plain-text lines for a JSON result document."""
    lines = []
    if "coefficients" in doc:
        lines.append(" ".join(map(str, doc["coefficients"])))
    if "table" in doc:
        lines.append("n r4 sigma_not4")
        lines.extend(f"{row['n']} {row['r4']} {row['sigma_not4']}" for row in doc["table"])
    lines.extend(render_plain(r) for r in doc["reports"])
    tail = summary_line(doc)
    if tail:
        lines.append(tail)
    return lines


class Emitter:
    """Collects report dicts; in plain mode also streams each line as it arrives."""

    def __init__(self, fmt: str, out=None):
        self.fmt = fmt
        self.out = out or sys.stdout
        self.doc: dict = {"reports": []}

    def line(self, text: str):
        if self.fmt == "plain":
            print(text, file=self.out, flush=True)

    def report(self, r: VerificationReport):
        d = r.to_dict()
        self.doc["reports"].append(d)
        self.line(render_plain(d))

    def reports(self, rs: Iterable[VerificationReport]):
        for r in rs:
            self.report(r)

    def finish(self) -> int:
        rs = self.doc["reports"]
        passed = sum(r["status"] == "pass" for r in rs)
        ok = passed == len(rs)
        self.doc["summary"] = {"passed": passed, "total": len(rs), "status": "pass" if ok else "fail"}
        if self.fmt == "json":
            json.dump(self.doc, self.out, indent=2)
            self.out.write("\n")
        else:
            tail = summary_line(self.doc)
            if tail:
                self.line(tail)
        return 0 if ok else 1


def cmd_verify_lemma(args, em: Emitter) -> int:
    em.doc.update(command="verify-lemma", n_max=args.n_max, order=args.order)
    em.reports(verify.lemma_reports(args.n_max, args.order, tamper=_tamper(args.inject_fault)))
    return em.finish()


def cmd_check_cert(args, em: Emitter) -> int:
    path = args.cert or args.path or bundled_certificate_path()
    try:
        certs = load_certificate_file(path)
        for c in certs:
            verify.builders_for(c)
    except (CertificateLoadError, KeyError) as exc:
        print(f"wzjacobi: error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return 2
    em.doc.update(command="check-cert", path=str(path), certificates=[c.name for c in certs])
    tamper = _tamper(args.inject_fault)
    for c in certs:
        em.report(verify.check_wz_symbolic(c))
        for n in range(args.n_max + 1):
            em.report(verify.check_wz_numeric(c, n, args.order, tamper))
        em.report(verify.ratio_consistency(c, n_max=max(args.n_max, 1), N=args.order))
    return em.finish()


def cmd_jacobi(args, em: Emitter) -> int:
    n_max = args.n_max
    N = args.order if args.order is not None else n_max + 1
    if N < n_max + 1:
        print(f"wzjacobi: error: --order must be at least n_max+1 = {n_max + 1}", file=sys.stderr)
        return 2
    r4 = numthy.r4_table(n_max)
    rows = [
        {"n": n, "r4": r4[n], "sigma_not4": numthy.sigma_not4(n)} for n in range(1, min(n_max, 10) + 1)
    ]
    em.doc.update(command="jacobi", n_max=n_max, order=N, table=rows)
    em.line("n r4 sigma_not4")
    for row in rows:
        em.line(f"{row['n']} {row['r4']} {row['sigma_not4']}")
    em.report(numthy.jacobi_check(n_max, N))
    em.report(numthy.divisor_chain_sweep(n_max))
    return em.finish()


def _expand_series(target: str, N: int, n):
    if target == "a'":
        return fps.a_prime_lhs(N), [verify.check_limit_a]
    if target == "b'":
        return fps.invert(fps.h_series(N, N)), [verify.check_limit_b]
    if target == "eq2":
        return fps.power(fps.theta_full(N), 4), [verify.check_eq2]
    if target == "eq3":
        return verify.eq3_lhs(n, N), [lambda N, tamper=None: verify.check_eq3(n, N, tamper)]
    if target == "theta4":
        return fps.power(fps.theta_full(N), 4), []
    return fps.lambert_rhs(N), []


def cmd_expand(args, em: Emitter, parser) -> int:
    if args.target == "eq3" and args.n is None:
        parser.error("expand --target eq3 requires --n")
    N = args.order if args.order is not None else (200 if args.target == "eq2" else 20)
    series, checks = _expand_series(args.target, N, args.n)
    coeffs = list(series.coeffs)
    em.doc.update(command="expand", target=args.target, order=N, coefficients=coeffs)
    if args.n is not None:
        em.doc["n"] = args.n
    em.line(" ".join(map(str, coeffs)))
    tamper = _tamper(args.inject_fault)
    for check in checks:
        em.report(check(N, tamper=tamper))
    return em.finish()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    em = Emitter(args.format)
    if args.command == "verify-lemma":
        return cmd_verify_lemma(args, em)
    if args.command == "check-cert":
        return cmd_check_cert(args, em)
    if args.command == "jacobi":
        return cmd_jacobi(args, em)
    return cmd_expand(args, em, parser)


if __name__ == "__main__":
    sys.exit(main())
