"""Command-line interface.

Every command reads JSON files against the documented schemas, runs one
library operation, and writes deterministic output (JSON by default,
--format text for human-readable reports). Exit codes: 0 on
success/pass, 1 on mathematical failure (a report with violations or an
obstruction error), 2 on input or format errors.
"""

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .classify import intertwine, lift, equiv_unitary, \
    verify_certificate
from .crossed import crossed_product
from .demos import identity_pairs, naive_doubling_tower, product_tower
from .errors import AfzpError, FormatError
from .kinv import check_pair, induced_map, invariant_of
from .report import Report
from .serialize import dump, dumps, load_json, save_json
from .system import decompose, hom_validate, validate

EXIT_OK = 0
EXIT_MATH = 1
EXIT_INPUT = 2


def _default_order():
    env = os.environ.get("AFZP_ORDER")
    return int(env) if env else None


def _emit(args, obj):
    if args.out:
        save_json(args.out, obj)
        return
    if args.format == "text" and isinstance(obj, Report):
        print(obj.summary())
    elif args.format == "text":
        doc = dump(obj)
        print("kind: %s" % doc.get("kind"))
        for key in sorted(doc):
            if key in ("afzp_format", "kind"):
                continue
            val = doc[key]
            text = repr(val)
            if len(text) > 100:
                text = text[:97] + "..."
            print("  %s: %s" % (key, text))
    else:
        print(dumps(obj))


def _load_canonical(path):
    obj = load_json(path)
    from .system import CanonicalForm, FdSystem
    if isinstance(obj, CanonicalForm):
        return obj
    if isinstance(obj, FdSystem):
        return decompose(obj)
    raise FormatError("%s: expected a system or canonical-form file" % path)


def cmd_validate(args):
    def one(path):
        obj = load_json(path)
        from .system import FdSystem, EqHom
        if isinstance(obj, EqHom):
            return hom_validate(obj)
        if isinstance(obj, FdSystem):
            return validate(obj)
        raise FormatError("%s: expected a system or hom file" % path)

    if len(args.files) > 1 and args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(one, args.files))
    else:
        reports = [one(p) for p in args.files]
    code = EXIT_OK
    for path, rep in zip(args.files, reports):
        if len(args.files) > 1:
            print("== %s" % path)
        _emit(args, rep)
        if not rep.ok:
            code = EXIT_MATH
    return code


def cmd_canon(args):
    sys_in = load_json(args.file)
    from .system import FdSystem
    if not isinstance(sys_in, FdSystem):
        raise FormatError("expected a system file")
    _emit(args, decompose(sys_in))
    return EXIT_OK


def cmd_crossed(args):
    _emit(args, crossed_product(_load_canonical(args.file)))
    return EXIT_OK


def cmd_kinv(args):
    _emit(args, invariant_of(_load_canonical(args.file)))
    return EXIT_OK


def cmd_induced(args):
    hom = load_json(args.homfile)
    from .system import EqHom
    if not isinstance(hom, EqHom):
        raise FormatError("expected a hom file")
    rep = hom_validate(hom)
    if not rep.ok:
        _emit(args, rep)
        return EXIT_MATH
    _emit(args, induced_map(hom))
    return EXIT_OK


def cmd_checkpair(args):
    kp = load_json(args.pairfile)
    invA = load_json(args.inva)
    invB = load_json(args.invb)
    rep = check_pair(kp, invA, invB)
    _emit(args, rep)
    return EXIT_OK if rep.ok else EXIT_MATH


def cmd_lift(args):
    kp = load_json(args.pairfile)
    src = _load_canonical(args.srcfile)
    tgt = _load_canonical(args.tgtfile)
    _emit(args, lift(kp, src, tgt))
    return EXIT_OK


def cmd_equiv(args):
    h1 = load_json(args.hom1)
    h2 = load_json(args.hom2)
    W, _witness = equiv_unitary(h1, h2)
    _emit(args, W)
    return EXIT_OK


def cmd_intertwine(args):
    from .classify import Tower
    tA = load_json(args.towera)
    tB = load_json(args.towerb)
    if not isinstance(tA, Tower) or not isinstance(tB, Tower):
        raise FormatError("expected tower files")
    pairs = None
    if args.pairs:
        pairs = [load_json(p) for p in args.pairs.split(",")]
    cert = intertwine(tA, tB, pairs=pairs, depth=args.depth,
                      bound=args.bound)
    _emit(args, cert)
    return EXIT_OK


def cmd_verify(args):
    cert = load_json(args.certfile)
    from .classify import IntertwiningCertificate
    if not isinstance(cert, IntertwiningCertificate):
        raise FormatError("expected a certificate file")
    rep = verify_certificate(cert)
    _emit(args, rep)
    return EXIT_OK if rep.ok else EXIT_MATH


def _demo_product(args, p, depth):
    tower = product_tower(p, depth, order=args.order)
    cert = intertwine(tower, tower, pairs=identity_pairs(tower, depth),
                      depth=depth)
    rep = verify_certificate(cert)
    print("tower stages: %s" % [s.block_sizes for s in tower.systems])
    print("triangles corrected: %d" % len(cert.triangles))
    for item in rep.items:
        print("[%s] %s" % ("PASS" if item.ok else "FAIL", item.name))
    print("PASS" if rep.ok else "FAIL")
    if args.out:
        save_json(args.out, cert)
    return EXIT_OK if rep.ok else EXIT_MATH


def _demo_resorted(args, depth):
    tA = product_tower(2, depth, order=args.order)
    tB = product_tower(2, depth, resorted=True, order=args.order)
    cert = intertwine(tA, tB, depth=depth, bound=args.bound)
    rep = verify_certificate(cert)
    print("triangles corrected: %d" % len(cert.triangles))
    print("PASS" if rep.ok else "FAIL")
    if args.out:
        save_json(args.out, cert)
    return EXIT_OK if rep.ok else EXIT_MATH


def _demo_naive_doubling(args, depth=3):
    data = naive_doubling_tower(depth)
    print("stages: %s" % [s.block_sizes for s in data["stages"]])
    code = EXIT_OK
    for n, rep in enumerate(data["hom_reports"]):
        fail = rep.failures()
        print("stage %d -> %d doubling map: %s"
              % (n + 1, n + 2,
                 "equivariant" if rep.ok else "NOT equivariant (%s)"
                 % fail[0].detail))
    for n, (found, obs) in enumerate(zip(data["searches"],
                                         data["obstructions"])):
        print("stage %d -> %d invariant morphisms with entries <= 3: %d"
              % (n + 1, n + 2, len(found)))
        for item in obs.failures():
            print("  obstruction: %s: %s" % (item.name, item.detail))
    expected = (all(not r.ok for r in data["hom_reports"])
                and all(not s for s in data["searches"]))
    print("PASS (obstructions reproduced)" if expected else
          "FAIL (expected obstructions missing)")
    return EXIT_OK if expected else EXIT_MATH


DEMOS = {
    "product-tower-p2": lambda args: _demo_product(args, 2, args.depth or 4),
    "product-tower-p3": lambda args: _demo_product(args, 3, args.depth or 3),
    "product-tower-p2-resorted":
        lambda args: _demo_resorted(args, args.depth or 3),
    "naive-doubling": lambda args: _demo_naive_doubling(args),
}


def cmd_demo(args):
    fn = DEMOS.get(args.name)
    if fn is None:
        print("unknown demo %r; available: %s"
              % (args.name, ", ".join(sorted(DEMOS))), file=sys.stderr)
        return EXIT_INPUT
    return fn(args)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--out", metavar="PATH",
                        help="write the result to PATH (atomic)")
    common.add_argument("--order", type=int, default=_default_order(),
                        help="root-of-unity order for newly built contexts "
                             "(default 4p^2; also via AFZP_ORDER)")
    common.add_argument("--jobs", type=int, default=1,
                        help="process independent input files concurrently")
    ap = argparse.ArgumentParser(
        prog="afzp",
        parents=[common],
        description="Exact invariants and classification machinery for "
                    "order-p actions on finite-dimensional C*-algebras.")
    sub = ap.add_subparsers(dest="command", required=True)

    def sub_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    sp = sub_parser("validate", help="validate systems or homs")
    sp.add_argument("files", nargs="+")
    sp.set_defaults(fn=cmd_validate)

    sp = sub_parser("canon", help="canonical decomposition")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_canon)

    sp = sub_parser("crossed", help="crossed-product presentation")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_crossed)

    sp = sub_parser("kinv", help="classification invariant")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_kinv)

    sp = sub_parser("induced", help="invariant morphism of a hom")
    sp.add_argument("homfile")
    sp.set_defaults(fn=cmd_induced)

    sp = sub_parser("checkpair",
                        help="check an invariant morphism pair")
    sp.add_argument("pairfile")
    sp.add_argument("inva")
    sp.add_argument("invb")
    sp.set_defaults(fn=cmd_checkpair)

    sp = sub_parser("lift", help="lift a pair to an equivariant hom")
    sp.add_argument("pairfile")
    sp.add_argument("srcfile")
    sp.add_argument("tgtfile")
    sp.set_defaults(fn=cmd_lift)

    sp = sub_parser("equiv",
                        help="equivariant unitary conjugating one hom "
                             "into another")
    sp.add_argument("hom1")
    sp.add_argument("hom2")
    sp.set_defaults(fn=cmd_equiv)

    sp = sub_parser("intertwine",
                        help="finite-depth intertwining certificate")
    sp.add_argument("towera")
    sp.add_argument("towerb")
    sp.add_argument("pairs", nargs="?", default=None,
                    help="comma-separated invariant-pair files")
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--bound", type=int, default=3)
    sp.set_defaults(fn=cmd_intertwine)

    sp = sub_parser("verify", help="replay a certificate from scratch")
    sp.add_argument("certfile")
    sp.set_defaults(fn=cmd_verify)

    sp = sub_parser("demo", help="run a built-in scenario")
    sp.add_argument("name")
    sp.add_argument("--depth", type=int, default=None)
    sp.add_argument("--bound", type=int, default=3)
    sp.set_defaults(fn=cmd_demo)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except FormatError as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except AfzpError as exc:
        print("failure: %s" % exc, file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
