"""Command-line interface: info / extract / roundtrip / eval / flops / bench.

Exit codes: 0 success, 1 usage error, 2 decode error, 3 unsupported mode.
Set FREQDET_LOG (DEBUG/INFO/WARNING/...) for verbosity.
"""

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from .errors import FreqdetError, JpegError, UnsupportedMode
from .evaluation import (DEFAULT_BUCKET_EDGES, evaluate, load_detections,
                         load_ground_truth, report_to_dict)
from .frontend import build_desk_network
from .intdecode import full_decode_integer
from .jpeg import decode_scan, parse_stream
from .perf import (DEFAULT_FLOPS_PER_MAC, bench_decode, bench_forward,
                   estimate_flops, flops_report, ssd300_arch, ssd_freq_arch)
from .planes import full_decode_reference
from .tensor import extract_tensor, read_stats, write_dctt

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DECODE = 2
EXIT_UNSUPPORTED = 3

log = logging.getLogger("freqdet")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the CLI contract says 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self._usage_exit(message))

    def _usage_exit(self, message):
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        return EXIT_USAGE


def _read(path) -> bytes:
    with open(path, "rb") as f:
        return f.read()


def cmd_info(args) -> int:
    structure = parse_stream(_read(args.path))
    sampling = ",".join(f"{c.h}x{c.v}" for c in structure.components)
    summary = {
        "width": structure.width,
        "height": structure.height,
        "components": len(structure.components),
        "sampling": sampling,
        "quant_tables": len(structure.quant_tables),
        "huffman_tables": len(structure.huffman_specs),
        "restart_interval": structure.scans[0].restart_interval,
        "markers": [[name, offset] for name, offset in structure.markers],
    }
    print(f"{args.path}: {structure.width}x{structure.height}, "
          f"{len(structure.components)} component(s), sampling {sampling}")
    print(json.dumps(summary, indent=1))
    return EXIT_OK


def cmd_extract(args) -> int:
    stats = read_stats(args.normalize) if args.normalize else None
    tensor = extract_tensor(_read(args.path),
                            resample_mode=args.resample_mode, stats=stats)
    write_dctt(args.out, tensor)
    log.info("wrote %s: %s", args.out, tensor.shape)
    print(f"{args.out}: rows={tensor.shape[0]} cols={tensor.shape[1]} "
          f"channels={tensor.shape[2]}")
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    data = _read(args.path)
    structure = parse_stream(data)
    blocks = decode_scan(structure, data)
    ours = full_decode_reference(structure, blocks,
                                 arithmetic="float").astype(np.int32)
    reference = full_decode_integer(structure, blocks).astype(np.int32)
    diff = np.abs(ours - reference)
    report = {
        "path": args.path,
        "max_abs_error": int(diff.max()),
        "mean_abs_error": float(diff.mean()),
        "samples": int(diff.size),
        "within_1": float((diff <= 1).mean()),
    }
    print(json.dumps(report, indent=1))
    return EXIT_OK


def cmd_eval(args) -> int:
    gts = load_ground_truth(args.ground_truth)
    dets = load_detections(args.detections)
    result = evaluate(dets, gts, iou_threshold=args.iou_threshold,
                      eleven_point=not args.continuous,
                      bucket_edges=args.bucket_edges)
    out = json.dumps(report_to_dict(result), indent=1)
    if args.out:
        with open(args.out, "w") as f:
            f.write(out + "\n")
    print(out)
    return EXIT_OK


def cmd_flops(args) -> int:
    archs = {"ssd300": ssd300_arch, "ssd_freq": ssd_freq_arch}
    arch = archs[args.arch]()
    report = flops_report(arch, args.flops_per_mac)
    baseline = estimate_flops(ssd300_arch(), args.flops_per_mac)
    report["ratio_to_ssd300"] = baseline / report["total_flops"]
    print(json.dumps(report, indent=1))
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.kind == "decode":
        if not args.corpus:
            raise FreqdetError("decode benchmark requires --corpus files")
        reports = []
        for mode in (["partial", "full"] if args.mode == "both"
                     else [args.mode]):
            reports.append(bench_decode(args.corpus, mode=mode,
                                        repetitions=args.repetitions))
        out = [r.to_dict() for r in reports]
        if len(reports) == 2:
            out.append({"partial_over_full_ratio":
                        reports[0].items_per_sec_mean /
                        reports[1].items_per_sec_mean})
        print(json.dumps(out, indent=1))
    else:
        net = build_desk_network(variant=args.variant, seed=args.seed)
        report = bench_forward(net, batch_size=args.batch_size,
                               batch_count=args.batch_count,
                               repetitions=args.repetitions)
        print(json.dumps(report.to_dict(), indent=1))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="freqdet",
                description="DCT-domain JPEG analysis and detection tools")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("info", help="summarize a JPEG's structure")
    sp.add_argument("path")
    sp.set_defaults(func=cmd_info)

    sp = sub.add_parser("extract", help="JPEG -> DCTT tensor file")
    sp.add_argument("path")
    sp.add_argument("out")
    sp.add_argument("--resample-mode", choices=["replicate", "bilinear"],
                    default="replicate")
    sp.add_argument("--normalize", metavar="STATS_JSON", default=None)
    sp.set_defaults(func=cmd_extract)

    sp = sub.add_parser("roundtrip",
                        help="compare full decode against the embedded "
                             "integer reference decoder")
    sp.add_argument("path")
    sp.set_defaults(func=cmd_roundtrip)

    sp = sub.add_parser("eval", help="VOC mAP evaluation from JSON records")
    sp.add_argument("ground_truth")
    sp.add_argument("detections")
    sp.add_argument("--iou-threshold", type=float, default=0.5)
    sp.add_argument("--continuous", action="store_true",
                    help="all-points AP instead of 11-point")
    sp.add_argument("--bucket-edges", type=float, nargs="+",
                    default=list(DEFAULT_BUCKET_EDGES))
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("flops", help="analytic FLOPs estimate")
    sp.add_argument("arch", choices=["ssd300", "ssd_freq"])
    sp.add_argument("--flops-per-mac", type=int,
                    default=DEFAULT_FLOPS_PER_MAC, choices=[1, 2])
    sp.set_defaults(func=cmd_flops)

    sp = sub.add_parser("bench", help="wall-clock benchmarks")
    sp.add_argument("kind", choices=["decode", "forward"])
    sp.add_argument("--corpus", nargs="+", default=None,
                    help="JPEG files for decode benchmarks")
    sp.add_argument("--mode", choices=["partial", "full", "both"],
                    default="both")
    sp.add_argument("--variant", choices=["frequency", "pixel"],
                    default="frequency")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--batch-size", type=int, default=8)
    sp.add_argument("--batch-count", type=int, default=619)
    sp.add_argument("--repetitions", type=int, default=10)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("FREQDET_LOG", "WARNING"))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UnsupportedMode as exc:
        print(f"unsupported mode: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except JpegError as exc:
        print(f"decode error: {exc}", file=sys.stderr)
        return EXIT_DECODE
    except FileNotFoundError as exc:
        print(f"file not found: {exc.filename}", file=sys.stderr)
        return EXIT_USAGE
    except FreqdetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
