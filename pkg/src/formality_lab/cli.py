"""Command-line entry point.

One subcommand: ``formality-lab run <manifest>``.  The manifest is the
single source of truth for a batch of checks; the flags only control
output format, parallelism, and where the report goes.

Exit codes: 0 all pass-type jobs pass, 1 any check failure, 2 on usage,
parse, or resolution errors.
"""

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor

from .core.series import WindowOverflow
from .manifest import ManifestError, load_manifest
from .report import Report, emit
from .suites import OPS, JobOutcome, check_job_args, expand_suite, run_job


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="formality-lab",
        description="Run exact identity checks declared in a manifest.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    run = sub.add_parser("run", help="execute a manifest and report results")
    run.add_argument("manifest", help="path to the manifest file")
    run.add_argument(
        "--format",
        choices=("text", "structured"),
        default="text",
        help="report rendering (default: text)",
    )
    run.add_argument(
        "--jobs",
        type=_positive_int,
        default=1,
        metavar="N",
        help="number of jobs to run concurrently (default: 1)",
    )
    run.add_argument(
        "--out",
        default=None,
        metavar="PATH",
        help="write the report to a file instead of stdout",
    )
    return parser


def _execute(job, mf):
    """One job to one outcome; math failures become fail outcomes, while
    reference/configuration errors propagate as ManifestError."""
    try:
        return run_job(job, mf)
    except ManifestError:
        raise
    except WindowOverflow as e:
        return JobOutcome(
            "fail", f"{job.op}: series window overflow", {}, [str(e)]
        )
    except Exception as e:
        return JobOutcome(
            "fail",
            f"{job.op}: {type(e).__name__}",
            {},
            [f"{type(e).__name__}: {e}"],
        )


def main(argv=None):
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    try:
        mf = load_manifest(ns.manifest, known_ops=OPS, expand=expand_suite)
        for job in mf.jobs:
            check_job_args(job, mf)
    except ManifestError as e:
        print(f"formality-lab: {e}", file=sys.stderr)
        return 2

    outcomes = [None] * len(mf.jobs)
    errors = [None] * len(mf.jobs)

    def worker(i):
        try:
            outcomes[i] = _execute(mf.jobs[i], mf)
        except ManifestError as e:
            errors[i] = e

    if ns.jobs > 1 and len(mf.jobs) > 1:
        with ThreadPoolExecutor(max_workers=ns.jobs) as pool:
            list(pool.map(worker, range(len(mf.jobs))))
    else:
        for i in range(len(mf.jobs)):
            worker(i)

    for e in errors:
        if e is not None:
            print(f"formality-lab: {e}", file=sys.stderr)
            return 2

    rep = Report(mf.model, list(zip(mf.jobs, outcomes)))
    doc = emit(rep, ns.format)
    if ns.out:
        try:
            with open(ns.out, "w", encoding="utf-8") as fh:
                fh.write(doc)
        except OSError as e:
            print(f"formality-lab: cannot write {ns.out}: {e}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(doc)
    return 1 if rep.failed else 0


if __name__ == "__main__":
    sys.exit(main())
