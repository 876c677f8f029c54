"""Command-line entry point: ``acimov-lint init|test|flush``."""

from __future__ import annotations

import argparse
import getpass
import hashlib
import json
import logging
import os
import shutil
import subprocess
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, TextIO

from . import __version__
from .engine import OutcomeType, run_project
from .engine.runner import RunResult
from .project import (
    DEFAULT_LAYOUT,
    OUTPUT_DIR,
    PARAMETERS_PATH,
    MalformedConfig,
    RootNotFound,
    VersionDescriptor,
    compute_version,
    load_parameters,
    parameters_path,
)
from .report import ReportContext, hosted_base_url, now_utc, statistics, write_reports
from .report.context import TRIGGERS

log = logging.getLogger("acimov_lint")

SUITES = ("model", "data", "query")
EXIT_OK, EXIT_BLOCKING, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunRequest:
    command: str
    suites: tuple[str, ...] = SUITES
    mode: str = "manual"
    staged_files: Optional[list[str]] = None
    root: Path = field(default_factory=Path.cwd)
    developer: Optional[str] = None
    output: Optional[Path] = None

    def __post_init__(self) -> None:
        if self.command not in ("init", "test", "flush"):
            raise UsageError(f"unknown command {self.command!r}")
        if self.mode not in TRIGGERS:
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.command == "test" and not self.suites:
            raise UsageError("test needs at least one suite")


# -- helpers ---------------------------------------------------------------


def _git(root: Path, *args: str) -> Optional[str]:
    try:
        r = subprocess.run(["git", "-C", str(root), *args], capture_output=True, text=True, timeout=20)
    except (OSError, subprocess.SubprocessError):
        return None
    out = r.stdout.strip()
    return out if r.returncode == 0 and out else None


def resolve_developer(explicit: Optional[str], root: Path) -> str:
    if explicit:
        return explicit
    name = _git(root, "config", "user.name")
    if name:
        return name
    try:
        return getpass.getuser()
    except Exception:
        return "unknown"


def staged_from_git(root: Path) -> Optional[list[str]]:
    out = _git(root, "diff", "--cached", "--name-only", "--diff-filter=ACMR")
    if out is None:
        return None if _git(root, "rev-parse", "--git-dir") is None else []
    return out.splitlines()


def suite_version() -> VersionDescriptor:
    """The test suite as a versioned entity: a hash over the installed package files."""
    pkg = Path(__file__).resolve().parent
    h = hashlib.sha256()
    for p in sorted(pkg.rglob("*")):
        if p.is_file() and p.suffix in (".py", ".pyx", ".json", ".ttl"):
            rel = p.relative_to(pkg).as_posix()
            h.update(f"{rel}\t{hashlib.sha256(p.read_bytes()).hexdigest()}\n".encode())
    return VersionDescriptor(f"acimov-lint {__version__}", h.hexdigest())


def ci_file_base(project: VersionDescriptor) -> Optional[str]:
    env = os.environ
    rev = project.derived_from_commit or project.version
    if env.get("GITHUB_REPOSITORY"):
        server = env.get("GITHUB_SERVER_URL", "https://github.com")
        return f"{server}/{env['GITHUB_REPOSITORY']}/blob/{env.get('GITHUB_SHA', rev)}"
    if env.get("CI_PROJECT_URL"):
        return f"{env['CI_PROJECT_URL']}/-/blob/{env.get('CI_COMMIT_SHA', rev)}"
    return hosted_base_url(project.host_url, rev)


# -- commands --------------------------------------------------------------

SKELETON_DIRS = (
    DEFAULT_LAYOUT["modules"],
    DEFAULT_LAYOUT["domains"],
    DEFAULT_LAYOUT["use_cases"],
    DEFAULT_LAYOUT["custom_model_tests"],
    DEFAULT_LAYOUT["custom_data_tests"],
    OUTPUT_DIR,
)


def cmd_init(req: RunRequest, out: TextIO) -> int:
    root = req.root
    root.mkdir(parents=True, exist_ok=True)
    created = []
    for d in SKELETON_DIRS:
        p = root / d
        if not p.exists():
            p.mkdir(parents=True)
            created.append(d + "/")
        keep = p / ".gitkeep"
        if d != OUTPUT_DIR and not any(p.iterdir()):
            keep.touch()
    params = root / PARAMETERS_PATH
    if not params.exists():
        params.write_text(
            json.dumps(
                {
                    "ontology_namespace": None,
                    "blocking_errors": ["syntax-error"],
                    "skipped_tests": [],
                    "tested_files_exclude": [],
                    "term_distance_threshold": 3,
                    "namespace_distance_max": 2,
                },
                indent=2,
            )
            + "\n",
            encoding="utf-8",
        )
        created.append(PARAMETERS_PATH)
    for c in created:
        print(f"created {c}", file=out)
    if not created:
        print("nothing to do, skeleton already present", file=out)
    return EXIT_OK


def _output_dir(req: RunRequest) -> Path:
    return req.output if req.output is not None else req.root / OUTPUT_DIR


def cmd_flush(req: RunRequest, out: TextIO) -> int:
    d = _output_dir(req)
    removed = 0
    if d.is_dir():
        for p in d.iterdir():
            if p.is_dir() and not p.is_symlink():
                shutil.rmtree(p)
            else:
                p.unlink()
            removed += 1
    print(f"flushed {removed} entr{'y' if removed == 1 else 'ies'} from {d}", file=out)
    return EXIT_OK


def _blocking_lines(result: RunResult) -> list[str]:
    lines = []
    for a in result.assertions:
        for o in a.outcomes:
            if o.type == OutcomeType.MAJOR_FAIL:
                first = o.pointers[0].value if o.pointers else o.description
                files = ", ".join(a.subject.files)
                lines.append(f"BLOCKING {files}: {a.criterion.id}: {o.description or first}")
    return lines


def cmd_test(req: RunRequest, out: TextIO, err: TextIO) -> int:
    root = req.root
    if not root.is_dir():
        raise RootNotFound(f"repository root not found: {root}")
    params = load_parameters(parameters_path(root))
    for w in params.warnings:
        print(f"warning: {w}", file=err)
    staged = req.staged_files
    if req.mode == "pre-commit" and staged is None:
        staged = staged_from_git(root)
        if staged is None:
            raise UsageError("pre-commit mode needs --staged FILE... outside a git work tree")
    result = run_project(root, params, req.suites, staged if req.mode == "pre-commit" else None)

    project = compute_version(root, result.layout, params.host_url)
    ctx = ReportContext(
        project=project,
        test_suite=suite_version(),
        developer=resolve_developer(req.developer, root),
        trigger=req.mode,
        timestamp=now_utc(),
        root=root,
        output_dir=_output_dir(req),
        vocab_namespace=params.report_namespace,
        file_base_url=ci_file_base(project) if req.mode == "ci" else None,
    )
    written = write_reports(result.assertions, ctx, result.profile_results, badges=req.mode == "ci")

    stats = statistics(result.assertions)
    counts = ", ".join(f"{t.value} {n}" for t, n in stats.per_type.items())
    print(f"{len(result.assertions)} assertions, {stats.total} outcomes: {counts}", file=out)
    blocking = _blocking_lines(result)
    for line in blocking:
        print(line, file=out)
    print(f"report: {written.turtle}", file=out)
    print(f"report: {written.markdown}", file=out)
    for b in written.badges:
        print(f"badge: {b}", file=out)
    return EXIT_BLOCKING if blocking else EXIT_OK


# -- argument parsing ------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="acimov-lint", description="Test an ACIMOV ontology repository.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--root", type=Path, default=Path.cwd(), help="repository root (default: cwd)")
        sp.add_argument("--output", type=Path, help="report folder (default: ROOT/.acimov/output)")

    common(sub.add_parser("init", help="create the repository skeleton"))
    common(sub.add_parser("flush", help="empty the report folder"))
    t = sub.add_parser("test", help="run test suites and write reports")
    common(t)
    t.add_argument("--model", action="store_true", help="run the model suite")
    t.add_argument("--data", action="store_true", help="run the data suite")
    t.add_argument("--query", action="store_true", help="run the query suite")
    t.add_argument("--mode", choices=TRIGGERS, default="manual")
    t.add_argument("--developer", help="name recorded as the developer")
    t.add_argument("--staged", nargs="*", metavar="FILE", help="staged files (pre-commit mode)")
    return p


def request_from_args(ns: argparse.Namespace) -> RunRequest:
    root = ns.root.resolve()
    output = ns.output.resolve() if ns.output else None
    if ns.command != "test":
        return RunRequest(ns.command, root=root, output=output)
    suites = tuple(s for s in SUITES if getattr(ns, s))
    return RunRequest(
        "test",
        suites=suites or SUITES,
        mode=ns.mode,
        staged_files=list(ns.staged) if ns.staged is not None else None,
        root=root,
        developer=ns.developer,
        output=output,
    )


def run(req: RunRequest, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    try:
        if req.command == "init":
            return cmd_init(req, out)
        if req.command == "flush":
            return cmd_flush(req, out)
        return cmd_test(req, out, err)
    except (UsageError, RootNotFound, MalformedConfig, OSError) as e:
        print(f"acimov-lint: error: {e}", file=err)
        return EXIT_ERROR


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        req = request_from_args(ns)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"acimov-lint: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    return run(req)


if __name__ == "__main__":
    sys.exit(main())
