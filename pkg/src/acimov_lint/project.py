"""Repository layout, parameters and test-subject assembly."""

from __future__ import annotations

import fnmatch
import hashlib
import json
import logging
import os
import re
import subprocess
from collections import Counter
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Optional, Sequence, Union

from .errors import ParseError
from .rdf.namespaces import OWL, RDF, STANDARD_PREFIXES, namespace_of
from .rdf.ops import merge_graphs
from .rdf.terms import Graph, Iri
from .turtle import parse_turtle_file

log = logging.getLogger(__name__)

PARAMETERS_PATH = ".acimov/parameters.json"
OUTPUT_DIR = ".acimov/output"
CONFIG_ENV = "ACIMOV_LINT_CONFIG"

DEFAULT_LAYOUT = {
    "modules": "src",
    "domains": "domains",
    "use_cases": "use-cases",
    "modelet_file": "onto.ttl",
    "custom_model_tests": ".acimov/custom-tests/model",
    "custom_data_tests": ".acimov/custom-tests/data",
}


class RootNotFound(FileNotFoundError):
    pass


class MalformedConfig(ValueError):
    def __init__(self, message: str, line: Optional[int] = None) -> None:
        where = f" (line {line})" if line is not None else ""
        super().__init__(message + where)
        self.line = line


@dataclass(frozen=True)
class Parameters:
    ontology_namespace: Optional[str] = None
    blocking_errors: frozenset = frozenset({"syntax-error"})
    skipped_tests: tuple[tuple[str, Optional[str]], ...] = ()
    tested_files_exclude: tuple[str, ...] = ()
    term_distance_threshold: int = 3
    namespace_distance_max: int = 2
    prefix_registry_path: Optional[str] = None
    max_iterations: int = 10_000
    layout_overrides: dict = field(default_factory=dict)
    report_namespace: str = "urn:acimov-lint:vocab#"
    report_inherited_findings: bool = False
    host_url: Optional[str] = None
    warnings: tuple[str, ...] = ()

    def is_skipped(self, criterion_id: str, files: Sequence[str]) -> bool:
        for cid, glob in self.skipped_tests:
            if cid != criterion_id:
                continue
            if glob is None or any(fnmatch.fnmatchcase(f, glob) for f in files):
                return True
        return False


def _line_of_key(text: str, key: str) -> Optional[int]:
    m = re.search(r'"' + re.escape(key) + r'"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _positive_int(v: Any) -> bool:
    return isinstance(v, int) and not isinstance(v, bool) and v >= 1


def _str_list(v: Any) -> bool:
    return isinstance(v, list) and all(isinstance(x, str) for x in v)


def parameters_from_text(text: str) -> Parameters:
    from .engine.criteria import is_known_criterion

    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedConfig(f"invalid JSON: {e.msg}", e.lineno) from None
    if not isinstance(raw, dict):
        raise MalformedConfig("parameters must be a JSON object", 1)

    def bad(key: str, why: str) -> MalformedConfig:
        return MalformedConfig(f"{key}: {why}", _line_of_key(text, key))

    known = {f.name for f in fields(Parameters)} - {"warnings"}
    values: dict[str, Any] = {}
    warnings: list[str] = []
    for key, v in raw.items():
        if key not in known:
            warnings.append(f"unknown parameter {key!r} ignored")
            continue
        if key in ("term_distance_threshold", "namespace_distance_max", "max_iterations"):
            if not _positive_int(v):
                raise bad(key, "expected an integer >= 1")
            values[key] = v
        elif key == "blocking_errors":
            if not _str_list(v):
                raise bad(key, "expected a list of criterion ids")
            unknown = [x for x in v if not is_known_criterion(x)]
            if unknown:
                raise bad(key, f"unknown criterion id(s) {unknown}")
            values[key] = frozenset(v)
        elif key == "skipped_tests":
            if not isinstance(v, list):
                raise bad(key, "expected a list")
            items = []
            for x in v:
                if isinstance(x, str):
                    items.append((x, None))
                elif isinstance(x, dict) and isinstance(x.get("criterion"), str) and isinstance(x.get("files", ""), str):
                    items.append((x["criterion"], x.get("files")))
                else:
                    raise bad(key, 'entries are ids or {"criterion": id, "files": glob}')
            for cid, _ in items:
                if not is_known_criterion(cid):
                    warnings.append(f"skipped_tests names unknown criterion {cid!r}")
            values[key] = tuple(items)
        elif key == "tested_files_exclude":
            if not _str_list(v):
                raise bad(key, "expected a list of globs")
            values[key] = tuple(v)
        elif key == "layout_overrides":
            if not isinstance(v, dict) or not all(isinstance(x, str) for x in v.values()):
                raise bad(key, "expected an object of strings")
            extra = set(v) - set(DEFAULT_LAYOUT)
            if extra:
                warnings.append(f"unknown layout roles {sorted(extra)} ignored")
            values[key] = {k: x for k, x in v.items() if k in DEFAULT_LAYOUT}
        elif key == "report_inherited_findings":
            if not isinstance(v, bool):
                raise bad(key, "expected true or false")
            values[key] = v
        else:
            if v is not None and not isinstance(v, str):
                raise bad(key, "expected a string")
            values[key] = v
    return Parameters(**values, warnings=tuple(warnings))


def load_parameters(path: Union[str, Path, None] = None) -> Parameters:
    """Parameters from a JSON file; an absent file means all defaults."""
    if path is None or not Path(path).is_file():
        return Parameters()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError:
        raise MalformedConfig(f"{path} is not UTF-8 text", None) from None
    return parameters_from_text(text)


def parameters_path(root: Union[str, Path]) -> Path:
    env = os.environ.get(CONFIG_ENV)
    return Path(env) if env else Path(root) / PARAMETERS_PATH


# -- layout ---------------------------------------------------------------


@dataclass(frozen=True)
class ProjectLayout:
    root: Path
    modules: tuple[str, ...] = ()
    modelets: tuple[tuple[str, str, str], ...] = ()
    datasets: tuple[tuple[str, str, str], ...] = ()
    questions: tuple[tuple[str, str, str], ...] = ()
    use_cases: tuple[tuple[str, str], ...] = ()
    custom_model_tests: tuple[str, ...] = ()
    custom_data_tests: tuple[str, ...] = ()

    def all_files(self) -> list[str]:
        files = list(self.modules)
        for group in (self.modelets, self.datasets, self.questions):
            files.extend(x[2] for x in group)
        files.extend(x[1] for x in self.use_cases)
        files.extend(self.custom_model_tests)
        files.extend(self.custom_data_tests)
        return sorted(set(files))


def _walk(root: Path, sub: str, pattern: str) -> list[str]:
    base = root / sub
    if not base.is_dir():
        return []
    return sorted(p.relative_to(root).as_posix() for p in base.rglob(pattern) if p.is_file())


def scan_repository(root: Union[str, Path], params: Optional[Parameters] = None) -> ProjectLayout:
    root = Path(root)
    if not root.is_dir():
        raise RootNotFound(f"repository root not found: {root}")
    params = params or Parameters()
    roles = {**DEFAULT_LAYOUT, **params.layout_overrides}
    excludes = params.tested_files_exclude

    def keep(rel: str) -> bool:
        return not any(fnmatch.fnmatchcase(rel, g) for g in excludes)

    modules = [f for f in _walk(root, roles["modules"], "*.ttl") if keep(f)]

    modelets, datasets, questions = [], [], []
    dom_root = root / roles["domains"]
    if dom_root.is_dir():
        for f in _walk(root, roles["domains"], "*"):
            parts = Path(f).relative_to(roles["domains"]).parts
            if len(parts) != 3 or not keep(f):
                continue
            domain, scenario, name = parts
            if name.endswith(".rq"):
                questions.append((domain, scenario, f))
            elif name == roles["modelet_file"]:
                modelets.append((domain, scenario, f))
            elif name.endswith(".ttl"):
                datasets.append((domain, scenario, f))

    use_cases = []
    for f in _walk(root, roles["use_cases"], "*.ttl"):
        if not keep(f):
            continue
        parts = Path(f).relative_to(roles["use_cases"]).parts
        use_cases.append((parts[0] if len(parts) > 1 else Path(parts[0]).stem, f))

    return ProjectLayout(
        root=root,
        modules=tuple(modules),
        modelets=tuple(sorted(modelets)),
        datasets=tuple(sorted(datasets)),
        questions=tuple(sorted(questions)),
        use_cases=tuple(sorted(use_cases)),
        custom_model_tests=tuple(f for f in _walk(root, roles["custom_model_tests"], "*.ttl") if keep(f)),
        custom_data_tests=tuple(f for f in _walk(root, roles["custom_data_tests"], "*.ttl") if keep(f)),
    )


# -- subjects -------------------------------------------------------------

SUBJECT_KINDS = (
    "Module",
    "Modelet",
    "ModuleModeletMerge",
    "ModulesMerge",
    "WholeMerge",
    "Dataset",
    "UseCase",
    "Query",
)
_ID_PREFIX = {
    "Module": "module",
    "Modelet": "modelet",
    "ModuleModeletMerge": "module+modelet",
    "ModulesMerge": "modules-merge",
    "WholeMerge": "whole-merge",
    "Dataset": "dataset",
    "UseCase": "use-case",
    "Query": "query",
}


@dataclass(frozen=True)
class TestSubject:
    __test__ = False

    id: str
    kind: str
    files: tuple[str, ...]
    graph: Optional[Graph] = field(default=None, compare=False, repr=False)
    error: Optional[ParseError] = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.files:
            raise ValueError("a test subject needs at least one file")
        if self.kind not in SUBJECT_KINDS:
            raise ValueError(f"unknown subject kind {self.kind!r}")


def subject_id(kind: str, files: Sequence[str]) -> str:
    return f"{_ID_PREFIX[kind]}:{'+'.join(files)}"


class GraphCache:
    """Parses each file once per run; failures are remembered too."""

    def __init__(self, root: Union[str, Path]) -> None:
        self.root = Path(root)
        self._cache: dict[str, tuple[Optional[Graph], Optional[ParseError]]] = {}

    def load(self, rel: str) -> tuple[Optional[Graph], Optional[ParseError]]:
        if rel not in self._cache:
            try:
                self._cache[rel] = (parse_turtle_file(self.root / rel).graph, None)
            except ParseError as e:
                self._cache[rel] = (None, e)
        return self._cache[rel]


def _single(kind: str, rel: str, cache: GraphCache) -> TestSubject:
    g, err = cache.load(rel)
    return TestSubject(subject_id(kind, [rel]), kind, (rel,), g, err)


def _merged(kind: str, files: Sequence[str], cache: GraphCache) -> TestSubject:
    graphs = [cache.load(f)[0] for f in files]
    return TestSubject(subject_id(kind, files), kind, tuple(files), merge_graphs(graphs))  # type: ignore[arg-type]


def assemble_model_subjects(layout: ProjectLayout, cache: Optional[GraphCache] = None) -> list[TestSubject]:
    """Individual modules and modelets, module x modelet merges, the
    merge of all valid modules and the merge of everything valid."""
    cache = cache or GraphCache(layout.root)
    modules = [_single("Module", f, cache) for f in layout.modules]
    modelets = [_single("Modelet", m[2], cache) for m in layout.modelets]
    ok_mod = [s.files[0] for s in modules if s.graph is not None]
    ok_let = [s.files[0] for s in modelets if s.graph is not None]
    out = modules + modelets
    for m in ok_mod:
        for d in ok_let:
            out.append(_merged("ModuleModeletMerge", [m, d], cache))
    if ok_mod:
        out.append(_merged("ModulesMerge", ok_mod, cache))
    if ok_let:
        out.append(_merged("WholeMerge", ok_mod + ok_let, cache))
    return out


def assemble_data_subjects(layout: ProjectLayout, cache: Optional[GraphCache] = None) -> list[TestSubject]:
    cache = cache or GraphCache(layout.root)
    out = [_single("Dataset", d[2], cache) for d in layout.datasets]
    out += [_single("UseCase", u[1], cache) for u in layout.use_cases]
    return out


def assemble_query_subjects(layout: ProjectLayout) -> list[TestSubject]:
    return [TestSubject(subject_id("Query", [q[2]]), "Query", (q[2],)) for q in layout.questions]


def ontology_graph(layout: ProjectLayout, cache: GraphCache) -> Optional[Graph]:
    """Merge of every parse-valid module and modelet, or None when nothing parsed."""
    files = list(layout.modules) + [m[2] for m in layout.modelets]
    graphs = [g for g in (cache.load(f)[0] for f in files) if g is not None]
    return merge_graphs(graphs) if graphs else None


_VOCAB_NAMESPACES = tuple(STANDARD_PREFIXES.values())


def infer_namespace(graphs: Sequence[Graph]) -> Optional[str]:
    """Best guess at the ontology namespace when parameters do not set one.

    Prefers the owl:Ontology IRI (with its ``#`` or ``/`` separator),
    otherwise the most frequent namespace among subject IRIs outside the
    standard vocabularies.
    """
    counts: Counter = Counter()
    onto: list[str] = []
    for g in graphs:
        for s in g.subjects(RDF.type, OWL.Ontology):
            if isinstance(s, Iri):
                onto.append(s.value)
        for s in g.subject_set():
            if isinstance(s, Iri) and not s.value.startswith(_VOCAB_NAMESPACES):
                counts[namespace_of(s)] += 1
    for iri in sorted(onto):
        if iri.endswith(("#", "/")):
            return iri
        for sep in ("#", "/"):
            if counts.get(iri + sep):
                return iri + sep
    if not counts:
        return None
    return min(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]


# -- versioning -----------------------------------------------------------


@dataclass(frozen=True)
class VersionDescriptor:
    host_url: str
    version: str
    derived_from_commit: Optional[str] = None


def _git(root: Path, *args: str) -> Optional[str]:
    try:
        r = subprocess.run(
            ["git", "-C", str(root), *args],
            capture_output=True,
            text=True,
            timeout=20,
        )
    except (OSError, subprocess.SubprocessError):
        return None
    return r.stdout if r.returncode == 0 else None


def files_digest(root: Path, files: Sequence[str]) -> str:
    h = hashlib.sha256()
    for rel in sorted(files):
        fh = hashlib.sha256((root / rel).read_bytes()).hexdigest()
        h.update(f"{rel}\t{fh}\n".encode("utf-8"))
    return h.hexdigest()


def compute_version(root: Union[str, Path], layout: ProjectLayout, host_url: Optional[str] = None) -> VersionDescriptor:
    root = Path(root)
    files = layout.all_files()
    head = _git(root, "rev-parse", "--verify", "-q", "HEAD")
    head = head.strip() if head else None
    if host_url is None:
        remote = _git(root, "remote", "get-url", "origin")
        host_url = remote.strip() if remote and remote.strip() else str(root.resolve())
    if head:
        status = _git(root, "status", "--porcelain", "--untracked-files=all", "--", *files) if files else ""
        if status is not None and not status.strip():
            return VersionDescriptor(host_url, head)
    return VersionDescriptor(host_url, files_digest(root, files), head)


def with_namespace(params: Parameters, ns: Optional[str]) -> Parameters:
    return replace(params, ontology_namespace=ns) if ns and not params.ontology_namespace else params
