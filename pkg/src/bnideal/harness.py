"""Network enumeration and batch classification with caching and per-row budgets."""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
import json
import logging
import multiprocessing as mp
import os
import random
import re
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

from . import cache as gbcache
from .algebra import DEFAULT_CHARACTERISTIC, Field
from .bayes import Network

log = logging.getLogger(__name__)

MODES = ("table1", "five-sample", "five-full", "single")
CSV_HEADER = ["index", "codim", "degree", "mingens", "network", "local", "global"]

# Five-node networks discussed by name, as children lists.
NAMED = {
    "K23": [[], [1], [1], [1], [2, 3, 4]],
    "G23": [[], [1], [2], [2], [2]],
    "G138": [[], [1], [1], [1], [2, 3, 4]],
    "G201": [[], [1], [1, 2], [1, 2], [3, 4]],
    "G214": [[], [1], [1, 2], [3], [1, 2, 4]],
    "G265": [[], [1], [1, 2], [1, 2], [2, 3, 4]],
    "G269": [[], [1], [1, 2], [2, 3], [1, 2, 4]],
}
FIVE_SAMPLE = ("G23", "G201", "G214", "G265", "G269")
HEAVY = ("K23", "G23")  # rows that get the longer budget


# ----------------------------------------------------------------------------
# golden table


def golden_table1() -> list[dict]:
    text = resources.files("bnideal").joinpath("data/table1.csv").read_text()
    return list(csv.DictReader(io.StringIO(text)))


def golden_table1_csv() -> str:
    return resources.files("bnideal").joinpath("data/table1.csv").read_text()


def parse_children(text: str) -> list[list[int]]:
    """``"{}, {1}, {1, 2}"`` to ``[[], [1], [1, 2]]``."""
    return [[int(x) for x in part.split(",") if x.strip()]
            for part in re.findall(r"\{([^}]*)\}", text)]


def table1_networks() -> list[tuple[int, Network]]:
    return [(int(r["index"]), Network.from_children(parse_children(r["network"])))
            for r in golden_table1()]


# ----------------------------------------------------------------------------
# enumeration up to isomorphism


def _encode(edges, n: int) -> int:
    code = 0
    for i, j in edges:
        code |= 1 << ((i - 1) * n + (j - 1))
    return code


def canonical_key(net: Network) -> tuple:
    """Minimum adjacency encoding over all vertex permutations, plus the sorted level vector."""
    n = net.n
    best = None
    for perm in itertools.permutations(range(1, n + 1)):
        code = _encode(((perm[i - 1], perm[j - 1]) for i, j in net.edges), n)
        if best is None or code < best:
            best = code
    return (n, best, tuple(sorted(net.levels)))


def _downward_form(net: Network) -> Network:
    """Isomorphic copy with edges pointing downwards and minimal encoding among those."""
    n = net.n
    best = None
    for perm in itertools.permutations(range(1, n + 1)):
        edges = [(perm[i - 1], perm[j - 1]) for i, j in net.edges]
        if any(i < j for i, j in edges):
            continue
        code = _encode(edges, n)
        if best is None or code < best[0]:
            best = (code, edges)
    return Network([2] * n, best[1])


def enumerate_dags(n: int) -> list[Network]:
    """Non-complete DAGs on n <= 5 binary nodes up to isomorphism.

    For n = 4 the golden table's labeling and order are used; otherwise
    networks are sorted by decreasing edge count, then canonical encoding.
    """
    if n > 5 or n < 1:
        raise ValueError("enumeration is limited to 1..5 nodes")
    possible = [(i, j) for i in range(1, n + 1) for j in range(1, i)]
    found: dict[tuple, Network] = {}
    for mask in range(1 << len(possible)):
        edges = [e for k, e in enumerate(possible) if mask >> k & 1]
        if len(edges) == len(possible):
            continue
        net = Network([2] * n, edges)
        key = canonical_key(net)
        if key not in found:
            found[key] = net
    if n == 4:
        order = []
        for _, net in table1_networks():
            del found[canonical_key(net)]
            order.append(net)
        if found:
            raise RuntimeError("the golden table does not cover every four-node network")
        return order
    nets = [_downward_form(net) for net in found.values()]
    nets.sort(key=lambda g: (-len(g.edges), canonical_key(g)[1]))
    return nets


def table1_index(net: Network) -> int | None:
    key = canonical_key(net.with_levels([2] * net.n))
    for idx, g in table1_networks():
        if canonical_key(g) == key:
            return idx
    return None


# ----------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    characteristic: int = DEFAULT_CHARACTERISTIC
    seed: int = 0
    degree_cap: int = 20
    time_budget: float | None = 600.0
    heavy_budget: float | None = 7200.0
    cache_dir: str | None = None
    workers: int = 1
    mode: str = "table1"
    allow_full: bool = False
    networks: list = field(default_factory=list)  # for five-sample / single: children lists or names
    levels: list | None = None
    certify: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.mode == "five-full" and not self.allow_full:
            raise ValueError("five-full mode requires the explicit opt-in flag")
        if self.characteristic <= 0 or self.workers <= 0 or self.degree_cap <= 0:
            raise ValueError("characteristic, workers and degree cap must be positive")
        for b in (self.time_budget, self.heavy_budget):
            if b is not None and b <= 0:
                raise ValueError("time budgets must be positive")

    @classmethod
    def from_env(cls, **kw) -> "RunConfig":
        env = {}
        if os.environ.get("BNIDEAL_PRIME"):
            env["characteristic"] = int(os.environ["BNIDEAL_PRIME"])
        if os.environ.get("BNIDEAL_SEED"):
            env["seed"] = int(os.environ["BNIDEAL_SEED"])
        if os.environ.get("BNIDEAL_CACHE"):
            env["cache_dir"] = os.environ["BNIDEAL_CACHE"]
        env.update({k: v for k, v in kw.items() if v is not None})
        return cls(**env)


# ----------------------------------------------------------------------------
# jobs


def _row_key(children, levels, characteristic: int, models) -> str:
    blob = json.dumps([children, levels, characteristic, list(models)])
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


def _classify_job(args) -> dict:
    children, levels, index, characteristic, cache_dir, models, certify, degree_cap = args
    from . import groebner
    from .decomposition import classify
    groebner.set_default_degree_cap(degree_cap)
    if cache_dir:
        gbcache.configure(Path(cache_dir) / "gb")
    net = Network.from_children(children, levels)
    row = classify(net, index, certify=certify, field=Field(characteristic), models=models)
    return {"csv": row.csv_fields(), "json": row.to_json()}


def _unknown_row(children, levels, index, reason: str) -> dict:
    ch = ", ".join("{" + ", ".join(map(str, sorted(c))) + "}" for c in children)
    unk = {"verdict": "unknown", "components": None, "witness": reason}
    return {"csv": ["" if index is None else str(index), "", "", "", ch, "unknown", "unknown"],
            "json": {"index": index, "network": {"children": children, "levels": levels},
                     "local": unk, "global": unk, "error": reason}}


@dataclass
class Report:
    rows: list

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow(r["csv"])
        return buf.getvalue()

    def json(self) -> str:
        return json.dumps([r["json"] for r in self.rows], indent=2)

    def unknowns(self) -> int:
        return sum(1 for r in self.rows if "unknown" in r["csv"][5:])


def _jobs(config: RunConfig) -> list[tuple]:
    if config.mode == "table1":
        return [(net.children_lists(), config.levels or [2] * 4, idx, ("local", "global"))
                for idx, net in table1_networks()]
    if config.mode == "five-full":
        return [(net.children_lists(), [2] * 5, k, ("global",))
                for k, net in enumerate(enumerate_dags(5), start=1)]
    specs = config.networks or (list(FIVE_SAMPLE) if config.mode == "five-sample" else [])
    if not specs:
        raise ValueError("single mode needs a network")
    # the sampled five-node results concern global ideals; the local column is
    # filled only where the two ideals coincide
    models = ("global",) if config.mode == "five-sample" else ("local", "global")
    out = []
    for spec in specs:
        if isinstance(spec, Network):
            children, levels = spec.children_lists(), list(spec.levels)
        else:
            children = NAMED[spec] if isinstance(spec, str) else spec
            levels = config.levels or [2] * len(children)
        idx = table1_index(Network.from_children(children, levels)) if len(children) == 4 else None
        out.append((children, levels, idx, models))
    return out


def _budget(config: RunConfig, children, levels) -> float | None:
    if config.time_budget is None:
        return None
    key = canonical_key(Network.from_children(children, levels))
    heavy = {canonical_key(Network.from_children(NAMED[h], [2] * 5)) for h in HEAVY}
    if key in heavy and config.heavy_budget is not None:
        return max(config.time_budget, config.heavy_budget)
    return config.time_budget


def run_classification(config: RunConfig) -> Report:
    """Classify every network of the configured mode; rows in a deterministic order."""
    random.seed(config.seed)
    jobs = _jobs(config)
    row_dir = Path(config.cache_dir) / "rows" if config.cache_dir else None
    if row_dir:
        row_dir.mkdir(parents=True, exist_ok=True)
    results: list = [None] * len(jobs)
    pending = []
    for k, (children, levels, idx, models) in enumerate(jobs):
        if row_dir:
            path = row_dir / f"{_row_key(children, levels, config.characteristic, models)}.json"
            if path.exists():
                results[k] = json.loads(path.read_text())
                continue
        pending.append(k)

    def args(k):
        children, levels, idx, models = jobs[k]
        return (children, levels, idx, config.characteristic, config.cache_dir, models,
                config.certify, config.degree_cap)

    if config.time_budget is None and config.workers == 1:
        for k in pending:
            results[k] = _safe(args(k))
    elif pending:
        ctx = mp.get_context("fork")
        with ctx.Pool(config.workers, maxtasksperchild=1) as pool:
            handles = {k: pool.apply_async(_safe, (args(k),)) for k in pending}
            for k in pending:
                try:
                    children, levels = jobs[k][:2]
                    results[k] = handles[k].get(timeout=_budget(config, children, levels))
                except mp.TimeoutError:
                    children, levels, idx, _ = jobs[k]
                    results[k] = _unknown_row(children, levels, idx, "time budget exceeded")
            pool.terminate()
    for k in pending:
        if row_dir and "error" not in results[k]["json"]:
            children, levels, idx, models = jobs[k]
            path = row_dir / f"{_row_key(children, levels, config.characteristic, models)}.json"
            path.write_text(json.dumps(results[k]))
    return Report(results)


def _safe(args) -> dict:
    try:
        return _classify_job(args)
    except Exception as exc:  # recorded, never fatal for the batch
        log.warning("classification failed: %s", exc)
        children, levels, idx = args[0], args[1], args[2]
        return _unknown_row(children, levels, idx, f"{type(exc).__name__}: {exc}")


def compare_with_golden(report: Report) -> list[str]:
    """Lines where the report's CSV differs from the golden table."""
    want = golden_table1_csv().splitlines()
    got = report.csv().splitlines()
    return [f"expected {a!r} got {b!r}" for a, b in itertools.zip_longest(want, got) if a != b]


def config_summary(config: RunConfig) -> dict:
    return asdict(config)
