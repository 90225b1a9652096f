"""Batch verification of the factorization claims over a corpus.

Each check returns a verdict dict ``{"status", "seconds", "detail",
"failures"}`` where status is ``pass``, ``fail`` or ``skipped``.  A claim
violation raised inside a check is caught and turned into a failure, so one
bad instance never aborts the run.  Entries are independent; with
``jobs > 1`` they are spread over worker processes and merged in corpus
order, so the report does not depend on the job count apart from timings.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations

from . import __version__
from .corpus import CatalogEntry, corpus_hash
from .errors import ClaimViolation, GroupError
from .factorization import (
    Factorization,
    basis_normalizer,
    build_multi_product,
    check_sylow_tower,
    find_cyclic_factorizations,
    find_multi_products,
    largest_prime_sylow_normal,
    permutes,
    prime_divisors,
    product_set,
    sylow_basis,
    sylow_subgroup,
)
from .group import build
from .lattice import (
    cyclic_subgroups,
    derived_series,
    is_metabelian,
    is_nilpotent,
    is_soluble,
    nilpotent_residual,
    normalizer,
    prufer_rank,
)
from .structure import check_uniqueness, decompose, hall_rank_bound, is_supersoluble

SCHEMA_VERSION = 1
CHECKS = (
    "theorem1",
    "rank3",
    "pgroupRank",
    "sylowTower",
    "permutability",
    "lemma26",
    "lemma27",
    "supersoluble",
    "metabelian",
    "lemma51",
)
TIMING_KEYS = frozenset({"seconds", "elapsedSeconds"})
MULTI_FACTORS = 3
MULTI_LIMIT = 2


class _Skip(Exception):
    pass


def _prime_subsets(primes, up_to: int = 3):
    for k in range(1, min(up_to, len(primes)) + 1):
        yield from (list(c) for c in combinations(primes, k))


def _fact_id(i: int, f: Factorization) -> str:
    return f"#{i}(|A|={len(f.A)},|B|={len(f.B)})"


# -- individual checks -------------------------------------------------------


def check_decomposition(entry: CatalogEntry, failures: list[str]) -> dict:
    g = entry.group
    reports = []
    for i, f in enumerate(entry.factorizations):
        rep = decompose(g, f)
        reports.append(rep)
        for name in rep.failed:
            failures.append(f"{_fact_id(i, f)}: {name}")
        if normalizer(g, rep.H) != rep.H:
            failures.append(f"{_fact_id(i, f)}: H is not self-normalizing")
    verdict = check_uniqueness(g, reports[:1])
    if not verdict.deterministic:
        failures.append("decomposition is not deterministic")
    pairs = {tuple(sorted((r.S.bits, r.T.bits))) for r in reports}
    return {"factorizations": len(reports), "distinctST": len(pairs),
            "orders": [list(p) for p in sorted({(len(r.S), len(r.T)) for r in reports})]}


def check_rank3(entry: CatalogEntry, failures: list[str]) -> dict:
    rank = prufer_rank(entry.group)
    if rank > 3:
        failures.append(f"rank {rank} > 3")
    return {"rank": rank}


def check_pgroup_rank(entry: CatalogEntry, failures: list[str]) -> dict:
    primes = prime_divisors(entry.order)
    if len(primes) != 1:
        raise _Skip
    p = primes[0]
    rank = prufer_rank(entry.group)
    bound = 3 if p == 2 else 2
    if rank > bound:
        failures.append(f"{p}-group of rank {rank} > {bound}")
    return {"p": p, "rank": rank, "bound": bound}


def check_sylow_tower_claims(entry: CatalogEntry, failures: list[str]) -> dict:
    g = entry.group
    subsets = 0
    for i, f in enumerate(entry.factorizations):
        for pi in _prime_subsets(f.primes):
            subsets += 1
            try:
                sylow_subgroup(g, f, pi)
            except ClaimViolation as exc:
                failures.append(f"{_fact_id(i, f)}: {exc}")
        for v in check_sylow_tower(g, f).pairs:
            if not v.ok:
                failures.append(f"{_fact_id(i, f)}: pair ({v.p},{v.q}) "
                                f"normalizes={v.normalizes} hall={v.hall}")
    return {"primeSets": subsets}


def check_permutability(entry: CatalogEntry, failures: list[str]) -> dict:
    g = entry.group
    if len(prime_divisors(g.order)) != 1:
        raise _Skip
    cyc = [z for z, _ in cyclic_subgroups(g)]
    pairs = 0
    for i, f in enumerate(entry.factorizations):
        below_a = [z for z in cyc if z <= f.A]
        below_b = [z for z in cyc if z <= f.B]
        for c in below_a:
            for d in below_b:
                pairs += 1
                try:
                    good = permutes(g, c, d)
                except ClaimViolation as exc:
                    good = False
                    failures.append(f"{_fact_id(i, f)}: {exc}")
                if not good:
                    failures.append(f"{_fact_id(i, f)}: subgroups of orders "
                                    f"{len(c)} and {len(d)} do not permute")
    return {"pairs": pairs}


def check_basis_normalizer(entry: CatalogEntry, failures: list[str]) -> dict:
    g = entry.group
    for i, f in enumerate(entry.factorizations):
        try:
            n = basis_normalizer(g, sylow_basis(g, f))
        except ClaimViolation as exc:
            failures.append(f"{_fact_id(i, f)}: {exc}")
            continue
        rep = decompose(g, f)
        if product_set(g, rep.Astab, rep.Bstab) != n:
            failures.append(f"{_fact_id(i, f)}: basis normalizer differs from A*B*")
        if not is_nilpotent(g, n):
            failures.append(f"{_fact_id(i, f)}: basis normalizer is not nilpotent")
    return {"factorizations": len(entry.factorizations)}


def check_hall_rank(entry: CatalogEntry, failures: list[str]) -> dict:
    g = entry.group
    if not is_soluble(g):
        raise _Skip
    checked = []
    for pi in _prime_subsets(prime_divisors(g.order)):
        try:
            v = hall_rank_bound(g, pi)
        except ClaimViolation as exc:
            failures.append(f"π={pi}: {exc}")
            continue
        checked.append([pi, v.sylow_rank, v.hall_rank])
        if not v.ok:
            failures.append(f"π={pi}: Hall rank {v.hall_rank} > {v.sylow_rank} + 1")
    return {"primeSets": checked}


def check_supersoluble(entry: CatalogEntry, failures: list[str]) -> dict:
    result = is_supersoluble(entry.group)
    if not result:
        failures.append("factorized group is not supersoluble")
    return {"supersoluble": result}


def check_metabelian(entry: CatalogEntry, failures: list[str]) -> dict:
    g = entry.group
    series = derived_series(g)
    derived = series[1] if len(series) > 1 else series[0]
    residual = nilpotent_residual(g)
    if not is_metabelian(g):
        failures.append(f"derived length {len(series) - 1} exceeds 2")
    if not residual <= derived:
        failures.append("nilpotent residual is not inside the derived subgroup")
    return {"derivedLength": len(series) - 1, "residualOrder": len(residual)}


def check_multi_products(entry: CatalogEntry, failures: list[str]) -> dict:
    g = entry.group
    if not entry.multi_products:
        raise _Skip
    sizes: dict[int, int] = {}
    for i, mp in enumerate(entry.multi_products):
        n = len(mp.factors)
        sizes[n] = sizes.get(n, 0) + 1
        rep = largest_prime_sylow_normal(g, mp)
        for name, good in rep.verdicts.items():
            if not good:
                failures.append(f"product #{i} ({n} factors): {name}")
    if not is_supersoluble(g):
        failures.append("multi-product group is not supersoluble")
    return {"products": {str(k): v for k, v in sorted(sizes.items())}}


_RUNNERS = {
    "theorem1": (check_decomposition, True),
    "rank3": (check_rank3, True),
    "pgroupRank": (check_pgroup_rank, True),
    "sylowTower": (check_sylow_tower_claims, True),
    "permutability": (check_permutability, True),
    "lemma26": (check_basis_normalizer, True),
    "lemma27": (check_hall_rank, False),
    "supersoluble": (check_supersoluble, True),
    "metabelian": (check_metabelian, True),
    "lemma51": (check_multi_products, False),
}


# -- entry and corpus drivers -----------------------------------------------


def populate(entry: CatalogEntry) -> CatalogEntry:
    """Attach factorizations and multi-products to ``entry`` in place."""
    g = entry.group
    entry.factorizations = find_cyclic_factorizations(g)
    products = [build_multi_product(g, [f.A, f.B]) for f in entry.factorizations]
    products += find_multi_products(g, MULTI_FACTORS, MULTI_LIMIT)
    entry.multi_products = products
    return entry


def run_entry(entry: CatalogEntry, checks=CHECKS) -> dict:
    populate(entry)
    results = {}
    for name in checks:
        runner, needs_factorization = _RUNNERS[name]
        failures: list[str] = []
        start = time.perf_counter()
        if needs_factorization and not entry.factorizations:
            status, detail = "skipped", {"reason": "no cyclic factorization"}
        else:
            try:
                detail = runner(entry, failures)
                status = "fail" if failures else "pass"
            except _Skip:
                status, detail = "skipped", {"reason": "not applicable"}
            except ClaimViolation as exc:
                failures.append(str(exc))
                status, detail = "fail", {}
        results[name] = {"status": status, "seconds": round(time.perf_counter() - start, 6),
                         "detail": detail, "failures": failures}
    entry.results = results
    three = sum(1 for mp in entry.multi_products if len(mp.factors) >= 3)
    return {"name": entry.name, "order": entry.order, "aliases": list(entry.aliases),
            "digest": entry.group.digest, "factorizations": len(entry.factorizations),
            "multiProducts": len(entry.multi_products), "threeFactorProducts": three,
            "results": results}


def _worker(job: tuple) -> dict:
    name, recipe, aliases, checks, max_order = job
    entry = CatalogEntry(name, recipe, build(recipe, max_order=max_order), list(aliases))
    return run_entry(entry, checks)


def _summarize(rows: list[dict], checks) -> dict:
    counts = {"pass": 0, "fail": 0, "skipped": 0}
    per_check = {name: dict(counts) for name in checks}
    for row in rows:
        for name, verdict in row["results"].items():
            counts[verdict["status"]] += 1
            per_check[name][verdict["status"]] += 1
    return {**counts, "entries": len(rows),
            "factorizationPairs": sum(r["factorizations"] for r in rows),
            "threeFactorProducts": sum(r["threeFactorProducts"] for r in rows),
            "byCheck": per_check}


def run_checks(entries: list[CatalogEntry], checks=CHECKS, jobs: int = 1) -> dict:
    """Verify every entry and assemble the report."""
    checks = tuple(checks)
    unknown = [c for c in checks if c not in _RUNNERS]
    if unknown:
        raise GroupError(f"unknown checks: {', '.join(unknown)}")
    start = time.perf_counter()
    if jobs > 1 and len(entries) > 1:
        top = max(e.order for e in entries)
        jobs_list = [(e.name, e.recipe, tuple(e.aliases), checks, top) for e in entries]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_worker, jobs_list, chunksize=4))
        for entry, row in zip(entries, rows):
            entry.results = row["results"]
    else:
        rows = [run_entry(e, checks) for e in entries]
    return {
        "schemaVersion": SCHEMA_VERSION,
        "toolVersion": __version__,
        "corpusHash": corpus_hash(entries),
        "checks": list(checks),
        "summary": _summarize(rows, checks),
        "entries": rows,
        "elapsedSeconds": round(time.perf_counter() - start, 3),
    }


def strip_timings(obj):
    """Copy of a report with every timing field removed."""
    if isinstance(obj, dict):
        return {k: strip_timings(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [strip_timings(v) for v in obj]
    return obj


def exit_code(report: dict) -> int:
    return 1 if report["summary"]["fail"] else 0
