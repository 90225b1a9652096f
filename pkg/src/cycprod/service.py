"""Operations shared by the HTTP API and the command line.

Every function takes group file text (Cayley or permutation format) plus
plain arguments and returns JSON-ready dicts.  Bad input raises a
:class:`~cycprod.errors.GroupError`; both front ends map that to their own
input-error signal.
"""

from __future__ import annotations

from .corpus import CorpusConfig, corpus_hash, generate_corpus
from .errors import GroupError, NotCyclic, NotPermutable, ProductNotWhole
from .factorization import (
    Factorization,
    build_multi_product,
    find_cyclic_factorizations,
    largest_prime_sylow_normal,
    make_factorization,
)
from .group import DEFAULT_MAX_ORDER, FiniteGroup
from .io import parse_group_text
from .lattice import prufer_rank
from .structure import decompose, is_supersoluble
from .verify import CHECKS, exit_code, run_checks


class NoFactorization(GroupError):
    """The group has no cyclic factorization to decompose."""


def load(text: str, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    return parse_group_text(text, max_order=max_order)


def _factorization_dict(f: Factorization) -> dict:
    d = f.to_dict()
    d["generators"] = [_generator_of(f.A), _generator_of(f.B)]
    return d


def _generator_of(h) -> int:
    g = h.group
    for x in h:
        if g.element_orders[x] == len(h):
            return int(x)
    raise AssertionError("cyclic subgroup without a generator")


def factor(text: str, max_order: int = DEFAULT_MAX_ORDER) -> dict:
    g = load(text, max_order)
    found = find_cyclic_factorizations(g)
    return {"order": g.order, "count": len(found),
            "factorizations": [_factorization_dict(f) for f in found]}


def decomposition(text: str, factors: tuple[int, int] | None = None,
                  max_order: int = DEFAULT_MAX_ORDER) -> dict:
    """Report for the given generator pair, or for the first factorization found."""
    g = load(text, max_order)
    if factors is None:
        found = find_cyclic_factorizations(g)
        if not found:
            raise NoFactorization("the group is not a product of two cyclic subgroups")
        f = found[0]
    else:
        f = make_factorization(g, *factors)
    rep = decompose(g, f)
    return {"order": g.order, "factorization": _factorization_dict(f),
            "report": rep.to_dict(), "ok": rep.ok, "failed": rep.failed}


def rank(text: str, max_order: int = DEFAULT_MAX_ORDER) -> dict:
    g = load(text, max_order)
    return {"order": g.order, "rank": prufer_rank(g)}


def supersoluble(text: str, max_order: int = DEFAULT_MAX_ORDER) -> dict:
    g = load(text, max_order)
    return {"order": g.order, "supersoluble": is_supersoluble(g)}


def multi(text: str, generators: list[int], max_order: int = DEFAULT_MAX_ORDER) -> dict:
    """Validate a product of pairwise permutable cyclic subgroups ``<x_i>``.

    A product that fails validation is a failed check, not an input error;
    it comes back with ``valid = False`` and the reason.
    """
    g = load(text, max_order)
    for x in generators:
        g._check(x)
    try:
        mp = build_multi_product(g, list(generators))
    except (NotCyclic, NotPermutable, ProductNotWhole) as exc:
        return {"order": g.order, "valid": False, "error": type(exc).__name__,
                "message": str(exc), "ok": False}
    rep = largest_prime_sylow_normal(g, mp)
    ss = is_supersoluble(g)
    return {"order": g.order, "valid": True, "factors": mp.to_dict(),
            "largestPrime": {"p": rep.p, "P": rep.P.to_list(), "Q": rep.Q.to_list(),
                             "verdicts": rep.verdicts},
            "supersoluble": ss, "ok": rep.ok and ss}


def corpus_manifest(max_order: int | None = None) -> dict:
    cfg = CorpusConfig.from_env(**({} if max_order is None else {"max_order": max_order}))
    entries = generate_corpus(cfg)
    return {"maxOrder": cfg.max_order, "corpusHash": corpus_hash(entries),
            "count": len(entries), "entries": [e.manifest() for e in entries]}


def verify(max_order: int | None = None, jobs: int = 1, checks=None) -> dict:
    cfg = CorpusConfig.from_env(**({} if max_order is None else {"max_order": max_order}))
    chosen = tuple(checks) if checks else CHECKS
    unknown = [c for c in chosen if c not in CHECKS]
    if unknown:
        raise GroupError(f"unknown checks: {', '.join(unknown)}; known: {', '.join(CHECKS)}")
    report = run_checks(generate_corpus(cfg), chosen, jobs=jobs)
    report["maxOrder"] = cfg.max_order
    return report


__all__ = ["NoFactorization", "corpus_manifest", "decomposition", "exit_code", "factor",
           "load", "multi", "rank", "supersoluble", "verify"]
