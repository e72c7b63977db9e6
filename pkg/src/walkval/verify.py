"""Verification sweeps: compute a valuation for each ``n`` and compare it with
its lower bound and with the predicted equality cases."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
import json
import math
import operator

from .carryfree import carry_free_sums
from .numth import digit_sum, digits, nonzero_digit_count, nu
from .walks import (
    SequenceCache,
    abelian_square_count,
    chan_zudilin_rhs,
    gen_domb,
    grid_colorings,
    no_adjacent_ones,
    ones_before_zeros,
    split_identity_check,
    theorem_check,
    theorem_part,
    walk_count,
)

# name -> (default parameters, first n)
_SPECS: dict[str, tuple[dict[str, int], int]] = {
    "theorem-a": ({"d": 1}, 1),
    "theorem-b": ({"d": 2}, 1),
    "theorem-c": ({"d": 4}, 1),
    "theorem-d": ({"d": 8}, 1),
    "prop-odd": ({}, 1),
    "prop-pow": ({"e": 2}, 1),
    "prop-domb": ({}, 1),
    "prop-gdomb": ({"a": 2, "b": 1}, 1),
    "prop-mult": ({"k": 1}, 1),
    "prop-tri": ({}, 1),
    "prop-prime": ({"p": 3, "k": 1}, 1),
    "identity-X": ({}, 0),
    "identity-Wsquare": ({"a": 4, "b": 2}, 0),
    "grid-equal": ({}, 0),
}

SCENARIO_NAMES = tuple(_SPECS)


@dataclass(frozen=True)
class Scenario:
    name: str
    params: tuple[tuple[str, int], ...] = ()

    @property
    def kwargs(self) -> dict[str, int]:
        return dict(self.params)

    @property
    def first_n(self) -> int:
        return _SPECS[self.name][1]

    def describe(self) -> str:
        if not self.params:
            return self.name
        return self.name + " " + " ".join(f"{k}={v}" for k, v in self.params)


def get_scenario(name: str, **params: int) -> Scenario:
    if name not in _SPECS:
        raise ValueError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIO_NAMES)}")
    defaults = _SPECS[name][0]
    unknown = set(params) - set(defaults)
    if unknown:
        raise ValueError(f"scenario {name} takes no parameter(s) {', '.join(sorted(unknown))}")
    merged = {**defaults, **{k: int(v) for k, v in params.items() if v is not None}}
    _validate(name, merged)
    return Scenario(name, tuple(sorted(merged.items())))


def _validate(name: str, q: dict[str, int]) -> None:
    if name.startswith("theorem-"):
        d = q["d"]
        if d < 1:
            raise ValueError("d must be positive")
        if theorem_part(d) != name[-1]:
            raise ValueError(f"d={d} belongs to theorem part ({theorem_part(d)}), not ({name[-1]})")
    elif name == "prop-pow" and q["e"] < 2:
        raise ValueError("prop-pow needs e >= 2")
    elif name == "prop-gdomb" and (min(q["a"], q["b"]) < 0 or q["a"] + q["b"] < 2):
        raise ValueError("prop-gdomb needs a, b >= 0 with a + b >= 2")
    elif name == "prop-mult" and q["k"] < 1:
        raise ValueError("prop-mult needs k >= 1")
    elif name == "prop-prime":
        from .numth import check_prime

        check_prime(q["p"])
        if q["k"] < 1:
            raise ValueError("prop-prime needs k >= 1")
    elif name == "identity-Wsquare" and min(q["a"], q["b"]) < 1:
        raise ValueError("identity-Wsquare needs a, b >= 1")


@dataclass(frozen=True)
class Row:
    """One ``n`` of a sweep.

    For valuation scenarios ``valuation`` is exact, or ``None`` when only a
    lower bound ``floor`` is certified.  For identity scenarios both are
    ``None`` and ``equal`` means both sides agree.
    """

    n: int
    valuation: int | None
    bound: int | None
    equal: bool
    predicted: bool
    passed: bool
    floor: int | None = None

    def valuation_text(self) -> str:
        if self.valuation is not None:
            return str(self.valuation)
        if self.floor is not None:
            return f">={self.floor}"
        return "-"


def _valuation_row(n: int, value: int | None, bound: int, predicted: bool,
                   floor: int | None = None) -> Row:
    if value is None:
        # only "valuation >= floor" is known; that settles the row iff floor > bound
        certified = floor is not None and floor > bound
        return Row(n, None, bound, False, predicted, certified and not predicted, floor)
    equal = value == bound
    return Row(n, value, bound, equal, predicted, value >= bound and equal == predicted)


def _identity_row(n: int, equal: bool) -> Row:
    return Row(n, None, None, equal, True, equal)


def ternary_equality_shape(n: int) -> bool:
    """Expansion in base 3 starts with 1 and avoids the subwords 11 and 02."""
    s = "".join(map(str, digits(n, 3)))
    return s[0] == "1" and "11" not in s and "02" not in s


@lru_cache(maxsize=None)
def _prime_automaton(p: int, k: int):
    from .automaton import HALT_SINGLE, minimize, synthesize

    return minimize(synthesize(p, k * p, [-1], 1, HALT_SINGLE, "digit-sum"))


@lru_cache(maxsize=4)
def _odd_binomial_valuations(n_max: int) -> tuple[int, ...]:
    """``nu_2`` of the sum of the odd entries of Pascal rows ``0..n_max``, exactly.

    ``C(n, k)`` is odd iff ``k`` is a binary submask of ``n``; rows are built
    by addition, which is far cheaper than a ``math.comb`` per entry.
    """
    out = []
    row = [1]
    for n in range(n_max + 1):
        if n:
            row = [1, *map(operator.add, row, row[1:]), 1]
        total = 0
        sub = n
        while True:
            total += row[sub]
            if sub == 0:
                break
            sub = (sub - 1) & n
        out.append(nu(total, 2))
    return tuple(out)


def evaluate(sc: Scenario, n: int, n_max: int | None = None, cache: SequenceCache | None = None) -> Row:
    q = sc.kwargs
    name = sc.name
    top = max(n, n_max or n)
    if name.startswith("theorem-"):
        t = theorem_check(q["d"], n, cache)
        return Row(n, t.w, t.bound, t.attained, t.predicted, t.consistent)
    if name == "prop-odd":
        return _valuation_row(n, _odd_binomial_valuations(top)[n], digit_sum(n, 2), no_adjacent_ones(n))
    if name == "prop-pow":
        e = q["e"]
        total = sum(math.comb(n, x) ** e for x in range(n + 1))
        pred = True if e % 2 == 0 else no_adjacent_ones(n)
        return _valuation_row(n, nu(total, 2), digit_sum(n, 2), pred)
    if name == "prop-domb":
        return _valuation_row(n, nu(abelian_square_count(4, n, cache), 2), 2 * digit_sum(n, 2),
                              no_adjacent_ones(n))
    if name == "prop-gdomb":
        a, b = q["a"], q["b"]
        pred = True if (a + b) % 2 == 0 else no_adjacent_ones(n)
        return _valuation_row(n, nu(gen_domb((a, b, b), n), 2), (b + 1) * digit_sum(n, 2), pred)
    if name == "prop-mult":
        k = q["k"]
        sums = carry_free_sums(2, 2 * k, top)
        pred = no_adjacent_ones(n) if k % 2 else ones_before_zeros(n)
        return _valuation_row(n, sums.valuation(n), digit_sum(n, 2) + nu(k, 2), pred, sums.precision)
    if name == "prop-tri":
        sums = carry_free_sums(3, 3, top)
        return _valuation_row(n, sums.valuation(n), nonzero_digit_count(n, 3),
                              ternary_equality_shape(n), sums.precision)
    if name == "prop-prime":
        p, k = q["p"], q["k"]
        sums = carry_free_sums(p, k * p, top)
        pred = _prime_automaton(p, k).accepts_number(n)
        return _valuation_row(n, sums.valuation(n), nonzero_digit_count(n, p) + nu(k, p), pred,
                              sums.precision)
    if name == "identity-X":
        return _identity_row(n, chan_zudilin_rhs(n) == abelian_square_count(4, n, cache))
    if name == "identity-Wsquare":
        return _identity_row(n, split_identity_check(q["a"], q["b"], n))
    if name == "grid-equal":
        ok = (grid_colorings(1, 1, n) == grid_colorings(1, 0, n)
              and grid_colorings(2, 2, n) == walk_count(3, n, cache))
        return _identity_row(n, ok)
    raise ValueError(f"unknown scenario {name!r}")  # pragma: no cover


def _evaluate_chunk(sc: Scenario, ns: list[int], n_max: int, cache_path: str | None) -> list[Row]:
    cache = SequenceCache(cache_path) if cache_path else None
    return [evaluate(sc, n, n_max, cache) for n in ns]


def run_scenario(sc: Scenario, n_max: int, jobs: int = 1, cache: SequenceCache | None = None) -> list[Row]:
    """Rows for ``first_n <= n <= n_max``, always in ascending ``n``."""
    ns = list(range(sc.first_n, n_max + 1))
    if jobs <= 1 or len(ns) < 2:
        return [evaluate(sc, n, n_max, cache) for n in ns]
    # interleave so that expensive large n are spread over the workers
    shards = [ns[i::jobs] for i in range(jobs) if ns[i::jobs]]
    path = str(cache.path) if cache is not None else None
    rows: list[Row] = []
    with ProcessPoolExecutor(max_workers=len(shards)) as pool:
        for part in pool.map(_evaluate_chunk, [sc] * len(shards), shards,
                             [n_max] * len(shards), [path] * len(shards)):
            rows.extend(part)
    rows.sort(key=lambda r: r.n)
    return rows


def failures(rows: list[Row]) -> list[Row]:
    return [r for r in rows if not r.passed]


def render_rows(sc: Scenario, rows: list[Row], fmt: str = "tsv") -> str:
    bad = len(failures(rows))
    if fmt == "json":
        obj = {
            "scenario": sc.name,
            "params": sc.kwargs,
            "failures": bad,
            "rows": [{"n": r.n, "valuation": r.valuation, "floor": r.floor, "bound": r.bound,
                      "equal": r.equal, "predicted": r.predicted, "pass": r.passed} for r in rows],
        }
        return json.dumps(obj, indent=2) + "\n"
    if fmt != "tsv":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [f"#scenario {sc.describe()} rows={len(rows)} failures={bad}",
             "#n\tvaluation\tbound\tequal\tpredicted\tpass"]
    for r in rows:
        bound = "-" if r.bound is None else str(r.bound)
        lines.append(f"{r.n}\t{r.valuation_text()}\t{bound}\t{int(r.equal)}\t"
                     f"{int(r.predicted)}\t{int(r.passed)}")
    return "\n".join(lines) + "\n"
