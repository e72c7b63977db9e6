"""Finite automata that decide when a sum over abaci meets its valuation bound.

States are reduction states (fold, polynomial mod ``p``).  Words are read
right to left, least significant column first, so consuming a letter is
one call to :func:`walkval.reduction.reduce_letter`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
import json
from typing import Hashable, Iterable, Sequence

from .abacus import MULTISET, AbacusAlphabet, AbacusType, Letter
from .errors import ResourceLimitError
from .numth import digits
from .poly import Poly
from .reduction import HALT_EMPTY, HALT_MODES, HALT_SINGLE, Fold, halt_accept, reduce_letter

DEFAULT_STATE_LIMIT = 10**5


@dataclass(frozen=True)
class ReductionState:
    fold: Fold
    p_hat: Poly

    @property
    def label(self) -> str:
        return self.p_hat.label()


@dataclass(frozen=True)
class HaltState:
    """Reduction state plus whether the letter just read could end the word exactly."""

    inner: ReductionState
    accept: bool

    @property
    def label(self) -> str:
        return self.inner.label


@dataclass
class Automaton:
    """A complete DFA over a fixed list of abacus letters.

    ``names[k]`` is the display symbol of ``letters[k]``; for automata over
    carry-free words the names are the base-``p`` digits.
    """

    alphabet: AbacusAlphabet
    letters: tuple
    names: tuple[str, ...]
    states: list
    labels: list[str]
    delta: list[list[int]]
    initial: int
    accepting: frozenset
    members: list[tuple] = field(default_factory=list)

    def __post_init__(self):
        self._index = {letter: k for k, letter in enumerate(self.letters)}
        self._by_name = {name: k for k, name in enumerate(self.names)}
        if not self.members:
            self.members = [(s,) for s in self.states]

    @property
    def num_states(self) -> int:
        return len(self.states)

    @property
    def digit_alphabet(self) -> bool:
        return self.names == tuple(str(d) for d in range(self.alphabet.p))

    def letter_index(self, symbol) -> int:
        if isinstance(symbol, str):
            if symbol in self._by_name:
                return self._by_name[symbol]
            try:
                symbol = self.alphabet.parse_letter(symbol)
            except ValueError:
                raise ValueError(f"symbol {symbol!r} is not in the automaton alphabet") from None
        try:
            return self._index[symbol]
        except (KeyError, TypeError):
            raise ValueError(f"letter {symbol!r} is not in the automaton alphabet") from None

    def _symbols(self, word) -> list[int]:
        if isinstance(word, AbacusType):
            return [self.letter_index(letter) for letter in word.word]
        if isinstance(word, str):
            text = word.strip()
            if any(ch.isspace() for ch in text):
                toks = text.split()
            elif all(len(n) == 1 for n in self.names):
                toks = list(text)
            else:
                toks = [text] if text else []
            return [self.letter_index(t) for t in toks]
        return [self.letter_index(s) for s in word]

    def final_state(self, word) -> int:
        q = self.initial
        for k in reversed(self._symbols(word)):
            q = self.delta[q][k]
        return q

    def run(self, word) -> bool:
        """Consume ``word`` right to left and report acceptance."""
        return self.final_state(word) in self.accepting

    def accepts_number(self, n: int) -> bool:
        """Run on the base-``p`` expansion of ``n`` (digit alphabets only)."""
        if not self.digit_alphabet:
            raise ValueError("automaton is not over the digit alphabet")
        return self.run([str(d) for d in digits(n, self.alphabet.p)])

    def reachable(self) -> list[int]:
        seen = {self.initial}
        order = [self.initial]
        queue = deque(order)
        while queue:
            q = queue.popleft()
            for t in self.delta[q]:
                if t not in seen:
                    seen.add(t)
                    order.append(t)
                    queue.append(t)
        return order


def _letters_for(alphabet: AbacusAlphabet, letters: str):
    if letters == "cf":
        if alphabet.mode == MULTISET and alphabet.p != 2:
            raise ValueError("carry-free letters for odd p need the digit-sum alphabet")
        lets = tuple(alphabet.digit_letter(d) for d in range(alphabet.p))
        return lets, tuple(str(d) for d in range(alphabet.p))
    if letters == "all":
        return alphabet.letters, tuple(alphabet.render_letter(x) for x in alphabet.letters)
    raise ValueError(f"unknown letter set {letters!r}; expected 'cf' or 'all'")


def synthesize(p: int, r: int, e: Sequence[int], P: Poly | int = 1, mode: str = HALT_EMPTY,
               alphabet_mode: str = MULTISET, letters: str = "cf",
               state_limit: int = DEFAULT_STATE_LIMIT) -> Automaton:
    """Close the reduction states reachable from ``(fold(e), P mod p)``.

    ``halt-empty`` accepts when the residual has a nonzero constant term
    mod ``p``.  ``halt-single-letter`` stops before the leftmost letter and
    accepts when that letter's single-letter sum meets its bound exactly;
    each state then also remembers whether the letter just consumed could
    have been that leftmost letter.
    """
    if mode not in HALT_MODES:
        raise ValueError(f"unknown mode {mode!r}")
    A = AbacusAlphabet(p, r, alphabet_mode)
    lets, names = _letters_for(A, letters)
    if isinstance(P, int):
        P = Poly.constant(r, P)
    if P.r != r:
        raise ValueError("polynomial has the wrong number of variables")
    start = ReductionState(Fold.from_exponents(e, p), P.reduce(p))

    def step(state: ReductionState, letter) -> ReductionState:
        red = reduce_letter(state.p_hat, state.fold, letter, A)
        return ReductionState(state.fold.shift(), red.q)

    if mode == HALT_EMPTY:
        init: Hashable = start

        def succ(s, letter):
            return step(s, letter)

        def accepting(s):
            return s.p_hat.constant_term() % p != 0
    else:
        init = HaltState(start, False)

        def succ(s, letter):
            inner = s.inner
            return HaltState(step(inner, letter),
                             halt_accept(inner.p_hat, inner.fold, letter, A))

        def accepting(s):
            return s.accept

    index = {init: 0}
    states = [init]
    delta: list[list[int]] = []
    queue = deque([init])
    while queue:
        s = queue.popleft()
        row = []
        for letter in lets:
            t = succ(s, letter)
            if t not in index:
                if len(states) >= state_limit:
                    raise ResourceLimitError("automaton states", state_limit, len(states) + 1)
                index[t] = len(states)
                states.append(t)
                queue.append(t)
            row.append(index[t])
        delta.append(row)
    acc = frozenset(i for i, s in enumerate(states) if accepting(s))
    return Automaton(A, lets, names, states, [s.label for s in states], delta, 0, acc)


def minimize(aut: Automaton) -> Automaton:
    """Moore partition refinement on the reachable part, renumbered in BFS order."""
    reach = aut.reachable()
    block = {q: int(q in aut.accepting) for q in reach}
    nblocks = len(set(block.values()))
    while True:
        sig = {q: (block[q], tuple(block[t] for t in aut.delta[q])) for q in reach}
        ids: dict = {}
        new = {}
        for q in reach:
            new[q] = ids.setdefault(sig[q], len(ids))
        block = new
        if len(ids) == nblocks:
            break
        nblocks = len(ids)

    # renumber blocks in BFS order from the initial state
    rep = {}
    for q in reach:
        rep.setdefault(block[q], q)
    order = []
    seen = set()
    queue = deque([block[aut.initial]])
    seen.add(block[aut.initial])
    while queue:
        b = queue.popleft()
        order.append(b)
        for t in aut.delta[rep[b]]:
            if block[t] not in seen:
                seen.add(block[t])
                queue.append(block[t])
    num = {b: i for i, b in enumerate(order)}
    members = [[] for _ in order]
    for q in reach:
        members[num[block[q]]].extend(aut.members[q])
    delta = [[num[block[t]] for t in aut.delta[rep[b]]] for b in order]
    acc = frozenset(num[block[q]] for q in reach if q in aut.accepting)
    states = [aut.states[rep[b]] for b in order]
    labels = _block_labels([aut.labels[rep[b]] for b in order])
    return Automaton(aut.alphabet, aut.letters, aut.names, states, labels, delta, 0, acc,
                     [tuple(m) for m in members])


def _block_labels(labels: list[str]) -> list[str]:
    # keep labels unique so dumps can refer to states by label
    seen: dict[str, int] = {}
    out = []
    for lab in labels:
        k = seen.get(lab, 0)
        seen[lab] = k + 1
        out.append(lab if k == 0 else f"{lab}#{k}")
    return out


def isomorphic(a: Automaton, b: Automaton) -> bool:
    """Same transition graph, initial state and acceptance, letters matched by position."""
    if len(a.letters) != len(b.letters) or a.num_states != b.num_states:
        return False
    phi = {a.initial: b.initial}
    queue = deque([a.initial])
    while queue:
        q = queue.popleft()
        if (q in a.accepting) != (phi[q] in b.accepting):
            return False
        for k, t in enumerate(a.delta[q]):
            u = b.delta[phi[q]][k]
            if t in phi:
                if phi[t] != u:
                    return False
            else:
                if u in phi.values():
                    return False
                phi[t] = u
                queue.append(t)
    return len(phi) == a.num_states


def from_table(alphabet: AbacusAlphabet, letters: Sequence[Letter], names: Sequence[str],
               rows: Iterable[tuple[str, str, str]], initial: str,
               accepting: Iterable[str]) -> Automaton:
    """Build an automaton from ``(from, symbol, to)`` rows keyed by state label."""
    labels: list[str] = []
    edges = []
    for src, sym, dst in rows:
        for lab in (src, dst):
            if lab not in labels:
                labels.append(lab)
        edges.append((src, sym, dst))
    if initial not in labels:
        labels.insert(0, initial)
    idx = {lab: i for i, lab in enumerate(labels)}
    name_idx = {n: k for k, n in enumerate(names)}
    delta = [[-1] * len(letters) for _ in labels]
    for src, sym, dst in edges:
        for s in sym.split(","):
            delta[idx[src]][name_idx[s.strip()]] = idx[dst]
    if any(t < 0 for row in delta for t in row):
        raise ValueError("transition table is not complete")
    return Automaton(alphabet, tuple(letters), tuple(names), list(labels), list(labels), delta,
                     idx[initial], frozenset(idx[a] for a in accepting))


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------


def dump(aut: Automaton, fmt: str = "tsv") -> str:
    if fmt == "tsv":
        return _dump_tsv(aut)
    if fmt == "json":
        return _dump_json(aut)
    raise ValueError(f"unknown dump format {fmt!r}; expected 'tsv' or 'json'")


def _dump_tsv(aut: Automaton) -> str:
    lines = [
        "#alphabet " + " ".join(aut.names),
        "#initial " + aut.labels[aut.initial],
        "#accepting " + " ".join(aut.labels[q] for q in sorted(aut.accepting)),
        "#from\tletter\tto",
    ]
    for q in range(aut.num_states):
        grouped: dict[int, list[str]] = {}
        for k, t in enumerate(aut.delta[q]):
            grouped.setdefault(t, []).append(aut.names[k])
        for t, syms in grouped.items():
            lines.append(f"{aut.labels[q]}\t{','.join(syms)}\t{aut.labels[t]}")
    return "\n".join(lines) + "\n"


def _dump_json(aut: Automaton) -> str:
    obj = {
        "alphabet": list(aut.names),
        "states": [{"label": aut.labels[q], "accepting": q in aut.accepting}
                   for q in range(aut.num_states)],
        "initial": aut.labels[aut.initial],
        "transitions": [{"from": aut.labels[q], "letter": aut.names[k], "to": aut.labels[t]}
                        for q in range(aut.num_states) for k, t in enumerate(aut.delta[q])],
    }
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# cross-check against direct valuations
# ---------------------------------------------------------------------------


@dataclass
class LanguageReport:
    scenario: str
    n_max: int
    checked: int
    mismatches: list[tuple[int, bool, bool]]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def render(self) -> str:
        lines = [f"#crosscheck {self.scenario} n<={self.n_max} checked={self.checked} "
                 f"mismatches={len(self.mismatches)}"]
        if self.mismatches:
            lines.append("#n\taccepted\tequal")
            lines.extend(f"{n}\t{int(a)}\t{int(q)}" for n, a, q in self.mismatches)
        return "\n".join(lines) + "\n"


def language_equals_equality_cases(aut: Automaton, scenario, n_max: int, jobs: int = 1) -> LanguageReport:
    """Compare acceptance of every ``n <= n_max`` with exact equality in ``scenario``.

    ``scenario`` is a :class:`walkval.verify.Scenario` or a scenario name.
    """
    from . import verify

    sc = verify.get_scenario(scenario) if isinstance(scenario, str) else scenario
    rows = verify.run_scenario(sc, n_max, jobs=jobs)
    mismatches = []
    for row in rows:
        acc = aut.accepts_number(row.n)
        if acc != row.equal:
            mismatches.append((row.n, acc, row.equal))
    return LanguageReport(sc.name, n_max, len(rows), mismatches)


__all__ = [
    "Automaton",
    "DEFAULT_STATE_LIMIT",
    "HALT_EMPTY",
    "HALT_SINGLE",
    "HaltState",
    "LanguageReport",
    "ReductionState",
    "dump",
    "from_table",
    "isomorphic",
    "language_equals_equality_cases",
    "minimize",
    "synthesize",
]
