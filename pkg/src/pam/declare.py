"""The 21 Declare constraint templates with two independent evaluators.

Each template is defined twice:

* a regular expression over a projected alphabet, compiled once into a DFA
  (`evaluate_template`) — the production path shared by every activity
  pair, and
* a direct finite-trace reading of the template's temporal-logic meaning
  (`oracle_evaluate_template`) — plain scanning and counting, used only to
  cross-check the automata in tests.

Binary templates see a window projected onto three symbols: ``a`` for the
first argument activity, ``b`` for the second, ``o`` for everything else.
Unary templates see ``a``/``o``. Matching is full-match over the window.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .dfa import Dfa, compile_regex
from .errors import ArityMismatch, UnsupportedParameter

BINARY_ALPHABET = "abo"
UNARY_ALPHABET = "ao"

# Counted templates accept n in this range.
MIN_COUNT, MAX_COUNT = 1, 3


def _count(window, x):
    return sum(1 for e in window if e == x)


def _oracle_response(w, a, b):
    return all(
        any(w[j] == b for j in range(i + 1, len(w)))
        for i in range(len(w))
        if w[i] == a
    )


def _oracle_precedence(w, a, b):
    return all(
        any(w[i] == a for i in range(j)) for j in range(len(w)) if w[j] == b
    )


def _oracle_alternate_response(w, a, b):
    # After each a, the next a-or-b must exist and be b.
    for i in range(len(w)):
        if w[i] != a:
            continue
        for j in range(i + 1, len(w)):
            if w[j] == a:
                return False
            if w[j] == b:
                break
        else:
            return False
    return True


def _oracle_alternate_precedence(w, a, b):
    # Before each b, the previous a-or-b must exist and be a.
    for j in range(len(w)):
        if w[j] != b:
            continue
        for i in range(j - 1, -1, -1):
            if w[i] == b:
                return False
            if w[i] == a:
                break
        else:
            return False
    return True


def _oracle_chain_response(w, a, b):
    return all(
        i + 1 < len(w) and w[i + 1] == b for i in range(len(w)) if w[i] == a
    )


def _oracle_chain_precedence(w, a, b):
    return all(j > 0 and w[j - 1] == a for j in range(len(w)) if w[j] == b)


def _oracle_not_succession(w, a, b):
    return all(
        all(w[j] != b for j in range(i + 1, len(w)))
        for i in range(len(w))
        if w[i] == a
    )


# template id -> (arity, pattern or pattern-of-n, oracle(window, args...) -> bool)
_REGISTRY = {
    "existence": (
        1,
        lambda n: f".*(a.*){{{n}}}",
        lambda w, a, n: _count(w, a) >= n,
    ),
    "absence": (
        1,
        lambda n: f"[^a]*(a?[^a]*){{{n - 1}}}",
        lambda w, a, n: _count(w, a) <= n - 1,
    ),
    "exactly": (
        1,
        lambda n: f"[^a]*(a[^a]*){{{n}}}",
        lambda w, a, n: _count(w, a) == n,
    ),
    "init": (1, "(a.*)?", lambda w, a: len(w) > 0 and w[0] == a),
    "last": (1, ".*a", lambda w, a: len(w) > 0 and w[-1] == a),
    "responded_existence": (
        2,
        "[^a]*((a.*b.*)|(b.*a.*))?",
        lambda w, a, b: a not in w or b in w,
    ),
    "co_existence": (
        2,
        "[^ab]*((a.*b.*)|(b.*a.*))?",
        lambda w, a, b: (a in w) == (b in w),
    ),
    "response": (2, "[^a]*(a.*b)*[^a]*", _oracle_response),
    "precedence": (2, "[^b]*(a.*b)*[^b]*", _oracle_precedence),
    "succession": (
        2,
        "[^ab]*(a.*b)*[^ab]*",
        lambda w, a, b: _oracle_response(w, a, b) and _oracle_precedence(w, a, b),
    ),
    "alternate_response": (2, "[^a]*(a[^a]*b[^a]*)*", _oracle_alternate_response),
    "alternate_precedence": (
        2,
        "[^b]*(a[^b]*b[^b]*)*",
        _oracle_alternate_precedence,
    ),
    "alternate_succession": (
        2,
        "[^ab]*(a[^ab]*b[^ab]*)*",
        lambda w, a, b: _oracle_alternate_response(w, a, b)
        and _oracle_alternate_precedence(w, a, b),
    ),
    "chain_response": (2, "[^a]*(ab[^a]*)*", _oracle_chain_response),
    "chain_precedence": (2, "[^b]*(ab[^b]*)*", _oracle_chain_precedence),
    "chain_succession": (
        2,
        "[^ab]*(ab[^ab]*)*",
        lambda w, a, b: _oracle_chain_response(w, a, b)
        and _oracle_chain_precedence(w, a, b),
    ),
    "not_co_existence": (
        2,
        "[^ab]*((a[^b]*)|(b[^a]*))?",
        lambda w, a, b: not (a in w and b in w),
    ),
    "not_succession": (2, "[^a]*(a[^b]*)*", _oracle_not_succession),
    "not_chain_succession": (
        2,
        "[^a]*(a+[^ab][^a]*)*a*",
        lambda w, a, b: not any(
            w[i] == a and w[i + 1] == b for i in range(len(w) - 1)
        ),
    ),
    "choice": (2, ".*[ab].*", lambda w, a, b: a in w or b in w),
    # The published expression for exclusive choice is garbled; this is the
    # exactly-one-of-them-occurs reading, matching the temporal formula.
    "exclusive_choice": (
        2,
        "([^b]*a[^b]*)|([^a]*b[^a]*)",
        lambda w, a, b: (a in w) != (b in w),
    ),
}

TEMPLATE_IDS = tuple(_REGISTRY)
COUNTED_TEMPLATES = ("existence", "absence", "exactly")


@dataclass(frozen=True)
class ConstraintTemplate:
    """One Declare template, e.g. ``response`` or ``exactly`` with n=2."""

    id: str
    n: int | None = None

    def __post_init__(self):
        if self.id not in _REGISTRY:
            raise UnsupportedParameter(f"unknown template {self.id!r}")
        if self.id in COUNTED_TEMPLATES:
            if self.n is None or not (MIN_COUNT <= self.n <= MAX_COUNT):
                raise UnsupportedParameter(
                    f"{self.id} needs n in [{MIN_COUNT}, {MAX_COUNT}], got {self.n}"
                )
        elif self.n is not None:
            raise UnsupportedParameter(f"{self.id} takes no count parameter")

    @property
    def arity(self) -> int:
        return _REGISTRY[self.id][0]

    @property
    def pattern(self) -> str:
        spec = _REGISTRY[self.id][1]
        return spec(self.n) if callable(spec) else spec

    def __str__(self):
        return self.id if self.n is None else f"{self.id}:{self.n}"

    @classmethod
    def parse(cls, text: str) -> "ConstraintTemplate":
        name, _, n = text.partition(":")
        return cls(name, int(n) if n else None)


@lru_cache(maxsize=None)
def compile_template(template: ConstraintTemplate) -> Dfa:
    """Compile a template's regular expression into its projected-alphabet DFA."""
    alphabet = UNARY_ALPHABET if template.arity == 1 else BINARY_ALPHABET
    return compile_regex(template.pattern, alphabet)


def precompile_all() -> None:
    """Eagerly compile every template (all n for counted ones)."""
    for tid, (arity, _, _) in _REGISTRY.items():
        if tid in COUNTED_TEMPLATES:
            for n in range(MIN_COUNT, MAX_COUNT + 1):
                compile_template(ConstraintTemplate(tid, n))
        else:
            compile_template(ConstraintTemplate(tid))


def project_unary(window, first) -> tuple[int, ...]:
    """Map a window to symbol ids over {a=0, o=1} for one activity."""
    return tuple(0 if e == first else 1 for e in window)


def project_binary(window, first, second) -> tuple[int, ...]:
    """Map a window to symbol ids over {a=0, b=1, o=2} for an ordered pair."""
    return tuple(0 if e == first else 1 if e == second else 2 for e in window)


def _check_args(template, first, second):
    if template.arity == 1:
        if second is not None:
            raise ArityMismatch(f"{template} is unary, got a second activity")
    else:
        if second is None:
            raise ArityMismatch(f"{template} is binary, needs a second activity")
        if first == second:
            raise ArityMismatch(f"{template} arguments must differ")


def evaluate_template(template: ConstraintTemplate, first, second, window) -> bool:
    """DFA check: does the constraint hold on this window?"""
    _check_args(template, first, second)
    dfa = compile_template(template)
    if template.arity == 1:
        return dfa.accepts(project_unary(window, first))
    return dfa.accepts(project_binary(window, first, second))


def oracle_evaluate_template(template: ConstraintTemplate, first, second, window) -> bool:
    """Direct-semantics check by scanning/counting; the test-only oracle."""
    _check_args(template, first, second)
    oracle = _REGISTRY[template.id][2]
    if template.arity == 1:
        if template.id in COUNTED_TEMPLATES:
            return oracle(window, first, template.n)
        return oracle(window, first)
    return oracle(window, first, second)


# --- profiles ---

DEFAULT14_NAME = "default14"

_DEFAULT14 = (
    ("absence", 1),
    ("exactly", 1),
    ("exactly", 2),
    ("existence", 3),
    ("init", None),
    ("last", None),
    ("precedence", None),
    ("alternate_precedence", None),
    ("chain_precedence", None),
    ("response", None),
    ("alternate_response", None),
    ("chain_response", None),
    ("not_succession", None),
    ("co_existence", None),
)

# Channels only considered when the second argument occurs at least twice
# in the window (keeps rarely-meaningful alternation constraints out of
# near-vacuous single-occurrence windows).
ALTERNATE_CONDITION_IDS = frozenset({"alternate_response", "alternate_precedence"})


@dataclass(frozen=True)
class ConstraintProfile:
    """Ordered template list; the position of each entry is its channel index."""

    entries: tuple[ConstraintTemplate, ...]
    name: str = ""

    def __post_init__(self):
        if len(set(self.entries)) != len(self.entries):
            raise UnsupportedParameter("duplicate template in profile")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def channel_labels(self) -> tuple[str, ...]:
        return tuple(str(t) for t in self.entries)

    def unary_channels(self) -> tuple[int, ...]:
        return tuple(c for c, t in enumerate(self.entries) if t.arity == 1)

    def binary_channels(self) -> tuple[int, ...]:
        return tuple(c for c, t in enumerate(self.entries) if t.arity == 2)

    def is_unary(self, channel: int) -> bool:
        return self.entries[channel].arity == 1

    def alternate_condition_channels(self) -> frozenset[int]:
        return frozenset(
            c for c, t in enumerate(self.entries) if t.id in ALTERNATE_CONDITION_IDS
        )

    def to_lines(self) -> list[str]:
        return [f"{c}\t{t}" for c, t in enumerate(self.entries)]

    @classmethod
    def from_lines(cls, lines, name="") -> "ConstraintProfile":
        entries = []
        for raw in lines:
            raw = raw.strip()
            if not raw:
                continue
            idx_text, _, templ_text = raw.partition("\t")
            if int(idx_text) != len(entries):
                raise UnsupportedParameter(
                    f"profile channel indices must be dense, got {idx_text}"
                )
            entries.append(ConstraintTemplate.parse(templ_text))
        return cls(entries=tuple(entries), name=name)


def default14() -> ConstraintProfile:
    return ConstraintProfile(
        entries=tuple(ConstraintTemplate(tid, n) for tid, n in _DEFAULT14),
        name=DEFAULT14_NAME,
    )


def load_profile(spec: str) -> ConstraintProfile:
    """Resolve a profile by built-in name or load it from a file path."""
    if spec == DEFAULT14_NAME:
        return default14()
    with open(spec, encoding="utf-8") as fh:
        return ConstraintProfile.from_lines(fh, name=spec)
