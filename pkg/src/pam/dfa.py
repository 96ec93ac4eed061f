"""Tiny regex-to-DFA compiler over very small alphabets.

Constraint templates are written as regular expressions over a projected
alphabet of at most three symbols. This module parses that notation,
builds a Thompson NFA, and determinizes it into a dense transition table,
so template checks become a handful of integer lookups per event.

Supported syntax: literal symbols, ``.``, ``[xy]`` / ``[^xy]`` classes,
grouping, ``|``, and the postfix operators ``*``, ``+``, ``?``, ``{n}``.
Matching is full-match: the automaton must accept the entire string.
"""

from __future__ import annotations

from dataclasses import dataclass


# --- AST ---

@dataclass(frozen=True)
class _Sym:
    chars: frozenset


@dataclass(frozen=True)
class _Cat:
    parts: tuple


@dataclass(frozen=True)
class _Alt:
    parts: tuple


@dataclass(frozen=True)
class _Star:
    inner: object


_EPSILON = _Cat(parts=())


class _Parser:
    """Recursive-descent parser for the mini regex notation."""

    def __init__(self, pattern: str, alphabet: str):
        self.pattern = pattern
        self.alphabet = alphabet
        self.pos = 0

    def parse(self):
        node = self._alternation()
        if self.pos != len(self.pattern):
            raise ValueError(f"trailing input at {self.pos} in {self.pattern!r}")
        return node

    def _peek(self):
        return self.pattern[self.pos] if self.pos < len(self.pattern) else None

    def _alternation(self):
        parts = [self._concatenation()]
        while self._peek() == "|":
            self.pos += 1
            parts.append(self._concatenation())
        return parts[0] if len(parts) == 1 else _Alt(tuple(parts))

    def _concatenation(self):
        parts = []
        while self._peek() not in (None, "|", ")"):
            parts.append(self._repetition())
        if not parts:
            return _EPSILON
        return parts[0] if len(parts) == 1 else _Cat(tuple(parts))

    def _repetition(self):
        node = self._atom()
        while True:
            ch = self._peek()
            if ch == "*":
                self.pos += 1
                node = _Star(node)
            elif ch == "+":
                self.pos += 1
                node = _Cat((node, _Star(node)))
            elif ch == "?":
                self.pos += 1
                node = _Alt((node, _EPSILON))
            elif ch == "{":
                end = self.pattern.index("}", self.pos)
                n = int(self.pattern[self.pos + 1 : end])
                self.pos = end + 1
                node = _Cat(tuple([node] * n)) if n > 0 else _EPSILON
            else:
                return node

    def _atom(self):
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            node = self._alternation()
            if self._peek() != ")":
                raise ValueError(f"unclosed group in {self.pattern!r}")
            self.pos += 1
            return node
        if ch == "[":
            end = self.pattern.index("]", self.pos)
            body = self.pattern[self.pos + 1 : end]
            self.pos = end + 1
            if body.startswith("^"):
                chars = frozenset(self.alphabet) - frozenset(body[1:])
            else:
                chars = frozenset(body)
            return _Sym(chars)
        if ch == ".":
            self.pos += 1
            return _Sym(frozenset(self.alphabet))
        if ch in self.alphabet:
            self.pos += 1
            return _Sym(frozenset(ch))
        raise ValueError(f"unexpected {ch!r} at {self.pos} in {self.pattern!r}")


# --- NFA construction (Thompson) ---

class _Nfa:
    def __init__(self):
        self.eps: list[set] = []
        self.moves: list[dict] = []  # state -> {symbol_char: set(states)}

    def new_state(self):
        self.eps.append(set())
        self.moves.append({})
        return len(self.eps) - 1

    def build(self, node, start, end):
        if isinstance(node, _Sym):
            for ch in node.chars:
                self.moves[start].setdefault(ch, set()).add(end)
        elif isinstance(node, _Cat):
            if not node.parts:
                self.eps[start].add(end)
                return
            cursor = start
            for part in node.parts[:-1]:
                nxt = self.new_state()
                self.build(part, cursor, nxt)
                cursor = nxt
            self.build(node.parts[-1], cursor, end)
        elif isinstance(node, _Alt):
            for part in node.parts:
                s, e = self.new_state(), self.new_state()
                self.eps[start].add(s)
                self.eps[e].add(end)
                self.build(part, s, e)
        elif isinstance(node, _Star):
            s, e = self.new_state(), self.new_state()
            self.eps[start].update((s, end))
            self.eps[e].update((s, end))
            self.build(node.inner, s, e)
        else:  # pragma: no cover
            raise TypeError(node)

    def eps_closure(self, states):
        stack = list(states)
        seen = set(states)
        while stack:
            for nxt in self.eps[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return frozenset(seen)


@dataclass(frozen=True)
class Dfa:
    """Deterministic automaton with a dense table over symbol ids 0..k-1."""

    alphabet: str
    table: tuple[tuple[int, ...], ...]  # table[state][symbol_id] -> state
    accepting: tuple[bool, ...]
    start: int

    def accepts(self, symbol_ids) -> bool:
        state = self.start
        table = self.table
        for sym in symbol_ids:
            state = table[state][sym]
        return self.accepting[state]

    def is_idempotent_on(self, symbol_id: int) -> bool:
        """True if reading the symbol twice always equals reading it once.

        Holds for runs of don't-care events in all shipped templates and
        licenses collapsing those runs before evaluation.
        """
        return all(
            row[symbol_id] == self.table[row[symbol_id]][symbol_id]
            for row in self.table
        )


def _minimize(table, accepting, start):
    """Moore partition refinement; all states are reachable by construction."""
    n = len(table)
    block = [1 if acc else 0 for acc in accepting]
    while True:
        signatures = {}
        new_block = [0] * n
        for state in range(n):
            sig = (block[state], tuple(block[t] for t in table[state]))
            new_block[state] = signatures.setdefault(sig, len(signatures))
        if new_block == block:
            break
        block = new_block
    n_blocks = len(set(block))
    new_table = [None] * n_blocks
    new_accepting = [False] * n_blocks
    for state in range(n):
        b = block[state]
        if new_table[b] is None:
            new_table[b] = tuple(block[t] for t in table[state])
            new_accepting[b] = accepting[state]
    return tuple(new_table), tuple(new_accepting), block[start]


def compile_regex(pattern: str, alphabet: str) -> Dfa:
    """Compile the mini-regex ``pattern`` to a minimal DFA."""
    ast = _Parser(pattern, alphabet).parse()
    nfa = _Nfa()
    start, end = nfa.new_state(), nfa.new_state()
    nfa.build(ast, start, end)

    start_set = nfa.eps_closure({start})
    index = {start_set: 0}
    ordered = [start_set]
    table = []
    cursor = 0
    while cursor < len(ordered):
        current = ordered[cursor]
        cursor += 1
        row = []
        for ch in alphabet:
            moved = set()
            for st in current:
                moved.update(nfa.moves[st].get(ch, ()))
            closure = nfa.eps_closure(moved)
            if closure not in index:
                index[closure] = len(ordered)
                ordered.append(closure)
            row.append(index[closure])
        table.append(tuple(row))
    accepting = tuple(end in states for states in ordered)
    table, accepting, start_id = _minimize(table, accepting, 0)
    return Dfa(alphabet=alphabet, table=table, accepting=accepting, start=start_id)
