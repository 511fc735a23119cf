"""Stallings folded core graphs: exact subgroup oracles in free groups.

A finitely generated subgroup H of a free group is represented by its folded
core graph: a finite labeled graph with a base state in which every reduced
word traces at most one path.  Membership in H and the rank of H are then
exact, syntactic computations:

* ``member(core, w)``: w is in H iff its reduced spelling traces a loop at
  the base state.
* ``rank(core) = #edges - #states + 1`` (the graph is connected).

The construction is the classic one: wedge the generator loops at the base
state, then fold (merge the targets of equally-labeled transitions) until
deterministic, and finally trim degree-1 non-base states.  Folding is
implemented with union-find plus a worklist, so building a core from
generators of total letter length L costs O(L alpha(L)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .errors import WrongModelError
from .groups import GroupModel, Word


@dataclass(frozen=True)
class CoreGraph:
    """Folded core automaton of a subgroup of free(k).

    ``transitions`` maps (state, code) -> state, where code is a signed
    generator ``+-(factor+1)``; it is deterministic and inverse-closed
    (u --c--> v iff v --(-c)--> u).  State 0 is the base.  Treated as
    immutable after construction.
    """

    rank_ambient: int
    n_states: int
    transitions: Dict[Tuple[int, int], int] = field(hash=False)

    @property
    def base(self) -> int:
        return 0

    @property
    def n_edges(self) -> int:
        return len(self.transitions) // 2

    def rank(self) -> int:
        return self.n_edges - self.n_states + 1


def _check_free(model: GroupModel):
    if model.kind != "free":
        raise WrongModelError("Stallings cores exist for the free kind only")


class _Folder:
    """Union-find with per-class transition tables and a fold worklist."""

    def __init__(self):
        self.parent: List[int] = []
        self.trans: List[Dict[int, int]] = []
        self.pending: List[int] = []

    def new_state(self) -> int:
        self.parent.append(len(self.parent))
        self.trans.append({})
        return len(self.parent) - 1

    def find(self, s: int) -> int:
        while self.parent[s] != s:
            self.parent[s] = self.parent[self.parent[s]]
            s = self.parent[s]
        return s

    def _merge(self, a: int, b: int):
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if len(self.trans[a]) < len(self.trans[b]):
            a, b = b, a
        self.parent[b] = a
        # fold b's table into a's; clashes enqueue further merges
        for code, t in self.trans[b].items():
            if code in self.trans[a]:
                self.pending.append((self.trans[a][code], t))
            else:
                self.trans[a][code] = t
        self.trans[b] = {}

    def _add_arc(self, u: int, code: int, v: int):
        u, v = self.find(u), self.find(v)
        cur = self.trans[u].get(code)
        if cur is None:
            self.trans[u][code] = v
        elif self.find(cur) != v:
            self.pending.append((cur, v))

    def attach(self, u: int, code: int, v: int):
        self._add_arc(u, code, v)
        self._add_arc(v, -code, u)
        self.drain()

    def drain(self):
        while self.pending:
            a, b = self.pending.pop()
            self._merge(a, b)


def stallings_core(model: GroupModel, gens: Sequence[Word]) -> CoreGraph:
    """Folded core graph of the subgroup generated by ``gens``."""
    _check_free(model)
    folder = _Folder()
    base = folder.new_state()
    for g in gens:
        codes = model.spelling(model.reduce(g))
        if not codes:
            continue
        cur = base
        for i, code in enumerate(codes):
            nxt = base if i == len(codes) - 1 else folder.new_state()
            folder.attach(cur, code, nxt)
            cur = folder.find(nxt)

    # compress classes into a clean transition table, keeping only states
    # reachable from the base (folding keeps everything attached, but be safe)
    label = {}
    order = [folder.find(base)]
    label[order[0]] = 0
    i = 0
    while i < len(order):
        s = order[i]
        i += 1
        for code in sorted(folder.trans[s]):
            t = folder.find(folder.trans[s][code])
            if t not in label:
                label[t] = len(order)
                order.append(t)
    trans = {}
    for s in order:
        for code, t in folder.trans[s].items():
            trans[(label[s], code)] = label[folder.find(t)]

    # trim: repeatedly remove non-base states of degree <= 1 (hanging trees)
    alive = set(range(len(order)))
    while True:
        degree: Dict[int, int] = {}
        for (s, _c) in trans:
            degree[s] = degree.get(s, 0) + 1
        leaves = {s for s in alive if s != 0 and degree.get(s, 0) <= 1}
        if not leaves:
            break
        alive -= leaves
        trans = {(u, c): v for (u, c), v in trans.items()
                 if u in alive and v in alive}
    # renumber surviving states densely, base first
    relabel = {0: 0}
    for s in sorted(alive):
        if s != 0:
            relabel[s] = len(relabel)
    trans = {(relabel[u], c): relabel[v] for (u, c), v in trans.items()}
    return CoreGraph(rank_ambient=model.rank, n_states=len(relabel),
                     transitions=trans)


def member(model: GroupModel, core: CoreGraph, w: Word) -> bool:
    """Exact membership of w in the subgroup the core was built from."""
    _check_free(model)
    state = core.base
    for code in model.spelling(model.reduce(w)):
        nxt = core.transitions.get((state, code))
        if nxt is None:
            return False
        state = nxt
    return state == core.base


def rank(core: CoreGraph) -> int:
    return core.rank()
