"""Exact complexity of words under description modes.

K(x) is the minimum number of description letters on any path spelling
exactly x on the object tape.  The computation is a shortest-path sweep
over layers (state, object position): edges whose object component is
epsilon stay in a layer, matching edges advance it, and the edge weight
is the count of non-epsilon description components (0 or 1 for binary
modes, up to 2 for pair modes).
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .automaton import EPSILON, LabeledAutomaton, word_to_indices
from .errors import BudgetExceeded, ContractError
from .modes import UNBOUNDED, DescriptionMode, PairDescriptionMode

UNREACHABLE = math.inf

# Below this (|x|+1) * edge-count product the plain Python sweep wins.
_PURE_SWEEP_LIMIT = 300_000
_INF = 1 << 62
_NORMALIZE_BUDGET = 5_000_000


def _check_mode(mode):
    if mode.certificate.bound == UNBOUNDED:
        raise ContractError(
            f"mode {mode.name!r} is certified unbounded; complexity is undefined")


def complexity(mode: DescriptionMode, word: str):
    """Minimal description length of `word`, or math.inf when unreachable."""
    _check_mode(mode)
    letters = word_to_indices(mode.automaton, 1, word)
    return _min_cost(mode.automaton, letters)


def pair_complexity(mode: PairDescriptionMode, word: str):
    """Minimal |u|+|v| over pair descriptions (u,v) of `word`."""
    _check_mode(mode)
    letters = word_to_indices(mode.automaton, 2, word)
    return _min_cost(mode.automaton, letters)


def superadditivity_check(mode: DescriptionMode, x: str, y: str) -> bool:
    """Does K(xy) >= K(x) + K(y) hold?  Unreachable counts as +infinity."""
    return complexity(mode, x + y) >= complexity(mode, x) + complexity(mode, y)


@dataclass(frozen=True)
class ComplexityCurve:
    """Complexity sampled along prefixes of a sequence."""

    samples: tuple               # ((n, value), ...) with value int or inf
    mode_id: str

    def to_csv(self) -> str:
        lines = ["n,complexity,ratio"]
        for n, k in self.samples:
            if k == UNREACHABLE:
                lines.append(f"{n},unreachable,")
            else:
                lines.append(f"{n},{k},{k / n:.6f}")
        return "\n".join(lines) + "\n"


def complexity_curve(mode: DescriptionMode, source: str, n_max: int,
                     step: int, verify: bool = True) -> ComplexityCurve:
    """Complexity of each prefix of length step, 2*step, ... <= n_max.

    One incremental sweep serves every sample; with verify on, three
    sample points are recomputed from scratch and must agree.
    """
    _check_mode(mode)
    if step < 1:
        raise ContractError("step must be >= 1")
    if len(source) < min(n_max, step):
        raise ContractError("source shorter than the requested prefix")
    n_max = min(n_max, len(source))
    positions = list(range(step, n_max + 1, step))
    if not positions:
        return ComplexityCurve(samples=(), mode_id=mode.name)
    letters = word_to_indices(mode.automaton, 1, source[:positions[-1]])
    values = _sweep_numpy(mode.automaton, letters, positions)
    samples = tuple(zip(positions, values))
    if verify:
        rng = random.Random(0x5EED)
        for n, k in rng.sample(samples, min(3, len(samples))):
            fresh = complexity(mode, source[:n])
            if fresh != k:
                raise RuntimeError(
                    f"incremental curve disagrees with fresh computation at n={n}: "
                    f"{k} vs {fresh}")
    return ComplexityCurve(samples=samples, mode_id=mode.name)


# --- shared sweep machinery ---------------------------------------------------

def _classify_edges(aut: LabeledAutomaton):
    """Split edges into intra-layer (epsilon object) and advancing groups."""
    obj = aut.arity - 1
    intra = []
    advance = [[] for _ in aut.alphabets[obj]]
    for src, dst, label in aut.edges:
        w = sum(1 for t in range(obj) if label[t] is not EPSILON)
        if label[obj] is EPSILON:
            intra.append((src, dst, w))
        else:
            advance[label[obj]].append((src, dst, w))
    return intra, advance


def _min_cost(aut: LabeledAutomaton, letters: Sequence[int]):
    if aut.num_states == 0:
        return UNREACHABLE
    if (len(letters) + 1) * max(len(aut.edges), 1) <= _PURE_SWEEP_LIMIT:
        return _sweep_pure(aut, letters)
    return _sweep_numpy(aut, letters, [len(letters)])[-1]


def _sweep_pure(aut: LabeledAutomaton, letters: Sequence[int]):
    intra, advance = _classify_edges(aut)
    dist = [0] * aut.num_states
    for a in letters:
        _relax_intra(dist, intra)
        nd = [math.inf] * aut.num_states
        for src, dst, w in advance[a]:
            cand = dist[src] + w
            if cand < nd[dst]:
                nd[dst] = cand
        dist = nd
    best = min(dist, default=math.inf)
    return best if best == math.inf else int(best)


def _relax_intra(dist, intra):
    """Fixpoint relaxation over epsilon-object edges (weights >= 0)."""
    changed = True
    while changed:
        changed = False
        for src, dst, w in intra:
            cand = dist[src] + w
            if cand < dist[dst]:
                dist[dst] = cand
                changed = True


class _CompiledSweep:
    """Per-automaton arrays for the vectorized sweep.

    Intra-layer edges are pre-composed into the advancing edges via an
    all-pairs closure of the epsilon-object subgraph, so each object
    letter costs a single scatter-min.  Trailing intra-layer moves never
    help (weights are nonnegative and the end state is free), so only
    source-side closure is needed.
    """

    def __init__(self, aut: LabeledAutomaton):
        intra, advance = _classify_edges(aut)
        closure_into = _closure_into(aut.num_states, intra)
        self.num_states = aut.num_states
        self.by_letter = []
        total = 0
        for group in advance:
            srcs, dsts, ws = [], [], []
            for t, q, w in group:
                for s, c in closure_into[t]:
                    srcs.append(s)
                    dsts.append(q)
                    ws.append(c + w)
            total += len(srcs)
            if total > _NORMALIZE_BUDGET:
                raise BudgetExceeded(
                    "intra-layer closure is too dense to vectorize",
                    _NORMALIZE_BUDGET)
            self.by_letter.append((np.asarray(srcs, dtype=np.int64),
                                   np.asarray(dsts, dtype=np.int64),
                                   np.asarray(ws, dtype=np.int64)))


def _closure_into(num_states: int, intra) -> list:
    """closure_into[t] = [(s, cost of cheapest intra path s -> t), ...]."""
    adj = [[] for _ in range(num_states)]
    for s, d, w in intra:
        adj[s].append((d, w))
    into = [[] for _ in range(num_states)]
    for source in range(num_states):
        dist = {source: 0}
        heap = [(0, source)]
        while heap:
            c, v = heapq.heappop(heap)
            if c > dist.get(v, math.inf):
                continue
            for d, w in adj[v]:
                nc = c + w
                if nc < dist.get(d, math.inf):
                    dist[d] = nc
                    heapq.heappush(heap, (nc, d))
        for t, c in dist.items():
            into[t].append((source, c))
    return into


_sweep_cache: dict = {}


def _compiled(aut: LabeledAutomaton) -> _CompiledSweep:
    key = id(aut)
    hit = _sweep_cache.get(key)
    if hit is None or hit[0] is not aut:
        hit = (aut, _CompiledSweep(aut))
        _sweep_cache[key] = hit
        if len(_sweep_cache) > 64:
            _sweep_cache.pop(next(iter(_sweep_cache)))
    return hit[1]


def _sweep_numpy(aut: LabeledAutomaton, letters: Sequence[int],
                 positions: List[int]) -> list:
    """Values of K at the given prefix lengths (sorted ascending)."""
    if aut.num_states == 0:
        return [UNREACHABLE] * len(positions)
    try:
        eng = _compiled(aut)
    except BudgetExceeded:
        # Closure too dense; fall back to the reference sweep per prefix.
        return [_sweep_pure(aut, letters[:n]) for n in positions]
    arr = np.asarray(letters, dtype=np.int64)
    dist = np.zeros(eng.num_states, dtype=np.int64)
    out = []
    want = iter(positions)
    next_pos = next(want, None)
    while next_pos == 0:
        out.append(0)
        next_pos = next(want, None)
    buf = np.empty(eng.num_states, dtype=np.int64)
    for i in range(len(arr)):
        if next_pos is None:
            break
        srcs, dsts, ws = eng.by_letter[arr[i]]
        buf.fill(_INF)
        if len(srcs):
            np.minimum.at(buf, dsts, dist[srcs] + ws)
        dist, buf = buf, dist
        if dist.min() >= _INF:
            # No path spells this prefix; every longer prefix fails too.
            while next_pos is not None:
                out.append(UNREACHABLE)
                next_pos = next(want, None)
            break
        if i + 1 == next_pos:
            out.append(int(dist.min()))
            next_pos = next(want, None)
    return out
