"""Numba-accelerated inner loops (free-kind spelling codes).

Everything here is an optimization detail: each kernel has a pure-Python
twin in the calling module with identical semantics, used for the product
kind and when numba is unavailable.  Free-kind spelling codes are signed
integers with cancellation rule ``x == -y``; reduction is a stack.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except Exception:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


@njit(cache=True)
def hit_masks_free(inv_line, line_lens, cands, cand_lens, orbit, orbit_lens,
                   K):
    """mask[c, m] = 1 iff min over orbit h of |line_m^-1 * cand_c * h| <= K.

    ``inv_line`` rows hold the spelling of line_m^-1 (reversed negated
    codes); all arrays are 0-padded int64 with explicit lengths.
    """
    n_line = inv_line.shape[0]
    n_c = cands.shape[0]
    n_o = orbit.shape[0]
    base_cap = inv_line.shape[1] + cands.shape[1]
    width = base_cap + orbit.shape[1]
    out = np.zeros((n_c, n_line), dtype=np.uint8)
    buf = np.empty(width, dtype=np.int64)
    base = np.empty(base_cap, dtype=np.int64)
    for ci in range(n_c):
        for li in range(n_line):
            sp = 0
            for t in range(line_lens[li]):
                c = inv_line[li, t]
                if sp > 0 and buf[sp - 1] == -c:
                    sp -= 1
                else:
                    buf[sp] = c
                    sp += 1
            for t in range(cand_lens[ci]):
                c = cands[ci, t]
                if sp > 0 and buf[sp - 1] == -c:
                    sp -= 1
                else:
                    buf[sp] = c
                    sp += 1
            base_sp = sp
            for t in range(base_sp):
                base[t] = buf[t]
            for oi in range(n_o):
                lh = orbit_lens[oi]
                if base_sp - lh > K or lh - base_sp > K:
                    continue
                sp = base_sp
                min_sp = sp
                for t in range(lh):
                    c = orbit[oi, t]
                    if sp > 0 and buf[sp - 1] == -c:
                        sp -= 1
                        if sp < min_sp:
                            min_sp = sp
                    else:
                        buf[sp] = c
                        sp += 1
                hit = sp <= K
                for t in range(min_sp, base_sp):
                    buf[t] = base[t]
                if hit:
                    out[ci, li] = 1
                    break
    return out


@njit(cache=True)
def relation_dfs_free(codes, lens, classes, max_syllables, stop_at_first,
                      node_budget):
    """Depth-first scan of normal-form mixed words, tracking the reduced
    product as a code stack with per-depth undo logs.

    Letters are the enumeration catalog (S-letters then X-letters, catalog
    order = lexicographic order).  Adjacency: no S after S, no X_i after
    X_i.  A node whose stack is empty is a relation; within a fixed length,
    depth-first encounter order is lexicographic, so the first hit at each
    depth is the graded-lexicographic witness for that length.

    Returns (status, best_len, witness, nodes):
      status 0 = no relation, 1 = found, 2 = node budget exceeded.
    """
    n_letters = codes.shape[0]
    wmax = max(1, codes.shape[1])
    cap = max_syllables * wmax + 1
    stack = np.empty(cap, dtype=np.int64)
    letters = np.empty(max_syllables, dtype=np.int64)
    sp_before = np.empty(max_syllables, dtype=np.int64)
    npop = np.empty(max_syllables, dtype=np.int64)
    pops = np.empty((max_syllables, wmax), dtype=np.int64)
    choice = np.empty(max_syllables, dtype=np.int64)
    witness = np.full(max_syllables, -1, dtype=np.int64)
    best_len = 0      # 0 = no witness yet
    max_len = max_syllables  # only words of length <= max_len are of interest
    nodes = 0
    sp = 0
    depth = 0
    choice[0] = -1
    while True:
        choice[depth] += 1
        j = choice[depth]
        if j >= n_letters:
            # this depth is exhausted: undo the parent's push and resume there
            if depth == 0:
                break
            depth -= 1
            sp = sp_before[depth] - npop[depth]
            for t in range(npop[depth] - 1, -1, -1):
                stack[sp] = pops[depth, t]
                sp += 1
            continue
        cls = classes[j]
        if depth > 0:
            prev = classes[letters[depth - 1]]
            if (prev == -1 and cls == -1) or (prev >= 0 and cls == prev):
                continue
        nodes += 1
        if nodes > node_budget:
            return 2, best_len, witness, nodes
        # push letter j, logging cancelled codes for undo
        sp_before[depth] = sp
        np_d = 0
        for t in range(lens[j]):
            c = codes[j, t]
            if sp > 0 and stack[sp - 1] == -c:
                sp -= 1
                pops[depth, np_d] = -c  # the stack value that was cancelled
                np_d += 1
            else:
                stack[sp] = c
                sp += 1
        npop[depth] = np_d
        letters[depth] = j
        if sp == 0:
            found_len = depth + 1
            if best_len == 0 or found_len < best_len:
                best_len = found_len
                for t in range(found_len):
                    witness[t] = letters[t]
                for t in range(found_len, max_syllables):
                    witness[t] = -1
                # only strictly shorter witnesses can improve the report
                max_len = best_len - 1
            if stop_at_first:
                return 1, best_len, witness, nodes
            sp = sp_before[depth] - np_d
            for t in range(np_d - 1, -1, -1):
                stack[sp] = pops[depth, t]
                sp += 1
            # siblings at this depth have the same length; skip them
            choice[depth] = n_letters - 1
            continue
        if depth + 2 <= max_len:
            depth += 1
            choice[depth] = -1
        else:
            # children would be too long: undo and try the next letter here
            sp = sp_before[depth] - np_d
            for t in range(np_d - 1, -1, -1):
                stack[sp] = pops[depth, t]
                sp += 1
    status = 1 if best_len > 0 else 0
    return status, best_len, witness, nodes
