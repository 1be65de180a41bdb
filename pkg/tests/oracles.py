"""Independent reference implementations used to cross-check the package.

Everything here is deliberately written in plain Python (dicts, lists,
math) with no numpy, so a shared bug with the vectorized code is unlikely.
Slow is fine; these only ever run on tiny instances.
"""

from __future__ import annotations

import math

FLOOR = 1e-300


def loglik_reference(W, M, entries):
    """Count-weighted log of sum_h W[h][i] * M[h][j] over stored entries.

    W, M: list-of-lists, H rows of V floats. entries: {(i, j): count}.
    """
    H = len(W)
    total = 0.0
    for (i, j), n in entries.items():
        p = 0.0
        for h in range(H):
            p += W[h][i] * M[h][j]
        total += n * math.log(max(p, FLOOR))
    return total


def em_step_reference(W, M, entries):
    """One aspect-model EM iteration over dense list-of-lists matrices.

    Returns (W_new, M_new). Rows of W_new sum to 1; columns of M_new sum
    to 1. A W row or M column with zero accumulated mass is copied from
    the input unchanged.
    """
    H = len(W)
    V = len(W[0])
    w_acc = [[0.0] * V for _ in range(H)]
    m_acc = [[0.0] * V for _ in range(H)]
    for (i, j), n in entries.items():
        denom = sum(W[h][i] * M[h][j] for h in range(H))
        if denom <= 0.0:
            denom = FLOOR
        for h in range(H):
            r = n * W[h][i] * M[h][j] / denom
            w_acc[h][i] += r
            m_acc[h][j] += r
    W_new = []
    for h in range(H):
        mass = sum(w_acc[h])
        if mass > 0.0:
            W_new.append([x / mass for x in w_acc[h]])
        else:
            W_new.append(list(W[h]))
    M_new = [[0.0] * V for _ in range(H)]
    for j in range(V):
        mass = sum(m_acc[h][j] for h in range(H))
        if mass > 0.0:
            for h in range(H):
                M_new[h][j] = m_acc[h][j] / mass
        else:
            for h in range(H):
                M_new[h][j] = M[h][j]
    return W_new, M_new


def em_trace_reference(W, M, entries, iterations):
    """Objective value after each of `iterations` EM updates."""
    trace = []
    for _ in range(iterations):
        W, M = em_step_reference(W, M, entries)
        trace.append(loglik_reference(W, M, entries))
    return trace


def translation_reference(W, M, word_id):
    """P(target j | source word_id) = sum_h M[h][word_id] * W[h][j]."""
    H = len(W)
    V = len(W[0])
    return [sum(M[h][word_id] * W[h][j] for h in range(H)) for j in range(V)]


def tblm_reference(bag, sentence_counts, rows, lam=0.0, background=None):
    """Bag log probability under per-sentence-word translation rows.

    sentence_counts: {word_id: count} for the scoring sentence.
    rows: {word_id: list of V floats}, the translation row of each
    sentence word. bag: {word_id: count} for the document.
    """
    total_s = sum(sentence_counts.values())
    mixed = {}
    for i, c in sentence_counts.items():
        p_i = c / total_s
        for j, p in enumerate(rows[i]):
            mixed[j] = mixed.get(j, 0.0) + p_i * p
    score = 0.0
    for j, n in bag.items():
        p = (1.0 - lam) * mixed.get(j, 0.0)
        if background is not None:
            p += lam * background[j]
        score += n * math.log(max(p, FLOOR))
    return score


def ulm_reference(bag, sentence_counts, lam=0.0, background=None):
    """Bag log probability straight from the sentence's unigram relative
    frequencies."""
    total_s = sum(sentence_counts.values())
    score = 0.0
    for j, n in bag.items():
        p = (1.0 - lam) * sentence_counts.get(j, 0) / total_s
        if background is not None:
            p += lam * background[j]
        score += n * math.log(max(p, FLOOR))
    return score


def _is_subsequence(sub, seq):
    it = iter(seq)
    return all(x in it for x in sub)


def lcs_reference(a, b):
    """Longest common subsequence length by exhaustive enumeration.

    Enumerates every subsequence of the shorter input (2^n of them) and
    keeps the longest that is also a subsequence of the other. Only usable
    for tiny inputs.
    """
    if len(a) > len(b):
        a, b = b, a
    best = 0
    for mask in range(1 << len(a)):
        sub = [a[k] for k in range(len(a)) if mask >> k & 1]
        if len(sub) > best and _is_subsequence(sub, b):
            best = len(sub)
    return best


def ngram_overlap_reference(candidate, reference, n):
    """Clipped n-gram matches between two token lists."""
    def grams(seq):
        out = {}
        for k in range(len(seq) - n + 1):
            g = tuple(seq[k : k + n])
            out[g] = out.get(g, 0) + 1
        return out

    cand = grams(candidate)
    ref = grams(reference)
    overlap = sum(min(c, ref.get(g, 0)) for g, c in cand.items())
    return overlap, sum(cand.values()), sum(ref.values())


def sg_pair_objective_reference(in_vecs, ctx_vecs, center, context):
    """Exact-softmax skip-gram pair log probability, plain Python.

    in_vecs/ctx_vecs: list of V lists of H floats.
    """
    V = len(ctx_vecs)
    H = len(in_vecs[0])
    scores = []
    for w in range(V):
        scores.append(sum(ctx_vecs[w][d] * in_vecs[center][d] for d in range(H)))
    peak = max(scores)
    denom = sum(math.exp(s - peak) for s in scores)
    return scores[context] - peak - math.log(denom)


def glove_term_objective_reference(v_main, v_ctx, b_main, b_ctx, x, x_max, alpha):
    """Single-entry weighted squared error for the log-count fit."""
    weight = (x / x_max) ** alpha if x < x_max else 1.0
    dot = sum(a * b for a, b in zip(v_main, v_ctx))
    diff = dot + b_main + b_ctx - math.log(x)
    return weight * diff * diff
