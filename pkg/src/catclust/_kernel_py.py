"""Pure-Python fallback for the hot per-object competitive pass.

This mirrors the compiled kernel in catclust/_kernel.pyx operation for
operation (same loop order, same double-precision arithmetic) so both
backends produce bit-identical results. Keep the two in sync.
"""

from math import exp

BACKEND_NAME = "python"


def sigmoid_weight(delta):
    return 1.0 / (1.0 + exp(-10.0 * delta + 5.0))


def run_pass(X, labels, counts, nn, members, g, g_total, rho, delta, u,
             omega, eta, scale, competition, penalty, live_rho):
    """One full pass of online winner/rival competition over all objects.

    With live_rho the winning ratio is recomputed per object from the
    accumulating win counts g; otherwise the frozen per-pass ratios in
    `rho` are used and g merely accumulates for the caller. Mutates
    labels, counts, nn, members, g, delta and u in place. Returns
    (changed, g_total): the number of reassignments and the updated
    running total of wins.
    """
    n, d = X.shape
    k = counts.shape[0]
    s = [0.0] * k
    score = [0.0] * k
    changed = 0

    for i in range(n):
        xi = X[i]
        # Score every live cluster slot; empty clusters score 0.
        for l in range(k):
            sl = 0.0
            for r in range(d):
                c = xi[r]
                if c < 0:
                    continue
                nnv = nn[l, r]
                if nnv == 0:
                    continue
                sl += omega[l, r] * counts[l, r, c] / nnv
            sl *= scale
            s[l] = sl
            if competition:
                if live_rho:
                    rho_l = g[l] / g_total if g_total > 0 else 0.0
                else:
                    rho_l = rho[l]
                score[l] = (1.0 - rho_l) * u[l] * sl
            else:
                score[l] = sl

        v = 0
        best = score[0]
        for l in range(1, k):
            if score[l] > best:
                best = score[l]
                v = l
        h = -1
        best_h = -1.0
        for l in range(k):
            if l != v and score[l] > best_h:
                best_h = score[l]
                h = l

        old = labels[i]
        if old != v:
            if old >= 0:
                members[old] -= 1
                for r in range(d):
                    c = xi[r]
                    if c >= 0:
                        counts[old, r, c] -= 1
                        nn[old, r] -= 1
            members[v] += 1
            for r in range(d):
                c = xi[r]
                if c >= 0:
                    counts[v, r, c] += 1
                    nn[v, r] += 1
            labels[i] = v
            changed += 1

        if competition:
            g[v] += 1
            g_total += 1
            delta[v] = delta[v] + eta
            u[v] = 1.0 / (1.0 + exp(-10.0 * delta[v] + 5.0))
            if penalty and h >= 0:
                delta[h] = delta[h] - eta * s[h]
                u[h] = 1.0 / (1.0 + exp(-10.0 * delta[h] + 5.0))

    return changed, g_total
