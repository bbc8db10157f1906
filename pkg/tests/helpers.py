from collections import Counter

import numpy as np

# upper 1e-4 quantiles of chi-square, by degrees of freedom
CHI2_CRIT = {1: 15.137, 2: 18.421, 3: 21.108, 4: 23.513, 5: 25.745, 15: 44.263, 24: 58.613, 41: 83.473}


def chi2_stat(counts, probs):
    total = sum(counts.get(s, 0) for s in probs)
    return sum((counts.get(s, 0) - total * float(p)) ** 2 / (total * float(p)) for s, p in probs.items())


def empirical_tv(counts, probs):
    total = sum(counts.values())
    keys = set(counts) | set(probs)
    return 0.5 * sum(abs(counts.get(s, 0) / total - float(probs.get(s, 0))) for s in keys)


def row_counts(rows):
    rows = np.asarray(rows)
    uniq, cnt = np.unique(rows, axis=0, return_counts=True)
    return Counter({tuple(int(v) for v in u): int(c) for u, c in zip(uniq, cnt)})
