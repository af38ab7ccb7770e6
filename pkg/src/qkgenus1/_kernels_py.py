"""Pure-Python series kernels; exact for any Python numbers.

Arrays are flat coefficient lists aligned with a series layout whose
entries are sorted so that ``alpha - beta`` always precedes ``alpha``.
``shifts[t][i]`` is the index of ``alpha_i - beta_t`` or -1 when that
exponent is negative.
"""


def div_sparse(s, shifts, coeffs):
    """Solve ``g * (1 + sum_t c_t x**beta_t) = s`` by forward substitution."""
    g = list(s)
    if len(coeffs) == 1:
        c, tab = coeffs[0], shifts[0]
        for i, j in enumerate(tab):
            if j >= 0:
                g[i] -= c * g[j]
        return g
    rows = list(zip(coeffs, shifts))
    for i in range(len(g)):
        acc = g[i]
        for c, tab in rows:
            j = tab[i]
            if j >= 0:
                acc -= c * g[j]
        g[i] = acc
    return g


def mul_sparse(s, shifts, coeffs):
    """Coefficients of ``s * sum_t c_t x**beta_t``."""
    out = [0] * len(s)
    for c, tab in zip(coeffs, shifts):
        for i, j in enumerate(tab):
            if j >= 0:
                v = s[j]
                if v:
                    out[i] += c * v
    return out


def mul_dense(a, b, exps, codes, orders, cap):
    """Truncated product of two series on the same layout."""
    index = {code: i for i, code in enumerate(codes)}
    nz_b = [(j, v, exps[j], codes[j], sum(exps[j])) for j, v in enumerate(b) if v]
    out = [0] * len(a)
    nvars = len(orders)
    for i, u in enumerate(a):
        if not u:
            continue
        ei, ci, di = exps[i], codes[i], sum(exps[i])
        for j, v, ej, cj, dj in nz_b:
            if cap is not None and di + dj > cap:
                continue
            for k in range(nvars):
                if ei[k] + ej[k] > orders[k]:
                    break
            else:
                out[index[ci + cj]] += u * v
    return out
