"""Error-free transformations and a compensated matrix product.

Used to evaluate Riccati residuals as if in doubled working precision
(Ogita-Rump-Oishi style Dot2, vectorized over matrix entries).
"""

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    return p, al * bl - (((p - ah * bh) - al * bh) - ah * bl)


class CompensatedSum:
    """Accumulator holding a running sum and the sum of its rounding errors."""

    def __init__(self, shape):
        self.s = np.zeros(shape)
        self.c = np.zeros(shape)

    def add(self, x):
        self.s, e = two_sum(self.s, x)
        self.c += e

    def add_product(self, a, b, sign=1.0):
        """Add sign * a @ b for real a, b, one rank-one update at a time."""
        for k in range(a.shape[1]):
            p, e = two_prod(a[:, k : k + 1], b[k : k + 1, :])
            if sign < 0:
                p, e = -p, -e
            self.add(p)
            self.c += e

    def value(self):
        return self.s + self.c

    def split_value(self):
        hi = self.s + self.c
        return hi, (self.s - hi) + self.c


def _reim(M):
    M = np.asarray(M)
    if np.iscomplexobj(M):
        return M.real.copy(), M.imag.copy()
    return M.astype(float), None


def _cadd_product(acc_re, acc_im, a, b, sign=1.0):
    """acc += sign * a @ b with a, b given as (re, im-or-None) pairs."""
    ar, ai = a
    br, bi = b
    acc_re.add_product(ar, br, sign)
    if ai is not None and bi is not None:
        acc_re.add_product(ai, bi, -sign)
    if acc_im is not None:
        if bi is not None:
            acc_im.add_product(ar, bi, sign)
        if ai is not None:
            acc_im.add_product(ai, br, sign)


def compensated_residual(A, G, Q, X):
    """A^* X + X A + Q - X G X evaluated in doubled precision, rounded once."""
    n = X.shape[0]
    cplx = any(np.iscomplexobj(M) for M in (A, G, Q, X))
    a, g, q, x = (_reim(M) for M in (A, G, Q, X))
    ah = (a[0].T.copy(), None if a[1] is None else -a[1].T)

    def new():
        return CompensatedSum((n, n))

    xg_re, xg_im = new(), new() if cplx else None
    _cadd_product(xg_re, xg_im, x, g)
    t_re_hi, t_re_lo = xg_re.split_value()
    if cplx:
        t_im_hi, t_im_lo = xg_im.split_value()
        t_hi, t_lo = (t_re_hi, t_im_hi), (t_re_lo, t_im_lo)
    else:
        t_hi, t_lo = (t_re_hi, None), (t_re_lo, None)

    f_re, f_im = new(), new() if cplx else None
    _cadd_product(f_re, f_im, ah, x)
    _cadd_product(f_re, f_im, x, a)
    f_re.add(q[0])
    if cplx and q[1] is not None:
        f_im.add(q[1])
    _cadd_product(f_re, f_im, t_hi, x, -1.0)
    _cadd_product(f_re, f_im, t_lo, x, -1.0)
    if cplx:
        return f_re.value() + 1j * f_im.value()
    return f_re.value()
