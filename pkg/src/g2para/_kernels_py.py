"""Pure-Python tensor kernels on flat row-major lists over 7 dimensions.

Index conventions (shared with the compiled core):

* a 3-tensor ``T`` is a length-343 list, ``T[i*49 + j*7 + k]``;
* a matrix ``A`` is a length-49 list, ``A[a*7 + i]`` is component ``a`` of
  the image of basis vector ``i`` (columns are images);
* a vector is a length-7 list.

Structural zeros are skipped, so sparse inputs are cheap.  Entries never
touched come back as the int ``0``.
"""

DIM = 7
DIM2 = 49
DIM3 = 343


def matvec(A, v):
    out = [0] * DIM
    for i in range(DIM):
        vi = v[i]
        if not vi:
            continue
        for a in range(DIM):
            c = A[a * DIM + i]
            if c:
                out[a] = out[a] + c * vi
    return out


def matmul(A, B):
    """Composition ``A o B`` (apply B first)."""
    out = [0] * DIM2
    for k in range(DIM):
        for j in range(DIM):
            b = B[k * DIM + j]
            if not b:
                continue
            for i in range(DIM):
                a = A[i * DIM + k]
                if a:
                    out[i * DIM + j] = out[i * DIM + j] + a * b
    return out


def bilinear(M, x, y):
    total = 0
    for i in range(DIM):
        xi = x[i]
        if not xi:
            continue
        for j in range(DIM):
            yj = y[j]
            if not yj:
                continue
            m = M[i * DIM + j]
            if m:
                total = total + m * xi * yj
    return total


def eval3(T, x, y, z):
    """``T(x, y, z)`` for a flat 3-tensor."""
    total = 0
    for i in range(DIM):
        xi = x[i]
        if not xi:
            continue
        for j in range(DIM):
            yj = y[j]
            if not yj:
                continue
            xy = xi * yj
            base = i * DIM2 + j * DIM
            for k in range(DIM):
                zk = z[k]
                if not zk:
                    continue
                t = T[base + k]
                if t:
                    total = total + t * xy * zk
    return total


def pullback3(T, A, B, C):
    """``R[i,j,k] = T(A e_i, B e_j, C e_k)``; ``None`` stands for the identity."""
    cur = list(T)
    for slot, M in enumerate((A, B, C)):
        if M is None:
            continue
        nxt = [0] * DIM3
        for idx in range(DIM3):
            t = cur[idx]
            if not t:
                continue
            i, rem = divmod(idx, DIM2)
            j, k = divmod(rem, DIM)
            if slot == 0:
                src, stride, base = i, DIM2, j * DIM + k
            elif slot == 1:
                src, stride, base = j, DIM, i * DIM2 + k
            else:
                src, stride, base = k, 1, i * DIM2 + j * DIM
            row = src * DIM
            for m in range(DIM):
                c = M[row + m]
                if c:
                    pos = base + m * stride
                    nxt[pos] = nxt[pos] + c * t
        cur = nxt
    return cur


def contract_first(T, x):
    """Matrix ``N[j,k] = T(x, e_j, e_k)``."""
    out = [0] * DIM2
    for i in range(DIM):
        xi = x[i]
        if not xi:
            continue
        base = i * DIM2
        for r in range(DIM2):
            t = T[base + r]
            if t:
                out[r] = out[r] + xi * t
    return out
