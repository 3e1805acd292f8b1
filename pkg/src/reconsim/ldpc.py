"""LDPC parity-check matrices, alist I/O, and syndrome-target BP decoding.

Reconciliation here is syndrome based: the decoder does not search for a
codeword but for the frame whose syndrome equals a disclosed target.  That
only changes the sign pattern of the check-node messages, everything else is
standard belief propagation with a flooding schedule.

Matrices are stored as two CSR-like edge lists (check-major and
variable-major) because the decoder is written against flat edge arrays.
"""

from dataclasses import dataclass

import numpy as np

LLR_CLIP = 50.0

# magnitudes below this are treated as erasures inside the check update;
# keeps log-tanh and its inverse finite
_MAG_FLOOR = 1e-12


@dataclass(frozen=True)
class ParityCheckMatrix:
    """Sparse binary parity-check matrix in edge-list form.

    Attributes:
        n: number of variables (columns).
        m: number of checks (rows).
        chk_ptr: (m+1,) offsets into ``chk_vars`` per check.
        chk_vars: (E,) variable index of each edge, check-major, strictly
            increasing within a check.
        var_ptr: (n+1,) offsets into ``var_chks`` per variable.
        var_chks: (E,) check index of each edge, variable-major, strictly
            increasing within a variable.
    """

    n: int
    m: int
    chk_ptr: np.ndarray
    chk_vars: np.ndarray
    var_ptr: np.ndarray
    var_chks: np.ndarray

    @property
    def num_edges(self):
        return int(self.chk_vars.size)

    @property
    def design_rate(self):
        return (self.n - self.m) / self.n

    def check_degrees(self):
        return np.diff(self.chk_ptr)

    def variable_degrees(self):
        return np.diff(self.var_ptr)


@dataclass(frozen=True)
class DecodeResult:
    """Outcome of a decoding attempt.

    Attributes:
        bits: hard decisions, (n,) uint8.
        converged: True iff the syndrome of ``bits`` equals the target.
        iterations: number of iterations run (equals max_iter on failure).
    """

    bits: np.ndarray
    converged: bool
    iterations: int


def _from_check_lists(n, check_lists):
    """Assemble a ParityCheckMatrix from per-check variable lists."""
    m = len(check_lists)
    degrees = np.array([len(c) for c in check_lists], dtype=np.int64)
    if m == 0 or n <= 0:
        raise ValueError("parity-check matrix must have at least one row and one column")
    if degrees.min() == 0:
        raise ValueError("parity-check matrix has an empty check row")
    chk_ptr = np.concatenate(([0], np.cumsum(degrees)))
    chk_vars = np.concatenate([np.sort(np.asarray(c, dtype=np.int64)) for c in check_lists])
    if chk_vars.min() < 0 or chk_vars.max() >= n:
        raise ValueError("variable index out of range")
    for j in range(m):
        seg = chk_vars[chk_ptr[j] : chk_ptr[j + 1]]
        if seg.size > 1 and np.any(seg[1:] == seg[:-1]):
            raise ValueError(f"check {j} lists a variable twice")
    chk_of_edge = np.repeat(np.arange(m, dtype=np.int64), degrees)
    order = np.lexsort((chk_of_edge, chk_vars))
    var_chks = chk_of_edge[order]
    var_deg = np.bincount(chk_vars, minlength=n)
    var_ptr = np.concatenate(([0], np.cumsum(var_deg)))
    return ParityCheckMatrix(int(n), int(m), chk_ptr, chk_vars, var_ptr, var_chks)


def generate_regular_code(n, col_weight, row_weight, seed):
    """Sample a regular code by random edge matching.

    Every variable gets ``col_weight`` edge stubs and every check
    ``row_weight``; a seeded random permutation matches them, and double
    edges are then removed by swapping the variable endpoints of offending
    edges with randomly chosen partners until the graph is simple.

    Args:
        n: block length.
        col_weight: variable degree, at least 2.
        row_weight: check degree, larger than col_weight and dividing
            n * col_weight.
        seed: integer seed; same seed, same code.

    Returns:
        A ParityCheckMatrix with m = n * col_weight / row_weight checks
        (design rate 1 - col_weight / row_weight).
    """
    if col_weight < 2:
        raise ValueError("column weight must be at least 2")
    if row_weight <= col_weight:
        raise ValueError("row weight must exceed column weight")
    if (n * col_weight) % row_weight != 0:
        raise ValueError("row weight must divide n * col_weight")
    m = n * col_weight // row_weight
    if n <= row_weight:
        raise ValueError("block length must exceed the row weight")
    rng = np.random.default_rng(seed)
    num_edges = n * col_weight
    chk_of_edge = np.repeat(np.arange(m, dtype=np.int64), row_weight)
    edge_var = rng.permutation(np.repeat(np.arange(n, dtype=np.int64), col_weight))
    for _ in range(100):
        key = chk_of_edge * n + edge_var
        order = np.argsort(key, kind="stable")
        repeated = key[order][1:] == key[order][:-1]
        if not repeated.any():
            break
        # keep the first edge of each duplicate group, swap the rest away
        for e in order[1:][repeated].tolist():
            partner = int(rng.integers(num_edges))
            edge_var[e], edge_var[partner] = edge_var[partner], edge_var[e]
    else:
        raise RuntimeError("failed to remove double edges; degrees too dense")
    check_lists = np.split(edge_var, np.arange(row_weight, num_edges, row_weight))
    return _from_check_lists(n, check_lists)


def load_alist(text):
    """Parse a parity-check matrix from alist text.

    The format is the usual one: ``n m`` on the first line, maximum column
    and row degrees on the second, then the per-column and per-row degree
    lists, then one line of 1-based indices per column and per row (zero
    padded up to the maxima; padding zeros are ignored).

    Raises:
        ValueError: on malformed input, citing the offending line.
    """
    lines = text.splitlines()

    def ints(idx, expect=None):
        if idx >= len(lines):
            raise ValueError(f"alist truncated at line {idx + 1}")
        try:
            vals = [int(tok) for tok in lines[idx].split()]
        except ValueError:
            raise ValueError(f"alist line {idx + 1}: non-integer token") from None
        if expect is not None and len(vals) != expect:
            raise ValueError(f"alist line {idx + 1}: expected {expect} values, got {len(vals)}")
        return vals

    n, m = ints(0, 2)
    if n <= 0 or m <= 0:
        raise ValueError("alist line 1: dimensions must be positive")
    max_col, max_row = ints(1, 2)
    col_deg = ints(2, n)
    row_deg = ints(3, m)
    if col_deg and (min(col_deg) < 0 or max(col_deg) > max_col):
        raise ValueError("alist line 3: column degree outside [0, max]")
    if row_deg and (min(row_deg) < 1 or max(row_deg) > max_row):
        raise ValueError("alist line 4: row degree outside [1, max]")
    col_lists = []
    for i in range(n):
        vals = [v for v in ints(4 + i) if v != 0]
        if len(vals) != col_deg[i]:
            raise ValueError(
                f"alist line {5 + i}: column {i} lists {len(vals)} checks, degree says {col_deg[i]}"
            )
        if vals and (min(vals) < 1 or max(vals) > m):
            raise ValueError(f"alist line {5 + i}: check index out of range")
        col_lists.append(vals)
    check_lists = [[] for _ in range(m)]
    for j in range(m):
        vals = [v for v in ints(4 + n + j) if v != 0]
        if len(vals) != row_deg[j]:
            raise ValueError(
                f"alist line {5 + n + j}: row {j} lists {len(vals)} variables, degree says {row_deg[j]}"
            )
        if vals and (min(vals) < 1 or max(vals) > n):
            raise ValueError(f"alist line {5 + n + j}: variable index out of range")
        check_lists[j] = [v - 1 for v in vals]
    matrix = _from_check_lists(n, check_lists)
    # the column lists are redundant; make sure both halves describe one graph
    edges_from_cols = sorted((v - 1, i) for i, vals in enumerate(col_lists) for v in vals)
    edges_from_rows = sorted(
        (int(j), int(v))
        for j in range(m)
        for v in matrix.chk_vars[matrix.chk_ptr[j] : matrix.chk_ptr[j + 1]]
    )
    if edges_from_cols != edges_from_rows:
        raise ValueError("alist column and row adjacency lists disagree")
    return matrix


def write_alist(matrix):
    """Serialize a ParityCheckMatrix to alist text (inverse of load_alist)."""
    col_deg = matrix.variable_degrees()
    row_deg = matrix.check_degrees()
    max_col = int(col_deg.max())
    max_row = int(row_deg.max())
    out = [f"{matrix.n} {matrix.m}", f"{max_col} {max_row}"]
    out.append(" ".join(str(int(d)) for d in col_deg))
    out.append(" ".join(str(int(d)) for d in row_deg))
    for i in range(matrix.n):
        checks = matrix.var_chks[matrix.var_ptr[i] : matrix.var_ptr[i + 1]] + 1
        padded = list(map(int, checks)) + [0] * (max_col - checks.size)
        out.append(" ".join(map(str, padded)))
    for j in range(matrix.m):
        vars_ = matrix.chk_vars[matrix.chk_ptr[j] : matrix.chk_ptr[j + 1]] + 1
        padded = list(map(int, vars_)) + [0] * (max_row - vars_.size)
        out.append(" ".join(map(str, padded)))
    return "\n".join(out) + "\n"


def syndrome(matrix, bits):
    """Syndrome H @ bits mod 2, returned as (m,) uint8."""
    bits = np.asarray(bits)
    if bits.shape != (matrix.n,):
        raise ValueError(f"expected {matrix.n} bits, got shape {bits.shape}")
    sums = np.add.reduceat(bits[matrix.chk_vars].astype(np.int64), matrix.chk_ptr[:-1])
    return (sums & 1).astype(np.uint8)


def _log_tanh(mag):
    # -log tanh(mag / 2), its own inverse; stable at both ends
    mag = np.maximum(mag, _MAG_FLOOR)
    return np.log1p(np.exp(-mag)) - np.log(-np.expm1(-mag))


def decode_syndrome(
    matrix,
    llrs,
    target,
    max_iter=200,
    variant="sum-product",
    min_sum_scale=0.75,
):
    """Flooding BP toward a target syndrome.

    Check messages carry an extra sign (1 - 2 * target_j), which is the only
    difference from decoding to the all-zero syndrome.  Variable-to-check
    messages are clipped to [-50, 50] each iteration.  Hard decisions map
    non-negative posteriors to bit 0; the decoder stops as soon as their
    syndrome matches the target (checked before the first iteration too, so
    an already-consistent input returns with iterations = 0).

    Args:
        matrix: the code.
        llrs: (n,) prior LLRs, L = ln(P[bit=0]/P[bit=1]).
        target: (m,) target syndrome in {0,1}.
        max_iter: iteration budget.
        variant: "sum-product" or "min-sum" (normalized).
        min_sum_scale: scale factor applied to min-sum check messages.

    Returns:
        A :class:`DecodeResult`.
    """
    if variant not in ("sum-product", "min-sum"):
        raise ValueError(f"unknown decoder variant {variant!r}")
    llrs = np.clip(np.asarray(llrs, dtype=np.float64), -LLR_CLIP, LLR_CLIP)
    if llrs.shape != (matrix.n,):
        raise ValueError(f"expected {matrix.n} LLRs, got shape {llrs.shape}")
    target = np.asarray(target)
    if target.shape != (matrix.m,):
        raise ValueError(f"expected {matrix.m} syndrome bits, got shape {target.shape}")
    if target.size and (target.min() < 0 or target.max() > 1):
        raise ValueError("target syndrome must be binary")

    chk_deg = matrix.check_degrees()
    chk_of_edge = np.repeat(np.arange(matrix.m, dtype=np.int64), chk_deg)
    var_of_edge = matrix.chk_vars
    ptr = matrix.chk_ptr[:-1]
    target_sign = (1.0 - 2.0 * target.astype(np.float64))[chk_of_edge]

    bits = (llrs < 0).astype(np.uint8)
    if np.array_equal(syndrome(matrix, bits), target):
        return DecodeResult(bits, True, 0)

    v2c = llrs[var_of_edge]
    for iteration in range(1, max_iter + 1):
        neg = (v2c < 0).astype(np.int64)
        par_excl = (np.add.reduceat(neg, ptr)[chk_of_edge] - neg) & 1
        sign = target_sign * (1.0 - 2.0 * par_excl)
        mag = np.abs(v2c)
        if variant == "sum-product":
            phi = _log_tanh(mag)
            c2v = sign * _log_tanh(np.add.reduceat(phi, ptr)[chk_of_edge] - phi)
        else:
            m1 = np.minimum.reduceat(mag, ptr)
            is_min = mag == m1[chk_of_edge]
            n_min = np.add.reduceat(is_min.astype(np.int64), ptr)
            rest = np.where(is_min, np.inf, mag)
            m2 = np.minimum.reduceat(rest, ptr)
            excl = np.where(
                is_min & (n_min[chk_of_edge] == 1), m2[chk_of_edge], m1[chk_of_edge]
            )
            c2v = min_sum_scale * sign * excl
        c2v = np.clip(c2v, -LLR_CLIP, LLR_CLIP)
        posterior = llrs + np.bincount(var_of_edge, weights=c2v, minlength=matrix.n)
        v2c = np.clip(posterior[var_of_edge] - c2v, -LLR_CLIP, LLR_CLIP)
        bits = (posterior < 0).astype(np.uint8)
        if np.array_equal(syndrome(matrix, bits), target):
            return DecodeResult(bits, True, iteration)
    return DecodeResult(bits, False, max_iter)
