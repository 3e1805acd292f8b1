"""Monte-Carlo frame-error simulation of the reconciliation schemes.

Reproducibility contract: frame i of a point draws from a counter-based
stream keyed by (point seed, i), and early stopping is decided by scanning
cumulative frame errors in frame-index order.  Results are therefore
bit-identical for any worker count and any chunking of the frame range.
"""

import csv
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass

import numpy as np

from reconsim.channel import make_constellation, transmit
from reconsim.ldpc import decode_syndrome, syndrome
from reconsim.llr import build_rrh_table, llr_direct, llr_rrs
from reconsim.metrics import beta_from_snr
from reconsim.quantizer import bits_from_regions, build_frame, make_quantizer
from reconsim.softmetric import soft_metric

SCHEMES = ("rrh", "rrs", "direct")

CSV_HEADER = ("SNR", "BER", "FER", "beta", "frames", "iters")


@dataclass(frozen=True)
class SimPoint:
    """One simulated operating point.

    Attributes:
        snr_db: channel SNR in dB.
        scheme: "rrh", "rrs" or "direct".
        code: the :class:`reconsim.ldpc.ParityCheckMatrix` to reconcile with.
        seed: master seed of the point; frame i uses the Philox stream
            keyed (seed, i).
        max_frames: frame budget.
        min_frame_errors: stop once this many frame errors have accumulated
            (in frame order); set it above any plausible count to run the
            full budget.
        labelling: quantizer labelling map.
        max_iter: decoder iteration budget per frame.
        decoder_variant: "sum-product" or "min-sum".
        min_sum_scale: normalization factor for min-sum.
        complement_odd: soft-metric disclosure convention (rrs only).
    """

    snr_db: float
    scheme: str
    code: object
    seed: int
    max_frames: int = 100000
    min_frame_errors: int = 50
    labelling: str = "natural"
    max_iter: int = 200
    decoder_variant: str = "sum-product"
    min_sum_scale: float = 0.75
    complement_odd: bool = False


@dataclass(frozen=True)
class PointResult:
    """Aggregated outcome of a point.

    ``ber = bit_errors / (frames * n)`` and ``fer = frame_errors / frames``
    exactly; the first six fields are the CSV columns.
    """

    snr_db: float
    ber: float
    fer: float
    beta: float
    frames: int
    mean_iters: float
    bit_errors: int = 0
    frame_errors: int = 0


class _Context:
    """Per-point precomputation shared by all frames."""

    def __init__(self, point):
        if point.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {point.scheme!r}")
        if point.max_frames < 1:
            raise ValueError("max_frames must be at least 1")
        if point.min_frame_errors < 1:
            raise ValueError("min_frame_errors must be at least 1")
        if point.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        self.constellation = make_constellation(point.snr_db)
        self.spec = make_quantizer(self.constellation, point.labelling)
        self.rrh_table = (
            build_rrh_table(self.constellation, self.spec) if point.scheme == "rrh" else None
        )


def _frame_rng(seed, frame_idx):
    # 128-bit Philox key: high word = point seed, low word = frame index
    return np.random.Generator(np.random.Philox(key=(int(seed) << 64) + int(frame_idx)))


def run_round(point, rng, _ctx=None):
    """Simulate one frame: draw, disclose, decode.

    Args:
        point: a :class:`SimPoint`.
        rng: ``numpy.random.Generator`` for this frame's symbol and noise
            draws (symbols first, then noise, for every scheme).

    Returns:
        Tuple (frame_error, bit_errors, iterations); frame_error is 1 when
        the decoder output differs from the reconciled frame in any bit,
        whether or not the decoder reported convergence.
    """
    ctx = _Context(point) if _ctx is None else _ctx
    code = point.code
    num_symbols = -(-code.n // 2)
    x = rng.integers(0, 4, num_symbols)
    y = transmit(ctx.constellation, x, rng)
    if point.scheme == "direct":
        frame = bits_from_regions(x, ctx.spec).reshape(-1)[: code.n]
        llrs = llr_direct(y, ctx.constellation, ctx.spec).reshape(-1)[: code.n]
    else:
        frame, regions = build_frame(y, ctx.spec, code.n)
        if point.scheme == "rrh":
            llrs = ctx.rrh_table[x].reshape(-1)[: code.n]
        else:
            n_vals = soft_metric(y, regions, ctx.constellation, point.complement_odd)
            llrs = llr_rrs(
                x, n_vals, ctx.constellation, ctx.spec, point.complement_odd
            ).reshape(-1)[: code.n]
    target = syndrome(code, frame)
    result = decode_syndrome(
        code,
        llrs,
        target,
        max_iter=point.max_iter,
        variant=point.decoder_variant,
        min_sum_scale=point.min_sum_scale,
    )
    bit_errors = int(np.count_nonzero(result.bits != frame))
    return int(bit_errors > 0), bit_errors, result.iterations


def _frames_task(point, start, count):
    ctx = _Context(point)
    return [
        run_round(point, _frame_rng(point.seed, idx), ctx)
        for idx in range(start, start + count)
    ]


def run_point(point, jobs=1, rate=None):
    """Run a point until its stopping rule fires.

    Frames are evaluated in chunks (possibly by a process pool) but
    accounted strictly in frame-index order: the point stops after the
    first frame at which ``min_frame_errors`` cumulative frame errors have
    been seen, or after ``max_frames``.  Frames beyond the stopping index
    never enter the averages, so the worker count cannot change the result.

    Args:
        point: a :class:`SimPoint`.
        jobs: worker processes; 1 runs inline.
        rate: code rate used for the beta column; defaults to the design
            rate of ``point.code``.

    Returns:
        A :class:`PointResult`.
    """
    _Context(point)  # validate eagerly, even though workers rebuild it
    chunk = 16
    starts = list(range(0, point.max_frames, chunk))
    sizes = {s: min(chunk, point.max_frames - s) for s in starts}
    rows = {}

    def stop_index():
        # first frame count t at which the stopping rule is satisfied,
        # scanning only contiguously-available frames; None = keep going
        done = 0
        errors = 0
        while done < point.max_frames and done in rows:
            errors += rows[done][0]
            done += 1
            if errors >= point.min_frame_errors:
                return done
        if done == point.max_frames:
            return done
        return None

    if jobs <= 1:
        for s in starts:
            for offset, row in enumerate(_frames_task(point, s, sizes[s])):
                rows[s + offset] = row
            if stop_index() is not None:
                break
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            pending = {}
            queue = list(starts)
            while True:
                while queue and len(pending) < jobs + 1:
                    s = queue.pop(0)
                    pending[pool.submit(_frames_task, point, s, sizes[s])] = s
                if not pending:
                    break
                finished, _ = wait(pending, return_when=FIRST_COMPLETED)
                for fut in finished:
                    s = pending.pop(fut)
                    for offset, row in enumerate(fut.result()):
                        rows[s + offset] = row
                if stop_index() is not None:
                    for fut in pending:
                        fut.cancel()
                    break

    t = stop_index()
    if t is None:
        raise RuntimeError("frame accounting incomplete")  # unreachable
    frame_errors = sum(rows[i][0] for i in range(t))
    bit_errors = sum(rows[i][1] for i in range(t))
    iters = sum(rows[i][2] for i in range(t))
    effective_rate = point.code.design_rate if rate is None else rate
    return PointResult(
        snr_db=point.snr_db,
        ber=bit_errors / (t * point.code.n),
        fer=frame_errors / t,
        beta=float(beta_from_snr(point.snr_db, effective_rate)),
        frames=t,
        mean_iters=iters / t,
        bit_errors=bit_errors,
        frame_errors=frame_errors,
    )


def _format(value):
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def load_sweep(path):
    """Parse a CSV written by :func:`run_sweep`.

    Returns:
        List of :class:`PointResult` carrying the six CSV columns (the raw
        error counters are not stored in the file and default to zero).

    Raises:
        ValueError: on a missing or unexpected header.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader, ()))
        if header != CSV_HEADER:
            raise ValueError(f"unexpected sweep CSV header {header!r}")
        out = []
        for row in reader:
            if len(row) != len(CSV_HEADER):
                raise ValueError(f"sweep CSV row has {len(row)} fields, expected {len(CSV_HEADER)}")
            out.append(
                PointResult(
                    snr_db=float(row[0]),
                    ber=float(row[1]),
                    fer=float(row[2]),
                    beta=float(row[3]),
                    frames=int(row[4]),
                    mean_iters=float(row[5]),
                )
            )
    return out


def run_sweep(points, jobs=1, rate=None, path=None):
    """Run a list of points and optionally write the results as CSV.

    The CSV has header ``SNR,BER,FER,beta,frames,iters`` and one row per
    point; floats are written with 17 significant digits so files from
    identical configurations compare byte for byte.

    Returns:
        List of :class:`PointResult`, in input order.

    Raises:
        ValueError: on an empty point list.
    """
    points = list(points)
    if not points:
        raise ValueError("sweep needs at least one point")
    results = [run_point(point, jobs=jobs, rate=rate) for point in points]
    if path is not None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for res in results:
                writer.writerow(
                    [
                        _format(res.snr_db),
                        _format(res.ber),
                        _format(res.fer),
                        _format(res.beta),
                        _format(res.frames),
                        _format(res.mean_iters),
                    ]
                )
    return results
