"""Monte Carlo benchmark harness: problem generation, sweeps, persistence,
and the success-rate figure.

The experiment design: for each sparsity level k, draw fresh random
instances (Gaussian matrix with columns rescaled to a fixed norm, uniform
support, Gaussian nonzeros), decode each instance with every enabled method,
and score exact recovery.  Per-instance seeds are derived from the master
seed with a stable integer hash, so results are identical for any worker
count or execution order.
"""

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import Observation, SensingMatrix, SparseSignal
from .decoders import AltL1Config, alt_l1, irls, l1_decode, reweighted_l1

METHODS = ("l1", "alt_l1", "reweighted_l1", "irls")
CSV_HEADER = ("k", "trial", "method", "success", "recovery_error", "wall_time_ms", "instance_seed")
SUCCESS_MODES = ("linf", "support")

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class ExperimentConfig:
    """Sweep settings.  The defaults reproduce the reference experiment:
    256-dimensional signals, 100 measurements, 100 trials per sparsity
    level, 4 alternation steps, signal nonzeros of standard deviation 2,
    matrix columns normalized to length 2."""

    n: int = 256
    m: int = 100
    k_grid: tuple = (15, 20, 25, 30, 35, 40, 45)
    trials: int = 100
    methods: tuple = METHODS
    L: int = 4
    seed: int = 0
    success_tol: float = 1e-3
    success_mode: str = "linf"
    signal_std: float = 2.0
    column_norm: float = 2.0
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "k_grid", tuple(int(k) for k in self.k_grid))
        object.__setattr__(self, "methods", tuple(self.methods))
        if not (1 <= self.m <= self.n):
            raise ValueError(f"need 1 <= m <= n, got m = {self.m}, n = {self.n}")
        if not self.k_grid:
            raise ValueError("k_grid must be non-empty")
        if any(not 0 <= k <= self.m for k in self.k_grid):
            raise ValueError(f"every k must lie in [0, m], got {self.k_grid}")
        if not (isinstance(self.trials, int) and self.trials >= 1):
            raise ValueError(f"trials must be a positive integer, got {self.trials}")
        unknown = [name for name in self.methods if name not in METHODS]
        if unknown or not self.methods:
            raise ValueError(f"methods must be a non-empty subset of {METHODS}, got {self.methods}")
        if not (isinstance(self.L, int) and self.L >= 1):
            raise ValueError(f"L must be a positive integer, got {self.L}")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise ValueError(f"seed must be a 64-bit nonnegative integer, got {self.seed}")
        if not self.success_tol > 0:
            raise ValueError(f"success_tol must be positive, got {self.success_tol}")
        if self.success_mode not in SUCCESS_MODES:
            raise ValueError(f"success_mode must be one of {SUCCESS_MODES}, got {self.success_mode!r}")
        if not self.signal_std > 0:
            raise ValueError(f"signal_std must be positive, got {self.signal_std}")
        if not self.column_norm > 0:
            raise ValueError(f"column_norm must be positive, got {self.column_norm}")
        if not (isinstance(self.workers, int) and self.workers >= 1):
            raise ValueError(f"workers must be a positive integer, got {self.workers}")


@dataclass
class TrialRecord:
    """One (instance, method) outcome.  ``status`` is an in-memory
    annotation ("ok" or "error:<type>") and is not persisted; failed decodes
    are persisted as non-successes with infinite error."""

    k: int
    trial: int
    method: str
    success: bool
    recovery_error: float
    wall_time_ms: float
    instance_seed: int
    status: str = "ok"


@dataclass
class SuccessCurve:
    """Success rates per (method, k), aggregated from trial records."""

    rates: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)

    @classmethod
    def from_records(cls, records):
        wins = {}
        totals = {}
        for r in records:
            key = (r.method, r.k)
            totals[key] = totals.get(key, 0) + 1
            wins[key] = wins.get(key, 0) + (1 if r.success else 0)
        rates = {key: wins[key] / totals[key] for key in totals}
        return cls(rates=rates, counts=totals)

    def rate(self, method, k):
        return self.rates[(method, k)]

    def method_names(self):
        present = {method for method, _ in self.rates}
        return [m for m in METHODS if m in present] + sorted(present - set(METHODS))

    def k_values(self, method):
        return sorted(k for meth, k in self.rates if meth == method)


def _mix64(v):
    """One splitmix64 scrambling round; pure 64-bit integer arithmetic so
    the value is identical on every platform and Python version."""
    v = (v + 0x9E3779B97F4A7C15) & _MASK64
    v = ((v ^ (v >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    v = ((v ^ (v >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (v ^ (v >> 31)) & _MASK64


def trial_seed(seed, k, trial):
    """Stable 64-bit per-instance seed derived from (master seed, k, trial)."""
    h = _mix64(seed & _MASK64)
    h = _mix64(h ^ _mix64(k & _MASK64))
    h = _mix64(h ^ _mix64(trial & _MASK64))
    return h


def gen_problem(n, m, k, rng_stream, signal_std=2.0, column_norm=2.0):
    """Draw one random instance: (SensingMatrix, SparseSignal, Observation).

    The matrix has i.i.d. standard normal entries with every column rescaled
    to Euclidean length ``column_norm`` (exactly, up to roundoff); the
    support is uniform over k-subsets; nonzero values are centered Gaussians
    with standard deviation ``signal_std``; y = A x in double precision.

    ``rng_stream`` is a numpy Generator or an integer seed.  The draw order
    (matrix, support, values) is fixed, so a fixed seed reproduces the
    instance bitwise.
    """
    if not 0 <= k <= m <= n:
        raise ValueError(f"need 0 <= k <= m <= n, got k = {k}, m = {m}, n = {n}")
    rng = (
        rng_stream
        if isinstance(rng_stream, np.random.Generator)
        else np.random.default_rng(rng_stream)
    )
    entries = rng.standard_normal((m, n))
    entries *= column_norm / np.linalg.norm(entries, axis=0)[np.newaxis, :]
    A = SensingMatrix(entries)

    values = np.zeros(n)
    if k > 0:
        support = np.sort(rng.choice(n, size=k, replace=False))
        nonzeros = rng.normal(0.0, signal_std, size=k)
        while np.any(nonzeros == 0.0):
            nonzeros = rng.normal(0.0, signal_std, size=k)
        values[support] = nonzeros
    x = SparseSignal(values)
    return A, x, Observation(A.entries @ values)


def score_success(x_hat, x_true, tol=1e-3, mode="linf"):
    """Score one decode.

    recovery_error is the relative l-infinity error
    ||x_hat - x||_inf / max(||x||_inf, 1).  In the default "linf" mode,
    success means error <= tol.  In "support" mode, success means the
    indices of x_hat above tol * ||x||_inf in magnitude are exactly the
    true support.

    Returns (success, recovery_error).
    """
    xt = x_true.values if isinstance(x_true, SparseSignal) else np.asarray(x_true, dtype=float)
    xh = np.asarray(x_hat, dtype=float)
    if xh.shape != xt.shape:
        raise ValueError(f"shape mismatch: {xh.shape} vs {xt.shape}")
    if mode not in SUCCESS_MODES:
        raise ValueError(f"mode must be one of {SUCCESS_MODES}, got {mode!r}")
    scale = float(np.max(np.abs(xt))) if xt.size else 0.0
    error = float(np.max(np.abs(xh - xt), initial=0.0)) / max(scale, 1.0)
    if mode == "linf":
        return error <= tol, error
    support_hat = np.flatnonzero(np.abs(xh) > tol * scale)
    return bool(np.array_equal(support_hat, np.flatnonzero(xt))), error


def _decode(method, A, y, cfg):
    if method == "l1":
        return l1_decode(A, y).x_hat
    if method == "alt_l1":
        return alt_l1(A, y, AltL1Config(L=cfg.L)).x_hat
    if method == "reweighted_l1":
        return reweighted_l1(A, y).x_hat
    if method == "irls":
        return irls(A, y).x_hat
    raise ValueError(f"unknown method {method!r}")


def run_trial(cfg, k, trial):
    """Decode one shared instance with every enabled method.

    A decoder raising is recorded as a failed trial (status "error:<type>",
    infinite error) rather than aborting the sweep.
    """
    instance_seed = trial_seed(cfg.seed, k, trial)
    A, x_true, y = gen_problem(
        cfg.n, cfg.m, k, instance_seed,
        signal_std=cfg.signal_std, column_norm=cfg.column_norm,
    )
    records = []
    for method in cfg.methods:
        start = time.perf_counter()
        try:
            x_hat = _decode(method, A, y, cfg)
            status = "ok"
        except Exception as exc:
            x_hat = None
            status = f"error:{type(exc).__name__}"
        elapsed_ms = (time.perf_counter() - start) * 1e3
        if x_hat is None:
            success, error = False, float("inf")
        else:
            success, error = score_success(x_hat, x_true, cfg.success_tol, cfg.success_mode)
        records.append(
            TrialRecord(
                k=k,
                trial=trial,
                method=method,
                success=success,
                recovery_error=error,
                wall_time_ms=elapsed_ms,
                instance_seed=instance_seed,
                status=status,
            )
        )
    return records


def _run_trial_packed(args):
    return run_trial(*args)


def run_sweep(cfg, csv_path=None):
    """Run the full Monte Carlo sweep described by ``cfg``.

    Trials are independent work items (one per (k, trial), covering all
    methods on a shared instance); with cfg.workers > 1 they execute on a
    process pool.  Records are merged by sorting on (k, trial, method), so
    the output is identical for any worker count.  When ``csv_path`` is
    given, records are persisted there before returning.

    Returns (SuccessCurve, list of TrialRecord).
    """
    items = [(cfg, k, trial) for k in cfg.k_grid for trial in range(cfg.trials)]
    if cfg.workers == 1:
        batches = [run_trial(*item) for item in items]
    else:
        chunk = max(1, len(items) // (cfg.workers * 8))
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            batches = list(pool.map(_run_trial_packed, items, chunksize=chunk))
    records = [record for batch in batches for record in batch]
    records.sort(key=lambda r: (r.k, r.trial, r.method))
    if csv_path is not None:
        write_records(records, csv_path)
    return SuccessCurve.from_records(records), records


def write_records(records, path):
    """Persist trial records as CSV: UTF-8, LF line endings, header
    k,trial,method,success,recovery_error,wall_time_ms,instance_seed, rows
    sorted by (k, trial, method)."""
    rows = sorted(records, key=lambda r: (r.k, r.trial, r.method))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in rows:
            writer.writerow(
                [
                    r.k,
                    r.trial,
                    r.method,
                    1 if r.success else 0,
                    repr(float(r.recovery_error)),
                    repr(float(r.wall_time_ms)),
                    r.instance_seed,
                ]
            )


def read_records(path):
    """Read back a CSV written by write_records.  The in-memory status
    annotation is not persisted; loaded records carry status "ok"."""
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        for row in reader:
            k, trial, method, success, error, ms, seed = row
            records.append(
                TrialRecord(
                    k=int(k),
                    trial=int(trial),
                    method=method,
                    success=success == "1",
                    recovery_error=float(error),
                    wall_time_ms=float(ms),
                    instance_seed=int(seed),
                )
            )
    return records


def curve_from_csv(path):
    """Aggregate a persisted CSV into a SuccessCurve (the same one
    run_sweep returned, by construction)."""
    return SuccessCurve.from_records(read_records(path))


_PLOT_MARKERS = ("o", "s", "^", "d", "v", "*")


def emit_plot(curve, path):
    """Render a success-rate-vs-sparsity SVG: one polyline per method,
    labeled axes, legend.  Output bytes are deterministic for fixed input
    (fixed hash salt, no embedded date, text kept as text elements)."""
    if not curve.rates:
        raise ValueError("cannot plot an empty curve")
    import matplotlib
    from matplotlib.figure import Figure

    fig = Figure(figsize=(7.0, 4.5))
    ax = fig.add_subplot(111)
    for idx, method in enumerate(curve.method_names()):
        ks = curve.k_values(method)
        ax.plot(
            ks,
            [curve.rate(method, k) for k in ks],
            marker=_PLOT_MARKERS[idx % len(_PLOT_MARKERS)],
            label=method,
        )
    ax.set_xlabel("sparsity k")
    ax.set_ylabel("success rate")
    ax.set_title("Exact recovery rate vs sparsity")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.3)
    ax.legend()
    with matplotlib.rc_context({"svg.hashsalt": "altl1", "svg.fonttype": "none"}):
        fig.savefig(path, format="svg", metadata={"Date": None})


def write_instance(path, A, x, y):
    """Write one instance as plain text: first line "n m k", then A
    row-major (one row per line), then x, then y; floats carry 17
    significant digits so they round-trip exactly."""
    entries = A.entries if hasattr(A, "entries") else np.asarray(A, dtype=float)
    xv = x.values if isinstance(x, SparseSignal) else np.asarray(x, dtype=float)
    yv = y.y if isinstance(y, Observation) else np.asarray(y, dtype=float)
    m, n = entries.shape
    k = int(np.count_nonzero(xv))

    def line(vec):
        return " ".join(f"{v:.17g}" for v in vec)

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{n} {m} {k}\n")
        for row in entries:
            fh.write(line(row) + "\n")
        fh.write(line(xv) + "\n")
        fh.write(line(yv) + "\n")


def read_instance(path):
    """Read an instance file written by write_instance.

    Returns (SensingMatrix, SparseSignal, Observation).  The header and
    field lengths are validated; k must match the nonzero count of x.
    """
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in (raw.strip() for raw in fh) if ln]
    if not lines:
        raise ValueError("empty instance file")
    header = lines[0].split()
    if len(header) != 3:
        raise ValueError(f"expected header 'n m k', got {lines[0]!r}")
    n, m, k = (int(tok) for tok in header)
    if len(lines) != 1 + m + 2:
        raise ValueError(f"expected {1 + m + 2} lines for m = {m}, found {len(lines)}")

    def parse(ln, count, what):
        vals = [float(tok) for tok in ln.split()]
        if len(vals) != count:
            raise ValueError(f"{what} has {len(vals)} entries, expected {count}")
        return np.array(vals)

    entries = np.vstack([parse(lines[1 + i], n, f"matrix row {i}") for i in range(m)])
    xv = parse(lines[1 + m], n, "x")
    yv = parse(lines[2 + m], m, "y")
    if int(np.count_nonzero(xv)) != k:
        raise ValueError(f"header says k = {k} but x has {np.count_nonzero(xv)} nonzeros")
    return SensingMatrix(entries), SparseSignal(xv), Observation(yv)


# Config-file parsing: "key = value" lines, # comments, fields of
# ExperimentConfig only.  Lists are comma- or whitespace-separated.


def _parse_int_list(text):
    return tuple(int(tok) for tok in text.replace(",", " ").split())


def _parse_name_list(text):
    return tuple(tok for tok in text.replace(",", " ").split())


_CONFIG_PARSERS = {
    "n": int,
    "m": int,
    "k_grid": _parse_int_list,
    "trials": int,
    "methods": _parse_name_list,
    "L": int,
    "seed": int,
    "success_tol": float,
    "success_mode": str,
    "signal_std": float,
    "column_norm": float,
    "workers": int,
}


def parse_config_text(text):
    """Parse config-file text into a dict of ExperimentConfig field values."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_PARSERS:
            raise ValueError(f"line {lineno}: unknown config key {key!r}")
        try:
            values[key] = _CONFIG_PARSERS[key](value)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad value for {key}: {exc}") from exc
    return values


def load_config(path, overrides=None):
    """Build an ExperimentConfig from a config file plus overrides (e.g.
    command-line flags); overrides win over file values."""
    with open(path, encoding="utf-8") as fh:
        values = parse_config_text(fh.read())
    if overrides:
        values.update(overrides)
    return ExperimentConfig(**values)
