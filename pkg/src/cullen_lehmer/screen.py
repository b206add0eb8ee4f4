"""The finishing computation: enumerate n = 2^a * 3^b below the final bound
and refute the Lehmer necessary conditions on C_n by witness search.

For a Lehmer C_n every prime factor q must satisfy (q - 1) | n * 2^n, C_n
must be squarefree, and C_n must carry at least LEHMER_MIN_OMEGA distinct
prime factors; C_n must also be composite.  The search works in residues
(cullen_mod) so n near 200,000 never materializes C_n inside the scan loop.
There is deliberately no status meaning "the Lehmer property holds": the
screen can only refute or leave a value undecided.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass
from multiprocessing import Pool
from pathlib import Path

from . import arith, structure
from .bounds import LEHMER_MIN_OMEGA

REFUTED_SHAPE = "REFUTED_SHAPE"
REFUTED_SQUARE = "REFUTED_SQUARE"
REFUTED_OMEGA = "REFUTED_OMEGA"
PRIME_CN = "PRIME_CN"
UNDECIDED = "UNDECIDED"

STATUSES = frozenset({REFUTED_SHAPE, REFUTED_SQUARE, REFUTED_OMEGA, PRIME_CN, UNDECIDED})

DEFAULT_TRIAL_LIMIT = 10**6


@dataclass(frozen=True)
class Verdict:
    n: int
    status: str
    witness: int | None
    reason: str
    trial_limit_used: int
    rho_budget_used: int
    elapsed: float

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")


@dataclass(frozen=True)
class ScreenConfig:
    """Everything that can change a verdict; hashed into each record."""

    trial_limit: int = DEFAULT_TRIAL_LIMIT
    rho_budget: int = arith.DEFAULT_RHO_BUDGET
    min_omega: int = LEHMER_MIN_OMEGA
    cn_cap: int = structure.DEFAULT_CN_CAP
    mr_rounds: int = arith.DEFAULT_MR_ROUNDS


def config_hash(cfg: ScreenConfig) -> str:
    payload = json.dumps(asdict(cfg), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()[:12]


def enumerate_2a3b(n_max: int) -> list[int]:
    """All n = 2^a * 3^b <= n_max (a, b >= 0), ascending, starting at 1."""
    if n_max < 1:
        raise ValueError("enumerate_2a3b requires n_max >= 1")
    out = []
    p3 = 1
    while p3 <= n_max:
        v = p3
        while v <= n_max:
            out.append(v)
            v *= 2
        p3 *= 3
    out.sort()
    return out


def witness_search(
    n: int,
    trial_limit: int = DEFAULT_TRIAL_LIMIT,
    rho_budget: int = arith.DEFAULT_RHO_BUDGET,
    *,
    min_omega: int = LEHMER_MIN_OMEGA,
    cn_cap: int = structure.DEFAULT_CN_CAP,
    mr_rounds: int = arith.DEFAULT_MR_ROUNDS,
) -> Verdict:
    """Deterministic verdict for one n.

    Order: primality of C_n (when materializable), then ascending prime
    residues up to trial_limit testing the shape and squarefree conditions,
    then a budgeted full factorization for the distinct-factor count.
    UNDECIDED is the honest fallback when every budget runs dry.
    """
    if n < 1:
        raise ValueError("witness_search requires n >= 1")
    start = time.perf_counter()
    inst = structure.decompose(n)
    note = "; n < 3 is outside the exclusion arguments" if inst.small_n else ""

    def done(status, witness, reason, rho_used=0):
        return Verdict(
            n=n,
            status=status,
            witness=witness,
            reason=reason + note,
            trial_limit_used=trial_limit,
            rho_budget_used=rho_used,
            elapsed=time.perf_counter() - start,
        )

    cn = structure.cullen_value(n, cn_cap) if n <= cn_cap else None
    if cn is not None and arith.is_prime(cn, mr_rounds):
        return done(
            PRIME_CN,
            None,
            f"C_{n} is prime ({arith.prime_certainty(cn)}); Lehmer numbers are composite",
        )

    compatible: list[int] = []
    for q in arith.primes_up_to(trial_limit):
        if arith.cullen_mod(n, q):
            continue
        shape = structure.prime_shape(q)
        if not structure.shape_divides(shape, inst):
            why = (
                f"m = {shape.m} does not divide n1 = {inst.n1}"
                if inst.n1 % shape.m
                else f"a = {shape.a} exceeds n + alpha = {inst.n + inst.alpha}"
            )
            return done(
                REFUTED_SHAPE,
                q,
                f"{q} | C_{n} but q - 1 = {shape.m}*2^{shape.a} does not divide n*2^n: {why}",
            )
        if arith.cullen_mod(n, q * q) == 0:
            return done(REFUTED_SQUARE, q, f"{q}^2 divides C_{n}: not squarefree")
        compatible.append(q)

    if cn is not None:
        rest = cn
        for q in compatible:
            rest //= q
        result = arith.bounded_factor(rest, (), rho_budget, mr_rounds)
        rho_used = result.rho_used
        if result.complete:
            factors = dict(result.factors)
            for q in compatible:
                factors[q] = factors.get(q, 0) + 1
            check = 1
            for p, e in factors.items():
                check *= p**e
            if check != cn:
                raise RuntimeError(f"n={n}: factorization failed verification")
            omega = len(factors)
            shown = "*".join(
                f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(factors.items())
            )
            if omega < min_omega:
                return done(
                    REFUTED_OMEGA,
                    None,
                    f"C_{n} = {shown} has {omega} < {min_omega} distinct prime factors",
                    rho_used,
                )
            return done(
                UNDECIDED,
                None,
                f"complete factorization {shown} has omega = {omega} >= {min_omega}; "
                "no necessary condition violated within budget",
                rho_used,
            )
        return done(
            UNDECIDED,
            None,
            f"{result.cofactor.bit_length()}-bit cofactor left unfactored after "
            f"{rho_used} rho iterations; small factors all compatible",
            rho_used,
        )

    return done(
        UNDECIDED,
        None,
        f"C_{n} above materialization cap {cn_cap} and no witness below {trial_limit}",
    )


@dataclass
class ScreenReport:
    verdicts: list[Verdict]
    counts: dict[str, int]
    undecided: list[int]
    config_hash: str
    reused: int = 0
    computed: int = 0
    elapsed: float = 0.0


def record_dict(v: Verdict, cfg_hash: str) -> dict:
    d = asdict(v)
    d["config_hash"] = cfg_hash
    return d


def _verdict_from_record(d: dict) -> Verdict:
    return Verdict(
        n=d["n"],
        status=d["status"],
        witness=d["witness"],
        reason=d["reason"],
        trial_limit_used=d["trial_limit_used"],
        rho_budget_used=d["rho_budget_used"],
        elapsed=d["elapsed"],
    )


def load_records(path: Path, cfg_hash: str) -> dict[int, Verdict]:
    """Verdicts already persisted for this config; torn trailing lines
    (from a crash mid-write) are ignored, complete lines stay valid."""
    found: dict[int, Verdict] = {}
    if not path.exists():
        return found
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                d = json.loads(line)
            except json.JSONDecodeError:
                continue
            if d.get("config_hash") != cfg_hash:
                continue
            found[d["n"]] = _verdict_from_record(d)
    return found


_WORKER_CFG: ScreenConfig | None = None


def _pool_init(cfg: ScreenConfig) -> None:
    global _WORKER_CFG
    _WORKER_CFG = cfg
    arith.primes_up_to(cfg.trial_limit)


def _pool_search(n: int) -> Verdict:
    cfg = _WORKER_CFG
    assert cfg is not None
    return witness_search(
        n,
        cfg.trial_limit,
        cfg.rho_budget,
        min_omega=cfg.min_omega,
        cn_cap=cfg.cn_cap,
        mr_rounds=cfg.mr_rounds,
    )


def screen_set(
    n_values: list[int],
    cfg: ScreenConfig = ScreenConfig(),
    *,
    workers: int = 1,
    output_path: str | Path | None = None,
    resume: bool = False,
    on_verdict=None,
) -> ScreenReport:
    """Screen every n in n_values; verdicts come back ascending in n
    regardless of execution order.

    With output_path each fresh verdict is appended as one JSONL record and
    flushed immediately; resume=True first reloads records whose config
    hash matches and recomputes nothing for them.
    """
    start = time.perf_counter()
    wanted = sorted(set(n_values))
    wanted_set = set(wanted)
    cfg_hash = config_hash(cfg)
    path = Path(output_path) if output_path is not None else None

    have: dict[int, Verdict] = {}
    if path is not None and resume:
        have = {n: v for n, v in load_records(path, cfg_hash).items() if n in wanted_set}

    todo = [n for n in wanted if n not in have]
    sink = None
    if path is not None:
        try:
            if resume and path.exists() and path.stat().st_size > 0:
                with open(path, "rb") as fh:
                    fh.seek(-1, 2)
                    if fh.read(1) != b"\n":
                        # seal a line torn by a crash so appends stay parseable
                        with open(path, "a", encoding="utf-8") as seal:
                            seal.write("\n")
            sink = open(path, "a" if resume else "w", encoding="utf-8")
        except OSError as exc:
            raise RuntimeError(f"cannot open results file {path}: {exc}") from None

    try:
        if workers > 1 and len(todo) > 1:
            with Pool(workers, initializer=_pool_init, initargs=(cfg,)) as pool:
                computed = pool.imap(_pool_search, todo, chunksize=1)
                fresh = _drain(computed, sink, cfg_hash, on_verdict)
        else:
            _pool_init(cfg)
            fresh = _drain(map(_pool_search, todo), sink, cfg_hash, on_verdict)
    finally:
        if sink is not None:
            sink.close()

    have.update(fresh)
    verdicts = [have[n] for n in wanted]
    counts: dict[str, int] = {}
    for v in verdicts:
        counts[v.status] = counts.get(v.status, 0) + 1
    return ScreenReport(
        verdicts=verdicts,
        counts=counts,
        undecided=[v.n for v in verdicts if v.status == UNDECIDED],
        config_hash=cfg_hash,
        reused=len(have) - len(fresh),
        computed=len(fresh),
        elapsed=time.perf_counter() - start,
    )


def _drain(verdict_iter, sink, cfg_hash, on_verdict) -> dict[int, Verdict]:
    fresh: dict[int, Verdict] = {}
    for v in verdict_iter:
        fresh[v.n] = v
        if sink is not None:
            try:
                sink.write(json.dumps(record_dict(v, cfg_hash), sort_keys=True) + "\n")
                sink.flush()
            except OSError as exc:
                raise RuntimeError(
                    f"cannot append result for n={v.n}: {exc}; earlier lines remain valid"
                ) from None
        if on_verdict is not None:
            on_verdict(v)
    return fresh
