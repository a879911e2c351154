"""Randomized verification campaigns: KR solver against the exact oracle."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .errors import FewnomialError
from .instances import random_instance
from .lattice import kouchnirenko_bound
from .oracle import oracle_count
from .solver import UNVERIFIED, SolveOptions, solve_sparse

# (n, k) classes of the campaign and the exponent box used for each
CLASSES: dict[tuple[int, int], int] = {(1, 1): 20, (2, 1): 4, (1, 2): 8, (2, 2): 4}


@dataclass
class InstanceResult:
    index: int
    n: int
    k: int
    seed: int
    status: str
    kr_count: int | None
    oracle_count: int
    oracle_unperturbed: int | None
    perturbed: bool
    kouchnirenko: int
    ledger_violations: list[str]
    seconds: float
    error: str | None = None

    @property
    def match(self) -> bool:
        return self.status != UNVERIFIED and self.kr_count == self.oracle_count


@dataclass
class CampaignSummary:
    campaign: str
    seed: int
    results: list[InstanceResult] = field(default_factory=list)

    @property
    def instances(self) -> int:
        return len(self.results)

    @property
    def verified(self) -> list[InstanceResult]:
        return [r for r in self.results if r.status != UNVERIFIED]

    @property
    def matches(self) -> int:
        return sum(r.match for r in self.results)

    @property
    def mismatches(self) -> int:
        return sum(not r.match for r in self.verified)

    @property
    def unverified(self) -> int:
        return self.instances - len(self.verified)

    @property
    def ledger_violations(self) -> int:
        return sum(len(r.ledger_violations) for r in self.verified)

    @property
    def kouchnirenko_violations(self) -> int:
        return sum(r.oracle_count > r.kouchnirenko for r in self.results)

    def max_count(self, n: int, k: int) -> int:
        return max((r.oracle_count for r in self.results if (r.n, r.k) == (n, k)), default=0)

    def to_dict(self) -> dict:
        return {
            "campaign": self.campaign,
            "seed": self.seed,
            "instances": self.instances,
            "matches": self.matches,
            "mismatches": self.mismatches,
            "unverified": self.unverified,
            "ledger_violations": self.ledger_violations,
            "kouchnirenko_violations": self.kouchnirenko_violations,
            "max_count": {f"{n},{k}": self.max_count(n, k) for n, k in CLASSES},
            "results": [{key: v for key, v in asdict(r).items() if key != "seconds"} for r in self.results],
        }


def instance_seed(seed: int, index: int) -> int:
    return seed * 1_000_003 + index


def run_instance(args: tuple[int, int, int, int]) -> InstanceResult:
    index, n, k, seed = args
    sys = random_instance(n, k, seed, exp_range=CLASSES.get((n, k), 4))
    start = time.perf_counter()
    kouch = kouchnirenko_bound(sys.support)
    try:
        res = solve_sparse(sys, SolveOptions(seed=seed))
    except FewnomialError as exc:
        oc = oracle_count(sys, locate=False).count
        return InstanceResult(index, n, k, seed, UNVERIFIED, None, oc, oc, False, kouch, [], 0.0, str(exc))
    used = res.system or sys
    oc = oracle_count(used, locate=False).count
    unperturbed = oc if not res.perturbed else oracle_count(sys, locate=False).count
    return InstanceResult(
        index,
        n,
        k,
        seed,
        res.status,
        res.count,
        oc,
        unperturbed,
        res.perturbed,
        kouch,
        res.ledger_violations(),
        time.perf_counter() - start,
    )


def campaign_jobs(size: int, seed: int) -> list[tuple[int, int, int, int]]:
    classes = list(CLASSES)
    return [(i, *classes[i % len(classes)], instance_seed(seed, i)) for i in range(size)]


def run_campaign(campaign: str = "small", seed: int = 0, size: int | None = None, jobs: int = 1) -> CampaignSummary:
    """Solve random odd-index instances of every class with both methods.

    ``small`` runs 200 instances; ``full`` runs 800. Results are merged in
    instance order, so the summary does not depend on ``jobs``.
    """
    if campaign not in ("small", "full"):
        raise ValueError("campaign must be 'small' or 'full'")
    size = size if size is not None else (200 if campaign == "small" else 800)
    work = campaign_jobs(size, seed)
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(run_instance, work, chunksize=4))
    else:
        results = [run_instance(w) for w in work]
    return CampaignSummary(campaign, seed, sorted(results, key=lambda r: r.index))
