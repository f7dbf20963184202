"""End-to-end verification suite behind the ``verify`` subcommand."""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .admissible import classify_diagram, length
from .algebra import check_presentation, simple_diagram, theta_diagram
from .coxeter import CoxeterSpec, Family, enumerate_fc
from .diagrams import DOT, canonical_key, make_diagram, multiply_diagrams
from .factor import _paste, factorize, generator_of, suitable_candidates
from .heaps import FamilyTag, classify_family_B, classify_family_D, heap_from_word


@dataclass
class CheckResult:
    name: str
    family: str
    n: int
    max_len: int
    counts: dict = field(default_factory=dict)
    passed: bool = True
    elapsed: float = 0.0
    detail: str = ""


@dataclass
class VerifyReport:
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": [asdict(c) for c in self.checks]}

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            counts = ", ".join(f"{k}={v}" for k, v in c.counts.items())
            out.append(f"{status} {c.name} [{c.family} n={c.n} len<={c.max_len}] {counts} ({c.elapsed:.2f}s) {c.detail}".rstrip())
        return out


def _images(spec: CoxeterSpec, max_len: int):
    for ws in enumerate_fc(spec, max_len):
        for w in ws:
            yield w, theta_diagram(w, spec)


def check_presentation_run(spec: CoxeterSpec, max_len: int, corrupt: bool = False) -> CheckResult:
    gens = None
    if corrupt:
        # negative control: drop the dot from the cap of the first generator
        gens = {0: make_diagram(spec.family, spec.k, [(1, 2, (DOT,)), (-1, -2, ())] + [(j, -j, ()) for j in range(3, spec.k + 1)])}
    report = check_presentation(spec, gens)
    bad = [r.name for r in report if not r.passed]
    return CheckResult("presentation", spec.family.value, spec.n, max_len, {"relations": len(report), "failed": len(bad)}, not bad, detail=" ".join(bad[:5]))


def check_injectivity(spec: CoxeterSpec, max_len: int) -> CheckResult:
    keys = set()
    total = 0
    for _, d in _images(spec, max_len):
        keys.add(canonical_key(d))
        total += 1
    return CheckResult("injectivity", spec.family.value, spec.n, max_len, {"fc": total, "diagrams": len(keys)}, total == len(keys))


def check_length(spec: CoxeterSpec, max_len: int) -> CheckResult:
    bad = [w for w, d in _images(spec, max_len) if length(d) != len(w)]
    return CheckResult("length", spec.family.value, spec.n, max_len, {"mismatches": len(bad)}, not bad, detail=str(list(bad[0])) if bad else "")


def check_families(spec: CoxeterSpec, max_len: int) -> CheckResult:
    classify = classify_family_B if spec.family is Family.AffineB else classify_family_D
    bad = []
    for w, d in _images(spec, max_len):
        if classify(heap_from_word(w, spec)).tag is not classify_diagram(d).tag:
            bad.append(w)
    return CheckResult("families", spec.family.value, spec.n, max_len, {"mismatches": len(bad)}, not bad, detail=str(list(bad[0])) if bad else "")


def _strip_first(w, g, spec):
    """w with one minimal occurrence of g removed, or None if g is not minimal."""
    h = heap_from_word(w, spec)
    for idx, lab in enumerate(h.labels):
        if lab == g and h.below[idx] == 0:
            return heap_from_word(h.labels[:idx] + h.labels[idx + 1 :], spec)
    return None


def check_cut_and_paste(spec: CoxeterSpec, max_len: int) -> CheckResult:
    tried = 0
    bad = []
    for w, d in _images(spec, max_len):
        if d.is_identity() or classify_diagram(d).tag is not FamilyTag.ALT:
            continue
        for se in suitable_candidates(d):
            tried += 1
            g = generator_of(d, se.edge)
            try:
                dp = _paste(d, se)
            except Exception as exc:
                bad.append(f"{list(w)} {se.describe()}: {type(exc).__name__}")
                continue
            r = multiply_diagrams(simple_diagram(spec, g), dp)
            rest = _strip_first(w, g, spec)
            ok = (
                length(dp) == length(d) - 1
                and (r.scalar, r.delta) == (1, 0)
                and canonical_key(r.diagram) == canonical_key(d)
                and rest is not None
                and canonical_key(theta_diagram(rest.labels, spec)) == canonical_key(dp)
            )
            if not ok:
                bad.append(f"{list(w)} {se.describe()}")
    return CheckResult("cut_and_paste", spec.family.value, spec.n, max_len, {"edges": tried, "failed": len(bad)}, not bad and tried > 0, detail=bad[0] if bad else "")


def check_round_trip(spec: CoxeterSpec, max_len: int) -> CheckResult:
    bad = []
    total = 0
    for w, d in _images(spec, max_len):
        total += 1
        try:
            f = factorize(d)
            ok = heap_from_word(f, spec) == heap_from_word(w, spec) and canonical_key(theta_diagram(f, spec)) == canonical_key(d)
        except Exception as exc:
            ok = False
            f = type(exc).__name__
        if not ok:
            bad.append(f"{list(w)} -> {f}")
    return CheckResult("round_trip", spec.family.value, spec.n, max_len, {"diagrams": total, "failed": len(bad)}, not bad, detail=bad[0] if bad else "")


def check_associativity(spec: CoxeterSpec, max_len: int, seed: int = 0, triples: int = 200) -> CheckResult:
    rng = random.Random(seed)
    pool = [d for _, d in _images(spec, max_len)]
    bad = 0
    for _ in range(triples):
        a, b, c = (rng.choice(pool) for _ in range(3))
        ab = multiply_diagrams(a, b)
        left = multiply_diagrams(ab.diagram, c)
        bc = multiply_diagrams(b, c)
        right = multiply_diagrams(a, bc.diagram)
        lhs = (ab.scalar * left.scalar, ab.delta + left.delta, canonical_key(left.diagram))
        rhs = (bc.scalar * right.scalar, bc.delta + right.delta, canonical_key(right.diagram))
        bad += lhs != rhs
    return CheckResult("associativity", spec.family.value, spec.n, max_len, {"triples": triples, "failed": bad, "seed": seed}, bad == 0)


CHECKS = {
    "presentation": check_presentation_run,
    "injectivity": check_injectivity,
    "length": check_length,
    "families": check_families,
    "cut_and_paste": check_cut_and_paste,
    "round_trip": check_round_trip,
    "associativity": check_associativity,
}


def _run_one(name: str, spec: CoxeterSpec, max_len: int, seed: int, corrupt: bool) -> CheckResult:
    start = time.perf_counter()
    if name == "presentation":
        res = check_presentation_run(spec, max_len, corrupt)
    elif name == "associativity":
        res = check_associativity(spec, max_len, seed)
    else:
        res = CHECKS[name](spec, max_len)
    res.elapsed = time.perf_counter() - start
    return res


def run_verify(spec: CoxeterSpec, max_len: int, seed: int = 0, jobs: int = 1, corrupt: bool = False, only: list[str] | None = None) -> VerifyReport:
    """Run every check; with ``jobs > 1`` the checks run in worker processes."""
    names = only or list(CHECKS)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_one, nm, spec, max_len, seed, corrupt) for nm in names]
            results = [f.result() for f in futures]
    else:
        results = [_run_one(nm, spec, max_len, seed, corrupt) for nm in names]
    return VerifyReport(results)
