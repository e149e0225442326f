"""Terminating variants and the run entry points.

The plain signature engine does not terminate on every input: pairs that
involve redundant elements can spawn work forever.  Three ways out are
provided, each as a hook set plugged into the same engine:

- f5plus: remember every rejected pair that matters for the Groebner
  property.  Once no such pair is pending, stop as soon as each remembered
  pair is justified, either because its degree has been fully processed or
  because a third element certifies it through the lcm test.
- f5b: keep a running store of all evaluated pairs minus the justified
  ones; stop when the next degree exceeds the largest degree left in the
  store.
- naive-discard: drop pairs that touch redundant elements at creation.
  This forces termination but is known to corrupt some computations; it
  exists as a diagnostic, requires an explicit degree cap, and its output
  must not be trusted without an independent check.
"""

import time

from .f5 import F5Engine, RunMetrics, RunResult, VariantConfig, VariantHooks
from .ring import m_divides

MODES = ("f5", "f5plus", "f5b", "naive-discard")


class F5PlusHooks(VariantHooks):
    """Certified stop: track rejected pairs needed for the basis property."""

    def __init__(self):
        self.pstar = []

    def on_pair_evaluated(self, pair, faug, rewr, accepted, reason):
        if not accepted and pair.gb:
            self.pstar.append(pair)

    def degree_guard(self, degree, pending):
        if any(p.gb for p in pending):
            return None
        engine = self.engine
        keep = []
        for pair in self.pstar:
            if pair.deg < degree:
                continue  # its whole degree was processed, so justified
            if engine.pair_settled(pair.ra, pair.rb):
                continue
            if engine.certify_pair(pair):
                continue
            keep.append(pair)
        self.pstar = keep
        if keep:
            return None
        return "certified"

    def on_iteration_end(self, index):
        # the finished iteration's basis justifies whatever is left
        self.pstar = []


class F5BHooks(VariantHooks):
    """Degree-bound stop: halt once pending degrees pass every stored pair.

    The store is maintained at degree boundaries.  Pairs only appear after
    the last insertion of a degree batch, so a recheck per insertion would
    scan a store that cannot have grown since the last boundary and can
    never raise the running maximum; the boundary sweeps see exactly the
    same detections.
    """

    def __init__(self):
        self.store = []

    def _recheck(self):
        engine = self.engine
        cd = engine.completed_degree
        ci = engine.current_index
        treated = engine.treated
        certified = engine.certified
        keep = []
        for pair in self.store:
            ra, rb = pair.ra, pair.rb
            if pair.deg <= cd:
                continue
            if ra.index > ci and rb.index > ci:
                continue
            a, b = ra.serial, rb.serial
            k = (a, b) if a < b else (b, a)
            if k in treated or k in certified:
                continue
            if engine.certify_pair(pair):
                continue
            keep.append(pair)
        self.store = keep
        top = 0
        for pair in keep:
            if pair.deg > top:
                top = pair.deg
        if top > engine.metrics.d_B:
            engine.metrics.d_B = top
        return top

    def on_pair_evaluated(self, pair, faug, rewr, accepted, reason):
        self.store.append(pair)

    def on_degree_completed(self, degree):
        self._recheck()

    def degree_guard(self, degree, pending):
        if degree > self._recheck():
            return "degree_bound"
        return None

    def on_iteration_end(self, index):
        self._recheck()


class NaiveDiscardHooks(VariantHooks):
    """Diagnostic: drop every pair that touches a redundant element.

    Redundant completions still join the basis (they keep reducing later
    elements), but no pair is ever built from them.  The missing pairs can
    leave the leading-monomial ideal open, so the run either fails to close
    the ideal (output is not a basis) or keeps producing an endless family
    of fresh heads; a degree cap is mandatory.
    """

    def keep_pair(self, pair):
        return pair.gb


_HOOKS = {
    "f5": VariantHooks,
    "f5plus": F5PlusHooks,
    "f5b": F5BHooks,
    "naive-discard": NaiveDiscardHooks,
}


def heads_minimal(polys):
    """No leading monomial divides another element's leading monomial."""
    lms = [p.lm for p in polys]
    for i, a in enumerate(lms):
        for j, b in enumerate(lms):
            if i != j and m_divides(a, b):
                return False
    return True


def run(ring, polys, mode="f5", rewritten_critpair=False, degree_cap=None,
        conjecture_mode=False, cofactor_audit=False, record_events=True):
    """Run one signature-based computation and return its RunResult.

    Inputs are filtered of zeros; if some leading monomial divides another
    the set is head-minimalized first, otherwise the given order is kept
    (indices are assigned in list order, so order matters for traces).
    """
    if mode not in _HOOKS:
        raise ValueError(f"unknown mode {mode!r}")
    start = time.perf_counter()
    gens = [p for p in polys if not p.is_zero]
    if gens and not heads_minimal(gens):
        gens = ring.interreduce(gens)
    cfg = VariantConfig(
        mode=mode,
        rewritten_in_critpair=rewritten_critpair,
        degree_cap=degree_cap,
        conjecture_mode=conjecture_mode,
        cofactor_audit=cofactor_audit,
        record_events=record_events,
    )
    if not gens:
        metrics = RunMetrics()
        if mode == "f5b":
            metrics.d_B = 0
            metrics.d_F = -1
            metrics.d_FR = -1
        result = RunResult(mode, ring, [], [], metrics,
                           [] if record_events else None, True, "exhausted")
    else:
        engine = F5Engine(ring, gens, cfg, _HOOKS[mode]())
        result = engine.run()
    result.metrics.wall_time_ms = int(
        (time.perf_counter() - start) * 1000)
    return result


def run_f5(ring, polys, **kw):
    return run(ring, polys, mode="f5", **kw)


def run_f5plus(ring, polys, **kw):
    return run(ring, polys, mode="f5plus", **kw)


def run_f5b(ring, polys, **kw):
    return run(ring, polys, mode="f5b", **kw)


def run_naive_discard(ring, polys, degree_cap, **kw):
    return run(ring, polys, mode="naive-discard", degree_cap=degree_cap, **kw)


METRICS_HEADER = (
    "system,mode,char,order,terminated,d_maxGB,d_term,d_GB_pair,d_B,d_F,"
    "d_FR,zero_reductions,basis_size,reduced_basis_size,wall_time_ms"
)


def metrics_row(system, mode, ring, result):
    met = result.metrics
    vals = [
        system,
        mode,
        str(ring.field.p),
        ring.order.kind,
        "1" if met.terminated else "0",
        str(met.d_maxGB),
        str(met.d_term),
        str(met.d_GB_pair),
        str(met.d_B),
        str(met.d_F),
        str(met.d_FR),
        str(met.zero_reductions),
        str(met.basis_size),
        str(met.reduced_basis_size),
        str(met.wall_time_ms),
    ]
    return ",".join(vals)


def format_sig(term, index, ring):
    return f"{ring.format_monomial(term)}#{index}"


def format_event(kind, data, ring):
    """One trace line per event, stable field order."""
    parts = [f"event={kind}"]
    for key, value in data.items():
        if key in ("term", "lm", "gamma", "label") and isinstance(value, tuple):
            value = ring.format_monomial(value)
        parts.append(f"{key}={value}")
    return " ".join(parts)
