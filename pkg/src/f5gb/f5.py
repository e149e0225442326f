"""Signature-based Groebner basis engine.

Every basis element carries a signature t*F_i: the leading module term of
one representation of the polynomial in terms of the inputs f_1..f_m.  The
module order puts t*F_i above u*F_j whenever i < j, and compares terms in
the ring order at equal index, so an ascending sort key for a signature is
simply (-index, opack(term)): the packed order key is one integer and is
additive under monomial products, which keeps pair evaluation in plain
integer arithmetic.

Two tests prune work:

- index criterion: a multiplied signature whose term is top-reducible by
  the basis already computed for higher indices belongs to a known syzygy;
- rewritten criterion: a rule recorded later at the same index whose term
  divides the multiplied signature means a newer element stands in for the
  candidate.

The driver is incremental, f_m alone first, then f_{m-1} added, down to
f_1.  Inside an iteration, critical pairs are handled by ascending total
degree of their lcm, and the s-polynomials of one degree batch by
ascending signature.  Inputs must be homogeneous so a finished degree is
never revisited.

Variant behaviour (early stops, pair discarding, extra bookkeeping) is
injected through a small hook object; the plain engine with no-op hooks is
the classic algorithm, which does not terminate on every input.  The
degree cap exists so such runs still come back.
"""

import heapq
from dataclasses import dataclass

from .buchberger import reduced_basis
from .ring import NFBasis, Poly, m_lcm, m_mul


@dataclass
class VariantConfig:
    mode: str = "f5"
    rewritten_in_critpair: bool = False
    degree_cap: int | None = None
    conjecture_mode: bool = False
    cofactor_audit: bool = False
    record_events: bool = True


class RunMetrics:
    """Degree statistics of one run; -1 marks a column that does not apply."""

    FIELDS = (
        "terminated",
        "d_maxGB",
        "d_term",
        "d_GB_pair",
        "d_B",
        "d_F",
        "d_FR",
        "zero_reductions",
        "basis_size",
        "reduced_basis_size",
        "wall_time_ms",
    )

    def __init__(self):
        self.terminated = True
        self.d_maxGB = 0
        self.d_term = 0
        self.d_GB_pair = 0
        self.d_B = -1
        self.d_F = 0
        self.d_FR = 0
        self.zero_reductions = 0
        self.basis_size = 0
        self.reduced_basis_size = 0
        self.wall_time_ms = 0

    def as_dict(self):
        return {name: getattr(self, name) for name in self.FIELDS}

    def __repr__(self):
        inner = ", ".join(f"{k}={v}" for k, v in self.as_dict().items())
        return f"RunMetrics({inner})"


class RunResult:
    __slots__ = (
        "mode",
        "ring",
        "labeled",
        "reduced",
        "metrics",
        "events",
        "terminated",
        "stop_reason",
    )

    def __init__(self, mode, ring, labeled, reduced, metrics, events,
                 terminated, stop_reason):
        self.mode = mode
        self.ring = ring
        self.labeled = labeled
        self.reduced = reduced
        self.metrics = metrics
        self.events = events
        self.terminated = terminated
        self.stop_reason = stop_reason

    @property
    def basis(self):
        return [r.poly for r in self.labeled]


class LabeledPoly:
    """A polynomial with its signature term*F_index and creation serial.

    term_pack/term_deg mirror the signature term and lm_pack/lm_op/lm_deg
    the leading monomial (set once the polynomial is final), so criterion
    checks and pair building never rebuild monomial tuples.
    """

    __slots__ = ("index", "term", "sig_key", "poly", "redundant", "serial",
                 "position", "cofactors", "phi_normal",
                 "term_pack", "term_deg", "lm_pack", "lm_op", "lm_deg")

    def __init__(self, index, term, sig_key, poly, serial):
        self.index = index
        self.term = term
        self.sig_key = sig_key
        self.poly = poly
        self.serial = serial
        self.redundant = False
        self.position = -1
        self.cofactors = None
        self.phi_normal = False
        self.term_pack = 0
        self.term_deg = 0
        self.lm_pack = 0
        self.lm_op = 0
        self.lm_deg = 0

    @property
    def lm(self):
        return self.poly.terms[0][1]

    def sig(self):
        return (self.term, self.index)

    def __repr__(self):
        body = "0" if self.poly.is_zero else str(self.poly)
        return f"<r{self.serial} sig={self.term}#{self.index} {body}>"


class CriticalPair:
    """Normalized pair: the u*ra side carries the larger signature.

    su_*/sv_* hold the packed forms of u*sig(ra) and v*sig(rb) so the
    deferred rewritten re-checks at s-polynomial time stay integer-only.
    label_term is filled in only when the pair is accepted; rejected pairs
    kept around by variant bookkeeping never look at it.
    """

    __slots__ = ("deg", "gamma", "gkey", "g_pack", "u", "ra", "v", "rb", "gb",
                 "label_term", "label_key", "pid",
                 "su_pack", "su_deg", "sv_pack", "sv_deg")

    def __init__(self, deg, gamma, gkey, g_pack, u, ra, v, rb, gb, label_term,
                 label_key, pid, su_pack, su_deg, sv_pack, sv_deg):
        self.deg = deg
        self.gamma = gamma
        self.gkey = gkey
        self.g_pack = g_pack
        self.u = u
        self.ra = ra
        self.v = v
        self.rb = rb
        self.gb = gb
        self.label_term = label_term
        self.label_key = label_key
        self.pid = pid
        self.su_pack = su_pack
        self.su_deg = su_deg
        self.sv_pack = sv_pack
        self.sv_deg = sv_deg


class VariantHooks:
    """No-op hooks: plain behaviour.  Subclasses adjust pair handling."""

    def bind(self, engine):
        self.engine = engine

    def keep_pair(self, pair):
        return True

    def admit_element(self, elem):
        """Whether a completed element joins the basis."""
        return True

    def on_pair_evaluated(self, pair, faug, rewr, accepted, reason):
        pass

    def degree_guard(self, degree, pending):
        """Return a stop reason to end the iteration, or None to proceed."""
        return None

    def on_element_inserted(self, elem):
        pass

    def on_degree_completed(self, degree):
        pass

    def on_iteration_end(self, index):
        pass


class _DegreeCapHit(Exception):
    pass


def _pair_serials(a, b):
    return (a.serial, b.serial) if a.serial < b.serial else (b.serial, a.serial)


class F5Engine:
    def __init__(self, ring, inputs, config=None, hooks=None):
        self.ring = ring
        self.cfg = config or VariantConfig()
        self.hooks = hooks or VariantHooks()
        self.inputs = list(inputs)
        for f in self.inputs:
            if f.is_zero:
                raise ValueError("zero polynomial among inputs")
            if not f.is_homogeneous:
                raise ValueError("inputs must be homogeneous")
        if self.cfg.degree_cap is None:
            if self.cfg.mode == "naive-discard":
                raise ValueError("naive-discard needs an explicit degree cap")
            total = sum(f.degree for f in self.inputs)
            self.degree_cap = 3 + 2 * total
        else:
            self.degree_cap = self.cfg.degree_cap

        self.basis = []        # all completed elements, insertion order
        self.pool = []         # current-index elements: input + completed
        self.rules = {}        # index -> [(term, packed term, serial)]
        self.treated = set()   # serial pairs that produced an s-polynomial
        self.certified = set()  # serial pairs justified by the lcm test
        self.events = [] if self.cfg.record_events else None
        self.metrics = RunMetrics()
        self.serial = 0
        self.pair_id = 0
        self.completed_degree = -1
        self.current_index = 0
        self.prev_count = 0
        self.phi = None          # normal form context over previous indices
        self._prev_lms = []      # [(deg, packed lm)] of previous indices
        self._pool_lms = []      # [(deg, packed lm, elem)] parallel to pool
        self._guard = ring.pack_guard
        self.stop_reason = "exhausted"
        self.terminated = True
        self.hooks.bind(self)

    # -- plumbing -------------------------------------------------------------

    def emit(self, kind, **data):
        if self.events is not None:
            self.events.append((kind, data))

    def sig_key(self, term, index):
        return (-index, self.ring.opack(term))

    def next_serial(self):
        self.serial += 1
        return self.serial

    def new_label(self, index, term, poly):
        r = LabeledPoly(index, term, self.sig_key(term, index), poly,
                        self.next_serial())
        r.term_pack = self.ring.pack(term)
        r.term_deg = sum(term)
        return r

    def _set_head(self, r):
        lm = r.poly.terms[0][1]
        r.lm_pack = self.ring.pack(lm)
        r.lm_op = self.ring.opack(lm)
        r.lm_deg = sum(lm)

    def add_rule(self, index, term, serial):
        self.rules.setdefault(index, []).append(
            (self.ring.pack(term), sum(term), serial)
        )
        self.emit("rule_added", index=index, term=term, serial=serial)

    def is_sig_reducible(self, term):
        return self._sig_red(self.ring.pack(term), sum(term))

    def _sig_red(self, tp, td):
        """Index criterion body: term top-reducible by higher-index lms."""
        tp |= self._guard
        guard = self._guard
        for d, pk in self._prev_lms:
            if d <= td and (tp - pk) & guard == guard:
                return True
        return False

    def is_rewritten(self, mult, elem):
        target = m_mul(mult, elem.term)
        return self._rewr(self.ring.pack(target), sum(target), elem)

    def _rewr(self, tp, td, elem):
        """Rewritten criterion: newer same-index rule divides the target."""
        rules = self.rules.get(elem.index)
        if not rules:
            return False
        tp |= self._guard
        guard = self._guard
        floor = elem.serial
        for pk, deg, serial in reversed(rules):
            if serial <= floor:
                break
            if deg <= td and (tp - pk) & guard == guard:
                return True
        return False

    # -- settledness and certification (used by terminating variants) ---------

    def pair_settled(self, a, b):
        """Pair already accounted for: finished degree, treated, certified,
        or both elements from previous (completed) iterations."""
        if a.index > self.current_index and b.index > self.current_index:
            return True
        k = _pair_serials(a, b)
        if k in self.treated or k in self.certified:
            return True
        cd = self.completed_degree
        if a.lm_deg > cd or b.lm_deg > cd:
            # the lcm degree is at least either head degree
            return False
        return sum(m_lcm(a.lm, b.lm)) <= cd

    def certify_pair(self, pair):
        """Lcm test against the current basis; records success."""
        gp = pair.g_pack | self._guard
        guard = self._guard
        deg = pair.deg
        ra, rb = pair.ra, pair.rb
        for c in self.basis:
            if c.lm_deg > deg or (gp - c.lm_pack) & guard != guard:
                continue
            if c is ra or c is rb:
                continue
            if self.pair_settled(ra, c) and self.pair_settled(rb, c):
                self.certified.add(_pair_serials(ra, rb))
                return True
        return False

    # -- pair evaluation --------------------------------------------------------

    def critpair(self, r1, r2):
        """Build the critical pair of r1, r2, or reject it with a reason.

        Multiplied signatures are handled in packed form: with gamma the
        lcm and u = gamma/lm(r1), opack(u*t1) = opack(gamma) - lm_op(r1) +
        opack(t1), and the same shift works for pack and degree.
        """
        ring = self.ring
        lm1, lm2 = r1.lm, r2.lm
        gamma = m_lcm(lm1, lm2)
        deg = sum(gamma)
        gp = ring.pack(gamma)
        go = ring.opack(gamma)
        u = tuple(a - b for a, b in zip(gamma, lm1))
        v = tuple(a - b for a, b in zip(gamma, lm2))
        ku = (-r1.index, go - r1.lm_op + r1.sig_key[1])
        kv = (-r2.index, go - r2.lm_op + r2.sig_key[1])
        su_pack = gp - r1.lm_pack + r1.term_pack
        sv_pack = gp - r2.lm_pack + r2.term_pack
        su_deg = deg - r1.lm_deg + r1.term_deg
        sv_deg = deg - r2.lm_deg + r2.term_deg
        ra, rb = r1, r2
        if ku < kv:
            u, v = v, u
            ku, kv = kv, ku
            su_pack, sv_pack = sv_pack, su_pack
            su_deg, sv_deg = sv_deg, su_deg
            ra, rb = r2, r1
        gb = not ra.redundant and not rb.redundant
        if gb and deg > self.metrics.d_GB_pair:
            self.metrics.d_GB_pair = deg
        self.pair_id += 1
        pair = CriticalPair(deg, gamma, go, gp, u, ra, v, rb, gb, None, ku,
                            self.pair_id, su_pack, su_deg, sv_pack, sv_deg)
        if ku == kv:
            # equal signatures: the s-polynomial drops out of signature
            # bookkeeping entirely, so no element can be built for it
            self.hooks.on_pair_evaluated(pair, None, None, False, "equal_sig")
            self.emit("pair_rejected", reason="equal_sig", degree=deg, gb=gb,
                      a=ra.serial, b=rb.serial)
            return None
        assert ra.index == self.current_index
        faug = self._sig_red(su_pack, su_deg)
        rewr = self._rewr(su_pack, su_deg, ra)
        if gb:
            if not faug and deg > self.metrics.d_F:
                self.metrics.d_F = deg
            if not faug and not rewr and deg > self.metrics.d_FR:
                self.metrics.d_FR = deg
        rejected = faug or (self.cfg.rewritten_in_critpair and rewr)
        reason = "faugere" if faug else ("rewritten" if rejected else None)
        self.hooks.on_pair_evaluated(pair, faug, rewr, not rejected, reason)
        if rejected:
            self.emit("pair_rejected", reason=reason, degree=deg, gb=gb,
                      a=ra.serial, b=rb.serial)
            return None
        if not self.hooks.keep_pair(pair):
            self.emit("pair_dropped", degree=deg, gb=gb, a=ra.serial,
                      b=rb.serial)
            return None
        pair.label_term = m_mul(pair.u, ra.term)
        self.emit("pair_created", degree=deg, gamma=gamma, gb=gb,
                  label=pair.label_term, index=ra.index, a=ra.serial,
                  b=rb.serial)
        return pair

    # -- s-polynomial generation -------------------------------------------------

    def spol_batch(self, pairs):
        """S-polynomials of one degree batch, ascending by signature.

        The fast path never builds the s-polynomial: each element leaves
        here as a packed accumulator (monomial-pack -> coefficient dict
        plus an order-keyed heap) seeded with u*ra - v*rb, and reduction
        drains it.  The audit path materializes actual polynomials because
        cofactor tracking needs them.
        """
        ring = self.ring
        audit = self.cfg.cofactor_audit
        op1 = ring._op_one
        pairs.sort(key=lambda p: (p.label_key, p.gkey, p.pid))
        out = []
        for p in pairs:
            if self._rewr(p.su_pack, p.su_deg, p.ra):
                self.emit("spol_rejected", side="larger", degree=p.deg,
                          a=p.ra.serial, b=p.rb.serial)
                continue
            if self._rewr(p.sv_pack, p.sv_deg, p.rb):
                self.emit("spol_rejected", side="smaller", degree=p.deg,
                          a=p.ra.serial, b=p.rb.serial)
                continue
            self.treated.add(_pair_serials(p.ra, p.rb))
            if audit:
                # both sides are monic, so the lcm terms cancel exactly
                left = ring.term_mul_terms(p.ra.poly.terms, 1, p.u)
                right = ring.term_mul_terms(p.rb.poly.terms, 1, p.v)
                s = Poly(ring, tuple(ring._merge_sub(left, right)))
                r = self.new_label(p.ra.index, p.label_term, ring.monic(s))
                r.cofactors = self._cof_spol(p, s)
                self.add_rule(r.index, r.term, r.serial)
                out.append(r)
                continue
            r = self.new_label(p.ra.index, p.label_term, ring.zero)
            self.add_rule(r.index, r.term, r.serial)
            # the accumulator is only built when reduction pops this
            # element, so a big batch does not hold every seed at once
            out.append((r, p))
        return out

    def _seed_spair(self, p):
        """Packed accumulator + heap for u*ra - v*rb of an accepted pair."""
        ring = self.ring
        op1 = ring._op_one
        acc = {}
        ah = []
        fa = p.ra.poly._packed
        if fa is None:
            fa = p.ra.poly._packed = tuple(
                (ring.pack(m), ring.opack(m), sum(m), c)
                for _, m, c in p.ra.poly.terms
            )
        up = ring.pack(p.u)
        uo = ring.opack(p.u) - op1
        ud = sum(p.u)
        for tp, to, td, tc in fa:
            acc[up + tp] = tc
            ah.append((-(uo + to), ud + td, up + tp))
        fb = p.rb.poly._packed
        if fb is None:
            fb = p.rb.poly._packed = tuple(
                (ring.pack(m), ring.opack(m), sum(m), c)
                for _, m, c in p.rb.poly.terms
            )
        vp = ring.pack(p.v)
        vo = ring.opack(p.v) - op1
        vd = sum(p.v)
        for tp, to, td, tc in fb:
            dp = vp + tp
            prev = acc.get(dp)
            if prev is None:
                acc[dp] = -tc
                ah.append((-(vo + to), vd + td, dp))
            else:
                acc[dp] = prev - tc
        heapq.heapify(ah)
        return acc, ah

    # -- reduction ----------------------------------------------------------------

    def is_reducible(self, r0):
        """First usable top-reducer from the current-index pool.

        Returns (elem, 0) for a usable reducer, (None, 1) when divisors
        exist but every one is blocked by a criterion (the element will be
        flagged redundant), (None, 0) when no divisor exists at all.
        """
        lm0 = r0.poly.terms[0][1]
        tp = self.ring.pack(lm0) | self._guard
        guard = self._guard
        d0 = sum(lm0)
        blocked = 0
        for d, pk, red in self._pool_lms:
            if d > d0 or (tp - pk) & guard != guard:
                continue
            u = tuple(a - b for a, b in zip(lm0, red.lm))
            t = m_mul(u, red.term)
            if t == r0.term:
                blocked = 1
                continue
            if self.is_sig_reducible(t):
                blocked = 1
                continue
            if self.is_rewritten(u, red):
                blocked = 1
                continue
            return red, 0
        return None, blocked

    def _phi_reduce(self, r):
        if r.poly.is_zero:
            return
        if not self.cfg.cofactor_audit:
            r.poly = self.phi.reduce(r.poly)
            return
        trace = []
        terms = self.phi.reduce_terms(r.poly.terms, trace=trace)
        poly = Poly(self.ring, tuple(terms))
        for gi, u, _, cc in trace:
            src = self.basis[gi]
            r.cofactors = [
                h - self.ring.term_mul(hs, cc, u)
                for h, hs in zip(r.cofactors, src.cofactors)
            ]
        self._make_monic(r, poly)

    def _make_monic(self, r, poly):
        if poly.terms and poly.terms[0][2] != 1:
            c = self.ring.field.inv(poly.terms[0][2])
            poly = self.ring.scale(poly, c)
            if r.cofactors is not None:
                r.cofactors = [self.ring.scale(h, c) for h in r.cofactors]
        r.poly = poly

    def reduction(self, new_elems):
        """Signature-ordered reduction; completed elements join the basis
        immediately so later reductions in the same batch can use them.

        Each element lives as a packed accumulator and is drained monomial
        by monomial in descending order.  A popped monomial is first
        reduced against the previous-index basis (so the drain doubles as
        the normal form there); the first surviving monomial is the lead,
        which gets the signature-aware top-reduction treatment: subtract a
        safe reducer in place, spawn a fresh element for a signature-raising
        one, or finish.  After the lead decision the rest of the drain just
        collects the tail.  Coefficients stay unreduced ints between pops.
        """
        if self.cfg.cofactor_audit:
            return self._reduction_audit(new_elems)
        ring = self.ring
        field = ring.field
        p = field.p
        guard = self._guard
        prep = self.phi._prep
        pool_lms = self._pool_lms
        pop = heapq.heappop
        push = heapq.heappush
        heap = [(r.sig_key, r.serial, r, None, pr) for r, pr in new_elems]
        heapq.heapify(heap)
        done = []
        while heap:
            _, _, r0, acc, ah = pop(heap)
            if acc is None:
                acc, ah = self._seed_spair(ah)
            r0_op = r0.sig_key[1]
            r0_tp = r0.term_pack
            out_terms = None
            while ah:
                if len(ah) > 1024 and len(ah) > 3 * len(acc):
                    # lazy deletion piles up dead heap entries; rebuild
                    # from the live monomials, dropping coefficients that
                    # already cancelled
                    acc = {k: v for k, v in acc.items() if v % p}
                    ah = []
                    for k in acc:
                        m = ring.unpack(k)
                        ah.append((-ring.opack(m), sum(m), k))
                    heapq.heapify(ah)
                    if not ah:
                        break
                no, md, dp = pop(ah)
                c = acc.pop(dp, 0) % p
                if not c:
                    continue
                dpg = dp | guard
                for gd, gp, gop, ginv, gtail in prep:
                    if gd <= md and (dpg - gp) & guard == guard:
                        base_d = dp - gp
                        base_o = -no - gop
                        ud = md - gd
                        cc = (c * ginv) % p
                        for tpk, topk, tdeg, tc in gtail:
                            nd = base_d + tpk
                            prev = acc.get(nd)
                            if prev is None:
                                acc[nd] = -cc * tc
                                push(ah, (-(base_o + topk), ud + tdeg, nd))
                            else:
                                acc[nd] = prev - cc * tc
                        break
                else:
                    # normal modulo previous indices
                    if out_terms is not None:
                        out_terms.append((dp, c))
                        continue
                    # first normal monomial: the lead of r0
                    blocked = 0
                    use = None
                    for d, pk, elem in pool_lms:
                        if d > md or (dpg - pk) & guard != guard:
                            continue
                        t_pack = dp - pk + elem.term_pack
                        if t_pack == r0_tp:
                            blocked = 1
                            continue
                        t_deg = md - d + elem.term_deg
                        if self._sig_red(t_pack, t_deg):
                            blocked = 1
                            continue
                        if self._rewr(t_pack, t_deg, elem):
                            blocked = 1
                            continue
                        use = elem
                        break
                    if use is None:
                        r0.redundant = bool(blocked)
                        out_terms = [(dp, c)]
                        continue
                    gpk = use.poly._packed
                    if gpk is None:
                        gpk = use.poly._packed = tuple(
                            (ring.pack(m), ring.opack(m), sum(m), cf)
                            for _, m, cf in use.poly.terms
                        )
                    base_d = dp - use.lm_pack
                    base_o = -no - use.lm_op
                    ud = md - use.lm_deg
                    t_op = base_o + use.sig_key[1]
                    if t_op < r0_op:
                        # safe: the reducer's multiplied signature stays
                        # below; subtract c * u * use in place (the lead
                        # cancels against the popped monomial exactly)
                        for tpk, topk, tdeg, tc in gpk[1:]:
                            nd = base_d + tpk
                            prev = acc.get(nd)
                            if prev is None:
                                acc[nd] = -c * tc
                                push(ah, (-(base_o + topk), ud + tdeg, nd))
                            else:
                                acc[nd] = prev - c * tc
                        self.emit("reduce_sub", serial=r0.serial,
                                  by=use.serial)
                        continue
                    # the subtraction would raise r0's signature; give the
                    # difference u * use - monic(r0) its true signature as
                    # a fresh element (the shared lead drops out, and the
                    # rest of r0 is rescaled by the inverse of its lead)
                    rn = self.new_label(use.index,
                                        ring.unpack(base_d + use.term_pack),
                                        ring.zero)
                    inv_c = field.inv(c)
                    racc = {k: -inv_c * v for k, v in acc.items()}
                    rheap = list(ah)
                    for tpk, topk, tdeg, tc in gpk[1:]:
                        nd = base_d + tpk
                        prev = racc.get(nd)
                        if prev is None:
                            racc[nd] = tc
                            push(rheap, (-(base_o + topk), ud + tdeg, nd))
                        else:
                            racc[nd] = prev + tc
                    # the rule blocks `use` for r0 on the next pass, so
                    # this loop cannot pick the same reducer forever
                    self.add_rule(rn.index, rn.term, rn.serial)
                    push(heap, (rn.sig_key, rn.serial, rn, racc, rheap))
                    self.emit("reduce_swap", serial=r0.serial, by=use.serial,
                              new=rn.serial)
                    acc[dp] = c
                    push(ah, (no, md, dp))
            if out_terms is None:
                self.metrics.zero_reductions += 1
                self.emit("zero_reduction", serial=r0.serial, index=r0.index,
                          term=r0.term)
                continue
            c0 = out_terms[0][1]
            scale = 1 if c0 == 1 else field.inv(c0)
            terms = []
            for dpk, cv in out_terms:
                m = ring.unpack(dpk)
                terms.append((ring.key(m), m, cv * scale % p))
            r0.poly = Poly(ring, tuple(terms))
            if self.hooks.admit_element(r0):
                self._insert(r0)
                done.append(r0)
            else:
                # dropped on the spot: recorded, but it never joins the
                # basis, reduces anything, or generates pairs
                self.emit("completed", serial=r0.serial, index=r0.index,
                          term=r0.term, lm=r0.lm, redundant=r0.redundant,
                          discarded=True)
        return done

    def _reduction_audit(self, new_elems):
        """Reduction for audit runs: real polynomials at every step so the
        cofactor trace can follow along."""
        heap = [(r.sig_key, r.serial, r) for r in new_elems]
        heapq.heapify(heap)
        done = []
        while heap:
            _, _, r0 = heapq.heappop(heap)
            if not r0.phi_normal:
                self._phi_reduce(r0)
                r0.phi_normal = True
            while True:
                if r0.poly.is_zero:
                    self.metrics.zero_reductions += 1
                    self.emit("zero_reduction", serial=r0.serial,
                              index=r0.index, term=r0.term)
                    self._audit(r0)
                    break
                red, blocked = self.is_reducible(r0)
                if red is None:
                    r0.redundant = bool(blocked)
                    if self.hooks.admit_element(r0):
                        self._insert(r0)
                        done.append(r0)
                    else:
                        # dropped on the spot: recorded, but it never joins
                        # the basis, reduces anything, or generates pairs
                        self.emit("completed", serial=r0.serial,
                                  index=r0.index, term=r0.term, lm=r0.lm,
                                  redundant=r0.redundant, discarded=True)
                        self._audit(r0)
                    break
                u = tuple(a - b for a, b in zip(r0.lm, red.lm))
                t = m_mul(u, red.term)
                tkey = self.sig_key(t, red.index)
                sub = self.ring.term_mul_terms(red.poly.terms, 1, u)
                if tkey < r0.sig_key:
                    # safe: the reducer's multiplied signature stays below
                    poly = Poly(self.ring, tuple(
                        self.ring._merge_sub(r0.poly.terms, sub)))
                    self.emit("reduce_sub", serial=r0.serial, by=red.serial)
                    r0.cofactors = [
                        h - self.ring.term_mul(hr, 1, u)
                        for h, hr in zip(r0.cofactors, red.cofactors)
                    ]
                    self._make_monic(r0, poly)
                    self._phi_reduce(r0)
                else:
                    # the subtraction would raise r0's signature; give the
                    # difference its true signature as a fresh element
                    poly = Poly(self.ring, tuple(
                        self.ring._merge_sub(sub, r0.poly.terms)))
                    rn = self.new_label(red.index, t, self.ring.zero)
                    rn.cofactors = [
                        self.ring.term_mul(hr, 1, u) - h
                        for h, hr in zip(r0.cofactors, red.cofactors)
                    ]
                    self._make_monic(rn, poly)
                    # the rule blocks `red` for r0 on the next pass, so this
                    # loop cannot pick the same reducer forever
                    self.add_rule(rn.index, rn.term, rn.serial)
                    heapq.heappush(heap, (rn.sig_key, rn.serial, rn))
                    self.emit("reduce_swap", serial=r0.serial, by=red.serial,
                              new=rn.serial)
        return done

    def _insert(self, r):
        r.position = len(self.basis)
        self.basis.append(r)
        self._set_head(r)
        if r.index == self.current_index:
            self.pool.append(r)
            self._pool_lms.append((r.lm_deg, r.lm_pack, r))
        self.emit("completed", serial=r.serial, index=r.index, term=r.term,
                  lm=r.lm, redundant=r.redundant)
        if self.cfg.cofactor_audit:
            self._audit(r)
        self.hooks.on_element_inserted(r)

    # -- cofactor audit ---------------------------------------------------------

    def _cof_zero(self):
        return [self.ring.zero] * len(self.inputs)

    def _cof_spol(self, pair, s_raw):
        ha = pair.ra.cofactors
        hb = pair.rb.cofactors
        out = [
            self.ring.term_mul(a, 1, pair.u) - self.ring.term_mul(b, 1, pair.v)
            for a, b in zip(ha, hb)
        ]
        if s_raw.terms and s_raw.terms[0][2] != 1:
            c = self.ring.field.inv(s_raw.terms[0][2])
            out = [self.ring.scale(h, c) for h in out]
        return out

    def _audit(self, r):
        """Representation invariants: the cofactors rebuild the polynomial,
        vanish below the signature index, and lead with the signature term."""
        total = self.ring.zero
        for h, f in zip(r.cofactors, self.inputs):
            if not h.is_zero:
                total = total + self.ring.mul(h, f)
        assert total == r.poly, f"cofactor identity broken for r{r.serial}"
        for k in range(r.index - 1):
            assert r.cofactors[k].is_zero, (
                f"r{r.serial} uses input below its signature index"
            )
        hi = r.cofactors[r.index - 1]
        assert not hi.is_zero and hi.lm == r.term, (
            f"r{r.serial} signature term does not lead its cofactor"
        )

    # -- driver --------------------------------------------------------------------

    def run(self):
        m = len(self.inputs)
        try:
            for i in range(m, 0, -1):
                self.run_iteration(i)
        except _DegreeCapHit:
            self.terminated = False
            self.stop_reason = "degree_cap"
        return self._finalize()

    def run_iteration(self, i):
        self.current_index = i
        self.prev_count = len(self.basis)
        self.completed_degree = -1
        self.pool = []
        self._pool_lms = []
        prev_polys = [r.poly for r in self.basis]
        # staircase-minimal subset: normal forms against a Groebner basis
        # depend only on the ideal, so head-redundant reducers are dead
        # weight; ascending lm order guarantees divisors are kept first
        minimal = []
        min_lms = []
        guard = self._guard
        for q in sorted(prev_polys, key=lambda q: q.terms[0][0]):
            d = sum(q.lm)
            pk = self.ring.pack(q.lm)
            tp = pk | guard
            if any(
                gd <= d and (tp - gp) & guard == guard for gd, gp in min_lms
            ):
                continue
            minimal.append(q)
            min_lms.append((d, pk))
        if self.cfg.cofactor_audit:
            # the audit rebuilds cofactors from reduction traces, which
            # index the full basis; keep every reducer so positions line up
            self.phi = NFBasis(self.ring, prev_polys)
        else:
            self.phi = NFBasis(self.ring, minimal)
        self._prev_lms = min_lms

        f = self.ring.monic(self.inputs[i - 1])
        unit = self.ring.unit_monomial
        r_in = self.new_label(i, unit, f)
        self._set_head(r_in)
        if self.cfg.cofactor_audit:
            cof = self._cof_zero()
            lc = self.inputs[i - 1].lc
            cof[i - 1] = self.ring.scale(self.ring.one,
                                         self.ring.field.inv(lc))
            r_in.cofactors = cof
        self.add_rule(i, unit, r_in.serial)
        self.emit("input_added", serial=r_in.serial, index=i, lm=f.lm)

        pending = []
        for g in self.basis:
            pair = self.critpair(r_in, g)
            if pair is not None:
                pending.append(pair)
        self._insert(r_in)

        last_degree = 0
        while pending:
            d = min(p.deg for p in pending)
            assert d >= last_degree, "degree fell on homogeneous input"
            if d > self.degree_cap:
                self.emit("degree_cap", degree=d, cap=self.degree_cap)
                raise _DegreeCapHit
            if self.cfg.conjecture_mode and d > max(self.metrics.d_FR, 0):
                self.stop_reason = "conjecture"
                self.emit("guard_stop", reason="conjecture", degree=d)
                break
            stop = self.hooks.degree_guard(d, pending)
            if stop is not None:
                self.stop_reason = stop
                self.emit("guard_stop", reason=stop, degree=d)
                break
            batch = [p for p in pending if p.deg == d]
            pending = [p for p in pending if p.deg != d]
            last_degree = d
            self.emit("step", iteration=i, degree=d, pairs=len(batch))
            # entering the degree counts even if every s-polynomial of the
            # batch is then rejected: the step was still taken
            if d > self.metrics.d_term:
                self.metrics.d_term = d
            spols = self.spol_batch(batch)
            done = self.reduction(spols)
            for r in done:
                for g in self.basis[: r.position]:
                    pair = self.critpair(r, g)
                    if pair is not None:
                        pending.append(pair)
            self.completed_degree = d
            self.hooks.on_degree_completed(d)
        self.hooks.on_iteration_end(i)

    def _finalize(self):
        met = self.metrics
        met.terminated = self.terminated
        top_input = max((f.degree for f in self.inputs), default=0)
        if top_input > met.d_term:
            met.d_term = top_input
        met.basis_size = len(self.basis)
        reduced = reduced_basis(self.ring, [r.poly for r in self.basis])
        met.reduced_basis_size = len(reduced)
        met.d_maxGB = max((p.degree for p in reduced), default=0)
        if self.cfg.mode == "f5b":
            if met.d_B < 0:
                met.d_B = 0
            met.d_F = -1
            met.d_FR = -1
        if self.terminated:
            if met.d_F >= 0 and met.d_FR >= 0:
                assert met.d_FR <= met.d_F
            if (
                met.d_F >= 0
                and self.stop_reason == "exhausted"
                and not self.cfg.rewritten_in_critpair
                and self.cfg.mode != "naive-discard"
            ):
                # every pair counted in d_F then had its degree entered; a
                # guard stop, a creation-time rewritten kill, or a naive
                # drop can all strand a counted pair short of its batch
                assert met.d_F <= met.d_term
            assert met.d_maxGB <= met.d_term
            if (
                self.cfg.mode == "f5"
                and not self.cfg.conjecture_mode
                and met.d_maxGB > met.d_FR
            ):
                # would contradict the stopping-degree conjecture; worth a
                # loud note but never an error
                self.emit("conjecture_violation", d_maxGB=met.d_maxGB,
                          d_FR=met.d_FR)
        return RunResult(self.cfg.mode, self.ring, list(self.basis), reduced,
                         met, self.events, self.terminated, self.stop_reason)
