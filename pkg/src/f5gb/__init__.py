"""Groebner basis toolkit: signature-based engine plus a classical oracle."""

from .field import PrimeField, FieldError, DEFAULT_PRIME
from .ring import (
    ParseError,
    Poly,
    PolyRing,
    TermOrder,
    m_coprime,
    m_deg,
    m_div,
    m_divides,
    m_lcm,
    m_mul,
)
from .buchberger import buchberger, ideal_equal, is_groebner, reduced_basis
from .systems import (
    cyclic,
    eco,
    format_system,
    gen_named,
    gen_random,
    homogenize,
    dehomogenize,
    katsura,
    parse_system,
)
from .variants import (
    run,
    run_f5,
    run_f5b,
    run_f5plus,
    run_naive_discard,
    metrics_row,
    METRICS_HEADER,
)
from .f5 import F5Engine, RunMetrics, RunResult, VariantConfig

__all__ = [
    "PrimeField",
    "FieldError",
    "DEFAULT_PRIME",
    "ParseError",
    "Poly",
    "PolyRing",
    "TermOrder",
    "m_coprime",
    "m_deg",
    "m_div",
    "m_divides",
    "m_lcm",
    "m_mul",
    "buchberger",
    "ideal_equal",
    "is_groebner",
    "reduced_basis",
    "katsura",
    "cyclic",
    "eco",
    "gen_named",
    "gen_random",
    "homogenize",
    "dehomogenize",
    "parse_system",
    "format_system",
    "run",
    "run_f5",
    "run_f5plus",
    "run_f5b",
    "run_naive_discard",
    "metrics_row",
    "METRICS_HEADER",
    "F5Engine",
    "RunMetrics",
    "RunResult",
    "VariantConfig",
]
