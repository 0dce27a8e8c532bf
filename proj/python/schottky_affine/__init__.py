from ._core import (
    GeometryError,
    InputError,
    SchottkyGroup,
    __version__,
    audit_products,
    canonical_translations,
    demo_group,
    group_from_json,
    in_T,
    ping_pong,
    trace_point,
    word_matrix,
)

__all__ = [
    "GeometryError",
    "InputError",
    "SchottkyGroup",
    "__version__",
    "audit_products",
    "canonical_translations",
    "demo_group",
    "group_from_json",
    "in_T",
    "ping_pong",
    "trace_point",
    "word_matrix",
]
