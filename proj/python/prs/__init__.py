"""Progressive Reed-Solomon retrieval for Byzantine-tolerant storage."""

from ._prs import (
    Field,
    PrsError,
    analyze,
    avg_accesses,
    bench,
    crc32,
    encode,
    parse_shard,
    pr_Av,
    pr_Bi_given_Av,
    pr_success,
    retrieve,
    simulate,
)

__all__ = [
    "Field",
    "PrsError",
    "analyze",
    "avg_accesses",
    "bench",
    "crc32",
    "encode",
    "parse_shard",
    "pr_Av",
    "pr_Bi_given_Av",
    "pr_success",
    "retrieve",
    "simulate",
]
