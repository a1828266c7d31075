"""Correlation clustering with simultaneous guarantees for every monotone
symmetric norm: norm-oblivious fractional construction (exact and sampled),
per-vertex ball-carving rounding (sequential and round-synchronous), and
constant-round pre-clustering, verified against a brute-force partition
oracle at desk scale."""

__version__ = "0.1.0"
