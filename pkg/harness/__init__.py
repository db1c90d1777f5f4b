"""Repeated runs, timing statistics and result emission."""
