"""The eight benchmarks; look them up through benchmarks.registry."""
