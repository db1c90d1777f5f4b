"""Shared services: random streams, timers, kernel compilation, class parameters, results."""
