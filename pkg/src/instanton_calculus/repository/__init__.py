"""Knot database access."""
