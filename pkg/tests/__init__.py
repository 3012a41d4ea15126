"""Tests for instanton-calculus."""
