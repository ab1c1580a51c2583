"""Denominator bounds and rational solutions for linear recurrence systems."""
