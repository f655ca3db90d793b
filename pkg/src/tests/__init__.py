"""Tests for the integro-differential calculator."""
