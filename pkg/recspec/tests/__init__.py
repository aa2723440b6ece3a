"""Tests for recspec."""
