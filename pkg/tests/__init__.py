"""Tests for twistsha."""
