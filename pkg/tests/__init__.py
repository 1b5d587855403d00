"""Test suite for zooc."""
