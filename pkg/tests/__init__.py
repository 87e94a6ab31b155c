"""Test suite for Agency Standard Python Kit."""
