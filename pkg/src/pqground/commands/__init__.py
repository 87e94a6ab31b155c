"""pqground CLI commands."""
