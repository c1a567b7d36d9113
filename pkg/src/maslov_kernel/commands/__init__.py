"""Commands module for the maslov-kernel CLI."""
